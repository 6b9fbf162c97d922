//! Clifford algebras over diagonal forms, spin representations and the symbol
//! of the flat Dirac operator.
//!
//! Basis monomials `e_{i_1} ⋯ e_{i_k}` with `i_1 < ⋯ < i_k` are encoded as
//! bitmasks (bit `i` for generator `e_{i+1}`). Generators satisfy
//! `e_i² = −B(e_i, e_i)` and anticommute pairwise. Everything here is exact.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{check_size, Error, Result};
use crate::exact::{ExactMatrix, GaussRat};

pub const MAX_GENERATORS: usize = 12;
pub const MAX_SPIN_LEVEL: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct CliffordAlgebra {
    n: usize,
    form: Vec<GaussRat>,
    // weights[m] = Π_{i ∈ m} (−B_ii): the scalar left when a monomial meets itself.
    weights: Vec<GaussRat>,
    // Bit `a·2^n + b` is set when reordering `e_a e_b` needs an odd number of swaps.
    signs: Vec<u64>,
}

fn reorder_parity(a: usize, b: usize) -> bool {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    swaps % 2 == 1
}

/// Builds `Cl(ℂⁿ, B)` for the diagonal form `B(e_i, e_i) = form[i]`.
pub fn clifford(n: usize, form: &[GaussRat]) -> Result<CliffordAlgebra> {
    if form.len() != n {
        return Err(Error::Shape(format!("{n} generators but {} form coefficients", form.len())));
    }
    check_size("Clifford generators", n as u128, MAX_GENERATORS as u128)?;
    let dim = 1usize << n;
    let weights = (0..dim)
        .map(|m| {
            (0..n)
                .filter(|i| m >> i & 1 == 1)
                .fold(GaussRat::one(), |acc, i| acc * -&form[i])
        })
        .collect();
    let mut signs = vec![0u64; (dim * dim).div_ceil(64)];
    for a in 0..dim {
        for b in 0..dim {
            if reorder_parity(a, b) {
                let bit = a * dim + b;
                signs[bit / 64] |= 1 << (bit % 64);
            }
        }
    }
    Ok(CliffordAlgebra {
        n,
        form: form.to_vec(),
        weights,
        signs,
    })
}

impl CliffordAlgebra {
    /// The Euclidean case `B(e_i, e_j) = δ_ij`.
    pub fn euclidean(n: usize) -> Result<Self> {
        clifford(n, &vec![GaussRat::one(); n])
    }

    pub fn generators(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn form(&self) -> &[GaussRat] {
        &self.form
    }

    /// `e_a e_b = coefficient · e_{a xor b}`.
    pub fn basis_product(&self, a: usize, b: usize) -> (usize, GaussRat) {
        let bit = a * self.dim() + b;
        let odd = self.signs[bit / 64] >> (bit % 64) & 1 == 1;
        let w = self.weights[a & b].clone();
        (a ^ b, if odd { -w } else { w })
    }

    fn check(&self, x: &[GaussRat]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Shape(format!("element of length {} in a {}-dimensional algebra", x.len(), self.dim())));
        }
        Ok(())
    }

    pub fn zero(&self) -> Vec<GaussRat> {
        vec![GaussRat::zero(); self.dim()]
    }

    pub fn monomial(&self, mask: usize) -> Result<Vec<GaussRat>> {
        if mask >= self.dim() {
            return Err(Error::InvalidDimension(format!("monomial {mask:#b} needs more than {} generators", self.n)));
        }
        let mut x = self.zero();
        x[mask] = GaussRat::one();
        Ok(x)
    }

    pub fn unit(&self) -> Vec<GaussRat> {
        self.monomial(0).expect("mask 0 always exists")
    }

    /// The generator `e_{i+1}`.
    pub fn generator(&self, i: usize) -> Result<Vec<GaussRat>> {
        if i >= self.n {
            return Err(Error::InvalidDimension(format!("generator {} of {}", i + 1, self.n)));
        }
        self.monomial(1 << i)
    }

    pub fn mul(&self, x: &[GaussRat], y: &[GaussRat]) -> Result<Vec<GaussRat>> {
        self.check(x)?;
        self.check(y)?;
        let mut out = self.zero();
        for (a, xa) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let (m, c) = self.basis_product(a, b);
                out[m] += &(&c * &(xa * yb));
            }
        }
        Ok(out)
    }

    /// `e1e3`-style name of a monomial, `1` for the empty one.
    pub fn label(&self, mask: usize) -> String {
        if mask == 0 {
            return "1".into();
        }
        (0..self.n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| format!("e{}", i + 1))
            .collect()
    }

    /// The grading automorphism χ as a diagonal matrix on the monomial basis.
    pub fn grading(&self) -> ExactMatrix {
        let mut chi = ExactMatrix::zeros(self.dim(), self.dim());
        for m in 0..self.dim() {
            let s = if m.count_ones() % 2 == 0 { 1 } else { -1 };
            chi.set(m, m, GaussRat::from_int(s));
        }
        chi
    }

    pub fn apply_grading(&self, x: &[GaussRat]) -> Result<Vec<GaussRat>> {
        self.check(x)?;
        Ok(x.iter()
            .enumerate()
            .map(|(m, v)| if m.count_ones() % 2 == 0 { v.clone() } else { -v })
            .collect())
    }

    /// Dimensions of the `+1` and `−1` eigenspaces of χ, read off its matrix.
    pub fn graded_dims(&self) -> (usize, usize) {
        let chi = self.grading();
        let one = GaussRat::one();
        let even = (0..self.dim()).filter(|&m| chi.get(m, m) == one).count();
        (even, self.dim() - even)
    }
}

/// The Pauli matrices σ₁, σ₂, σ₃.
pub fn pauli() -> [ExactMatrix; 3] {
    let z = GaussRat::zero;
    let o = GaussRat::one;
    let i = GaussRat::i;
    let m = |rows: [[GaussRat; 2]; 2]| {
        ExactMatrix::from_dense(&rows.map(|r| r.to_vec())).expect("2×2")
    };
    [
        m([[z(), o()], [o(), z()]]),
        m([[z(), -i()], [i(), z()]]),
        m([[o(), z()], [z(), -o()]]),
    ]
}

/// Dirac's matrices `A₀ = diag(1₂, −1₂)` and `A_i = [[0, σ_i], [−σ_i, 0]]`.
pub fn dirac_matrices() -> [ExactMatrix; 4] {
    let s = pauli();
    let e11 = ExactMatrix::from_dense(&[
        vec![GaussRat::one(), GaussRat::zero()],
        vec![GaussRat::zero(), GaussRat::zero()],
    ])
    .expect("2×2");
    let e22 = ExactMatrix::identity(2).sub(&e11).expect("2×2");
    let e12 = ExactMatrix::from_dense(&[
        vec![GaussRat::zero(), GaussRat::one()],
        vec![GaussRat::zero(), GaussRat::zero()],
    ])
    .expect("2×2");
    let e21 = e12.transpose();
    let block = |m: &ExactMatrix| {
        e12.kron(m)
            .sub(&e21.kron(m))
            .expect("4×4")
    };
    [
        e11.kron(&ExactMatrix::identity(2)).sub(&e22.kron(&ExactMatrix::identity(2))).expect("4×4"),
        block(&s[0]),
        block(&s[1]),
        block(&s[2]),
    ]
}

/// Generators `c(e_1) … c(e_{2k})` of the spin representation
/// `Cl(ℂ^{2k}) ≅ M_{2^k}(ℂ)`, built from Jordan–Wigner strings
/// `σ₃^{⊗j} ⊗ σ_{1,2} ⊗ 1^{⊗(k−j−1)}` multiplied by `i`.
///
/// The Clifford relations and the linear independence of all `4^k` monomial
/// images are checked before returning.
pub fn spin_representation(k: usize) -> Result<Vec<ExactMatrix>> {
    if k == 0 {
        return Err(Error::InvalidDimension("spin representation needs k ≥ 1".into()));
    }
    check_size("spin representation level", k as u128, MAX_SPIN_LEVEL as u128)?;
    let [s1, s2, s3] = pauli();
    let string = |j: usize, middle: &ExactMatrix| {
        let mut m = ExactMatrix::identity(1);
        for _ in 0..j {
            m = m.kron(&s3);
        }
        m.kron(middle)
            .kron(&ExactMatrix::identity(1 << (k - j - 1)))
            .scale(&GaussRat::i())
    };
    let gens: Vec<ExactMatrix> = (0..k)
        .flat_map(|j| [string(j, &s1), string(j, &s2)])
        .collect();
    if let Some((a, b)) = clifford_relations(&gens)? {
        return Err(Error::Internal(format!("spin generators {a}, {b} violate the Clifford relations")));
    }
    let rank = monomial_rank(&gens)?;
    if rank != 1 << (2 * k) {
        return Err(Error::Internal(format!("monomial images have rank {rank}, expected {}", 1 << (2 * k))));
    }
    Ok(gens)
}

/// The spin representation of `Cl(ℂⁿ)`; only even `n` is supported.
pub fn spin_representation_for(n: usize) -> Result<Vec<ExactMatrix>> {
    if n % 2 == 1 {
        return Err(Error::Unsupported(format!(
            "Cl(C^{n}) has odd rank; only the even case Cl(C^2k) = M_2^k(C) is implemented"
        )));
    }
    spin_representation(n / 2)
}

fn check_square_family(rep: &[ExactMatrix]) -> Result<usize> {
    let size = rep.first().map_or(0, ExactMatrix::nrows);
    for (i, m) in rep.iter().enumerate() {
        if m.nrows() != size || m.ncols() != size {
            return Err(Error::Shape(format!(
                "matrix {} is {}×{}, expected {size}×{size}",
                i + 1,
                m.nrows(),
                m.ncols()
            )));
        }
    }
    Ok(size)
}

/// First pair `(i, j)`, `i ≤ j`, for which `c_i c_j + c_j c_i ≠ −2δ_ij`.
pub fn clifford_relations(rep: &[ExactMatrix]) -> Result<Option<(usize, usize)>> {
    let size = check_square_family(rep)?;
    let minus_two = ExactMatrix::identity(size).scale(&GaussRat::from_int(-2));
    let zero = ExactMatrix::zeros(size, size);
    for i in 0..rep.len() {
        for j in i..rep.len() {
            let anti = rep[i].mul(&rep[j])?.add(&rep[j].mul(&rep[i])?)?;
            if anti != if i == j { minus_two.clone() } else { zero.clone() } {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// Images `c_{i_1} ⋯ c_{i_k}` of every monomial, indexed by bitmask.
pub fn monomial_images(rep: &[ExactMatrix]) -> Result<Vec<ExactMatrix>> {
    let size = check_square_family(rep)?;
    check_size("monomial images", 1u128 << rep.len().min(127), 1 << (2 * MAX_SPIN_LEVEL))?;
    let mut images = vec![ExactMatrix::identity(size)];
    for mask in 1usize..1 << rep.len() {
        let top = usize::BITS - 1 - mask.leading_zeros();
        let prev = &images[mask ^ (1 << top)];
        images.push(prev.mul(&rep[top as usize])?);
    }
    Ok(images)
}

/// Exact rank of the span of all monomial images.
///
/// Images whose supports never overlap span a direct sum, so the rank is
/// computed per connected component of the support-overlap relation.
pub fn monomial_rank(rep: &[ExactMatrix]) -> Result<usize> {
    let images = monomial_images(rep)?;
    let size = check_square_family(rep)?;
    let mut parent: Vec<usize> = (0..images.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (m, img) in images.iter().enumerate() {
        for r in 0..size {
            for &c in img.row(r).keys() {
                if let Some(&o) = owner.get(&(r, c)) {
                    let (a, b) = (find(&mut parent, o), find(&mut parent, m));
                    parent[a] = b;
                } else {
                    owner.insert((r, c), m);
                }
            }
        }
    }
    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for m in 0..images.len() {
        let root = find(&mut parent, m);
        components.entry(root).or_default().push(m);
    }
    let mut rank = 0;
    for members in components.values() {
        let mut cells: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for &m in members {
            for r in 0..size {
                for &c in images[m].row(r).keys() {
                    let next = cells.len();
                    cells.entry((r, c)).or_insert(next);
                }
            }
        }
        let mut block = ExactMatrix::zeros(members.len(), cells.len());
        for (row, &m) in members.iter().enumerate() {
            for r in 0..size {
                for (c, v) in images[m].row(r) {
                    block.set(row, cells[&(r, *c)], v.clone());
                }
            }
        }
        rank += block.rank();
    }
    Ok(rank)
}

/// Polynomial in commuting symbols `∂_1 … ∂_n` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, GaussRat>,
}

impl SymbolPoly {
    pub fn zero(vars: usize) -> Self {
        SymbolPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: GaussRat) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars], c);
        p
    }

    /// `c · ∂_{i+1}`.
    pub fn symbol(vars: usize, i: usize, c: GaussRat) -> Result<Self> {
        if i >= vars {
            return Err(Error::InvalidDimension(format!("symbol {} of {vars}", i + 1)));
        }
        let mut exp = vec![0; vars];
        exp[i] = 1;
        let mut p = Self::zero(vars);
        p.add_term(exp, c);
        Ok(p)
    }

    fn add_term(&mut self, exp: Vec<u32>, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(GaussRat::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &GaussRat)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exp: &[u32]) -> GaussRat {
        self.terms.get(exp).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn add(&self, rhs: &SymbolPoly) -> SymbolPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &SymbolPoly) -> SymbolPoly {
        let mut out = Self::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, s: &GaussRat) -> SymbolPoly {
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }
}

impl fmt::Display for SymbolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (exp, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_real() && c.re.is_negative();
            let c = if negative { -c } else { c.clone() };
            match (k > 0, negative) {
                (true, true) => write!(f, " - ")?,
                (true, false) => write!(f, " + ")?,
                (false, true) => write!(f, "-")?,
                (false, false) => {}
            }
            let mono: String = exp
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { format!("∂{}", i + 1) } else { format!("∂{}^{p}", i + 1) })
                .collect();
            match (mono.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "({c}){mono}")?,
            }
        }
        Ok(())
    }
}

/// Square matrix of symbol polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolOperator {
    size: usize,
    vars: usize,
    entries: Vec<SymbolPoly>,
}

impl SymbolOperator {
    pub fn zeros(size: usize, vars: usize) -> Self {
        SymbolOperator {
            size,
            vars,
            entries: vec![SymbolPoly::zero(vars); size * size],
        }
    }

    pub fn from_entries(rows: Vec<Vec<SymbolPoly>>) -> Result<Self> {
        let size = rows.len();
        let vars = rows.first().and_then(|r| r.first()).map_or(0, SymbolPoly::vars);
        let mut entries = Vec::with_capacity(size * size);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != size {
                return Err(Error::Shape(format!("row {} has {} entries, expected {size}", i + 1, row.len())));
            }
            for p in row {
                if p.vars != vars {
                    return Err(Error::Shape(format!("entry in {} symbols, expected {vars}", p.vars)));
                }
                entries.push(p);
            }
        }
        Ok(SymbolOperator { size, vars, entries })
    }

    /// `Σ_i c_i ∂_i` for a family of equal-sized square matrices.
    pub fn linear(coefficients: &[ExactMatrix]) -> Result<Self> {
        let size = check_square_family(coefficients)?;
        let vars = coefficients.len();
        let mut out = Self::zeros(size, vars);
        for (k, c) in coefficients.iter().enumerate() {
            for r in 0..size {
                for (&col, v) in c.row(r) {
                    let term = SymbolPoly::symbol(vars, k, v.clone())?;
                    out.entries[r * size + col] = out.entries[r * size + col].add(&term);
                }
            }
        }
        Ok(out)
    }

    /// `p · 1` for a scalar symbol `p`.
    pub fn scalar(size: usize, p: &SymbolPoly) -> Self {
        let mut out = Self::zeros(size, p.vars);
        for i in 0..size {
            out.entries[i * size + i] = p.clone();
        }
        out
    }

    /// `−(∂_1² + ⋯ + ∂_n²) · 1`.
    pub fn negative_laplacian(size: usize, vars: usize) -> Self {
        let mut p = SymbolPoly::zero(vars);
        for i in 0..vars {
            let mut e = vec![0; vars];
            e[i] = 2;
            p.add_term(e, -GaussRat::one());
        }
        Self::scalar(size, &p)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn get(&self, i: usize, j: usize) -> &SymbolPoly {
        &self.entries[i * self.size + j]
    }

    pub fn mul(&self, rhs: &SymbolOperator) -> Result<Self> {
        if self.size != rhs.size || self.vars != rhs.vars {
            return Err(Error::Shape(format!(
                "{}×{} in {} symbols times {}×{} in {} symbols",
                self.size, self.size, self.vars, rhs.size, rhs.size, rhs.vars
            )));
        }
        let n = self.size;
        let mut out = Self::zeros(n, self.vars);
        for i in 0..n {
            for j in 0..n {
                let mut acc = SymbolPoly::zero(self.vars);
                for k in 0..n {
                    acc = acc.add(&self.get(i, k).mul(rhs.get(k, j)));
                }
                out.entries[i * n + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn square(&self) -> Self {
        self.mul(self).expect("same shape")
    }

    /// Recovers `c_i` from an operator of the form `Σ c_i ∂_i`.
    pub fn linear_coefficients(&self) -> Result<Vec<ExactMatrix>> {
        let mut out = vec![ExactMatrix::zeros(self.size, self.size); self.vars];
        for (idx, p) in self.entries.iter().enumerate() {
            for (exp, c) in p.terms() {
                let Some(k) = exp.iter().position(|&e| e == 1).filter(|_| exp.iter().sum::<u32>() == 1) else {
                    return Err(Error::Domain(format!("entry {p} is not homogeneous linear")));
                };
                out[k].set(idx / self.size, idx % self.size, c.clone());
            }
        }
        Ok(out)
    }
}

impl fmt::Display for SymbolOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.size {
            let row: Vec<String> = (0..self.size).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `D = Σ c(e_i) ∂_i` without any check on the matrices.
pub fn dirac_operator(rep: &[ExactMatrix]) -> Result<SymbolOperator> {
    SymbolOperator::linear(rep)
}

/// Returns `(D, D²)` after confirming the Clifford relations, and checks
/// `D² = −(Σ ∂_i²) · 1` exactly.
pub fn dirac_square(rep: &[ExactMatrix]) -> Result<(SymbolOperator, SymbolOperator)> {
    if let Some((first, second)) = clifford_relations(rep)? {
        return Err(Error::RelationViolation { first, second });
    }
    let d = dirac_operator(rep)?;
    let d2 = d.square();
    if d2 != SymbolOperator::negative_laplacian(d.size(), d.vars()) {
        return Err(Error::Internal("D² differs from the Laplacian although the relations hold".into()));
    }
    Ok((d, d2))
}

/// The two 2×2 operators on ℝ²: `[[0, i∂₁+∂₂], [i∂₁−∂₂, 0]]` and
/// `i[[∂₂, ∂₁], [∂₁, −∂₂]]`.
pub fn planar_dirac_examples() -> [SymbolOperator; 2] {
    let s = |i: usize, c: GaussRat| SymbolPoly::symbol(2, i, c).expect("two symbols");
    let i = GaussRat::i;
    let one = GaussRat::one;
    let zero = SymbolPoly::zero(2);
    let first = SymbolOperator::from_entries(vec![
        vec![zero.clone(), s(0, i()).add(&s(1, one()))],
        vec![s(0, i()).add(&s(1, -one())), zero],
    ])
    .expect("2×2");
    let second = SymbolOperator::from_entries(vec![
        vec![s(1, i()), s(0, i())],
        vec![s(0, i()), s(1, -i())],
    ])
    .expect("2×2");
    [first, second]
}
