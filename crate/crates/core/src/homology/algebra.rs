//! Finite-dimensional unital algebras over the Gaussian rationals.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, GaussRat};

/// Sparse product of two basis vectors: `(k, c_{ij}^k)` pairs with nonzero coefficient.
pub type BasisProduct = Vec<(usize, GaussRat)>;

/// An associative unital algebra with basis `e_0 … e_{d−1}` and structure
/// constants `e_i e_j = Σ_k c_{ij}^k e_k`, optionally with an automorphism σ
/// given by its matrix (column `j` holds `σ(e_j)`).
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteAlgebra {
    dim: usize,
    table: Vec<BasisProduct>,
    unit: Vec<GaussRat>,
    automorphism: Option<ExactMatrix>,
}

impl FiniteAlgebra {
    /// Builds and validates an algebra from `(i, j, k, c_{ij}^k)` entries. Repeated
    /// entries for the same `(i, j, k)` are summed.
    pub fn new(dim: usize, constants: &[(usize, usize, usize, GaussRat)], unit: Vec<GaussRat>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension("algebra dimension must be ≥ 1".into()));
        }
        if unit.len() != dim {
            return Err(Error::Shape(format!(
                "unit has {} coordinates, algebra dimension is {dim}",
                unit.len()
            )));
        }
        let mut dense = vec![vec![GaussRat::zero(); dim]; dim * dim];
        for (i, j, k, v) in constants {
            if *i >= dim || *j >= dim || *k >= dim {
                return Err(Error::Shape(format!(
                    "structure constant index ({i}, {j}, {k}) out of range for dimension {dim}"
                )));
            }
            dense[i * dim + j][*k] += v;
        }
        let table = dense
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        let alg = FiniteAlgebra {
            dim,
            table,
            unit,
            automorphism: None,
        };
        alg.validate()?;
        Ok(alg)
    }

    /// Attaches an automorphism after checking invertibility and multiplicativity.
    pub fn with_automorphism(mut self, sigma: ExactMatrix) -> Result<Self> {
        let d = self.dim;
        if sigma.nrows() != d || sigma.ncols() != d {
            return Err(Error::Shape(format!(
                "automorphism is {}x{}, algebra dimension is {d}",
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        if sigma.rank() != d {
            return Err(Error::Domain("automorphism is not invertible".into()));
        }
        let images: Vec<Vec<GaussRat>> = (0..d).map(|j| sigma.column(j)).collect();
        for i in 0..d {
            for j in 0..d {
                let lhs = sigma.apply(&self.product(&basis(d, i), &basis(d, j)))?;
                let rhs = self.product(&images[i], &images[j]);
                if lhs != rhs {
                    return Err(Error::Domain(format!(
                        "automorphism is not multiplicative on (e_{i}, e_{j})"
                    )));
                }
            }
        }
        self.automorphism = Some(sigma);
        Ok(self)
    }

    pub fn without_automorphism(mut self) -> Self {
        self.automorphism = None;
        self
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let left = self.product(&self.basis_product_dense(i, j), &basis(d, k));
                    let right = self.product(&basis(d, i), &self.basis_product_dense(j, k));
                    if left != right {
                        return Err(Error::Domain(format!(
                            "structure constants are not associative on (e_{i}, e_{j}, e_{k})"
                        )));
                    }
                }
            }
        }
        for i in 0..d {
            let e = basis(d, i);
            if self.product(&self.unit, &e) != e || self.product(&e, &self.unit) != e {
                return Err(Error::Domain(format!("unit law fails on e_{i}")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[GaussRat] {
        &self.unit
    }

    pub fn automorphism(&self) -> Option<&ExactMatrix> {
        self.automorphism.as_ref()
    }

    /// Nonzero terms of `e_i e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &BasisProduct {
        &self.table[i * self.dim + j]
    }

    fn basis_product_dense(&self, i: usize, j: usize) -> Vec<GaussRat> {
        let mut v = vec![GaussRat::zero(); self.dim];
        for (k, c) in self.basis_product(i, j) {
            v[*k] = c.clone();
        }
        v
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> GaussRat {
        self.basis_product(i, j)
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(GaussRat::zero)
    }

    /// Product of two elements in coordinates.
    pub fn product(&self, a: &[GaussRat], b: &[GaussRat]) -> Vec<GaussRat> {
        let d = self.dim;
        let mut out = vec![GaussRat::zero(); d];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.basis_product(i, j) {
                    out[*k] += &(&xy * c);
                }
            }
        }
        out
    }

    /// Sparse image `σ(e_j)`; the identity when no automorphism is attached.
    pub fn automorphism_image(&self, j: usize) -> BasisProduct {
        match &self.automorphism {
            Some(s) => (0..self.dim)
                .filter_map(|i| {
                    let v = s.get(i, j);
                    (!v.is_zero()).then_some((i, v))
                })
                .collect(),
            None => vec![(j, GaussRat::one())],
        }
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// The same algebra in the basis `f_j = Σ_i P_{ij} e_i`; σ is carried along.
    pub fn change_basis(&self, p: &ExactMatrix) -> Result<FiniteAlgebra> {
        let d = self.dim;
        let inv = p
            .inverse()
            .ok_or_else(|| Error::Domain("change of basis is singular".into()))?;
        let cols: Vec<Vec<GaussRat>> = (0..d).map(|j| p.column(j)).collect();
        let mut constants = Vec::new();
        for a in 0..d {
            for b in 0..d {
                let prod = inv.apply(&self.product(&cols[a], &cols[b]))?;
                for (k, v) in prod.into_iter().enumerate() {
                    if !v.is_zero() {
                        constants.push((a, b, k, v));
                    }
                }
            }
        }
        let unit = inv.apply(&self.unit)?;
        let alg = FiniteAlgebra::new(d, &constants, unit)?;
        match &self.automorphism {
            Some(s) => alg.with_automorphism(inv.mul(s)?.mul(p)?),
            None => Ok(alg),
        }
    }

    /// ℂ.
    pub fn complex() -> Self {
        FiniteAlgebra::new(1, &[(0, 0, 0, GaussRat::one())], vec![GaussRat::one()])
            .expect("valid preset")
    }

    /// ℂ² = functions on two points, basis of the two point indicators.
    pub fn c2() -> Self {
        FiniteAlgebra::new(
            2,
            &[(0, 0, 0, GaussRat::one()), (1, 1, 1, GaussRat::one())],
            vec![GaussRat::one(), GaussRat::one()],
        )
        .expect("valid preset")
    }

    /// ℂ² with the automorphism exchanging the two points.
    pub fn c2_swap() -> Self {
        let swap = ExactMatrix::from_dense(&[
            vec![GaussRat::zero(), GaussRat::one()],
            vec![GaussRat::one(), GaussRat::zero()],
        ])
        .expect("2x2");
        Self::c2().with_automorphism(swap).expect("valid preset")
    }

    /// 2×2 matrices in the matrix-unit basis `E_11, E_12, E_21, E_22`.
    pub fn m2() -> Self {
        let idx = |r: usize, c: usize| 2 * r + c;
        let mut constants = Vec::new();
        for r in 0..2 {
            for s in 0..2 {
                for t in 0..2 {
                    // E_rs E_st = E_rt
                    constants.push((idx(r, s), idx(s, t), idx(r, t), GaussRat::one()));
                }
            }
        }
        let one = GaussRat::one();
        let zero = GaussRat::zero();
        FiniteAlgebra::new(4, &constants, vec![one.clone(), zero.clone(), zero, one])
            .expect("valid preset")
    }

    /// Serializes in the algebra file format.
    pub fn to_text(&self) -> String {
        let mut out = format!("dimension {}\nunit", self.dim);
        for u in &self.unit {
            out.push(' ');
            out.push_str(&u.to_string());
        }
        out.push('\n');
        for i in 0..self.dim {
            for j in 0..self.dim {
                for (k, v) in self.basis_product(i, j) {
                    out.push_str(&format!("c {i} {j} {k} {} {}\n", fmt_part(&v.re), fmt_part(&v.im)));
                }
            }
        }
        if let Some(s) = &self.automorphism {
            out.push_str("automorphism\n");
            for i in 0..self.dim {
                let row: Vec<String> = (0..self.dim).map(|j| s.get(i, j).to_string()).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

fn fmt_part(r: &num_rational::BigRational) -> String {
    GaussRat::from(r.clone()).to_string()
}

pub(crate) fn basis(d: usize, i: usize) -> Vec<GaussRat> {
    let mut v = vec![GaussRat::zero(); d];
    v[i] = GaussRat::one();
    v
}

/// Parses the algebra file format.
///
/// ```text
/// # comment
/// dimension 2
/// unit 1 1
/// c 0 0 0 1 0        # c i j k re im  :  e_i e_j += (re + im·i) e_k
/// c 1 1 1 1 0
/// automorphism       # optional; followed by `dimension` rows of the matrix,
/// 0 1                # column j is σ(e_j)
/// 1 0
/// ```
///
/// Indices are 0-based. `re` and `im` are rationals `p` or `p/q`; entries of
/// `unit` and `automorphism` rows use the full scalar syntax (`1/2+3/4i`).
pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra> {
    let mut dim: Option<usize> = None;
    let mut unit: Option<Vec<GaussRat>> = None;
    let mut constants = Vec::new();
    let mut sigma_rows: Option<Vec<Vec<GaussRat>>> = None;
    let mut reading_sigma = false;

    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content);
        let Some((col0, head)) = tokens.first().cloned() else {
            continue;
        };
        if reading_sigma {
            let rows = sigma_rows.as_mut().expect("started");
            let d = dim.expect("dimension precedes automorphism");
            if rows.len() < d {
                if tokens.len() != d {
                    return Err(Error::parse(
                        line_no,
                        col0,
                        format!("automorphism row needs {d} entries, found {}", tokens.len()),
                    ));
                }
                let row = tokens
                    .iter()
                    .map(|(c, t)| scalar(t, line_no, *c))
                    .collect::<Result<Vec<_>>>()?;
                rows.push(row);
                if rows.len() == d {
                    reading_sigma = false;
                }
                continue;
            }
        }
        match head.as_str() {
            "dimension" => {
                if dim.is_some() {
                    return Err(Error::parse(line_no, col0, "dimension given twice"));
                }
                let (c, t) = tokens
                    .get(1)
                    .ok_or_else(|| Error::parse(line_no, col0, "missing dimension value"))?;
                let d: usize = t
                    .parse()
                    .map_err(|_| Error::parse(line_no, *c, format!("invalid dimension `{t}`")))?;
                if d == 0 {
                    return Err(Error::parse(line_no, *c, "dimension must be ≥ 1"));
                }
                dim = Some(d);
            }
            "unit" => {
                let d = dim.ok_or_else(|| Error::parse(line_no, col0, "unit before dimension"))?;
                if tokens.len() != d + 1 {
                    return Err(Error::parse(
                        line_no,
                        col0,
                        format!("unit needs {d} entries, found {}", tokens.len() - 1),
                    ));
                }
                unit = Some(
                    tokens[1..]
                        .iter()
                        .map(|(c, t)| scalar(t, line_no, *c))
                        .collect::<Result<_>>()?,
                );
            }
            "c" => {
                let d = dim.ok_or_else(|| Error::parse(line_no, col0, "constant before dimension"))?;
                if tokens.len() != 6 {
                    return Err(Error::parse(
                        line_no,
                        col0,
                        "structure constant line must read `c i j k re im`",
                    ));
                }
                let mut idx = [0usize; 3];
                for (slot, (c, t)) in idx.iter_mut().zip(&tokens[1..4]) {
                    *slot = t
                        .parse()
                        .map_err(|_| Error::parse(line_no, *c, format!("invalid index `{t}`")))?;
                    if *slot >= d {
                        return Err(Error::parse(line_no, *c, format!("index {t} ≥ dimension {d}")));
                    }
                }
                let re = real(&tokens[4].1, line_no, tokens[4].0)?;
                let im = real(&tokens[5].1, line_no, tokens[5].0)?;
                constants.push((idx[0], idx[1], idx[2], &re + &(&im * &GaussRat::i())));
            }
            "automorphism" => {
                if dim.is_none() {
                    return Err(Error::parse(line_no, col0, "automorphism before dimension"));
                }
                if sigma_rows.is_some() {
                    return Err(Error::parse(line_no, col0, "automorphism given twice"));
                }
                sigma_rows = Some(Vec::new());
                reading_sigma = true;
            }
            other => {
                return Err(Error::parse(line_no, col0, format!("unknown keyword `{other}`")));
            }
        }
    }
    let last = text.lines().count().max(1);
    let d = dim.ok_or_else(|| Error::parse(last, 1, "missing `dimension`"))?;
    let unit = unit.ok_or_else(|| Error::parse(last, 1, "missing `unit`"))?;
    if reading_sigma {
        return Err(Error::parse(last, 1, "automorphism matrix is incomplete"));
    }
    let alg = FiniteAlgebra::new(d, &constants, unit)?;
    match sigma_rows {
        Some(rows) => alg.with_automorphism(ExactMatrix::from_dense(&rows)?),
        None => Ok(alg),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokenize(line: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, line[s..i].to_string()));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, line[s..].to_string()));
    }
    out.into_iter()
        .map(|(s, t)| (line[..s].chars().count() + 1, t))
        .collect()
}

fn scalar(text: &str, line: usize, column: usize) -> Result<GaussRat> {
    text.parse()
        .map_err(|_| Error::parse(line, column, format!("malformed scalar `{text}`")))
}

fn real(text: &str, line: usize, column: usize) -> Result<GaussRat> {
    let v = scalar(text, line, column)?;
    if !v.is_real() {
        return Err(Error::parse(line, column, format!("expected a rational, found `{text}`")));
    }
    Ok(v)
}
