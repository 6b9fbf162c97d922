//! Hochschild, cyclic, and twisted (co)homology of finite-dimensional algebras.
//!
//! Chains of degree `n` live in `A^{⊗(n+1)}` with the row-major tensor basis:
//! the basis tensor `e_{i_0} ⊗ … ⊗ e_{i_n}` has index `Σ_k i_k d^{n−k}`, so the
//! first slot is the most significant digit. Every operator is an exact matrix
//! over the Gaussian rationals and every dimension is an exact rank.
//!
//! Quotient complexes `C_n / im R_n` are handled without choosing complements:
//! `dim Q_n = dim C_n − rank R_n` and the induced boundary has rank
//! `rank[∂_n | R_{n−1}] − rank R_{n−1}`. Subcomplexes of cochains are the
//! annihilators `ker R_nᵀ`.

mod algebra;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;

pub use algebra::{parse_algebra, BasisProduct, FiniteAlgebra};

use crate::error::{check_size, Error, Result};
use crate::exact::{span_rank, ExactMatrix, GaussRat};

/// Largest chain-space dimension `d^{n+1}` any operator may touch.
pub const MAX_CHAIN_DIM: u128 = 1_000_000;

/// A linear map between chain spaces in the tensor basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainMap {
    /// Degree of the source space `A^{⊗(degree+1)}`.
    pub degree: usize,
    pub matrix: ExactMatrix,
}

impl ChainMap {
    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }
}

/// Dimension of `A^{⊗(n+1)}`, guarded by [`MAX_CHAIN_DIM`].
pub fn chain_dim(alg: &FiniteAlgebra, n: usize) -> Result<usize> {
    let size = (alg.dim() as u128)
        .checked_pow(n as u32 + 1)
        .unwrap_or(u128::MAX);
    check_size(&format!("chain space of degree {n}"), size, MAX_CHAIN_DIM)?;
    Ok(size as usize)
}

fn digits(mut idx: usize, d: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = idx % d;
        idx /= d;
    }
    out
}

fn index(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

type SparseCol = BTreeMap<usize, GaussRat>;

fn push(col: &mut SparseCol, row: usize, v: GaussRat) {
    if v.is_zero() {
        return;
    }
    let remove = match col.get_mut(&row) {
        Some(e) => {
            *e += &v;
            e.is_zero()
        }
        None => {
            col.insert(row, v);
            false
        }
    };
    if remove {
        col.remove(&row);
    }
}

/// Builds a `rows × cols` matrix column by column, columns computed in parallel.
fn assemble<F>(rows: usize, cols: usize, column: F) -> ExactMatrix
where
    F: Fn(usize) -> SparseCol + Sync + Send,
{
    let built: Vec<SparseCol> = (0..cols).into_par_iter().map(&column).collect();
    let mut m = ExactMatrix::zeros(rows, cols);
    for (j, col) in built.into_iter().enumerate() {
        for (i, v) in col {
            m.set(i, j, v);
        }
    }
    m
}

/// Adds `sign · d_j(t)` where `d_j` multiplies slots `j` and `j+1` (`j < n`).
fn inner_face(alg: &FiniteAlgebra, t: &[usize], j: usize, sign: &GaussRat, col: &mut SparseCol) {
    let d = alg.dim();
    for (k, c) in alg.basis_product(t[j], t[j + 1]) {
        let mut out = Vec::with_capacity(t.len() - 1);
        out.extend_from_slice(&t[..j]);
        out.push(*k);
        out.extend_from_slice(&t[j + 2..]);
        push(col, index(&out, d), sign * c);
    }
}

/// Adds `sign · (σ(a_n) a_0 ⊗ a_1 ⊗ … ⊗ a_{n−1})`, with σ the identity when `twisted` is false.
fn wrap_face(alg: &FiniteAlgebra, t: &[usize], twisted: bool, sign: &GaussRat, col: &mut SparseCol) {
    let d = alg.dim();
    let n = t.len() - 1;
    let images = if twisted {
        alg.automorphism_image(t[n])
    } else {
        vec![(t[n], GaussRat::one())]
    };
    for (m, s) in images {
        let scaled = sign * &s;
        for (k, c) in alg.basis_product(m, t[0]) {
            let mut out = Vec::with_capacity(n);
            out.push(*k);
            out.extend_from_slice(&t[1..n]);
            push(col, index(&out, d), &scaled * c);
        }
    }
}

fn alternating(j: usize) -> GaussRat {
    if j % 2 == 0 {
        GaussRat::one()
    } else {
        -GaussRat::one()
    }
}

fn boundary_matrix(alg: &FiniteAlgebra, n: usize, wrap: Option<bool>) -> Result<ChainMap> {
    if n == 0 {
        return Err(Error::Precondition("boundary maps start in degree 1".into()));
    }
    let d = alg.dim();
    let cols = chain_dim(alg, n)?;
    let rows = chain_dim(alg, n - 1)?;
    let matrix = assemble(rows, cols, |idx| {
        let t = digits(idx, d, n + 1);
        let mut col = SparseCol::new();
        for j in 0..n {
            inner_face(alg, &t, j, &alternating(j), &mut col);
        }
        if let Some(twisted) = wrap {
            wrap_face(alg, &t, twisted, &alternating(n), &mut col);
        }
        col
    });
    Ok(ChainMap { degree: n, matrix })
}

fn require_automorphism(alg: &FiniteAlgebra) -> Result<()> {
    alg.automorphism().map(|_| ()).ok_or(Error::MissingAutomorphism)
}

/// Hochschild boundary `b: A^{⊗(n+1)} → A^{⊗n}`, `n ≥ 1`.
pub fn hochschild_boundary(alg: &FiniteAlgebra, n: usize) -> Result<ChainMap> {
    boundary_matrix(alg, n, Some(false))
}

/// Twisted boundary `b_σ`: as `b` but with wrap-around term `(−1)^n σ(a_n)a_0 ⊗ a_1 ⊗ …`.
/// It is the transpose of the twisted Hochschild coboundary.
pub fn twisted_boundary(alg: &FiniteAlgebra, n: usize) -> Result<ChainMap> {
    require_automorphism(alg)?;
    boundary_matrix(alg, n, Some(true))
}

/// Bar boundary `b′ = Σ_{j<n} (−1)^j d_j`.
pub fn bar_boundary(alg: &FiniteAlgebra, n: usize) -> Result<ChainMap> {
    boundary_matrix(alg, n, None)
}

/// `s(a_0 ⊗ … ⊗ a_n) = 1 ⊗ a_0 ⊗ … ⊗ a_n`, a map `A^{⊗(n+1)} → A^{⊗(n+2)}`.
pub fn contracting_homotopy(alg: &FiniteAlgebra, n: usize) -> Result<ChainMap> {
    let cols = chain_dim(alg, n)?;
    let rows = chain_dim(alg, n + 1)?;
    let unit: Vec<(usize, GaussRat)> = alg
        .unit()
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, v)| (k, v.clone()))
        .collect();
    let matrix = assemble(rows, cols, |idx| {
        let mut col = SparseCol::new();
        for (k, u) in &unit {
            push(&mut col, k * cols + idx, u.clone());
        }
        col
    });
    Ok(ChainMap { degree: n, matrix })
}

/// Cyclic operator `λ(a_0 ⊗ … ⊗ a_n) = (−1)^n a_n ⊗ a_0 ⊗ … ⊗ a_{n−1}`, or with
/// `twisted` its twisted form `(−1)^n σ(a_n) ⊗ a_0 ⊗ … ⊗ a_{n−1}` (the transpose
/// of the twisted permutation operator on cochains).
pub fn cyclic_operator(alg: &FiniteAlgebra, n: usize, twisted: bool) -> Result<ChainMap> {
    if twisted {
        require_automorphism(alg)?;
    }
    let d = alg.dim();
    let size = chain_dim(alg, n)?;
    let sign = alternating(n);
    let matrix = assemble(size, size, |idx| {
        let t = digits(idx, d, n + 1);
        let images = if twisted {
            alg.automorphism_image(t[n])
        } else {
            vec![(t[n], GaussRat::one())]
        };
        let mut col = SparseCol::new();
        for (m, s) in images {
            let mut out = Vec::with_capacity(n + 1);
            out.push(m);
            out.extend_from_slice(&t[..n]);
            push(&mut col, index(&out, d), &sign * &s);
        }
        col
    });
    Ok(ChainMap { degree: n, matrix })
}

/// Diagonal action `σ^{⊗(n+1)}` on `A^{⊗(n+1)}`.
pub fn automorphism_action(alg: &FiniteAlgebra, n: usize) -> Result<ChainMap> {
    require_automorphism(alg)?;
    let d = alg.dim();
    let size = chain_dim(alg, n)?;
    let images: Vec<BasisProduct> = (0..d).map(|j| alg.automorphism_image(j)).collect();
    let matrix = assemble(size, size, |idx| {
        let t = digits(idx, d, n + 1);
        let mut terms: Vec<(usize, GaussRat)> = vec![(0, GaussRat::one())];
        for &slot in &t {
            let mut next = Vec::with_capacity(terms.len() * images[slot].len());
            for (i, c) in &terms {
                for (m, s) in &images[slot] {
                    next.push((i * d + m, c * s));
                }
            }
            terms = next;
        }
        let mut col = SparseCol::new();
        for (i, c) in terms {
            push(&mut col, i, c);
        }
        col
    });
    Ok(ChainMap { degree: n, matrix })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Hochschild,
    Cyclic,
    TwistedHochschild,
    TwistedCyclic,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Hochschild,
        Variant::Cyclic,
        Variant::TwistedHochschild,
        Variant::TwistedCyclic,
    ];

    pub fn is_twisted(self) -> bool {
        matches!(self, Variant::TwistedHochschild | Variant::TwistedCyclic)
    }

    /// The variant with σ forgotten.
    pub fn untwisted(self) -> Variant {
        match self {
            Variant::TwistedHochschild => Variant::Hochschild,
            Variant::TwistedCyclic => Variant::Cyclic,
            v => v,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Hochschild => "hochschild",
            Variant::Cyclic => "cyclic",
            Variant::TwistedHochschild => "twisted-hochschild",
            Variant::TwistedCyclic => "twisted-cyclic",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.to_string() == s)
            .ok_or_else(|| {
                Error::Domain(format!(
                    "unknown variant `{s}` (expected hochschild, cyclic, twisted-hochschild or twisted-cyclic)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Homology,
    Cohomology,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Homology => "homology",
            Side::Cohomology => "cohomology",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "homology" => Ok(Side::Homology),
            "cohomology" => Ok(Side::Cohomology),
            _ => Err(Error::Domain(format!(
                "unknown side `{s}` (expected homology or cohomology)"
            ))),
        }
    }
}

/// Boundary used by a variant on a side.
///
/// Twisted Hochschild homology is the ordinary boundary `b` on the quotient by
/// `im(1 − σ^{⊗(n+1)})`; twisted Hochschild cohomology is `b_σ` on σ-invariant
/// cochains. The twisted cyclic complexes use `b_σ` and `λ_σ` on both sides.
fn boundary_for(alg: &FiniteAlgebra, n: usize, variant: Variant, side: Side) -> Result<ExactMatrix> {
    let twisted = match variant {
        Variant::Hochschild | Variant::Cyclic => false,
        Variant::TwistedHochschild => side == Side::Cohomology,
        Variant::TwistedCyclic => true,
    };
    let m = if twisted {
        twisted_boundary(alg, n)?
    } else {
        hochschild_boundary(alg, n)?
    };
    Ok(m.matrix)
}

/// The relation `R_n` whose image is divided out (chains) or annihilated (cochains).
fn relation_for(alg: &FiniteAlgebra, n: usize, variant: Variant) -> Result<Option<ExactMatrix>> {
    let size = chain_dim(alg, n)?;
    let op = match variant {
        Variant::Hochschild => return Ok(None),
        Variant::Cyclic => cyclic_operator(alg, n, false)?,
        Variant::TwistedHochschild => automorphism_action(alg, n)?,
        Variant::TwistedCyclic => cyclic_operator(alg, n, true)?,
    };
    Ok(Some(ExactMatrix::identity(size).sub(&op.matrix)?))
}

struct Degree {
    dim: usize,
    boundary: Option<ExactMatrix>,
    relation: Option<ExactMatrix>,
}

/// Dimensions of degrees `0..=max_degree` of the chosen (co)homology.
///
/// Degree `N` needs the boundary out of degree `N+1`, so the size guard applies
/// to `d^{N+2}`.
pub fn homology_dims(alg: &FiniteAlgebra, max_degree: usize, variant: Variant, side: Side) -> Result<Vec<usize>> {
    if variant.is_twisted() {
        require_automorphism(alg)?;
    }
    chain_dim(alg, max_degree + 1)?;
    let degrees: Vec<Degree> = (0..=max_degree + 1)
        .into_par_iter()
        .map(|n| {
            Ok(Degree {
                dim: chain_dim(alg, n)?,
                boundary: if n == 0 {
                    None
                } else {
                    Some(boundary_for(alg, n, variant, side)?)
                },
                relation: relation_for(alg, n, variant)?,
            })
        })
        .collect::<Result<_>>()?;

    if variant == Variant::TwistedCyclic {
        check_relation_preserved(&degrees)?;
    }

    match side {
        Side::Homology => Ok(quotient_homology(&degrees, max_degree)),
        Side::Cohomology => Ok(subcomplex_cohomology(&degrees, max_degree)),
    }
}

/// Verifies `∂_n(im R_n) ⊆ im R_{n−1}` so that the quotient complex is well defined.
fn check_relation_preserved(degrees: &[Degree]) -> Result<()> {
    for n in 1..degrees.len() {
        let (Some(b), Some(r), Some(r_prev)) =
            (&degrees[n].boundary, &degrees[n].relation, &degrees[n - 1].relation)
        else {
            continue;
        };
        let image = b.mul(r)?;
        if r_prev.hstack(&image)?.rank() != r_prev.rank() {
            return Err(Error::Internal(format!(
                "boundary of degree {n} does not preserve the cyclic relations"
            )));
        }
    }
    Ok(())
}

fn quotient_homology(degrees: &[Degree], max_degree: usize) -> Vec<usize> {
    let rel_rank: Vec<usize> = degrees
        .par_iter()
        .map(|g| g.relation.as_ref().map_or(0, ExactMatrix::rank))
        .collect();
    // Rank of the induced boundary out of degree n.
    let boundary_rank: Vec<usize> = (0..degrees.len())
        .into_par_iter()
        .map(|n| match &degrees[n].boundary {
            None => 0,
            Some(b) => match &degrees[n - 1].relation {
                None => b.rank(),
                Some(r) => b.hstack(r).expect("matching rows").rank() - rel_rank[n - 1],
            },
        })
        .collect();
    (0..=max_degree)
        .map(|n| degrees[n].dim - rel_rank[n] - boundary_rank[n] - boundary_rank[n + 1])
        .collect()
}

fn subcomplex_cohomology(degrees: &[Degree], max_degree: usize) -> Vec<usize> {
    // Annihilator of im R_n, as columns; `None` means the whole cochain space.
    let cochains: Vec<Option<ExactMatrix>> = degrees
        .par_iter()
        .map(|g| {
            g.relation.as_ref().map(|r| {
                let basis = r.transpose().nullspace();
                ExactMatrix::from_columns(g.dim, &basis)
            })
        })
        .collect();
    let dim = |n: usize| cochains[n].as_ref().map_or(degrees[n].dim, ExactMatrix::ncols);
    // Rank of the coboundary out of degree n, i.e. of ∂_{n+1}ᵀ on the cochains of degree n.
    let coboundary_rank: Vec<usize> = (0..degrees.len() - 1)
        .into_par_iter()
        .map(|n| {
            let bt = degrees[n + 1].boundary.as_ref().expect("n + 1 ≥ 1").transpose();
            match &cochains[n] {
                None => bt.rank(),
                Some(basis) => bt.mul(basis).expect("matching shapes").rank(),
            }
        })
        .collect();
    (0..=max_degree)
        .map(|n| {
            let incoming = if n == 0 { 0 } else { coboundary_rank[n - 1] };
            dim(n) - coboundary_rank[n] - incoming
        })
        .collect()
}

/// `dim A/[A, A]`.
pub fn commutator_quotient(alg: &FiniteAlgebra) -> usize {
    let d = alg.dim();
    let commutators: Vec<Vec<GaussRat>> = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .map(|(i, j)| {
            let mut v = vec![GaussRat::zero(); d];
            for (k, c) in alg.basis_product(i, j) {
                v[*k] += c;
            }
            for (k, c) in alg.basis_product(j, i) {
                v[*k] -= c;
            }
            v
        })
        .collect();
    d - span_rank(&commutators)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(alg: &FiniteAlgebra, n: usize, v: Variant, s: Side) -> Vec<usize> {
        homology_dims(alg, n, v, s).unwrap()
    }

    #[test]
    fn boundary_of_c_alternates() {
        let c = FiniteAlgebra::complex();
        for n in 1..=5 {
            let b = hochschild_boundary(&c, n).unwrap().matrix;
            let expected = if n % 2 == 0 { 1 } else { 0 };
            assert_eq!(b.get(0, 0), GaussRat::from_int(expected), "n={n}");
        }
    }

    #[test]
    fn first_boundary_is_commutator() {
        let a = FiniteAlgebra::m2();
        let b = hochschild_boundary(&a, 1).unwrap().matrix;
        for i in 0..4 {
            for j in 0..4 {
                let col = b.column(i * 4 + j);
                let expected: Vec<GaussRat> = (0..4)
                    .map(|k| a.structure_constant(i, j, k) - a.structure_constant(j, i, k))
                    .collect();
                assert_eq!(col, expected);
            }
        }
    }

    #[test]
    fn known_dimensions() {
        let c = FiniteAlgebra::complex();
        assert_eq!(dims(&c, 4, Variant::Hochschild, Side::Homology), vec![1, 0, 0, 0, 0]);
        assert_eq!(dims(&c, 3, Variant::Cyclic, Side::Cohomology), vec![1, 0, 1, 0]);
        assert_eq!(dims(&c, 3, Variant::Cyclic, Side::Homology), vec![1, 0, 1, 0]);
        assert_eq!(dims(&FiniteAlgebra::m2(), 2, Variant::Hochschild, Side::Homology), vec![1, 0, 0]);
        assert_eq!(dims(&FiniteAlgebra::c2(), 2, Variant::Hochschild, Side::Homology), vec![2, 0, 0]);
        assert_eq!(dims(&FiniteAlgebra::c2(), 2, Variant::Hochschild, Side::Cohomology), vec![2, 0, 0]);
    }

    #[test]
    fn missing_automorphism_is_reported() {
        let err = homology_dims(&FiniteAlgebra::c2(), 1, Variant::TwistedCyclic, Side::Homology);
        assert_eq!(err, Err(Error::MissingAutomorphism));
    }

    #[test]
    fn size_guard() {
        let err = homology_dims(&FiniteAlgebra::m2(), 9, Variant::Hochschild, Side::Homology);
        assert!(matches!(err, Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
        assert!("cyclical".parse::<Variant>().is_err());
    }

    #[test]
    fn commutator_quotients() {
        assert_eq!(commutator_quotient(&FiniteAlgebra::m2()), 1);
        assert_eq!(commutator_quotient(&FiniteAlgebra::c2()), 2);
        assert_eq!(commutator_quotient(&FiniteAlgebra::complex()), 1);
    }
}
