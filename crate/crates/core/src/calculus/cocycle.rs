//! Cyclic cocycles and closed graded traces on the universal calculus.

use num_traits::{One, Zero};

use super::{universal_forms, UniversalForms};
use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, GaussRat};
use crate::homology::{cyclic_operator, hochschild_boundary, twisted_boundary, FiniteAlgebra};

/// A multilinear map `A^{n+1} → ℂ`, stored by its values on basis tuples in the
/// row-major tensor order (first argument most significant).
#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearFunctional {
    pub degree: usize,
    pub coeffs: Vec<GaussRat>,
}

impl MultilinearFunctional {
    pub fn new(degree: usize, coeffs: Vec<GaussRat>, alg: &FiniteAlgebra) -> Result<Self> {
        let expected = alg.dim().pow(degree as u32 + 1);
        if coeffs.len() != expected {
            return Err(Error::Shape(format!(
                "functional of degree {degree} needs {expected} values, got {}",
                coeffs.len()
            )));
        }
        Ok(MultilinearFunctional { degree, coeffs })
    }

    /// `φ(a_0, …, a_n)` for coordinate vectors `a_i`.
    pub fn eval(&self, args: &[Vec<GaussRat>]) -> Result<GaussRat> {
        if args.len() != self.degree + 1 {
            return Err(Error::Shape(format!(
                "degree {} functional takes {} arguments",
                self.degree,
                self.degree + 1
            )));
        }
        let d = args[0].len();
        let mut weights = vec![GaussRat::one()];
        for a in args {
            if a.len() != d {
                return Err(Error::Shape("arguments have different lengths".into()));
            }
            let mut next = Vec::with_capacity(weights.len() * d);
            for w in &weights {
                for x in a {
                    next.push(w * x);
                }
            }
            weights = next;
        }
        if weights.len() != self.coeffs.len() {
            return Err(Error::Shape("argument dimension does not match".into()));
        }
        Ok(weights
            .iter()
            .zip(&self.coeffs)
            .fold(GaussRat::zero(), |acc, (w, c)| &acc + &(w * c)))
    }

    /// `φ ∘ M` for a chain-level matrix `M` into degree `self.degree`.
    fn pull_back(&self, m: &ExactMatrix) -> Result<Vec<GaussRat>> {
        m.transpose().apply(&self.coeffs)
    }
}

fn tuple(idx: usize, d: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    let mut r = idx;
    for slot in out.iter_mut().rev() {
        *slot = r % d;
        r /= d;
    }
    out
}

/// First basis tuple on which `values` is nonzero.
fn witness(values: &[GaussRat], d: usize, len: usize) -> Option<Vec<usize>> {
    values.iter().position(|v| !v.is_zero()).map(|i| tuple(i, d, len))
}

/// Cyclicity (`λφ = φ`, or `λ_σφ = φ` with `twisted`) and closedness (`bφ = 0` or `b_σφ = 0`).
/// Returns a description of the first violation.
fn cocycle_violation(phi: &MultilinearFunctional, alg: &FiniteAlgebra, twisted: bool) -> Result<Option<String>> {
    let n = phi.degree;
    let d = alg.dim();
    let lam = cyclic_operator(alg, n, twisted)?.matrix;
    let rotated = phi.pull_back(&lam)?;
    let diff: Vec<GaussRat> = rotated.iter().zip(&phi.coeffs).map(|(a, b)| a - b).collect();
    if let Some(t) = witness(&diff, d, n + 1) {
        return Ok(Some(format!("cyclic condition fails on basis tuple {t:?}")));
    }
    let b = if twisted {
        twisted_boundary(alg, n + 1)?
    } else {
        hochschild_boundary(alg, n + 1)?
    };
    let coboundary = phi.pull_back(&b.matrix)?;
    if let Some(t) = witness(&coboundary, d, n + 2) {
        return Ok(Some(format!("coboundary is nonzero on basis tuple {t:?}")));
    }
    Ok(None)
}

/// True iff `b_σφ = 0` and `λ_σφ = φ` exactly.
pub fn twisted_cocycle_check(phi: &MultilinearFunctional, sigma: &ExactMatrix, alg: &FiniteAlgebra) -> Result<bool> {
    let twisted = alg.clone().with_automorphism(sigma.clone())?;
    MultilinearFunctional::new(phi.degree, phi.coeffs.clone(), alg)?;
    Ok(cocycle_violation(phi, &twisted, true)?.is_none())
}

fn integral_of(terms: &std::collections::BTreeMap<usize, GaussRat>, integral: &[GaussRat]) -> GaussRat {
    terms
        .iter()
        .fold(GaussRat::zero(), |acc, (i, v)| &acc + &(v * &integral[*i]))
}

/// `∫ dω = 0` for every basis form of degree `n − 1`.
fn closedness_violation(u: &UniversalForms, n: usize, integral: &[GaussRat]) -> Result<Option<String>> {
    if n == 0 {
        return Ok(None);
    }
    let pulled = u.differential(n - 1)?.transpose().apply(integral)?;
    Ok(pulled
        .iter()
        .position(|v| !v.is_zero())
        .map(|i| format!("integral of d(basis form {i} of degree {})", n - 1) + " is nonzero"))
}

/// `∫ ω_p ω_q = (−1)^{pq} ∫ ω_q ω_p` on all basis pairs with `p + q = n`.
fn graded_trace_violation(u: &UniversalForms, n: usize, integral: &[GaussRat]) -> Option<String> {
    for p in 0..=n / 2 {
        let q = n - p;
        let sign = if (p * q) % 2 == 0 { GaussRat::one() } else { -GaussRat::one() };
        for i in 0..u.dim(p) {
            for j in 0..u.dim(q) {
                let lhs = integral_of(&u.basis_product(p, i, q, j), integral);
                let rhs = &sign * &integral_of(&u.basis_product(q, j, p, i), integral);
                if lhs != rhs {
                    return Some(format!(
                        "graded trace fails on basis forms ({i} of degree {p}, {j} of degree {q})"
                    ));
                }
            }
        }
    }
    None
}

/// `φ(a_0, …, a_n) = ∫ a_0 da_1 ⋯ da_n` for a closed graded trace `∫` on degree `n`.
///
/// The preconditions are checked exactly; the cyclic condition and `bφ = 0` are
/// verified on the result.
pub fn cocycle_from_trace(u: &UniversalForms, n: usize, integral: &[GaussRat]) -> Result<MultilinearFunctional> {
    if n > u.max_degree() {
        return Err(Error::Domain(format!(
            "degree {n} exceeds the truncation degree {}",
            u.max_degree()
        )));
    }
    if integral.len() != u.dim(n) {
        return Err(Error::Shape(format!(
            "integral on degree {n} needs {} values, got {}",
            u.dim(n),
            integral.len()
        )));
    }
    if let Some(msg) = closedness_violation(u, n, integral)? {
        return Err(Error::Precondition(msg));
    }
    if let Some(msg) = graded_trace_violation(u, n, integral) {
        return Err(Error::Precondition(msg));
    }
    let alg = u.base();
    let d = alg.dim();
    // Basis words with head < d are exactly the tuples of A^{⊗(n+1)}, in order.
    let phi = MultilinearFunctional::new(n, integral[..d.pow(n as u32 + 1)].to_vec(), alg)?;
    if let Some(msg) = cocycle_violation(&phi, alg, false)? {
        return Err(Error::Internal(format!("constructed functional is not a cyclic cocycle: {msg}")));
    }
    Ok(phi)
}

/// The integral on `Ω_u^n(A)` with `∫ a_0 da_1 ⋯ da_n = ψ(a_0, …, a_n)` and
/// `∫ da_1 ⋯ da_n = 0`, for a cyclic cocycle `ψ`; closedness and the graded
/// trace property are verified exactly.
pub fn trace_from_cocycle(psi: &MultilinearFunctional, alg: &FiniteAlgebra) -> Result<(UniversalForms, Vec<GaussRat>)> {
    MultilinearFunctional::new(psi.degree, psi.coeffs.clone(), alg)?;
    if let Some(msg) = cocycle_violation(psi, alg, false)? {
        return Err(Error::Precondition(msg));
    }
    let (u, integral) = integral_from(psi, alg)?;
    let n = psi.degree;
    if let Some(msg) = closedness_violation(&u, n, &integral)? {
        return Err(Error::Internal(msg));
    }
    if let Some(msg) = graded_trace_violation(&u, n, &integral) {
        return Err(Error::Internal(msg));
    }
    Ok((u, integral))
}

fn integral_from(psi: &MultilinearFunctional, alg: &FiniteAlgebra) -> Result<(UniversalForms, Vec<GaussRat>)> {
    let n = psi.degree;
    let u = universal_forms(alg, n)?;
    let mut integral = psi.coeffs.clone();
    integral.resize(u.dim(n), GaussRat::zero());
    Ok((u, integral))
}

/// Twisted form of [`trace_from_cocycle`]: for `ψ` a twisted cyclic cocycle of the
/// automorphism attached to `alg`, the integral is closed and satisfies
/// `∫ σ(a) ω = ∫ ω a` for all `a ∈ A` and `ω` of top degree.
pub fn twisted_trace_from_cocycle(
    psi: &MultilinearFunctional,
    alg: &FiniteAlgebra,
) -> Result<(UniversalForms, Vec<GaussRat>)> {
    let sigma = alg.automorphism().ok_or(Error::MissingAutomorphism)?;
    MultilinearFunctional::new(psi.degree, psi.coeffs.clone(), alg)?;
    if let Some(msg) = cocycle_violation(psi, alg, true)? {
        return Err(Error::Precondition(msg));
    }
    let (u, integral) = integral_from(psi, alg)?;
    let n = psi.degree;
    if let Some(msg) = closedness_violation(&u, n, &integral)? {
        return Err(Error::Internal(msg));
    }
    let d = alg.dim();
    for a in 0..d {
        let mut image = sigma.column(a);
        image.push(GaussRat::zero());
        let sa = super::Form { degree: 0, coeffs: image };
        let ea = u.basis(0, a)?;
        for w in 0..u.dim(n) {
            let omega = u.basis(n, w)?;
            let lhs = u.product(&sa, &omega)?;
            let rhs = u.product(&omega, &ea)?;
            let dot = |f: &super::Form| {
                f.coeffs
                    .iter()
                    .zip(&integral)
                    .fold(GaussRat::zero(), |acc, (x, y)| &acc + &(x * y))
            };
            if dot(&lhs) != dot(&rhs) {
                return Err(Error::Internal(format!(
                    "twisted trace property fails on (e_{a}, basis form {w})"
                )));
            }
        }
    }
    Ok((u, integral))
}
