//! Finite graded calculi with inner products, and their Hodge decomposition.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use super::UniversalForms;
use crate::error::{Error, Result};
use crate::exact::{span_rank, ExactMatrix, GaussRat};
use crate::numeric::{c, hermitian_eigen, CMat, CVec};

/// A finite graded calculus `Ω⁰ ⊕ … ⊕ Ω^N` with exact structure and per-degree
/// Gram matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedCalculus {
    dims: Vec<usize>,
    /// `d_k : Ω^k → Ω^{k+1}`, a `dims[k+1] × dims[k]` matrix, for `k < N`.
    differentials: Vec<ExactMatrix>,
    /// `(p, q) ↦` matrix `dims[p+q] × (dims[p]·dims[q])`, column `i·dims[q] + j` holding
    /// the product of basis forms `i` and `j`. Absent pairs are not modeled.
    products: BTreeMap<(usize, usize), ExactMatrix>,
    grams: Vec<ExactMatrix>,
}

impl GradedCalculus {
    /// Validates shapes, `d² = 0`, and that every Gram matrix is Hermitian
    /// positive definite (minimum eigenvalue above `1e−12`).
    pub fn new(
        dims: Vec<usize>,
        differentials: Vec<ExactMatrix>,
        products: BTreeMap<(usize, usize), ExactMatrix>,
        grams: Vec<ExactMatrix>,
    ) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDimension("a calculus needs degree 0".into()));
        }
        let top = dims.len() - 1;
        if differentials.len() != top {
            return Err(Error::Shape(format!(
                "{} degrees need {top} differentials, got {}",
                dims.len(),
                differentials.len()
            )));
        }
        for (k, m) in differentials.iter().enumerate() {
            if m.nrows() != dims[k + 1] || m.ncols() != dims[k] {
                return Err(Error::Shape(format!(
                    "d_{k} is {}x{}, expected {}x{}",
                    m.nrows(),
                    m.ncols(),
                    dims[k + 1],
                    dims[k]
                )));
            }
        }
        for k in 1..differentials.len() {
            if !differentials[k].mul(&differentials[k - 1])?.is_zero() {
                return Err(Error::Domain(format!("d_{k} ∘ d_{} is not zero", k - 1)));
            }
        }
        for (&(p, q), m) in &products {
            if p + q > top || m.nrows() != dims[p + q] || m.ncols() != dims[p] * dims[q] {
                return Err(Error::Shape(format!("product table ({p}, {q}) has the wrong shape")));
            }
        }
        if grams.len() != dims.len() {
            return Err(Error::Shape(format!("{} degrees need {} Gram matrices", dims.len(), dims.len())));
        }
        for (k, g) in grams.iter().enumerate() {
            if g.nrows() != dims[k] || g.ncols() != dims[k] {
                return Err(Error::Shape(format!("Gram matrix {k} has the wrong shape")));
            }
            if *g != g.adjoint() {
                return Err(Error::Domain(format!("Gram matrix {k} is not Hermitian")));
            }
            if dims[k] > 0 {
                let (vals, _) = hermitian_eigen(&g.to_complex());
                if !(vals[0] > 1e-12) {
                    return Err(Error::Domain(format!(
                        "Gram matrix {k} is not positive definite (minimum eigenvalue {:e})",
                        vals[0]
                    )));
                }
            }
        }
        Ok(GradedCalculus {
            dims,
            differentials,
            products,
            grams,
        })
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn differential(&self, k: usize) -> Option<&ExactMatrix> {
        self.differentials.get(k)
    }

    pub fn product_table(&self, p: usize, q: usize) -> Option<&ExactMatrix> {
        self.products.get(&(p, q))
    }

    pub fn products(&self) -> &BTreeMap<(usize, usize), ExactMatrix> {
        &self.products
    }

    pub fn gram(&self, k: usize) -> &ExactMatrix {
        &self.grams[k]
    }

    /// Replaces the Gram matrices (validated as in [`GradedCalculus::new`]).
    pub fn with_grams(&self, grams: Vec<ExactMatrix>) -> Result<Self> {
        GradedCalculus::new(self.dims.clone(), self.differentials.clone(), self.products.clone(), grams)
    }

    /// Product of homogeneous elements of degrees `p` and `q`.
    pub fn multiply(&self, p: usize, a: &[GaussRat], q: usize, b: &[GaussRat]) -> Result<Vec<GaussRat>> {
        let table = self
            .product_table(p, q)
            .ok_or_else(|| Error::Domain(format!("no product table for degrees ({p}, {q})")))?;
        if a.len() != self.dims[p] || b.len() != self.dims[q] {
            return Err(Error::Shape("factor lengths do not match the degrees".into()));
        }
        let mut pair = Vec::with_capacity(a.len() * b.len());
        for x in a {
            for y in b {
                pair.push(x * y);
            }
        }
        table.apply(&pair)
    }

    /// First degree `k ≥ 1` in which `d(Ω^{k−1})` and `Ω⁰·d(Ω^{k−1})` together
    /// fail to span `Ω^k`. Only spanning is tested: the two pieces usually
    /// overlap, so the sum is not direct. Needs the `(0, k)` product tables.
    pub fn spanning_failure(&self) -> Result<Option<usize>> {
        for k in 1..=self.top_degree() {
            let d = &self.differentials[k - 1];
            let mut vectors: Vec<Vec<GaussRat>> = (0..d.ncols()).map(|j| d.column(j)).collect();
            let exact = vectors.clone();
            for i in 0..self.dims[0] {
                let mut a = vec![GaussRat::zero(); self.dims[0]];
                a[i] = GaussRat::from_int(1);
                for w in &exact {
                    vectors.push(self.multiply(0, &a, k, w).map_err(|_| {
                        Error::Precondition(format!("spanning check needs the product table (0, {k})"))
                    })?);
                }
            }
            if span_rank(&vectors) < self.dims[k] {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

/// Summands of one degree, each as a list of coordinate vectors.
#[derive(Debug, Clone)]
pub struct HodgeDegree {
    pub harmonic: Vec<CVec>,
    pub exact: Vec<CVec>,
    pub coexact: Vec<CVec>,
    /// Eigenvalues of `∇ = D²` restricted to this degree, ascending.
    pub laplacian_eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct HodgeReport {
    pub degrees: Vec<HodgeDegree>,
    /// `d*_k : Ω^{k+1} → Ω^k`, the Gram adjoint of `d_k`.
    pub codifferentials: Vec<CMat>,
    /// Eigenvalues of `D = d + d*` on the whole calculus, ascending.
    pub dirac_eigenvalues: Vec<f64>,
    /// Largest `|⟨x, y⟩|` between unit vectors of different summands.
    pub max_overlap: f64,
    /// Whether `dim ker ∇ + dim im d + dim im d* = dim Ω` in every degree.
    pub additive: bool,
}

impl HodgeReport {
    pub fn min_laplacian_eigenvalue(&self) -> f64 {
        self.degrees
            .iter()
            .flat_map(|g| g.laplacian_eigenvalues.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }
}

/// `G^{1/2}` and `G^{−1/2}` of a positive definite Hermitian matrix.
fn sqrt_pair(g: &CMat) -> (CMat, CMat) {
    let (vals, vecs) = hermitian_eigen(g);
    let n = vals.len();
    let root = CMat::from_diagonal(&CVec::from_iterator(n, vals.iter().map(|v| c(v.sqrt()))));
    let inv_root = CMat::from_diagonal(&CVec::from_iterator(n, vals.iter().map(|v| c(1.0 / v.sqrt()))));
    (&vecs * root * vecs.adjoint(), &vecs * inv_root * vecs.adjoint())
}

/// Orthonormal (in the standard inner product) basis of the column space of `m`.
fn column_space(m: &CMat) -> Vec<CVec> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested");
    let top = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    let tol = 1e-10 * top.max(1.0);
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > tol)
        .map(|(i, _)| u.column(i).into_owned())
        .collect()
}

/// Hodge decomposition `Ω = ker ∇ ⊕ im d ⊕ im d*` with `d*` the Gram adjoint of `d`.
///
/// Work happens in whitened coordinates `y = G^{1/2} x`, where the Gram inner
/// product becomes the standard one; returned vectors are in the original
/// coordinates and orthonormal for the Gram inner product.
pub fn hodge(calc: &GradedCalculus) -> Result<HodgeReport> {
    let n = calc.top_degree();
    let grams: Vec<CMat> = calc.grams.iter().map(ExactMatrix::to_complex).collect();
    let roots: Vec<(CMat, CMat)> = grams.par_iter().map(sqrt_pair).collect();
    let d: Vec<CMat> = calc.differentials.iter().map(ExactMatrix::to_complex).collect();
    let codifferentials: Vec<CMat> = (0..n)
        .map(|k| {
            let g_inv = grams[k].clone().try_inverse().expect("positive definite");
            g_inv * d[k].adjoint() * &grams[k + 1]
        })
        .collect();
    // Whitened differential δ_k = G_{k+1}^{1/2} d_k G_k^{−1/2}; its adjoint is the whitened d*.
    let white: Vec<CMat> = (0..n).map(|k| &roots[k + 1].0 * &d[k] * &roots[k].1).collect();

    let degrees: Vec<HodgeDegree> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let dim = calc.dims[k];
            let mut lap = CMat::zeros(dim, dim);
            if k < n {
                lap += white[k].adjoint() * &white[k];
            }
            if k > 0 {
                lap += &white[k - 1] * white[k - 1].adjoint();
            }
            let (vals, vecs) = hermitian_eigen(&lap);
            let scale = vals.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
            let unwhiten = |v: CVec| &roots[k].1 * v;
            let harmonic = (0..dim)
                .filter(|&i| vals[i].abs() < 1e-10 * scale)
                .map(|i| unwhiten(vecs.column(i).into_owned()))
                .collect();
            let exact = if k > 0 {
                column_space(&white[k - 1]).into_iter().map(unwhiten).collect()
            } else {
                Vec::new()
            };
            let coexact = if k < n {
                column_space(&white[k].adjoint()).into_iter().map(unwhiten).collect()
            } else {
                Vec::new()
            };
            HodgeDegree {
                harmonic,
                exact,
                coexact,
                laplacian_eigenvalues: vals.to_vec(),
            }
        })
        .collect();

    let total: usize = calc.dims.iter().sum();
    let offsets: Vec<usize> = calc
        .dims
        .iter()
        .scan(0, |acc, &k| {
            let o = *acc;
            *acc += k;
            Some(o)
        })
        .collect();
    let mut dirac = CMat::zeros(total, total);
    for k in 0..n {
        let (r, c0) = (offsets[k + 1], offsets[k]);
        dirac.view_mut((r, c0), (calc.dims[k + 1], calc.dims[k])).copy_from(&white[k]);
        dirac.view_mut((c0, r), (calc.dims[k], calc.dims[k + 1])).copy_from(&white[k].adjoint());
    }
    let (dirac_vals, _) = hermitian_eigen(&dirac);

    let mut max_overlap = 0.0f64;
    let mut additive = true;
    for (k, g) in degrees.iter().enumerate() {
        additive &= g.harmonic.len() + g.exact.len() + g.coexact.len() == calc.dims[k];
        let groups = [&g.harmonic, &g.exact, &g.coexact];
        for a in 0..3 {
            for b in a + 1..3 {
                for x in groups[a] {
                    for y in groups[b] {
                        let ip = (x.adjoint() * &grams[k] * y)[(0, 0)];
                        max_overlap = max_overlap.max(ip.norm());
                    }
                }
            }
        }
    }
    Ok(HodgeReport {
        degrees,
        codifferentials,
        dirac_eigenvalues: dirac_vals.to_vec(),
        max_overlap,
        additive,
    })
}

/// The canonical map `i: Ω_u(A) → Ω` defined by
/// `i(a_0 da_1 ⋯ da_k) = ι(a_0) dι(a_1) ⋯ dι(a_k)` and `i(1̃ …) = unit · …`,
/// one exact matrix per degree up to the smaller top degree.
///
/// `iota` is the `dims[0] × d` matrix of an algebra map `A → Ω⁰`; `unit` is the
/// unit of `Ω⁰`. Products of degrees `(k, 1)` must be tabulated.
pub fn universal_map(
    u: &UniversalForms,
    target: &GradedCalculus,
    iota: &ExactMatrix,
    unit: &[GaussRat],
) -> Result<Vec<ExactMatrix>> {
    let d = u.base().dim();
    if iota.nrows() != target.dims[0] || iota.ncols() != d || unit.len() != target.dims[0] {
        return Err(Error::Shape("ι and the unit must land in degree 0 of the target".into()));
    }
    let top = u.max_degree().min(target.top_degree());
    let images: Vec<Vec<GaussRat>> = (0..d).map(|j| iota.column(j)).collect();
    let d0 = target
        .differential(0)
        .map(|m| images.iter().map(|v| m.apply(v)).collect::<Result<Vec<_>>>())
        .transpose()?;
    let mut maps = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let mut columns = Vec::with_capacity(u.dim(k));
        for idx in 0..u.dim(k) {
            let w = u.word(k, idx);
            let mut acc = if w.head == u.tilde_one() {
                unit.to_vec()
            } else {
                images[w.head].clone()
            };
            for (deg, &slot) in w.tail.iter().enumerate() {
                let dv = &d0.as_ref().expect("k ≥ 1 implies d_0 exists")[slot];
                acc = target.multiply(deg, &acc, 1, dv)?;
            }
            columns.push(acc);
        }
        maps.push(ExactMatrix::from_columns(target.dims[k], &columns));
    }
    Ok(maps)
}

/// Checks `i ∘ d_u = d ∘ i` on every basis form below the common top degree.
/// Returns the first failing `(degree, basis index)`.
pub fn universal_property_check(
    u: &UniversalForms,
    target: &GradedCalculus,
    iota: &ExactMatrix,
    unit: &[GaussRat],
) -> Result<Option<(usize, usize)>> {
    let maps = universal_map(u, target, iota, unit)?;
    for k in 0..maps.len().saturating_sub(1) {
        let lhs = maps[k + 1].mul(u.differential(k)?)?;
        let rhs = target.differential(k).expect("k below top").mul(&maps[k])?;
        let diff = lhs.sub(&rhs)?;
        if let Some(col) = (0..diff.ncols()).find(|&j| diff.column(j).iter().any(|v| !v.is_zero())) {
            return Ok(Some((k, col)));
        }
    }
    Ok(None)
}
