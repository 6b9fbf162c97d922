//! Fuzzy spheres and the Berezin covariant/contravariant transforms.
//!
//! Coherent states are `c(p) = U_{s(p)} ξ` for the highest-weight vector ξ and
//! a coset section `s`. With `P = ξξ^*` and the un-normalized trace τ:
//!
//! - covariant symbol: `σ_T(p) = τ(T α_{s(p)}(P)) = c(p)^* T c(p)`;
//! - contravariant symbol: `σ̆_f = n ∫ f(p) c(p) c(p)^* dμ(p)`;
//! - kernel: `k_P(p) = n |⟨c(p), ξ⟩|² = n cos^{2(n−1)}(θ/2)`.
//!
//! Entries of `c c^*` are spherical harmonics of degree at most `n − 1`, so a
//! cos θ Gauss–Legendre rule of level `L` integrates `f · c c^*` exactly when
//! `deg f + n − 1 ≤ 2L − 1`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::{c, max_abs, pairwise_sum, pairwise_sum_complex, pairwise_sum_matrices, CMat, CVec};
use crate::su2_reps::{highest_weight, section, spin_rep, GroupPoint, SpinRep, SphereQuadrature};

/// Generators `x̂_i = J_i/√(n²−1)` of the fuzzy sphere; all zero when `n = 1`.
#[derive(Debug, Clone)]
pub struct FuzzySphere {
    rep: SpinRep,
    x: [CMat; 3],
}

pub fn fuzzy_sphere(n: usize) -> Result<FuzzySphere> {
    let rep = spin_rep(n)?;
    let scale = if n == 1 {
        0.0
    } else {
        1.0 / ((n * n - 1) as f64).sqrt()
    };
    let x = [0, 1, 2].map(|k| rep.generator(k) * c(scale));
    Ok(FuzzySphere { rep, x })
}

impl FuzzySphere {
    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn rep(&self) -> &SpinRep {
        &self.rep
    }

    /// `x̂_{k+1}` for `k = 0, 1, 2`.
    pub fn coordinate(&self, k: usize) -> &CMat {
        &self.x[k]
    }

    pub fn coordinates(&self) -> &[CMat; 3] {
        &self.x
    }

    /// Largest entry of `x̂_1² + x̂_2² + x̂_3² − 1`.
    pub fn radius_residual(&self) -> f64 {
        let n = self.dim();
        let sum = self.x.iter().fold(CMat::zeros(n, n), |acc, m| acc + m * m);
        max_abs(&(sum - CMat::identity(n, n)))
    }

    /// Largest entry of `[x̂_i, x̂_j] − (2i/√(n²−1)) ε_{ijk} x̂_k` over cyclic triples.
    pub fn commutator_residual(&self) -> f64 {
        let n = self.dim();
        if n == 1 {
            return 0.0;
        }
        let coef = Complex64::new(0.0, 2.0 / ((n * n - 1) as f64).sqrt());
        [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
            .iter()
            .map(|&(i, j, k)| {
                let lhs = &self.x[i] * &self.x[j] - &self.x[j] * &self.x[i];
                max_abs(&(lhs - &self.x[k] * coef))
            })
            .fold(0.0, f64::max)
    }
}

/// Values of a function on the nodes of a sphere quadrature.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    quadrature: Arc<SphereQuadrature>,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(quadrature: Arc<SphereQuadrature>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != quadrature.len() {
            return Err(Error::Shape(format!(
                "{} values for {} quadrature nodes",
                values.len(),
                quadrature.len()
            )));
        }
        Ok(SampledFunction { quadrature, values })
    }

    pub fn from_fn(quadrature: Arc<SphereQuadrature>, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let values = quadrature.nodes().iter().map(|&(t, p)| f(t, p)).collect();
        SampledFunction { quadrature, values }
    }

    pub fn from_real_fn(quadrature: Arc<SphereQuadrature>, f: impl Fn(f64, f64) -> f64) -> Self {
        Self::from_fn(quadrature, |t, p| c(f(t, p)))
    }

    pub fn constant(quadrature: Arc<SphereQuadrature>, value: f64) -> Self {
        Self::from_real_fn(quadrature, |_, _| value)
    }

    pub fn quadrature(&self) -> &Arc<SphereQuadrature> {
        &self.quadrature
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|z| z.im.abs() <= tol)
    }

    /// `∫ f dμ`.
    pub fn integral(&self) -> Complex64 {
        let terms: Vec<Complex64> = self
            .values
            .iter()
            .zip(self.quadrature.weights())
            .map(|(v, &w)| v * w)
            .collect();
        pairwise_sum_complex(&terms)
    }

    /// `⟨f, g⟩_{L²} = ∫ f ḡ dμ`.
    pub fn inner(&self, other: &SampledFunction) -> Result<Complex64> {
        self.check_same_grid(other)?;
        let terms: Vec<Complex64> = self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.quadrature.weights())
            .map(|((a, b), &w)| a * b.conj() * w)
            .collect();
        Ok(pairwise_sum_complex(&terms))
    }

    /// Largest nodewise `|f − g|`.
    pub fn max_distance(&self, other: &SampledFunction) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm())))
    }

    pub fn scale(&self, s: f64) -> SampledFunction {
        SampledFunction {
            quadrature: Arc::clone(&self.quadrature),
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    fn check_same_grid(&self, other: &SampledFunction) -> Result<()> {
        if !Arc::ptr_eq(&self.quadrature, &other.quadrature) && self.quadrature != other.quadrature {
            return Err(Error::Shape("functions live on different quadratures".into()));
        }
        Ok(())
    }
}

/// A coset section `S² → SU(2)`, the standard one composed on the right with
/// `R_z(twist·(1 + φ))`. Any twist gives a valid section; results of the
/// transforms must not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Section {
    pub twist: f64,
}

impl Section {
    pub const STANDARD: Section = Section { twist: 0.0 };

    pub fn at(&self, theta: f64, phi: f64) -> GroupPoint {
        let base = section(theta, phi);
        if self.twist == 0.0 {
            base
        } else {
            base.compose(&GroupPoint::rotation_z(self.twist * (1.0 + phi)))
        }
    }
}

/// Coherent vectors `c(p) = U_{s(p)} ξ` for each point.
pub fn coherent_states(rep: &SpinRep, points: &[(f64, f64)], sec: Section) -> Result<Vec<CVec>> {
    let (xi, _) = highest_weight(rep)?;
    Ok(points
        .par_iter()
        .map(|&(t, p)| rep.apply_unitary(&sec.at(t, p), &xi))
        .collect())
}

fn check_square(rep: &SpinRep, t: &CMat) -> Result<()> {
    let n = rep.dim();
    if t.nrows() != n || t.ncols() != n {
        return Err(Error::Shape(format!(
            "matrix is {}x{}, expected {n}x{n}",
            t.nrows(),
            t.ncols()
        )));
    }
    Ok(())
}

/// `σ_T(p) = c(p)^* T c(p)` at arbitrary points.
pub fn covariant_symbol_at(
    rep: &SpinRep,
    t: &CMat,
    points: &[(f64, f64)],
    sec: Section,
) -> Result<Vec<Complex64>> {
    check_square(rep, t)?;
    let states = coherent_states(rep, points, sec)?;
    Ok(states.par_iter().map(|v| v.dotc(&(t * v))).collect())
}

/// Covariant (lower) symbol of `T` on the quadrature nodes.
pub fn covariant_symbol(rep: &SpinRep, t: &CMat, quad: &Arc<SphereQuadrature>) -> Result<SampledFunction> {
    covariant_symbol_with(rep, t, quad, Section::STANDARD)
}

pub fn covariant_symbol_with(
    rep: &SpinRep,
    t: &CMat,
    quad: &Arc<SphereQuadrature>,
    sec: Section,
) -> Result<SampledFunction> {
    let values = covariant_symbol_at(rep, t, quad.nodes(), sec)?;
    SampledFunction::new(Arc::clone(quad), values)
}

/// Contravariant (upper) symbol `σ̆_f = n Σ_k w_k f(p_k) c(p_k) c(p_k)^*`.
///
/// Requires a quadrature level of at least `n`, which makes the result exact
/// for `f` of degree ≤ `n`.
pub fn contravariant_symbol(f: &SampledFunction, rep: &SpinRep) -> Result<CMat> {
    contravariant_symbol_with(f, rep, Section::STANDARD)
}

pub fn contravariant_symbol_with(f: &SampledFunction, rep: &SpinRep, sec: Section) -> Result<CMat> {
    let n = rep.dim();
    let quad = f.quadrature();
    if quad.level() < n {
        return Err(Error::Precondition(format!(
            "quadrature level {} is below the representation dimension {n}",
            quad.level()
        )));
    }
    let states = coherent_states(rep, quad.nodes(), sec)?;
    let ring = quad.azimuths().len();
    let weights = quad.weights();
    // One gemm per polar ring, then a pairwise sum over rings.
    let rings: Vec<CMat> = (0..quad.polar_angles().len())
        .into_par_iter()
        .map(|i| {
            let start = quad.index(i, 0);
            let mut left = CMat::zeros(n, ring);
            let mut right = CMat::zeros(n, ring);
            for j in 0..ring {
                let k = start + j;
                let coef = f.values()[k] * (n as f64 * weights[k]);
                left.set_column(j, &(&states[k] * coef));
                right.set_column(j, &states[k]);
            }
            left * right.adjoint()
        })
        .collect();
    Ok(pairwise_sum_matrices(&rings, n, n))
}

/// `k_P` at polar angle θ from the matrix definition `n |⟨U_{s(θ,0)} ξ, ξ⟩|²`.
pub fn berezin_kernel(rep: &SpinRep, theta: f64) -> Result<f64> {
    let (xi, _) = highest_weight(rep)?;
    let moved = rep.apply_unitary(&section(theta, 0.0), &xi);
    Ok(rep.dim() as f64 * xi.dotc(&moved).norm_sqr())
}

/// Closed form `n cos^{2(n−1)}(θ/2)`.
pub fn berezin_kernel_closed_form(n: usize, theta: f64) -> f64 {
    n as f64 * (theta / 2.0).cos().powi(2 * (n as i32 - 1))
}

/// `σ(σ̆_f)` on the grid of `f`, computed by chaining the two transforms.
pub fn berezin_transform(f: &SampledFunction, rep: &SpinRep) -> Result<SampledFunction> {
    let upper = contravariant_symbol(f, rep)?;
    covariant_symbol(rep, &upper, f.quadrature())
}

/// `h ↦ ∫ f(p) k_P(p, h) dμ(p)` with the closed-form kernel
/// `n ((1 + p·h)/2)^{n−1}`; an independent route to the Berezin transform.
pub fn kernel_convolution(f: &SampledFunction, n: usize) -> SampledFunction {
    let quad = f.quadrature();
    let points: Vec<[f64; 3]> = quad
        .nodes()
        .iter()
        .map(|&(t, p)| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()])
        .collect();
    let weights = quad.weights();
    let values = points
        .par_iter()
        .map(|h| {
            let terms: Vec<Complex64> = points
                .iter()
                .zip(f.values())
                .zip(weights)
                .map(|((p, v), &w)| {
                    let dot = p[0] * h[0] + p[1] * h[1] + p[2] * h[2];
                    let k = n as f64 * ((1.0 + dot) / 2.0).max(0.0).powi(n as i32 - 1);
                    v * (w * k)
                })
                .collect();
            pairwise_sum_complex(&terms)
        })
        .collect();
    SampledFunction {
        quadrature: Arc::clone(quad),
        values,
    }
}

/// `∫ k_P dμ` on the given quadrature, kernel from the matrix definition.
pub fn kernel_integral(rep: &SpinRep, quad: &SphereQuadrature) -> Result<f64> {
    let values: Vec<f64> = quad
        .polar_angles()
        .iter()
        .map(|&t| berezin_kernel(rep, t))
        .collect::<Result<_>>()?;
    let terms: Vec<f64> = values
        .iter()
        .zip(quad.polar_weights())
        .map(|(k, w)| k * w)
        .collect();
    Ok(pairwise_sum(&terms))
}
