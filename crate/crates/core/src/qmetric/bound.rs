//! The γ constant, Berezin defects, and the resulting distance-bound estimate.

use std::sync::Arc;

use rayon::prelude::*;

use super::{classical_lip_norm, lip_norm, LipConstraintSample};
use crate::error::{Error, Result};
use crate::fuzzy_berezin::{contravariant_symbol, covariant_symbol, covariant_symbol_at, SampledFunction, Section};
use crate::numeric::{c, op_norm, pairwise_sum, CMat};
use crate::su2_reps::{
    geodesic_sphere_quadrature, highest_weight, sphere_quadrature, SpinRep, SphereQuadrature,
};

/// `γ_n = n ∫ ρ([e], p) σ_P(p) dμ(p)`, with ρ the geodesic angle from the north
/// pole and `σ_P` evaluated from the matrix definition.
///
/// The integrand depends on θ only and is smooth in θ but not on the sphere
/// (the distance has a cone point at the pole), so a rule that is Gauss in θ
/// itself, [`geodesic_sphere_quadrature`], converges spectrally while the
/// cos θ rule converges only algebraically.
pub fn gamma(rep: &SpinRep, quad: &SphereQuadrature) -> Result<f64> {
    let n = rep.dim();
    if n < 2 {
        return Err(Error::InvalidDimension("γ is defined for n ≥ 2".into()));
    }
    if quad.level() < n {
        return Err(Error::Precondition(format!(
            "quadrature level {} is below the representation dimension {n}",
            quad.level()
        )));
    }
    let (_, p) = highest_weight(rep)?;
    let points: Vec<(f64, f64)> = quad.polar_angles().iter().map(|&t| (t, 0.0)).collect();
    let symbol = covariant_symbol_at(rep, &p, &points, Section::STANDARD)?;
    let terms: Vec<f64> = points
        .iter()
        .zip(&symbol)
        .zip(quad.polar_weights())
        .map(|((&(t, _), s), w)| n as f64 * w * t * s.re)
        .collect();
    Ok(pairwise_sum(&terms))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport {
    /// `‖σ̆(σ_T) − T‖` for `T` rescaled to unit Lip-norm (or unscaled, see `normalized`).
    pub defect: f64,
    /// Sampled Lip-norm of the input before rescaling.
    pub lip_norm: f64,
    /// False when the input has (numerically) zero Lip-norm and was left unscaled.
    pub normalized: bool,
}

/// `‖σ̆(σ_T) − T‖_op` after rescaling `T` to unit sampled Lip-norm.
pub fn berezin_defect(
    rep: &SpinRep,
    t: &CMat,
    quad: &Arc<SphereQuadrature>,
    sample: &LipConstraintSample,
) -> Result<DefectReport> {
    let lip = lip_norm(rep, t, sample)?;
    let size = op_norm(t);
    let normalized = lip > 1e-10 * size && lip > 0.0;
    let scaled = if normalized { t * c(1.0 / lip) } else { t.clone() };
    let lower = covariant_symbol(rep, &scaled, quad)?;
    let upper = contravariant_symbol(&lower, rep)?;
    Ok(DefectReport {
        defect: op_norm(&(upper - scaled)),
        lip_norm: lip,
        normalized,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GhEstimate {
    pub gamma: f64,
    /// Largest defect over the probes.
    pub defect_max: f64,
    /// `gamma + defect_max`: an estimate of the distance bound restricted to the probe set.
    pub bound: f64,
    /// Indices of probes with zero Lip-norm (their defect entered unscaled).
    pub unnormalized_probes: Vec<usize>,
}

/// Estimate of `γ_n + sup{‖σ̆(σ_T) − T‖ : L(T) ≤ 1}` with the supremum replaced
/// by a maximum over `probes`. Not a certified upper bound on the distance.
///
/// γ uses the geodesic rule and the transforms the cos θ rule, both of the
/// given `level`, which must be at least `n`.
pub fn gh_upper_bound(
    rep: &SpinRep,
    probes: &[CMat],
    sample: &LipConstraintSample,
    level: usize,
) -> Result<GhEstimate> {
    if probes.is_empty() {
        return Err(Error::Precondition("probe set is empty".into()));
    }
    let g = gamma(rep, &geodesic_sphere_quadrature(level)?)?;
    let quad = Arc::new(sphere_quadrature(level)?);
    let reports: Vec<DefectReport> = probes
        .par_iter()
        .map(|t| berezin_defect(rep, t, &quad, sample))
        .collect::<Result<_>>()?;
    let defect_max = reports.iter().map(|r| r.defect).fold(0.0, f64::max);
    let unnormalized_probes = reports
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.normalized)
        .map(|(i, _)| i)
        .collect();
    Ok(GhEstimate {
        gamma: g,
        defect_max,
        bound: g + defect_max,
        unnormalized_probes,
    })
}

/// Checks that both transforms contract Lip-norms:
/// `L_cl(σ_T) ≤ L(T)(1 + 1e−6) + slack` and `L(σ̆_f) ≤ L_cl(f)(1 + 1e−6) + slack`,
/// with `σ_T` sampled on the quadrature of `f`. `slack` absorbs quadrature and
/// rounding error.
pub fn lip_contraction_check(
    rep: &SpinRep,
    t: &CMat,
    f: &SampledFunction,
    sample: &LipConstraintSample,
    slack: f64,
) -> Result<(bool, bool)> {
    let lower = covariant_symbol(rep, t, f.quadrature())?;
    let first = classical_lip_norm(&lower)? <= lip_norm(rep, t, sample)? * (1.0 + 1e-6) + slack;
    let upper = contravariant_symbol(f, rep)?;
    let upper = (&upper + upper.adjoint()) * c(0.5);
    let second = lip_norm(rep, &upper, sample)? <= classical_lip_norm(f)? * (1.0 + 1e-6) + slack;
    Ok((first, second))
}
