//! Kantorovich-type state-space metrics.

use num_complex::Complex64;

use super::program::{NormBlock, SpectralProgram};
use super::{LipConstraintSample, State};
use crate::error::{Error, Result};
use crate::numeric::{c, trace, CMat, I};
use crate::su2_reps::SpinRep;

/// Orthonormal basis (for `Re tr(a^* b)`) of the traceless Hermitian `n×n` matrices.
pub fn traceless_hermitian_basis(n: usize) -> Vec<CMat> {
    let mut basis = Vec::with_capacity(n * n - 1);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..n {
        for k in (j + 1)..n {
            let mut sym = CMat::zeros(n, n);
            sym[(j, k)] = c(s);
            sym[(k, j)] = c(s);
            basis.push(sym);
            let mut anti = CMat::zeros(n, n);
            anti[(j, k)] = -I * s;
            anti[(k, j)] = I * s;
            basis.push(anti);
        }
    }
    for l in 1..n {
        let norm = ((l * (l + 1)) as f64).sqrt();
        let mut d = CMat::zeros(n, n);
        for k in 0..l {
            d[(k, k)] = c(1.0 / norm);
        }
        d[(l, l)] = c(-(l as f64) / norm);
        basis.push(d);
    }
    basis
}

#[derive(Debug, Clone)]
pub struct MetricResult {
    /// `τ((ρ_μ − ρ_ν) a)` for the returned certificate `a`.
    pub value: f64,
    /// A Hermitian, traceless `a` feasible for every sampled constraint.
    pub certificate: CMat,
    /// Whether the solver certified optimality for the sampled relaxation within `tol`.
    pub converged: bool,
    /// Certified bound on the optimality gap of `value`.
    pub gap: f64,
    /// Number of group points in the sample used.
    pub sample_size: usize,
}

/// `sup{ τ((ρ_μ − ρ_ν) a) : a = a^*, ‖α_g(a) − a‖ ≤ ℓ(g), ‖[dU(X), a]‖ ≤ 1 }` over
/// the sampled group points g and directions X.
///
/// Solved by a log-barrier interior-point method over the traceless Hermitian
/// matrices (adding scalars changes neither the objective nor the constraints).
/// Dropping constraints can only raise the supremum, so the sampled value is an
/// upper estimate of the true metric that decreases as the sample is refined;
/// for the sampled problem itself, `value` is attained (a lower bound) and is
/// within `gap` of the optimum.
pub fn state_metric(
    mu: &State,
    nu: &State,
    rep: &SpinRep,
    sample: &LipConstraintSample,
    tol: f64,
) -> Result<MetricResult> {
    let n = rep.dim();
    if mu.dim() != n || nu.dim() != n {
        return Err(Error::Shape(format!(
            "states of dimension {} and {} for a representation of dimension {n}",
            mu.dim(),
            nu.dim()
        )));
    }
    let delta = mu.rho() - nu.rho();
    if n == 1 || delta.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return Ok(MetricResult {
            value: 0.0,
            certificate: CMat::zeros(n, n),
            converged: true,
            gap: 0.0,
            sample_size: sample.len(),
        });
    }
    let basis = traceless_hermitian_basis(n);
    let objective: Vec<f64> = basis.iter().map(|e| trace(&(&delta * e)).re).collect();

    let mut blocks = Vec::with_capacity(sample.len() + sample.directions().len());
    for (g, &len) in sample.points().iter().zip(sample.lengths()) {
        let u = rep.unitary(g);
        let coefficients = basis
            .iter()
            .map(|e| {
                let m = &u * e * u.adjoint() - e;
                (&m + m.adjoint()) * c(0.5)
            })
            .collect();
        blocks.push(NormBlock {
            radius: len,
            coefficients,
        });
    }
    let rate = sample.length_function().directional_rate();
    for &x in sample.directions() {
        let gen = rep.lie_generator(x);
        let coefficients = basis
            .iter()
            .map(|e| {
                let m = &gen * e - e * &gen;
                (&m + m.adjoint()) * c(0.5)
            })
            .collect();
        blocks.push(NormBlock {
            radius: rate,
            coefficients,
        });
    }

    let program = SpectralProgram::new(objective, blocks)?;
    let sol = program.solve(tol)?;
    let mut certificate = CMat::zeros(n, n);
    for (e, &x) in basis.iter().zip(&sol.x) {
        certificate += e * c(x);
    }
    let value = trace(&(&delta * &certificate)).re;
    Ok(MetricResult {
        value,
        certificate,
        converged: sol.converged,
        gap: sol.gap,
        sample_size: sample.len(),
    })
}

/// Repeats [`state_metric`] with the group sample density doubling from
/// `initial_density` until two consecutive values differ by less than `tol`,
/// or `max_rounds` is reached (then `converged` is false).
pub fn state_metric_refined(
    mu: &State,
    nu: &State,
    rep: &SpinRep,
    initial_density: usize,
    tol: f64,
    max_rounds: usize,
) -> Result<MetricResult> {
    let mut density = initial_density.max(1);
    let mut previous: Option<f64> = None;
    let mut last = None;
    for _ in 0..max_rounds.max(1) {
        let sample = LipConstraintSample::with_density(density)?;
        let result = state_metric(mu, nu, rep, &sample, tol)?;
        let settled = previous.is_some_and(|p| (p - result.value).abs() < tol);
        previous = Some(result.value);
        if settled {
            return Ok(result);
        }
        last = Some(result);
        density *= 2;
    }
    let mut result = last.expect("at least one round");
    result.converged = false;
    Ok(result)
}

/// Kantorovich (Wasserstein-1) distance between probability vectors on a
/// finite metric space: `sup{ Σ (μ_i − ν_i) f_i : |f_i − f_j| ≤ d_ij }`.
///
/// This is the state metric of the commutative algebra of functions on the
/// points with its classical Lip-norm. Returns `(value, f, converged)`.
pub fn finite_state_metric(
    distances: &[Vec<f64>],
    mu: &[f64],
    nu: &[f64],
    tol: f64,
) -> Result<(f64, Vec<f64>, bool)> {
    let k = distances.len();
    if mu.len() != k || nu.len() != k || distances.iter().any(|row| row.len() != k) {
        return Err(Error::Shape("distance matrix and measures disagree in size".into()));
    }
    for (name, m) in [("mu", mu), ("nu", nu)] {
        if m.iter().any(|&v| v < 0.0) || (m.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("{name} is not a probability vector")));
        }
    }
    if k <= 1 {
        return Ok((0.0, vec![0.0; k], true));
    }
    // f_0 is pinned to 0: constants do not change the objective.
    let scalar = |v: f64| CMat::from_element(1, 1, c(v));
    let mut blocks = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let d = distances[i][j];
            if !(d > 0.0) || (d - distances[j][i]).abs() > 1e-12 {
                return Err(Error::Domain(format!("invalid distance between {i} and {j}")));
            }
            let coefficients = (1..k)
                .map(|v| {
                    let mut coef = 0.0;
                    if v == i {
                        coef += 1.0;
                    }
                    if v == j {
                        coef -= 1.0;
                    }
                    scalar(coef)
                })
                .collect();
            blocks.push(NormBlock {
                radius: d,
                coefficients,
            });
        }
    }
    let objective: Vec<f64> = (1..k).map(|v| mu[v] - nu[v]).collect();
    let sol = SpectralProgram::new(objective, blocks)?.solve(tol)?;
    let mut f = vec![0.0];
    f.extend(sol.x.iter().copied());
    let value: f64 = f.iter().zip(mu.iter().zip(nu)).map(|(fi, (a, b))| fi * (a - b)).sum();
    Ok((value, f, sol.converged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::hs_real;

    #[test]
    fn basis_is_orthonormal_and_traceless() {
        let b = traceless_hermitian_basis(3);
        assert_eq!(b.len(), 8);
        for (i, x) in b.iter().enumerate() {
            assert!(trace(x).norm() < 1e-15);
            for (j, y) in b.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((hs_real(x, y) - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn two_point_space() {
        for r in [0.5, 1.0, 3.25] {
            let d = vec![vec![0.0, r], vec![r, 0.0]];
            let (v, _, ok) = finite_state_metric(&d, &[1.0, 0.0], &[0.0, 1.0], 1e-9).unwrap();
            assert!(ok);
            assert!((v - r).abs() < 1e-8, "{v} vs {r}");
        }
    }

    #[test]
    fn three_point_path() {
        // Points on a line at 0, 1, 3: W1(δ_0, δ_2) = 3, W1(δ_0, ½δ_1 + ½δ_2) = 2.
        let d = vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 2.0], vec![3.0, 2.0, 0.0]];
        let (v, _, _) = finite_state_metric(&d, &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0], 1e-9).unwrap();
        assert!((v - 3.0).abs() < 1e-8);
        let (v, _, _) = finite_state_metric(&d, &[1.0, 0.0, 0.0], &[0.0, 0.5, 0.5], 1e-9).unwrap();
        assert!((v - 2.0).abs() < 1e-8);
    }
}
