//! Linear objectives under spectral-norm ball constraints, solved with a
//! log-determinant barrier.
//!
//! Problem: maximize `c·x` over `x ∈ ℝ^m` subject to `‖B_i(x)‖_op ≤ r_i` for each
//! block, where `B_i(x) = Σ_k x_k B_{i,k}` with Hermitian `B_{i,k}`. Each
//! constraint is the pair of linear matrix inequalities `r_i ± B_i(x) ⪰ 0`.
//! The barrier parameter is `ν = Σ 2·dim(block)`, and a centered iterate at
//! barrier weight `t` is within `ν/t` of the optimum.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numeric::{c, hermitian_cholesky, hs_real, CMat};

#[derive(Debug, Clone)]
pub struct NormBlock {
    pub radius: f64,
    /// One Hermitian matrix per decision variable.
    pub coefficients: Vec<CMat>,
}

#[derive(Debug, Clone)]
pub struct SpectralProgram {
    objective: Vec<f64>,
    blocks: Vec<NormBlock>,
}

#[derive(Debug, Clone)]
pub struct ProgramSolution {
    pub x: Vec<f64>,
    pub value: f64,
    /// Certified bound on the distance to the optimum when `converged`.
    pub gap: f64,
    pub converged: bool,
    pub newton_steps: usize,
}

const MAX_OUTER: usize = 80;
const MAX_NEWTON: usize = 200;
const BARRIER_GROWTH: f64 = 12.0;

impl SpectralProgram {
    pub fn new(objective: Vec<f64>, blocks: Vec<NormBlock>) -> Result<Self> {
        let m = objective.len();
        for (i, b) in blocks.iter().enumerate() {
            if b.coefficients.len() != m {
                return Err(Error::Shape(format!(
                    "block {i} has {} coefficient matrices for {m} variables",
                    b.coefficients.len()
                )));
            }
            if !(b.radius > 0.0) {
                return Err(Error::Domain(format!("block {i} has non-positive radius")));
            }
            let dim = b.coefficients.first().map_or(0, |a| a.nrows());
            if b.coefficients.iter().any(|a| a.nrows() != dim || a.ncols() != dim) {
                return Err(Error::Shape(format!("block {i} mixes matrix sizes")));
            }
        }
        Ok(SpectralProgram { objective, blocks })
    }

    pub fn num_variables(&self) -> usize {
        self.objective.len()
    }

    fn barrier_parameter(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| 2.0 * b.coefficients.first().map_or(0, |a| a.nrows()) as f64)
            .sum()
    }

    fn block_value(block: &NormBlock, x: &[f64]) -> CMat {
        let dim = block.coefficients.first().map_or(0, |a| a.nrows());
        let mut acc = CMat::zeros(dim, dim);
        for (coef, &xk) in block.coefficients.iter().zip(x) {
            if xk != 0.0 {
                acc += coef * c(xk);
            }
        }
        acc
    }

    /// Barrier-weighted objective `t c·x + Σ log det(r ± B)`, or `None` outside the domain.
    fn merit(&self, t: f64, x: &[f64]) -> Option<f64> {
        let mut total = t * dot(&self.objective, x);
        for block in &self.blocks {
            let b = Self::block_value(block, x);
            let dim = b.nrows();
            for sign in [1.0, -1.0] {
                let s = CMat::identity(dim, dim) * c(block.radius) + &b * c(sign);
                let l = hermitian_cholesky(&s)?;
                total += 2.0 * l.diagonal().iter().map(|d| d.re.ln()).sum::<f64>();
            }
        }
        Some(total)
    }

    /// Gradient and negated Hessian of the merit function at a strictly feasible point.
    fn derivatives(&self, t: f64, x: &[f64]) -> Option<(DVector<f64>, DMatrix<f64>)> {
        let m = self.objective.len();
        let mut grad = DVector::from_iterator(m, self.objective.iter().map(|v| t * v));
        let mut hess = DMatrix::<f64>::zeros(m, m);
        for block in &self.blocks {
            let b = Self::block_value(block, x);
            let dim = b.nrows();
            for sign in [1.0, -1.0] {
                let s = CMat::identity(dim, dim) * c(block.radius) + &b * c(sign);
                let l = hermitian_cholesky(&s)?;
                // M_k = L⁻¹ B_k L⁻*; then tr(S⁻¹B_k) = tr M_k, tr(S⁻¹B_k S⁻¹B_l) = tr(M_k M_l).
                let reduced: Vec<CMat> = block
                    .coefficients
                    .iter()
                    .map(|bk| {
                        let y = l.solve_lower_triangular(bk).expect("nonsingular factor");
                        let z = l
                            .solve_lower_triangular(&y.adjoint())
                            .expect("nonsingular factor");
                        z.adjoint()
                    })
                    .collect();
                for k in 0..m {
                    let tr: f64 = reduced[k].diagonal().iter().map(|z| z.re).sum();
                    grad[k] += sign * tr;
                    for l2 in 0..=k {
                        let v = hs_real(&reduced[k], &reduced[l2]);
                        hess[(k, l2)] += v;
                        if l2 != k {
                            hess[(l2, k)] += v;
                        }
                    }
                }
            }
        }
        Some((grad, hess))
    }

    /// Runs the barrier method from the strictly feasible origin until the
    /// certified gap drops below `tol`.
    pub fn solve(&self, tol: f64) -> Result<ProgramSolution> {
        let m = self.objective.len();
        let nu = self.barrier_parameter();
        let mut x = vec![0.0; m];
        if m == 0 || self.objective.iter().all(|&v| v == 0.0) {
            return Ok(ProgramSolution {
                x,
                value: 0.0,
                gap: 0.0,
                converged: true,
                newton_steps: 0,
            });
        }
        let obj_norm = self.objective.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut t = 1.0 / obj_norm;
        let mut steps = 0;
        let mut converged = false;
        for _ in 0..MAX_OUTER {
            let mut centered = false;
            for _ in 0..MAX_NEWTON {
                let (grad, hess) = self
                    .derivatives(t, &x)
                    .ok_or_else(|| Error::Internal("iterate left the feasible region".into()))?;
                let dx = solve_spd(&hess, &grad)?;
                let decrement = grad.dot(&dx);
                if decrement / 2.0 < 1e-10 {
                    centered = true;
                    break;
                }
                let current = self.merit(t, &x).expect("feasible iterate");
                let mut step = 1.0;
                let mut accepted = false;
                while step > 1e-14 {
                    let trial: Vec<f64> = x.iter().zip(dx.iter()).map(|(a, d)| a + step * d).collect();
                    if let Some(val) = self.merit(t, &trial) {
                        if val >= current + 0.25 * step * decrement {
                            x = trial;
                            accepted = true;
                            break;
                        }
                    }
                    step *= 0.5;
                }
                steps += 1;
                if !accepted {
                    // Numerically at the center for this t.
                    centered = true;
                    break;
                }
            }
            if centered && nu / t < tol {
                converged = true;
                break;
            }
            t *= BARRIER_GROWTH;
        }
        let value = dot(&self.objective, &x);
        Ok(ProgramSolution {
            x,
            value,
            gap: nu / t,
            converged,
            newton_steps: steps,
        })
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn solve_spd(h: &DMatrix<f64>, g: &DVector<f64>) -> Result<DVector<f64>> {
    if let Some(ch) = Cholesky::new(h.clone()) {
        return Ok(ch.solve(g));
    }
    // Unbounded directions make the Hessian singular; a tiny ridge keeps the
    // step finite and the line search then decides.
    let scale = h.diagonal().iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    let ridged = h + DMatrix::identity(h.nrows(), h.ncols()) * (1e-12 * scale);
    Cholesky::new(ridged)
        .map(|ch| ch.solve(g))
        .ok_or_else(|| Error::Internal("barrier Hessian is not positive definite".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(v: f64) -> CMat {
        CMat::from_element(1, 1, c(v))
    }

    #[test]
    fn box_constrained_linear_program() {
        // max x + 2y with |x| ≤ 1, |y| ≤ 3, |x − y| ≤ 3.
        let blocks = vec![
            NormBlock { radius: 1.0, coefficients: vec![scalar(1.0), scalar(0.0)] },
            NormBlock { radius: 3.0, coefficients: vec![scalar(0.0), scalar(1.0)] },
            NormBlock { radius: 3.0, coefficients: vec![scalar(1.0), scalar(-1.0)] },
        ];
        let p = SpectralProgram::new(vec![1.0, 2.0], blocks).unwrap();
        let sol = p.solve(1e-9).unwrap();
        assert!(sol.converged);
        assert!((sol.value - 7.0).abs() < 1e-8, "{}", sol.value);
    }

    #[test]
    fn spectral_ball() {
        // max tr(diag(1,−1)·X) over real symmetric 2x2 X = [[x, y], [y, −x]] with ‖X‖ ≤ 1.
        let e1 = CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
        let e2 = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let p = SpectralProgram::new(
            vec![2.0, 0.0],
            vec![NormBlock { radius: 1.0, coefficients: vec![e1, e2] }],
        )
        .unwrap();
        let sol = p.solve(1e-10).unwrap();
        assert!((sol.value - 2.0).abs() < 1e-9);
    }
}
