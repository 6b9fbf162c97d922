//! Irreducible SU(2) representations, group elements, and integration over the
//! group and the sphere `SU(2)/U(1)`.
//!
//! Generators are normalized as `J_i = 2 L_i` where `L_i` are the usual
//! angular-momentum operators, so `[J_j, J_k] = 2i ε_{jkl} J_l` and
//! `J_1² + J_2² + J_3² = (n² − 1)·1`. The basis is fixed by the ladder
//! construction: `J_3 = diag(n−1, n−3, …, −(n−1))`.

mod group;
mod quadrature;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::{c, hermitian_eigen, max_abs, pairwise_sum_matrices, CMat, CVec};
use num_complex::Complex64;

pub use group::{section, sphere_angles, GroupPoint};
pub use quadrature::{
    gauss_legendre, geodesic_sphere_quadrature, sphere_quadrature, PolarRule, SphereQuadrature,
};

/// An `n`-dimensional irreducible representation of SU(2).
#[derive(Debug, Clone)]
pub struct SpinRep {
    n: usize,
    j: [CMat; 3],
    // J_2 = V diag(λ) V^*, used for the middle Euler factor.
    j2_values: Vec<f64>,
    j2_vectors: CMat,
}

/// Constructs the irreducible representation of dimension `n` from ladder operators.
pub fn spin_rep(n: usize) -> Result<SpinRep> {
    if n == 0 {
        return Err(Error::InvalidDimension(
            "representation dimension must be ≥ 1".into(),
        ));
    }
    let spin = (n as f64 - 1.0) / 2.0;
    let m = |k: usize| spin - k as f64;
    // L_+ |m⟩ = sqrt(j(j+1) − m(m+1)) |m+1⟩; index k carries m = j − k.
    let mut raise = CMat::zeros(n, n);
    for k in 1..n {
        let mk = m(k);
        raise[(k - 1, k)] = c((spin * (spin + 1.0) - mk * (mk + 1.0)).sqrt());
    }
    let lower = raise.adjoint();
    let j1 = (&raise + &lower) * c(1.0);
    let j2 = (&raise - &lower) * Complex64::new(0.0, -1.0);
    let mut j3 = CMat::zeros(n, n);
    for k in 0..n {
        j3[(k, k)] = c(2.0 * m(k));
    }
    let (j2_values, j2_vectors) = hermitian_eigen(&j2);
    Ok(SpinRep {
        n,
        j: [j1, j2, j3],
        j2_values,
        j2_vectors,
    })
}

impl SpinRep {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Generator `J_{k+1}` for `k = 0, 1, 2`.
    pub fn generator(&self, k: usize) -> &CMat {
        &self.j[k]
    }

    pub fn generators(&self) -> &[CMat; 3] {
        &self.j
    }

    /// `exp(−iα J_3/2)`, diagonal.
    pub fn z_rotation(&self, alpha: f64) -> CVec {
        CVec::from_iterator(
            self.n,
            (0..self.n).map(|k| {
                let m = self.j[2][(k, k)].re / 2.0;
                Complex64::from_polar(1.0, -alpha * m)
            }),
        )
    }

    /// `exp(−iβ J_2/2)`.
    pub fn small_d(&self, beta: f64) -> CMat {
        let phases = CVec::from_iterator(
            self.n,
            self.j2_values
                .iter()
                .map(|&l| Complex64::from_polar(1.0, -beta * l / 2.0)),
        );
        let scaled = CMat::from_fn(self.n, self.n, |r, col| {
            self.j2_vectors[(r, col)] * phases[col]
        });
        scaled * self.j2_vectors.adjoint()
    }

    /// `U_g = exp(−iα J_3/2) exp(−iβ J_2/2) exp(−iγ J_3/2)` for `g = R_z(α)R_y(β)R_z(γ)`.
    pub fn unitary(&self, g: &GroupPoint) -> CMat {
        let (alpha, beta, gamma) = g.zyz();
        let left = self.z_rotation(alpha);
        let right = self.z_rotation(gamma);
        let mid = self.small_d(beta);
        CMat::from_fn(self.n, self.n, |r, col| left[r] * mid[(r, col)] * right[col])
    }

    /// `U_g v` in O(n²), without forming `U_g`.
    pub fn apply_unitary(&self, g: &GroupPoint, v: &CVec) -> CVec {
        let (alpha, beta, gamma) = g.zyz();
        let right = self.z_rotation(gamma);
        let w = v.component_mul(&right);
        let mut y = self.j2_vectors.ad_mul(&w);
        for (k, &l) in self.j2_values.iter().enumerate() {
            y[k] *= Complex64::from_polar(1.0, -beta * l / 2.0);
        }
        (&self.j2_vectors * y).component_mul(&self.z_rotation(alpha))
    }

    /// `α_g(T) = U_g T U_g^*`.
    pub fn conjugate(&self, g: &GroupPoint, t: &CMat) -> CMat {
        let u = self.unitary(g);
        &u * t * u.adjoint()
    }

    /// Infinitesimal generator of the action along a unit direction:
    /// `dU(X) = −(i/2) Σ X_k J_k`.
    pub fn lie_generator(&self, direction: [f64; 3]) -> CMat {
        (&self.j[0] * c(direction[0]) + &self.j[1] * c(direction[1]) + &self.j[2] * c(direction[2]))
            * Complex64::new(0.0, -0.5)
    }

    /// Residuals of the defining identities: (self-adjointness, commutation, Casimir),
    /// each the largest absolute entry of the defect.
    pub fn identity_residuals(&self) -> (f64, f64, f64) {
        let herm = self
            .j
            .iter()
            .map(|m| max_abs(&(m - m.adjoint())))
            .fold(0.0, f64::max);
        let mut comm: f64 = 0.0;
        for (a, b, l) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let lhs = &self.j[a] * &self.j[b] - &self.j[b] * &self.j[a];
            let rhs = &self.j[l] * Complex64::new(0.0, 2.0);
            comm = comm.max(max_abs(&(lhs - rhs)));
        }
        let cas = self.j.iter().map(|m| m * m).fold(CMat::zeros(self.n, self.n), |a, b| a + b)
            - CMat::identity(self.n, self.n) * c((self.n * self.n) as f64 - 1.0);
        (herm, comm, max_abs(&cas))
    }
}

/// `U_g` for `g` in the representation.
pub fn unitary(rep: &SpinRep, g: &GroupPoint) -> CMat {
    rep.unitary(g)
}

/// Highest-weight vector ξ (unit eigenvector of `J_3` for the eigenvalue `n − 1`)
/// and the rank-one projection `P = ξ ξ^*`.
pub fn highest_weight(rep: &SpinRep) -> Result<(CVec, CMat)> {
    let (values, vectors) = hermitian_eigen(rep.generator(2));
    let n = rep.dim();
    let top = values[n - 1];
    if n > 1 && (top - values[n - 2]).abs() < 0.5 {
        return Err(Error::Internal("degenerate top weight of J_3".into()));
    }
    let mut xi: CVec = vectors.column(n - 1).into_owned();
    // Fix the phase so the largest component is real and positive.
    let (kmax, _) = xi
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (k, z)| if z.norm() > acc.1 { (k, z.norm()) } else { acc });
    let phase = xi[kmax] / c(xi[kmax].norm());
    xi /= phase;
    let p = &xi * xi.adjoint();
    Ok((xi, p))
}

/// Group average `∫ α_g(T) dg` over all of SU(2), using the sphere rule for the
/// coset `g R` and a circle of `2·level` right rotations `R_z(χ)`.
pub fn haar_average(rep: &SpinRep, t: &CMat, quad: &SphereQuadrature) -> Result<CMat> {
    let n = rep.dim();
    if t.nrows() != n || t.ncols() != n {
        return Err(Error::Shape(format!(
            "matrix is {}x{}, representation has dimension {n}",
            t.nrows(),
            t.ncols()
        )));
    }
    let circle = 2 * quad.level();
    let terms: Vec<CMat> = quad
        .nodes()
        .par_iter()
        .zip(quad.weights().par_iter())
        .map(|(&(theta, phi), &w)| {
            let base = section(theta, phi);
            let ring: Vec<CMat> = (0..circle)
                .map(|k| {
                    let chi = 2.0 * std::f64::consts::PI * k as f64 / circle as f64;
                    rep.conjugate(&base.compose(&GroupPoint::rotation_z(chi)), t)
                })
                .collect();
            pairwise_sum_matrices(&ring, n, n) * c(w / circle as f64)
        })
        .collect();
    Ok(pairwise_sum_matrices(&terms, n, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn pauli_matrices_at_n2() {
        let rep = spin_rep(2).unwrap();
        let s1 = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let s2 = CMat::from_row_slice(
            2,
            2,
            &[c(0.0), Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), c(0.0)],
        );
        let s3 = CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
        assert!(max_abs(&(rep.generator(0) - s1)) < 1e-15);
        assert!(max_abs(&(rep.generator(1) - s2)) < 1e-15);
        assert!(max_abs(&(rep.generator(2) - s3)) < 1e-15);
    }

    #[test]
    fn trivial_and_zero_dimension() {
        let rep = spin_rep(1).unwrap();
        assert_eq!(rep.generator(0)[(0, 0)], c(0.0));
        let (h, cm, cas) = rep.identity_residuals();
        assert_eq!((h, cm, cas), (0.0, 0.0, 0.0));
        assert!(matches!(spin_rep(0), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn identities_hold_up_to_n20() {
        for n in 1..=20 {
            let rep = spin_rep(n).unwrap();
            let (h, cm, cas) = rep.identity_residuals();
            assert!(h < 1e-13 && cm < 1e-12 && cas < 1e-12, "n={n}: {h} {cm} {cas}");
        }
    }

    #[test]
    fn two_pi_rotation_is_minus_identity() {
        let rep = spin_rep(2).unwrap();
        let g = GroupPoint::from_axis_angle([0.0, 0.0, 1.0], 2.0 * PI - 1e-300).unwrap();
        let u = rep.unitary(&g);
        let minus = -CMat::identity(2, 2);
        assert!(max_abs(&(u - minus)) < 1e-12);
        let half = GroupPoint::from_axis_angle([0.0, 0.0, 1.0], PI).unwrap();
        let u = rep.unitary(&half);
        let expected = CMat::from_diagonal(&CVec::from_vec(vec![
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
        ]));
        assert!(max_abs(&(u - expected)) < 1e-12);
    }

    #[test]
    fn highest_weight_of_n3() {
        let rep = spin_rep(3).unwrap();
        let (xi, p) = highest_weight(&rep).unwrap();
        let lhs = rep.generator(2) * &xi;
        assert!((lhs - &xi * c(2.0)).norm() < 1e-13);
        assert!((crate::numeric::trace(&p) - c(1.0)).norm() < 1e-14);
        assert!(max_abs(&(&p * &p - &p)) < 1e-14);
    }
}
