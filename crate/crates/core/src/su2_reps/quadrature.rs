//! Product quadrature rules for the normalized measure on the unit sphere.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on [−1, 1], ascending nodes.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// How the polar direction is discretized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolarRule {
    /// Gauss–Legendre in `cos θ`: exact for spherical harmonics of degree
    /// `≤ 2·level − 1`.
    CosTheta,
    /// Gauss–Legendre in θ itself with weight `sin θ`: spectrally accurate for
    /// integrands smooth in geodesic polar coordinates, such as the distance
    /// from the north pole, which is not smooth as a function on the sphere.
    Geodesic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereQuadrature {
    level: usize,
    rule: PolarRule,
    polar: Vec<f64>,
    azimuth: Vec<f64>,
    /// (polar index, azimuth index) per node, polar-major.
    nodes: Vec<(f64, f64)>,
    weights: Vec<f64>,
    polar_weights: Vec<f64>,
}

impl SphereQuadrature {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn rule(&self) -> PolarRule {
        self.rule
    }

    /// `(θ, φ)` per node.
    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Distinct polar angles, in node order.
    pub fn polar_angles(&self) -> &[f64] {
        &self.polar
    }

    /// Weight of each polar ring (sums to one).
    pub fn polar_weights(&self) -> &[f64] {
        &self.polar_weights
    }

    pub fn azimuths(&self) -> &[f64] {
        &self.azimuth
    }

    /// Node index of polar ring `i`, azimuth `j`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.azimuth.len() + j
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        let terms: Vec<f64> = values
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| v * w)
            .collect();
        crate::numeric::pairwise_sum(&terms)
    }

    pub fn integrate_fn(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let values: Vec<f64> = self.nodes.iter().map(|&(t, p)| f(t, p)).collect();
        self.integrate(&values)
    }
}

/// Product rule: Gauss–Legendre with `level` nodes in `cos θ`, `2·level`
/// uniform azimuths. Exact for spherical harmonics up to degree `2·level − 1`.
pub fn sphere_quadrature(level: usize) -> Result<SphereQuadrature> {
    build(level, PolarRule::CosTheta)
}

/// Product rule with Gauss–Legendre nodes in the polar angle itself.
pub fn geodesic_sphere_quadrature(level: usize) -> Result<SphereQuadrature> {
    build(level, PolarRule::Geodesic)
}

fn build(level: usize, rule: PolarRule) -> Result<SphereQuadrature> {
    if level == 0 {
        return Err(Error::InvalidDimension("quadrature level must be ≥ 1".into()));
    }
    let (x, w) = gauss_legendre(level);
    let (polar, mut polar_weights): (Vec<f64>, Vec<f64>) = match rule {
        PolarRule::CosTheta => x
            .iter()
            .zip(&w)
            .map(|(&xi, &wi)| (xi.acos(), wi / 2.0))
            .unzip(),
        PolarRule::Geodesic => x
            .iter()
            .zip(&w)
            .map(|(&ti, &wi)| {
                let theta = PI * (ti + 1.0) / 2.0;
                (theta, wi * PI / 2.0 * theta.sin() / 2.0)
            })
            .unzip(),
    };
    if rule == PolarRule::Geodesic {
        let total = crate::numeric::pairwise_sum(&polar_weights);
        for v in &mut polar_weights {
            *v /= total;
        }
    }
    let m = 2 * level;
    let azimuth: Vec<f64> = (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect();
    let mut nodes = Vec::with_capacity(level * m);
    let mut weights = Vec::with_capacity(level * m);
    for (t, pw) in polar.iter().zip(&polar_weights) {
        for &p in &azimuth {
            nodes.push((*t, p));
            weights.push(pw / m as f64);
        }
    }
    Ok(SphereQuadrature {
        level,
        rule,
        polar,
        azimuth,
        nodes,
        weights,
        polar_weights,
    })
}
