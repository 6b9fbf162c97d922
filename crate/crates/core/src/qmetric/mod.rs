//! Length functions, Lip-norms from the SU(2) action, state-space metrics, and
//! the quantum Gromov–Hausdorff bound estimate `γ_n + ‖σ̆(σ_T) − T‖`.
//!
//! The length of a group element is its SO(3) rotation angle, so the quotient
//! metric on `SU(2)/U(1)` is the round geodesic distance on the unit sphere.
//! Conjugation by `U_g` is isometric, hence
//! `‖α_g(a) − a‖ ≤ ℓ(g) · sup_X ‖[dU(X), a]‖` and the Lip-norm is the supremum
//! of its infinitesimal version over unit directions X.

mod bound;
mod metric;
mod program;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fuzzy_berezin::SampledFunction;
use crate::numeric::{c, hermitian_eigen, hermitian_op_norm, is_hermitian, trace, CMat};
use crate::su2_reps::{GroupPoint, SpinRep};

pub use bound::{
    berezin_defect, gamma, gh_upper_bound, lip_contraction_check, DefectReport, GhEstimate,
};
pub use metric::{
    finite_state_metric, state_metric, state_metric_refined, traceless_hermitian_basis,
    MetricResult,
};
pub use program::{NormBlock, ProgramSolution, SpectralProgram};

/// A length function on SU(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LengthFunction {
    /// Rotation angle of the SO(3) image, in [0, π].
    #[default]
    RotationAngle,
}

impl LengthFunction {
    pub fn eval(&self, g: &GroupPoint) -> f64 {
        match self {
            LengthFunction::RotationAngle => g.so3_angle(),
        }
    }

    /// Derivative of the length along a unit one-parameter subgroup at the identity.
    pub fn directional_rate(&self) -> f64 {
        1.0
    }
}

/// A density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    rho: CMat,
}

impl State {
    /// Validates Hermiticity, positivity (eigenvalues ≥ −1e−12) and unit trace.
    pub fn new(rho: CMat) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::Shape("density matrix must be square".into()));
        }
        if !is_hermitian(&rho, 1e-12) {
            return Err(Error::Domain("density matrix is not Hermitian".into()));
        }
        let tr = trace(&rho);
        if (tr - c(1.0)).norm() > 1e-12 {
            return Err(Error::Domain(format!("density matrix has trace {tr}")));
        }
        let (values, _) = hermitian_eigen(&rho);
        if values.first().is_some_and(|&v| v < -1e-12) {
            return Err(Error::Domain(format!(
                "density matrix has negative eigenvalue {}",
                values[0]
            )));
        }
        Ok(State { rho })
    }

    /// Vector state `v v^* / ‖v‖²`.
    pub fn pure(v: &crate::numeric::CVec) -> Result<Self> {
        let norm = v.norm();
        if !(norm > 0.0) {
            return Err(Error::Domain("zero vector has no state".into()));
        }
        let u = v / c(norm);
        let rho = &u * u.adjoint();
        State::new((&rho + rho.adjoint()) * c(0.5))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        State {
            rho: CMat::identity(n, n) * c(1.0 / n as f64),
        }
    }

    pub fn rho(&self) -> &CMat {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    /// `τ(ρ a)` for Hermitian `a`.
    pub fn expect(&self, a: &CMat) -> f64 {
        trace(&(&self.rho * a)).re
    }
}

/// Points on the unit sphere from the Fibonacci lattice.
pub fn fibonacci_sphere(count: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// Finite set of group elements and infinitesimal directions over which the
/// supremum defining the Lip-norm is taken.
#[derive(Debug, Clone)]
pub struct LipConstraintSample {
    points: Vec<GroupPoint>,
    lengths: Vec<f64>,
    directions: Vec<[f64; 3]>,
    length: LengthFunction,
}

impl LipConstraintSample {
    /// Builds from explicit points; the coordinate axes are always among the
    /// directions. Points are sorted by length so iteration order is fixed.
    pub fn from_parts(points: Vec<GroupPoint>, extra_directions: Vec<[f64; 3]>) -> Result<Self> {
        let length = LengthFunction::RotationAngle;
        let mut pairs: Vec<(f64, GroupPoint)> =
            points.into_iter().map(|g| (length.eval(&g), g)).collect();
        if pairs.is_empty() {
            return Err(Error::Domain("constraint sample needs at least one group point".into()));
        }
        if let Some((_, g)) = pairs.iter().find(|(l, _)| *l <= 1e-12) {
            return Err(Error::Domain(format!(
                "group point {:?} has zero length",
                g.quaternion()
            )));
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut directions = vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for d in extra_directions {
            let norm = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            if !(norm > 0.0) {
                return Err(Error::Domain("zero direction".into()));
            }
            directions.push(d.map(|v| v / norm));
        }
        let (lengths, points) = pairs.into_iter().unzip();
        Ok(LipConstraintSample {
            points,
            lengths,
            directions,
            length,
        })
    }

    /// Deterministic sample with about `density` group points: rotations by
    /// `jπ/A` (j = 1..A) about Fibonacci axes, together with `⌈√density⌉`
    /// extra Fibonacci directions.
    pub fn with_density(density: usize) -> Result<Self> {
        if density == 0 {
            return Err(Error::Domain("sample density must be ≥ 1".into()));
        }
        let axes_count = (density as f64).sqrt().ceil() as usize;
        let angle_count = density.div_ceil(axes_count);
        let axes = fibonacci_sphere(axes_count);
        let mut points = Vec::with_capacity(axes_count * angle_count);
        for a in &axes {
            for j in 1..=angle_count {
                let psi = std::f64::consts::PI * j as f64 / angle_count as f64;
                points.push(GroupPoint::from_axis_angle(*a, psi)?);
            }
        }
        Self::from_parts(points, fibonacci_sphere(axes_count))
    }

    pub fn points(&self) -> &[GroupPoint] {
        &self.points
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn directions(&self) -> &[[f64; 3]] {
        &self.directions
    }

    pub fn length_function(&self) -> LengthFunction {
        self.length
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn hermitian_tolerance(t: &CMat) -> f64 {
    1e-10 * t.iter().fold(1.0f64, |a, z| a.max(z.norm()))
}

fn check_hermitian(rep: &SpinRep, t: &CMat) -> Result<()> {
    let n = rep.dim();
    if t.nrows() != n || t.ncols() != n {
        return Err(Error::Shape(format!(
            "matrix is {}x{}, expected {n}x{n}",
            t.nrows(),
            t.ncols()
        )));
    }
    if !is_hermitian(t, hermitian_tolerance(t)) {
        return Err(Error::Domain("Lip-norm requires a Hermitian matrix".into()));
    }
    Ok(())
}

/// `‖[dU(X), T]‖` for a unit direction X.
fn directional_quotient(gens: &[CMat; 3], t: &CMat, x: [f64; 3]) -> f64 {
    let g = (&gens[0] * c(x[0]) + &gens[1] * c(x[1]) + &gens[2] * c(x[2])) * c(0.5);
    // [−(i/2)X·J, T] = −i[g, T] is Hermitian when T is.
    let comm = (&g * t - t * &g) * crate::numeric::I;
    hermitian_op_norm(&comm)
}

/// Infinitesimal Lip-norm `sup_{|X|=1} ‖[dU(X), T]‖`, evaluated on the sample
/// directions and then refined by a pattern search on the sphere started from
/// the best few directions. The returned value is attained at an actual unit
/// direction, so it never exceeds the true supremum.
pub fn infinitesimal_lip_norm(rep: &SpinRep, t: &CMat, directions: &[[f64; 3]]) -> Result<f64> {
    check_hermitian(rep, t)?;
    let gens = rep.generators();
    let mut scored: Vec<(f64, [f64; 3])> = directions
        .par_iter()
        .map(|&x| (directional_quotient(gens, t, x), x))
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let best = scored
        .iter()
        .take(3)
        .map(|&(v, x)| polish_direction(|d| directional_quotient(gens, t, d), x, v))
        .fold(0.0, f64::max);
    Ok(best)
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.map(|x| x / n)
}

fn tangent_frame(x: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if x[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = helper[0] * x[0] + helper[1] * x[1] + helper[2] * x[2];
    let u = normalize([helper[0] - d * x[0], helper[1] - d * x[1], helper[2] - d * x[2]]);
    let v = [
        x[1] * u[2] - x[2] * u[1],
        x[2] * u[0] - x[0] * u[2],
        x[0] * u[1] - x[1] * u[0],
    ];
    (u, v)
}

fn polish_direction(f: impl Fn([f64; 3]) -> f64, start: [f64; 3], start_value: f64) -> f64 {
    let mut x = start;
    let mut best = start_value;
    let mut h = 0.25;
    while h > 1e-9 {
        let (u, v) = tangent_frame(x);
        let mut improved = false;
        for (a, b) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
            let cand = normalize([
                x[0] + h * (a * u[0] + b * v[0]),
                x[1] + h * (a * u[1] + b * v[1]),
                x[2] + h * (a * u[2] + b * v[2]),
            ]);
            let val = f(cand);
            if val > best {
                best = val;
                x = cand;
                improved = true;
                break;
            }
        }
        if !improved {
            h /= 2.0;
        }
    }
    best
}

/// Sampled Lip-norm `max(max_g ‖α_g(T) − T‖/ℓ(g), infinitesimal part)`.
///
/// Both parts are attained by actual group elements or directions, so the
/// result is a lower bound for the supremum over the whole group.
pub fn lip_norm(rep: &SpinRep, t: &CMat, sample: &LipConstraintSample) -> Result<f64> {
    check_hermitian(rep, t)?;
    // Scalars drop out of every quotient; removing them first makes the
    // seminorm vanish exactly on real multiples of the identity.
    let n = rep.dim();
    let t = &(t - CMat::identity(n, n) * (trace(t) / c(n as f64)));
    if t.iter().all(|z| z.norm() == 0.0) {
        return Ok(0.0);
    }
    let finite = sample
        .points()
        .par_iter()
        .zip(sample.lengths().par_iter())
        .map(|(g, &len)| {
            let u = rep.unitary(g);
            let moved = &u * t * u.adjoint();
            hermitian_op_norm(&(moved - t)) / len
        })
        .reduce(|| 0.0, f64::max);
    let infinitesimal = infinitesimal_lip_norm(rep, t, sample.directions())?;
    Ok(finite.max(infinitesimal))
}

/// Geodesic distance between points of the unit sphere, stable for nearby points.
pub fn sphere_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let p = cartesian(a);
    let q = cartesian(b);
    let chord = ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
    2.0 * (chord / 2.0).min(1.0).asin()
}

pub(crate) fn cartesian((theta, phi): (f64, f64)) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// `max_{p≠q} |f(p) − f(q)| / ρ(p, q)` over node pairs, ρ the round geodesic
/// distance. Requires quadrature level ≥ 4.
pub fn classical_lip_norm(f: &SampledFunction) -> Result<f64> {
    let quad = f.quadrature();
    if quad.level() < 4 {
        return Err(Error::Precondition(format!(
            "classical Lip-norm needs quadrature level ≥ 4, got {}",
            quad.level()
        )));
    }
    let points: Vec<[f64; 3]> = quad.nodes().iter().map(|&p| cartesian(p)).collect();
    let values = f.values();
    let best = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let mut local: f64 = 0.0;
            for j in (i + 1)..points.len() {
                let diff = (values[i] - values[j]).norm();
                if diff == 0.0 {
                    continue;
                }
                let (p, q) = (points[i], points[j]);
                let chord =
                    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt();
                let rho = 2.0 * (chord / 2.0).min(1.0).asin();
                if rho > 0.0 {
                    local = local.max(diff / rho);
                }
            }
            local
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}
