//! SU(2) elements stored as unit quaternions.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// An element of SU(2), `cos(ψ/2) − i sin(ψ/2) n·σ` in the defining picture.
///
/// Stored as the unit quaternion `(w, x, y, z) = (cos ψ/2, sin ψ/2 · n)`, so the
/// double cover is faithful: rotating by 2π gives `−1`, not the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupPoint {
    q: [f64; 4],
}

impl GroupPoint {
    pub fn identity() -> Self {
        GroupPoint {
            q: [1.0, 0.0, 0.0, 0.0],
        }
    }

    /// `exp(−(i/2)·angle·axis·σ)`. The axis is normalized; a zero axis is rejected.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Result<Self> {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !(norm > 0.0) || !angle.is_finite() {
            return Err(Error::Domain(format!(
                "axis {axis:?} / angle {angle} do not define a rotation"
            )));
        }
        let (s, c) = (angle / 2.0).sin_cos();
        Ok(GroupPoint {
            q: [c, s * axis[0] / norm, s * axis[1] / norm, s * axis[2] / norm],
        })
    }

    /// Builds from a quaternion, normalizing it.
    pub fn from_quaternion(q: [f64; 4]) -> Result<Self> {
        let norm = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Domain("zero quaternion".into()));
        }
        Ok(GroupPoint {
            q: q.map(|v| v / norm),
        })
    }

    pub fn rotation_z(angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        GroupPoint { q: [c, 0.0, 0.0, s] }
    }

    pub fn rotation_y(angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        GroupPoint { q: [c, 0.0, s, 0.0] }
    }

    pub fn quaternion(&self) -> [f64; 4] {
        self.q
    }

    /// SU(2) geodesic parameter ψ ∈ [0, 2π].
    pub fn angle(&self) -> f64 {
        let v = (self.q[1].powi(2) + self.q[2].powi(2) + self.q[3].powi(2)).sqrt();
        2.0 * v.atan2(self.q[0])
    }

    /// Unit rotation axis; the z-axis when the element is ±1.
    pub fn axis(&self) -> [f64; 3] {
        let v = (self.q[1].powi(2) + self.q[2].powi(2) + self.q[3].powi(2)).sqrt();
        if v == 0.0 {
            [0.0, 0.0, 1.0]
        } else {
            [self.q[1] / v, self.q[2] / v, self.q[3] / v]
        }
    }

    /// Rotation angle of the image in SO(3), in [0, π].
    pub fn so3_angle(&self) -> f64 {
        let v = (self.q[1].powi(2) + self.q[2].powi(2) + self.q[3].powi(2)).sqrt();
        (2.0 * v.atan2(self.q[0].abs())).min(PI)
    }

    /// Group product `self · other`.
    pub fn compose(&self, other: &GroupPoint) -> GroupPoint {
        let [w1, x1, y1, z1] = self.q;
        let [w2, x2, y2, z2] = other.q;
        GroupPoint {
            q: [
                w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
                w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
                w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
                w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
            ],
        }
    }

    pub fn inverse(&self) -> GroupPoint {
        let [w, x, y, z] = self.q;
        GroupPoint { q: [w, -x, -y, -z] }
    }

    /// Action of the SO(3) image on a vector of R³.
    pub fn rotate(&self, v: [f64; 3]) -> [f64; 3] {
        let [w, x, y, z] = self.q;
        let u = [x, y, z];
        let cross = |a: [f64; 3], b: [f64; 3]| {
            [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]
        };
        let t = cross(u, v).map(|c| 2.0 * c);
        let ut = cross(u, t);
        [
            v[0] + w * t[0] + ut[0],
            v[1] + w * t[1] + ut[1],
            v[2] + w * t[2] + ut[2],
        ]
    }

    /// Euler angles `(α, β, γ)` with `self = R_z(α) R_y(β) R_z(γ)` exactly in SU(2)
    /// (not merely up to sign).
    pub fn zyz(&self) -> (f64, f64, f64) {
        let [w, x, y, z] = self.q;
        let cb = (w * w + z * z).sqrt();
        let sb = (x * x + y * y).sqrt();
        let beta = 2.0 * sb.atan2(cb);
        let sum = z.atan2(w);
        let diff = (-x).atan2(y);
        (sum + diff, beta, sum - diff)
    }

    /// Quaternion distance, used for approximate equality in tests.
    pub fn distance(&self, other: &GroupPoint) -> f64 {
        self.q
            .iter()
            .zip(other.q.iter())
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Polar and azimuthal angles of a point on the unit sphere.
pub fn sphere_angles(p: [f64; 3]) -> (f64, f64) {
    let theta = p[2].clamp(-1.0, 1.0).acos();
    let phi = p[1].atan2(p[0]);
    (theta, phi)
}

/// The fixed coset section: the point `(θ, φ)` maps to the rotation by θ about
/// `(−sin φ, cos φ, 0)`, i.e. `R_z(φ) R_y(θ) R_z(−φ)`.
pub fn section(theta: f64, phi: f64) -> GroupPoint {
    GroupPoint::rotation_z(phi)
        .compose(&GroupPoint::rotation_y(theta))
        .compose(&GroupPoint::rotation_z(-phi))
}
