//! Quaternion algebra on `H = R + I`, the round metric on the unit sphere S³,
//! the `cos α + u sin α` parameterization, stereographic projection from the
//! north pole `-1`, and the twisted action `p ↦ q p q⁻¹` that realizes the
//! double cover S³ → SO(3).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for algebraic identities in double precision.
pub const EPS_ALG: f64 = 1e-9;

/// Tolerance used when deciding whether two unit quaternions are the same
/// group element.
pub const EPS_MATCH: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuatError {
    #[error("quaternion has norm {0}, expected 1")]
    NotUnit(f64),
    #[error("imaginary unit must have zero real part and unit norm (got {0:?})")]
    NotImaginaryUnit([f64; 4]),
    #[error("rotation axis is undefined at the poles ±1")]
    PoleHasNoAxis,
    #[error("stereographic projection is undefined at the north pole -1")]
    NorthPoleProjection,
    #[error("angle {0} outside the domain [0, π)")]
    Domain(f64),
}

/// A quaternion `a + bi + cj + dk`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Quaternion { a, b, c, d }
    }

    pub fn from_real(a: f64) -> Self {
        Quaternion::new(a, 0.0, 0.0, 0.0)
    }

    pub fn from_imag(v: Vector3<f64>) -> Self {
        Quaternion::new(0.0, v.x, v.y, v.z)
    }

    pub fn from_array(x: [f64; 4]) -> Self {
        Quaternion::new(x[0], x[1], x[2], x[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn real(self) -> f64 {
        self.a
    }

    pub fn imag(self) -> Vector3<f64> {
        Vector3::new(self.b, self.c, self.d)
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.a, -self.b, -self.c, -self.d)
    }

    /// Euclidean inner product on `R⁴`.
    pub fn dot(self, other: Quaternion) -> f64 {
        self.a * other.a + self.b * other.b + self.c * other.c + self.d * other.d
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// `d_H(p, q) = |p - q|`.
    pub fn dist(self, other: Quaternion) -> f64 {
        (self - other).norm()
    }

    /// Radial projection onto S³. `None` for the zero quaternion.
    pub fn normalize(self) -> Option<UnitQuaternion> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            None
        } else {
            Some(UnitQuaternion(self.scale(1.0 / n)))
        }
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.a, -self.b, -self.c, -self.d)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (self.a, self.b, self.c, self.d);
        let (a2, b2, c2, d2) = (o.a, o.b, o.c, o.d);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+.9} {:+.9}i {:+.9}j {:+.9}k", self.a, self.b, self.c, self.d)
    }
}

/// Free-function form of the Hamilton product.
pub fn mul(p: Quaternion, q: Quaternion) -> Quaternion {
    p * q
}

/// A point of S³, i.e. a quaternion of norm one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    /// South pole of S³ and identity of the group.
    pub const ONE: UnitQuaternion = UnitQuaternion(Quaternion::ONE);
    pub const MINUS_ONE: UnitQuaternion = UnitQuaternion(Quaternion::new(-1.0, 0.0, 0.0, 0.0));
    pub const I: UnitQuaternion = UnitQuaternion(Quaternion::I);
    pub const J: UnitQuaternion = UnitQuaternion(Quaternion::J);
    pub const K: UnitQuaternion = UnitQuaternion(Quaternion::K);

    /// Accepts `q` only if `| |q|² - 1 | ≤ EPS_ALG`.
    pub fn new(q: Quaternion) -> Result<Self, QuatError> {
        let n2 = q.norm_sq();
        if (n2 - 1.0).abs() <= EPS_ALG {
            Ok(UnitQuaternion(q))
        } else {
            Err(QuatError::NotUnit(n2.sqrt()))
        }
    }

    pub fn quaternion(self) -> Quaternion {
        self.0
    }

    pub fn real(self) -> f64 {
        self.0.a
    }

    pub fn to_array(self) -> [f64; 4] {
        self.0.to_array()
    }

    pub fn inverse(self) -> Self {
        UnitQuaternion(self.0.conj())
    }

    pub fn conj(self) -> Self {
        self.inverse()
    }

    pub fn dot(self, other: UnitQuaternion) -> f64 {
        self.0.dot(other.0)
    }

    pub fn powi(self, n: i32) -> Self {
        let base = if n < 0 { self.inverse() } else { self };
        let mut acc = UnitQuaternion::ONE;
        for _ in 0..n.unsigned_abs() {
            acc = acc * base;
        }
        acc
    }

    /// Matrix of `ψ_q` on `I` in the basis `{i, j, k}`.
    pub fn rotation_matrix(self) -> Matrix3<f64> {
        let cols: Vec<Vector3<f64>> = [Quaternion::I, Quaternion::J, Quaternion::K]
            .iter()
            .map(|&e| twisted_action(self, e).imag())
            .collect();
        Matrix3::from_columns(&cols)
    }
}

impl Mul for UnitQuaternion {
    type Output = UnitQuaternion;
    fn mul(self, o: UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion(self.0 * o.0)
    }
}

impl Neg for UnitQuaternion {
    type Output = UnitQuaternion;
    fn neg(self) -> UnitQuaternion {
        UnitQuaternion(-self.0)
    }
}

impl From<UnitQuaternion> for Quaternion {
    fn from(u: UnitQuaternion) -> Quaternion {
        u.0
    }
}

/// A point of the equatorial sphere `S²_I`: a pure imaginary unit quaternion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImaginaryUnit(Vector3<f64>);

impl ImaginaryUnit {
    pub fn new(b: f64, c: f64, d: f64) -> Result<Self, QuatError> {
        let v = Vector3::new(b, c, d);
        if (v.norm_squared() - 1.0).abs() <= EPS_ALG {
            Ok(ImaginaryUnit(v))
        } else {
            Err(QuatError::NotImaginaryUnit([0.0, b, c, d]))
        }
    }

    /// Normalizes a nonzero 3-vector.
    pub fn from_vector(v: Vector3<f64>) -> Result<Self, QuatError> {
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(QuatError::NotImaginaryUnit([0.0, v.x, v.y, v.z]));
        }
        Ok(ImaginaryUnit(v / n))
    }

    pub fn vector(self) -> Vector3<f64> {
        self.0
    }

    pub fn quaternion(self) -> Quaternion {
        Quaternion::from_imag(self.0)
    }

    pub fn unit(self) -> UnitQuaternion {
        UnitQuaternion(self.quaternion())
    }
}

/// `q = e^{uα}`; the axis is `None` exactly when `q` is (numerically) `±1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisAngle {
    axis: Option<ImaginaryUnit>,
    pub alpha: f64,
}

impl AxisAngle {
    pub fn axis(&self) -> Result<ImaginaryUnit, QuatError> {
        self.axis.ok_or(QuatError::PoleHasNoAxis)
    }

    pub fn has_axis(&self) -> bool {
        self.axis.is_some()
    }
}

/// `e^{uα} = cos α + u sin α`.
pub fn exp_imag(u: ImaginaryUnit, alpha: f64) -> UnitQuaternion {
    let (s, c) = alpha.sin_cos();
    let v = u.vector() * s;
    UnitQuaternion(Quaternion::new(c, v.x, v.y, v.z))
}

/// Inverse of [`exp_imag`] with `α ∈ [0, π]`.
pub fn log_unit(q: UnitQuaternion) -> AxisAngle {
    let q = q.quaternion();
    let im = q.imag();
    let alpha = im.norm().atan2(q.a);
    if q.a.abs() >= 1.0 - EPS_ALG {
        let alpha = if q.a > 0.0 { 0.0 } else { std::f64::consts::PI };
        return AxisAngle { axis: None, alpha };
    }
    AxisAngle {
        axis: Some(ImaginaryUnit(im / im.norm())),
        alpha,
    }
}

/// Spherical distance `arccos⟨p, q⟩`, evaluated through the chord length so
/// that nearby points keep full precision.
pub fn dist_s3(p: UnitQuaternion, q: UnitQuaternion) -> f64 {
    let chord = p.quaternion().dist(q.quaternion());
    2.0 * (0.5 * chord).min(1.0).asin()
}

/// Stereographic projection from the north pole onto `I ≅ R³`:
/// `ρ(e^{uα}) = sin α / (1 + cos α) · u`.
pub fn stereographic(q: UnitQuaternion) -> Result<Vector3<f64>, QuatError> {
    if dist_s3(q, UnitQuaternion::MINUS_ONE) < EPS_ALG {
        return Err(QuatError::NorthPoleProjection);
    }
    let q = q.quaternion();
    Ok(q.imag() / (1.0 + q.a))
}

/// Radial stretch `dρ/dα = 1 / (1 + cos α)` of the projection.
pub fn stereo_derivative(alpha: f64) -> Result<f64, QuatError> {
    use std::f64::consts::PI;
    if !(0.0..PI).contains(&alpha) {
        return Err(QuatError::Domain(alpha));
    }
    Ok(1.0 / (1.0 + alpha.cos()))
}

/// Twisted action `φ_q(v) = q v q⁻¹`.
pub fn twisted_action(q: UnitQuaternion, v: Quaternion) -> Quaternion {
    q.quaternion() * v * q.quaternion().conj()
}
