//! Rotation-group algebra on SO(3).
//!
//! Rotations are dense 3×3 matrices. The axis-angle chart
//! `R = cos θ·I + sin θ·S(u) + (1 − cos θ)·u uᵀ` is a bijection away from the
//! null set of the identity and the half-turns, which [`Rotation::to_axis_angle`]
//! rejects.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Mul;

use nalgebra::{Matrix3, Vector3};
use rand::Rng;

use crate::error::{Error, Result};

/// Tolerance for the orthogonality and determinant invariants.
pub const ROTATION_TOL: f64 = 1e-12;

/// Angles within this distance of 0 or π are outside the axis-angle chart.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// A proper rotation of ℝ³.
#[derive(Clone, Copy, PartialEq)]
pub struct Rotation(Matrix3<f64>);

/// A unit vector in ℝ³, i.e. a point of the sphere S².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitVector3(Vector3<f64>);

/// Axis-angle coordinates of a non-degenerate rotation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisAngle {
    axis: UnitVector3,
    angle: f64,
}

/// The skew-symmetric matrix `S(a)` with `S(a)·x = a × x`.
pub fn skew(a: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(
        0.0, -a[2], a[1], //
        a[2], 0.0, -a[0], //
        -a[1], a[0], 0.0,
    )
}

/// Inverse of [`skew`] applied to the antisymmetric part: `vee(R − Rᵀ)`.
fn antisymmetric_vector(m: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(
        m[(2, 1)] - m[(1, 2)],
        m[(0, 2)] - m[(2, 0)],
        m[(1, 0)] - m[(0, 1)],
    )
}

impl UnitVector3 {
    /// Wraps `v` if its norm is 1 within [`ROTATION_TOL`].
    pub fn new(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > ROTATION_TOL {
            return Err(Error::DomainError {
                what: "axis norm",
                value: norm,
                domain: "{1}",
            });
        }
        Ok(Self(v))
    }

    /// Normalizes a non-zero vector.
    pub fn normalize(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::DomainError {
                what: "vector norm",
                value: norm,
                domain: "(0, ∞)",
            });
        }
        Ok(Self(v / norm))
    }

    pub fn e1() -> Self {
        Self(Vector3::x())
    }

    pub fn e2() -> Self {
        Self(Vector3::y())
    }

    pub fn e3() -> Self {
        Self(Vector3::z())
    }

    pub fn as_vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn z(&self) -> f64 {
        self.0[2]
    }
}

impl AxisAngle {
    /// Requires `angle ∈ [0, π)`.
    pub fn new(axis: UnitVector3, angle: f64) -> Result<Self> {
        if !(0.0..PI).contains(&angle) {
            return Err(Error::DomainError {
                what: "rotation angle",
                value: angle,
                domain: "[0, π)",
            });
        }
        Ok(Self { axis, angle })
    }

    pub fn axis(&self) -> &UnitVector3 {
        &self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }
}

impl Rotation {
    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    /// Validates `m` against the rotation invariants at [`ROTATION_TOL`].
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        Self::check(&m, ROTATION_TOL)?;
        Ok(Self(m))
    }

    /// Accepts a matrix that is a rotation within `tol`, then projects it
    /// onto SO(3) by polar decomposition.
    pub fn orthonormalized(m: Matrix3<f64>, tol: f64) -> Result<Self> {
        Self::check(&m, tol)?;
        let svd = m.svd(true, true);
        let (u, v_t) = match (svd.u, svd.v_t) {
            (Some(u), Some(v_t)) => (u, v_t),
            _ => return Err(Error::NotARotation("SVD failed".into())),
        };
        Ok(Self(u * v_t))
    }

    /// Builds a rotation from nine row-major entries.
    pub fn from_row_major(entries: &[f64; 9], tol: f64) -> Result<Self> {
        Self::orthonormalized(Matrix3::from_row_slice(entries), tol)
    }

    fn check(m: &Matrix3<f64>, tol: f64) -> Result<()> {
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::NotARotation("non-finite entry".into()));
        }
        let orth = (m.transpose() * m - Matrix3::identity()).amax();
        if orth > tol {
            return Err(Error::NotARotation(format!(
                "‖RᵀR − I‖∞ = {orth:e} exceeds {tol:e}"
            )));
        }
        let det = m.determinant();
        if (det - 1.0).abs() > tol {
            return Err(Error::NotARotation(format!("det = {det}")));
        }
        Ok(())
    }

    /// Axis-angle construction. Accepts any angle, including π.
    pub(crate) fn from_axis_angle_raw(axis: &UnitVector3, angle: f64) -> Self {
        let u = axis.as_vector();
        let (s, c) = angle.sin_cos();
        Self(Matrix3::identity() * c + skew(u) * s + (u * u.transpose()) * (1.0 - c))
    }

    pub fn from_axis_angle(aa: &AxisAngle) -> Self {
        Self::from_axis_angle_raw(&aa.axis, aa.angle)
    }

    /// Inverse of the axis-angle chart.
    ///
    /// Fails with [`Error::DegenerateRotation`] when the angle is within
    /// [`DEGENERACY_TOL`] of 0 or π.
    pub fn to_axis_angle(&self) -> Result<AxisAngle> {
        let angle = self.angle();
        if angle < DEGENERACY_TOL || PI - angle < DEGENERACY_TOL {
            return Err(Error::DegenerateRotation { angle });
        }
        let m = &self.0;
        let vee = antisymmetric_vector(m);
        let axis = if angle < PI / 2.0 {
            vee / (2.0 * angle.sin())
        } else {
            // Symmetric part is (1 − cos θ)·u uᵀ + cos θ·I; read the axis off
            // its largest diagonal entry and fix the sign with the vee part.
            let c = angle.cos();
            let sym = (m + m.transpose()) * 0.5 - Matrix3::identity() * c;
            let i = (0..3)
                .max_by(|&a, &b| sym[(a, a)].total_cmp(&sym[(b, b)]))
                .unwrap_or(0);
            let scale = 1.0 - c;
            let ui = (sym[(i, i)] / scale).max(0.0).sqrt();
            let mut u = Vector3::zeros();
            for j in 0..3 {
                u[j] = if j == i { ui } else { sym[(i, j)] / (scale * ui) };
            }
            if u.dot(&vee) < 0.0 {
                -u
            } else {
                u
            }
        };
        AxisAngle::new(UnitVector3::normalize(axis)?, angle)
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Rotation angle in `[0, π]`, computed as `atan2(sin θ, cos θ)` from the
    /// antisymmetric part and the trace.
    pub fn angle(&self) -> f64 {
        let sin = 0.5 * antisymmetric_vector(&self.0).norm();
        let cos = 0.5 * (self.0.trace() - 1.0);
        sin.atan2(cos)
    }

    /// Row-major entries.
    pub fn to_row_major(&self) -> [f64; 9] {
        let m = &self.0;
        [
            m[(0, 0)],
            m[(0, 1)],
            m[(0, 2)],
            m[(1, 0)],
            m[(1, 1)],
            m[(1, 2)],
            m[(2, 0)],
            m[(2, 1)],
            m[(2, 2)],
        ]
    }

    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.0 * v
    }

    /// Largest deviation from the rotation invariants.
    pub fn invariant_error(&self) -> f64 {
        let orth = (self.0.transpose() * self.0 - Matrix3::identity()).amax();
        orth.max((self.0.determinant() - 1.0).abs())
    }
}

impl Mul for Rotation {
    type Output = Rotation;

    fn mul(self, rhs: Rotation) -> Rotation {
        Rotation(self.0 * rhs.0)
    }
}

impl Mul<&Rotation> for &Rotation {
    type Output = Rotation;

    fn mul(self, rhs: &Rotation) -> Rotation {
        Rotation(self.0 * rhs.0)
    }
}

impl fmt::Debug for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Rotation").field(&self.to_row_major()).finish()
    }
}

/// Riemannian distance `arccos((tr(M₁M₂ᵀ) − 1)/2) ∈ [0, π]`.
pub fn rotation_angle_between(m1: &Rotation, m2: &Rotation) -> f64 {
    (m1 * &m2.transpose()).angle()
}

/// The planar block `A(α)` of the spectral form `I − M₁M₂ᵀ = QᵀA(α)Q`.
pub fn planar_block(alpha: f64) -> Matrix3<f64> {
    let (s, c) = alpha.sin_cos();
    Matrix3::new(
        1.0 - c, s, 0.0, //
        -s, 1.0 - c, 0.0, //
        0.0, 0.0, 0.0,
    )
}

/// Uniform point on S²: third coordinate uniform on [−1, 1], azimuth
/// uniform on [0, 2π).
pub fn sample_uniform_axis<R: Rng + ?Sized>(rng: &mut R) -> UnitVector3 {
    let z: f64 = 2.0 * rng.random::<f64>() - 1.0;
    let phi = 2.0 * PI * rng.random::<f64>();
    let r = (1.0 - z * z).max(0.0).sqrt();
    let (s, c) = phi.sin_cos();
    UnitVector3(Vector3::new(r * c, r * s, z))
}
