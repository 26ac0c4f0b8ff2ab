//! Gram matrices of randomly rotated and projected landmarks.
//!
//! A landmark configuration `V` (3 × k) is rotated by a random `A` and
//! projected to the image plane by `H = diag(1, 1, 0)`. The expected Gram
//! matrix of `HAV` depends on the law of `A` only through `τ₂ = E[Z²]` and
//! the modal rotation `M`:
//!
//! `E[Gram(HAV)] = Gram(V) − Gram(D M V)`, with
//! `D² = diag((1 − τ₂)/2, (1 − τ₂)/2, τ₂)`.
//!
//! At `τ₂ = 1/3` the right side collapses to `(2/3)·Gram(V)` whatever `M`
//! is, which is the Haar value.

use nalgebra::{DMatrix, DVector, Matrix3, Matrix3xX, SymmetricEigen, Vector3};
use rand::Rng;

use crate::distributions::{DistributionSpec, RotationSampler};
use crate::error::{Error, Result};
use crate::moments::tau_k;
use crate::so3::Rotation;

const SYMMETRY_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

/// Landmarks as the columns of a 3 × k matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct LandmarkMatrix(Matrix3xX<f64>);

impl LandmarkMatrix {
    pub fn new(m: Matrix3xX<f64>) -> Result<Self> {
        if m.ncols() == 0 {
            return Err(Error::InvalidMatrix("landmark matrix has no columns".into()));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix("landmark matrix has non-finite entries".into()));
        }
        Ok(Self(m))
    }

    pub fn from_columns(columns: &[Vector3<f64>]) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::InvalidMatrix("landmark matrix has no columns".into()));
        }
        Self::new(Matrix3xX::from_columns(columns))
    }

    /// The 3 × 3 identity as three landmarks.
    pub fn identity() -> Self {
        Self(Matrix3xX::from_column_slice(Matrix3::<f64>::identity().as_slice()))
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn matrix(&self) -> &Matrix3xX<f64> {
        &self.0
    }

    /// `A·V`.
    pub fn rotated(&self, a: &Rotation) -> Self {
        Self(a.matrix() * &self.0)
    }
}

/// A symmetric positive semidefinite k × k matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix(DMatrix<f64>);

impl GramMatrix {
    /// Checks squareness, symmetry within 1e-12 (relative to the largest
    /// entry when it exceeds 1), and smallest eigenvalue ≥ −1e-10·‖G‖.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidMatrix(format!(
                "Gram matrix is {}×{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix("Gram matrix has non-finite entries".into()));
        }
        let scale = m.amax().max(1.0);
        let asym = (&m - m.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::InvalidMatrix(format!("Gram matrix asymmetric by {asym:e}")));
        }
        let sym = symmetrized(m);
        let min_eig = min_eigenvalue(&sym);
        if min_eig < -PSD_TOL * sym.norm() {
            return Err(Error::InvalidMatrix(format!(
                "Gram matrix has eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self(sym))
    }

    /// Symmetric by construction; PSD up to rounding.
    fn trusted(m: DMatrix<f64>) -> Self {
        Self(symmetrized(m))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.0)
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &GramMatrix) -> f64 {
        (&self.0 - &other.0).amax()
    }
}

fn symmetrized(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// `VᵀV`.
pub fn gram(v: &LandmarkMatrix) -> GramMatrix {
    GramMatrix::trusted(v.0.transpose() * &v.0)
}

/// `H·A·V` with `H = diag(1, 1, 0)`; the third row is exactly zero.
pub fn project(a: &Rotation, v: &LandmarkMatrix) -> LandmarkMatrix {
    let mut out = a.matrix() * &v.0;
    out.row_mut(2).fill(0.0);
    LandmarkMatrix(out)
}

/// Diagonal of `D²` for a given `τ₂`.
pub fn d_squared(tau2: f64) -> Vector3<f64> {
    let side = 0.5 * (1.0 - tau2);
    Vector3::new(side, side, tau2)
}

/// Diagonal of `D` for `spec`, from `τ₂ = tau_k(spec, 2)`.
pub fn d_factor(spec: &DistributionSpec) -> Result<Vector3<f64>> {
    let tau2 = tau_k(spec, 2)?;
    Ok(d_squared(tau2).map(|v| v.max(0.0).sqrt()))
}

/// Third row of `M·V`: the components of the rotated landmarks along the
/// viewing direction.
pub fn modal_third_row(m: &Rotation, v: &LandmarkMatrix) -> DVector<f64> {
    let mv = m.matrix() * &v.0;
    mv.row(2).transpose()
}

/// `Gram(V) − Gram(D M V)` for an explicit `τ₂`.
pub fn projected_gram_from_tau2(tau2: f64, m: &Rotation, v: &LandmarkMatrix) -> GramMatrix {
    let mv = m.matrix() * &v.0;
    let d2 = d_squared(tau2);
    let weighted = Matrix3::from_diagonal(&d2) * &mv;
    GramMatrix::trusted(v.0.transpose() * &v.0 - mv.transpose() * weighted)
}

/// `E[Gram(HAV)]` for `A` drawn from `spec` (its modal is `M`).
pub fn expected_projected_gram(spec: &DistributionSpec, v: &LandmarkMatrix) -> Result<GramMatrix> {
    let tau2 = tau_k(spec, 2)?;
    Ok(projected_gram_from_tau2(tau2, spec.modal(), v))
}

/// Monte Carlo mean of `Gram(HAV)` together with entrywise standard errors.
#[derive(Clone, Debug)]
pub struct GramEstimate {
    pub mean: GramMatrix,
    pub std_error: DMatrix<f64>,
    pub n: usize,
}

impl GramEstimate {
    /// Largest entrywise `|mean − target| / std_error`; entries with zero
    /// standard error count only when they differ from the target.
    pub fn max_z_score(&self, target: &GramMatrix) -> f64 {
        let diff = self.mean.matrix() - target.matrix();
        diff.iter()
            .zip(self.std_error.iter())
            .map(|(d, s)| {
                if *s > 0.0 {
                    d.abs() / s
                } else if d.abs() <= 1e-12 {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .fold(0.0, f64::max)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::DomainError {
            what: "sample size",
            value: 0.0,
            domain: "[1, ∞)",
        });
    }
    Ok(())
}

/// `(1/n)·Σ Gram(H A_i V)` with `A_i` drawn sequentially from `spec`.
pub fn mc_projected_gram<R: Rng + ?Sized>(
    spec: &DistributionSpec,
    v: &LandmarkMatrix,
    n: usize,
    rng: &mut R,
) -> Result<GramMatrix> {
    Ok(mc_projected_gram_with_error(spec, v, n, rng)?.mean)
}

/// As [`mc_projected_gram`], also returning entrywise standard errors.
pub fn mc_projected_gram_with_error<R: Rng + ?Sized>(
    spec: &DistributionSpec,
    v: &LandmarkMatrix,
    n: usize,
    rng: &mut R,
) -> Result<GramEstimate> {
    check_n(n)?;
    let sampler = RotationSampler::new(spec);
    let k = v.ncols();
    let mut sum = DMatrix::<f64>::zeros(k, k);
    let mut sum_sq = DMatrix::<f64>::zeros(k, k);
    for _ in 0..n {
        let a: Rotation = rng.sample(sampler);
        let g = gram(&project(&a, v)).0;
        sum_sq += g.component_mul(&g);
        sum += g;
    }
    let nf = n as f64;
    let mean = sum / nf;
    let std_error = if n > 1 {
        let var = (sum_sq / nf - mean.component_mul(&mean)) * (nf / (nf - 1.0));
        var.map(|s| (s.max(0.0) / nf).sqrt())
    } else {
        DMatrix::zeros(k, k)
    };
    Ok(GramEstimate {
        mean: GramMatrix::trusted(mean),
        std_error,
        n,
    })
}

/// Draws of the scalar `tr Gram(HAV)`, for comparing laws beyond the mean.
pub fn sample_projected_traces<R: Rng + ?Sized>(
    spec: &DistributionSpec,
    v: &LandmarkMatrix,
    n: usize,
    rng: &mut R,
) -> Vec<f64> {
    let sampler = RotationSampler::new(spec);
    (0..n)
        .map(|_| {
            let a: Rotation = rng.sample(sampler);
            project(&a, v).0.norm_squared()
        })
        .collect()
}

/// Solves `E = ((1 + τ₂)/2)·Gram(V) + ((1 − 3τ₂)/2)·wwᵀ` for `Gram(V)`,
/// where `w` is the third row of `M·V`.
pub fn recover_gram(e: &GramMatrix, tau2: f64, w: &DVector<f64>) -> Result<GramMatrix> {
    if !(tau2 > 0.0 && tau2 < 1.0) {
        return Err(Error::DomainError {
            what: "τ₂",
            value: tau2,
            domain: "(0, 1)",
        });
    }
    if w.len() != e.dim() {
        return Err(Error::InvalidMatrix(format!(
            "w has length {} for a {}×{} Gram matrix",
            w.len(),
            e.dim(),
            e.dim()
        )));
    }
    let correction = w * w.transpose() * (0.5 * (1.0 - 3.0 * tau2));
    GramMatrix::new((&e.0 - correction) * (2.0 / (1.0 + tau2)))
}

/// Recovery that assumes Haar rotations: `(3/2)·E`.
pub fn naive_recover_gram(e: &GramMatrix) -> GramMatrix {
    GramMatrix::trusted(&e.0 * 1.5)
}

/// `naive_recover_gram(E) − Gram(V)` when `E` is the exact expected Gram
/// under `spec`. Equals `(3/2)·((1 − 3τ₂)/2)·(wwᵀ − Gram(V))`, which
/// vanishes only at `τ₂ = 1/3`.
pub fn naive_recovery_bias(spec: &DistributionSpec, v: &LandmarkMatrix) -> Result<DMatrix<f64>> {
    let e = expected_projected_gram(spec, v)?;
    Ok(naive_recover_gram(&e).0 - gram(v).0)
}

/// `Gram((I − m mᵀ)·V)` with `m = Mᵀe₃`, the last row of `M`: the limit of
/// the expected Gram as the rotations concentrate at `M`.
pub fn limit_gram_kappa_infinity(m: &Rotation, v: &LandmarkMatrix) -> GramMatrix {
    let axis: Vector3<f64> = m.matrix().row(2).transpose();
    let projector = Matrix3::identity() - axis * axis.transpose();
    let pv = projector * &v.0;
    GramMatrix::trusted(pv.transpose() * pv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;
    use crate::so3::{sample_uniform_axis, AxisAngle, UnitVector3};

    fn random_rotation(rng: &mut impl Rng) -> Rotation {
        let axis = sample_uniform_axis(rng);
        let angle = rng.random::<f64>() * 3.1;
        Rotation::from_axis_angle(&AxisAngle::new(axis, angle).unwrap())
    }

    fn random_landmarks(rng: &mut impl Rng, k: usize) -> LandmarkMatrix {
        let cols: Vec<_> = (0..k).map(|_| *sample_uniform_axis(rng).as_vector()).collect();
        LandmarkMatrix::from_columns(&cols).unwrap()
    }

    fn diag(d: &[f64]) -> GramMatrix {
        GramMatrix::new(DMatrix::from_diagonal(&DVector::from_column_slice(d))).unwrap()
    }

    #[test]
    fn landmark_validation() {
        assert!(LandmarkMatrix::new(Matrix3xX::zeros(0)).is_err());
        let mut m = Matrix3xX::zeros(2);
        m[(1, 1)] = f64::NAN;
        assert!(LandmarkMatrix::new(m).is_err());
    }

    #[test]
    fn gram_matrix_validation() {
        assert!(GramMatrix::new(DMatrix::zeros(2, 3)).is_err());
        assert!(GramMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0])).is_err());
        assert!(GramMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0])).is_err());
        assert!(GramMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0])).is_ok());
    }

    #[test]
    fn gram_basics() {
        let v = LandmarkMatrix::from_columns(&[Vector3::x(), Vector3::y()]).unwrap();
        assert_eq!(gram(&v).matrix(), &DMatrix::<f64>::identity(2, 2));
        let z = LandmarkMatrix::new(Matrix3xX::zeros(4)).unwrap();
        assert_eq!(gram(&z).matrix(), &DMatrix::<f64>::zeros(4, 4));
    }

    #[test]
    fn gram_is_rotation_invariant() {
        let mut rng = seeded_rng(3);
        for _ in 0..50 {
            let v = random_landmarks(&mut rng, 5);
            let a = random_rotation(&mut rng);
            assert!(gram(&v.rotated(&a)).max_abs_diff(&gram(&v)) < 1e-12);
        }
    }

    #[test]
    fn projection() {
        let e3 = LandmarkMatrix::from_columns(&[Vector3::z()]).unwrap();
        assert_eq!(project(&Rotation::identity(), &e3).matrix().amax(), 0.0);
        let e1 = LandmarkMatrix::from_columns(&[Vector3::x()]).unwrap();
        assert_eq!(project(&Rotation::identity(), &e1), e1);
        let mut rng = seeded_rng(4);
        for _ in 0..50 {
            let v = random_landmarks(&mut rng, 4);
            let a = random_rotation(&mut rng);
            let p = project(&a, &v);
            assert!(p.matrix().row(2).iter().all(|x| *x == 0.0));
            let gap = gram(&v).matrix() - gram(&p).matrix();
            assert!(min_eigenvalue(&gap) > -1e-12);
        }
    }

    #[test]
    fn expected_gram_examples() {
        let v = LandmarkMatrix::identity();
        let haar = expected_projected_gram(&DistributionSpec::haar(), &v).unwrap();
        assert!(haar.max_abs_diff(&diag(&[2.0 / 3.0; 3])) < 1e-9);

        let mut rng = seeded_rng(5);
        let m = random_rotation(&mut rng);
        let c1 = DistributionSpec::cayley(1.0).unwrap().with_modal(m);
        assert!(expected_projected_gram(&c1, &v).unwrap().max_abs_diff(&diag(&[2.0 / 3.0; 3])) < 1e-9);

        let c2 = DistributionSpec::cayley(2.0).unwrap();
        let got = expected_projected_gram(&c2, &v).unwrap();
        assert!(got.max_abs_diff(&diag(&[0.7, 0.7, 0.6])) < 1e-9);
    }

    #[test]
    fn d_squared_has_unit_trace() {
        for kappa in [0.0, 0.3, 1.0, 2.0, 5.0, 40.0] {
            for spec in [
                DistributionSpec::cayley(kappa).unwrap(),
                DistributionSpec::fisher_von_mises(kappa).unwrap(),
            ] {
                let d = d_factor(&spec).unwrap();
                assert!((d.norm_squared() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mc_matches_expected_small() {
        let mut rng = seeded_rng(6);
        let v = LandmarkMatrix::identity();
        let c2 = DistributionSpec::cayley(2.0).unwrap();
        let est = mc_projected_gram_with_error(&c2, &v, 100_000, &mut rng).unwrap();
        assert!(est.mean.max_abs_diff(&diag(&[0.7, 0.7, 0.6])) < 0.02);
        assert!(est.max_z_score(&expected_projected_gram(&c2, &v).unwrap()) < 5.0);
        let one = mc_projected_gram(&c2, &v, 1, &mut rng).unwrap();
        assert!(one.min_eigenvalue() > -1e-12);
        assert!(mc_projected_gram(&c2, &v, 0, &mut rng).is_err());
    }

    #[test]
    fn recovery_round_trip() {
        let mut rng = seeded_rng(7);
        for _ in 0..20 {
            let v = random_landmarks(&mut rng, 6);
            let m = random_rotation(&mut rng);
            let spec = DistributionSpec::cayley(2.0).unwrap().with_modal(m);
            let e = expected_projected_gram(&spec, &v).unwrap();
            let w = modal_third_row(&m, &v);
            let back = recover_gram(&e, tau_k(&spec, 2).unwrap(), &w).unwrap();
            assert!(back.max_abs_diff(&gram(&v)) < 1e-10);
        }
    }

    #[test]
    fn recovery_at_one_third_ignores_w() {
        let e = diag(&[1.0, 2.0]);
        let a = recover_gram(&e, 1.0 / 3.0, &DVector::from_vec(vec![0.0, 0.0])).unwrap();
        let b = recover_gram(&e, 1.0 / 3.0, &DVector::from_vec(vec![0.3, -0.2])).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-15);
        assert!(a.max_abs_diff(&naive_recover_gram(&e)) < 1e-15);
        assert!(recover_gram(&e, 0.0, &DVector::zeros(2)).is_err());
        assert!(recover_gram(&e, 1.0, &DVector::zeros(2)).is_err());
        assert!(recover_gram(&e, 0.5, &DVector::zeros(3)).is_err());
    }

    #[test]
    fn naive_bias() {
        let v = LandmarkMatrix::identity();
        let c2 = DistributionSpec::cayley(2.0).unwrap();
        let bias = naive_recovery_bias(&c2, &v).unwrap();
        // (3/2)·diag(0.7, 0.7, 0.6) − I
        assert!((bias[(0, 0)] - 0.05).abs() < 1e-9);
        assert!((bias[(2, 2)] + 0.1).abs() < 1e-9);
        let c1 = DistributionSpec::cayley(1.0).unwrap();
        assert!(naive_recovery_bias(&c1, &v).unwrap().amax() < 1e-9);
    }

    #[test]
    fn concentration_limit() {
        let v = LandmarkMatrix::identity();
        let lim = limit_gram_kappa_infinity(&Rotation::identity(), &v);
        assert_eq!(lim.matrix(), &DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 0.0])));
        let e3 = LandmarkMatrix::from_columns(&[Vector3::z()]).unwrap();
        assert_eq!(limit_gram_kappa_infinity(&Rotation::identity(), &e3).matrix().amax(), 0.0);

        // E − limit = ((1 − τ₂)/2)·(3wwᵀ − Gram(V)), of order 2/κ.
        let mut rng = seeded_rng(8);
        let m = random_rotation(&mut rng);
        let v = random_landmarks(&mut rng, 4);
        let g = gram(&v);
        let w = modal_third_row(&m, &v);
        for kappa in [50.0, 500.0, 5000.0] {
            let spec = DistributionSpec::cayley(kappa).unwrap().with_modal(m);
            let e = expected_projected_gram(&spec, &v).unwrap();
            let gap = e.matrix() - limit_gram_kappa_infinity(&m, &v).matrix();
            let half_gap = (1.0 - tau_k(&spec, 2).unwrap()) / 2.0;
            let predicted = (&w * w.transpose() * 3.0 - g.matrix()) * half_gap;
            assert!((&gap - predicted).amax() < 1e-10);
            assert!(gap.amax() <= 3.0 * half_gap + 1e-12);
        }
        let spec = DistributionSpec::cayley(5000.0).unwrap().with_modal(m);
        let e = expected_projected_gram(&spec, &v).unwrap();
        assert!(e.max_abs_diff(&limit_gram_kappa_infinity(&m, &v)) < 5e-3);
    }

    #[test]
    fn same_viewing_axis_same_gram() {
        // Two modals sharing the last row Mᵀe₃ give identical expected
        // projected Grams.
        let mut rng = seeded_rng(9);
        let v = random_landmarks(&mut rng, 5);
        let m1 = random_rotation(&mut rng);
        let about_e3 = Rotation::from_axis_angle(&AxisAngle::new(UnitVector3::e3(), 1.1).unwrap());
        let m2 = about_e3 * m1;
        let spec = DistributionSpec::cayley(3.0).unwrap();
        let g1 = expected_projected_gram(&spec.with_modal(m1), &v).unwrap();
        let g2 = expected_projected_gram(&spec.with_modal(m2), &v).unwrap();
        assert!(g1.max_abs_diff(&g2) < 1e-10);
    }
}
