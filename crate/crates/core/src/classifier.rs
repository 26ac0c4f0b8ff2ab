//! Bayes rule for two shifted copies of one conjugation-invariant law, and
//! its accuracy as a function of the angle between the two modals.
//!
//! Class `i` observations are `P = R·M_i` with `R` drawn from a common
//! conjugation-invariant law. With equal priors the rule assigns class 1
//! iff `tr(P M₁ᵀ (I − M₁M₂ᵀ)) > 0`, and its accuracy `ψ(α)` depends only on
//! the angle `α` between `M₁` and `M₂` and on the law of `X = cos²(Θ/2)`.

use nalgebra::{Matrix3, Vector3};
use rand::Rng;

use crate::distributions::{h_density, DistributionSpec, RotationSampler};
use crate::error::{Error, Result};
use crate::moments::{integrate, integrate_endpoint_aware, QuadratureSpec, MOMENT_QUADRATURE};
use crate::so3::{rotation_angle_between, Rotation, DEGENERACY_TOL};
use crate::stats::{Estimate, RunningMoments};

/// Traces closer to zero than this count as ties and go to class 1.
pub const TIE_TOL: f64 = 1e-14;

const PSI_QUADRATURE: QuadratureSpec = MOMENT_QUADRATURE;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassLabel {
    One,
    Two,
}

impl ClassLabel {
    pub fn index(self) -> u8 {
        match self {
            ClassLabel::One => 1,
            ClassLabel::Two => 2,
        }
    }
}

/// Two modal rotations and the shared law of `R`.
#[derive(Clone, Copy, Debug)]
pub struct ClassPair {
    m1: Rotation,
    m2: Rotation,
    alpha: f64,
    common: DistributionSpec,
}

impl ClassPair {
    /// The modal of `common` is replaced by the identity. Fails when the
    /// angle between `m1` and `m2` is within 1e-9 of 0 or π.
    pub fn new(m1: Rotation, m2: Rotation, common: DistributionSpec) -> Result<Self> {
        let alpha = rotation_angle_between(&m1, &m2);
        if alpha < DEGENERACY_TOL || std::f64::consts::PI - alpha < DEGENERACY_TOL {
            return Err(Error::DegenerateRotation { angle: alpha });
        }
        Ok(Self {
            m1,
            m2,
            alpha,
            common: common.with_modal(Rotation::identity()),
        })
    }

    /// `M₁ = I` and `M₂` the rotation by `alpha` about `e₃`.
    pub fn canonical(alpha: f64, common: DistributionSpec) -> Result<Self> {
        let m2 = Rotation::new(rotation_about_e3(alpha).transpose())?;
        Self::new(Rotation::identity(), m2, common)
    }

    pub fn m1(&self) -> &Rotation {
        &self.m1
    }

    pub fn m2(&self) -> &Rotation {
        &self.m2
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn common(&self) -> &DistributionSpec {
        &self.common
    }

    pub fn modal(&self, label: ClassLabel) -> &Rotation {
        match label {
            ClassLabel::One => &self.m1,
            ClassLabel::Two => &self.m2,
        }
    }

    /// The same pair with the classes exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            m1: self.m2,
            m2: self.m1,
            ..*self
        }
    }

    /// A rotation `Q` with `I − M₁M₂ᵀ = Qᵀ A(α) Q`, where `A(α)` is
    /// [`crate::so3::planar_block`]: its last row is the axis of `M₁M₂ᵀ`.
    pub fn spectral_frame(&self) -> Result<Rotation> {
        let aa = (self.m1 * self.m2.transpose()).to_axis_angle()?;
        let n = *aa.axis().as_vector();
        let helper = if n.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let p = (helper - n * n.dot(&helper)).normalize();
        let q = n.cross(&p);
        Rotation::new(Matrix3::from_rows(&[p.transpose(), q.transpose(), n.transpose()]))
    }
}

fn rotation_about_e3(alpha: f64) -> Matrix3<f64> {
    let (s, c) = alpha.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// The discriminant `tr(P M₁ᵀ (I − M₁M₂ᵀ)) = tr(P M₁ᵀ) − tr(P M₂ᵀ)`.
pub fn discriminant(p: &Rotation, pair: &ClassPair) -> f64 {
    let m = p.matrix();
    (m.transpose() * pair.m1.matrix()).trace() - (m.transpose() * pair.m2.matrix()).trace()
}

/// Class 1 iff the discriminant is positive; ties go to class 1.
pub fn bayes_assign(p: &Rotation, pair: &ClassPair) -> ClassLabel {
    let t = discriminant(p, pair);
    if t > 0.0 || t.abs() < TIE_TOL {
        ClassLabel::One
    } else {
        ClassLabel::Two
    }
}

/// `h(x) = √(x/(1 − x))·f_X(x)` for a fixed law.
#[derive(Clone, Copy, Debug)]
pub struct HFunction {
    spec: DistributionSpec,
}

impl HFunction {
    pub fn new(spec: &DistributionSpec) -> Self {
        Self { spec: *spec }
    }

    /// Requires `x ∈ [0, 1]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        h_density(&self.spec, x)
    }

    fn eval_unchecked(&self, x: f64) -> f64 {
        h_density(&self.spec, x.clamp(0.0, 1.0)).unwrap_or(f64::NAN)
    }

    /// `∫_lo^hi h(x) dx`.
    pub fn integral(&self, lo: f64, hi: f64) -> Result<f64> {
        integrate(|x| self.eval_unchecked(x), lo, hi, &PSI_QUADRATURE)
    }

    /// `∫₀¹ √((1 − x)/x)·h(x) dx`, which is 1 for a normalized law.
    pub fn normalization(&self) -> Result<f64> {
        integrate_endpoint_aware(
            |x, _, one_minus_x| (one_minus_x / x).sqrt() * self.eval_unchecked(x),
            0.0,
            1.0,
            &PSI_QUADRATURE,
        )
    }
}

/// Coefficients of the quadratic `a u² + b u + c` in the third axis
/// coordinate `u` whose sign is the discriminant in the spectral frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuadCoeffs {
    /// Real roots, smaller first. `a < 0` and `c ≥ 0` make the
    /// discriminant nonnegative.
    pub fn roots(&self) -> (f64, f64) {
        let disc = (self.b * self.b - 4.0 * self.a * self.c).max(0.0).sqrt();
        let q = -0.5 * (self.b + self.b.signum() * disc);
        let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / self.a, self.c / q) };
        if r1 <= r2 {
            (r1, r2)
        } else {
            (r2, r1)
        }
    }

    pub fn eval(&self, u: f64) -> f64 {
        (self.a * u + self.b) * u + self.c
    }
}

/// `a = −2(1 − cos α)(1 − x)`, `b = 4 sin α √(x(1 − x))`,
/// `c = 2(1 − cos α)x`.
pub fn quad_coeffs(alpha: f64, x: f64) -> QuadCoeffs {
    let one_minus_cos = 2.0 * (0.5 * alpha).sin().powi(2);
    QuadCoeffs {
        a: -2.0 * one_minus_cos * (1.0 - x),
        b: 4.0 * alpha.sin() * (x * (1.0 - x)).sqrt(),
        c: 2.0 * one_minus_cos * x,
    }
}

/// Closed forms of the two roots for `θ = arccos(2x − 1)`:
/// `−tan(α/4)·cot(θ/2)` and `cot(α/4)·cot(θ/2)`.
pub fn quad_roots_closed(alpha: f64, theta: f64) -> (f64, f64) {
    let cot_half = 1.0 / (0.5 * theta).tan();
    let t = (0.25 * alpha).tan();
    (-t * cot_half, cot_half / t)
}

/// Integration limits in `x` for the three angular regions:
/// `A = (1 − w)/2 = sin²(α/4)` and `B = (1 + w)/2 = cos²(α/4)` with
/// `w = cos(α/2)`.
fn region_limits(alpha: f64) -> (f64, f64) {
    let (s, c) = (0.25 * alpha).sin_cos();
    (s * s, c * c)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < std::f64::consts::PI) {
        return Err(Error::DomainError {
            what: "α",
            value: alpha,
            domain: "(0, π)",
        });
    }
    Ok(())
}

/// `ψ(α)` for a given common law, in the form
///
/// `∫_B^1 f_X + ½∫_A^B f_X + (tan(α/4)/2)·∫_A^B h + (1/sin(α/2))·∫_0^A h`.
pub fn psi_at(common: &DistributionSpec, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let (lo, hi) = region_limits(alpha);
    let h = HFunction::new(common);
    let fx = |x: f64, one_minus_x: f64| common.fx_split(x, one_minus_x);
    let upper = integrate_endpoint_aware(|x, _, r| fx(x, r), hi, 1.0, &PSI_QUADRATURE)?;
    let middle_fx = integrate_endpoint_aware(|x, _, _| fx(x, 1.0 - x), lo, hi, &PSI_QUADRATURE)?;
    let middle_h = h.integral(lo, hi)?;
    let lower_h = h.integral(0.0, lo)?;
    Ok(upper
        + 0.5 * middle_fx
        + 0.5 * (0.25 * alpha).tan() * middle_h
        + lower_h / (0.5 * alpha).sin())
}

/// Accuracy of the Bayes rule for `pair`.
pub fn psi_closed(pair: &ClassPair) -> Result<f64> {
    psi_at(&pair.common, pair.alpha)
}

/// `ψ(α)` as an expectation over the rotation angle:
///
/// `P(Θ < α/2) + ½P(α/2 ≤ Θ ≤ π − α/2)
///  + (tan(α/4)/2)·E[cot(Θ/2); α/2 ≤ Θ ≤ π − α/2]
///  + (1/sin(α/2))·E[cot(Θ/2); Θ > π − α/2]`,
///
/// integrated over `θ` with `f_Θ(θ) = f_X(cos²(θ/2))·sin(θ)/2`.
pub fn psi_theta_form(common: &DistributionSpec, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let density = |theta: f64| {
        let (s, c) = (0.5 * theta).sin_cos();
        common.fx_split(c * c, s * s) * s * c
    };
    let weighted = |theta: f64| {
        let (s, c) = (0.5 * theta).sin_cos();
        common.fx_split(c * c, s * s) * c * c
    };
    let pi = std::f64::consts::PI;
    let (near, far) = (0.5 * alpha, pi - 0.5 * alpha);
    let q = &PSI_QUADRATURE;
    let p_near = integrate(density, 0.0, near, q)?;
    let p_mid = integrate(density, near, far, q)?;
    let e_mid = integrate(weighted, near, far, q)?;
    let e_far = integrate(weighted, far, pi, q)?;
    Ok(p_near + 0.5 * p_mid + 0.5 * (0.25 * alpha).tan() * e_mid + e_far / (0.5 * alpha).sin())
}

/// `ψ′(α) = (1/(4(1 + w)))·∫_A^B h − (2w/(4(1 + w)(1 − w)))·∫_0^A h`
/// with `w = cos(α/2)`.
pub fn psi_derivative_at(common: &DistributionSpec, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let (lo, hi) = region_limits(alpha);
    let w = (0.5 * alpha).cos();
    let one_minus_w = 2.0 * lo;
    let h = HFunction::new(common);
    let middle = h.integral(lo, hi)?;
    let lower = h.integral(0.0, lo)?;
    Ok((middle - 2.0 * w * lower / one_minus_w) / (4.0 * (1.0 + w)))
}

pub fn psi_derivative(pair: &ClassPair) -> Result<f64> {
    psi_derivative_at(&pair.common, pair.alpha)
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

/// Fraction of correct assignments over `n` observations whose class is
/// drawn with probability 1/2 each.
pub fn mc_accuracy<R: Rng + ?Sized>(pair: &ClassPair, n: usize, rng: &mut R) -> Result<Estimate> {
    check_n(n)?;
    let sampler = RotationSampler::new(&pair.common);
    let mut hits = RunningMoments::new();
    for _ in 0..n {
        let label = if rng.random::<bool>() {
            ClassLabel::One
        } else {
            ClassLabel::Two
        };
        let r: Rotation = rng.sample(sampler);
        let p = r * *pair.modal(label);
        hits.push(if bayes_assign(&p, pair) == label { 1.0 } else { 0.0 });
    }
    Ok(hits.estimate())
}

/// Fraction of class-1 observations assigned to class 1.
pub fn mc_class1_accuracy<R: Rng + ?Sized>(pair: &ClassPair, n: usize, rng: &mut R) -> Result<Estimate> {
    check_n(n)?;
    let sampler = RotationSampler::new(&pair.common);
    let mut hits = RunningMoments::new();
    for _ in 0..n {
        let r: Rotation = rng.sample(sampler);
        let p = r * pair.m1;
        hits.push(if bayes_assign(&p, pair) == ClassLabel::One { 1.0 } else { 0.0 });
    }
    Ok(hits.estimate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;
    use crate::so3::{planar_block, sample_uniform_axis, AxisAngle};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn random_rotation(rng: &mut impl Rng) -> Rotation {
        let axis = sample_uniform_axis(rng);
        Rotation::from_axis_angle(&AxisAngle::new(axis, rng.random::<f64>() * 3.0 + 0.05).unwrap())
    }

    fn cayley(k: f64) -> DistributionSpec {
        DistributionSpec::cayley(k).unwrap()
    }

    #[test]
    fn pair_construction() {
        let mut rng = seeded_rng(1);
        let m1 = random_rotation(&mut rng);
        let m2 = random_rotation(&mut rng);
        let pair = ClassPair::new(m1, m2, cayley(2.0).with_modal(m1)).unwrap();
        assert!((pair.alpha() - rotation_angle_between(&m1, &m2)).abs() < 1e-15);
        assert_eq!(pair.common().modal(), &Rotation::identity());
        assert!(ClassPair::new(m1, m1, cayley(1.0)).is_err());
        let c = ClassPair::canonical(1.0, cayley(1.0)).unwrap();
        assert!((c.alpha() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn assign_modals() {
        let mut rng = seeded_rng(2);
        let m1 = random_rotation(&mut rng);
        let m2 = random_rotation(&mut rng);
        let pair = ClassPair::new(m1, m2, cayley(1.0)).unwrap();
        let a = pair.alpha();
        assert_eq!(bayes_assign(&m1, &pair), ClassLabel::One);
        assert_eq!(bayes_assign(&m2, &pair), ClassLabel::Two);
        assert!((discriminant(&m1, &pair) - 2.0 * (1.0 - a.cos())).abs() < 1e-12);
        assert!((discriminant(&m2, &pair) + 2.0 * (1.0 - a.cos())).abs() < 1e-12);
    }

    #[test]
    fn spectral_frame_and_quadratic() {
        let mut rng = seeded_rng(3);
        for _ in 0..100 {
            let m1 = random_rotation(&mut rng);
            let m2 = random_rotation(&mut rng);
            let pair = ClassPair::new(m1, m2, cayley(1.0)).unwrap();
            let q = pair.spectral_frame().unwrap();
            let lhs = Matrix3::identity() - (m1 * m2.transpose()).matrix();
            let rhs = q.matrix().transpose() * planar_block(pair.alpha()) * q.matrix();
            assert!((lhs - rhs).amax() < 1e-12);

            // In the frame Q the discriminant is the quadratic in U₃.
            let p = random_rotation(&mut rng);
            let aa = (p * m1.transpose()).to_axis_angle().unwrap();
            let u = q.apply(aa.axis().as_vector());
            let x = 0.5 * (1.0 + aa.angle().cos());
            let coeffs = quad_coeffs(pair.alpha(), x);
            assert!((coeffs.eval(u.z) - discriminant(&p, &pair)).abs() < 1e-12);
        }
    }

    #[test]
    fn quad_example() {
        let c = quad_coeffs(FRAC_PI_2, 0.5);
        assert!((c.a + 1.0).abs() < 1e-15 && (c.b - 2.0).abs() < 1e-15 && (c.c - 1.0).abs() < 1e-15);
        let (r1, r2) = c.roots();
        assert!((r1 - (1.0 - 2f64.sqrt())).abs() < 1e-15);
        assert!((r2 - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        let (k1, k2) = quad_roots_closed(FRAC_PI_2, FRAC_PI_2);
        assert!((r1 - k1).abs() < 1e-15 && (r2 - k2).abs() < 1e-14);
    }

    #[test]
    fn h_function() {
        let h = HFunction::new(&cayley(2.0));
        assert!((h.normalization().unwrap() - 1.0).abs() < 1e-9);
        assert!(h.eval(0.0).unwrap() == 0.0);
        assert!(h.eval(1.5).is_err());
        let f = HFunction::new(&DistributionSpec::fisher_von_mises(3.0).unwrap());
        assert!((f.normalization().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn haar_is_chance() {
        for a in [0.5, 1.5, 3.0] {
            let psi = psi_at(&DistributionSpec::haar(), a).unwrap();
            assert!((psi - 0.5).abs() < 1e-9, "α={a}: {psi}");
            assert!(psi_derivative_at(&DistributionSpec::haar(), a).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn small_angle_limit() {
        for spec in [cayley(3.0), DistributionSpec::fisher_von_mises(2.0).unwrap()] {
            assert!((psi_at(&spec, 1e-9).unwrap() - 0.5).abs() < 1e-8);
        }
    }

    #[test]
    fn forms_agree() {
        for spec in [cayley(0.5), cayley(5.0), DistributionSpec::fisher_von_mises(1.5).unwrap()] {
            for a in [0.1, 1.0, 2.0, 3.1] {
                let hf = psi_at(&spec, a).unwrap();
                let tf = psi_theta_form(&spec, a).unwrap();
                assert!((hf - tf).abs() < 1e-10, "α={a}: {hf} vs {tf}");
            }
        }
    }

    #[test]
    fn derivative_matches_difference() {
        let spec = cayley(2.0);
        for a in [0.4, 1.2, 2.4] {
            let step = 1e-4;
            let fd = (psi_at(&spec, a + step).unwrap() - psi_at(&spec, a - step).unwrap()) / (2.0 * step);
            let d = psi_derivative_at(&spec, a).unwrap();
            assert!((fd - d).abs() < 1e-6, "α={a}: {fd} vs {d}");
        }
        assert!(psi_derivative_at(&cayley(1.0), 1.0).unwrap() > 0.0);
        assert!(psi_at(&spec, 0.0).is_err());
        assert!(psi_at(&spec, PI).is_err());
    }

    #[test]
    fn monte_carlo_small() {
        let mut rng = seeded_rng(4);
        let pair = ClassPair::canonical(FRAC_PI_2, cayley(200.0)).unwrap();
        assert!(mc_accuracy(&pair, 100_000, &mut rng).unwrap().mean >= 0.99);
        let pair = ClassPair::canonical(1.0, cayley(1.0)).unwrap();
        let est = mc_accuracy(&pair, 200_000, &mut rng).unwrap();
        assert!(est.z_score(psi_closed(&pair).unwrap()) < 4.0);
        let one = mc_class1_accuracy(&pair, 200_000, &mut rng).unwrap();
        assert!(one.z_score(psi_closed(&pair).unwrap()) < 4.0);
        assert!(mc_accuracy(&pair, 0, &mut rng).is_err());
    }

    #[test]
    fn swap_symmetry() {
        let mut rng = seeded_rng(5);
        let pair = ClassPair::new(random_rotation(&mut rng), random_rotation(&mut rng), cayley(2.0)).unwrap();
        let swapped = pair.swapped();
        for _ in 0..100 {
            let p = random_rotation(&mut rng);
            let a = bayes_assign(&p, &pair);
            let b = bayes_assign(&p, &swapped);
            if discriminant(&p, &pair).abs() > 1e-12 {
                assert_ne!(a, b);
            }
        }
    }
}
