//! Rotation distribution families: Haar, Cayley (León–Massé–Rivest) and
//! the isotropic matrix Fisher–von Mises law.
//!
//! Every family is shift-symmetric: a draw is `P = R·M` with `M` the modal
//! rotation and `R` conjugation-invariant. The law of `R` is fixed by the
//! law of the angle variate `X = (1 + cos Θ)/2 = cos²(Θ/2)`, the axis being
//! uniform on the sphere and independent of the angle.

pub mod bessel;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use statrs::function::beta::ln_beta;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::so3::{sample_uniform_axis, Rotation, UnitVector3};

pub use bessel::{bessel_i, bessel_i0_minus_i1_scaled, bessel_i_scaled, BesselOrder};

/// Largest Fisher–von Mises concentration supported. The normalizer needs
/// `I₀(2κ)` and `I₁(2κ)` for `2κ ≤ 100`, and the rejection sampler's
/// acceptance rate decays like `κ^{−3/2}`.
pub const FVM_MAX_KAPPA: f64 = 50.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Haar,
    CayleyLmr,
    FisherVonMises,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Haar => "haar",
            Family::CayleyLmr => "cayley",
            Family::FisherVonMises => "fvm",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "haar" | "uniform" => Ok(Family::Haar),
            "cayley" | "cayley-lmr" | "lmr" => Ok(Family::CayleyLmr),
            "fvm" | "fisher" | "fisher-von-mises" => Ok(Family::FisherVonMises),
            other => Err(Error::InvalidSpec(format!("unknown family '{other}'"))),
        }
    }
}

/// A rotation law: family, modal rotation and concentration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistributionSpec {
    family: Family,
    modal: Rotation,
    kappa: f64,
}

impl DistributionSpec {
    /// Validates `κ ≥ 0`, `κ = 0` for Haar and `κ ≤ 50` for Fisher–von Mises.
    pub fn new(family: Family, modal: Rotation, kappa: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "concentration must be finite and non-negative, got {kappa}"
            )));
        }
        match family {
            Family::Haar if kappa != 0.0 => {
                return Err(Error::InvalidSpec(format!(
                    "the Haar family has no concentration parameter, got κ = {kappa}"
                )))
            }
            Family::FisherVonMises if kappa > FVM_MAX_KAPPA => {
                return Err(Error::InvalidSpec(format!(
                    "Fisher–von Mises κ = {kappa} exceeds the supported maximum {FVM_MAX_KAPPA}"
                )))
            }
            _ => {}
        }
        Ok(Self {
            family,
            modal,
            kappa,
        })
    }

    pub fn haar() -> Self {
        Self {
            family: Family::Haar,
            modal: Rotation::identity(),
            kappa: 0.0,
        }
    }

    pub fn cayley(kappa: f64) -> Result<Self> {
        Self::new(Family::CayleyLmr, Rotation::identity(), kappa)
    }

    pub fn fisher_von_mises(kappa: f64) -> Result<Self> {
        Self::new(Family::FisherVonMises, Rotation::identity(), kappa)
    }

    /// The same law shifted to modal rotation `modal`.
    pub fn with_modal(self, modal: Rotation) -> Self {
        Self { modal, ..self }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn modal(&self) -> &Rotation {
        &self.modal
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// True when the law of `R` is Haar measure (any family at κ = 0).
    pub fn is_uniform(&self) -> bool {
        self.kappa == 0.0
    }

    /// Density of `X` written as `√((1 − x)/x) · h(x)`; this returns the
    /// bounded factor `h`.
    fn h_split(&self, x: f64, one_minus_x: f64) -> f64 {
        let k = self.kappa;
        match self.family {
            _ if k == 0.0 => 2.0 / PI,
            Family::Haar => 2.0 / PI,
            Family::CayleyLmr => (k * x.ln() - ln_beta(k + 0.5, 1.5)).exp(),
            Family::FisherVonMises => {
                // (2/π)·e^{4κ(x−1)} / (e^{−2κ}(I₀(2κ) − I₁(2κ)))
                let norm = bessel_i0_minus_i1_scaled(2.0 * k)
                    .expect("κ ≤ 50 is enforced at construction");
                2.0 / PI * (-4.0 * k * one_minus_x).exp() / norm
            }
        }
    }

    pub(crate) fn fx_split(&self, x: f64, one_minus_x: f64) -> f64 {
        (one_minus_x / x).sqrt() * self.h_split(x, one_minus_x)
    }
}

/// `X = (1 + cos Θ)/2 ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct AngleVariate(f64);

impl AngleVariate {
    pub fn new(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::DomainError {
                what: "angle variate",
                value: x,
                domain: "[0, 1]",
            });
        }
        Ok(Self(x))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `Θ = arccos(2X − 1) ∈ [0, π]`.
    pub fn angle(self) -> f64 {
        (2.0 * self.0 - 1.0).clamp(-1.0, 1.0).acos()
    }
}

fn check_open_unit(x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::DomainError {
            what: "x",
            value: x,
            domain: "(0, 1)",
        });
    }
    Ok(())
}

/// Lebesgue density of `X` on `(0, 1)`.
///
/// Haar: `Beta(1/2, 3/2)`. Cayley: `Beta(κ + 1/2, 3/2)`. Fisher–von Mises:
/// `2e^{−2κ}/(π(I₀(2κ) − I₁(2κ))) · √((1 − x)/x) · e^{4κx}`.
pub fn fx_density(spec: &DistributionSpec, x: f64) -> Result<f64> {
    check_open_unit(x)?;
    Ok(spec.fx_split(x, 1.0 - x))
}

/// `h(x) = √(x/(1 − x)) · f_X(x)`, bounded on `[0, 1]` for all families.
/// For Cayley it is `x^κ / B(κ + 1/2, 3/2)`.
pub fn h_density(spec: &DistributionSpec, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError {
            what: "x",
            value: x,
            domain: "[0, 1]",
        });
    }
    Ok(spec.h_split(x, 1.0 - x))
}

/// Density of `P` with respect to the Haar probability measure.
pub fn rotation_density(spec: &DistributionSpec, p: &Rotation) -> f64 {
    let k = spec.kappa;
    if k == 0.0 {
        return 1.0;
    }
    let tr = (p * &spec.modal.transpose()).trace();
    match spec.family {
        Family::Haar => 1.0,
        Family::CayleyLmr => {
            let base = (1.0 + tr).max(0.0);
            if base == 0.0 {
                return 0.0;
            }
            let log_norm = 0.5 * PI.ln() + ln_gamma(k + 2.0)
                - 2.0 * k * std::f64::consts::LN_2
                - ln_gamma(k + 0.5);
            (log_norm + k * base.ln()).exp()
        }
        Family::FisherVonMises => {
            // e^{κ tr} / (e^κ (I₀(2κ) − I₁(2κ))), with both sides scaled by e^{−3κ}
            let norm = bessel_i0_minus_i1_scaled(2.0 * k)
                .expect("κ ≤ 50 is enforced at construction");
            (k * (tr - 3.0)).exp() / norm
        }
    }
}

/// Zonal density `2^{−κ}(κ + 1)(1 + s)^κ` of `R e₃` under the Cayley law,
/// with respect to normalized surface measure.
pub fn fz_closed_cayley(kappa: f64, s: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&s) {
        return Err(Error::DomainError {
            what: "s",
            value: s,
            domain: "[−1, 1]",
        });
    }
    if !(kappa >= 0.0) {
        return Err(Error::DomainError {
            what: "κ",
            value: kappa,
            domain: "[0, ∞)",
        });
    }
    Ok((kappa + 1.0) * ((1.0 + s) / 2.0).powf(kappa))
}

/// One draw of `P` together with the chart coordinates of `R = P Mᵀ`.
#[derive(Clone, Copy, Debug)]
pub struct RotationSample {
    pub rotation: Rotation,
    pub axis: UnitVector3,
    pub theta: f64,
    pub x: f64,
}

#[derive(Clone, Copy, Debug)]
enum AngleSampler {
    /// `X = G_p / (G_p + G_q)` with independent Gamma variates.
    Beta { p: Gamma<f64>, q: Gamma<f64> },
    /// Haar proposal `Beta(1/2, 3/2)`, accepted with probability
    /// `e^{4κ(x − 1)}`.
    FisherRejection {
        p: Gamma<f64>,
        q: Gamma<f64>,
        kappa: f64,
    },
}

fn beta_draw<R: Rng + ?Sized>(p: &Gamma<f64>, q: &Gamma<f64>, rng: &mut R) -> f64 {
    let a = p.sample(rng);
    let b = q.sample(rng);
    if a + b == 0.0 {
        0.5
    } else {
        a / (a + b)
    }
}

/// Reusable sampler for a [`DistributionSpec`].
#[derive(Clone, Copy, Debug)]
pub struct RotationSampler {
    spec: DistributionSpec,
    angle: AngleSampler,
}

impl RotationSampler {
    pub fn new(spec: &DistributionSpec) -> Self {
        let gamma = |shape: f64| Gamma::new(shape, 1.0).expect("shape is positive");
        let angle = match spec.family {
            Family::FisherVonMises if spec.kappa > 0.0 => AngleSampler::FisherRejection {
                p: gamma(0.5),
                q: gamma(1.5),
                kappa: spec.kappa,
            },
            Family::CayleyLmr => AngleSampler::Beta {
                p: gamma(spec.kappa + 0.5),
                q: gamma(1.5),
            },
            _ => AngleSampler::Beta {
                p: gamma(0.5),
                q: gamma(1.5),
            },
        };
        Self { spec: *spec, angle }
    }

    pub fn spec(&self) -> &DistributionSpec {
        &self.spec
    }

    pub fn sample_x<R: Rng + ?Sized>(&self, rng: &mut R) -> AngleVariate {
        match &self.angle {
            AngleSampler::Beta { p, q } => AngleVariate(beta_draw(p, q, rng)),
            AngleSampler::FisherRejection { p, q, kappa } => loop {
                let x = beta_draw(p, q, rng);
                let u: f64 = rng.random();
                if u < (4.0 * kappa * (x - 1.0)).exp() {
                    break AngleVariate(x);
                }
            },
        }
    }

    /// Draws `X`, sets `θ = arccos(2X − 1)`, draws a uniform axis `u` and
    /// returns `P = R(u, θ)·M` with its coordinates.
    pub fn sample_detailed<R: Rng + ?Sized>(&self, rng: &mut R) -> RotationSample {
        let x = self.sample_x(rng);
        let theta = x.angle();
        let axis = sample_uniform_axis(rng);
        let r = Rotation::from_axis_angle_raw(&axis, theta);
        RotationSample {
            rotation: r * self.spec.modal,
            axis,
            theta,
            x: x.value(),
        }
    }
}

impl Distribution<Rotation> for RotationSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Rotation {
        self.sample_detailed(rng).rotation
    }
}

/// One draw of `X` for `spec`.
pub fn sample_x<R: Rng + ?Sized>(spec: &DistributionSpec, rng: &mut R) -> AngleVariate {
    RotationSampler::new(spec).sample_x(rng)
}

/// One draw of `P = R·M` for `spec`.
pub fn sample_rotation<R: Rng + ?Sized>(spec: &DistributionSpec, rng: &mut R) -> Rotation {
    RotationSampler::new(spec).sample(rng)
}
