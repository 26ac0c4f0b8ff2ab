//! Transforms between the angle variate `X = cos²(Θ/2)` and the corner
//! entry `Z = e₃ᵀ R e₃` of a conjugation-invariant rotation, and between
//! their moments `ρ_r = E[Xʳ]` and `τ_k = E[Zᵏ]`.
//!
//! Densities of `Z` here are zonal: `f_Z(s)` is the density of `R e₃` with
//! respect to normalized surface measure on the sphere, so
//! `½∫₋₁¹ f_Z(s) ds = 1` and the Haar law has `f_Z ≡ 1`.

pub mod quadrature;

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

pub use quadrature::{integrate, integrate_endpoint_aware, QuadratureSpec};

use crate::distributions::{DistributionSpec, Family};
use crate::error::{Error, Result};

/// Highest moment order supported by [`rho_moment`] and [`tau_k`].
pub const MAX_ORDER: usize = 20;

/// Quadrature used for moment integrals.
pub(crate) const MOMENT_QUADRATURE: QuadratureSpec = QuadratureSpec {
    abs_tol: 1e-13,
    max_depth: 60,
};

fn check_order(what: &'static str, r: usize, lo: usize) -> Result<()> {
    if r < lo || r > MAX_ORDER {
        return Err(Error::OutOfRange {
            what,
            value: r as f64,
            lo: lo as f64,
            hi: MAX_ORDER as f64,
        });
    }
    Ok(())
}

/// Raw moments of `X` and `Z` up to a fixed order.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector {
    pub rho: Vec<f64>,
    pub tau: Vec<f64>,
}

impl MomentVector {
    /// `ρ_0..=ρ_order` and `τ_0..=τ_order` for `spec`.
    pub fn compute(spec: &DistributionSpec, order: usize) -> Result<Self> {
        check_order("moment order", order, 0)?;
        let rho = (0..=order)
            .map(|r| rho_moment(spec, r))
            .collect::<Result<Vec<_>>>()?;
        let mut tau = vec![1.0];
        for k in 1..=order {
            tau.push(tau_k(spec, k)?);
        }
        Ok(Self { rho, tau })
    }
}

/// `ρ_r = E[Xʳ]`.
///
/// Haar and Cayley use the Beta moment `(p)_r/(p + q)_r` with `p = κ + 1/2`,
/// `q = 3/2`; Fisher–von Mises integrates `xʳ f_X(x)`.
pub fn rho_moment(spec: &DistributionSpec, r: usize) -> Result<f64> {
    check_order("moment order r", r, 0)?;
    if r == 0 {
        return Ok(1.0);
    }
    match spec.family() {
        Family::Haar | Family::CayleyLmr => {
            let p = spec.kappa() + 0.5;
            Ok((0..r).map(|i| (p + i as f64) / (p + 1.5 + i as f64)).product())
        }
        Family::FisherVonMises => integrate_endpoint_aware(
            |x, _, one_minus_x| x.powi(r as i32) * spec.fx_split(x, one_minus_x),
            0.0,
            1.0,
            &MOMENT_QUADRATURE,
        ),
    }
}

/// `(τ₁, τ₂)` from `(ρ₁, ρ₂)`:
/// `τ₁ = −1/3 + 4/3·ρ₁`, `τ₂ = 7/15 − 8/5·ρ₁ + 32/15·ρ₂`.
pub fn tau_from_rho(rho1: f64, rho2: f64) -> (f64, f64) {
    let tau1 = -1.0 / 3.0 + 4.0 / 3.0 * rho1;
    let tau2 = 7.0 / 15.0 - 8.0 / 5.0 * rho1 + 32.0 / 15.0 * rho2;
    (tau1, tau2)
}

/// The polynomial `P_k` with `G⁰_k(x) = (1 − x)·P_k(x)`, from
/// `P_1 = 4√2/3`, `P_k = 4√2/(2k+1) + 2(k−1)/(2k+1)·(2x − 1)·P_{k−1}`.
fn reduced_poly(k: usize, x: f64) -> f64 {
    let mut p = 0.0;
    for j in 1..=k {
        let jf = j as f64;
        let denom = 2.0 * jf + 1.0;
        p = 4.0 * SQRT_2 / denom + 2.0 * (jf - 1.0) / denom * (2.0 * x - 1.0) * p;
    }
    p
}

/// `G⁰_k(x) = G_k(x)/√(1 − x)`, where
/// `G_k(x) = ∫_{2x−1}^1 t^{k−1} √(1 + t − 2x) dt`.
///
/// The factor `(1 − x)` is carried analytically, so `g0(k, 1) = 0` exactly.
///
/// # Panics
/// If `k == 0`.
pub fn g0(k: usize, x: f64) -> f64 {
    assert!(k >= 1, "g0 is defined for k ≥ 1");
    (1.0 - x) * reduced_poly(k, x)
}

/// Power-basis coefficients of `G⁰_k`, lowest degree first (length `k + 1`).
pub fn g0_coefficients(k: usize) -> Vec<f64> {
    assert!(k >= 1, "g0 is defined for k ≥ 1");
    let mut p = vec![0.0];
    for j in 1..=k {
        let jf = j as f64;
        let denom = 2.0 * jf + 1.0;
        let b = 2.0 * (jf - 1.0) / denom;
        // b·(2x − 1)·p
        let mut next = vec![0.0; p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i] -= b * c;
            next[i + 1] += 2.0 * b * c;
        }
        next[0] += 4.0 * SQRT_2 / denom;
        while next.len() > j {
            next.pop();
        }
        p = next;
    }
    // (1 − x)·p
    let mut out = vec![0.0; p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i] += c;
        out[i + 1] -= c;
    }
    out
}

/// Coefficients `c_j` with `τ_k = Σ_j c_j ρ_j`, lowest order first.
pub fn tau_rho_coefficients(k: usize) -> Vec<f64> {
    let scale = k as f64 * FRAC_1_SQRT_2;
    let mut c: Vec<f64> = g0_coefficients(k).iter().map(|g| -scale * g).collect();
    c[0] += 1.0;
    c
}

/// `τ_k = E[Zᵏ] = 1 − (k/√2)·∫₀¹ f_X(x)·G⁰_k(x) dx`.
pub fn tau_k(spec: &DistributionSpec, k: usize) -> Result<f64> {
    check_order("moment order k", k, 1)?;
    let integral = integrate_endpoint_aware(
        |x, _, one_minus_x| spec.fx_split(x, one_minus_x) * one_minus_x * reduced_poly(k, x),
        0.0,
        1.0,
        &MOMENT_QUADRATURE,
    )?;
    Ok(1.0 - k as f64 * FRAC_1_SQRT_2 * integral)
}

fn check_open(what: &'static str, s: f64, lo: f64, hi: f64, domain: &'static str) -> Result<()> {
    if !(s > lo && s < hi) {
        return Err(Error::DomainError {
            what,
            value: s,
            domain,
        });
    }
    Ok(())
}

/// Zonal density of `Z` from the law of `X`:
/// `f_Z(s) = (1/√2)·∫₀^{(1+s)/2} f_X(x) / √((1 + s − 2x)(1 − x)) dx`.
pub fn fz_from_fx(spec: &DistributionSpec, s: f64) -> Result<f64> {
    check_open("s", s, -1.0, 1.0, "(−1, 1)")?;
    let upper = 0.5 * (1.0 + s);
    // 1 + s − 2x = 2·(upper − x)
    let integral = integrate_endpoint_aware(
        |x, _, gap| spec.fx_split(x, 1.0 - x) / (gap * (1.0 - x)).sqrt(),
        0.0,
        upper,
        &MOMENT_QUADRATURE,
    )?;
    Ok(0.5 * integral)
}

/// Inverse of [`fz_from_fx`]: recovers `f_X(s)` from a zonal density `fz`.
///
/// The forward map is an Abel transform of order 1/2 in `y = (1 + s)/2`,
/// so the inverse needs one derivative. With
/// `L(y) = ∫₀¹ fz(2yv − 1)/√(1 − v) dv`,
/// `f_X(s) = (2/π)·√(1 − s)·(L(s)/(2√s) + √s·L′(s))`,
/// where `L′` is taken by a five-point central difference.
pub fn fx_from_fz<F>(fz: F, s: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    check_open("s", s, 0.0, 1.0, "(0, 1)")?;
    let q = QuadratureSpec::with_tol(1e-12);
    let l = |y: f64| {
        integrate_endpoint_aware(
            |v, _, one_minus_v| fz(2.0 * y * v - 1.0) / one_minus_v.sqrt(),
            0.0,
            1.0,
            &q,
        )
    };
    let h = (1e-3f64).min(s / 4.0).min((1.0 - s) / 4.0);
    let l0 = l(s)?;
    let slope = (l(s - 2.0 * h)? - 8.0 * l(s - h)? + 8.0 * l(s + h)? - l(s + 2.0 * h)?) / (12.0 * h);
    Ok(2.0 / PI * (1.0 - s).sqrt() * (l0 / (2.0 * s.sqrt()) + s.sqrt() * slope))
}
