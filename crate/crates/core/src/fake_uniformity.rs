//! `τ₂(κ) − 1/3` as a function of the concentration, its zeros, and its
//! slope at κ = 0.
//!
//! Wherever `τ₂(κ) = 1/3` the expected projected Gram matrix equals its
//! Haar value, so projections alone cannot reveal that the rotations are
//! not uniform. The Cayley family hits this at κ = 1.

use crate::distributions::{DistributionSpec, Family};
use crate::error::{Error, Result};
use crate::moments::{rho_moment, tau_from_rho};
use crate::so3::Rotation;

/// Number of grid points in the sign scan of [`find_fake_uniformity`].
pub const SCAN_POINTS: usize = 64;

const ONE_THIRD: f64 = 1.0 / 3.0;

/// One point of the `τ₂(κ) − 1/3` curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub kappa: f64,
    pub tau2_minus_third: f64,
}

fn spec_for(family: Family, kappa: f64) -> Result<DistributionSpec> {
    DistributionSpec::new(family, Rotation::identity(), kappa)
}

/// `τ₂` from `ρ₁(κ)` and `ρ₂(κ)`.
pub fn tau2_of_kappa(family: Family, kappa: f64) -> Result<f64> {
    let spec = spec_for(family, kappa)?;
    let (_, tau2) = tau_from_rho(rho_moment(&spec, 1)?, rho_moment(&spec, 2)?);
    Ok(tau2)
}

/// `(2 + κ + κ²)/(6 + 5κ + κ²)`, the Cayley `τ₂` in closed form.
pub fn cayley_tau2_closed(kappa: f64) -> f64 {
    (2.0 + kappa + kappa * kappa) / (6.0 + 5.0 * kappa + kappa * kappa)
}

/// Uniform grid on `[0, κ_max]` with `n_points` points.
pub fn scan_curve(family: Family, kappa_max: f64, n_points: usize) -> Result<Vec<CurvePoint>> {
    if !(kappa_max > 0.0 && kappa_max.is_finite()) {
        return Err(Error::DomainError {
            what: "κ_max",
            value: kappa_max,
            domain: "(0, ∞)",
        });
    }
    if n_points < 2 {
        return Err(Error::DomainError {
            what: "n_points",
            value: n_points as f64,
            domain: "[2, ∞)",
        });
    }
    let last = (n_points - 1) as f64;
    (0..n_points)
        .map(|i| {
            let kappa = kappa_max * i as f64 / last;
            Ok(CurvePoint {
                kappa,
                tau2_minus_third: tau2_of_kappa(family, kappa)? - ONE_THIRD,
            })
        })
        .collect()
}

fn check_bracket(lo: f64, hi: f64) -> Result<()> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::DomainError {
            what: "κ bracket lower end",
            value: lo,
            domain: "0 < κ_lo < κ_hi < ∞",
        });
    }
    Ok(())
}

fn bisect<F>(f: &F, mut lo: f64, mut hi: f64, mut f_lo: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Every zero of `τ₂(κ) − 1/3` in `(κ_lo, κ_hi)` that shows up as a sign
/// change (or an exact zero) on a [`SCAN_POINTS`]-point grid, each refined
/// by bisection to `tol`.
pub fn fake_uniformity_roots(family: Family, kappa_lo: f64, kappa_hi: f64, tol: f64) -> Result<Vec<f64>> {
    check_bracket(kappa_lo, kappa_hi)?;
    if !(tol > 0.0) {
        return Err(Error::DomainError {
            what: "tol",
            value: tol,
            domain: "(0, ∞)",
        });
    }
    let f = |k: f64| Ok(tau2_of_kappa(family, k)? - ONE_THIRD);
    let step = (kappa_hi - kappa_lo) / (SCAN_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|i| kappa_lo + step * i as f64).collect();
    let values = grid.iter().map(|&k| f(k)).collect::<Result<Vec<_>>>()?;
    let mut roots = Vec::new();
    for i in 0..SCAN_POINTS - 1 {
        let (a, b) = (values[i], values[i + 1]);
        if a == 0.0 {
            if i > 0 {
                roots.push(grid[i]);
            }
        } else if b != 0.0 && (a < 0.0) != (b < 0.0) {
            roots.push(bisect(&f, grid[i], grid[i + 1], a, tol)?);
        }
    }
    Ok(roots)
}

/// First zero of `τ₂(κ) − 1/3` in `(κ_lo, κ_hi)`, or `None` when the scan
/// finds no sign change.
pub fn find_fake_uniformity(family: Family, kappa_lo: f64, kappa_hi: f64, tol: f64) -> Result<Option<f64>> {
    Ok(fake_uniformity_roots(family, kappa_lo, kappa_hi, tol)?.first().copied())
}

fn check_step(h: f64) -> Result<()> {
    if !(h > 0.0 && h <= 1e-3) {
        return Err(Error::DomainError {
            what: "step h",
            value: h,
            domain: "(0, 1e-3]",
        });
    }
    Ok(())
}

/// Right derivative at 0 of any curve `g`: one-sided differences at `h`
/// and `h/2`, combined by Richardson extrapolation.
pub fn initial_slope_of<F>(g: F, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    check_step(h)?;
    let g0 = g(0.0)?;
    let coarse = (g(h)? - g0) / h;
    let fine = (g(0.5 * h)? - g0) / (0.5 * h);
    Ok(2.0 * fine - coarse)
}

/// `τ₂′(0+)`. A negative value forces `τ₂` below 1/3 just above κ = 0,
/// and since `τ₂ → 1` as κ grows, a fake-uniformity point must follow.
pub fn initial_slope(family: Family, h: f64) -> Result<f64> {
    initial_slope_of(|k| tau2_of_kappa(family, k), h)
}
