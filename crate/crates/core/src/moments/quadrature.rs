//! Adaptive Gauss–Kronrod quadrature for integrands with square-root
//! endpoint singularities.
//!
//! Every integral is first mapped through `x = a + (b − a)·sin²(t)`,
//! `t ∈ [0, π/2]`. The Jacobian `(b − a)·sin(2t)` vanishes like
//! `√(x − a)` and `√(b − x)` at the two ends, so integrands behaving like
//! `(x − a)^{−1/2}` or `(b − x)^{−1/2}` become bounded. The transformed
//! integral is then evaluated by globally adaptive G7–K15 bisection.

use std::collections::BinaryHeap;
use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Tolerance and refinement limits for [`integrate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_depth: 60,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::DomainError {
                what: "abs_tol",
                value: self.abs_tol,
                domain: "(0, ∞)",
            });
        }
        if self.max_depth < 1 {
            return Err(Error::DomainError {
                what: "max_depth",
                value: self.max_depth as f64,
                domain: "[1, ∞)",
            });
        }
        Ok(())
    }
}

/// Hard cap on the number of live subintervals.
const MAX_INTERVALS: usize = 20_000;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    magnitude: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// QUADPACK-style error scaling of `|K15 − G7|`.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

/// Returns the K15 estimate, its error, and the K15 estimate of `∫|f|`.
fn gauss_kronrod<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> (f64, f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center);
    let mut res_k = f_center * WGK[7];
    let mut res_g = f_center * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let err = rescale_error((res_k - res_g) * half, res_abs * half.abs(), res_asc * half.abs());
    (value, err, res_abs * half.abs())
}

/// Integrates `f(x, x − a, b − x)` over `[a, b]`.
///
/// The two distances to the endpoints are computed from the substitution
/// directly, as `(b − a)·sin²t` and `(b − a)·cos²t`, so integrands of the
/// form `g(x)/√(b − x)` can use them without cancellation near the ends.
pub fn integrate_endpoint_aware<F>(f: F, a: f64, b: f64, q: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64, f64, f64) -> f64,
{
    q.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::DomainError {
            what: "integration limit",
            value: if a.is_finite() { b } else { a },
            domain: "finite reals",
        });
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return Err(Error::DomainError {
            what: "lower limit minus upper limit",
            value: a - b,
            domain: "(−∞, 0]",
        });
    }
    let width = b - a;
    let mut transformed = |t: f64| {
        let (s, c) = t.sin_cos();
        let left = width * s * s;
        let right = width * c * c;
        let x = if left <= right { a + left } else { b - right };
        let jac = 2.0 * width * s * c;
        if jac == 0.0 {
            0.0
        } else {
            f(x, left, right) * jac
        }
    };

    let (value, error, magnitude) = gauss_kronrod(&mut transformed, 0.0, FRAC_PI_2);
    let mut total = value;
    let mut total_err = error;
    let mut total_mag = magnitude;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        lo: 0.0,
        hi: FRAC_PI_2,
        value,
        error,
        magnitude,
        depth: 0,
    });
    loop {
        if !total.is_finite() || !total_err.is_finite() {
            return Err(Error::NoConvergence {
                estimate: total_err,
                tolerance: q.abs_tol,
                intervals: heap.len(),
            });
        }
        // Each segment's error carries a rounding floor of 50·eps·∫|f|;
        // their sum cannot be pushed below it.
        let tol = q.abs_tol.max(64.0 * f64::EPSILON * total_mag);
        if total_err <= tol {
            // Resum to drop the drift of the running totals.
            total_err = heap.iter().map(|s| s.error).sum();
            if total_err <= tol {
                return Ok(heap.iter().map(|s| s.value).sum());
            }
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => return Ok(total),
        };
        if worst.depth >= q.max_depth || heap.len() + 2 > MAX_INTERVALS {
            return Err(Error::NoConvergence {
                estimate: total_err,
                tolerance: q.abs_tol,
                intervals: heap.len() + 1,
            });
        }
        total -= worst.value;
        total_err -= worst.error;
        total_mag -= worst.magnitude;
        let mid = 0.5 * (worst.lo + worst.hi);
        for (lo, hi) in [(worst.lo, mid), (mid, worst.hi)] {
            let (value, error, magnitude) = gauss_kronrod(&mut transformed, lo, hi);
            total += value;
            total_err += error;
            total_mag += magnitude;
            heap.push(Segment {
                lo,
                hi,
                value,
                error,
                magnitude,
                depth: worst.depth + 1,
            });
        }
        if heap.len() % 64 == 0 {
            total_err = heap.iter().map(|s| s.error).sum();
            total_mag = heap.iter().map(|s| s.magnitude).sum();
        }
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `q.abs_tol`.
///
/// `f` may have integrable singularities of type `(x − a)^{−1/2}` and
/// `(b − x)^{−1/2}` at the endpoints; it is never evaluated at `a` or `b`.
pub fn integrate<F>(f: F, a: f64, b: f64, q: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_endpoint_aware(|x, _, _| f(x), a, b, q)
}
