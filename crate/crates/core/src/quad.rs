//! Globally adaptive 21-point Gauss–Kronrod quadrature.
//!
//! This is the oracle backbone: every closed form in the crate is checked
//! against a direct integration of its defining integrand with this routine.
//! The interval with the largest error estimate is bisected until the summed
//! estimate drops below the absolute tolerance. Integrable endpoint
//! singularities are tolerated because the rule never samples the endpoints.

use alloc::vec::Vec;
use libm::fabs;

use crate::{Error, Result};

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

/// Default subdivision budget for [`integrate`].
pub const DEFAULT_MAX_SEGMENTS: usize = 2000;

// Kronrod abscissae; odd indices are the 10-point Gauss–Legendre nodes.
// Tabulated constants keep their published digits.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_715_467_491_200,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Nodes and weights of the 10-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre_10() -> [(f64, f64); 10] {
    let mut rule = [(0.0, 0.0); 10];
    for j in 0..5 {
        let x = XGK[2 * j + 1];
        rule[2 * j] = (-x, WG[j]);
        rule[2 * j + 1] = (x, WG[j]);
    }
    rule
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = fabs(err);
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = libm::pow(200.0 * scaled / res_asc, 1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

fn kronrod21<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = fabs(res_k);
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (fabs(f1) + fabs(f2));
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * fabs(fc - mean);
    for j in 0..10 {
        res_asc += WGK[j] * (fabs(fv1[j] - mean) + fabs(fv2[j] - mean));
    }
    let width = fabs(half);
    let err = fabs((res_k - res_g) * half);
    Segment { lo, hi, value: res_k * half, error: rescale_error(err, res_abs * width, res_asc * width) }
}

/// Integrates `f` over `[lo, hi]` to absolute tolerance `tol`.
///
/// Reversed limits flip the sign. Fails with [`Error::Quadrature`] (carrying
/// the partial estimate) when the subdivision budget runs out or the
/// requested tolerance is below what rounding allows.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<QuadratureResult> {
    integrate_with_budget(f, lo, hi, tol, DEFAULT_MAX_SEGMENTS)
}

pub fn integrate_with_budget<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    max_segments: usize,
) -> Result<QuadratureResult> {
    if !(tol > 0.0) {
        return crate::error::domain("quadrature tolerance must be positive", tol);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return crate::error::domain("integration limits must be finite", if lo.is_finite() { hi } else { lo });
    }
    if lo == hi {
        return Ok(QuadratureResult { value: 0.0, abs_error: 0.0, evaluations: 0 });
    }
    if hi < lo {
        let r = integrate_with_budget(f, hi, lo, tol, max_segments)?;
        return Ok(QuadratureResult { value: -r.value, ..r });
    }

    let mut evaluations = 21;
    let first = kronrod21(&mut f, lo, hi);
    if !first.value.is_finite() {
        return crate::error::domain("integrand is not finite on the interval", first.value);
    }
    let mut segments: Vec<Segment> = alloc::vec![first];
    let mut total = first.value;
    let mut total_err = first.error;

    while total_err > tol {
        let worst =
            segments.iter().enumerate().max_by(|a, b| a.1.error.total_cmp(&b.1.error)).map(|(i, _)| i).unwrap_or(0);
        let seg = segments[worst];
        let mid = 0.5 * (seg.lo + seg.hi);
        let too_narrow = mid <= seg.lo
            || mid >= seg.hi
            || (seg.hi - seg.lo) <= 1e3 * f64::EPSILON * fabs(mid).max(f64::MIN_POSITIVE);
        if segments.len() >= max_segments || too_narrow {
            return Err(Error::Quadrature { estimate: total, abs_error: total_err, evaluations });
        }
        let left = kronrod21(&mut f, seg.lo, mid);
        let right = kronrod21(&mut f, mid, seg.hi);
        evaluations += 42;
        if !left.value.is_finite() || !right.value.is_finite() {
            return crate::error::domain("integrand is not finite on the interval", mid);
        }
        total += left.value + right.value - seg.value;
        total_err += left.error + right.error - seg.error;
        segments[worst] = left;
        segments.push(right);
    }

    // Re-sum to shed the drift of the incremental updates.
    let value = segments.iter().map(|s| s.value).sum();
    let abs_error = segments.iter().map(|s| s.error).sum();
    Ok(QuadratureResult { value, abs_error, evaluations })
}
