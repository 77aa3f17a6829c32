//! The two real branches of Lambert's W, the inverse of `w ↦ w·eʷ`.

use core::f64::consts::E;
use libm::{exp, fabs, log, sqrt};

use crate::error::domain;
use crate::{Error, Result};

/// Real branch selector: `W₀` on `[−1/e, ∞)`, `W₋₁` on `[−1/e, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum LambertBranch {
    Principal,
    Lower,
}

const INV_E: f64 = 1.0 / E;

// Series of W about the branch point in p = ±√(2(ex + 1)).
fn branch_series(p: f64) -> f64 {
    const C: [f64; 7] = [-1.0, 1.0, -1.0 / 3.0, 11.0 / 72.0, -43.0 / 540.0, 769.0 / 17280.0, -221.0 / 8505.0];
    C.iter().rev().fold(0.0, |acc, &c| acc * p + c)
}

/// Solves `w·eʷ = x` on the requested branch.
///
/// Halley's iteration from an asymptotic or branch-point seed, kept inside a
/// shrinking bracket (bisection whenever a step would leave it).
pub fn lambert_w(branch: LambertBranch, x: f64) -> Result<f64> {
    if x.is_nan() {
        return domain("Lambert W argument is NaN", x);
    }
    let d = x + INV_E;
    // a few ulps below −1/e is the branch point itself
    if d < -4.0 * f64::EPSILON * INV_E {
        return domain("Lambert W requires x ≥ −1/e", x);
    }
    let d = d.max(0.0);
    if d <= 4.0 * f64::EPSILON * INV_E {
        return Ok(-1.0);
    }
    let p = sqrt(2.0 * E * d);
    let (seed, mut lo, mut hi) = match branch {
        LambertBranch::Principal => {
            if x == 0.0 {
                return Ok(0.0);
            }
            if !x.is_finite() {
                return domain("Lambert W argument must be finite", x);
            }
            let seed = if p < 0.5 {
                branch_series(p)
            } else if x < 3.0 {
                log(1.0 + x) * (1.0 - log(1.0 + log(1.0 + x)) / (2.0 + log(1.0 + x)))
            } else {
                let l1 = log(x);
                let l2 = log(l1);
                l1 - l2 + l2 / l1
            };
            let hi = if x <= E { 1.0 } else { log(x) };
            (seed, -1.0, hi)
        }
        LambertBranch::Lower => {
            if x >= 0.0 {
                return domain("lower Lambert branch requires x < 0", x);
            }
            let seed = if p < 0.5 {
                branch_series(-p)
            } else {
                let l1 = log(-x);
                let l2 = log(-l1);
                l1 - l2 + l2 / l1
            };
            // W₋₁(−e^{−u−1}) > −1 − √(2u) − u
            let u = -log(-x) - 1.0;
            (seed, -2.0 - sqrt(2.0 * u.max(0.0)) - u, -1.0)
        }
    };

    // g(w) = w eʷ − x is increasing on the principal bracket, decreasing on
    // the lower one; orient so that g(lo) < 0 < g(hi) in the "rising" sense.
    let rising = branch == LambertBranch::Principal;
    let mut w = seed.clamp(lo, hi);
    for _ in 0..200 {
        let ew = exp(w);
        let g = w * ew - x;
        // w·eʷ itself carries a relative rounding error of about ε|w|
        if fabs(g) <= 2.0 * f64::EPSILON * fabs(x) * fabs(w).max(1.0) {
            return Ok(clamp_branch(branch, polish(x, w)));
        }
        if (g < 0.0) == rising {
            lo = w;
        } else {
            hi = w;
        }
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * g / (2.0 * wp1);
        let mut next = w - g / denom;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if fabs(next - w) <= 2.0 * f64::EPSILON * fabs(w).max(f64::MIN_POSITIVE) {
            return Ok(clamp_branch(branch, polish(x, next)));
        }
        w = next;
    }
    Err(Error::NoConvergence { what: "Lambert W iteration", iterations: 200, residual: w * exp(w) - x })
}

/// One Newton step on `w + log(w/x) = 0`. Its residual is good to about an
/// ulp of `w`, where `w·eʷ − x` is only good to `ε|w|` relative.
fn polish(x: f64, w: f64) -> f64 {
    if fabs(w) < 2.0 || x == 0.0 {
        return w;
    }
    let h = w + log(w / x);
    w - h / (1.0 + 1.0 / w)
}

fn clamp_branch(branch: LambertBranch, w: f64) -> f64 {
    match branch {
        LambertBranch::Principal => w.max(-1.0),
        LambertBranch::Lower => w.min(-1.0),
    }
}

/// `−1/(2 W₋₁(−1/8)) ≈ 0.15329`, the largest `ℓ` with `log(4/ℓ) ≤ 1 + 1/(2ℓ)`.
///
/// Below it the two-sided power-series bracket on `t·K(1 − t²)` is valid.
pub fn lower_branch_threshold() -> f64 {
    let w = lambert_w(LambertBranch::Lower, -0.125).expect("−1/8 lies in the lower-branch domain");
    -1.0 / (2.0 * w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use LambertBranch::*;

    fn check(branch: LambertBranch, x: f64) -> f64 {
        let w = lambert_w(branch, x).unwrap();
        let r = fabs(w * exp(w) - x);
        assert!(r <= 1e-13 * fabs(x).max(1.0), "{branch:?} x={x} w={w} residual={r}");
        w
    }

    #[test]
    fn trivial_points() {
        assert_eq!(lambert_w(Lower, -INV_E).unwrap(), -1.0);
        assert_eq!(lambert_w(Principal, -INV_E).unwrap(), -1.0);
        assert_eq!(lambert_w(Principal, 0.0).unwrap(), 0.0);
        assert!((lambert_w(Principal, E).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn threshold_constant() {
        // frozen from a 30-digit evaluation: 0.153294967189618131
        assert!((lower_branch_threshold() - 0.153_294_967_189_618_13).abs() < 1e-14);
        assert!((lower_branch_threshold() - 0.15329).abs() < 5e-5);
    }

    #[test]
    fn far_lower_branch_is_correctly_rounded() {
        // 50-digit value: −315.29992679557924122557...
        let w = lambert_w(Lower, -3.678_794_411_714_423_4e-135).unwrap();
        assert!((w + 315.299_926_795_579_24).abs() <= 6e-14, "{w}");
        for k in 1..=300 {
            let x = -libm::pow(10.0, -(k as f64)) * INV_E;
            let w = lambert_w(Lower, x).unwrap();
            assert!(fabs(w * exp(w) / x - 1.0) < 1e-13, "x={x}");
        }
    }

    #[test]
    fn round_trip_grids() {
        let n = 1000;
        for i in 0..n {
            let u = (i as f64 + 0.5) / n as f64;
            // principal: [−1/e, 100], denser near the branch point
            check(Principal, -INV_E + (100.0 + INV_E) * u * u);
            // lower: geometric in |x| over [1e−300, 1/e)
            let x = -INV_E * libm::pow(1e-300 / INV_E, u);
            let w = check(Lower, x);
            assert!(w <= -1.0);
        }
    }

    #[test]
    fn near_branch_point() {
        for k in 4..16 {
            let d = libm::pow(10.0, -(k as f64));
            let a = check(Principal, -INV_E + d);
            let b = check(Lower, -INV_E + d);
            assert!(a >= -1.0 && b <= -1.0 && a > b);
        }
    }

    #[test]
    fn domain() {
        assert!(lambert_w(Principal, -0.4).is_err());
        assert!(lambert_w(Lower, 0.0).is_err());
        assert!(lambert_w(Lower, 1.0).is_err());
        assert!(lambert_w(Principal, f64::NAN).is_err());
    }
}
