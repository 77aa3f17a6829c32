//! Incomplete Beta function and the secant-power integrals built on it.

use core::f64::consts::FRAC_PI_2;
use libm::{atanh, cos, exp, fabs, lgamma, log, sin};

use crate::error::domain;
use crate::{Error, Result};

/// Complete Beta function `B(a, b)` for `a, b > 0`.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return domain("Beta parameters must be positive", if a > 0.0 { b } else { a });
    }
    Ok(exp(lgamma(a) + lgamma(b) - lgamma(a + b)))
}

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
fn betacf(a: f64, b: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    const MAX_ITER: usize = 10_000;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if fabs(d) < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if fabs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if fabs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if fabs(del - 1.0) <= f64::EPSILON {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence { what: "incomplete Beta continued fraction", iterations: MAX_ITER, residual: h })
}

/// Unregularized incomplete Beta `B_x(a, b) = ∫₀ˣ tᵃ⁻¹(1 − t)ᵇ⁻¹ dt`.
pub fn inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return domain("incomplete Beta requires x in [0, 1]", x);
    }
    if !(a > 0.0 && b > 0.0) {
        return domain("Beta parameters must be positive", if a > 0.0 { b } else { a });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return beta(a, b);
    }
    if x < (a + 1.0) / (a + b + 2.0) {
        let front = exp(a * log(x) + b * log(1.0 - x));
        Ok(front * betacf(a, b, x)? / a)
    } else {
        let front = exp(b * log(1.0 - x) + a * log(x));
        Ok(beta(a, b)? - front * betacf(b, a, 1.0 - x)? / b)
    }
}

/// `∫₀ʸ cos^{−2/(p+1)} θ dθ` for `0 ≤ y ≤ π/2` as `½ B_{sin² y}(½, ½ − 1/(p+1))`.
fn sec_power_from_zero(p: f64, y: f64) -> Result<f64> {
    if y == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(atanh(sin(y)));
    }
    if y == FRAC_PI_2 {
        return Ok(0.5 * beta(0.5, 0.5 - 1.0 / (p + 1.0))?);
    }
    let s = sin(y);
    let c = cos(y);
    let a = 0.5 - 1.0 / (p + 1.0);
    // Near π/2 go through the complementary variable cos² y directly: that
    // keeps 1 − sin² y from losing the digits that matter at the singularity.
    if s * s < 0.5 {
        Ok(0.5 * inc_beta(s * s, 0.5, a)?)
    } else {
        Ok(0.5 * (beta(0.5, a)? - inc_beta(c * c, a, 0.5)?))
    }
}

/// `∫_lo^hi cos^{−2/(p+1)} x dx`, the bracket in the small-`ℓ` energy, as a
/// difference of incomplete Beta values.
///
/// Limits must lie in `[−π/2, π/2]`; the endpoints `±π/2` are allowed only
/// when the singularity is integrable (`p > 1`).
pub fn sec_power_integral(p: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(p >= 1.0) || p.is_infinite() {
        return domain("secant-power integral needs p ≥ 1", p);
    }
    let edge_ok = |y: f64| fabs(y) < FRAC_PI_2 || (p > 1.0 && fabs(y) == FRAC_PI_2);
    if !edge_ok(lo) {
        return domain("cos^(-2/(p+1)) is not integrable up to this limit", lo);
    }
    if !edge_ok(hi) {
        return domain("cos^(-2/(p+1)) is not integrable up to this limit", hi);
    }
    if lo == hi {
        return Ok(0.0);
    }
    // the integrand is even, so each signed limit is an odd primitive
    let prim = |y: f64| -> Result<f64> {
        let v = sec_power_from_zero(p, fabs(y))?;
        Ok(if y < 0.0 { -v } else { v })
    };
    Ok(prim(hi)? - prim(lo)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;
    use core::f64::consts::FRAC_PI_4;
    use libm::{pow, sqrt};

    #[test]
    fn beta_known_values() {
        assert!((beta(1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((beta(0.5, 0.5).unwrap() - core::f64::consts::PI).abs() < 1e-14);
        assert!((inc_beta(0.3, 1.0, 1.0).unwrap() - 0.3).abs() < 1e-15);
        // B_x(2, 1) = x²/2
        assert!((inc_beta(0.7, 2.0, 1.0).unwrap() - 0.245).abs() < 1e-15);
        assert!(inc_beta(1.2, 1.0, 1.0).is_err());
        assert!(inc_beta(0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn inc_beta_matches_quadrature() {
        for &(a, b) in &[(0.5, 0.25), (0.5, 0.1), (2.5, 0.5), (0.3, 3.0), (4.0, 4.0)] {
            for i in 1..20 {
                let x = i as f64 / 20.0;
                // substitute t = x·v² to take the t^(a−1) singularity out of the integrand
                let q = integrate(
                    |v| 2.0 * pow(x, a) * pow(v, 2.0 * a - 1.0) * pow(1.0 - x * v * v, b - 1.0),
                    0.0,
                    1.0,
                    1e-13,
                )
                .unwrap();
                let got = inc_beta(x, a, b).unwrap();
                assert!((got - q.value).abs() < 1e-10 * q.value.max(1.0), "a={a} b={b} x={x}");
            }
        }
    }

    #[test]
    fn secant_exponent_one_is_elementary() {
        let v = sec_power_integral(1.0, 0.0, FRAC_PI_4).unwrap();
        assert!((v - atanh(1.0 / sqrt(2.0))).abs() < 1e-15);
        assert_eq!(sec_power_integral(2.0, 0.4, 0.4).unwrap(), 0.0);
    }

    // Fixture frozen from adaptive quadrature (cross-checked to 30 digits).
    const SEC_P2_0_1: f64 = 1.141_340_353_370_328_5;

    #[test]
    fn p2_fixture() {
        let q = integrate(|x| pow(cos(x), -2.0 / 3.0), 0.0, 1.0, 1e-13).unwrap();
        assert!((q.value - SEC_P2_0_1).abs() < 1e-12);
        assert!((sec_power_integral(2.0, 0.0, 1.0).unwrap() - SEC_P2_0_1).abs() < 1e-12);
    }

    #[test]
    fn cosine_form_of_the_primitive() {
        // −½ B_{cos²x}(½ − 1/(p+1), ½) between the limits
        for &p in &[1.5, 2.0, 3.0, 5.0, 10.0] {
            let a = 0.5 - 1.0 / (p + 1.0);
            let prim = |y: f64| -0.5 * inc_beta(cos(y) * cos(y), a, 0.5).unwrap();
            for &(lo, hi) in &[(0.0, 0.3), (0.2, 1.1), (0.5, 1.5)] {
                let v = sec_power_integral(p, lo, hi).unwrap();
                assert!((v - (prim(hi) - prim(lo))).abs() < 1e-10, "p={p}");
            }
        }
    }

    #[test]
    fn constant_term_bracket() {
        // ½(B₁ − B_½)(½ − 1/(p+1), ½) = ∫₀^{π/4} sec^{2/(p+1)}
        for &p in &[1.5, 2.0, 3.0, 5.0, 10.0] {
            let a = 0.5 - 1.0 / (p + 1.0);
            let c = 0.5 * (beta(a, 0.5).unwrap() - inc_beta(0.5, a, 0.5).unwrap());
            assert!((c - sec_power_integral(p, 0.0, FRAC_PI_4).unwrap()).abs() < 1e-12);
            assert!(FRAC_PI_4 <= c && c <= atanh(1.0 / sqrt(2.0)), "p={p} c={c}");
        }
    }

    #[test]
    fn matches_quadrature_and_handles_signs() {
        for &p in &[1.0, 1.01, 1.5, 2.0, 3.0, 7.0] {
            for &(lo, hi) in &[(0.0, 1.0), (-0.7, 1.3), (1.2, 0.1), (0.0, 1.55)] {
                let q = integrate(|x| pow(cos(x), -2.0 / (p + 1.0)), lo, hi, 1e-13).unwrap();
                let v = sec_power_integral(p, lo, hi).unwrap();
                assert!((v - q.value).abs() < 1e-10, "p={p} [{lo},{hi}] {v} {}", q.value);
            }
        }
    }

    #[test]
    fn singular_limit() {
        assert!(sec_power_integral(1.0, 0.0, FRAC_PI_2).is_err());
        assert!(sec_power_integral(2.0, 0.0, 1.6).is_err());
        let v = sec_power_integral(3.0, 0.0, FRAC_PI_2).unwrap();
        // ½B(½, ¼)
        assert!((v - 0.5 * beta(0.5, 0.25).unwrap()).abs() < 1e-14);
    }
}
