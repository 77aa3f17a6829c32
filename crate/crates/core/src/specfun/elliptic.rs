//! Incomplete elliptic integrals in the parameter convention
//!
//! ```text
//!            φ                                   φ
//!           ⌠        dθ                         ⌠   ___________
//! F(φ|m) =  │  ───────────────      E(φ|m) =    │ ╲╱1 − m sin²θ  dθ
//!           ⌡  √(1 − m sin²θ)                   ⌡
//!          0                                   0
//! ```
//!
//! for any `m ≤ 1` (deeply negative values included). Evaluation goes
//! through Carlson's symmetric forms `R_F` and `R_D`; the complementary
//! parameter `1 − m` is carried explicitly so that `m = 1 − t²` with tiny `t`
//! keeps full relative precision in `t`.

use core::f64::consts::FRAC_PI_2;
use libm::{cos, fabs, sin, sqrt};

use crate::error::domain;
use crate::Result;

/// Amplitude/parameter pair `(φ, m)` with `0 ≤ φ ≤ π/2` and `m ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticArg {
    phi: f64,
    mc: f64,
}

impl EllipticArg {
    pub fn new(phi: f64, m: f64) -> Result<Self> {
        if !m.is_finite() {
            return domain("elliptic parameter m must be finite", m);
        }
        Self::with_complement(phi, 1.0 - m)
    }

    /// Builds the argument from the complementary parameter `mc = 1 − m ≥ 0`.
    pub fn with_complement(phi: f64, mc: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&phi) {
            return domain("amplitude phi must lie in [0, π/2]", phi);
        }
        if !(mc >= 0.0) || mc.is_infinite() {
            return domain("elliptic parameter m must satisfy m ≤ 1", 1.0 - mc);
        }
        Ok(EllipticArg { phi, mc })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn m(&self) -> f64 {
        1.0 - self.mc
    }

    pub fn complement(&self) -> f64 {
        self.mc
    }
}

/// Carlson's `R_F(x, y, z)`; at most one argument may vanish.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    const ERRTOL: f64 = 0.0008;
    let (mut xt, mut yt, mut zt) = (x, y, z);
    let (mut dx, mut dy, mut dz, mut ave);
    loop {
        let (sx, sy, sz) = (sqrt(xt), sqrt(yt), sqrt(zt));
        let lam = sx * (sy + sz) + sy * sz;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        ave = (xt + yt + zt) / 3.0;
        dx = (ave - xt) / ave;
        dy = (ave - yt) / ave;
        dz = (ave - zt) / ave;
        if fabs(dx).max(fabs(dy)).max(fabs(dz)) <= ERRTOL {
            break;
        }
    }
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / sqrt(ave)
}

/// Carlson's `R_D(x, y, z)`; `z > 0`, at most one of `x, y` may vanish.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> f64 {
    const ERRTOL: f64 = 0.0005;
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 6.0;
    const C3: f64 = 9.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    const C5: f64 = 0.25 * C3;
    const C6: f64 = 1.5 * C4;
    let (mut xt, mut yt, mut zt) = (x, y, z);
    let mut sum = 0.0;
    let mut fac = 1.0;
    let (mut dx, mut dy, mut dz, mut ave);
    loop {
        let (sx, sy, sz) = (sqrt(xt), sqrt(yt), sqrt(zt));
        let lam = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (zt + lam));
        fac *= 0.25;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        ave = 0.2 * (xt + yt + 3.0 * zt);
        dx = (ave - xt) / ave;
        dy = (ave - yt) / ave;
        dz = (ave - zt) / ave;
        if fabs(dx).max(fabs(dy)).max(fabs(dz)) <= ERRTOL {
            break;
        }
    }
    let ea = dx * dy;
    let eb = dz * dz;
    let ec = ea - eb;
    let ed = ea - 6.0 * eb;
    let ee = ed + ec + ec;
    3.0 * sum
        + fac * (1.0 + ed * (-C1 + C5 * ed - C6 * dz * ee) + dz * (C2 * ee + dz * (-C3 * ec + dz * C4 * ea)))
            / (ave * sqrt(ave))
}

// cos(π/2) rounds to 6e−17; at the right angle the complete integral wants 0.
fn sin_cos(phi: f64) -> (f64, f64) {
    if phi == FRAC_PI_2 {
        (1.0, 0.0)
    } else {
        (sin(phi), cos(phi))
    }
}

/// `1 − m sin²φ` written as `cos²φ + (1 − m) sin²φ`, exact in the complement.
fn delta_sq(s: f64, c: f64, mc: f64) -> f64 {
    c * c + mc * s * s
}

pub fn ellip_f(arg: EllipticArg) -> Result<f64> {
    if arg.mc == 1.0 {
        return Ok(arg.phi);
    }
    let (s, c) = sin_cos(arg.phi);
    let d2 = delta_sq(s, c, arg.mc);
    if d2 <= 0.0 {
        return domain("F(φ|m) requires m·sin²φ < 1", arg.m());
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    Ok(s * carlson_rf(c * c, d2, 1.0))
}

pub fn ellip_e(arg: EllipticArg) -> Result<f64> {
    if arg.mc == 1.0 {
        return Ok(arg.phi);
    }
    let (s, c) = sin_cos(arg.phi);
    if arg.mc == 0.0 {
        // m = 1: the integrand is cos θ
        return Ok(s);
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let d2 = delta_sq(s, c, arg.mc);
    let m = arg.m();
    Ok(s * carlson_rf(c * c, d2, 1.0) - m / 3.0 * s * s * s * carlson_rd(c * c, d2, 1.0))
}

/// Complete integral `K(m) = F(π/2 | m)` for `m < 1`.
pub fn ellip_k(m: f64) -> Result<f64> {
    if !(m < 1.0) {
        return domain("K(m) requires m < 1", m);
    }
    ellip_k_complement(1.0 - m)
}

/// `K` as a function of the complementary parameter `mc = 1 − m > 0`.
pub fn ellip_k_complement(mc: f64) -> Result<f64> {
    if !(mc > 0.0) || mc.is_infinite() {
        return domain("K requires complementary parameter 1 − m > 0", mc);
    }
    Ok(carlson_rf(0.0, mc, 1.0))
}

/// `F(φ | 1 − mc)` for a signed amplitude `|φ| ≤ π/2` (F is odd in φ).
pub(crate) fn ellip_f_signed(phi: f64, mc: f64) -> Result<f64> {
    let v = ellip_f(EllipticArg::with_complement(fabs(phi), mc)?)?;
    Ok(if phi < 0.0 { -v } else { v })
}

/// Power-series bracket for `t·K(1 − t²)`:
///
/// `t log(4/t) + ¼(log(4/t) − 1) t³ ≤ t K(1 − t²) ≤ t log(4/t) + ½(log(4/t) − 1) t³`,
///
/// returned as `(lower, upper)` only where `t (log(4/t) − 1) < ½`.
pub fn complete_k_bracket(t: f64) -> Option<(f64, f64)> {
    if !(t > 0.0) {
        return None;
    }
    let l = libm::log(4.0 / t);
    if t * (l - 1.0) >= 0.5 {
        return None;
    }
    let base = t * l;
    let cubic = (l - 1.0) * t * t * t;
    Some((base + 0.25 * cubic, base + 0.5 * cubic))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    fn f(phi: f64, m: f64) -> f64 {
        ellip_f(EllipticArg::new(phi, m).unwrap()).unwrap()
    }
    fn e(phi: f64, m: f64) -> f64 {
        ellip_e(EllipticArg::new(phi, m).unwrap()).unwrap()
    }

    fn f_quad(phi: f64, m: f64) -> f64 {
        integrate(|t| 1.0 / sqrt(1.0 - m * sin(t) * sin(t)), 0.0, phi, 1e-13).unwrap().value
    }
    fn e_quad(phi: f64, m: f64) -> f64 {
        integrate(|t| sqrt(1.0 - m * sin(t) * sin(t)), 0.0, phi, 1e-13).unwrap().value
    }

    #[test]
    fn trivial_values() {
        assert_eq!(f(0.7, 0.0), 0.7);
        assert!((f(FRAC_PI_2, 0.0) - FRAC_PI_2).abs() < 1e-15);
        assert!((e(0.7, 0.0) - 0.7).abs() < 1e-15);
        assert_eq!(e(FRAC_PI_2, 1.0), 1.0);
        assert!((ellip_k(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
    }

    // Fixtures frozen from the adaptive quadrature oracle at tol 1e-13
    // (cross-checked against a 30-digit evaluation).
    const F_1_M3: f64 = 0.780_706_566_225_688_6;
    const E_1_M3: f64 = 1.325_663_197_579_998_1;
    const K_M1: f64 = 1.311_028_777_146_059_9;

    #[test]
    fn frozen_fixtures() {
        assert!((f_quad(1.0, -3.0) - F_1_M3).abs() < 1e-12);
        assert!((e_quad(1.0, -3.0) - E_1_M3).abs() < 1e-12);
        assert!((f_quad(FRAC_PI_2, -1.0) - K_M1).abs() < 1e-12);
        assert!((f(1.0, -3.0) - F_1_M3).abs() < 1e-12);
        assert!((e(1.0, -3.0) - E_1_M3).abs() < 1e-12);
        assert!((ellip_k(-1.0).unwrap() - K_M1).abs() < 1e-12);
    }

    #[test]
    fn k_is_f_at_right_angle() {
        for &m in &[-50.0, -3.0, -0.2, 0.0, 0.3, 0.9, 0.999] {
            let k = ellip_k(m).unwrap();
            assert!((k - f(FRAC_PI_2, m)).abs() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn k_log_lower_bound_near_one() {
        for i in 1..=100 {
            let t = 0.1 * i as f64 / 100.0;
            let k = ellip_k_complement(t * t).unwrap();
            assert!(k >= libm::log(4.0 / t), "t={t}");
        }
    }

    #[test]
    fn complete_k_series_bracket() {
        let n = 400;
        for i in 0..=n {
            // log-spaced on [1e-6, 0.15]
            let t = 1e-6 * libm::pow(0.15 / 1e-6, i as f64 / n as f64);
            let (lo, hi) = complete_k_bracket(t).expect("validity condition");
            let tk = t * ellip_k_complement(t * t).unwrap();
            let slack = 4.0 * f64::EPSILON * tk;
            assert!(lo <= tk + slack && tk <= hi + slack, "t={t}: {lo} {tk} {hi}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(EllipticArg::new(-0.1, 0.0).is_err());
        assert!(EllipticArg::new(1.6, 0.0).is_err());
        assert!(EllipticArg::new(1.0, 1.5).is_err());
        assert!(ellip_f(EllipticArg::new(FRAC_PI_2, 1.0).unwrap()).is_err());
        assert!(ellip_k(1.0).is_err());
        assert!(ellip_k(f64::NAN).is_err());
    }

    #[test]
    fn odd_extension() {
        let a = ellip_f_signed(-0.4, 3.0).unwrap();
        let b = ellip_f_signed(0.4, 3.0).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn monotone_on_grid() {
        let n = 20;
        let phis: std::vec::Vec<f64> = (1..=n).map(|i| FRAC_PI_2 * i as f64 / n as f64).collect();
        let ms: std::vec::Vec<f64> = (0..n).map(|j| -20.0 + 20.9 * j as f64 / (n - 1) as f64).collect();
        for &m in &ms {
            for w in phis.windows(2) {
                assert!(f(w[1], m) > f(w[0], m));
            }
        }
        for &phi in &phis {
            for w in ms.windows(2) {
                assert!(f(phi, w[1]) > f(phi, w[0]), "phi={phi} m={:?}", w);
            }
        }
    }
}
