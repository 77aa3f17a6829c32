//! Round hyperbolic annuli `A_s = {1/s < |z| < s}` and collars about their
//! core geodesic.
//!
//! The complete metric on `A_s` has density
//!
//! ```text
//!            ℓ              1
//! ρ(z) = ──────── · ─────────────────,   ℓ = π² / log s,
//!          2π|z|     cos(ℓ log|z| / 2π)
//! ```
//!
//! so the unit circle is a geodesic of length `ℓ`. The outer radius `s`
//! overflows an `f64` once `ℓ < π²/709 ≈ 0.014`, so it is stored through
//! `log s`.

use core::f64::consts::{FRAC_PI_2, PI};
use libm::{asinh, atan, atanh, cos, cosh, exp, fabs, log, sin, sinh};

use crate::error::domain;
use crate::Result;

const TWO_PI: f64 = 2.0 * PI;
const PI_SQ: f64 = PI * PI;
// margin kept between the argument of the secant and π/2
const EDGE_GUARD: f64 = 1e-12;

/// Round annulus with core geodesic length `ell`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HyperbolicAnnulus {
    ell: f64,
    log_s: f64,
}

impl HyperbolicAnnulus {
    pub fn from_length(ell: f64) -> Result<Self> {
        if !(ell > 0.0) || ell.is_infinite() {
            return domain("core geodesic length must be positive and finite", ell);
        }
        Ok(HyperbolicAnnulus { ell, log_s: PI_SQ / ell })
    }

    /// Annulus `{1/s < |z| < s}` for `s > 1`.
    pub fn from_outer_radius(s: f64) -> Result<Self> {
        if !(s > 1.0) || s.is_infinite() {
            return domain("outer radius must exceed 1", s);
        }
        Self::from_log_outer_radius(log(s))
    }

    pub fn from_log_outer_radius(log_s: f64) -> Result<Self> {
        if !(log_s > 0.0) || log_s.is_infinite() {
            return domain("log of the outer radius must be positive", log_s);
        }
        Ok(HyperbolicAnnulus { ell: PI_SQ / log_s, log_s })
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn log_outer_radius(&self) -> f64 {
        self.log_s
    }

    /// `s = exp(π²/ℓ)`; `+∞` when it does not fit in an `f64`.
    pub fn outer_radius(&self) -> f64 {
        exp(self.log_s)
    }

    /// Conformal modulus `log(s / (1/s)) = 2π²/ℓ`.
    pub fn modulus(&self) -> f64 {
        2.0 * self.log_s
    }

    fn secant_arg(&self, log_r: f64) -> Result<f64> {
        let y = self.ell * log_r / TWO_PI;
        if !(fabs(y) < FRAC_PI_2 - EDGE_GUARD) {
            return domain("radius lies on or outside the boundary of the annulus", exp(log_r));
        }
        Ok(y)
    }

    /// Hyperbolic density at modulus `r`, `1/s < r < s`.
    pub fn density(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return domain("radius must be positive", r);
        }
        let y = self.secant_arg(log(r))?;
        Ok(self.ell / (TWO_PI * r * cos(y)))
    }

    /// Distance from the core geodesic to the circle `|z| = r`, `1 ≤ r < s`.
    pub fn geodesic_distance(&self, r: f64) -> Result<f64> {
        if !(r >= 1.0) {
            return domain("geodesic distance is measured outward, r ≥ 1", r);
        }
        self.geodesic_distance_log(log(r))
    }

    pub fn geodesic_distance_log(&self, log_r: f64) -> Result<f64> {
        let y = self.secant_arg(log_r)?;
        Ok(atanh(sin(y)))
    }

    /// Model radius of the circle at distance `delta` from the core.
    pub fn radius_at_distance(&self, delta: f64) -> Result<f64> {
        Ok(exp(self.log_radius_at_distance(delta)?))
    }

    /// `log r = (2π/ℓ)·sin⁻¹(tanh δ)`.
    pub fn log_radius_at_distance(&self, delta: f64) -> Result<f64> {
        if !(delta >= 0.0) || delta.is_infinite() {
            return domain("collar distance must be finite and non-negative", delta);
        }
        // sin⁻¹(tanh δ) = tan⁻¹(sinh δ), and the latter stays accurate near π/2
        let theta = atan(sinh(delta));
        if !(theta < FRAC_PI_2) {
            return domain("distance reaches the ideal boundary", delta);
        }
        Ok(TWO_PI * theta / self.ell)
    }

    /// Hyperbolic length `ℓ cosh δ` of the circle at distance `delta`.
    pub fn circle_length(&self, delta: f64) -> Result<f64> {
        if !(delta >= 0.0) {
            return domain("collar distance must be non-negative", delta);
        }
        Ok(self.ell * cosh(delta))
    }
}

/// Collar of radius `delta` about the core geodesic of an annulus.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Collar {
    pub annulus: HyperbolicAnnulus,
    pub delta: f64,
    /// `Θ = sin⁻¹(tanh δ)`, half the scaled width of the collar.
    pub theta: f64,
}

impl Collar {
    pub fn new(ell: f64, delta: f64) -> Result<Self> {
        let annulus = HyperbolicAnnulus::from_length(ell)?;
        if !(delta > 0.0) || delta.is_infinite() {
            return domain("collar radius must be positive and finite", delta);
        }
        Ok(Collar { annulus, delta, theta: atan(sinh(delta)) })
    }

    pub fn ell(&self) -> f64 {
        self.annulus.ell
    }

    /// `(4π/ℓ)·sin⁻¹(tanh δ)`, the modulus of `{1/r < |z| < r}`.
    pub fn modulus(&self) -> f64 {
        4.0 * PI * self.theta / self.annulus.ell
    }

    /// `2ℓ sinh δ`.
    pub fn area(&self) -> f64 {
        2.0 * self.annulus.ell * sinh(self.delta)
    }

    /// `log r` of the outer boundary circle (half the modulus).
    pub fn log_outer_radius(&self) -> f64 {
        TWO_PI * self.theta / self.annulus.ell
    }

    /// The displayed simplification `4π sech(ℓ/2)/ℓ` of the maximal collar
    /// modulus. It is not the modulus (it omits the arcsine) and is kept for
    /// side-by-side reporting only.
    pub fn sech_modulus_display(&self) -> f64 {
        4.0 * PI / (self.annulus.ell * cosh(0.5 * self.annulus.ell))
    }
}

/// The embedded collar of radius `sinh⁻¹(1/sinh(ℓ/2))` that every simple
/// closed geodesic of length `ℓ` admits.
pub fn maximal_collar(ell: f64) -> Result<Collar> {
    let annulus = HyperbolicAnnulus::from_length(ell)?;
    let x = 1.0 / sinh(0.5 * ell);
    if !(x > 0.0) {
        return domain("collar radius underflows for this length", ell);
    }
    Ok(Collar { annulus, delta: asinh(x), theta: atan(x) })
}

/// Alternating-series bracket `π/2 − ℓ/2 ≤ Θ ≤ π/2 − ℓ/2 + ℓ³/48` for the
/// maximal collar angle.
pub fn theta_bounds(ell: f64) -> (f64, f64) {
    let lo = FRAC_PI_2 - 0.5 * ell;
    (lo, lo + ell * ell * ell / 48.0)
}

/// Jørgensen-type condition `sinh(τ_f/2)·sinh(τ_g/2)·sin θ ≥ 1` for two
/// hyperbolic translations whose axes cross at angle `theta`.
///
/// Equality is accepted up to a few ulps.
pub fn jorgensen_predicate(tau_f: f64, tau_g: f64, theta: f64) -> bool {
    let v = sinh(0.5 * tau_f) * sinh(0.5 * tau_g) * sin(theta);
    v >= 1.0 - 8.0 * f64::EPSILON
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;
    use libm::{acos, tanh};
    use proptest::prelude::*;

    #[test]
    fn length_radius_pairs() {
        let a = HyperbolicAnnulus::from_length(PI_SQ).unwrap();
        assert!((a.outer_radius() - core::f64::consts::E).abs() < 1e-15);
        let a = HyperbolicAnnulus::from_length(1.0).unwrap();
        assert!((a.outer_radius() / exp(PI_SQ) - 1.0).abs() < 1e-15);
        assert!((a.modulus() - 2.0 * PI_SQ).abs() < 1e-14);
        assert!(HyperbolicAnnulus::from_length(0.0).is_err());
        assert!(HyperbolicAnnulus::from_length(-1.0).is_err());
        assert!(HyperbolicAnnulus::from_outer_radius(1.0).is_err());
        for i in 1..=100 {
            let ell = 0.05 * i as f64;
            let a = HyperbolicAnnulus::from_length(ell).unwrap();
            let b = HyperbolicAnnulus::from_outer_radius(a.outer_radius()).unwrap();
            assert!((b.ell() / ell - 1.0).abs() < 1e-13, "ell={ell}");
        }
    }

    #[test]
    fn density_on_core_and_near_boundary() {
        let a = HyperbolicAnnulus::from_length(1.3).unwrap();
        assert!((a.density(1.0).unwrap() - 1.3 / TWO_PI).abs() < 1e-16);
        assert!((TWO_PI * a.density(1.0).unwrap() - 1.3).abs() < 1e-15);
        assert!(a.density(1.01).unwrap() < a.density(1.0).unwrap());
        let a = HyperbolicAnnulus::from_outer_radius(core::f64::consts::E).unwrap();
        let s = a.outer_radius();
        assert!(a.density(0.999 * s).unwrap() > 10.0 * a.density(0.9 * s).unwrap());
        assert!(a.density(s).is_err());
        assert!(a.density(1.0 / s).is_err());
        assert!(a.density(2.0 * s).is_err());
    }

    #[test]
    fn distance_radius_inverse() {
        let a = HyperbolicAnnulus::from_length(1.0).unwrap();
        assert_eq!(a.geodesic_distance(1.0).unwrap(), 0.0);
        assert_eq!(a.radius_at_distance(0.0).unwrap(), 1.0);
        for i in 0..50 {
            let r = 1.0 + 300.0 * i as f64;
            let back = a.radius_at_distance(a.geodesic_distance(r).unwrap()).unwrap();
            assert!((back / r - 1.0).abs() < 1e-12, "r={r}");
        }
        let s = a.outer_radius();
        let far = a.radius_at_distance(20.0).unwrap();
        assert!(far < s && (s - far) / s < 1e-6);
        assert!(a.radius_at_distance(40.0).is_err());
    }

    #[test]
    fn distance_is_integrated_density() {
        let a = HyperbolicAnnulus::from_length(1.0).unwrap();
        let q = integrate(|r| a.density(r).unwrap(), 1.0, 2.0, 1e-13).unwrap();
        assert!((q.value - a.geodesic_distance(2.0).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn circle_length_matches_density() {
        let a = HyperbolicAnnulus::from_length(2.0).unwrap();
        assert_eq!(a.circle_length(0.0).unwrap(), 2.0);
        assert!((a.circle_length(1.0).unwrap() - 2.0 * cosh(1.0)).abs() < 1e-15);
        for &ell in &[0.1, 1.0, 2.0, 5.0] {
            let a = HyperbolicAnnulus::from_length(ell).unwrap();
            for i in 0..20 {
                let d = 0.2 * i as f64;
                let r = a.radius_at_distance(d).unwrap();
                let lhs = TWO_PI * r * a.density(r).unwrap();
                assert!((lhs - a.circle_length(d).unwrap()).abs() < 1e-12 * lhs.max(1.0));
            }
        }
    }

    #[test]
    fn collar_area_by_polar_quadrature() {
        let c = Collar::new(1.0, 1.0).unwrap();
        let a = c.annulus;
        let r0 = a.radius_at_distance(1.0).unwrap();
        let q = integrate(
            |r| {
                let d = a.density(r).unwrap();
                TWO_PI * d * d * r
            },
            1.0 / r0,
            r0,
            1e-10,
        )
        .unwrap();
        assert!((q.value - c.area()).abs() < 1e-6);
    }

    #[test]
    fn identity_energy_is_area() {
        let c = Collar::new(0.7, 1.3).unwrap();
        let ell = c.ell();
        let t = 2.0 * c.theta / ell;
        let q = integrate(|x| ell * ell / libm::pow(cos(ell * (x - 0.5 * t)), 2.0), 0.0, t, 1e-12).unwrap();
        assert!((q.value - 2.0 * ell * libm::tan(c.theta)).abs() < 1e-10);
        assert!((q.value - c.area()).abs() < 1e-10);
    }

    #[test]
    fn deep_collar_modulus_fills_annulus() {
        let c = Collar::new(1.0, 40.0).unwrap();
        assert!((c.modulus() - c.annulus.modulus()).abs() < 1e-12);
    }

    #[test]
    fn maximal_collar_area_and_modulus() {
        let mut ell = 1e-4;
        while ell <= 10.0 {
            let c = maximal_collar(ell).unwrap();
            assert!(c.area() <= 4.0, "ell={ell}");
            assert!((c.area() - 2.0 * ell / sinh(0.5 * ell)).abs() < 1e-12 * c.area());
            assert!(c.modulus() >= 4.0 * PI / ell - PI * ell / 2.0, "ell={ell}");
            assert!(c.modulus() <= c.annulus.modulus());
            ell *= 1.1;
        }
        assert!((maximal_collar(1e-6).unwrap().area() - 4.0).abs() < 1e-11);
    }

    #[test]
    fn maximal_collar_unit_length() {
        let c = maximal_collar(1.0).unwrap();
        let (lo, hi) = theta_bounds(1.0);
        assert!((lo - (FRAC_PI_2 - 0.5)).abs() < 1e-16 && (hi - lo - 1.0 / 48.0).abs() < 1e-16);
        assert!(lo <= c.theta && c.theta <= hi);
        assert!((c.theta - acos(tanh(0.5))).abs() < 1e-12);
        // sin Θ = sech(ℓ/2)
        assert!((sin(c.theta) - 1.0 / cosh(0.5)).abs() < 1e-15);
        assert!((c.modulus() - 4.0 * PI * libm::asin(1.0 / cosh(0.5))).abs() < 1e-12);
    }

    #[test]
    fn jorgensen() {
        let tau = 2.0 * asinh(1.0);
        assert!(jorgensen_predicate(tau, tau, FRAC_PI_2));
        assert!(!jorgensen_predicate(0.1, 0.1, FRAC_PI_2));
        for &ell in &[0.01, 0.5, 1.0, 3.0] {
            let d = maximal_collar(ell).unwrap().delta;
            assert!(jorgensen_predicate(ell, 2.0 * d, FRAC_PI_2), "ell={ell}");
        }
    }

    proptest! {
        #[test]
        fn collar_modulus_is_twice_log_radius(ell in 0.02f64..8.0, delta in 0.0f64..6.0) {
            prop_assume!(delta > 0.0);
            let c = Collar::new(ell, delta).unwrap();
            let lr = c.annulus.log_radius_at_distance(delta).unwrap();
            prop_assert!((c.modulus() - 2.0 * lr).abs() <= 1e-12 * c.modulus().max(1.0));
        }

        #[test]
        fn collar_grows_with_radius(ell in 0.02f64..8.0, d1 in 0.01f64..5.0, dd in 0.01f64..1.0) {
            let a = Collar::new(ell, d1).unwrap();
            let b = Collar::new(ell, d1 + dd).unwrap();
            prop_assert!(b.modulus() > a.modulus());
            prop_assert!(b.area() > a.area());
        }

        #[test]
        fn density_increases_outward(ell in 0.05f64..8.0, u in 0.0f64..0.95, du in 0.001f64..0.04) {
            let a = HyperbolicAnnulus::from_length(ell).unwrap();
            let r1 = exp(u * a.log_outer_radius());
            let r2 = exp((u + du) * a.log_outer_radius());
            // log-radius density r·ρ(r) is what increases; ρ itself dips near the core
            prop_assert!(r2 * a.density(r2).unwrap() > r1 * a.density(r1).unwrap());
            let y1 = ell * u * a.log_outer_radius() / TWO_PI;
            if libm::tan(y1) > TWO_PI / ell {
                prop_assert!(a.density(r2).unwrap() > a.density(r1).unwrap());
            }
        }

        #[test]
        fn theta_bracket(ell in 1e-6f64..1.0) {
            let c = maximal_collar(ell).unwrap();
            let (lo, hi) = theta_bounds(ell);
            prop_assert!(lo <= c.theta + 4.0 * f64::EPSILON && c.theta <= hi + 4.0 * f64::EPSILON);
        }
    }
}
