//! The normalized rectangle problem behind extremal maps between annuli.
//!
//! After the exponential change of variables a radial map between round
//! annuli becomes `(x, y) ↦ (u(x), y)` on `[0, T] × [0, 2π)`, and its
//! `p`-energy against the hyperbolic area of the domain is
//!
//! ```text
//!   T
//!  ⌠  ⎛ u_x + 1/u_x ⎞ p                      ℓ²
//!  │  ⎜ ─────────── ⎟  λ(x) dx,    λ(x) = ─────────────────
//!  ⌡  ⎝      2      ⎠                      cos²(ℓ(x − T/2))
//!  0
//! ```
//!
//! with `u(0) = 0` and `u(T) = b`. Here `T = mod(A₁)/2π`, `b = mod(A₂)/2π`
//! and `Θ = ℓT/2`. The weight is only meaningful for round annuli; the
//! minimum is not a conformal invariant of more general domains.

use core::f64::consts::{FRAC_PI_2, PI};
use libm::{atan, cos, sinh, tan};

use crate::annulus::Collar;
use crate::error::domain;
use crate::Result;

mod general;
mod p1;

pub use general::{
    approx_diagnostics, p_derivative, p_function, p_monotone_on, solve_general, solve_small_ell, thm3_bound,
    ApproxDiagnostics, GeneralPSolution, SolveMode,
};
pub(crate) use p1::solve_scaled_width;
pub use p1::{
    corollary_terms, energy_p1, scaled_width, solve_alpha_p1, tan_sq_integral, thm2_bound, ux_p1, ExtremalSolution,
};

/// Normalized annulus problem with domain angle `theta`, target width `b`
/// and exponent `p ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GrotzschProblem {
    ell: f64,
    theta: f64,
    b: f64,
    p: f64,
}

impl GrotzschProblem {
    pub fn new(ell: f64, theta: f64, b: f64, p: f64) -> Result<Self> {
        if !(ell > 0.0) || ell.is_infinite() {
            return domain("core geodesic length must be positive and finite", ell);
        }
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return domain("Θ must lie in (0, π/2)", theta);
        }
        if !(b > 0.0) || b.is_infinite() {
            return domain("target width must be positive and finite", b);
        }
        if !(p >= 1.0) || p.is_infinite() {
            return domain("exponent p must be at least 1", p);
        }
        Ok(GrotzschProblem { ell, theta, b, p })
    }

    /// Collar of radius `delta` mapped onto an annulus of modulus `m_omega`.
    pub fn from_delta(ell: f64, delta: f64, m_omega: f64, p: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return domain("collar radius must be positive", delta);
        }
        Self::new(ell, atan(sinh(delta)), m_omega / (2.0 * PI), p)
    }

    pub fn from_collar(collar: &Collar, m_omega: f64, p: f64) -> Result<Self> {
        Self::new(collar.ell(), collar.theta, m_omega / (2.0 * PI), p)
    }

    /// The same domain with target width equal to the domain width.
    pub fn identity(ell: f64, theta: f64, p: f64) -> Result<Self> {
        Self::new(ell, theta, 2.0 * theta / ell, p)
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Target width `b = m_Ω/2π`.
    pub fn target_width(&self) -> f64 {
        self.b
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `T = 2Θ/ℓ`.
    pub fn domain_width(&self) -> f64 {
        2.0 * self.theta / self.ell
    }

    pub fn domain_modulus(&self) -> f64 {
        2.0 * PI * self.domain_width()
    }

    pub fn target_modulus(&self) -> f64 {
        2.0 * PI * self.b
    }

    pub fn with_exponent(&self, p: f64) -> Result<Self> {
        Self::new(self.ell, self.theta, self.b, p)
    }

    pub fn with_target_width(&self, b: f64) -> Result<Self> {
        Self::new(self.ell, self.theta, b, self.p)
    }

    /// Signed angle `ℓ(x − T/2)`, clamped to `[−Θ, Θ]` for `x` within a few
    /// ulps of the ends.
    pub(crate) fn angle(&self, x: f64) -> Result<f64> {
        let t = self.domain_width();
        let slack = 1e-12 * t;
        if !(x >= -slack && x <= t + slack) {
            return domain("x must lie in [0, T]", x);
        }
        Ok((self.ell * (x - 0.5 * t)).clamp(-self.theta, self.theta))
    }

    /// `λ(x) = ℓ² / cos²(ℓ(x − T/2))`.
    pub fn weight(&self, x: f64) -> Result<f64> {
        let c = cos(self.angle(x)?);
        Ok(self.ell * self.ell / (c * c))
    }

    /// `∫₀ᵀ λ = 2ℓ tan Θ`, the hyperbolic area of the domain collar.
    pub fn area(&self) -> f64 {
        2.0 * self.ell * tan(self.theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annulus::maximal_collar;
    use crate::quad::integrate;

    #[test]
    fn weight_shape() {
        let pr = GrotzschProblem::new(0.8, 1.1, 1.0, 1.0).unwrap();
        let t = pr.domain_width();
        assert!((pr.weight(0.5 * t).unwrap() - 0.64).abs() < 1e-15);
        assert_eq!(pr.weight(0.0).unwrap(), pr.weight(t).unwrap());
        assert!(pr.weight(-0.1).is_err());
        assert!(pr.weight(t + 0.1).is_err());
        let q = integrate(|x| pr.weight(x).unwrap(), 0.0, t, 1e-12).unwrap();
        assert!((q.value - pr.area()).abs() < 1e-10);
    }

    #[test]
    fn collar_conversions() {
        let c = maximal_collar(0.3).unwrap();
        let pr = GrotzschProblem::from_collar(&c, c.modulus(), 2.0).unwrap();
        assert!((pr.target_width() - pr.domain_width()).abs() < 1e-13 * pr.domain_width());
        assert!((pr.domain_modulus() - c.modulus()).abs() < 1e-12 * c.modulus());
        assert!((pr.area() - c.area()).abs() < 1e-13);
        let pd = GrotzschProblem::from_delta(0.3, c.delta, 2.0, 1.0).unwrap();
        assert!((pd.theta() - c.theta).abs() < 1e-15);
    }

    #[test]
    fn invariants_enforced() {
        assert!(GrotzschProblem::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(GrotzschProblem::new(1.0, FRAC_PI_2, 1.0, 1.0).is_err());
        assert!(GrotzschProblem::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(GrotzschProblem::new(1.0, 1.0, 1.0, 0.5).is_err());
    }
}
