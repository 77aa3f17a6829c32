//! The `p = 1` minimizer in closed form.
//!
//! The Euler–Lagrange equation integrates to
//! `u_x = 1/√(1 − α_ℓ cos²(ℓ(x − T/2)))` with a constant `α_ℓ < 1`. Writing
//! `t = 1/√(1 − α_ℓ)` the elliptic parameter becomes `m = 1 − t²` and
//!
//! ```text
//! u(x) = t·[F(ℓ(x − T/2) | m) + F(Θ | m)] / ℓ,     u(T) = 2t·F(Θ | m)/ℓ = b.
//! ```
//!
//! The map `t ↦ t·F(Θ | 1 − t²)` is increasing from 0 to ∞, so `b` fixes `t`
//! uniquely. Everything here is carried in `t` (solved in `log t`), which
//! stays well conditioned both when `α_ℓ → 1` and when `α_ℓ → −∞`.

use libm::{cos, exp, fabs, log, sin, sqrt, tan};

use super::GrotzschProblem;
use crate::bounds::t_of_alpha;
use crate::error::domain;
use crate::report::{BoundKind, BoundReport};
use crate::roots::brent;
use crate::specfun::{ellip_e, ellip_f, ellip_f_signed, EllipticArg};
use crate::{Error, Result};

/// Solved `p = 1` problem.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExtremalSolution {
    pub problem: GrotzschProblem,
    /// Normalized multiplier `α_ℓ = 1 − 1/t²`.
    pub alpha_ell: f64,
    pub t: f64,
    pub energy: f64,
    /// `u(T) − b`.
    pub boundary_residual: f64,
    pub iterations: usize,
}

impl ExtremalSolution {
    pub fn ux(&self, x: f64) -> Result<f64> {
        let y = self.problem.angle(x)?;
        let (s, c) = (sin(y), cos(y));
        Ok(self.t / sqrt(c * c + self.t * self.t * s * s))
    }

    pub fn u(&self, x: f64) -> Result<f64> {
        let y = self.problem.angle(x)?;
        let mc = self.t * self.t;
        let f = ellip_f_signed(y, mc)? + ellip_f_signed(self.problem.theta(), mc)?;
        Ok(self.t * f / self.problem.ell())
    }
}

/// `u_x = 1/√(1 − α_ℓ cos²(ℓ(x − T/2)))`.
pub fn ux_p1(problem: &GrotzschProblem, alpha_ell: f64, x: f64) -> Result<f64> {
    t_of_alpha(alpha_ell)?;
    let c = cos(problem.angle(x)?);
    Ok(1.0 / sqrt(1.0 - alpha_ell * c * c))
}

/// `t·F(Θ | 1 − t²) = F(Θ | α_ℓ/(α_ℓ − 1)) / √(1 − α_ℓ)`, half of `ℓ·u(T)`.
pub fn scaled_width(theta: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) || t.is_infinite() {
        return domain("t must be positive and finite", t);
    }
    Ok(t * ellip_f(EllipticArg::with_complement(theta, t * t)?)?)
}

pub(crate) struct ScaledRoot {
    pub t: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Solves `t·F(Θ | 1 − t²) = target` for `t > 0`.
pub(crate) fn solve_scaled_width(theta: f64, target: f64) -> Result<ScaledRoot> {
    if !(target > 0.0) || target.is_infinite() {
        return domain("right-hand side must be positive and finite", target);
    }
    let g = |s: f64| scaled_width(theta, exp(s)).map(|v| v - target).unwrap_or(f64::NAN);
    let g0 = g(0.0);
    if g0 == 0.0 {
        return Ok(ScaledRoot { t: 1.0, residual: 0.0, iterations: 0 });
    }
    // geometric bracket growth in log t, away from s = 0
    let mut step = 1.0;
    let (mut lo, mut hi) = if g0 < 0.0 { (0.0, step) } else { (-step, 0.0) };
    let mut grown = 0;
    loop {
        let (glo, ghi) = (g(lo), g(hi));
        if glo < 0.0 && ghi > 0.0 {
            break;
        }
        grown += 1;
        if grown > 60 || !(glo.is_finite() && ghi.is_finite()) || fabs(lo).max(fabs(hi)) > 700.0 {
            return Err(Error::NoBracket { what: "t·F(Θ|1−t²) = target", lo: exp(lo), hi: exp(hi) });
        }
        step *= 2.0;
        if ghi <= 0.0 {
            lo = hi;
            hi += step;
        } else {
            hi = lo;
            lo -= step;
        }
    }
    let root = brent(g, lo, hi, 1e-15, 200, "t·F(Θ|1−t²) = target")?;
    let t = exp(root.x);
    Ok(ScaledRoot { t, residual: scaled_width(theta, t)? - target, iterations: root.iterations + grown })
}

fn energy_in_t(ell: f64, theta: f64, t: f64) -> Result<f64> {
    let arg = EllipticArg::with_complement(theta, t * t)?;
    let f = ellip_f(arg)?;
    let e = ellip_e(arg)?;
    let (s, c) = (sin(theta), cos(theta));
    let root = sqrt(s * s + c * c / (t * t));
    Ok(ell * ((t + 1.0 / t) * f - 2.0 * e / t + 2.0 * tan(theta) * root))
}

/// Minimal `p = 1` energy at multiplier `α_ℓ`:
/// `ℓ[(t + 1/t)F(Θ|m) − (2/t)E(Θ|m) + 2 tanΘ √(1 − α_ℓ cos²Θ)]`.
pub fn energy_p1(problem: &GrotzschProblem, alpha_ell: f64) -> Result<f64> {
    let t = t_of_alpha(alpha_ell)?;
    energy_in_t(problem.ell(), problem.theta(), t)
}

/// Solves the boundary condition `u(T) = b` and evaluates the energy.
pub fn solve_alpha_p1(problem: &GrotzschProblem) -> Result<ExtremalSolution> {
    if problem.p() != 1.0 {
        return domain("the closed-form solver is for p = 1", problem.p());
    }
    let ell = problem.ell();
    let theta = problem.theta();
    let b = problem.target_width();
    let root = solve_scaled_width(theta, 0.5 * ell * b)?;
    let t = root.t;
    let residual = 2.0 * root.residual / ell;
    let energy = energy_in_t(ell, theta, t)?;
    Ok(ExtremalSolution {
        problem: *problem,
        alpha_ell: 1.0 - 1.0 / (t * t),
        t,
        energy,
        boundary_residual: residual,
        iterations: root.iterations,
    })
}

/// `tanΘ √(1 − α_ℓ cos²Θ) − √(1 − α_ℓ)·E(Θ | α_ℓ/(α_ℓ − 1))`, which equals
/// `∫₀^Θ tan²θ / √(1 − α_ℓ cos²θ) dθ`.
pub fn tan_sq_integral(theta: f64, alpha_ell: f64) -> Result<f64> {
    let t = t_of_alpha(alpha_ell)?;
    let e = ellip_e(EllipticArg::with_complement(theta, t * t)?)?;
    let c = cos(theta);
    Ok(tan(theta) * sqrt(1.0 - alpha_ell * c * c) - e / t)
}

/// The energy split as `(2 − α_ℓ)ℓ²m_Ω/4π + 2ℓ∫₀^Θ tan²θ/√(1 − α_ℓcos²θ)`;
/// returns the two terms.
pub fn corollary_terms(problem: &GrotzschProblem, alpha_ell: f64) -> Result<(f64, f64)> {
    let ell = problem.ell();
    let first = (2.0 - alpha_ell) * ell * ell * problem.target_modulus() / (4.0 * core::f64::consts::PI);
    let second = 2.0 * ell * tan_sq_integral(problem.theta(), alpha_ell)?;
    Ok((first, second))
}

/// Sharp lower bound for the mean distortion of any map from the collar of
/// radius `delta` about a geodesic of length `ell` onto a ring of modulus
/// `m_omega`. Attained by the extremal map.
pub fn thm2_bound(ell: f64, delta: f64, m_omega: f64) -> Result<BoundReport> {
    let problem = GrotzschProblem::from_delta(ell, delta, m_omega, 1.0)?;
    let sol = solve_alpha_p1(&problem)?;
    let (first, second) = corollary_terms(&problem, sol.alpha_ell)?;
    Ok(BoundReport::new("thm2", BoundKind::Lower, sol.energy)
        .input("ell", ell)
        .input("delta", delta)
        .input("m_omega", m_omega)
        .term("theta", problem.theta())
        .term("alpha_ell", sol.alpha_ell)
        .term("t", sol.t)
        .term("modulus_term", first)
        .term("tan_sq_term", second)
        .term("boundary_residual", sol.boundary_residual)
        .require(sol.boundary_residual.abs() <= 1e-10, "boundary condition not met to 1e-10")
        .require(log(sol.t).is_finite(), "multiplier out of range"))
}
