//! Explicit energy bounds and the Lambert W machinery behind the short
//! geodesic estimates.
//!
//! The `p = 1` multiplier is carried as `t = 1/√(1 − α_ℓ)`, in which the
//! boundary condition becomes `t·F(Θ | 1 − t²) = ℓm_ℓ` with
//! `m_ℓ = m_Ω/4π`. For small `ℓ` the root is majorized by
//! `t₀ = 4·exp(W₋₁(−ℓ(m_ℓ + ½)/4))`, and the divergence of the energy as
//! `ℓ → 0` follows from `ℓ/t₀ → ∞`.

use core::f64::consts::{E, FRAC_PI_2, PI, SQRT_2};
use libm::{exp, fabs, log, sinh, sqrt, tan};

use crate::error::domain;
use crate::extremal::solve_scaled_width;
use crate::report::{BoundKind, BoundReport};
use crate::specfun::{ellip_f, lambert_w, EllipticArg, LambertBranch};
use crate::Result;

/// `t = 1/√(1 − α_ℓ)`.
pub fn t_of_alpha(alpha_ell: f64) -> Result<f64> {
    if !(alpha_ell < 1.0) {
        return domain("α_ℓ must be below 1 (u_x is not integrable otherwise)", alpha_ell);
    }
    Ok(1.0 / sqrt(1.0 - alpha_ell))
}

/// `α_ℓ = 1 − t⁻²`.
pub fn alpha_of_t(t: f64) -> Result<f64> {
    if !(t > 0.0) || t.is_infinite() {
        return domain("t must be positive and finite", t);
    }
    Ok(1.0 - 1.0 / (t * t))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TSolution {
    pub t: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Root of `t·F(Θ | 1 − t²) = ℓ·m_ℓ`.
pub fn solve_t(theta: f64, ell: f64, m_ell: f64) -> Result<TSolution> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return domain("Θ must lie in (0, π/2)", theta);
    }
    let r = solve_scaled_width(theta, ell * m_ell)?;
    Ok(TSolution { t: r.t, residual: r.residual, iterations: r.iterations })
}

/// `dt/dℓ` at `ℓ = 0` for fixed `Θ`: `m_ℓ / F(Θ | 1)`.
pub fn t_slope_at_zero(theta: f64, m_ell: f64) -> Result<f64> {
    Ok(m_ell / ellip_f(EllipticArg::with_complement(theta, 0.0)?)?)
}

/// `t₀ = 4·exp(W₋₁(−ℓ(m_ℓ + ½)/4))`, the solution of
/// `t₀·log(4/t₀) = ℓ(m_ℓ + ½)` below `4/e`.
pub fn t0(ell: f64, m_ell: f64) -> Result<f64> {
    if !(ell > 0.0 && m_ell >= 0.0) {
        return domain("t₀ needs ℓ > 0 and m_ℓ ≥ 0", if ell > 0.0 { m_ell } else { ell });
    }
    let x = -0.25 * ell * (m_ell + 0.5);
    Ok(4.0 * exp(lambert_w(LambertBranch::Lower, x)?))
}

/// The closed-form approximation of `t₀` with `β = 0.3205`, valid for
/// `log(4/((m_ℓ + ½)ℓ)) ≥ 1`. Diagnostic only.
pub fn t0_beta_approx(ell: f64, m_ell: f64) -> Result<f64> {
    const BETA: f64 = 0.3205;
    let a = ell * (m_ell + 0.5);
    let l = log(4.0 / a) - 1.0;
    if !(a > 0.0 && l >= 0.0) {
        return domain("approximation needs 0 < ℓ(m_ℓ + ½) ≤ 4/e", a);
    }
    let inner = 2.0 * SQRT_2 / (SQRT_2 * BETA + BETA * BETA * sqrt(l));
    Ok(a * exp(inner - 2.0 / BETA))
}

/// The two sides of `4·exp(W₋₁(−x/8)) ≤ x/(2·log(8/x))` on `(0, 8/e]`.
pub fn t0est_sides(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0 && x <= 8.0 / E) {
        return domain("x must lie in (0, 8/e]", x);
    }
    let lhs = 4.0 * exp(lambert_w(LambertBranch::Lower, -x / 8.0)?);
    let rhs = x / (2.0 * log(8.0 / x));
    Ok((lhs, rhs))
}

/// Whether the `t₀` estimate holds at `x`, up to rounding at the touching
/// point `x = 8/e`.
pub fn t0est_check(x: f64) -> bool {
    match t0est_sides(x) {
        Ok((lhs, rhs)) => lhs <= rhs * (1.0 + 8.0 * f64::EPSILON),
        Err(_) => false,
    }
}

/// Largest `ℓ` allowed by the short geodesic hypothesis,
/// `8/((2m + 1)·e^{2(2m+1)})`.
pub fn thm7_threshold(m: f64) -> f64 {
    let k = 2.0 * m + 1.0;
    8.0 / (k * exp(2.0 * k))
}

/// `tan(ℓ/2) ≥ t₀`, i.e. `cot θ ≥ t₀` on all of `[π/4, π/2 − ℓ/2]`.
pub fn cot_guard(ell: f64, m: f64) -> bool {
    match t0(ell, m) {
        Ok(t) => t <= 1.0 && tan(0.5 * ell) >= t,
        Err(_) => false,
    }
}

/// The intermediate inequalities behind the `thm7` bound at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Thm7Chain {
    pub t0: f64,
    pub ell_over_t0: f64,
    /// `(2/(2m+1))·log(8/(ℓ(2m+1)))`, a lower bound for `ℓ/t₀`.
    pub log_factor: f64,
    /// `F(π/2 − ℓ/2 | 1 − t₀²)`.
    pub f_value: f64,
    /// `(1 + log(4/ℓ))/√2`, a lower bound for `f_value`.
    pub f_factor: f64,
    pub cot_guard: bool,
}

impl Thm7Chain {
    pub fn holds(&self) -> bool {
        self.ell_over_t0 >= self.log_factor && self.f_value >= self.f_factor && self.cot_guard
    }
}

pub fn thm7_chain(ell: f64, m: f64) -> Result<Thm7Chain> {
    let k = 2.0 * m + 1.0;
    let t0 = t0(ell, m)?;
    let f_value = ellip_f(EllipticArg::with_complement(FRAC_PI_2 - 0.5 * ell, t0 * t0)?)?;
    Ok(Thm7Chain {
        t0,
        ell_over_t0: ell / t0,
        log_factor: 2.0 / k * log(8.0 / (ell * k)),
        f_value,
        f_factor: (1.0 + log(4.0 / ell)) / SQRT_2,
        cot_guard: cot_guard(ell, m),
    })
}

/// Inputs shared by the surface level bounds. In the `thm7` estimate `m`
/// is also the `m_ℓ` entering `t₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundInput {
    pub ell: f64,
    pub m: f64,
    pub g: u32,
    pub p: f64,
}

impl BoundInput {
    pub fn new(ell: f64, m: f64, g: u32, p: f64) -> Result<Self> {
        if !(ell > 0.0) {
            return domain("ℓ must be positive", ell);
        }
        if !(m > 0.0) {
            return domain("m must be positive", m);
        }
        if g < 2 {
            return domain("genus must be at least 2", g as f64);
        }
        if !(p >= 1.0) {
            return domain("p must be at least 1", p);
        }
        Ok(BoundInput { ell, m, g, p })
    }
}

/// `4π(g − 1) − 4 + (√2/(2m+1))(1 + log(4/ℓ))·log(8/(ℓ(2m+1)))`.
pub fn thm7_bound(input: &BoundInput) -> BoundReport {
    let BoundInput { ell, m, g, .. } = *input;
    let k = 2.0 * m + 1.0;
    let offset = 4.0 * PI * (g as f64 - 1.0) - 4.0;
    let log_factor = 2.0 / k * log(8.0 / (ell * k));
    let f_factor = (1.0 + log(4.0 / ell)) / SQRT_2;
    let collar = log_factor * f_factor;
    let threshold = thm7_threshold(m);
    let mut r = BoundReport::new("thm7", BoundKind::Lower, offset + collar)
        .input("ell", ell)
        .input("m", m)
        .input("g", g as f64)
        .term("offset", offset)
        .term("threshold", threshold)
        .term("log_factor", log_factor)
        .term("f_factor", f_factor)
        .term("collar_term", collar)
        .require(ell <= threshold, "needs ℓ ≤ 8/((2m+1)e^{2(2m+1)})");
    match t0(ell, m) {
        Ok(t) => r = r.term("t0", t).require(cot_guard(ell, m), "cot guard tan(ℓ/2) ≥ t₀ fails"),
        Err(_) => r = r.require(false, "t₀ undefined (W₋₁ argument below −1/e)"),
    }
    r
}

/// Energy of the linear stretch of the maximal collar onto a ring of
/// modulus `m_omega`: `½(mod/m_Ω + m_Ω/mod)·2ℓ/sinh(ℓ/2)`.
pub fn upper_bound_p1(ell: f64, mod_a1: f64, m_omega: f64) -> BoundReport {
    let k = 0.5 * (mod_a1 / m_omega + m_omega / mod_a1);
    let area = 2.0 * ell / sinh(0.5 * ell);
    BoundReport::new("upper_p1", BoundKind::Upper, k * area)
        .input("ell", ell)
        .input("mod_a1", mod_a1)
        .input("m_omega", m_omega)
        .term("mean_distortion", k)
        .term("collar_area", area)
        .term("simplified", 4.0 * PI / sinh(ell))
        .require(ell > 0.0 && mod_a1 > 0.0 && m_omega > 0.0, "inputs must be positive")
}

/// `4π/sinh ℓ`, offered only when the target is thinner than the collar.
pub fn upper_bound_p1_simplified(ell: f64, mod_a1: f64, m_omega: f64) -> Option<f64> {
    (ell > 0.0 && m_omega > 0.0 && m_omega < mod_a1).then(|| 4.0 * PI / sinh(ell))
}

/// `λ₀|Ω|(mod(A)/mod(Ω) + mod(Ω)/mod(A))`.
pub fn containment_bound(lambda0: f64, area_omega: f64, mod_omega: f64, mod_a: f64) -> Result<f64> {
    for v in [lambda0, area_omega, mod_omega, mod_a] {
        if !(v > 0.0) || v.is_infinite() {
            return domain("containment bound inputs must be positive and finite", v);
        }
    }
    Ok(lambda0 * area_omega * (mod_a / mod_omega + mod_omega / mod_a))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CurveFamilyInput {
    /// Shortest homotopically nontrivial curve in the ring.
    pub d: f64,
    /// `∫ K(z, f) dz` over the ring.
    pub k_integral: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub r_width: f64,
}

impl CurveFamilyInput {
    fn check(&self) -> Result<()> {
        if !(self.d > 0.0) {
            return domain("d must be positive", self.d);
        }
        if !(self.k_integral >= 0.0) {
            return domain("∫K must be nonnegative", self.k_integral);
        }
        if !(self.lambda_minus > 0.0 && self.lambda_minus <= self.lambda_plus) {
            return domain("densities need 0 < λ₋ ≤ λ₊", self.lambda_minus);
        }
        if !(self.r_width > 0.0) {
            return domain("width parameter must be positive", self.r_width);
        }
        Ok(())
    }
}

/// `mod(V) ≤ (1/d²)∫K`, from the admissible metric `ρ = 1/d`.
pub fn curve_family_bound(input: &CurveFamilyInput) -> Result<f64> {
    input.check()?;
    Ok(input.k_integral / (input.d * input.d))
}

/// `∫K dσ ≥ (2rλ₋/λ₊)²·mod(A)`.
pub fn curve_family_energy_bound(input: &CurveFamilyInput, mod_a: f64) -> Result<f64> {
    input.check()?;
    if !(mod_a > 0.0) {
        return domain("modulus must be positive", mod_a);
    }
    let c = 2.0 * input.r_width * input.lambda_minus / input.lambda_plus;
    Ok(c * c * mod_a)
}

/// `(4a²π/(2ℓ))(π − ℓ)` for a short geodesic of length `ell` in the target;
/// `a` is supplied by the caller.
pub fn thm1b_bound(ell: f64, a: f64) -> BoundReport {
    BoundReport::new("thm1b", BoundKind::Lower, 4.0 * a * a * PI / (2.0 * ell) * (PI - ell))
        .input("ell", ell)
        .input("a", a)
        .require(ell > 0.0 && ell < PI, "needs 0 < ℓ < π")
}

/// `(2/ℓ)·F(ℓ/2 | 1 − log²(4/ℓ)/ℓ²)`, the ratio of the two estimates of
/// `tF(ℓ/2 | 1 − t²)` at `t ≈ ℓ/log(4/ℓ)`.
pub fn ratio_diagnostic(ell: f64) -> Result<f64> {
    if !(ell > 0.0 && ell < 4.0) {
        return domain("ratio needs 0 < ℓ < 4", ell);
    }
    let l = log(4.0 / ell) / ell;
    Ok(2.0 / ell * ellip_f(EllipticArg::with_complement(0.5 * ell, l * l)?)?)
}

/// Relative error of the `β` approximation against `t₀`.
pub fn t0_beta_error(ell: f64, m_ell: f64) -> Result<f64> {
    let exact = t0(ell, m_ell)?;
    Ok(fabs(t0_beta_approx(ell, m_ell)? / exact - 1.0))
}
