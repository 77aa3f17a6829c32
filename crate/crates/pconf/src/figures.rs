//! Data for the four plots, one CSV per figure.

use std::f64::consts::{E, FRAC_PI_2};

use pconf_core::bounds::{ratio_diagnostic, t0est_sides};
use pconf_core::extremal::scaled_width;
use pconf_core::specfun::{ellip_e, ellip_f, EllipticArg};
use pconf_core::Result;

use crate::record::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    IntegralGraph,
    ThetaGraph,
    LambertBounds,
    RatioGraph,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::IntegralGraph, Figure::ThetaGraph, Figure::LambertBounds, Figure::RatioGraph];

    pub fn name(self) -> &'static str {
        match self {
            Figure::IntegralGraph => "integral-graph",
            Figure::ThetaGraph => "theta-graph",
            Figure::LambertBounds => "lambert-bounds",
            Figure::RatioGraph => "ratio-graph",
        }
    }
}

/// Multipliers `α_ℓ` drawn as separate curves.
pub const ALPHAS: [f64; 8] = [-20.0, -10.0, -5.0, -2.0, -1.0, 0.0, 0.5, 0.9];

const THETA_STEPS: usize = 180;
const LAMBERT_STEPS: usize = 1000;
const RATIO_STEPS: usize = 200;
const RATIO_MAX: f64 = 1e-5;

pub fn figure(fig: Figure) -> Result<Table> {
    match fig {
        Figure::IntegralGraph => integral_graph(),
        Figure::ThetaGraph => theta_graph(),
        Figure::LambertBounds => lambert_bounds(),
        Figure::RatioGraph => ratio_graph(),
    }
}

fn alpha_columns(mut t: Table, what: &str) -> Table {
    for (i, a) in ALPHAS.iter().enumerate() {
        t = t.column(format!("a{i}"), format!("{what} at alpha_ell = {a}"));
    }
    t
}

fn t_of(alpha: f64) -> f64 {
    1.0 / (1.0 - alpha).sqrt()
}

/// Bracket of the minimal energy divided by `ℓ`:
/// `(t + 1/t)F − (2/t)E + 2 tanΘ √(1 − α cos²Θ)` with `m = 1 − t²`.
pub fn energy_bracket(theta: f64, alpha: f64) -> Result<f64> {
    let t = t_of(alpha);
    let arg = EllipticArg::with_complement(theta, t * t)?;
    let (f, e) = (ellip_f(arg)?, ellip_e(arg)?);
    let c = theta.cos();
    Ok((t + 1.0 / t) * f - 2.0 * e / t + 2.0 * theta.tan() * (1.0 - alpha * c * c).sqrt())
}

fn integral_graph() -> Result<Table> {
    let mut t = Table::new("figure integral-graph: minimal p = 1 energy per unit core length")
        .note("theta in radians on [0, pi/2); tan diverges at pi/2 so the last point is omitted")
        .column("theta", "half the scaled collar width, radians");
    t = alpha_columns(t, "(t + 1/t)F - (2/t)E + 2 tan(theta) sqrt(1 - alpha cos^2 theta), t = 1/sqrt(1 - alpha)");
    for i in 0..THETA_STEPS {
        let theta = FRAC_PI_2 * i as f64 / THETA_STEPS as f64;
        let mut row = vec![Cell::Num(theta)];
        for &a in &ALPHAS {
            row.push(energy_bracket(theta, a)?.into());
        }
        t.push(row);
    }
    Ok(t)
}

fn theta_graph() -> Result<Table> {
    let mut t = Table::new("figure theta-graph: left side of the boundary condition")
        .note("theta in radians on [0, pi/2]; modulus convention log(b/a)")
        .column("theta", "half the scaled collar width, radians");
    t = alpha_columns(t, "F(theta | alpha/(alpha - 1)) / sqrt(1 - alpha) = ell m_Omega / 4 pi");
    for i in 0..=THETA_STEPS {
        let theta = if i == THETA_STEPS { FRAC_PI_2 } else { FRAC_PI_2 * i as f64 / THETA_STEPS as f64 };
        let mut row = vec![Cell::Num(theta)];
        for &a in &ALPHAS {
            row.push(if theta == 0.0 { 0.0 } else { scaled_width(theta, t_of(a))? }.into());
        }
        t.push(row);
    }
    Ok(t)
}

fn lambert_bounds() -> Result<Table> {
    let x_max = 8.0 / E;
    let mut t = Table::new("figure lambert-bounds: 4 exp(W_-1(-x/8)) against x / (2 log(8/x))")
        .note("x on [0, 8/e]; both sides vanish at x = 0 and touch at x = 8/e")
        .column("x", "argument, dimensionless")
        .column("lhs", "4 exp(W_-1(-x/8))")
        .column("rhs", "x / (2 log(8/x))")
        .column("difference", "lhs - rhs, never positive");
    for i in 0..=LAMBERT_STEPS {
        let x = if i == LAMBERT_STEPS { x_max } else { x_max * i as f64 / LAMBERT_STEPS as f64 };
        let (lhs, rhs) = if x == 0.0 { (0.0, 0.0) } else { t0est_sides(x)? };
        t.push(vec![x.into(), lhs.into(), rhs.into(), (lhs - rhs).into()]);
    }
    Ok(t)
}

fn ratio_graph() -> Result<Table> {
    let mut t = Table::new("figure ratio-graph: (2/ell) F(ell/2 | 1 - log^2(4/ell)/ell^2)")
        .note("ell in hyperbolic length units on (0, 1e-5]")
        .column("ell", "core geodesic length")
        .column("ratio", "ratio of the two estimates of t F(ell/2 | 1 - t^2), at most 1");
    for i in 1..=RATIO_STEPS {
        let ell = RATIO_MAX * i as f64 / RATIO_STEPS as f64;
        t.push(vec![ell.into(), ratio_diagnostic(ell)?.into()]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_figure_has_full_rows() {
        for fig in Figure::ALL {
            let t = figure(fig).unwrap();
            assert!(t.len() > 100, "{}", fig.name());
            for name in t.column_names() {
                assert!(t.values(name).unwrap().iter().all(|v| v.is_finite()), "{} {name}", fig.name());
            }
        }
    }

    #[test]
    fn bracket_vanishes_at_zero_and_matches_identity() {
        for &a in &ALPHAS {
            assert_eq!(energy_bracket(0.0, a).unwrap(), 0.0);
        }
        // α = 0: F = E = Θ, bracket = 2 tan Θ
        let th = 0.7;
        assert!((energy_bracket(th, 0.0).unwrap() - 2.0 * th.tan()).abs() < 1e-14);
    }

    #[test]
    fn theta_graph_at_alpha_zero_is_theta() {
        let t = figure(Figure::ThetaGraph).unwrap();
        let th = t.values("theta").unwrap();
        let a5 = t.values("a5").unwrap();
        for (x, y) in th.iter().zip(&a5) {
            assert!((x - y).abs() < 1e-14);
        }
    }
}
