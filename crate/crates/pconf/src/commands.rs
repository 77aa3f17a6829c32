//! Records produced by the single-shot commands.

use std::f64::consts::PI;

use pconf_core::annulus::{maximal_collar, Collar};
use pconf_core::bounds::{thm1b_bound, thm7_bound, thm7_chain, upper_bound_p1, BoundInput};
use pconf_core::extremal::{
    solve_alpha_p1, solve_general, solve_small_ell, thm2_bound, thm3_bound, GeneralPSolution, GrotzschProblem,
};
use pconf_core::oracle::intro_example_check;
use pconf_core::report::BoundReport;
use pconf_core::Result as CoreResult;

use crate::error::{Result, RunError};
use crate::record::{Cell, Record, Table};

/// `4π/ℓ − πℓ/2`, the lower estimate for the maximal collar modulus.
pub fn collar_modulus_floor(ell: f64) -> f64 {
    4.0 * PI / ell - PI * ell / 2.0
}

pub fn collar(ell: f64) -> CoreResult<Record> {
    let c = maximal_collar(ell)?;
    let floor = collar_modulus_floor(ell);
    let modulus = c.modulus();
    let display = c.sech_modulus_display();
    Ok(Record::new()
        .text("command", "collar")
        .num("ell", ell)
        .num("delta", c.delta)
        .num("theta", c.theta)
        .num("area", c.area())
        .num("area_limit", 4.0)
        .flag("area_within_limit", c.area() <= 4.0)
        .num("modulus", modulus)
        .num("modulus_sech_form", display)
        .num("modulus_floor", floor)
        .flag("modulus_floor_pass", modulus >= floor)
        .flag("modulus_sech_form_floor_pass", display >= floor)
        .text("modulus_convention", "log(b/a)"))
}

/// Where the domain collar comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Maximal,
    Theta(f64),
    Delta(f64),
}

/// Target ring, absolute or relative to the domain modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Modulus(f64),
    Ratio(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveSpec {
    pub ell: f64,
    pub domain: Domain,
    pub target: Target,
    pub p: f64,
    pub approx: bool,
}

impl SolveSpec {
    pub fn problem(&self) -> CoreResult<GrotzschProblem> {
        let theta = match self.domain {
            Domain::Maximal => maximal_collar(self.ell)?.theta,
            Domain::Delta(d) => Collar::new(self.ell, d)?.theta,
            Domain::Theta(t) => t,
        };
        let domain_modulus = 4.0 * PI * theta / self.ell;
        let m_omega = match self.target {
            Target::Modulus(m) => m,
            Target::Ratio(k) => k * domain_modulus,
        };
        GrotzschProblem::new(self.ell, theta, m_omega / (2.0 * PI), self.p)
    }
}

fn problem_fields(r: Record, pr: &GrotzschProblem) -> Record {
    r.num("ell", pr.ell())
        .num("theta", pr.theta())
        .num("p", pr.p())
        .num("domain_modulus", pr.domain_modulus())
        .num("target_modulus", pr.target_modulus())
        .num("domain_width", pr.domain_width())
        .num("target_width", pr.target_width())
        .num("area", pr.area())
}

fn general_fields(r: Record, prefix: &str, s: &GeneralPSolution) -> Record {
    let k = |name: &str| format!("{prefix}{name}");
    r.num(&k("alpha"), s.alpha)
        .num(&k("energy"), s.energy)
        .num(&k("reciprocal_energy"), s.reciprocal_energy)
        .opt(&k("closed_form_energy"), s.closed_form_energy)
        .num(&k("boundary_residual"), s.boundary_residual)
        .num(&k("el_residual"), s.el_residual)
        .num(&k("max_ux"), s.max_ux)
        .num(&k("min_ux"), s.min_ux)
        .flag(&k("regime_warning"), s.regime_warning)
        .int(&k("panels"), s.panels as u64)
        .int(&k("iterations"), s.iterations as u64)
}

/// Runs the matching solver. Returns the summary and a table of `u_x`
/// (and `u` when available) sampled on `[0, T]`.
pub fn solve(spec: &SolveSpec, samples: usize) -> Result<(Record, Table)> {
    let pr = spec.problem()?;
    let mut r = problem_fields(Record::new().text("command", "solve"), &pr);
    let t_width = pr.domain_width();
    let xs: Vec<f64> = (0..=samples).map(|i| t_width * i as f64 / samples.max(1) as f64).collect();
    let mut table = Table::new("solve: extremal radial map")
        .column("x", "position across the strip, 0..T, hyperbolic scaling")
        .column("u", "extremal map u(x)")
        .column("ux", "derivative u_x");
    if pr.p() == 1.0 && !spec.approx {
        let s = solve_alpha_p1(&pr)?;
        r = r
            .text("solver", "closed_form")
            .num("alpha_ell", s.alpha_ell)
            .num("t", s.t)
            .num("energy", s.energy)
            .num("boundary_residual", s.boundary_residual)
            .int("iterations", s.iterations as u64);
        for &x in &xs {
            let u = if x == 0.0 { 0.0 } else { s.u(x)? };
            table.push(vec![x.into(), u.into(), s.ux(x)?.into()]);
        }
    } else {
        let exact = solve_general(&pr)?;
        r = general_fields(r.text("solver", "bvp"), "", &exact);
        let mut approx = None;
        if spec.approx {
            let a = solve_small_ell(&pr)?;
            r = general_fields(r, "approx_", &a).num("ratio", a.energy / exact.energy);
            approx = Some(a);
        }
        table = Table::new("solve: extremal radial map")
            .column("x", "position across the strip, 0..T, hyperbolic scaling")
            .column("ux", "derivative u_x of the exact solution")
            .column("approx_ux", "u_x in the small-ell approximation (empty without --approx)");
        for &x in &xs {
            let a: Option<f64> = approx.as_ref().map(|a| a.ux_at(x)).transpose()?;
            table.push(vec![x.into(), exact.ux_at(x)?.into(), Cell::from(a)]);
        }
    }
    let table = table.notes(r.summary_lines());
    Ok((r, table))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BoundKindArg {
    /// Logarithmically divergent lower bound for a short geodesic (p = 1).
    Thm7,
    /// Lower bound for p > 1.
    Thm3,
    /// Sharp collar bound (p = 1).
    Thm2,
    /// Linear stretch of the maximal collar (p = 1).
    Upper,
    /// Short geodesic in the target.
    Thm1b,
    /// Pointwise inequalities behind the thm7 bound.
    Chain,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundParams {
    pub ell: f64,
    pub m: Option<f64>,
    pub g: u32,
    pub p: f64,
    pub delta: Option<f64>,
    pub mod_target: Option<f64>,
    pub a: Option<f64>,
}

fn need(x: Option<f64>, what: &str) -> Result<f64> {
    x.ok_or_else(|| RunError::Usage(what.into()))
}

pub fn flatten_report(mut r: Record, b: &BoundReport) -> Record {
    r = r
        .text("bound", b.name)
        .text(
            "kind",
            match b.kind {
                pconf_core::report::BoundKind::Lower => "lower",
                pconf_core::report::BoundKind::Upper => "upper",
            },
        )
        .num("value", b.value)
        .flag("applicable", b.applicable)
        .text("violations", &b.violations.join("; "));
    for t in &b.inputs {
        r = r.num(&format!("input_{}", t.name), t.value);
    }
    for t in &b.terms {
        r = r.num(&format!("term_{}", t.name), t.value);
    }
    if let Some(c) = b.comparison {
        r = r.num("compared_energy", c.energy).num("margin", c.margin).flag("holds", c.holds);
    }
    r
}

pub fn bound(kind: BoundKindArg, bp: &BoundParams) -> Result<Record> {
    let r = Record::new().text("command", "bound");
    let report = match kind {
        BoundKindArg::Thm7 => thm7_bound(&BoundInput::new(bp.ell, need(bp.m, "thm7 needs --m")?, bp.g, 1.0)?),
        BoundKindArg::Thm3 => {
            BoundInput::new(bp.ell, need(bp.m, "thm3 needs --m")?, bp.g, bp.p)?;
            thm3_bound(bp.ell, need(bp.m, "thm3 needs --m")?, bp.g, bp.p)
        }
        BoundKindArg::Thm2 => {
            let delta = match bp.delta {
                Some(d) => d,
                None => maximal_collar(bp.ell)?.delta,
            };
            thm2_bound(bp.ell, delta, need(bp.mod_target, "thm2 needs --mod-target")?)?
        }
        BoundKindArg::Upper => {
            let c = maximal_collar(bp.ell)?;
            let m_omega = need(bp.mod_target, "upper needs --mod-target")?;
            let exact = thm2_bound(bp.ell, c.delta, m_omega)?.value;
            upper_bound_p1(bp.ell, c.modulus(), m_omega).compare_with(exact)
        }
        BoundKindArg::Thm1b => thm1b_bound(bp.ell, need(bp.a, "thm1b needs --a")?),
        BoundKindArg::Chain => {
            let m = need(bp.m, "chain needs --m")?;
            let c = thm7_chain(bp.ell, m)?;
            return Ok(r
                .text("bound", "thm7_chain")
                .num("ell", bp.ell)
                .num("m", m)
                .num("t0", c.t0)
                .num("ell_over_t0", c.ell_over_t0)
                .num("log_factor", c.log_factor)
                .flag("log_factor_pass", c.ell_over_t0 >= c.log_factor)
                .num("f_value", c.f_value)
                .num("f_factor", c.f_factor)
                .flag("f_factor_pass", c.f_value >= c.f_factor)
                .flag("cot_guard", c.cot_guard)
                .flag("holds", c.holds()));
        }
    };
    Ok(flatten_report(r, &report))
}

pub fn intro_example() -> CoreResult<(Record, Table)> {
    let rep = intro_example_check()?;
    let mut table = Table::new("intro-example: hyperbolic energy of the punctured disk map")
        .column("k", "cutoff exponent, epsilon = 10^-k")
        .column("cutoff", "inner radius epsilon")
        .column("energy", "integral of K over epsilon < |z| < 1/2 in the hyperbolic area of the punctured disk")
        .column("factor", "ratio to the previous row (empty in the first row)");
    let mut rows = Vec::new();
    for d in &rep.divergence {
        let factor = d.factor.is_finite().then_some(d.factor);
        table.push(vec![Cell::Int(d.k as i64), d.cutoff.into(), d.energy.into(), Cell::from(factor)]);
        rows.push(
            Record::new().int("k", d.k as u64).num("cutoff", d.cutoff).num("energy", d.energy).opt("factor", factor),
        );
    }
    let r = Record::new()
        .text("command", "intro-example")
        .num("euclidean_energy", rep.euclidean_energy)
        .num("euclidean_closed_form", rep.euclidean_closed_form)
        .num("euclidean_error", rep.euclidean_error)
        .flag("euclidean_pass", rep.euclidean_error <= 1e-8)
        .num("profile_discrepancy", rep.profile_discrepancy)
        .num("coth_bound_scaled", rep.coth_bound_scaled)
        .num("coth_bound_log", rep.coth_bound_log)
        .flag("strictly_increasing", rep.strictly_increasing)
        .flag("tenfold_per_decade", rep.linear_in_cutoff)
        .num("k_times_r", rep.small_z_ratio)
        .num("k_times_r_half", rep.small_z_ratio_half)
        .records("divergence", rows);
    let table = table.notes(r.summary_lines());
    Ok((r, table))
}
