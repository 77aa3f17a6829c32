//! Brute-force checks that do not go through the closed forms: energies of
//! arbitrary piecewise linear radial maps, random perturbations of a
//! solution, and the punctured disk example.

use alloc::vec::Vec;
use core::f64::consts::PI;
use libm::{cos, exp, expm1, fabs, log, log1p, sin, sqrt, tanh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::domain;
use crate::extremal::GrotzschProblem;
use crate::quad::integrate;
use crate::{Error, Result};

/// Piecewise linear `u` on `[0, T]` with `u(0) = 0`, strictly increasing.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RadialMap {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl RadialMap {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() {
            return domain("need at least two knots, one value each", knots.len() as f64);
        }
        if knots[0] != 0.0 || values[0] != 0.0 {
            return domain("the map starts at u(0) = 0", values[0]);
        }
        for w in knots.windows(2) {
            if !(w[1] > w[0]) {
                return domain("knots must be strictly increasing", w[1]);
            }
        }
        for w in values.windows(2) {
            if !(w[1] > w[0]) {
                return domain("degenerate cell: u_x must be positive", w[1] - w[0]);
            }
        }
        Ok(RadialMap { knots, values })
    }

    /// Samples `u` at `n + 1` equally spaced knots on `[0, T]`.
    pub fn sample<F: FnMut(f64) -> Result<f64>>(problem: &GrotzschProblem, n: usize, mut u: F) -> Result<Self> {
        let t = problem.domain_width();
        let mut knots = Vec::with_capacity(n + 1);
        let mut values = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let x = if i == n { t } else { t * i as f64 / n as f64 };
            knots.push(x);
            values.push(if i == 0 { 0.0 } else { u(x)? });
        }
        Self::new(knots, values)
    }

    pub fn identity(problem: &GrotzschProblem, n: usize) -> Result<Self> {
        let s = problem.target_width() / problem.domain_width();
        Self::sample(problem, n, |x| Ok(s * x))
    }

    /// A random admissible map: random knots, random positive slopes,
    /// normalized to end at `b`.
    pub fn random<R: Rng + ?Sized>(problem: &GrotzschProblem, cells: usize, rng: &mut R) -> Result<Self> {
        let cells = cells.max(1);
        let mut dx: Vec<f64> = (0..cells).map(|_| -log(1.0 - rng.gen::<f64>())).collect();
        let mut du: Vec<f64> = (0..cells).map(|_| -log(1.0 - rng.gen::<f64>()) + 1e-3).collect();
        normalize(&mut dx, problem.domain_width());
        normalize(&mut du, problem.target_width());
        let mut knots = Vec::with_capacity(cells + 1);
        let mut values = Vec::with_capacity(cells + 1);
        let (mut x, mut u) = (0.0, 0.0);
        knots.push(0.0);
        values.push(0.0);
        for i in 0..cells {
            x += dx[i];
            u += du[i];
            knots.push(x);
            values.push(u);
        }
        *knots.last_mut().unwrap() = problem.domain_width();
        *values.last_mut().unwrap() = problem.target_width();
        Self::new(knots, values)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn slopes(&self) -> impl Iterator<Item = f64> + '_ {
        self.knots.windows(2).zip(self.values.windows(2)).map(|(x, u)| (u[1] - u[0]) / (x[1] - x[0]))
    }
}

fn normalize(v: &mut [f64], total: f64) {
    let s: f64 = v.iter().sum();
    for x in v {
        *x *= total / s;
    }
}

/// `∫₀ᵀ (½(u_x + 1/u_x))ᵖ λ dx` for a piecewise linear map. `u_x` is
/// constant on each cell and `∫λ = ℓ(tan y₂ − tan y₁)` there, so the sum is
/// exact up to rounding.
pub fn energy_quadrature(problem: &GrotzschProblem, map: &RadialMap) -> Result<f64> {
    let t = problem.domain_width();
    let b = problem.target_width();
    let last = *map.knots.last().unwrap();
    if fabs(last - t) > 1e-12 * t {
        return domain("map must be defined on exactly [0, T]", last);
    }
    let end = *map.values.last().unwrap();
    if fabs(end - b) > 1e-8 * b.max(1.0) {
        return domain("map must end at u(T) = b", end);
    }
    let (ell, p) = (problem.ell(), problem.p());
    let mut acc = 0.0;
    for (x, s) in map.knots.windows(2).zip(map.slopes()) {
        let (y1, y2) = (problem.angle(x[0])?, problem.angle(x[1])?);
        // tan y₂ − tan y₁ without cancellation
        let cell = ell * sin(y2 - y1) / (cos(y1) * cos(y2));
        let k = 0.5 * (s + 1.0 / s);
        acc += if p == 1.0 { k * cell } else { exp(p * log(k)) * cell };
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PerturbationConfig {
    pub trials: usize,
    pub seed: u64,
    /// Requested size of the perturbation; reduced per trial when needed
    /// to keep `u_x` at least 10% of its minimum.
    pub eps: f64,
    pub max_bumps: usize,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        PerturbationConfig { trials: 100, seed: 0, eps: 1e-2, max_bumps: 3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PerturbationReport {
    pub trials: usize,
    /// `E[u + εφ] − E[u]` per trial.
    pub gaps: Vec<f64>,
    pub min_gap: f64,
    pub max_gap: f64,
    /// Trials whose step was reduced to stay admissible.
    pub clipped: usize,
    /// Every gap is at least `−1e−8`.
    pub passed: bool,
}

#[derive(Debug, Clone, Copy)]
struct Bump {
    lo: f64,
    width: f64,
    amp: f64,
}

impl Bump {
    /// `φ′` of `amp·½(1 − cos(2π(x − lo)/width))`.
    fn slope(&self, x: f64) -> f64 {
        let s = (x - self.lo) / self.width;
        if !(0.0..=1.0).contains(&s) {
            return 0.0;
        }
        self.amp * PI / self.width * sin(2.0 * PI * s)
    }

    fn max_slope(&self) -> f64 {
        fabs(self.amp) * PI / self.width
    }
}

fn draw_bumps(rng: &mut ChaCha8Rng, t: f64, max_bumps: usize) -> Vec<Bump> {
    let n = rng.gen_range(1..=max_bumps.max(1));
    (0..n)
        .map(|_| {
            let width = t * rng.gen_range(0.1..0.9);
            let lo = rng.gen_range(0.0..(t - width));
            let amp = rng.gen_range(-1.0..1.0);
            Bump { lo, width, amp }
        })
        .collect()
}

/// Random compactly supported perturbations `u + εφ` with `φ(0) = φ(T) = 0`
/// of a map given through its derivative `ux`. Trial `i` draws from stream
/// `i` of a ChaCha8 generator keyed by `seed`, so reports do not depend on
/// evaluation order.
pub fn perturbation_test<F>(problem: &GrotzschProblem, ux: F, config: &PerturbationConfig) -> Result<PerturbationReport>
where
    F: Fn(f64) -> Result<f64>,
{
    let t = problem.domain_width();
    let p = problem.p();
    let mut min_ux = f64::INFINITY;
    for i in 0..=400 {
        min_ux = min_ux.min(ux(t * i as f64 / 400.0)?);
    }
    let mut gaps = Vec::with_capacity(config.trials);
    let mut clipped = 0;
    for trial in 0..config.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(trial as u64);
        let bumps = draw_bumps(&mut rng, t, config.max_bumps);
        let bound: f64 = bumps.iter().map(Bump::max_slope).sum();
        let mut eps = config.eps;
        if eps * bound > 0.9 * min_ux {
            eps = 0.9 * min_ux / bound;
            clipped += 1;
        }
        if eps == 0.0 {
            gaps.push(0.0);
            continue;
        }
        // integrate only where some bump is active, split at every edge
        let mut edges: Vec<f64> = bumps.iter().flat_map(|b| [b.lo, b.lo + b.width]).collect();
        edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let integrand = |x: f64| {
            let a = ux(x).unwrap_or(f64::NAN);
            let d = eps * bumps.iter().map(|b| b.slope(x)).sum::<f64>();
            let k0 = 0.5 * (a + 1.0 / a);
            let dk = 0.5 * d * (1.0 - 1.0 / (a * (a + d)));
            let dkp = if p == 1.0 { dk } else { exp(p * log(k0)) * expm1(p * log1p(dk / k0)) };
            dkp * problem.weight(x).unwrap_or(f64::NAN)
        };
        let mut gap = 0.0;
        for w in edges.windows(2) {
            if w[1] - w[0] <= 0.0 || !bumps.iter().any(|b| w[0] >= b.lo && w[1] <= b.lo + b.width) {
                continue;
            }
            gap += integrate(integrand, w[0], w[1], 1e-15)?.value;
        }
        if !gap.is_finite() {
            return Err(Error::Quadrature { estimate: gap, abs_error: f64::NAN, evaluations: 0 });
        }
        gaps.push(gap);
    }
    let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let max_gap = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(PerturbationReport {
        trials: config.trials,
        passed: gaps.iter().all(|&g| g >= -1e-8),
        gaps,
        min_gap,
        max_gap,
        clipped,
    })
}

/// `K(z, f₀) = (r² + 2)/(r√(r² + 4))` for the extremal map of the punctured
/// disk, `f₀(z) = (z/2|z|)(|z| + √(|z|² + 4))`.
pub fn intro_distortion(r: f64) -> f64 {
    (r * r + 2.0) / (r * sqrt(r * r + 4.0))
}

/// The same distortion from the radial profile `ρ(r) = (r + √(r² + 4))/2`:
/// `½(a + 1/a)` with `a = rρ′/ρ`.
pub fn intro_distortion_from_profile(r: f64) -> f64 {
    let q = sqrt(r * r + 4.0);
    let rho = 0.5 * (r + q);
    let drho = 0.5 * (1.0 + r / q);
    let a = r * drho / rho;
    0.5 * (a + 1.0 / a)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DivergenceRow {
    pub k: u32,
    pub cutoff: f64,
    /// `∫_{ε<|z|<½} K dσ`, `dσ = |z|⁻²log⁻²(1/|z|) dz`.
    pub energy: f64,
    /// Ratio to the previous row.
    pub factor: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IntroExampleReport {
    pub euclidean_energy: f64,
    pub euclidean_closed_form: f64,
    pub euclidean_error: f64,
    pub profile_discrepancy: f64,
    /// `π coth(σ/2π)` with `σ = 2π·log φ` (golden ratio φ), which makes the
    /// bound equal to `π√5`.
    pub coth_bound_scaled: f64,
    /// `π coth(σ/2π)` with `σ = log φ`, the `log(b/a)` modulus of the image.
    pub coth_bound_log: f64,
    pub divergence: Vec<DivergenceRow>,
    pub strictly_increasing: bool,
    /// Every factor is at least 10, i.e. growth at least linear in `10ᵏ`.
    pub linear_in_cutoff: bool,
    /// `K(z, f₀)·|z|` at `|z| = 10⁻⁶`; `K ~ 1/|z|` at the puncture.
    pub small_z_ratio: f64,
    /// `K(z, f₀)·|z|/2` at the same point, the normalization of `K ≈ 2/|z|`.
    pub small_z_ratio_half: f64,
}

/// Euclidean energy of the extremal map over the punctured unit disk.
pub fn intro_euclidean_energy() -> Result<f64> {
    // 2π∫₀¹ K r dr with K r = (r² + 2)/√(r² + 4)
    Ok(2.0 * PI * integrate(|r| (r * r + 2.0) / sqrt(r * r + 4.0), 0.0, 1.0, 1e-12)?.value)
}

/// `∫_{ε<|z|<½} K dσ`, integrated in `s = log(1/|z|)` where it reads
/// `2π∫ K(e⁻ˢ)/s² ds`.
pub fn intro_hyperbolic_energy(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 0.5) {
        return domain("cutoff must lie in (0, ½)", eps);
    }
    let (s0, s1) = (log(2.0), -log(eps));
    let n = libm::ceil(s1 - s0).max(1.0) as usize;
    let mut acc = 0.0;
    for i in 0..n {
        let a = s0 + (s1 - s0) * i as f64 / n as f64;
        let b = s0 + (s1 - s0) * (i + 1) as f64 / n as f64;
        let f = |s: f64| intro_distortion(exp(-s)) / (s * s);
        let q = integrate(f, a, b, 1e-13 * (1.0 + f(b) * (b - a)))?;
        acc += q.value;
    }
    Ok(2.0 * PI * acc)
}

pub fn intro_example_check() -> Result<IntroExampleReport> {
    let euclid = intro_euclidean_energy()?;
    let closed = PI * sqrt(5.0);
    let mut profile = 0.0f64;
    for i in 1..=1000 {
        let r = i as f64 / 1000.0;
        profile = profile.max(fabs(intro_distortion(r) / intro_distortion_from_profile(r) - 1.0));
    }
    let golden = 0.5 * (1.0 + sqrt(5.0));
    let mut rows: Vec<DivergenceRow> = Vec::new();
    for k in 2..=6u32 {
        let cutoff = libm::pow(10.0, -(k as f64));
        let energy = intro_hyperbolic_energy(cutoff)?;
        let factor = rows.last().map_or(f64::NAN, |r| energy / r.energy);
        rows.push(DivergenceRow { k, cutoff, energy, factor });
    }
    let strictly_increasing = rows.windows(2).all(|w| w[1].energy > w[0].energy);
    let linear_in_cutoff = rows.iter().skip(1).all(|r| r.factor >= 10.0);
    let r = 1e-6;
    Ok(IntroExampleReport {
        euclidean_energy: euclid,
        euclidean_closed_form: closed,
        euclidean_error: fabs(euclid - closed),
        profile_discrepancy: profile,
        coth_bound_scaled: PI / tanh(log(golden)),
        coth_bound_log: PI / tanh(log(golden) / (2.0 * PI)),
        divergence: rows,
        strictly_increasing,
        linear_in_cutoff,
        small_z_ratio: intro_distortion(r) * r,
        small_z_ratio_half: intro_distortion(r) * r / 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annulus::maximal_collar;
    use crate::extremal::{solve_alpha_p1, thm2_bound};
    use alloc::vec;
    use libm::tan;
    use proptest::prelude::*;

    fn unit_problem(k: f64) -> GrotzschProblem {
        let c = maximal_collar(1.0).unwrap();
        GrotzschProblem::from_collar(&c, k * c.modulus(), 1.0).unwrap()
    }

    #[test]
    fn map_validation() {
        assert!(RadialMap::new(vec![0.0, 1.0], vec![0.0, 1.0]).is_ok());
        assert!(RadialMap::new(vec![0.0, 1.0, 1.0], vec![0.0, 1.0, 2.0]).is_err());
        assert!(RadialMap::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 1.0]).is_err());
        assert!(RadialMap::new(vec![0.1, 1.0], vec![0.0, 1.0]).is_err());
        assert!(RadialMap::new(vec![0.0], vec![0.0]).is_err());
    }

    #[test]
    fn identity_energy() {
        let pr = unit_problem(1.0);
        let m = RadialMap::identity(&pr, 7).unwrap();
        let e = energy_quadrature(&pr, &m).unwrap();
        assert!((e - 2.0 * tan(pr.theta())).abs() < 1e-12);
        let wrong = pr.with_target_width(2.0 * pr.target_width()).unwrap();
        assert!(energy_quadrature(&wrong, &m).is_err());
    }

    #[test]
    fn sampled_extremal_matches_closed_form() {
        let pr = unit_problem(1.4);
        let sol = solve_alpha_p1(&pr).unwrap();
        let m = RadialMap::sample(&pr, 10_000, |x| sol.u(x)).unwrap();
        let e = energy_quadrature(&pr, &m).unwrap();
        assert!((e / sol.energy - 1.0).abs() < 1e-6);
        assert!(e >= sol.energy);
    }

    #[test]
    fn random_maps_never_beat_the_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = maximal_collar(0.6).unwrap();
        for i in 0..200 {
            let k = 0.5 + 1.5 * (i % 10) as f64 / 9.0;
            let pr = GrotzschProblem::from_collar(&c, k * c.modulus(), 1.0).unwrap();
            let bound = thm2_bound(0.6, c.delta, pr.target_modulus()).unwrap().value;
            let m = RadialMap::random(&pr, 1 + i % 40, &mut rng).unwrap();
            assert!(energy_quadrature(&pr, &m).unwrap() >= bound - 1e-6);
        }
    }

    #[test]
    fn perturbations() {
        let pr = unit_problem(2.0);
        let sol = solve_alpha_p1(&pr).unwrap();
        let ux = |x: f64| sol.ux(x);
        let zero =
            perturbation_test(&pr, ux, &PerturbationConfig { eps: 0.0, trials: 5, ..Default::default() }).unwrap();
        assert!(zero.gaps.iter().all(|&g| g == 0.0));
        let cfg = PerturbationConfig { seed: 3, ..Default::default() };
        let r = perturbation_test(&pr, ux, &cfg).unwrap();
        assert!(r.passed && r.min_gap > 0.0, "{}", r.min_gap);
        assert_eq!(r, perturbation_test(&pr, ux, &cfg).unwrap());
        // quadratic at a minimum
        let small = PerturbationConfig { eps: 1e-3, trials: 10, seed: 5, max_bumps: 2 };
        let big = PerturbationConfig { eps: 1e-2, ..small };
        let (a, b) = (perturbation_test(&pr, ux, &big).unwrap(), perturbation_test(&pr, ux, &small).unwrap());
        assert_eq!(a.clipped + b.clipped, 0);
        for (g1, g2) in a.gaps.iter().zip(&b.gaps) {
            let ratio = g1 / g2;
            assert!((ratio / 100.0 - 1.0).abs() < 0.2, "{ratio}");
        }
    }

    #[test]
    fn perturbing_a_non_minimizer_can_lower_energy() {
        // the identity is not extremal when b ≠ T: some direction decreases it
        let pr = unit_problem(2.0);
        let s = pr.target_width() / pr.domain_width();
        let r = perturbation_test(&pr, |_| Ok(s), &PerturbationConfig { seed: 1, ..Default::default() }).unwrap();
        assert!(r.min_gap < 0.0);
    }

    #[test]
    fn intro_example() {
        let r = intro_example_check().unwrap();
        assert!(r.euclidean_error < 1e-8);
        assert!((r.coth_bound_scaled - PI * sqrt(5.0)).abs() < 1e-12);
        assert!(r.coth_bound_log > r.coth_bound_scaled);
        assert!(r.profile_discrepancy < 1e-14);
        assert!((r.small_z_ratio - 1.0).abs() < 1e-6);
        assert!((r.small_z_ratio_half - 0.5).abs() < 1e-6);
        assert!(r.strictly_increasing);
        assert_eq!(r.divergence.len(), 5);
        // growth is ~10(k/(k+1))² per decade, short of 10
        assert!(!r.linear_in_cutoff);
        for row in &r.divergence[1..] {
            let k = row.k as f64;
            let model = 10.0 * ((k - 1.0) / k) * ((k - 1.0) / k);
            assert!((row.factor / model - 1.0).abs() < 0.35, "k={} factor={}", row.k, row.factor);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn profile_and_closed_distortion_agree(r in 1e-8f64..10.0) {
            let (a, b) = (intro_distortion(r), intro_distortion_from_profile(r));
            prop_assert!(fabs(a / b - 1.0) < 1e-13);
            prop_assert!(a >= 1.0);
        }

        #[test]
        fn random_map_energy_at_least_area(seed in 0u64..1000, cells in 1usize..30) {
            // K ≥ 1 pointwise
            let pr = unit_problem(1.0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = RadialMap::random(&pr, cells, &mut rng).unwrap();
            prop_assert!(energy_quadrature(&pr, &m).unwrap() >= pr.area() * (1.0 - 1e-12));
        }
    }
}
