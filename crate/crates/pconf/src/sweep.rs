//! Parallel grid sweeps over `(ℓ, m_Ω/mod)`.

use rayon::prelude::*;

use pconf_core::annulus::maximal_collar;
use pconf_core::bounds::upper_bound_p1;
use pconf_core::extremal::{solve_alpha_p1, solve_general, GrotzschProblem};
use pconf_core::Result as CoreResult;

use crate::error::{Result, RunError};
use crate::record::{Cell, Table};

/// `n` points from `lo` to `hi`, geometric when `log` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub log: bool,
}

impl Axis {
    pub fn points(&self) -> Result<Vec<f64>> {
        if self.n == 0 || !(self.lo > 0.0) || !(self.hi >= self.lo) || !self.hi.is_finite() {
            return Err(RunError::Usage(format!(
                "grid needs 0 < lo <= hi and n >= 1 (got {}..{} x {})",
                self.lo, self.hi, self.n
            )));
        }
        if self.n == 1 {
            return Ok(vec![self.lo]);
        }
        let last = (self.n - 1) as f64;
        Ok((0..self.n)
            .map(|i| {
                let s = i as f64 / last;
                if self.log {
                    (self.lo.ln() + s * (self.hi.ln() - self.lo.ln())).exp()
                } else {
                    self.lo + s * (self.hi - self.lo)
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub ell: Axis,
    /// Target modulus as a multiple of the maximal collar modulus.
    pub ratio: Axis,
    pub p: f64,
}

struct Point {
    alpha: f64,
    energy: f64,
    upper: f64,
    residual: f64,
}

fn eval(ell: f64, k: f64, p: f64) -> CoreResult<(GrotzschProblem, Point)> {
    let c = maximal_collar(ell)?;
    let m_omega = k * c.modulus();
    let pr = GrotzschProblem::from_collar(&c, m_omega, p)?;
    let upper = upper_bound_p1(ell, c.modulus(), m_omega).value;
    let pt = if p == 1.0 {
        let s = solve_alpha_p1(&pr)?;
        Point { alpha: s.alpha_ell, energy: s.energy, upper, residual: s.boundary_residual }
    } else {
        let s = solve_general(&pr)?;
        Point { alpha: s.alpha, energy: s.energy, upper, residual: s.boundary_residual }
    };
    Ok((pr, pt))
}

/// Evaluates every grid point, in parallel, and returns rows in grid order
/// (`ℓ` outer, ratio inner). Failed points keep their row with empty
/// values and the error in `status`.
pub fn sweep(spec: &SweepSpec) -> Result<Table> {
    let ells = spec.ell.points()?;
    let ratios = spec.ratio.points()?;
    if !(spec.p >= 1.0) {
        return Err(RunError::Usage(format!("p must be at least 1 (got {})", spec.p)));
    }
    let n = ells.len() * ratios.len();
    let rows: Vec<Vec<Cell>> = (0..n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / ratios.len(), idx % ratios.len());
            let (ell, k) = (ells[i], ratios[j]);
            let head = vec![Cell::from(i), Cell::from(j), ell.into(), k.into()];
            let tail = match eval(ell, k, spec.p) {
                Ok((pr, pt)) => vec![
                    pr.theta().into(),
                    pr.target_modulus().into(),
                    pt.alpha.into(),
                    pt.energy.into(),
                    pr.area().into(),
                    if spec.p == 1.0 { pt.upper.into() } else { Cell::Empty },
                    pt.residual.into(),
                    "ok".into(),
                ],
                Err(e) => {
                    let mut v = vec![Cell::Empty; 7];
                    v.push(Cell::Text(e.to_string()));
                    v
                }
            };
            head.into_iter().chain(tail).collect()
        })
        .collect();
    let mut t = Table::new("sweep: extremal energies over the maximal collar")
        .note(format!("p = {}; rows in grid order, ell outer, ratio inner", spec.p))
        .note("modulus convention log(b/a); lengths and areas in hyperbolic units")
        .column("i", "ell index")
        .column("j", "ratio index")
        .column("ell", "core geodesic length")
        .column("ratio", "target modulus / maximal collar modulus")
        .column("theta", "half the scaled collar width, radians")
        .column("m_omega", "target modulus")
        .column("alpha", "multiplier (alpha_ell when p = 1)")
        .column("energy", "minimal energy")
        .column("area", "collar area 2 ell sinh(delta)")
        .column("upper", "energy of the linear stretch (p = 1 only)")
        .column("boundary_residual", "u(T) - b")
        .column("status", "ok or the solver error");
    for r in rows {
        t.push(r);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axes() {
        let a = Axis { lo: 1.0, hi: 100.0, n: 3, log: true }.points().unwrap();
        assert!((a[1] - 10.0).abs() < 1e-12);
        assert_eq!(Axis { lo: 2.0, hi: 4.0, n: 1, log: false }.points().unwrap(), vec![2.0]);
        assert!(Axis { lo: -1.0, hi: 4.0, n: 3, log: false }.points().is_err());
        assert!(Axis { lo: 1.0, hi: 4.0, n: 0, log: false }.points().is_err());
    }

    #[test]
    fn grid_order_and_identity_column() {
        let spec = SweepSpec {
            ell: Axis { lo: 0.1, hi: 1.0, n: 4, log: true },
            ratio: Axis { lo: 0.5, hi: 1.5, n: 3, log: false },
            p: 1.0,
        };
        let t = sweep(&spec).unwrap();
        assert_eq!(t.len(), 12);
        let i = t.values("i").unwrap();
        let j = t.values("j").unwrap();
        for (row, (a, b)) in i.iter().zip(&j).enumerate() {
            assert_eq!(*a as usize * 3 + *b as usize, row);
        }
        let (e, area, up) = (t.values("energy").unwrap(), t.values("area").unwrap(), t.values("upper").unwrap());
        for row in 0..12 {
            assert!(e[row] <= up[row] * (1.0 + 1e-12));
            if row % 3 == 1 {
                assert!((e[row] / area[row] - 1.0).abs() < 1e-9);
            }
        }
        assert_eq!(t.to_csv(), sweep(&spec).unwrap().to_csv());
    }
}
