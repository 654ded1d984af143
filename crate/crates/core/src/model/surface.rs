use super::schedule::RiskySchedule;
use crate::error::{invalid, Error, Result};
use crate::grid::{check_strictly_increasing, locate, PiecewiseLinear, TIME_EPS};

/// Forward curves `f(t, ·)` on a time × maturity grid plus atom premiums
/// `g(t, u_i)` for every risky time in the schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardSurface {
    time_grid: Vec<f64>,
    maturity_grid: Vec<f64>,
    // row-major, time × maturity
    f_values: Vec<f64>,
    // one column over the time grid per schedule entry
    g_atoms: Vec<Vec<f64>>,
    schedule: RiskySchedule,
}

impl ForwardSurface {
    pub fn new(
        time_grid: Vec<f64>,
        maturity_grid: Vec<f64>,
        f_values: Vec<f64>,
        g_atoms: Vec<Vec<f64>>,
        schedule: RiskySchedule,
    ) -> Result<Self> {
        if time_grid.is_empty() || maturity_grid.len() < 2 {
            return Err(invalid(
                "forward surface needs a time node and two maturity nodes",
            ));
        }
        check_strictly_increasing(&time_grid, "time_grid")?;
        check_strictly_increasing(&maturity_grid, "maturity_grid")?;
        if f_values.len() != time_grid.len() * maturity_grid.len() {
            return Err(invalid(format!(
                "f has {} values, expected {} x {}",
                f_values.len(),
                time_grid.len(),
                maturity_grid.len()
            )));
        }
        if f_values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("f must be finite on the grid"));
        }
        if g_atoms.len() != schedule.len() {
            return Err(invalid(format!(
                "{} atom premium columns for {} risky times",
                g_atoms.len(),
                schedule.len()
            )));
        }
        for (col, entry) in g_atoms.iter().zip(schedule.entries()) {
            if col.len() != time_grid.len() {
                return Err(invalid(format!(
                    "atom premium column at u = {} has {} values, expected {}",
                    entry.time(),
                    col.len(),
                    time_grid.len()
                )));
            }
            if col.iter().any(|v| !v.is_finite()) {
                return Err(Error::MissingAtomPremium(entry.time()));
            }
        }
        Ok(Self {
            time_grid,
            maturity_grid,
            f_values,
            g_atoms,
            schedule,
        })
    }

    /// Surface that does not move in `t`: `f(t, u) = curve(u)` and
    /// `g(t, u_i) = premiums[i]`.
    pub fn static_curve(
        time_grid: Vec<f64>,
        curve: &PiecewiseLinear,
        premiums: &[f64],
        schedule: RiskySchedule,
    ) -> Result<Self> {
        let nt = time_grid.len();
        let maturity_grid = curve.knots().to_vec();
        let f_values = (0..nt)
            .flat_map(|_| curve.values().iter().copied())
            .collect();
        let g_atoms = premiums.iter().map(|&g| vec![g; nt]).collect();
        Self::new(time_grid, maturity_grid, f_values, g_atoms, schedule)
    }

    pub fn time_grid(&self) -> &[f64] {
        &self.time_grid
    }

    pub fn maturity_grid(&self) -> &[f64] {
        &self.maturity_grid
    }

    pub fn schedule(&self) -> &RiskySchedule {
        &self.schedule
    }

    pub fn f_row(&self, k: usize) -> &[f64] {
        let m = self.maturity_grid.len();
        &self.f_values[k * m..(k + 1) * m]
    }

    pub fn g_column(&self, i: usize) -> &[f64] {
        &self.g_atoms[i]
    }

    /// Horizon `T*`, the last maturity node.
    pub fn horizon(&self) -> f64 {
        *self.maturity_grid.last().unwrap()
    }

    fn check_time(&self, t: f64) -> Result<()> {
        let lo = self.time_grid[0];
        let hi = *self.time_grid.last().unwrap();
        if t.is_nan() || t < lo - TIME_EPS || t > hi + TIME_EPS {
            return Err(Error::OutOfRange {
                what: "t",
                value: t,
                lo,
                hi,
            });
        }
        Ok(())
    }

    fn check_maturity(&self, t: f64, maturity: f64) -> Result<()> {
        let lo = self.maturity_grid[0];
        let hi = self.horizon();
        if maturity.is_nan() || maturity < lo - TIME_EPS || maturity > hi + TIME_EPS {
            return Err(Error::OutOfRange {
                what: "T",
                value: maturity,
                lo,
                hi,
            });
        }
        if maturity < t {
            return Err(Error::MaturityBeforeTime { t, maturity });
        }
        Ok(())
    }

    /// Forward curve `f(t, ·)` on the maturity grid, linear in `t` between
    /// time nodes.
    pub fn curve_at(&self, t: f64) -> Result<PiecewiseLinear> {
        self.check_time(t)?;
        let (k, w) = locate(&self.time_grid, t);
        let row = if w == 0.0 {
            self.f_row(k).to_vec()
        } else {
            let (a, b) = (self.f_row(k), self.f_row(k + 1));
            a.iter()
                .zip(b)
                .map(|(x, y)| (1.0 - w) * x + w * y)
                .collect()
        };
        PiecewiseLinear::new(self.maturity_grid.clone(), row)
    }

    /// `f(t, u)`, bilinear on the grid.
    pub fn forward(&self, t: f64, u: f64) -> Result<f64> {
        Ok(self.curve_at(t)?.eval(u))
    }

    /// `g(t, u_i)` for schedule entry `i`, linear in `t`.
    pub fn premium(&self, t: f64, i: usize) -> Result<f64> {
        self.check_time(t)?;
        let col = &self.g_atoms[i];
        let (k, w) = locate(&self.time_grid, t);
        Ok(if w == 0.0 {
            col[k]
        } else {
            (1.0 - w) * col[k] + w * col[k + 1]
        })
    }

    /// Log of the atom factor: `Σ g(t, u_i)` over announced atoms with
    /// `t < u_i <= maturity` (or `< maturity` when `include_end` is false).
    fn atom_sum(&self, t: f64, maturity: f64, include_end: bool) -> Result<f64> {
        let mut sum = 0.0;
        for i in self.schedule.in_window(t, maturity) {
            let entry = &self.schedule[i];
            if !include_end && entry.time() == maturity {
                continue;
            }
            if entry.is_announced_by(t) {
                sum += self.premium(t, i)?;
            }
        }
        Ok(sum)
    }

    /// Defaultable zero-coupon price with zero recovery,
    /// `1{τ > t} exp(−∫_t^T f(t,u) du − Σ_{u_i ∈ (t,T]} g(t,u_i))`.
    ///
    /// Only atoms announced by `t` contribute; unannounced risky times carry
    /// no premium yet.
    pub fn bond_price(&self, t: f64, maturity: f64, defaulted: bool) -> Result<f64> {
        self.check_time(t)?;
        self.check_maturity(t, maturity)?;
        if defaulted {
            return Ok(0.0);
        }
        let continuous = self.curve_at(t)?.integral(t, maturity);
        let atoms = self.atom_sum(t, maturity, true)?;
        Ok((-continuous - atoms).exp())
    }

    /// Left limit `P(t, T−)`: the same price with any atom at exactly `T`
    /// excluded.
    pub fn bond_price_left(&self, t: f64, maturity: f64, defaulted: bool) -> Result<f64> {
        self.check_time(t)?;
        self.check_maturity(t, maturity)?;
        if defaulted {
            return Ok(0.0);
        }
        let continuous = self.curve_at(t)?.integral(t, maturity);
        let atoms = self.atom_sum(t, maturity, false)?;
        Ok((-continuous - atoms).exp())
    }
}
