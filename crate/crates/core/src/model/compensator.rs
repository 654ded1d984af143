use super::schedule::RiskySchedule;
use crate::error::{invalid, Error, Result};
use crate::grid::{PiecewiseLinear, TIME_EPS};

/// Default compensator `H^p_t = ∫_0^t h(s) ds + Σ_{u_i ≤ t} Γ_i`, evaluated
/// before default.
#[derive(Debug, Clone, PartialEq)]
pub struct CompensatorSpec {
    hazard: PiecewiseLinear,
    schedule: RiskySchedule,
}

impl CompensatorSpec {
    pub fn new(hazard: PiecewiseLinear, schedule: RiskySchedule) -> Result<Self> {
        if hazard.min_value() < 0.0 {
            let i = hazard.values().iter().position(|&v| v < 0.0).unwrap();
            return Err(Error::NegativeHazard {
                t: hazard.knots()[i],
                value: hazard.values()[i],
            });
        }
        if hazard.start() > 0.0 {
            return Err(invalid("hazard grid must start at 0"));
        }
        Ok(Self { hazard, schedule })
    }

    pub fn hazard(&self) -> &PiecewiseLinear {
        &self.hazard
    }

    pub fn schedule(&self) -> &RiskySchedule {
        &self.schedule
    }

    pub fn horizon(&self) -> f64 {
        self.hazard.end()
    }

    fn check(&self, t: f64) -> Result<()> {
        if t.is_nan() || t < -TIME_EPS || t > self.horizon() + TIME_EPS {
            return Err(Error::OutOfRange {
                what: "t",
                value: t,
                lo: 0.0,
                hi: self.horizon(),
            });
        }
        Ok(())
    }

    /// `∫_0^t h(s) ds`.
    pub fn integrated_hazard(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        Ok(self.hazard.integral(0.0, t))
    }

    /// `H^p_t`; non-decreasing and right-continuous, jumping by `Γ_i` at
    /// each risky time.
    pub fn compensator_path(&self, t: f64) -> Result<f64> {
        let cont = self.integrated_hazard(t)?;
        let atoms: f64 = self
            .schedule
            .up_to(t)
            .map(|i| self.schedule[i].gamma())
            .sum();
        Ok(cont + atoms)
    }

    /// `H′(t) = ∫_0^t h(s) ds − Σ_{u_i ≤ t} log(1 − Γ_i)`.
    pub fn h_prime(&self, t: f64) -> Result<f64> {
        let cont = self.integrated_hazard(t)?;
        let atoms: f64 = self
            .schedule
            .up_to(t)
            .map(|i| self.schedule[i].log_jump())
            .sum();
        Ok(cont + atoms)
    }
}

/// Short rate `r` on `[0, T*]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortRate {
    r: PiecewiseLinear,
}

impl ShortRate {
    pub fn new(r: PiecewiseLinear) -> Self {
        Self { r }
    }

    pub fn zero(horizon: f64) -> Self {
        Self {
            r: PiecewiseLinear::constant(0.0, 0.0, horizon).expect("valid constant"),
        }
    }

    pub fn curve(&self) -> &PiecewiseLinear {
        &self.r
    }

    pub fn rate(&self, t: f64) -> f64 {
        self.r.eval(t)
    }

    /// `log X⁰_t = ∫_0^t r_s ds`.
    pub fn log_numeraire(&self, t: f64) -> f64 {
        self.r.integral(0.0, t)
    }
}
