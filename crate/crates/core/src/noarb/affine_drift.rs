use super::merton::MertonDrift;
use crate::affine::{
    riccati_solve, riccati_solve_from, AffineParams, CompensatorLoadings, RiccatiSolution,
    RiskyDates,
};
use crate::error::{Error, Result};
use crate::grid::TIME_EPS;

/// Forward-rate coefficients of the affine model frozen at a state `x`,
/// recovered from numerical Riccati solutions.
///
/// `ā(t,T) = ∂_t⁺A + φ_0(t) + (∂_t⁺B + ψ_0(t))ᵀx + Bᵀμ(x)` and
/// `b̄(t,T) = σ(x)ᵀB`, with the right derivatives taken by one-sided finite
/// differences of the stored solutions.
pub struct AffineDriftModel<'a> {
    params: &'a AffineParams,
    loadings: &'a CompensatorLoadings,
    dates: &'a RiskyDates,
    state: Vec<f64>,
    step: f64,
    solutions: Vec<RiccatiSolution>,
}

impl<'a> AffineDriftModel<'a> {
    /// Solves the Riccati system once for each of `maturities`.
    pub fn new(
        params: &'a AffineParams,
        loadings: &'a CompensatorLoadings,
        dates: &'a RiskyDates,
        state: Vec<f64>,
        step: f64,
        maturities: &[f64],
    ) -> Result<Self> {
        if !params.in_state_space(&state) {
            return Err(Error::StateOutsideDomain(state));
        }
        let mut ms = maturities.to_vec();
        ms.sort_by(f64::total_cmp);
        ms.dedup();
        let solutions = ms
            .iter()
            .map(|&m| riccati_solve(params, loadings, dates, m, step))
            .collect::<Result<_>>()?;
        Ok(Self {
            params,
            loadings,
            dates,
            state,
            step,
            solutions,
        })
    }

    /// `φ_0(t) + ψ_0(t)ᵀx`.
    pub fn hazard(&self, t: f64) -> f64 {
        self.loadings.hazard(t, &self.state)
    }

    /// `Γ_i = 1 − exp(−φ_i − ψ_iᵀx)` at every risky date.
    pub fn gammas(&self) -> Vec<f64> {
        (0..self.dates.len())
            .map(|i| -(-self.loadings.atom_exponent(i, &self.state)).exp_m1())
            .collect()
    }

    fn solution(&self, maturity: f64) -> Result<std::borrow::Cow<'_, RiccatiSolution>> {
        match self
            .solutions
            .iter()
            .find(|s| (s.maturity() - maturity).abs() <= TIME_EPS)
        {
            Some(s) => Ok(std::borrow::Cow::Borrowed(s)),
            None => Ok(std::borrow::Cow::Owned(riccati_solve(
                self.params,
                self.loadings,
                self.dates,
                maturity,
                self.step,
            )?)),
        }
    }

    fn next_date_after(&self, t: f64) -> f64 {
        self.dates
            .as_slice()
            .iter()
            .copied()
            .find(|&u| u > t + TIME_EPS)
            .unwrap_or(f64::INFINITY)
    }

    fn exponent(&self, a: f64, b: &[f64]) -> f64 {
        a + b.iter().zip(&self.state).map(|(bk, x)| bk * x).sum::<f64>()
    }
}

impl MertonDrift for AffineDriftModel<'_> {
    fn bar(&self, t: f64, maturity: f64) -> Result<(f64, Vec<f64>)> {
        if maturity < t {
            return Err(Error::MaturityBeforeTime { t, maturity });
        }
        let d = self.params.dim();
        if maturity - t <= TIME_EPS {
            return Ok((0.0, vec![0.0; d]));
        }
        let sol = self.solution(maturity)?;
        let reach = (self.next_date_after(t).min(maturity) - t) / 2.0;
        let delta = self.step.min(reach);
        let (a0, b0) = sol.eval(t)?;
        let (a1, b1) = sol.eval_left(t + delta)?;
        let (a2, b2) = sol.eval_left(t + 2.0 * delta)?;
        let fd = |y0: f64, y1: f64, y2: f64| (-3.0 * y0 + 4.0 * y1 - y2) / (2.0 * delta);
        let x = &self.state;
        let mu = self.params.drift(x);
        let mut abar = fd(a0, a1, a2) + self.loadings.phi0.eval(t);
        for k in 0..d {
            let db = fd(b0[k], b1[k], b2[k]);
            abar += (db + self.loadings.psi0[k].eval(t)) * x[k] + b0[k] * mu[k];
        }
        let sigma = self.params.diffusion(x);
        let bbar = (0..d)
            .map(|l| (0..d).map(|k| b0[k] * sigma[(k, l)]).sum())
            .collect();
        Ok((abar, bbar))
    }

    /// Limit of `(A(t,t+ε) + B(t,t+ε)ᵀx)/ε` as `ε ↓ 0`, by two rounds of
    /// Richardson extrapolation over windows that stop short of the next
    /// risky date.
    fn short_end(&self, t: f64) -> Result<f64> {
        let eps = (10.0 * self.step).min(0.5 * (self.next_date_after(t) - t));
        let ratio = |e: f64| -> Result<f64> {
            let sol = riccati_solve_from(
                self.params,
                self.loadings,
                self.dates,
                t,
                t + e,
                (e / 16.0).min(self.step),
            )?;
            let (a, b) = sol.eval(t)?;
            Ok(self.exponent(a, &b) / e)
        };
        let (f1, f2, f4) = (ratio(eps)?, ratio(eps / 2.0)?, ratio(eps / 4.0)?);
        let (r1, r2) = (2.0 * f2 - f1, 2.0 * f4 - f2);
        Ok((4.0 * r2 - r1) / 3.0)
    }

    /// `A(u_i−, u_i) + B(u_i−, u_i)ᵀx`, the jump of the exponent at `u_i`.
    fn atom_short_end(&self, i: usize) -> Result<f64> {
        let u = self.dates.as_slice()[i];
        let start = (u - self.step).max(0.0);
        let sol = riccati_solve_from(self.params, self.loadings, self.dates, start, u, self.step)?;
        let (a, b) = sol.eval_left(u)?;
        Ok(self.exponent(a, &b))
    }

    fn risky_dates(&self) -> Vec<f64> {
        self.dates.as_slice().to_vec()
    }
}
