use super::report::DriftReport;
use crate::error::{Error, Result};
use crate::model::{CompensatorSpec, RiskySchedule, ShortRate};
use crate::par::{map_paths, Execution};

pub type ScalarField<'a> = Box<dyn Fn(f64, f64) -> f64 + Sync + Send + 'a>;
pub type VectorField<'a> = Box<dyn Fn(f64, f64) -> Vec<f64> + Sync + Send + 'a>;

/// One location of the news kernel `ν(t, du)` with its time-varying weight.
pub struct NuAtom<'a> {
    pub u: f64,
    pub weight: Box<dyn Fn(f64) -> f64 + Sync + Send + 'a>,
}

/// Drift and volatility of the continuous forwards `f` (`a`, `b`) and of the
/// atom premiums `g` (`alpha`, `beta`), the premiums themselves, and the
/// news kernel. Vector fields have `dim` components.
pub struct HjmCoefficients<'a> {
    pub dim: usize,
    pub a: ScalarField<'a>,
    pub b: VectorField<'a>,
    pub alpha: ScalarField<'a>,
    pub beta: VectorField<'a>,
    pub g: ScalarField<'a>,
    pub nu: Vec<NuAtom<'a>>,
    pub schedule: RiskySchedule,
    /// Trapezoid panels for the integrals over `[t, T]`.
    pub panels: usize,
}

impl<'a> HjmCoefficients<'a> {
    /// Every coefficient zero, no news kernel.
    pub fn zero(dim: usize, schedule: RiskySchedule) -> Self {
        Self {
            dim,
            a: Box::new(|_, _| 0.0),
            b: Box::new(move |_, _| vec![0.0; dim]),
            alpha: Box::new(|_, _| 0.0),
            beta: Box::new(move |_, _| vec![0.0; dim]),
            g: Box::new(|_, _| 0.0),
            nu: Vec::new(),
            schedule,
            panels: 512,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarIntegrals {
    pub abar: f64,
    pub bbar: Vec<f64>,
    pub alphabar: f64,
    pub betabar: Vec<f64>,
}

/// `ā, b̄` by the trapezoid rule over `[t, T]`, and `ᾱ, β̄` as sums over
/// the risky times in `(t, T]` already announced at `t`.
pub fn bar_integrals(coef: &HjmCoefficients, t: f64, maturity: f64) -> Result<BarIntegrals> {
    if maturity < t {
        return Err(Error::MaturityBeforeTime { t, maturity });
    }
    let d = coef.dim;
    let n = coef.panels.max(1);
    let h = (maturity - t) / n as f64;
    let mut abar = 0.0;
    let mut bbar = vec![0.0; d];
    if h > 0.0 {
        for j in 0..=n {
            let u = if j == n { maturity } else { t + j as f64 * h };
            let w = if j == 0 || j == n { 0.5 * h } else { h };
            abar += w * (coef.a)(t, u);
            for (acc, v) in bbar.iter_mut().zip((coef.b)(t, u)) {
                *acc += w * v;
            }
        }
    }
    let mut alphabar = 0.0;
    let mut betabar = vec![0.0; d];
    for i in coef.schedule.in_window(t, maturity) {
        let e = &coef.schedule[i];
        if !e.is_announced_by(t) {
            continue;
        }
        alphabar += (coef.alpha)(t, e.time());
        for (acc, v) in betabar.iter_mut().zip((coef.beta)(t, e.time())) {
            *acc += v;
        }
    }
    Ok(BarIntegrals {
        abar,
        bbar,
        alphabar,
        betabar,
    })
}

/// Checks both drift conditions of the extended HJM framework.
///
/// The first is checked in split form: `f(t,t) = r_t + h_t` at every grid
/// time, and `g(U_i,U_i) = −log(1 − Γ_i)` at every risky time. The second
/// compares `ā + ᾱ` with `½‖b̄ + β̄‖² + ∫_t^T (e^{−g(t,u)} − 1) ν(t,du)` at
/// every grid pair.
pub fn verify_general_drift(
    coef: &HjmCoefficients,
    spec: &CompensatorSpec,
    r: &ShortRate,
    f_diag: &(dyn Fn(f64) -> f64 + Sync),
    grid: &[(f64, f64)],
    tol: f64,
) -> Result<Vec<DriftReport>> {
    let mut dc1 = DriftReport::new("dc1", tol);
    let mut times: Vec<f64> = grid.iter().map(|p| p.0).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    for &t in &times {
        let h = spec.hazard().eval(t);
        dc1.record(f_diag(t) - r.rate(t) - h, t, t);
    }
    for e in spec.schedule().entries() {
        let u = e.time();
        let g = (coef.g)(u, u);
        if g.is_nan() {
            return Err(Error::MissingAtomPremium(u));
        }
        dc1.record(g - e.log_jump(), u, u);
    }

    let residuals = map_paths(Execution::default(), grid.len(), |k| {
        let (t, m) = grid[k as usize];
        let bars = bar_integrals(coef, t, m)?;
        let vol: f64 = bars
            .bbar
            .iter()
            .zip(&bars.betabar)
            .map(|(b, beta)| (b + beta) * (b + beta))
            .sum();
        let news: f64 = coef
            .nu
            .iter()
            .filter(|n| n.u > t && n.u <= m)
            .map(|n| ((-(coef.g)(t, n.u)).exp() - 1.0) * (n.weight)(t))
            .sum();
        Ok(bars.abar + bars.alphabar - 0.5 * vol - news)
    });
    let mut dc2 = DriftReport::new("dc2", tol);
    for (k, res) in residuals.into_iter().enumerate() {
        let (t, m) = grid[k];
        dc2.record(res?, t, m);
    }
    Ok(vec![dc1, dc2])
}
