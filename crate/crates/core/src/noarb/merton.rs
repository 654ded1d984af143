use super::hjm::{ScalarField, VectorField};
use super::report::DriftReport;
use crate::error::{invalid, Result};
use crate::model::{CompensatorSpec, ShortRate};
use crate::par::{map_paths, Execution};

/// Forward-rate dynamics of a model whose bond prices integrate `f(t,·)`
/// against `du + Σ δ_{u_i}(du)`.
pub trait MertonDrift: Sync {
    /// `(ā(t,T), b̄(t,T))`, integrals of the drift and volatility of `f(t,·)`
    /// over `(t, T]` including the risky dates.
    fn bar(&self, t: f64, maturity: f64) -> Result<(f64, Vec<f64>)>;

    /// Continuous short end `f(t,t)`.
    fn short_end(&self, t: f64) -> Result<f64>;

    /// Atom forward `f(u_i, u_i)` at risky date `i`.
    fn atom_short_end(&self, i: usize) -> Result<f64>;

    fn risky_dates(&self) -> Vec<f64>;
}

/// Closure-backed [`MertonDrift`]: continuous coefficients `a(t,u)`,
/// `b(t,u)` integrated by the trapezoid rule, plus atom coefficients
/// evaluated at each risky date.
pub struct MertonCoefficients<'a> {
    pub dim: usize,
    pub a: ScalarField<'a>,
    pub b: VectorField<'a>,
    /// `a(t, u_i)` for risky date index `i`.
    pub atom_a: Box<dyn Fn(usize, f64) -> f64 + Sync + Send + 'a>,
    pub atom_b: Box<dyn Fn(usize, f64) -> Vec<f64> + Sync + Send + 'a>,
    pub short_end: Box<dyn Fn(f64) -> f64 + Sync + Send + 'a>,
    pub atom_short_end: Box<dyn Fn(usize) -> f64 + Sync + Send + 'a>,
    pub dates: Vec<f64>,
    pub panels: usize,
}

impl<'a> MertonCoefficients<'a> {
    pub fn zero(dim: usize, dates: Vec<f64>) -> Self {
        Self {
            dim,
            a: Box::new(|_, _| 0.0),
            b: Box::new(move |_, _| vec![0.0; dim]),
            atom_a: Box::new(|_, _| 0.0),
            atom_b: Box::new(move |_, _| vec![0.0; dim]),
            short_end: Box::new(|_| 0.0),
            atom_short_end: Box::new(|_| 0.0),
            dates,
            panels: 512,
        }
    }
}

impl MertonDrift for MertonCoefficients<'_> {
    fn bar(&self, t: f64, maturity: f64) -> Result<(f64, Vec<f64>)> {
        if maturity < t {
            return Err(crate::Error::MaturityBeforeTime { t, maturity });
        }
        let n = self.panels.max(1);
        let h = (maturity - t) / n as f64;
        let mut abar = 0.0;
        let mut bbar = vec![0.0; self.dim];
        if h > 0.0 {
            for j in 0..=n {
                let u = if j == n { maturity } else { t + j as f64 * h };
                let w = if j == 0 || j == n { 0.5 * h } else { h };
                abar += w * (self.a)(t, u);
                for (acc, v) in bbar.iter_mut().zip((self.b)(t, u)) {
                    *acc += w * v;
                }
            }
        }
        for (i, &u) in self.dates.iter().enumerate() {
            if u > t && u <= maturity {
                abar += (self.atom_a)(i, t);
                for (acc, v) in bbar.iter_mut().zip((self.atom_b)(i, t)) {
                    *acc += v;
                }
            }
        }
        Ok((abar, bbar))
    }

    fn short_end(&self, t: f64) -> Result<f64> {
        Ok((self.short_end)(t))
    }

    fn atom_short_end(&self, i: usize) -> Result<f64> {
        Ok((self.atom_short_end)(i))
    }

    fn risky_dates(&self) -> Vec<f64> {
        self.dates.clone()
    }
}

/// Checks the drift conditions of a generalized Merton model: the short end
/// `f(t,t) = r_t + h_t` at every grid time, `f(u_i,u_i) = −log(1 − Γ_i)` at
/// every risky date (together the pointwise form of
/// `∫_0^t f(s,s) μ(ds) = ∫_0^t r_s ds + H′(t)`), and `ā = ½‖b̄‖²` at every
/// grid pair.
pub fn verify_merton_drift(
    model: &dyn MertonDrift,
    hazard: &(dyn Fn(f64) -> f64 + Sync),
    gammas: &[f64],
    r: &ShortRate,
    grid: &[(f64, f64)],
    tol: f64,
) -> Result<Vec<DriftReport>> {
    let dates = model.risky_dates();
    if gammas.len() != dates.len() {
        return Err(invalid(format!(
            "{} default masses for {} risky dates",
            gammas.len(),
            dates.len()
        )));
    }
    let mut dcm1 = DriftReport::new("dcm1", tol);
    let mut times: Vec<f64> = grid.iter().map(|p| p.0).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let shorts = map_paths(Execution::default(), times.len(), |k| {
        model.short_end(times[k as usize])
    });
    for (&t, f) in times.iter().zip(shorts) {
        dcm1.record(f? - r.rate(t) - hazard(t), t, t);
    }
    for (i, (&u, &gamma)) in dates.iter().zip(gammas).enumerate() {
        dcm1.record(model.atom_short_end(i)? + (-gamma).ln_1p(), u, u);
    }

    let residuals = map_paths(Execution::default(), grid.len(), |k| {
        let (t, m) = grid[k as usize];
        let (abar, bbar) = model.bar(t, m)?;
        Ok(abar - 0.5 * bbar.iter().map(|b| b * b).sum::<f64>())
    });
    let mut dcm2 = DriftReport::new("dcm2", tol);
    for (k, res) in residuals.into_iter().enumerate() {
        let (t, m) = grid[k];
        dcm2.record(res?, t, m);
    }
    Ok(vec![dcm1, dcm2])
}

/// [`verify_merton_drift`] with hazard and default masses from a
/// deterministic compensator.
pub fn verify_merton_drift_with_spec(
    model: &dyn MertonDrift,
    spec: &CompensatorSpec,
    r: &ShortRate,
    grid: &[(f64, f64)],
    tol: f64,
) -> Result<Vec<DriftReport>> {
    let gammas: Vec<f64> = spec
        .schedule()
        .entries()
        .iter()
        .map(|e| e.gamma())
        .collect();
    let hazard = |t: f64| spec.hazard().eval(t);
    verify_merton_drift(model, &hazard, &gammas, r, grid, tol)
}
