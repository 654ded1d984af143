use super::filter::{filter_step, news_update, FilterState};
use super::probability::{default_prob_t, default_prob_u};
use super::setup::MertonSetup;
use crate::error::Result;
use crate::grid::{aligned_grid, TIME_EPS};
use crate::par::{map_paths, path_rng, Execution};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FilterRow {
    pub t: f64,
    pub xhat: f64,
    #[serde(rename = "Sigma")]
    pub sigma: f64,
    #[serde(rename = "pT")]
    pub p_t: f64,
    /// Undefined before the news time.
    #[serde(rename = "pU")]
    pub p_u: Option<f64>,
}

/// One synthetic scenario: the true drift, the news reading, and the filter
/// with both default probabilities on a grid over `[0, U)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterRun {
    pub x_true: f64,
    pub yprime: f64,
    pub rows: Vec<FilterRow>,
}

/// Draws the drift from its prior, simulates the observation `dY = X dt +
/// σ dW` with firm value `V_t = v0 exp(Y_t − σ²t/2)`, and runs the filter
/// with the news update at `S`. `S` and `T` are grid nodes.
pub fn run_filter(setup: &MertonSetup, step: f64, seed: u64) -> Result<FilterRun> {
    run_filter_with(setup, step, &mut path_rng(seed, 0))
}

/// [`run_filter`] drawing from `rng`.
pub fn run_filter_with<R: Rng + ?Sized>(
    setup: &MertonSetup,
    step: f64,
    rng: &mut R,
) -> Result<FilterRun> {
    setup.validate()?;
    let z: f64 = rng.sample(StandardNormal);
    let x_true = setup.mu_x + setup.var_x.sqrt() * z;
    let xi: f64 = rng.sample(StandardNormal);
    let yprime = if setup.sigma_eta.is_finite() {
        x_true + setup.sigma_eta * xi
    } else {
        0.0
    };

    let times = aligned_grid(setup.u_pay, step, &[setup.news_time, setup.t_pay])?;
    let s2 = setup.sigma * setup.sigma;
    let mut state = FilterState::prior(setup);
    let mut y = 0.0;
    let mut v_at_t_pay = None;
    let mut rows = Vec::with_capacity(times.len());
    for (k, &t) in times.iter().enumerate() {
        if k > 0 {
            let dt = t - times[k - 1];
            let dw: f64 = rng.sample::<f64, _>(StandardNormal) * dt.sqrt();
            let dy = x_true * dt + setup.sigma * dw;
            state = filter_step(&state, dy, dt, setup)?;
            state.t = t;
            y += dy;
        }
        if (t - setup.news_time).abs() <= TIME_EPS {
            state = news_update(&state, yprime, setup)?;
        }
        let v = setup.v0 * (y - 0.5 * s2 * t).exp();
        if (t - setup.t_pay).abs() <= TIME_EPS {
            v_at_t_pay = Some(v);
        }
        if t >= setup.u_pay - TIME_EPS {
            break;
        }
        let p_t = match v_at_t_pay {
            Some(vt) => f64::from(u8::from(vt < setup.k)),
            None => default_prob_t(&state, v, setup)?,
        };
        let p_u = if t >= setup.news_time - TIME_EPS {
            let survived = v_at_t_pay.is_none_or(|vt| vt >= setup.k);
            let st = FilterState {
                t: t.max(setup.news_time),
                ..state
            };
            Some(default_prob_u(&st, v, survived, setup)?)
        } else {
            None
        };
        rows.push(FilterRow {
            t,
            xhat: state.xhat,
            sigma: state.sigma,
            p_t,
            p_u,
        });
    }
    Ok(FilterRun {
        x_true,
        yprime,
        rows,
    })
}

impl FilterRun {
    /// CSV with columns `t,xhat,Sigma,pT,pU`; `pU` is empty before the news.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,xhat,Sigma,pT,pU\n");
        for r in &self.rows {
            let _ = write!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},",
                r.t, r.xhat, r.sigma, r.p_t
            );
            if let Some(p) = r.p_u {
                let _ = write!(out, "{p:.16e}");
            }
            out.push('\n');
        }
        out
    }
}

/// Two-sided 97.5% standard normal quantile.
const Z_975: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageRow {
    pub path_id: usize,
    pub x_true: f64,
    pub xhat: f64,
    #[serde(rename = "Sigma")]
    pub sigma: f64,
    pub covered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub n: usize,
    pub rate: f64,
    pub rows: Vec<CoverageRow>,
}

impl CoverageReport {
    /// CSV with columns `path_id,x_true,xhat,Sigma,covered`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("path_id,x_true,xhat,Sigma,covered\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{}",
                r.path_id,
                r.x_true,
                r.xhat,
                r.sigma,
                u8::from(r.covered)
            );
        }
        out
    }
}

/// Runs `n` independent scenarios (scenario `i` from `path_rng(seed, i)`)
/// and records whether the central 95% interval of the last filter state
/// contains the true drift.
pub fn filter_coverage(
    setup: &MertonSetup,
    step: f64,
    n: usize,
    seed: u64,
    exec: Execution,
) -> Result<CoverageReport> {
    if n == 0 {
        return Err(crate::error::invalid(
            "coverage needs at least one scenario",
        ));
    }
    let rows = map_paths(exec, n, |i| -> Result<CoverageRow> {
        let run = run_filter_with(setup, step, &mut path_rng(seed, i))?;
        let last = run.rows.last().expect("grid has a node before U");
        Ok(CoverageRow {
            path_id: i as usize,
            x_true: run.x_true,
            xhat: last.xhat,
            sigma: last.sigma,
            covered: (run.x_true - last.xhat).abs() <= Z_975 * last.sigma.sqrt(),
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let rate = rows.iter().filter(|r| r.covered).count() as f64 / n as f64;
    Ok(CoverageReport { n, rate, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::merton::filter::variance_path;
    use crate::merton::setup::example;

    #[test]
    fn deterministic_given_seed() {
        let s = example();
        let a = run_filter(&s, 0.01, 11).unwrap();
        let b = run_filter(&s, 0.01, 11).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_ne!(a.to_csv(), run_filter(&s, 0.01, 12).unwrap().to_csv());
    }

    #[test]
    fn variance_column_follows_the_deterministic_path() {
        let s = example();
        let run = run_filter(&s, 0.01, 1).unwrap();
        for r in &run.rows {
            assert!((r.sigma - variance_path(&s, r.t)).abs() < 1e-12, "{}", r.t);
            assert!((0.0..=1.0).contains(&r.p_t));
            assert_eq!(r.p_u.is_some(), r.t >= s.news_time - 1e-12);
        }
    }

    #[test]
    fn perfect_news_pins_estimate() {
        let s = MertonSetup {
            sigma_eta: 0.0,
            ..example()
        };
        let run = run_filter(&s, 0.01, 5).unwrap();
        for r in run.rows.iter().filter(|r| r.t >= s.news_time) {
            assert_eq!(r.xhat, run.x_true);
        }
    }
}
