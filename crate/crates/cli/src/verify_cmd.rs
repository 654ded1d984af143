use crate::affine_cmd::AffineConfig;
use crate::output::{emit, json, num};
use crate::{Failure, Format, RunConfig};
use anyhow::{anyhow, Context};
use riskytime::affine::riccati_solve;
use riskytime::merton::{merton_forward_coeffs, KnownDriftMerton};
use riskytime::model::{ScenarioDocument, ShortRate};
use riskytime::noarb::{
    affine_martingale_test, all_pass, g_jump_check, surface_coefficients, verify_general_drift,
    verify_merton_drift, AffineDriftModel, DriftReport,
};
use riskytime::par::Execution;
use riskytime::Error;
use serde::Deserialize;
use serde_json::Value;

const SCENARIO_TOL: f64 = 1e-8;
const AFFINE_TOL: f64 = 1e-5;
const MERTON_TOL: f64 = 1e-12;
const DEFAULT_STEP: f64 = 1e-3;
const DEFAULT_PATHS: usize = 10_000;
/// Upper bound on grid points per axis of the residual grid.
const MAX_AXIS: usize = 41;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MertonVerifyConfig {
    merton: KnownDriftMerton,
}

/// Picks the config kind from its keys: a scenario document (`time_grid`),
/// a known-drift Merton model (`merton`), or an affine config.
pub fn run(cfg: &RunConfig) -> Result<(), Failure> {
    let text = cfg.read_config()?;
    let value: Value = serde_json::from_str(&text).context("parsing verify config")?;
    let obj = value
        .as_object()
        .ok_or_else(|| anyhow!("verify config must be a JSON object"))?;
    let reports = if obj.contains_key("time_grid") {
        verify_scenario(cfg, &text)?
    } else if obj.contains_key("merton") {
        let conf: MertonVerifyConfig = serde_json::from_value(value).context("merton config")?;
        verify_known_merton(cfg, &conf.merton)?
    } else {
        let conf: AffineConfig = serde_json::from_value(value).context("affine config")?;
        verify_affine(cfg, &conf)?
    };
    let out = match cfg.format {
        Format::Json => json(&reports),
        Format::Csv => {
            let mut s = String::from("condition,max_residual,t,T,pass,tol\n");
            for r in &reports {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.condition,
                    num(r.max_residual),
                    num(r.argmax.t),
                    num(r.argmax.maturity),
                    r.pass,
                    num(r.tol)
                ));
            }
            s
        }
    };
    emit(cfg.out.as_deref(), &out)?;
    if all_pass(&reports) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

/// At most `MAX_AXIS` evenly spread entries of a sorted axis, endpoints kept.
fn thin(axis: &[f64]) -> Vec<f64> {
    if axis.len() <= MAX_AXIS {
        return axis.to_vec();
    }
    (0..MAX_AXIS)
        .map(|j| axis[j * (axis.len() - 1) / (MAX_AXIS - 1)])
        .collect()
}

fn verify_scenario(cfg: &RunConfig, text: &str) -> anyhow::Result<Vec<DriftReport>> {
    let tol = cfg.tol.unwrap_or(SCENARIO_TOL);
    let doc = ScenarioDocument::from_json(text)?;
    let surface = doc.surface()?;
    let spec = doc.compensator()?;
    let rate = doc.short_rate()?;
    let coef = surface_coefficients(&surface);

    let times = thin(surface.time_grid());
    let mut mats = thin(surface.maturity_grid());
    mats.extend(surface.schedule().times());
    mats.sort_by(f64::total_cmp);
    mats.dedup();
    let mut grid = Vec::new();
    for &t in &times {
        for &m in mats.iter().filter(|&&m| m >= t) {
            grid.push((t, m));
        }
    }
    let f_diag = |t: f64| surface.forward(t, t).unwrap_or(f64::NAN);
    let mut reports = verify_general_drift(&coef, &spec, &rate, &f_diag, &grid, tol)?;

    let horizon = surface.horizon();
    let mut jump = DriftReport::new("g_jump", tol);
    let mut checked = false;
    if surface.time_grid().len() >= 3 {
        for (i, e) in surface.schedule().entries().iter().enumerate() {
            let announced = e.announce_time().is_some_and(|s| s < e.time());
            if !announced || e.time() >= horizon {
                continue;
            }
            checked = true;
            match g_jump_check(&surface, i, horizon, tol) {
                Ok(res) => jump.record(res, e.time(), horizon),
                // gaps this large already exceed tol
                Err(Error::PremiumDiscontinuity { u, jump: gap }) => jump.record(gap, u, horizon),
                Err(err) => return Err(err.into()),
            }
        }
    }
    if checked {
        reports.push(jump);
    }
    Ok(reports)
}

fn verify_affine(cfg: &RunConfig, conf: &AffineConfig) -> anyhow::Result<Vec<DriftReport>> {
    let tol = cfg.tol.unwrap_or(AFFINE_TOL);
    let step = cfg.step.unwrap_or(DEFAULT_STEP);
    let model = conf.model()?;
    let drift = AffineDriftModel::new(
        &model.params,
        &model.loadings,
        &model.dates,
        conf.x0.clone(),
        step,
        &conf.maturities,
    )?;
    let mut grid = Vec::new();
    for &m in &conf.maturities {
        for k in 0..8 {
            grid.push((k as f64 * m / 8.0, m));
        }
    }
    let longest = conf.maturities.iter().copied().fold(0.0, f64::max);
    let hazard = |t: f64| drift.hazard(t);
    let mut reports = verify_merton_drift(
        &drift,
        &hazard,
        &drift.gammas(),
        &ShortRate::zero(longest),
        &grid,
        tol,
    )?;
    if let Some(seed) = cfg.seed {
        let sol = riccati_solve(&model.params, &model.loadings, &model.dates, longest, step)?;
        let t_grid: Vec<f64> = (1..4).map(|k| k as f64 * longest / 4.0).collect();
        let mc = affine_martingale_test(
            &model.params,
            &model.loadings,
            &model.dates,
            &sol,
            &conf.x0,
            &t_grid,
            cfg.paths.unwrap_or(DEFAULT_PATHS),
            step,
            seed,
            Execution::default(),
        )?;
        reports.push(mc.summary());
    }
    Ok(reports)
}

/// Checks `a(t,U) = ½ b(t,U)²` for the atom forward on a grid of firm
/// values around `K` and times before `U`.
fn verify_known_merton(cfg: &RunConfig, m: &KnownDriftMerton) -> anyhow::Result<Vec<DriftReport>> {
    let tol = cfg.tol.unwrap_or(MERTON_TOL);
    if !(m.u > 0.0 && m.u.is_finite()) {
        return Err(anyhow!("U must be positive"));
    }
    let mut report = DriftReport::new("dcm2", tol);
    for i in 0..20 {
        let t = i as f64 * m.u / 20.0;
        let scale = (m.u - t).sqrt();
        for j in 0..=20 {
            let w = m.k + (j as f64 - 10.0) * 0.3 * scale;
            let c = merton_forward_coeffs(w, t, m.u, m.k)?;
            report.record(c.a - 0.5 * c.b * c.b, t, m.u);
        }
    }
    Ok(vec![report])
}
