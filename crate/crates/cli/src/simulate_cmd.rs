use crate::output::{emit, json, num};
use crate::{Failure, Format, RunConfig};
use anyhow::{anyhow, Context};
use riskytime::default_sim::{
    announced_scenario, azema_path_with, samples_to_csv, simulate_tau_ensemble, AzemaConfig,
    DelayLaw, HazardPath,
};
use riskytime::par::{map_paths, path_rng, Execution};
use serde::Deserialize;
use serde_json::Value;

pub const DEFAULT_PATHS: usize = 10_000;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnnouncedConfig {
    rate: f64,
    delay: DelayLaw,
    horizon: f64,
}

/// Dispatches on the top-level key of the config: a hazard scenario
/// (`lambda`), `{"azema": {..}}` or `{"announced": {..}}`.
pub fn run(cfg: &RunConfig) -> Result<(), Failure> {
    let text = cfg.read_config()?;
    let seed = cfg.require_seed()?;
    let value: Value = serde_json::from_str(&text).context("parsing simulate config")?;
    let obj = value
        .as_object()
        .ok_or_else(|| anyhow!("simulate config must be a JSON object"))?;
    let n = cfg.paths.unwrap_or(DEFAULT_PATHS);
    if n == 0 {
        return Err(anyhow!("--paths must be positive").into());
    }
    let exec = Execution::default();

    let out = if obj.contains_key("lambda") {
        let path = HazardPath::from_json(&text)?;
        let samples = simulate_tau_ensemble(&path, n, seed, exec);
        match cfg.format {
            Format::Json => json(&samples),
            Format::Csv => samples_to_csv(&samples),
        }
    } else if let Some(az) = obj.get("azema") {
        let conf: AzemaConfig = serde_json::from_value(az.clone()).context("azema config")?;
        let paths = map_paths(exec, n, |i| azema_path_with(&conf, &mut path_rng(seed, i)))
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
        match cfg.format {
            Format::Json => json(&paths),
            Format::Csv => {
                let mut s = String::from("path_id,t,z\n");
                for (i, p) in paths.iter().enumerate() {
                    for (t, z) in p.times.iter().zip(&p.z) {
                        s.push_str(&format!("{i},{},{}\n", num(*t), num(*z)));
                    }
                }
                s
            }
        }
    } else if let Some(an) = obj.get("announced") {
        let conf: AnnouncedConfig =
            serde_json::from_value(an.clone()).context("announced config")?;
        let sched = announced_scenario(conf.rate, conf.delay, conf.horizon, seed)?;
        let rows: Vec<(f64, f64, f64)> = sched
            .entries()
            .iter()
            .map(|e| (e.time(), e.announce_time().unwrap_or(f64::NAN), e.gamma()))
            .collect();
        match cfg.format {
            Format::Json => {
                let v: Vec<_> = rows
                    .iter()
                    .map(|&(u, s, g)| serde_json::json!({"u": u, "S": s, "gamma": g}))
                    .collect();
                json(&v)
            }
            Format::Csv => {
                let mut s = String::from("u,S,gamma\n");
                for (u, a, g) in rows {
                    s.push_str(&format!("{},{},{}\n", num(u), num(a), num(g)));
                }
                s
            }
        }
    } else {
        return Err(anyhow!("simulate config needs `lambda`, `azema` or `announced`").into());
    };
    emit(cfg.out.as_deref(), &out)
}
