use crate::output::{emit, json, num};
use crate::{Failure, Format, RunConfig};
use anyhow::{anyhow, bail, Context};
use riskytime::affine::{
    affine_bond_price, cir_closed_form, riccati_solve, AffineParams, CirParams,
    CompensatorLoadings, RiccatiSolution, RiskyDates,
};
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const DEFAULT_STEP: f64 = 1e-3;

/// Either `{"cir": {..}, "u1": ..}` or explicit `params`, `loadings` and
/// `dates`, plus the state `x0` at time `t` and the maturities to price.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineConfig {
    #[serde(default)]
    pub cir: Option<CirParams>,
    #[serde(default)]
    pub u1: Option<f64>,
    #[serde(default)]
    pub params: Option<AffineParams>,
    #[serde(default)]
    pub loadings: Option<CompensatorLoadings>,
    #[serde(default)]
    pub dates: Option<RiskyDates>,
    pub x0: Vec<f64>,
    #[serde(default)]
    pub t: f64,
    pub maturities: Vec<f64>,
}

pub struct AffineModel {
    pub params: AffineParams,
    pub loadings: CompensatorLoadings,
    pub dates: RiskyDates,
    pub cir: Option<(CirParams, f64)>,
}

impl AffineConfig {
    pub fn model(&self) -> anyhow::Result<AffineModel> {
        match (&self.cir, &self.params) {
            (Some(cir), None) => {
                if self.loadings.is_some() || self.dates.is_some() {
                    bail!("a cir config takes no loadings or dates");
                }
                let u1 = self.u1.ok_or_else(|| anyhow!("cir config needs u1"))?;
                let (params, loadings, dates) = cir.to_affine(u1)?;
                Ok(AffineModel {
                    params,
                    loadings,
                    dates,
                    cir: Some((*cir, u1)),
                })
            }
            (None, Some(params)) => {
                let dates = self.dates.clone().unwrap_or_default();
                let loadings = match &self.loadings {
                    Some(l) => l.clone(),
                    None => CompensatorLoadings::zero(params.dim(), dates.len()),
                };
                loadings.validate(params, &dates)?;
                Ok(AffineModel {
                    params: params.clone(),
                    loadings,
                    dates,
                    cir: None,
                })
            }
            _ => bail!("config needs exactly one of `cir` and `params`"),
        }
    }
}

#[derive(Serialize)]
struct Row {
    #[serde(rename = "T")]
    maturity: f64,
    #[serde(rename = "A")]
    a: f64,
    #[serde(rename = "B")]
    b: Vec<f64>,
    price: f64,
    #[serde(rename = "A_cf", skip_serializing_if = "Option::is_none")]
    a_cf: Option<f64>,
    #[serde(rename = "B_cf", skip_serializing_if = "Option::is_none")]
    b_cf: Option<f64>,
}

pub fn run(cfg: &RunConfig, solution_out: Option<&Path>) -> Result<(), Failure> {
    let conf: AffineConfig =
        serde_json::from_str(&cfg.read_config()?).context("parsing affine config")?;
    let model = conf.model()?;
    let step = cfg.step.unwrap_or(DEFAULT_STEP);
    if conf.maturities.is_empty() {
        return Err(anyhow!("no maturities to price").into());
    }
    let mut rows = Vec::new();
    let mut longest: Option<RiccatiSolution> = None;
    for &m in &conf.maturities {
        let sol = riccati_solve(&model.params, &model.loadings, &model.dates, m, step)?;
        let (a, b) = sol.eval(conf.t)?;
        let price = affine_bond_price(&sol, &conf.x0, conf.t, false)?;
        let (a_cf, b_cf) = match model.cir {
            Some((p, u1)) => {
                let (a, b) = cir_closed_form(&p, conf.t, m, u1)?;
                (Some(a), Some(b))
            }
            None => (None, None),
        };
        rows.push(Row {
            maturity: m,
            a,
            b,
            price,
            a_cf,
            b_cf,
        });
        if longest.as_ref().is_none_or(|s| s.maturity() < m) {
            longest = Some(sol);
        }
    }
    if let (Some(path), Some(sol)) = (solution_out, &longest) {
        std::fs::write(path, sol.to_csv())
            .with_context(|| format!("writing {}", path.display()))?;
    }

    let text = match cfg.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let d = model.params.dim();
            let mut s = String::from("T,A");
            for k in 1..=d {
                s.push_str(&format!(",B_{k}"));
            }
            s.push_str(",price");
            if model.cir.is_some() {
                s.push_str(",A_cf,B_cf");
            }
            s.push('\n');
            for r in &rows {
                s.push_str(&format!("{},{}", num(r.maturity), num(r.a)));
                for b in &r.b {
                    s.push_str(&format!(",{}", num(*b)));
                }
                s.push_str(&format!(",{}", num(r.price)));
                if let (Some(a), Some(b)) = (r.a_cf, r.b_cf) {
                    s.push_str(&format!(",{},{}", num(a), num(b)));
                }
                s.push('\n');
            }
            s
        }
    };
    emit(cfg.out.as_deref(), &text)
}
