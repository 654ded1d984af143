//! JSON scenario document shared by the forward surface, the compensator
//! and the short rate.

use super::{CompensatorSpec, ForwardSurface, RiskySchedule, RiskyTime, ShortRate};
use crate::error::{invalid, Result};
use crate::grid::PiecewiseLinear;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomRecord {
    pub u: f64,
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    pub announce: Option<f64>,
    pub gamma: f64,
    /// `g(t, u)` over the time grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<f64>>,
}

/// `{"time_grid":[..], "maturity_grid":[..], "f":[[..]], "atoms":[..], "h":[..], "r":[..]}`
///
/// `f` is indexed `[time][maturity]`; `h` and `r` live on `time_grid`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioDocument {
    pub time_grid: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maturity_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub atoms: Vec<AtomRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<f64>>,
}

impl ScenarioDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid(format!("scenario JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn schedule(&self) -> Result<RiskySchedule> {
        RiskySchedule::new(
            self.atoms
                .iter()
                .map(|a| RiskyTime::new(a.u, a.gamma, a.announce))
                .collect::<Result<_>>()?,
        )
    }

    pub fn surface(&self) -> Result<ForwardSurface> {
        let maturity_grid = self
            .maturity_grid
            .clone()
            .ok_or_else(|| invalid("scenario has no maturity_grid"))?;
        let f = self
            .f
            .as_ref()
            .ok_or_else(|| invalid("scenario has no forward surface f"))?;
        if f.len() != self.time_grid.len() {
            return Err(invalid(format!(
                "f has {} rows for {} time nodes",
                f.len(),
                self.time_grid.len()
            )));
        }
        if let Some(row) = f.iter().find(|row| row.len() != maturity_grid.len()) {
            return Err(invalid(format!(
                "f row has {} entries for {} maturities",
                row.len(),
                maturity_grid.len()
            )));
        }
        let g_atoms = self
            .atoms
            .iter()
            .map(|a| {
                a.g.clone()
                    .ok_or_else(|| invalid(format!("atom at u = {} has no premium column g", a.u)))
            })
            .collect::<Result<Vec<_>>>()?;
        ForwardSurface::new(
            self.time_grid.clone(),
            maturity_grid,
            f.concat(),
            g_atoms,
            self.schedule()?,
        )
    }

    pub fn compensator(&self) -> Result<CompensatorSpec> {
        let h = self
            .h
            .clone()
            .ok_or_else(|| invalid("scenario has no hazard h"))?;
        CompensatorSpec::new(
            PiecewiseLinear::new(self.time_grid.clone(), h)?,
            self.schedule()?,
        )
    }

    /// Short rate; zero when the document has no `r`.
    pub fn short_rate(&self) -> Result<ShortRate> {
        match &self.r {
            Some(r) => Ok(ShortRate::new(PiecewiseLinear::new(
                self.time_grid.clone(),
                r.clone(),
            )?)),
            None => Ok(ShortRate::zero(*self.time_grid.last().unwrap_or(&0.0))),
        }
    }

    /// Rebuilds a document from model values. The compensator and short
    /// rate must live on the surface's time grid.
    pub fn from_parts(
        surface: &ForwardSurface,
        compensator: Option<&CompensatorSpec>,
        rate: Option<&ShortRate>,
    ) -> Result<Self> {
        let time_grid = surface.time_grid().to_vec();
        let on_grid = |p: &PiecewiseLinear| -> Result<Vec<f64>> {
            if p.knots() != time_grid.as_slice() {
                return Err(invalid("curve is not on the surface time grid"));
            }
            Ok(p.values().to_vec())
        };
        let f = (0..time_grid.len())
            .map(|k| surface.f_row(k).to_vec())
            .collect();
        let atoms = surface
            .schedule()
            .entries()
            .iter()
            .enumerate()
            .map(|(i, e)| AtomRecord {
                u: e.time(),
                announce: e.announce_time(),
                gamma: e.gamma(),
                g: Some(surface.g_column(i).to_vec()),
            })
            .collect();
        Ok(Self {
            time_grid: time_grid.clone(),
            maturity_grid: Some(surface.maturity_grid().to_vec()),
            f: Some(f),
            atoms,
            h: compensator.map(|c| on_grid(c.hazard())).transpose()?,
            r: rate.map(|r| on_grid(r.curve())).transpose()?,
        })
    }
}
