use crate::output::{emit, json, num};
use crate::{Failure, Format, RunConfig};
use riskytime::model::ScenarioDocument;
use serde::Serialize;

#[derive(Serialize)]
struct Row {
    #[serde(rename = "T")]
    maturity: f64,
    price: f64,
    is_atom: bool,
}

/// `P(0,T)` on the maturity grid, refined to `--step` when given. At each
/// risky time the left limit comes first (`is_atom` false), then the value
/// that includes the atom.
pub fn run(cfg: &RunConfig) -> Result<(), Failure> {
    let doc = ScenarioDocument::from_json(&cfg.read_config()?)?;
    let surface = doc.surface()?;
    let grid = surface.maturity_grid();
    let mut maturities: Vec<f64> = grid.to_vec();
    if let Some(step) = cfg.step {
        if !(step > 0.0) {
            return Err(anyhow::anyhow!("--step must be positive").into());
        }
        let (lo, hi) = (grid[0], grid[grid.len() - 1]);
        let n = ((hi - lo) / step).ceil() as usize;
        maturities.extend((0..=n).map(|k| (lo + k as f64 * step).min(hi)));
    }
    let atoms: Vec<f64> = surface.schedule().times();
    maturities.extend(
        atoms
            .iter()
            .copied()
            .filter(|&u| u >= grid[0] && u <= grid[grid.len() - 1]),
    );
    maturities.sort_by(f64::total_cmp);
    maturities.dedup();

    let mut rows = Vec::new();
    for &m in maturities.iter().filter(|&&m| m >= 0.0) {
        if atoms.contains(&m) && m > 0.0 {
            rows.push(Row {
                maturity: m,
                price: surface.bond_price_left(0.0, m, false)?,
                is_atom: false,
            });
            rows.push(Row {
                maturity: m,
                price: surface.bond_price(0.0, m, false)?,
                is_atom: true,
            });
        } else {
            rows.push(Row {
                maturity: m,
                price: surface.bond_price(0.0, m, false)?,
                is_atom: false,
            });
        }
    }
    let text = match cfg.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut s = String::from("T,price,is_atom\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{}\n",
                    num(r.maturity),
                    num(r.price),
                    u8::from(r.is_atom)
                ));
            }
            s
        }
    };
    emit(cfg.out.as_deref(), &text)
}
