use crate::output::{emit, json};
use crate::{Failure, Format, RunConfig};
use riskytime::merton::{filter_coverage, run_filter, MertonSetup};
use riskytime::par::Execution;

pub const DEFAULT_STEP: f64 = 1e-3;

/// One filter run, or with `--paths N` (N > 1) the 95% coverage of the
/// last filter state over N scenarios.
pub fn run(cfg: &RunConfig) -> Result<(), Failure> {
    let setup = MertonSetup::from_json(&cfg.read_config()?)?;
    let seed = cfg.require_seed()?;
    let step = cfg.step.unwrap_or(DEFAULT_STEP);
    let text = match cfg.paths {
        Some(n) if n > 1 => {
            let report = filter_coverage(&setup, step, n, seed, Execution::default())?;
            match cfg.format {
                Format::Json => json(&report),
                Format::Csv => report.to_csv(),
            }
        }
        _ => {
            let run = run_filter(&setup, step, seed)?;
            match cfg.format {
                Format::Json => json(&run),
                Format::Csv => run.to_csv(),
            }
        }
    };
    emit(cfg.out.as_deref(), &text)
}
