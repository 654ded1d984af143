use super::report::{DriftReport, GridPoint};
use crate::error::{invalid, Error, Result};
use crate::par::{map_paths, mean_and_stderr, path_rng, Execution};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Largest tolerated deviation in standard errors.
pub const Z_THRESHOLD: f64 = 3.0;

const MIN_PATHS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MartingalePoint {
    pub t: f64,
    pub mean: f64,
    pub stderr: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MartingaleReport {
    pub maturity: f64,
    pub initial_price: f64,
    pub n_paths: usize,
    pub points: Vec<MartingalePoint>,
    pub pass: bool,
}

impl MartingaleReport {
    pub fn max_abs_z(&self) -> f64 {
        self.points.iter().map(|p| p.z.abs()).fold(0.0, f64::max)
    }

    /// The report in the drift-report layout, with `|z|` as the residual.
    pub fn summary(&self) -> DriftReport {
        let worst = self
            .points
            .iter()
            .fold(None::<&MartingalePoint>, |acc, p| match acc {
                Some(a) if a.z.abs() >= p.z.abs() => Some(a),
                _ => Some(p),
            });
        DriftReport {
            condition: "martingale".into(),
            max_residual: self.max_abs_z(),
            argmax: GridPoint {
                t: worst.map_or(0.0, |p| p.t),
                maturity: self.maturity,
            },
            pass: self.pass,
            tol: Z_THRESHOLD,
        }
    }
}

/// Tests whether discounted prices are martingales along simulated paths.
///
/// `simulate` draws path `i` from `path_rng(seed, i)`; `price(t, path)`
/// returns the discounted price at `t ∧ τ`, zero after default. At each
/// `t` in `t_grid` the sample mean is compared with `price(0, ·)` in units
/// of its standard error; the test passes iff every `|z| ≤ 3`.
#[allow(clippy::too_many_arguments)]
pub fn martingale_mc_test<P, S, F>(
    simulate: S,
    price: F,
    t_grid: &[f64],
    maturity: f64,
    n_paths: usize,
    seed: u64,
    exec: Execution,
) -> Result<MartingaleReport>
where
    P: Send + Sync,
    S: Fn(&mut ChaCha8Rng) -> P + Sync + Send,
    F: Fn(f64, &P) -> f64 + Sync + Send,
{
    if n_paths < MIN_PATHS {
        return Err(Error::Underpowered(n_paths));
    }
    if t_grid.iter().any(|&t| !(0.0..=maturity).contains(&t)) {
        return Err(invalid("test times must lie in [0, T]"));
    }
    let paths = map_paths(exec, n_paths, |i| simulate(&mut path_rng(seed, i)));
    let initial_price = price(0.0, &paths[0]);
    let mut points = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let values = map_paths(exec, n_paths, |i| price(t, &paths[i as usize]));
        let (mean, stderr) = mean_and_stderr(&values);
        let diff = mean - initial_price;
        let z = if stderr > 0.0 {
            diff / stderr
        } else if diff.abs() <= 1e-12 * initial_price.abs().max(1.0) {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        };
        points.push(MartingalePoint { t, mean, stderr, z });
    }
    let pass = points.iter().all(|p| p.z.abs() <= Z_THRESHOLD);
    Ok(MartingaleReport {
        maturity,
        initial_price,
        n_paths,
        points,
        pass,
    })
}
