//! Euler sampling of the affine state.

use super::params::AffineParams;
use crate::error::{invalid, Error, Result};
use crate::grid::{aligned_grid, cell_index, TIME_EPS};
use crate::par::path_rng;
use rand::Rng;
use rand_distr::StandardNormal;

/// A sampled state path on a time grid starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct StatePath {
    times: Vec<f64>,
    dim: usize,
    // node-major
    states: Vec<f64>,
}

impl StatePath {
    pub fn new(times: Vec<f64>, dim: usize, states: Vec<f64>) -> Result<Self> {
        crate::grid::check_strictly_increasing(&times, "path times")?;
        if times.is_empty() || dim == 0 || states.len() != times.len() * dim {
            return Err(invalid(
                "path needs one state of the given dimension per time",
            ));
        }
        Ok(Self { times, dim, states })
    }

    /// A path that stays at `x` on `times`.
    pub fn constant(times: Vec<f64>, x: &[f64]) -> Result<Self> {
        let states = times.iter().flat_map(|_| x.iter().copied()).collect();
        Self::new(times, x.len(), states)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn state(&self, k: usize) -> &[f64] {
        &self.states[k * self.dim..(k + 1) * self.dim]
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("non-empty path")
    }

    /// Index of the node at `t`, if `t` is one.
    pub fn node(&self, t: f64) -> Option<usize> {
        let k = self.times.partition_point(|&s| s < t - TIME_EPS);
        (k < self.times.len() && (self.times[k] - t).abs() <= TIME_EPS).then_some(k)
    }

    /// State at `t`, linearly interpolated between nodes.
    pub fn state_at(&self, t: f64) -> Result<Vec<f64>> {
        if t.is_nan() || t < self.times[0] - TIME_EPS || t > self.horizon() + TIME_EPS {
            return Err(Error::OutOfRange {
                what: "t",
                value: t,
                lo: self.times[0],
                hi: self.horizon(),
            });
        }
        if let Some(k) = self.node(t) {
            return Ok(self.state(k).to_vec());
        }
        let k = cell_index(&self.times, t);
        let w = (t - self.times[k]) / (self.times[k + 1] - self.times[k]);
        let (x0, x1) = (self.state(k), self.state(k + 1));
        Ok(x0
            .iter()
            .zip(x1)
            .map(|(a, b)| (1.0 - w) * a + w * b)
            .collect())
    }
}

/// Euler–Maruyama on `times` with full truncation: cone coordinates enter
/// drift and diffusion clamped at zero, and the state is floored at zero
/// after every step.
pub fn simulate_state_on<R: Rng + ?Sized>(
    params: &AffineParams,
    x0: &[f64],
    times: &[f64],
    rng: &mut R,
) -> Result<StatePath> {
    if !params.in_state_space(x0) {
        return Err(Error::StateOutsideDomain(x0.to_vec()));
    }
    let (d, m) = (params.dim(), params.cone_dim());
    let mut states = Vec::with_capacity(times.len() * d);
    states.extend_from_slice(x0);
    if d == 1 {
        return simulate_scalar(params, x0[0], times, rng);
    }
    let mut x = x0.to_vec();
    let mut z = vec![0.0; d];
    for w in times.windows(2) {
        let h = w[1] - w[0];
        let mut xc = x.clone();
        for v in &mut xc[..m] {
            *v = v.max(0.0);
        }
        let mu = params.drift(&xc);
        for zi in &mut z {
            *zi = rng.sample(StandardNormal);
        }
        let sq = h.sqrt();
        if d == 1 {
            let s = params.diffusion(&xc)[(0, 0)];
            x[0] += mu[0] * h + s * sq * z[0];
        } else {
            let s = params.diffusion(&xc);
            for k in 0..d {
                let noise: f64 = (0..d).map(|l| s[(k, l)] * z[l]).sum();
                x[k] += mu[k] * h + sq * noise;
            }
        }
        for v in &mut x[..m] {
            *v = v.max(0.0);
        }
        states.extend_from_slice(&x);
    }
    StatePath::new(times.to_vec(), d, states)
}

/// The one-factor case of [`simulate_state_on`] without per-step
/// allocation; same arithmetic, same draws.
fn simulate_scalar<R: Rng + ?Sized>(
    params: &AffineParams,
    x0: f64,
    times: &[f64],
    rng: &mut R,
) -> Result<StatePath> {
    let (a0, a1) = (params.mu0()[0], params.mu(0)[0]);
    let (s0, s1) = (params.sigma0()[0][0], params.sigma(0)[0][0]);
    let cone = params.cone_dim() == 1;
    let mut states = Vec::with_capacity(times.len());
    states.push(x0);
    let mut x = x0;
    for w in times.windows(2) {
        let h = w[1] - w[0];
        let xc = if cone { x.max(0.0) } else { x };
        let mu = a0 + xc * a1;
        let s = (2.0 * (s0 + xc * s1)).max(0.0).sqrt();
        let z: f64 = rng.sample(StandardNormal);
        x += mu * h + s * h.sqrt() * z;
        if cone {
            x = x.max(0.0);
        }
        states.push(x);
    }
    StatePath::new(times.to_vec(), 1, states)
}

/// One Euler path on a uniform grid of spacing at most `step`, from the
/// generator of path 0 under `seed`.
pub fn simulate_state(
    params: &AffineParams,
    x0: &[f64],
    horizon: f64,
    step: f64,
    seed: u64,
) -> Result<StatePath> {
    let times = aligned_grid(horizon, step, &[])?;
    simulate_state_on(params, x0, &times, &mut path_rng(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_factor(mu0: f64, mu1: f64, half_var: f64) -> AffineParams {
        AffineParams::new(
            1,
            1,
            vec![mu0],
            vec![vec![mu1]],
            vec![vec![0.0]],
            vec![vec![vec![half_var]]],
        )
        .unwrap()
    }

    #[test]
    fn frozen_state_stays_put() {
        let p = one_factor(0.0, 0.0, 0.0);
        let path = simulate_state(&p, &[0.3], 1.0, 0.1, 7).unwrap();
        for k in 0..path.times().len() {
            assert_eq!(path.state(k), &[0.3]);
        }
    }

    #[test]
    fn constant_drift_is_linear() {
        let p = one_factor(0.5, 0.0, 0.0);
        let path = simulate_state(&p, &[0.1], 1.0, 0.125, 7).unwrap();
        for (k, &t) in path.times().iter().enumerate() {
            assert!((path.state(k)[0] - (0.1 + 0.5 * t)).abs() < 1e-14);
        }
    }

    #[test]
    fn same_seed_same_path() {
        let p = one_factor(0.02, -0.3, 0.02);
        let a = simulate_state(&p, &[0.04], 1.0, 0.01, 3).unwrap();
        let b = simulate_state(&p, &[0.04], 1.0, 0.01, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.states.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn rejects_bad_start() {
        let p = one_factor(0.02, -0.3, 0.02);
        assert!(matches!(
            simulate_state(&p, &[-0.1], 1.0, 0.1, 0),
            Err(Error::StateOutsideDomain(_))
        ));
        assert!(simulate_state(&p, &[0.1], 1.0, 0.0, 0).is_err());
    }

    #[test]
    fn interpolates_between_nodes() {
        let path = StatePath::new(vec![0.0, 1.0], 1, vec![0.0, 2.0]).unwrap();
        assert_eq!(path.state_at(0.25).unwrap(), vec![0.5]);
        assert!(path.state_at(1.5).is_err());
    }
}
