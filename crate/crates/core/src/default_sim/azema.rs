use crate::error::{invalid, Result};
use crate::grid::{aligned_grid, check_strictly_increasing, TIME_EPS};
use crate::normal::log_likelihood;
use crate::par::path_rng;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Non-decreasing deterministic clock `f` with `f(0) = 0`; the default
/// time survives to `t` with probability `e^{−X f(t)}` given `X`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FCurve {
    Linear { slope: f64 },
    Power { scale: f64, exponent: f64 },
}

impl FCurve {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            FCurve::Linear { slope } => slope >= 0.0 && slope.is_finite(),
            FCurve::Power { scale, exponent } => {
                scale >= 0.0 && scale.is_finite() && exponent > 0.0 && exponent.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!(
                "clock {self:?} is not non-decreasing from 0"
            )))
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            FCurve::Linear { slope } => slope * t,
            FCurve::Power { scale, exponent } => scale * t.powf(exponent),
        }
    }
}

/// Two-point drift `X ∈ {1, 2}` observed at `obs_times` through
/// `Y_j = X + ξ_j` with `ξ_j ~ N(0, noise_std²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AzemaConfig {
    pub f: FCurve,
    pub obs_times: Vec<f64>,
    pub noise_std: f64,
    /// Prior mass on `X = 1`.
    pub prior_one: f64,
    pub horizon: f64,
    pub step: f64,
}

impl AzemaConfig {
    fn validate(&self) -> Result<()> {
        self.f.validate()?;
        check_strictly_increasing(&self.obs_times, "observation times")?;
        if self.obs_times.iter().any(|&t| t <= 0.0 || t > self.horizon) {
            return Err(invalid("observation times must lie in (0, horizon]"));
        }
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return Err(invalid("noise_std must be non-negative"));
        }
        if !(0.0..=1.0).contains(&self.prior_one) {
            return Err(invalid("prior_one must be a probability"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservationJump {
    pub t: f64,
    pub before: f64,
    pub after: f64,
    /// Posterior mass on `X = 1` after the observation.
    pub posterior_one: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AzemaPath {
    pub x: f64,
    pub observations: Vec<f64>,
    pub times: Vec<f64>,
    /// Right-continuous values of `Z` on `times`.
    pub z: Vec<f64>,
    pub jumps: Vec<ObservationJump>,
}

/// `Σ_x π(x) e^{−x f}` for the two-point posterior.
pub fn two_point_survival(posterior_one: f64, f: f64) -> f64 {
    posterior_one * (-f).exp() + (1.0 - posterior_one) * (-2.0 * f).exp()
}

fn bayes(prior_one: f64, y: f64, sd: f64) -> f64 {
    if prior_one == 0.0 || prior_one == 1.0 {
        return prior_one;
    }
    if sd == 0.0 {
        return if (y - 1.0).abs() < (y - 2.0).abs() {
            1.0
        } else {
            0.0
        };
    }
    let log_odds = (prior_one / (1.0 - prior_one)).ln() + log_likelihood(y, 1.0, sd)
        - log_likelihood(y, 2.0, sd);
    1.0 / (1.0 + (-log_odds).exp())
}

/// Simulates `X` and the observations, and evaluates the Azéma
/// supermartingale `Z_t = E[e^{−X f(t)} | G_t]` on a grid of spacing at most
/// `step` that contains every observation time.
pub fn azema_path_with<R: Rng + ?Sized>(cfg: &AzemaConfig, rng: &mut R) -> Result<AzemaPath> {
    cfg.validate()?;
    let x = if rng.random::<f64>() < cfg.prior_one {
        1.0
    } else {
        2.0
    };
    let observations: Vec<f64> = cfg
        .obs_times
        .iter()
        .map(|_| x + cfg.noise_std * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let times = aligned_grid(cfg.horizon, cfg.step, &cfg.obs_times)?;
    let mut pi = cfg.prior_one;
    let mut next_obs = 0;
    let mut z = Vec::with_capacity(times.len());
    let mut jumps = Vec::with_capacity(observations.len());
    for &t in &times {
        let f = cfg.f.eval(t);
        while next_obs < observations.len() && cfg.obs_times[next_obs] <= t + TIME_EPS {
            let before = two_point_survival(pi, f);
            pi = bayes(pi, observations[next_obs], cfg.noise_std);
            let after = two_point_survival(pi, f);
            jumps.push(ObservationJump {
                t,
                before,
                after,
                posterior_one: pi,
            });
            next_obs += 1;
        }
        z.push(two_point_survival(pi, f));
    }
    Ok(AzemaPath {
        x,
        observations,
        times,
        z,
        jumps,
    })
}

/// [`azema_path_with`] using the generator of path 0 under `seed`.
pub fn azema_path(cfg: &AzemaConfig, seed: u64) -> Result<AzemaPath> {
    azema_path_with(cfg, &mut path_rng(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(prior_one: f64) -> AzemaConfig {
        AzemaConfig {
            f: FCurve::Linear { slope: 0.5 },
            obs_times: vec![0.5, 1.0, 1.5],
            noise_std: 0.8,
            prior_one,
            horizon: 2.0,
            step: 0.05,
        }
    }

    #[test]
    fn degenerate_prior_has_no_jumps() {
        let p = azema_path(&cfg(1.0), 3).unwrap();
        for (&t, &z) in p.times.iter().zip(&p.z) {
            assert!((z - (-0.5 * t).exp()).abs() < 1e-15);
        }
        assert!(p.jumps.iter().all(|j| j.before == j.after));
    }

    #[test]
    fn values_in_unit_interval_and_decreasing_between_observations() {
        for seed in 0..20 {
            let p = azema_path(&cfg(0.4), seed).unwrap();
            assert!(p.z.iter().all(|&z| z > 0.0 && z <= 1.0));
            assert_eq!(p.z[0], 1.0);
            for k in 1..p.times.len() {
                let t = p.times[k];
                if !p.jumps.iter().any(|j| (j.t - t).abs() < 1e-12) {
                    assert!(p.z[k] <= p.z[k - 1]);
                }
            }
        }
    }

    #[test]
    fn jump_sign_follows_the_evidence() {
        // a reading near 1 favours the smaller drift, so survival jumps up
        assert!(bayes(0.5, 0.9, 0.8) > 0.5);
        assert!(bayes(0.5, 2.1, 0.8) < 0.5);
        let f = 0.3;
        assert!(two_point_survival(bayes(0.5, 0.9, 0.8), f) > two_point_survival(0.5, f));
    }

    #[test]
    fn deterministic_given_seed() {
        assert_eq!(
            azema_path(&cfg(0.5), 8).unwrap(),
            azema_path(&cfg(0.5), 8).unwrap()
        );
    }

    #[test]
    fn rejects_bad_config() {
        let mut c = cfg(0.5);
        c.obs_times = vec![1.0, 0.5];
        assert!(azema_path(&c, 0).is_err());
        let mut c = cfg(0.5);
        c.f = FCurve::Linear { slope: -1.0 };
        assert!(azema_path(&c, 0).is_err());
    }
}
