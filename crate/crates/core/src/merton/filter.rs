use super::setup::MertonSetup;
use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};

/// Conditional mean and variance of the drift at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterState {
    pub t: f64,
    pub xhat: f64,
    #[serde(rename = "Sigma")]
    pub sigma: f64,
}

impl FilterState {
    /// The prior at time 0.
    pub fn prior(setup: &MertonSetup) -> Self {
        Self {
            t: 0.0,
            xhat: setup.mu_x,
            sigma: setup.var_x,
        }
    }
}

/// Variance after observing the path for `dt` more time units.
fn decay(var: f64, dt: f64, sigma: f64) -> f64 {
    var / (1.0 + var * dt / (sigma * sigma))
}

/// Variance after a reading with noise standard deviation `eta`.
fn absorb_news(var: f64, eta: f64) -> f64 {
    if eta == 0.0 {
        0.0
    } else {
        var / (1.0 + var / (eta * eta))
    }
}

fn news_gain(var: f64, eta: f64) -> f64 {
    if eta.is_infinite() {
        0.0
    } else if eta == 0.0 {
        if var > 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        var / (var + eta * eta)
    }
}

/// Deterministic conditional variance `Σ(t)` of the drift, right-continuous
/// at the news time.
pub fn variance_path(setup: &MertonSetup, t: f64) -> f64 {
    let (s, sig) = (setup.news_time, setup.sigma);
    if t < s {
        decay(setup.var_x, t.max(0.0), sig)
    } else {
        let at_news = absorb_news(decay(setup.var_x, s, sig), setup.sigma_eta);
        decay(at_news, t - s, sig)
    }
}

/// One Euler step of the filter, `x̂ += (Σ/σ²)(dY − x̂ dt)`. The variance
/// follows its exact flow over `dt`, so the news reading is never folded in
/// here.
pub fn filter_step(
    state: &FilterState,
    dy: f64,
    dt: f64,
    setup: &MertonSetup,
) -> Result<FilterState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid(format!("dt {dt} must be positive")));
    }
    let s2 = setup.sigma * setup.sigma;
    Ok(FilterState {
        t: state.t + dt,
        xhat: state.xhat + state.sigma / s2 * (dy - state.xhat * dt),
        sigma: decay(state.sigma, dt, setup.sigma),
    })
}

/// Conjugate update of the filter by the news reading `Y′ = X + σ_η ξ`.
pub fn news_update(state: &FilterState, yprime: f64, setup: &MertonSetup) -> Result<FilterState> {
    let s = setup.news_time;
    if (state.t - s).abs() > 1e-9 * s.max(1.0) {
        return Err(Error::NewsTimeMismatch {
            t: state.t,
            news_time: s,
        });
    }
    let gain = news_gain(state.sigma, setup.sigma_eta);
    Ok(FilterState {
        t: state.t,
        xhat: state.xhat + gain * (yprime - state.xhat),
        sigma: absorb_news(state.sigma, setup.sigma_eta),
    })
}
