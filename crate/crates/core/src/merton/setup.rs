use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

/// Firm value `dV/V = X dt + σ dW` with an unknown Gaussian drift `X`,
/// debt `K` due at `T`, a second payment `K′` due at `U`, and a noisy
/// reading `Y′ = X + σ_η ξ` of the drift released at `S`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSetup", into = "RawSetup")]
pub struct MertonSetup {
    pub v0: f64,
    pub sigma: f64,
    pub mu_x: f64,
    pub var_x: f64,
    pub k: f64,
    pub k_prime: f64,
    pub t_pay: f64,
    pub u_pay: f64,
    pub news_time: f64,
    /// Standard deviation of the news noise; `0` is a perfect reading and
    /// `f64::INFINITY` an uninformative one.
    pub sigma_eta: f64,
    pub r: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSetup {
    v0: f64,
    sigma: f64,
    #[serde(rename = "muX")]
    mu_x: f64,
    #[serde(rename = "varX")]
    var_x: f64,
    #[serde(rename = "K")]
    k: f64,
    #[serde(rename = "Kprime")]
    k_prime: f64,
    #[serde(rename = "T")]
    t_pay: f64,
    #[serde(rename = "U")]
    u_pay: f64,
    #[serde(rename = "S")]
    news_time: f64,
    sigma_eta: f64,
    #[serde(default)]
    r: f64,
}

impl TryFrom<RawSetup> for MertonSetup {
    type Error = crate::Error;

    fn try_from(r: RawSetup) -> Result<Self> {
        let s = MertonSetup {
            v0: r.v0,
            sigma: r.sigma,
            mu_x: r.mu_x,
            var_x: r.var_x,
            k: r.k,
            k_prime: r.k_prime,
            t_pay: r.t_pay,
            u_pay: r.u_pay,
            news_time: r.news_time,
            sigma_eta: r.sigma_eta,
            r: r.r,
        };
        s.validate()?;
        Ok(s)
    }
}

impl From<MertonSetup> for RawSetup {
    fn from(s: MertonSetup) -> Self {
        RawSetup {
            v0: s.v0,
            sigma: s.sigma,
            mu_x: s.mu_x,
            var_x: s.var_x,
            k: s.k,
            k_prime: s.k_prime,
            t_pay: s.t_pay,
            u_pay: s.u_pay,
            news_time: s.news_time,
            sigma_eta: s.sigma_eta,
            r: s.r,
        }
    }
}

impl MertonSetup {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.v0,
            self.sigma,
            self.mu_x,
            self.var_x,
            self.k,
            self.k_prime,
            self.t_pay,
            self.u_pay,
            self.news_time,
            self.r,
        ];
        if finite.iter().any(|v| !v.is_finite()) || self.sigma_eta.is_nan() {
            return Err(invalid("setup values must be finite"));
        }
        if self.v0 <= 0.0 || self.k <= 0.0 || self.k_prime <= 0.0 {
            return Err(invalid("v0, K and Kprime must be positive"));
        }
        if self.sigma <= 0.0 || self.var_x <= 0.0 {
            return Err(invalid("sigma and varX must be positive"));
        }
        if self.sigma_eta < 0.0 {
            return Err(invalid("sigma_eta must be non-negative"));
        }
        if !(0.0 < self.news_time && self.news_time < self.t_pay && self.t_pay < self.u_pay) {
            return Err(invalid("need 0 < S < T < U"));
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| invalid(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("setup serializes")
    }
}

#[cfg(test)]
pub(crate) fn example() -> MertonSetup {
    MertonSetup {
        v0: 1.0,
        sigma: 0.2,
        mu_x: 0.05,
        var_x: 0.04,
        k: 0.8,
        k_prime: 0.7,
        t_pay: 3.0,
        u_pay: 5.0,
        news_time: 2.0,
        sigma_eta: 0.1,
        r: 0.0,
    }
}
