use super::filter::FilterState;
use super::setup::MertonSetup;
use crate::error::{invalid, Error, Result};
use crate::normal::{bivariate_cdf, cdf};

/// `E[Φ(ξ)]` for `ξ ~ N(a, b²)`, equal to `Φ(a/√(1+b²))`.
pub fn gaussian_phi_expectation(a: f64, b: f64) -> Result<f64> {
    if !(b >= 0.0) {
        return Err(invalid(format!("b = {b} must be non-negative")));
    }
    Ok(cdf(a / (1.0 + b * b).sqrt()))
}

fn check_firm_value(v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(invalid(format!("firm value {v} must be positive")));
    }
    Ok(())
}

/// Conditional probability of default at the first payment date `T`,
/// `Φ((log(K/V_t) + ½σ²τ − x̂τ) / (√τ √(σ² + Σ τ)))` with `τ = T − t`.
pub fn default_prob_t(state: &FilterState, v_t: f64, setup: &MertonSetup) -> Result<f64> {
    check_firm_value(v_t)?;
    let (t, s2) = (state.t, setup.sigma * setup.sigma);
    if !(t >= 0.0 && t < setup.t_pay) {
        return Err(Error::OutOfRange {
            what: "t",
            value: t,
            lo: 0.0,
            hi: setup.t_pay,
        });
    }
    let tau = setup.t_pay - t;
    let a = (setup.k / v_t).ln() + 0.5 * s2 * tau;
    let b = tau.sqrt() * (s2 + state.sigma * tau).sqrt();
    Ok(cdf((a - state.xhat * tau) / b))
}

/// Conditional probability of default at the second payment date `U`,
/// i.e. of `V_T ≥ K` and `V_U < K′`.
///
/// Before `T` both events are still open and the joint law of
/// `(log V_T, log V_U)` given the filter is bivariate normal. From `T` on
/// the first event is known through `survived_t`.
pub fn default_prob_u(
    state: &FilterState,
    v_t: f64,
    survived_t: bool,
    setup: &MertonSetup,
) -> Result<f64> {
    check_firm_value(v_t)?;
    let t = state.t;
    if !(t >= setup.news_time && t < setup.u_pay) {
        return Err(Error::OutOfRange {
            what: "t",
            value: t,
            lo: setup.news_time,
            hi: setup.u_pay,
        });
    }
    let s2 = setup.sigma * setup.sigma;
    let var = state.sigma;
    let tu = setup.u_pay - t;
    if t >= setup.t_pay {
        if !survived_t {
            return Ok(0.0);
        }
        let a = (setup.k_prime / v_t).ln() + 0.5 * s2 * tu;
        let b = tu.sqrt() * (s2 + var * tu).sqrt();
        return Ok(cdf((a - state.xhat * tu) / b));
    }
    let t1 = setup.t_pay - t;
    let drift = state.xhat - 0.5 * s2;
    let (m1, m2) = (v_t.ln() + drift * t1, v_t.ln() + drift * tu);
    let sd1 = (var * t1 * t1 + s2 * t1).sqrt();
    let sd2 = (var * tu * tu + s2 * tu).sqrt();
    let rho = ((var * t1 * tu + s2 * t1) / (sd1 * sd2)).min(1.0);
    let k1 = (setup.k.ln() - m1) / sd1;
    let k2 = (setup.k_prime.ln() - m2) / sd2;
    Ok((cdf(k2) - bivariate_cdf(k1, k2, rho)).max(0.0))
}
