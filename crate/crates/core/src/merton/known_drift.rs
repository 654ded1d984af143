use crate::error::{invalid, Result};
use crate::normal::{cdf, mills_lower};
use serde::{Deserialize, Serialize};

/// Merton model with a Brownian firm value `W`, known drift, face value `K`
/// due at `U` and a constant short rate `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnownDriftMerton {
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "U")]
    pub u: f64,
    pub r: f64,
}

/// Pre-default bond price: `e^{−r(T−t)} Φ((W_t−K)/√(U−t))` when the
/// payment date is inside `[t, T]`, else `e^{−r(T−t)}`.
pub fn merton_bond_price(w_t: f64, t: f64, maturity: f64, model: &KnownDriftMerton) -> Result<f64> {
    if !(t < model.u) {
        return Err(invalid(format!("t = {t} must precede U = {}", model.u)));
    }
    if maturity < t {
        return Err(crate::Error::MaturityBeforeTime { t, maturity });
    }
    let discount = (-model.r * (maturity - t)).exp();
    if maturity < model.u {
        return Ok(discount);
    }
    Ok(discount * cdf((w_t - model.k) / (model.u - t).sqrt()))
}

/// Atom forward `f(t,U) = −log Φ(z)` and its dynamics `df = a dt + b dW`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForwardCoeffs {
    pub f: f64,
    pub a: f64,
    pub b: f64,
}

/// Atom forward of the Merton model at `(W_t, t)`, with drift obtained from
/// Itô's formula term by term and volatility `−φ(z)/(Φ(z)√(U−t))`.
pub fn merton_forward_coeffs(w_t: f64, t: f64, u: f64, k: f64) -> Result<ForwardCoeffs> {
    if !(t < u) {
        return Err(invalid(format!("t = {t} must precede U = {u}")));
    }
    let s = u - t;
    let z = (w_t - k) / s.sqrt();
    let m = mills_lower(z);
    let f = if z > -30.0 {
        -cdf(z).ln()
    } else {
        // log Φ(z) = log φ(z) − log m, with log φ taken directly
        0.5 * z * z + 0.5 * (2.0 * std::f64::consts::PI).ln() + m.ln()
    };
    // F(z) = −log Φ(z): F′ = −m, F″ = z m + m²; ∂_t z = z/(2s), ∂_W z = 1/√s
    let f1 = -m;
    let f2 = z * m + m * m;
    let a = f1 * z / (2.0 * s) + 0.5 * f2 / s;
    let b = f1 / s.sqrt();
    Ok(ForwardCoeffs { f, a, b })
}
