//! One-factor square-root model with a single risky date.
//!
//! State `dX = (μ0 + μ1 X) dt + σ √X dW`, hazard `λ = X`, and at the risky
//! date an atom with exponent `ψ1 X`.

use super::params::{AffineParams, CompensatorLoadings, RiskyDates};
use crate::error::{invalid, Error, Result};
use crate::grid::PiecewiseLinear;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CirParams {
    pub mu0: f64,
    pub mu1: f64,
    pub sigma: f64,
    pub psi1: f64,
}

impl CirParams {
    pub fn new(mu0: f64, mu1: f64, sigma: f64, psi1: f64) -> Result<Self> {
        let p = Self {
            mu0,
            mu1,
            sigma,
            psi1,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.mu0, self.mu1, self.sigma, self.psi1]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(invalid("CIR parameters must be finite"));
        }
        if self.mu0 < 0.0 {
            return Err(Error::NotAdmissible("mu0 must be non-negative".into()));
        }
        if self.sigma <= 0.0 {
            return Err(invalid("sigma must be positive"));
        }
        if self.psi1 < 0.0 {
            return Err(Error::NotAdmissible("psi1 must be non-negative".into()));
        }
        Ok(())
    }

    /// The same model in general affine form, with the risky date `u1`.
    pub fn to_affine(&self, u1: f64) -> Result<(AffineParams, CompensatorLoadings, RiskyDates)> {
        self.validate()?;
        let params = AffineParams::new(
            1,
            1,
            vec![self.mu0],
            vec![vec![self.mu1]],
            vec![vec![0.0]],
            vec![vec![vec![0.5 * self.sigma * self.sigma]]],
        )?;
        let dates = RiskyDates::new(vec![u1])?;
        let mut loadings = CompensatorLoadings::zero(1, 1);
        loadings.psi0[0] = PiecewiseLinear::constant(1.0, 0.0, 0.0)?;
        loadings.jumps[0].psi[0] = self.psi1;
        Ok((params, loadings, dates))
    }

    /// Flow of the Riccati pair over a horizon `s` from terminal value
    /// `B = −w`: returns `(φ(s, w), ψ(s, w))` with `A = −φ`, `B = −ψ`.
    fn flow(&self, s: f64, w: f64) -> (f64, f64) {
        let (mu0, mu1, sig2) = (self.mu0, self.mu1, self.sigma * self.sigma);
        let theta = (mu1 * mu1 + 2.0 * sig2).sqrt();
        let e = (theta * s).exp_m1();
        let l1 = 2.0 * e;
        let l2 = theta * (e + 2.0) + mu1 * e;
        let l3 = theta * (e + 2.0) - mu1 * e;
        let l4 = sig2 * e;
        let den = l3 - l4 * w;
        let phi = 2.0 * mu0 / sig2 * ((2.0 * theta).ln() + 0.5 * (theta - mu1) * s - den.ln());
        let psi = -(l1 - l2 * w) / den;
        (phi, psi)
    }
}

/// Closed-form `(A(t,T), B(t,T))` for the model of [`CirParams`] with the
/// risky date `u1`.
pub fn cir_closed_form(params: &CirParams, t: f64, maturity: f64, u1: f64) -> Result<(f64, f64)> {
    params.validate()?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(invalid(format!("time {t} must be non-negative")));
    }
    if maturity < t {
        return Err(Error::MaturityBeforeTime { t, maturity });
    }
    if !(u1 > 0.0 && u1.is_finite()) {
        return Err(invalid(format!("risky date {u1} must be positive")));
    }
    if t < u1 && u1 <= maturity {
        let (phi1, psi1) = params.flow(maturity - u1, 0.0);
        let (a1, b1) = (-phi1, -psi1);
        let w = b1 + params.psi1;
        let (phi, psi) = params.flow(u1 - t, -w);
        Ok((a1 - phi, -psi))
    } else {
        let (phi, psi) = params.flow(maturity - t, 0.0);
        Ok((-phi, -psi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> CirParams {
        CirParams::new(0.02, -0.3, 0.2, 0.5).unwrap()
    }

    #[test]
    fn vanishes_at_maturity() {
        for &t in &[0.3, 1.0, 2.0] {
            let (a, b) = cir_closed_form(&example(), t, t, 1.0).unwrap();
            assert_eq!(a, 0.0);
            assert_eq!(b, 0.0);
        }
    }

    #[test]
    fn matches_reference_values() {
        // independent scipy integration of the Riccati pair
        let (a, b) = cir_closed_form(&example(), 0.5, 1.5, 1.0).unwrap();
        assert!((a - 0.013649946499207331).abs() < 1e-12, "{a}");
        assert!((b - 1.2817157149113068).abs() < 1e-12, "{b}");
        let (a, b) = cir_closed_form(&example(), 0.0, 0.5, 1.0).unwrap();
        assert!((a - 0.0023777029471783212).abs() < 1e-12, "{a}");
        assert!((b - 0.4635900283472537).abs() < 1e-12, "{b}");
    }

    #[test]
    fn no_atom_loading_is_continuous_across_date() {
        let p = CirParams::new(0.02, -0.3, 0.2, 0.0).unwrap();
        let direct = p.flow(1.5, 0.0);
        let (a, b) = cir_closed_form(&p, 0.0, 1.5, 1.0).unwrap();
        assert!((a + direct.0).abs() < 1e-14);
        assert!((b + direct.1).abs() < 1e-14);
    }

    #[test]
    fn rejects_maturity_before_time() {
        assert!(cir_closed_form(&example(), 1.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn params_round_trip_json() {
        let p = example();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<CirParams>(&s).unwrap(), p);
    }
}
