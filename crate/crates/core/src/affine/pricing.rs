//! Bond prices and compensators of the affine model.

use super::params::{CompensatorLoadings, RiskyDates};
use super::riccati::RiccatiSolution;
use super::simulate::StatePath;
use crate::error::{Error, Result};
use crate::grid::TIME_EPS;

/// `1{τ>t} exp(−A(t,T) − B(t,T)ᵀx)`.
pub fn affine_bond_price(sol: &RiccatiSolution, x: &[f64], t: f64, defaulted: bool) -> Result<f64> {
    if x.len() != sol.dim()
        || x.iter().any(|v| !v.is_finite())
        || x[..sol.cone_dim()].iter().any(|&v| v < 0.0)
    {
        return Err(Error::StateOutsideDomain(x.to_vec()));
    }
    if t > sol.maturity() + TIME_EPS {
        return Err(Error::MaturityBeforeTime {
            t,
            maturity: sol.maturity(),
        });
    }
    if defaulted {
        return Ok(0.0);
    }
    let (a, b) = sol.eval(t)?;
    let exponent = a + b.iter().zip(x).map(|(bk, xk)| bk * xk).sum::<f64>();
    Ok((-exponent).exp())
}

/// Affine compensator at `t` along `path`: trapezoid integral of the hazard
/// on the path grid plus `1 − exp(−φ_i − ψ_iᵀX_{u_i})` for each date
/// `u_i ≤ t`.
pub fn affine_compensator(
    loadings: &CompensatorLoadings,
    path: &StatePath,
    dates: &RiskyDates,
    t: f64,
) -> Result<f64> {
    let times = path.times();
    if t < times[0] - TIME_EPS || t > path.horizon() + TIME_EPS {
        return Err(Error::OutOfRange {
            what: "t",
            value: t,
            lo: times[0],
            hi: path.horizon(),
        });
    }
    if loadings.jumps.len() != dates.len() {
        return Err(crate::error::invalid(
            "one atom loading per risky date required",
        ));
    }
    let hazard_at = |s: f64, x: &[f64]| -> Result<f64> {
        let h = loadings.hazard(s, x);
        if h < 0.0 {
            return Err(Error::NegativeHazard { t: s, value: h });
        }
        Ok(h)
    };
    let mut total = 0.0;
    let mut prev = hazard_at(times[0], path.state(0))?;
    for k in 1..times.len() {
        if times[k - 1] >= t - TIME_EPS {
            break;
        }
        let (t0, t1) = (times[k - 1], times[k].min(t));
        let x1 = if t1 < times[k] {
            path.state_at(t1)?
        } else {
            path.state(k).to_vec()
        };
        let h1 = hazard_at(t1, &x1)?;
        total += 0.5 * (t1 - t0) * (prev + h1);
        prev = h1;
    }
    for (i, &u) in dates.as_slice().iter().enumerate() {
        if u <= t + TIME_EPS {
            let x = path.state_at(u)?;
            let e = loadings.atom_exponent(i, &x);
            if e < 0.0 {
                return Err(Error::NegativeHazard { t: u, value: e });
            }
            total += -(-e).exp_m1();
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::params::AffineParams;
    use crate::affine::riccati::riccati_solve;
    use crate::grid::PiecewiseLinear;

    #[test]
    fn zero_loadings_give_zero_compensator() {
        let path = StatePath::constant(vec![0.0, 0.5, 1.0, 2.0], &[0.2]).unwrap();
        let dates = RiskyDates::new(vec![1.0]).unwrap();
        let l = CompensatorLoadings::zero(1, 1);
        for &t in &[0.0, 0.7, 2.0] {
            assert_eq!(affine_compensator(&l, &path, &dates, t).unwrap(), 0.0);
        }
    }

    #[test]
    fn atom_and_linear_parts() {
        let path = StatePath::constant(vec![0.0, 0.5, 1.0, 2.0], &[0.2]).unwrap();
        let dates = RiskyDates::new(vec![1.0]).unwrap();
        let mut l = CompensatorLoadings::zero(1, 1);
        l.jumps[0].psi[0] = 1.0;
        let v = affine_compensator(&l, &path, &dates, 1.0).unwrap();
        assert!((v - 0.18126924692201818).abs() < 1e-15);
        l.phi0 = PiecewiseLinear::constant(0.1, 0.0, 0.0).unwrap();
        l.psi0[0] = PiecewiseLinear::constant(0.5, 0.0, 0.0).unwrap();
        let v = affine_compensator(&l, &path, &dates, 0.75).unwrap();
        assert!((v - 0.75 * (0.1 + 0.5 * 0.2)).abs() < 1e-15);
    }

    #[test]
    fn price_is_one_at_maturity_and_zero_after_default() {
        let p = AffineParams::new(
            1,
            1,
            vec![0.02],
            vec![vec![-0.3]],
            vec![vec![0.0]],
            vec![vec![vec![0.02]]],
        )
        .unwrap();
        let mut l = CompensatorLoadings::zero(1, 0);
        l.psi0[0] = PiecewiseLinear::constant(1.0, 0.0, 0.0).unwrap();
        let sol = riccati_solve(&p, &l, &RiskyDates::default(), 1.0, 0.01).unwrap();
        assert_eq!(affine_bond_price(&sol, &[0.04], 1.0, false).unwrap(), 1.0);
        assert_eq!(affine_bond_price(&sol, &[0.04], 0.3, true).unwrap(), 0.0);
        assert!(affine_bond_price(&sol, &[-0.04], 0.3, false).is_err());
        let p0 = affine_bond_price(&sol, &[0.04], 0.0, false).unwrap();
        assert!(p0 > 0.0 && p0 < 1.0);
    }
}
