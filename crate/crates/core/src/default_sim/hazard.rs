use crate::error::{invalid, Error, Result};
use crate::grid::{check_strictly_increasing, PiecewiseLinear, TIME_EPS};
use crate::model::CompensatorSpec;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HazardAtom {
    pub u: f64,
    /// Jump `λ′` of the integrated hazard at `u`; may be infinite.
    #[serde(rename = "lamp")]
    pub lam_prime: f64,
}

/// Integrated hazard `Λ_t = ∫_0^t λ(s) ds + Σ_{u_i ≤ t} λ′_i` on
/// `[0, horizon]`.
///
/// JSON form: `{"lambda":[..], "atoms":[{"u":..,"lamp":..}], "horizon":..}`
/// with `lambda` on a uniform grid over `[0, horizon]` (a single value is a
/// constant).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHazardPath", into = "RawHazardPath")]
pub struct HazardPath {
    lam: PiecewiseLinear,
    atoms: Vec<HazardAtom>,
    horizon: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHazardPath {
    lambda: Vec<f64>,
    #[serde(default)]
    atoms: Vec<HazardAtom>,
    horizon: f64,
}

impl TryFrom<RawHazardPath> for HazardPath {
    type Error = Error;

    fn try_from(raw: RawHazardPath) -> Result<Self> {
        if !(raw.horizon > 0.0 && raw.horizon.is_finite()) {
            return Err(invalid("horizon must be positive"));
        }
        let lam = match raw.lambda.len() {
            0 => return Err(invalid("lambda needs at least one value")),
            1 => PiecewiseLinear::constant(raw.lambda[0], 0.0, raw.horizon)?,
            n => {
                let h = raw.horizon / (n - 1) as f64;
                let knots = (0..n).map(|i| {
                    if i + 1 == n {
                        raw.horizon
                    } else {
                        i as f64 * h
                    }
                });
                PiecewiseLinear::new(knots.collect(), raw.lambda)?
            }
        };
        HazardPath::new(lam, raw.atoms, raw.horizon)
    }
}

impl From<HazardPath> for RawHazardPath {
    fn from(p: HazardPath) -> Self {
        // resample on a uniform grid when the knots are not uniform already
        let knots = p.lam.knots();
        let n = knots.len();
        let lambda = if n == 1 {
            vec![p.lam.values()[0]]
        } else {
            let h = p.horizon / (n - 1) as f64;
            (0..n).map(|i| p.lam.eval(i as f64 * h)).collect()
        };
        RawHazardPath {
            lambda,
            atoms: p.atoms,
            horizon: p.horizon,
        }
    }
}

impl HazardPath {
    pub fn new(lam: PiecewiseLinear, atoms: Vec<HazardAtom>, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(invalid("horizon must be positive"));
        }
        if lam.min_value() < 0.0 {
            let i = lam.values().iter().position(|&v| v < 0.0).unwrap();
            return Err(Error::NegativeHazard {
                t: lam.knots()[i],
                value: lam.values()[i],
            });
        }
        let times: Vec<f64> = atoms.iter().map(|a| a.u).collect();
        check_strictly_increasing(&times, "atom times")?;
        for a in &atoms {
            if !(a.lam_prime >= 0.0) {
                return Err(invalid(format!(
                    "atom jump {} must be non-negative",
                    a.lam_prime
                )));
            }
            if a.u < 0.0 || a.u > horizon + TIME_EPS {
                return Err(invalid(format!("atom at {} outside [0, {horizon}]", a.u)));
            }
        }
        Ok(Self {
            lam,
            atoms,
            horizon,
        })
    }

    /// Hazard `h` with atoms `λ′_i = −log(1 − Γ_i)`, so that the atom hit
    /// probability at `u_i` is `Γ_i`.
    pub fn from_compensator(spec: &CompensatorSpec) -> Result<Self> {
        let atoms = spec
            .schedule()
            .entries()
            .iter()
            .map(|e| HazardAtom {
                u: e.time(),
                lam_prime: e.log_jump(),
            })
            .collect();
        Self::new(spec.hazard().clone(), atoms, spec.horizon())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| invalid(format!("hazard JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("hazard path serializes")
    }

    pub fn lam(&self) -> &PiecewiseLinear {
        &self.lam
    }

    pub fn atoms(&self) -> &[HazardAtom] {
        &self.atoms
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    fn check(&self, t: f64) -> Result<()> {
        if t.is_nan() || t < -TIME_EPS || t > self.horizon + TIME_EPS {
            return Err(Error::OutOfRange {
                what: "t",
                value: t,
                lo: 0.0,
                hi: self.horizon,
            });
        }
        Ok(())
    }

    /// `Λ_t`, right-continuous.
    pub fn cumulative(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|a| a.u <= t + TIME_EPS)
            .map(|a| a.lam_prime)
            .sum();
        Ok(self.lam.integral(0.0, t) + atoms)
    }
}

/// `1{τ>t} exp(−∫_t^T λ(s) ds − Σ_{u_i ∈ (t,T]} λ′_i)` with zero interest.
pub fn deterministic_term_structure(
    path: &HazardPath,
    t: f64,
    maturity: f64,
    defaulted: bool,
) -> Result<f64> {
    path.check(t)?;
    path.check(maturity)?;
    if maturity < t {
        return Err(Error::MaturityBeforeTime { t, maturity });
    }
    if defaulted {
        return Ok(0.0);
    }
    let atoms: f64 = path
        .atoms
        .iter()
        .filter(|a| a.u > t + TIME_EPS && a.u <= maturity + TIME_EPS)
        .map(|a| a.lam_prime)
        .sum();
    Ok((-path.lam.integral(t, maturity) - atoms).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ForwardSurface, RiskySchedule, RiskyTime};

    fn path() -> HazardPath {
        HazardPath::from_json(r#"{"lambda":[0.02],"atoms":[{"u":1.0,"lamp":0.05}],"horizon":3.0}"#)
            .unwrap()
    }

    #[test]
    fn flat_curve_with_one_atom() {
        let p = deterministic_term_structure(&path(), 0.5, 1.5, false).unwrap();
        assert!((p - 0.9323938199059483).abs() < 1e-15);
        assert_eq!(
            deterministic_term_structure(&path(), 0.5, 1.5, true).unwrap(),
            0.0
        );
        assert_eq!(
            deterministic_term_structure(&path(), 1.2, 1.2, false).unwrap(),
            1.0
        );
    }

    #[test]
    fn agrees_with_surface_prices() {
        let sched = RiskySchedule::new(vec![
            RiskyTime::new(1.0, 1.0 - (-0.05f64).exp(), None).unwrap()
        ])
        .unwrap();
        let curve = PiecewiseLinear::constant(0.02, 0.0, 3.0).unwrap();
        let surface =
            ForwardSurface::static_curve(vec![0.0, 1.0, 2.0, 3.0], &curve, &[0.05], sched).unwrap();
        for &(t, m) in &[(0.0, 0.5), (0.0, 1.0), (0.5, 2.5), (1.0, 3.0), (2.0, 2.0)] {
            let a = deterministic_term_structure(&path(), t, m, false).unwrap();
            let b = surface.bond_price(t, m, false).unwrap();
            assert!((a - b).abs() < 1e-15, "{t} {m}");
        }
    }

    #[test]
    fn cumulative_is_right_continuous() {
        let p = path();
        assert!((p.cumulative(1.0).unwrap() - 0.07).abs() < 1e-15);
        assert!((p.cumulative(1.0 - 1e-9).unwrap() - 0.02).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip_uniform_grid() {
        let p = HazardPath::from_json(
            r#"{"lambda":[0.1,0.2,0.4],"atoms":[{"u":0.5,"lamp":1.5}],"horizon":2.0}"#,
        )
        .unwrap();
        assert_eq!(p.lam.knots(), &[0.0, 1.0, 2.0]);
        assert_eq!(HazardPath::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn rejects_negative_inputs() {
        assert!(HazardPath::from_json(r#"{"lambda":[-0.1],"horizon":1.0}"#).is_err());
        assert!(HazardPath::from_json(
            r#"{"lambda":[0.1],"atoms":[{"u":0.5,"lamp":-1}],"horizon":1.0}"#
        )
        .is_err());
        assert!(HazardPath::from_json(r#"{"lambda":[0.1],"horizon":1.0,"x":1}"#).is_err());
    }
}
