use crate::error::{invalid, Result};
use crate::model::{RiskySchedule, RiskyTime};
use crate::par::path_rng;
use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

/// Conditional default probability `1 − e^{−1}` at every announced time.
pub const ANNOUNCED_GAMMA: f64 = 0.632_120_558_828_557_7;

/// Law of the delay between a news time and the risky time it announces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum DelayLaw {
    Exponential { mean: f64 },
    Fixed { delay: f64 },
    Uniform { lo: f64, hi: f64 },
}

impl DelayLaw {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            DelayLaw::Exponential { mean } => mean > 0.0 && mean.is_finite(),
            DelayLaw::Fixed { delay } => delay > 0.0 && delay.is_finite(),
            DelayLaw::Uniform { lo, hi } => lo > 0.0 && hi > lo && hi.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("delays must be positive: {self:?}")))
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            DelayLaw::Exponential { mean } => mean * Exp::new(1.0).unwrap().sample(rng),
            DelayLaw::Fixed { delay } => delay,
            DelayLaw::Uniform { lo, hi } => rng.random_range(lo..hi),
        }
    }
}

/// Poisson news times `S_i` with intensity `rate`, each announcing a risky
/// time `U_i = S_i + delay` with conditional default probability
/// `1 − e^{−1}`. Risky times beyond `horizon` are dropped.
pub fn announced_scenario(
    rate: f64,
    delay: DelayLaw,
    horizon: f64,
    seed: u64,
) -> Result<RiskySchedule> {
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(invalid(format!("news rate {rate} must be positive")));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(invalid(format!("horizon {horizon} must be positive")));
    }
    delay.validate()?;
    let mut rng = path_rng(seed, 0);
    let gap = Exp::new(rate).map_err(|e| invalid(e.to_string()))?;
    let mut pairs = Vec::new();
    let mut s = gap.sample(&mut rng);
    while s < horizon {
        let u = s + delay.sample(&mut rng);
        if u <= horizon {
            pairs.push((u, s));
        }
        s += gap.sample(&mut rng);
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // fixed delays keep distinct news times distinct; ties have probability 0 otherwise
    pairs.dedup_by(|a, b| a.0 == b.0);
    let entries = pairs
        .into_iter()
        .map(|(u, s)| RiskyTime::new(u, ANNOUNCED_GAMMA, Some(s)))
        .collect::<Result<_>>()?;
    RiskySchedule::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_constant_matches() {
        assert!((ANNOUNCED_GAMMA - (1.0 - (-1.0f64).exp())).abs() < 1e-16);
    }

    #[test]
    fn atoms_are_announced_and_inside_horizon() {
        let law = DelayLaw::Exponential { mean: 1.0 };
        for seed in 0..50 {
            let s = announced_scenario(2.0, law, 5.0, seed).unwrap();
            for e in s.entries() {
                assert_eq!(e.gamma(), ANNOUNCED_GAMMA);
                let a = e.announce_time().unwrap();
                assert!(a < e.time() && e.time() <= 5.0);
            }
        }
    }

    #[test]
    fn tiny_rate_gives_empty_schedule() {
        let law = DelayLaw::Fixed { delay: 0.1 };
        let empty = (0..100).filter(|&s| announced_scenario(1e-9, law, 1.0, s).unwrap().is_empty());
        assert_eq!(empty.count(), 100);
    }

    #[test]
    fn rejects_bad_inputs() {
        let law = DelayLaw::Uniform { lo: 0.5, hi: 0.2 };
        assert!(announced_scenario(1.0, law, 1.0, 0).is_err());
        assert!(announced_scenario(0.0, DelayLaw::Fixed { delay: 1.0 }, 1.0, 0).is_err());
    }

    #[test]
    fn delay_law_json() {
        let law: DelayLaw = serde_json::from_str(r#"{"law":"exponential","mean":2.0}"#).unwrap();
        assert_eq!(law, DelayLaw::Exponential { mean: 2.0 });
    }
}
