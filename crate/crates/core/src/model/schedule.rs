use crate::error::{invalid, Result};
use crate::grid::check_strictly_increasing;
use serde::{Deserialize, Serialize};

/// A predictable time at which default happens with conditional
/// probability `gamma`, optionally announced at `announce_time`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskyTime {
    time: f64,
    gamma: f64,
    announce_time: Option<f64>,
}

impl RiskyTime {
    pub fn new(time: f64, gamma: f64, announce_time: Option<f64>) -> Result<Self> {
        if !(time.is_finite() && time >= 0.0) {
            return Err(invalid(format!(
                "risky time {time} must be finite and non-negative"
            )));
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(invalid(format!(
                "default mass gamma = {gamma} must lie in (0, 1)"
            )));
        }
        if let Some(s) = announce_time {
            if !(s.is_finite() && s >= 0.0 && s < time) {
                return Err(invalid(format!(
                    "announcement {s} must be non-negative and strictly before {time}"
                )));
            }
        }
        Ok(Self {
            time,
            gamma,
            announce_time,
        })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn announce_time(&self) -> Option<f64> {
        self.announce_time
    }

    /// Whether the market knows about this risky time at `t`. Times without
    /// an announcement are deterministic and known from the start.
    pub fn is_announced_by(&self, t: f64) -> bool {
        self.announce_time.is_none_or(|s| s <= t)
    }

    /// `−log(1 − Γ)`, the size of the corresponding jump in `H′`.
    pub fn log_jump(&self) -> f64 {
        -(-self.gamma).ln_1p()
    }
}

/// Risky times in strictly increasing order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RiskySchedule {
    entries: Vec<RiskyTime>,
}

impl RiskySchedule {
    pub fn new(entries: Vec<RiskyTime>) -> Result<Self> {
        let times: Vec<f64> = entries.iter().map(|e| e.time).collect();
        check_strictly_increasing(&times, "risky times")?;
        Ok(Self { entries })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[RiskyTime] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.time).collect()
    }

    /// Indices of risky times in the half-open window `(t, maturity]`.
    ///
    /// This is the single atom-inclusion convention used throughout the
    /// crate: an atom at `u` counts iff `t < u <= maturity`. It gives
    /// `P(T, T) = 1` before default and right-continuity in the maturity.
    pub fn in_window(&self, t: f64, maturity: f64) -> impl Iterator<Item = usize> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(move |(_, e)| t < e.time && e.time <= maturity)
            .map(|(i, _)| i)
    }

    /// Indices of risky times `u <= t`.
    pub fn up_to(&self, t: f64) -> impl Iterator<Item = usize> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.time <= t)
            .map(|(i, _)| i)
    }
}

impl std::ops::Index<usize> for RiskySchedule {
    type Output = RiskyTime;
    fn index(&self, i: usize) -> &RiskyTime {
        &self.entries[i]
    }
}
