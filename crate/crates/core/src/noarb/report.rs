use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub t: f64,
    #[serde(rename = "T")]
    pub maturity: f64,
}

/// Largest residual of one condition over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub condition: String,
    pub max_residual: f64,
    pub argmax: GridPoint,
    pub pass: bool,
    pub tol: f64,
}

impl DriftReport {
    pub fn new(condition: &str, tol: f64) -> Self {
        Self {
            condition: condition.to_string(),
            max_residual: 0.0,
            argmax: GridPoint {
                t: 0.0,
                maturity: 0.0,
            },
            pass: true,
            tol,
        }
    }

    /// Records a residual. The first maximum in grid order wins, so ties
    /// resolve the same way on every run.
    pub fn record(&mut self, residual: f64, t: f64, maturity: f64) {
        // NaN counts as an unbounded residual
        let r = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual.abs()
        };
        if r > self.max_residual {
            self.max_residual = r;
            self.argmax = GridPoint { t, maturity };
        }
        self.pass = self.max_residual <= self.tol;
    }
}

pub fn all_pass(reports: &[DriftReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

pub fn reports_to_json(reports: &[DriftReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}
