//! Piecewise-linear functions of time and the quadrature built on them.

use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};

/// Absolute slack used when snapping a time onto a grid node.
pub const TIME_EPS: f64 = 1e-12;

pub(crate) fn check_strictly_increasing(xs: &[f64], what: &str) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(invalid(format!("{what} contains a non-finite value")));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid(format!("{what} must be strictly increasing")));
    }
    Ok(())
}

/// Index `k` with `xs[k] <= x <= xs[k+1]`, clamped to the last cell.
pub(crate) fn cell_index(xs: &[f64], x: f64) -> usize {
    debug_assert!(xs.len() >= 2);
    let k = xs.partition_point(|&v| v <= x);
    k.saturating_sub(1).min(xs.len() - 2)
}

/// Linear interpolation weight pair `(k, w)` so that the value at `x` is
/// `(1 - w) y[k] + w y[k+1]`. A single-node grid returns `(0, 0)`.
pub(crate) fn locate(xs: &[f64], x: f64) -> (usize, f64) {
    if xs.len() == 1 {
        return (0, 0.0);
    }
    let k = cell_index(xs, x);
    let w = ((x - xs[k]) / (xs[k + 1] - xs[k])).clamp(0.0, 1.0);
    (k, w)
}

/// Composite trapezoid rule over tabulated points.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// Uniform grid on `[0, horizon]` with spacing at most `step`, refined so
/// each of `dates` inside the horizon is a node.
pub fn aligned_grid(horizon: f64, step: f64, dates: &[f64]) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(invalid(format!("step {step} must be positive")));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(invalid(format!("horizon {horizon} must be positive")));
    }
    let mut bounds = vec![0.0];
    bounds.extend(
        dates
            .iter()
            .copied()
            .filter(|&u| u > TIME_EPS && u < horizon - TIME_EPS),
    );
    bounds.push(horizon);
    bounds.sort_by(f64::total_cmp);
    bounds.dedup_by(|b, a| *b - *a <= TIME_EPS);
    let mut times = vec![0.0];
    for w in bounds.windows(2) {
        let n = ((w[1] - w[0]) / step - 1e-9).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / n as f64;
        times.extend((1..n).map(|j| w[0] + j as f64 * h));
        times.push(w[1]);
    }
    Ok(times)
}

/// A continuous piecewise-linear function on `[knots[0], knots[last]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPiecewise", into = "RawPiecewise")]
pub struct PiecewiseLinear {
    knots: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawPiecewise {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<RawPiecewise> for PiecewiseLinear {
    type Error = Error;
    fn try_from(raw: RawPiecewise) -> Result<Self> {
        PiecewiseLinear::new(raw.knots, raw.values)
    }
}

impl From<PiecewiseLinear> for RawPiecewise {
    fn from(p: PiecewiseLinear) -> Self {
        RawPiecewise {
            knots: p.knots,
            values: p.values,
        }
    }
}

impl PiecewiseLinear {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.is_empty() || knots.len() != values.len() {
            return Err(invalid(format!(
                "piecewise-linear function needs matching non-empty knots and values ({} vs {})",
                knots.len(),
                values.len()
            )));
        }
        check_strictly_increasing(&knots, "knots")?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("piecewise-linear values must be finite"));
        }
        Ok(Self { knots, values })
    }

    /// Constant function on `[start, end]`.
    pub fn constant(value: f64, start: f64, end: f64) -> Result<Self> {
        if end > start {
            Self::new(vec![start, end], vec![value, value])
        } else {
            Self::new(vec![start], vec![value])
        }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn start(&self) -> f64 {
        self.knots[0]
    }

    pub fn end(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    pub fn covers(&self, t: f64) -> bool {
        t >= self.start() - TIME_EPS && t <= self.end() + TIME_EPS
    }

    /// Value at `t`; held flat outside the knot range.
    pub fn eval(&self, t: f64) -> f64 {
        let (k, w) = locate(&self.knots, t);
        if w == 0.0 {
            self.values[k]
        } else {
            (1.0 - w) * self.values[k] + w * self.values[k + 1]
        }
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Exact integral over `[a, b]` (`a <= b`), extended flat outside the
    /// knot range. Equals the trapezoid rule on the knots with linearly
    /// interpolated endpoints.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let mut total = 0.0;
        // flat extension to the left
        if a < self.start() {
            let right = b.min(self.start());
            total += (right - a) * self.values[0];
        }
        // flat extension to the right
        if b > self.end() {
            let left = a.max(self.end());
            total += (b - left) * *self.values.last().unwrap();
        }
        let lo = a.max(self.start());
        let hi = b.min(self.end());
        if hi > lo {
            let first = self.knots.partition_point(|&k| k <= lo);
            let last = self.knots.partition_point(|&k| k < hi);
            let mut x_prev = lo;
            let mut y_prev = self.eval(lo);
            for i in first..last {
                let (x, y) = (self.knots[i], self.values[i]);
                total += 0.5 * (x - x_prev) * (y + y_prev);
                x_prev = x;
                y_prev = y;
            }
            total += 0.5 * (hi - x_prev) * (self.eval(hi) + y_prev);
        }
        total
    }

    /// Pointwise map of the knot values.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            self.knots.clone(),
            self.values.iter().map(|&v| f(v)).collect(),
        )
    }
}
