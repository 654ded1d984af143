//! Backward Riccati equations with jump resets at risky dates.

use super::params::{AffineParams, CompensatorLoadings, RiskyDates};
use crate::error::{Error, Result};
use crate::grid::TIME_EPS;
use std::fmt::Write;

/// Left limit stored at a risky-date node.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpMarker {
    pub node: usize,
    pub date_index: usize,
    pub a_left: f64,
    pub b_left: Vec<f64>,
    da_left: f64,
    db_left: Vec<f64>,
}

/// Right-continuous solution `t ↦ (A(t,T), B(t,T))` on `[start, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiSolution {
    start: f64,
    maturity: f64,
    dim: usize,
    cone_dim: usize,
    times: Vec<f64>,
    a: Vec<f64>,
    // node-major, dim entries per node
    b: Vec<f64>,
    da: Vec<f64>,
    db: Vec<f64>,
    markers: Vec<JumpMarker>,
}

struct Rhs<'a> {
    params: &'a AffineParams,
    loadings: &'a CompensatorLoadings,
}

fn quad_form(m: &[Vec<f64>], b: &[f64]) -> f64 {
    m.iter()
        .zip(b)
        .map(|(row, bk)| bk * row.iter().zip(b).map(|(v, bl)| v * bl).sum::<f64>())
        .sum()
}

impl Rhs<'_> {
    /// Time derivative `(∂_t A, ∂_t B)` at `(t, B)`.
    fn eval(&self, t: f64, b: &[f64], db: &mut [f64]) -> f64 {
        let p = self.params;
        let mu0_b: f64 = p.mu0().iter().zip(b).map(|(m, x)| m * x).sum();
        let da = -(self.loadings.phi0.eval(t) + mu0_b - quad_form(p.sigma0(), b));
        for (k, out) in db.iter_mut().enumerate() {
            let mu_b: f64 = p.mu(k).iter().zip(b).map(|(m, x)| m * x).sum();
            *out = -(self.loadings.psi0[k].eval(t) + mu_b - quad_form(p.sigma(k), b));
        }
        da
    }

    /// One classical RK4 step from `t` to `t + h` (`h < 0` steps backward).
    fn rk4(&self, t: f64, h: f64, a: &mut f64, b: &mut [f64]) {
        let d = b.len();
        let mut k1 = vec![0.0; d];
        let mut k2 = vec![0.0; d];
        let mut k3 = vec![0.0; d];
        let mut k4 = vec![0.0; d];
        let mut tmp = vec![0.0; d];
        let a1 = self.eval(t, b, &mut k1);
        for i in 0..d {
            tmp[i] = b[i] + 0.5 * h * k1[i];
        }
        let a2 = self.eval(t + 0.5 * h, &tmp, &mut k2);
        for i in 0..d {
            tmp[i] = b[i] + 0.5 * h * k2[i];
        }
        let a3 = self.eval(t + 0.5 * h, &tmp, &mut k3);
        for i in 0..d {
            tmp[i] = b[i] + h * k3[i];
        }
        let a4 = self.eval(t + h, &tmp, &mut k4);
        *a += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        for i in 0..d {
            b[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
}

/// Solves the Riccati system backward from `A(T,T) = 0, B(T,T) = 0` with
/// fixed-step RK4.
///
/// Every risky date `u_i` in `(0, T]` is a grid node. Crossing it, the
/// solver moves from the stored right value to the left limit
/// `A(u_i−) = A(u_i) + φ_i`, `B(u_i−) = B(u_i) + ψ_i`. A date equal to `T`
/// falls in the window `(t, T]` for every `t < T`, so it jumps at the
/// terminal node.
pub fn riccati_solve(
    params: &AffineParams,
    loadings: &CompensatorLoadings,
    dates: &RiskyDates,
    maturity: f64,
    step: f64,
) -> Result<RiccatiSolution> {
    riccati_solve_from(params, loadings, dates, 0.0, maturity, step)
}

/// [`riccati_solve`] on `[start, T]` only.
pub fn riccati_solve_from(
    params: &AffineParams,
    loadings: &CompensatorLoadings,
    dates: &RiskyDates,
    start: f64,
    maturity: f64,
    step: f64,
) -> Result<RiccatiSolution> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidInput(format!("step {step} must be positive")));
    }
    if !(start >= 0.0 && maturity >= start && maturity.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "need 0 <= start <= maturity, got [{start}, {maturity}]"
        )));
    }
    loadings.validate(params, dates)?;
    let gap = dates
        .as_slice()
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if step > gap {
        return Err(Error::StepTooLarge { step, gap });
    }

    // segment boundaries: start, the dates inside (start, T), T
    let mut bounds = vec![start];
    bounds.extend(
        dates
            .as_slice()
            .iter()
            .copied()
            .filter(|&u| u > start && u < maturity),
    );
    if maturity > start {
        bounds.push(maturity);
    }
    let mut times = vec![bounds[0]];
    for w in bounds.windows(2) {
        let n = ((w[1] - w[0]) / step).ceil().max(1.0) as usize;
        let h = (w[1] - w[0]) / n as f64;
        for j in 1..n {
            times.push(w[0] + j as f64 * h);
        }
        times.push(w[1]);
    }

    let d = params.dim();
    let rhs = Rhs { params, loadings };
    let n = times.len();
    let mut a_vals = vec![0.0; n];
    let mut b_vals = vec![0.0; n * d];
    let mut da = vec![0.0; n];
    let mut db = vec![0.0; n * d];
    let mut markers = Vec::new();

    let date_at = |t: f64| {
        dates
            .as_slice()
            .iter()
            .position(|&u| (u - t).abs() <= TIME_EPS)
    };

    let mut a = 0.0;
    let mut b = vec![0.0; d];
    for k in (0..n).rev() {
        let t = times[k];
        if k + 1 < n {
            let mut a_new = a;
            rhs.rk4(times[k + 1], t - times[k + 1], &mut a_new, &mut b);
            a = a_new;
        }
        a_vals[k] = a;
        b_vals[k * d..(k + 1) * d].copy_from_slice(&b);
        da[k] = rhs.eval(t, &b, &mut db[k * d..(k + 1) * d]);
        if t > start {
            if let Some(i) = date_at(t) {
                let jump = &loadings.jumps[i];
                a += jump.phi;
                for (bk, pk) in b.iter_mut().zip(&jump.psi) {
                    *bk += pk;
                }
                let mut db_left = vec![0.0; d];
                let da_left = rhs.eval(t, &b, &mut db_left);
                markers.push(JumpMarker {
                    node: k,
                    date_index: i,
                    a_left: a,
                    b_left: b.clone(),
                    da_left,
                    db_left,
                });
            }
        }
    }
    markers.reverse();

    Ok(RiccatiSolution {
        start,
        maturity,
        dim: d,
        cone_dim: params.cone_dim(),
        times,
        a: a_vals,
        b: b_vals,
        da,
        db,
        markers,
    })
}

impl RiccatiSolution {
    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn maturity(&self) -> f64 {
        self.maturity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cone_dim(&self) -> usize {
        self.cone_dim
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn a_at_node(&self, k: usize) -> f64 {
        self.a[k]
    }

    pub fn b_at_node(&self, k: usize) -> &[f64] {
        &self.b[k * self.dim..(k + 1) * self.dim]
    }

    pub fn markers(&self) -> &[JumpMarker] {
        &self.markers
    }

    fn marker_at(&self, node: usize) -> Option<&JumpMarker> {
        self.markers.iter().find(|m| m.node == node)
    }

    fn check(&self, t: f64) -> Result<()> {
        if t.is_nan() || t < self.start - TIME_EPS || t > self.maturity + TIME_EPS {
            return Err(Error::OutOfRange {
                what: "t",
                value: t,
                lo: self.start,
                hi: self.maturity,
            });
        }
        Ok(())
    }

    fn node_of(&self, t: f64) -> Option<usize> {
        let k = self.times.partition_point(|&s| s < t - TIME_EPS);
        (k < self.times.len() && (self.times[k] - t).abs() <= TIME_EPS).then_some(k)
    }

    /// `(A(t,T), B(t,T))`, right-continuous in `t`. Off-grid values use
    /// cubic Hermite interpolation with the ODE derivatives at the nodes.
    pub fn eval(&self, t: f64) -> Result<(f64, Vec<f64>)> {
        self.check(t)?;
        if let Some(k) = self.node_of(t) {
            return Ok((self.a[k], self.b_at_node(k).to_vec()));
        }
        let k = crate::grid::cell_index(&self.times, t);
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let d = self.dim;
        // the right end of the cell is approached from the left
        let (a1, b1, da1, db1) = match self.marker_at(k + 1) {
            Some(m) => (
                m.a_left,
                m.b_left.as_slice(),
                m.da_left,
                m.db_left.as_slice(),
            ),
            None => (
                self.a[k + 1],
                self.b_at_node(k + 1),
                self.da[k + 1],
                &self.db[(k + 1) * d..(k + 2) * d],
            ),
        };
        let herm = |y0: f64, dy0: f64, y1: f64, dy1: f64| {
            h00 * y0 + h10 * h * dy0 + h01 * y1 + h11 * h * dy1
        };
        let a = herm(self.a[k], self.da[k], a1, da1);
        let b0 = self.b_at_node(k);
        let db0 = &self.db[k * d..(k + 1) * d];
        let b = (0..d).map(|i| herm(b0[i], db0[i], b1[i], db1[i])).collect();
        Ok((a, b))
    }

    /// Left limit `(A(t−,T), B(t−,T))`; differs from [`eval`](Self::eval)
    /// only at risky dates.
    pub fn eval_left(&self, t: f64) -> Result<(f64, Vec<f64>)> {
        self.check(t)?;
        if let Some(k) = self.node_of(t) {
            if let Some(m) = self.marker_at(k) {
                return Ok((m.a_left, m.b_left.clone()));
            }
        }
        self.eval(t)
    }

    /// CSV with columns `t,A,B_1..B_d,risky`; at a risky date the left
    /// limit row (flag 0) precedes the node row (flag 1).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,A");
        for i in 1..=self.dim {
            let _ = write!(out, ",B_{i}");
        }
        out.push_str(",risky\n");
        let row = |out: &mut String, t: f64, a: f64, b: &[f64], flag: u8| {
            let _ = write!(out, "{t:.16e},{a:.16e}");
            for v in b {
                let _ = write!(out, ",{v:.16e}");
            }
            let _ = writeln!(out, ",{flag}");
        };
        for (k, &t) in self.times.iter().enumerate() {
            let marker = self.marker_at(k);
            if let Some(m) = marker {
                row(&mut out, t, m.a_left, &m.b_left, 0);
            }
            row(
                &mut out,
                t,
                self.a[k],
                self.b_at_node(k),
                u8::from(marker.is_some()),
            );
        }
        out
    }
}
