use crate::error::{invalid, Error, Result};
use crate::grid::{cell_index, TIME_EPS};
use crate::model::ForwardSurface;

/// Relative jump of `G(t,T) = exp(−Σ g(t,u_j))` at the risky time `u_i`
/// (sum over announced `u_j ∈ (t,T]`) minus its predicted value
/// `e^{g(u_i,u_i)} − 1`.
///
/// Left limits `g(u_i−, ·)` come from linear extrapolation of the two grid
/// values before `u_i`. A gap of more than `1000·tol` between that limit
/// and `g(u_i, ·)` is reported as a discontinuity of the premium in `t`.
pub fn g_jump_check(surface: &ForwardSurface, atom: usize, maturity: f64, tol: f64) -> Result<f64> {
    let sched = surface.schedule();
    if atom >= sched.len() {
        return Err(invalid(format!("no risky time with index {atom}")));
    }
    let u = sched[atom].time();
    if maturity <= u {
        return Err(Error::MaturityBeforeTime { t: u, maturity });
    }
    if !sched[atom].is_announced_by(u - TIME_EPS) {
        return Err(invalid(format!(
            "risky time {u} is not announced before it occurs"
        )));
    }
    if sched
        .entries()
        .iter()
        .any(|e| e.announce_time().is_some_and(|s| (s - u).abs() <= TIME_EPS))
    {
        return Err(invalid(format!(
            "an announcement coincides with the risky time {u}"
        )));
    }
    let grid = surface.time_grid();
    if grid.len() < 3 || u <= grid[0] + TIME_EPS {
        return Err(invalid("need two grid times before the risky time"));
    }
    let k = cell_index(grid, u - TIME_EPS);
    let dt = grid[k + 1].min(u) - grid[k];
    let dt = if dt > TIME_EPS {
        dt
    } else {
        grid[k] - grid[k - 1]
    };
    if u - 2.0 * dt < grid[0] - TIME_EPS {
        return Err(invalid("need two grid times before the risky time"));
    }

    let mut log_left = 0.0;
    let mut log_right = 0.0;
    for j in 0..sched.len() {
        let e = &sched[j];
        if e.time() < u - TIME_EPS
            || e.time() > maturity + TIME_EPS
            || !e.is_announced_by(u - TIME_EPS)
        {
            continue;
        }
        let g_now = surface.premium(u, j)?;
        let g_left = 2.0 * surface.premium(u - dt, j)? - surface.premium(u - 2.0 * dt, j)?;
        if j != atom && (g_left - g_now).abs() > 1e3 * tol {
            return Err(Error::PremiumDiscontinuity {
                u,
                jump: g_now - g_left,
            });
        }
        log_left -= g_left;
        if j != atom {
            log_right -= g_now;
        }
    }
    let g_ii = surface.premium(u, atom)?;
    let g_ii_left = 2.0 * surface.premium(u - dt, atom)? - surface.premium(u - 2.0 * dt, atom)?;
    if (g_ii_left - g_ii).abs() > 1e3 * tol {
        return Err(Error::PremiumDiscontinuity {
            u,
            jump: g_ii - g_ii_left,
        });
    }
    let ratio = (log_right - log_left).exp_m1();
    Ok(ratio - g_ii.exp_m1())
}
