use super::hjm::HjmCoefficients;
use crate::grid::{cell_index, TIME_EPS};
use crate::model::ForwardSurface;

/// Drift coefficients implied by a tabulated surface with no volatility.
///
/// `a(t,u)` and `α(t,u_i)` are the right derivatives in `t` of the
/// interpolated `f` and `g`, so a surface that does not move in `t` has
/// zero drift. `b`, `β` and the news kernel vanish. Premiums are `NaN` at
/// maturities that are not risky times and at times outside the grid.
pub fn surface_coefficients(surface: &ForwardSurface) -> HjmCoefficients<'_> {
    let mut coef = HjmCoefficients::zero(1, surface.schedule().clone());
    let grid = surface.time_grid();
    let cell = move |t: f64| -> Option<(f64, f64)> {
        (grid.len() >= 2).then(|| {
            let k = cell_index(grid, t);
            (grid[k], grid[k + 1])
        })
    };
    let atom_index = move |u: f64| {
        surface
            .schedule()
            .entries()
            .iter()
            .position(|e| (e.time() - u).abs() <= TIME_EPS)
    };
    coef.a = Box::new(move |t, u| match cell(t) {
        None => 0.0,
        Some((t0, t1)) => {
            let f0 = surface.forward(t0, u).unwrap_or(f64::NAN);
            let f1 = surface.forward(t1, u).unwrap_or(f64::NAN);
            (f1 - f0) / (t1 - t0)
        }
    });
    coef.alpha = Box::new(move |t, u| match (cell(t), atom_index(u)) {
        (_, None) => f64::NAN,
        (None, Some(_)) => 0.0,
        (Some((t0, t1)), Some(i)) => {
            let g0 = surface.premium(t0, i).unwrap_or(f64::NAN);
            let g1 = surface.premium(t1, i).unwrap_or(f64::NAN);
            (g1 - g0) / (t1 - t0)
        }
    });
    coef.g = Box::new(move |t, u| match atom_index(u) {
        Some(i) => surface.premium(t, i).unwrap_or(f64::NAN),
        None => f64::NAN,
    });
    coef
}
