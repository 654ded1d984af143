use super::martingale::{martingale_mc_test, MartingaleReport};
use crate::affine::{
    affine_bond_price, simulate_state_on, AffineParams, CompensatorLoadings, RiccatiSolution,
    RiskyDates,
};
use crate::default_sim::{simulate_tau_with, HazardAtom, HazardPath};
use crate::error::{invalid, Error, Result};
use crate::grid::{aligned_grid, PiecewiseLinear};
use crate::par::Execution;

/// What the martingale test keeps of one simulated path: the state at each
/// test time and the default time.
struct CompactPath {
    states: Vec<Vec<f64>>,
    tau: f64,
}

/// Martingale test for an affine model with zero short rate.
///
/// Each path runs the Euler scheme for the state on a grid of spacing at
/// most `step` (with the risky dates and test times as nodes), then draws
/// `τ` from the hazard `φ_0 + ψ_0ᵀX` and atom jumps `φ_i + ψ_iᵀX_{u_i}`.
/// Prices come from `pricing`, which may differ from the dynamics to probe a
/// mispriced model.
#[allow(clippy::too_many_arguments)]
pub fn affine_martingale_test(
    params: &AffineParams,
    loadings: &CompensatorLoadings,
    dates: &RiskyDates,
    pricing: &RiccatiSolution,
    x0: &[f64],
    t_grid: &[f64],
    n_paths: usize,
    step: f64,
    seed: u64,
    exec: Execution,
) -> Result<MartingaleReport> {
    loadings.validate(params, dates)?;
    if !params.in_state_space(x0) {
        return Err(Error::StateOutsideDomain(x0.to_vec()));
    }
    let maturity = pricing.maturity();
    let mut nodes: Vec<f64> = dates.as_slice().to_vec();
    nodes.extend_from_slice(t_grid);
    let times = aligned_grid(maturity, step, &nodes)?;
    let mut test_times = vec![0.0];
    test_times.extend_from_slice(t_grid);
    // resolve test times to node indices once
    let mut test_nodes = Vec::with_capacity(test_times.len());
    for &t in &test_times {
        let k = times
            .iter()
            .position(|&s| (s - t).abs() <= 1e-9 * maturity.max(1.0))
            .ok_or_else(|| invalid(format!("test time {t} outside [0, {maturity}]")))?;
        test_nodes.push(k);
    }
    // the loadings are deterministic, so evaluate them on the grid once
    let phi0: Vec<f64> = times.iter().map(|&t| loadings.phi0.eval(t)).collect();
    let psi0: Vec<Vec<f64>> = loadings
        .psi0
        .iter()
        .map(|p| times.iter().map(|&t| p.eval(t)).collect())
        .collect();
    let simulate = |rng: &mut rand_chacha::ChaCha8Rng| -> CompactPath {
        let path = simulate_state_on(params, x0, &times, rng).expect("initial state validated");
        let lam: Vec<f64> = (0..times.len())
            .map(|k| {
                let x = path.state(k);
                let h = phi0[k] + psi0.iter().zip(x).map(|(p, xi)| p[k] * xi).sum::<f64>();
                h.max(0.0)
            })
            .collect();
        let atoms = dates
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(_, &u)| u <= maturity)
            .map(|(i, &u)| {
                let k = path.node(u).expect("risky dates are grid nodes");
                HazardAtom {
                    u,
                    lam_prime: loadings.atom_exponent(i, path.state(k)).max(0.0),
                }
            })
            .collect();
        let lam = PiecewiseLinear::new(times.clone(), lam).expect("grid is increasing");
        let hazard = HazardPath::new(lam, atoms, maturity).expect("hazard is non-negative");
        let tau = simulate_tau_with(&hazard, rng).tau;
        CompactPath {
            states: test_nodes.iter().map(|&k| path.state(k).to_vec()).collect(),
            tau,
        }
    };
    let price = |t: f64, p: &CompactPath| -> f64 {
        let j = test_times
            .iter()
            .position(|&s| s == t)
            .expect("prices are requested at test times");
        affine_bond_price(pricing, &p.states[j], t, p.tau <= t).unwrap_or(f64::NAN)
    };
    martingale_mc_test(simulate, price, t_grid, maturity, n_paths, seed, exec)
}
