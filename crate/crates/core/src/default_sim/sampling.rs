use super::hazard::HazardPath;
use crate::error::Result;
use crate::grid::TIME_EPS;
use crate::model::CompensatorSpec;
use crate::par::{map_paths, mean_and_stderr, path_rng, Execution};
use rand::Rng;
use serde::Serialize;
use std::fmt::Write;

/// A sampled default time; `tau` is infinite when `Λ` stays below the
/// threshold up to the horizon (`null` in JSON).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DefaultSample {
    pub tau: f64,
    pub hit_atom: Option<usize>,
}

impl DefaultSample {
    pub fn defaulted_by(&self, t: f64) -> bool {
        self.tau <= t
    }
}

/// `τ = inf{t : Λ_t ≥ ζ}` for a given threshold `ζ`.
///
/// Between breakpoints `λ` is linear, so the continuous crossing solves a
/// quadratic exactly. An atom is hit when `Λ_{u−} < ζ ≤ Λ_u`.
pub fn first_passage(path: &HazardPath, zeta: f64) -> DefaultSample {
    let lam = path.lam();
    let horizon = path.horizon();
    let atoms = path.atoms();
    let mut breaks: Vec<f64> = lam
        .knots()
        .iter()
        .copied()
        .filter(|&k| k > 0.0 && k < horizon)
        .chain(atoms.iter().map(|a| a.u).filter(|&u| u > 0.0))
        .chain(std::iter::once(horizon))
        .collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= TIME_EPS);

    let mut acc = 0.0;
    let mut next_atom = 0;
    // atoms at time 0 act before any hazard accrues
    while next_atom < atoms.len() && atoms[next_atom].u <= TIME_EPS {
        acc += atoms[next_atom].lam_prime;
        if acc >= zeta {
            return DefaultSample {
                tau: atoms[next_atom].u,
                hit_atom: Some(next_atom),
            };
        }
        next_atom += 1;
    }
    let mut a = 0.0;
    for &b in &breaks {
        let (la, lb) = (lam.eval(a), lam.eval(b));
        let width = b - a;
        let cell = 0.5 * (la + lb) * width;
        if acc + cell >= zeta && cell > 0.0 {
            let r = zeta - acc;
            let slope = (lb - la) / width;
            // ½ slope y² + la y = r, in the cancellation-free form
            let disc = (la * la + 2.0 * slope * r).max(0.0);
            let y = (2.0 * r / (la + disc.sqrt())).min(width);
            return DefaultSample {
                tau: a + y,
                hit_atom: None,
            };
        }
        acc += cell;
        while next_atom < atoms.len() && atoms[next_atom].u <= b + TIME_EPS {
            acc += atoms[next_atom].lam_prime;
            if acc >= zeta {
                return DefaultSample {
                    tau: atoms[next_atom].u,
                    hit_atom: Some(next_atom),
                };
            }
            next_atom += 1;
        }
        a = b;
    }
    DefaultSample {
        tau: f64::INFINITY,
        hit_atom: None,
    }
}

/// Draws `ζ = −log(1 − V)` from a uniform `V ∈ [0, 1)` and returns the first
/// passage of `Λ` over it.
pub fn simulate_tau_with<R: Rng + ?Sized>(path: &HazardPath, rng: &mut R) -> DefaultSample {
    let v: f64 = rng.random();
    first_passage(path, -(-v).ln_1p())
}

/// One default time from the generator of path 0 under `seed`.
pub fn simulate_tau(path: &HazardPath, seed: u64) -> DefaultSample {
    simulate_tau_with(path, &mut path_rng(seed, 0))
}

/// `n` default times, path `i` drawn from `path_rng(seed, i)`.
pub fn simulate_tau_ensemble(
    path: &HazardPath,
    n: usize,
    seed: u64,
    exec: Execution,
) -> Vec<DefaultSample> {
    map_paths(exec, n, |i| simulate_tau_with(path, &mut path_rng(seed, i)))
}

/// `Q(τ = u | τ ≥ u) = 1 − e^{−λ′}` for a deterministic atom jump.
pub fn conditional_atom_prob(lam_prime: f64) -> f64 {
    -(-lam_prime).exp_m1()
}

/// Monte Carlo mean and standard error of `1 − e^{−λ′}` for a random atom
/// jump drawn by `sampler`.
pub fn conditional_atom_prob_mc<F>(sampler: F, n: usize, seed: u64, exec: Execution) -> (f64, f64)
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> f64 + Sync + Send,
{
    let draws = map_paths(exec, n, |i| {
        conditional_atom_prob(sampler(&mut path_rng(seed, i)))
    });
    mean_and_stderr(&draws)
}

/// `e^{−∫_0^t h} ∏_{u_i ≤ t} (1 − Γ_i)`, computed as `exp(−H′(t))`.
pub fn survival_probability(spec: &CompensatorSpec, t: f64) -> Result<f64> {
    Ok((-spec.h_prime(t)?).exp())
}

/// CSV with columns `path_id,tau,hit_atom`; `tau` is `inf` for no default
/// and `hit_atom` is empty off the atoms.
pub fn samples_to_csv(samples: &[DefaultSample]) -> String {
    let mut out = String::from("path_id,tau,hit_atom\n");
    for (i, s) in samples.iter().enumerate() {
        let _ = write!(out, "{i},");
        if s.tau.is_finite() {
            let _ = write!(out, "{:.16e}", s.tau);
        } else {
            out.push_str("inf");
        }
        out.push(',');
        if let Some(k) = s.hit_atom {
            let _ = write!(out, "{k}");
        }
        out.push('\n');
    }
    out
}
