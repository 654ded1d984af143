//! Doubly stochastic default times, announced risky times, and the Azéma
//! supermartingale under noisy information.

mod announced;
mod azema;
mod hazard;
mod sampling;

pub use announced::{announced_scenario, DelayLaw, ANNOUNCED_GAMMA};
pub use azema::{
    azema_path, azema_path_with, two_point_survival, AzemaConfig, AzemaPath, FCurve,
    ObservationJump,
};
pub use hazard::{HazardAtom, HazardPath};
pub use sampling::{
    conditional_atom_prob, conditional_atom_prob_mc, first_passage, samples_to_csv, simulate_tau,
    simulate_tau_ensemble, simulate_tau_with, survival_probability, DefaultSample,
};

pub use hazard::deterministic_term_structure;
