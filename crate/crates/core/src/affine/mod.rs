//! Affine default-intensity models with risky dates.

mod cir;
mod params;
mod pricing;
mod riccati;
mod simulate;

pub use cir::{cir_closed_form, CirParams};
pub use params::{AffineParams, AtomLoading, CompensatorLoadings, RiskyDates};
pub use pricing::{affine_bond_price, affine_compensator};
pub use riccati::{riccati_solve, riccati_solve_from, JumpMarker, RiccatiSolution};
pub use simulate::{simulate_state, simulate_state_on, StatePath};
