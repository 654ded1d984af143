//! Numerical checks of the no-arbitrage drift conditions and Monte Carlo
//! martingale tests.

mod affine_drift;
mod affine_mc;
mod hjm;
mod jump;
mod martingale;
mod merton;
mod report;
mod surface_drift;

pub use affine_drift::AffineDriftModel;
pub use affine_mc::affine_martingale_test;
pub use hjm::{bar_integrals, verify_general_drift, BarIntegrals, HjmCoefficients, NuAtom};
pub use jump::g_jump_check;
pub use martingale::{martingale_mc_test, MartingalePoint, MartingaleReport, Z_THRESHOLD};
pub use merton::{
    verify_merton_drift, verify_merton_drift_with_spec, MertonCoefficients, MertonDrift,
};
pub use report::{all_pass, reports_to_json, DriftReport, GridPoint};
pub use surface_drift::surface_coefficients;
