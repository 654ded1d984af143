//! Merton firm-value model with an unknown drift learned by filtering.

mod filter;
mod known_drift;
mod probability;
mod run;
mod setup;

pub use filter::{filter_step, news_update, variance_path, FilterState};
pub use known_drift::{merton_bond_price, merton_forward_coeffs, ForwardCoeffs, KnownDriftMerton};
pub use probability::{default_prob_t, default_prob_u, gaussian_phi_expectation};
pub use run::{
    filter_coverage, run_filter, run_filter_with, CoverageReport, CoverageRow, FilterRow, FilterRun,
};
pub use setup::MertonSetup;
