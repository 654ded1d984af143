//! Defaultable term-structure models whose default compensator jumps at
//! predictable risky times.
//!
//! * [`model`]: forward surfaces with atoms, compensators, bond prices.
//! * [`affine`]: piecewise-continuous affine models, Riccati equations with
//!   jump resets, the CIR closed form, state simulation.
//! * [`merton`]: Merton-type models, a Kalman-Bucy filter with a news
//!   update, conditional default probabilities.
//! * [`default_sim`]: doubly-stochastic default times and survival laws.
//! * [`noarb`]: drift-condition residuals and Monte Carlo martingale tests.

pub mod affine;
pub mod default_sim;
pub mod error;
pub mod grid;
pub mod merton;
pub mod model;
pub mod noarb;
pub mod normal;
pub mod par;

pub use error::{Error, Result};
