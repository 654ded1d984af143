//! Term structures with atoms at risky times and the default compensator.

mod compensator;
mod document;
mod schedule;
mod surface;

pub use compensator::{CompensatorSpec, ShortRate};
pub use document::{AtomRecord, ScenarioDocument};
pub use schedule::{RiskySchedule, RiskyTime};
pub use surface::ForwardSurface;
