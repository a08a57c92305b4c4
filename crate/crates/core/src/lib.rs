//! Rotation-averaged fidelity of spin-j states and the search for optimal
//! quantum rotosensors.

mod error;
pub mod fidelity;
pub mod format;
pub mod input;
pub mod search;
pub mod specfun;
pub mod spin_state;
pub mod verify;

pub use error::{Error, Result};
pub use specfun::{HalfInt, SpinQuantum};
pub use spin_state::{AnticoherenceProfile, SpinState};
