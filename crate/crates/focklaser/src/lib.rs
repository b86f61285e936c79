//! Photon statistics of a laser whose gain medium feeds the excitations of a
//! deep-strong-coupling Rabi system.
//!
//! Energies are in units of the oscillator frequency unless a function takes
//! [`spectrum::RabiParams`] with a different `omega`.

pub mod distribution;
pub mod emission;
pub mod error;
pub mod exact;
pub mod laser_direct;
pub mod laser_rate;
pub mod liouvillian;
pub mod spectrum;

pub use distribution::PhotonDistribution;
pub use emission::GainParams;
pub use error::{Error, Result};
pub use spectrum::{Quadrature, RabiParams, SpinBranch};
