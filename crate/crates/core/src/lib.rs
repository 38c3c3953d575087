//! Bound states of a diatomic molecule in a Kratzer potential with added
//! non-central terms `beta / (r^2 sin^2 t) + gamma cos t / (r^2 sin^2 t)`.
//!
//! Energies come in closed form ([`closedform`]), from a numeric asymptotic
//! iteration solver ([`aim`]), and from finite-difference eigensolvers
//! ([`oracle`]). Units throughout are eV, Å and amu.

pub mod aim;
pub mod cli;
pub mod closedform;
pub mod error;
pub mod model;
pub mod oracle;
pub mod quad;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
