//! Simulation and analysis toolkit for four-photon polarization-entangled
//! GHZ states.
//!
//! The crate is organised in five layers:
//!
//! * [`qcore`] — dense complex algebra on the 16-dimensional four-photon
//!   polarization space: states, observables, outcome distributions.
//! * [`optics`] — the physical pipeline producing the state: two
//!   down-conversion pairs, beam-splitter overlap with adjustable temporal
//!   distinguishability, fourfold post-selection, and a phenomenological
//!   noise channel.
//! * [`ghz`] — the non-statistical GHZ argument: parity constraints,
//!   element-of-reality enumeration, and the local-realism contradiction
//!   report.
//! * [`mabk`] — the four-party MABK Bell inequality: operator expansion,
//!   classical bound by exhaustive strategy enumeration, quantum maximum,
//!   and the genuine four-partite entanglement witness.
//! * [`stats`] — Poissonian coincidence-counting Monte Carlo and the error
//!   propagation that turns counts into a Bell value with an uncertainty.
//!
//! All state values are immutable after construction and every operation is
//! a pure function, so the whole API is safe to use from concurrent code.

pub mod error;
pub mod ghz;
pub mod mabk;
pub mod optics;
pub mod qcore;
pub mod stats;

pub use error::{Error, Result};
