//! Dense complex linear algebra for four polarization qubits.
//!
//! # Conventions
//!
//! Basis states are indexed by four bits with photon 1 in the most
//! significant position; bit 0 encodes `H`, bit 1 encodes `V`, and the
//! single-photon kets are the columns `|H⟩ = (1, 0)ᵀ`, `|V⟩ = (0, 1)ᵀ`.
//! So `basis_index("HVVH") == 0b0110`.
//!
//! Measurement settings are defined by their eigenstates, which is what
//! fixes every parity prediction in this crate: the `X` (linear H′/V′)
//! analyzer assigns +1 to `H′ = (H + V)/√2` and −1 to `V′ = (H − V)/√2`;
//! the `Y` (circular R/L) analyzer assigns +1 to `R = (H + iV)/√2` and −1
//! to `L = (H − iV)/√2`. Note that some treatments of this experiment
//! tabulate `H` and `V` as swapped column vectors; only the eigenvalue
//! assignments above are load-bearing, and all matrices here are derived
//! from them.

mod distribution;
mod setting;
mod state;

pub use distribution::{
    correlation, outcome_distribution, product_operator, product_state, setting_operator,
    Outcome, OutcomeDistribution,
};
pub use setting::{setting_observable, Matrix2, Setting, SettingVector, Sign, Vector2};
pub use state::{
    basis_index, basis_label, fidelity_ghz, ghz_coherence, ghz_state, Amplitudes, DensityMatrix,
    Matrix16, PureState, DIM, IDX_HVVH, IDX_VHHV, N_PHOTONS,
};
