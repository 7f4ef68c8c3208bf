//! The physical pipeline that produces the four-photon state: two
//! down-conversion pairs, beam-splitter overlap with adjustable temporal
//! distinguishability, fourfold post-selection, and a phenomenological
//! noise channel fitted to measured visibilities.

mod jones;

pub use jones::{
    linear_polarization, quarter_wave_plate, qwp_equivalence_check, rotation, QwpCase, QwpCheck,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{
    basis_index, ghz_state, outcome_distribution, Amplitudes, DensityMatrix, Matrix16, Outcome,
    PureState, SettingVector, DIM, IDX_HVVH, IDX_VHHV,
};

const WEIGHT_TOL: f64 = 1e-12;

/// Weights of the three-component noise model
/// ρ = p_coh·|Ψ⟩⟨Ψ| + p_diag·(|HVVH⟩⟨HVVH| + |VHHV⟩⟨VHHV|)/2 + p_white·I/16.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub p_coh: f64,
    pub p_diag: f64,
    pub p_white: f64,
}

impl NoiseParams {
    pub fn new(p_coh: f64, p_diag: f64, p_white: f64) -> Result<Self> {
        let bad = || Error::BadNoiseWeights {
            p_coh,
            p_diag,
            p_white,
        };
        if p_coh < 0.0 || p_diag < 0.0 || p_white < 0.0 {
            return Err(bad());
        }
        if (p_coh + p_diag + p_white - 1.0).abs() > WEIGHT_TOL {
            return Err(bad());
        }
        Ok(Self {
            p_coh,
            p_diag,
            p_white,
        })
    }

    /// The noiseless state.
    pub fn ideal() -> Self {
        Self {
            p_coh: 1.0,
            p_diag: 0.0,
            p_white: 0.0,
        }
    }

    /// Pure branch dephasing: coherent weight `visibility`, the rest
    /// incoherent branch mixture. Every stabilizer visibility of the
    /// resulting state equals `visibility`.
    pub fn dephased(visibility: f64) -> Result<Self> {
        Self::new(visibility, 1.0 - visibility, 0.0)
    }

    /// White-noise model V·|Ψ⟩⟨Ψ| + (1−V)·I/16.
    pub fn white_noise(v: f64) -> Result<Self> {
        Self::new(v, 0.0, 1.0 - v)
    }

    /// Closed-form fit to a measured GHZ fidelity and Bell value.
    ///
    /// The Bell value fixes the branch coherence C = |⟨A⟩|/(8√2), the
    /// fidelity then fixes the branch populations 2(F − C), and the white
    /// weight absorbs the rest of the probability.
    pub fn fit_fidelity_mabk(fidelity: f64, mabk_value: f64) -> Result<Self> {
        let coherence = mabk_value.abs() / (8.0 * std::f64::consts::SQRT_2);
        let populations = 2.0 * (fidelity - coherence);
        let p_coh = 2.0 * coherence;
        let p_white = 8.0 * (1.0 - populations) / 7.0;
        let p_diag = 1.0 - p_coh - p_white;
        Self::new(p_coh, p_diag, p_white)
    }

    /// Fit from a fidelity and the summed population of the two GHZ
    /// branches in the H/V basis (coherence follows from F = pop/2 + C).
    pub fn fit_fidelity_population(fidelity: f64, population_sum: f64) -> Result<Self> {
        let coherence = fidelity - population_sum / 2.0;
        Self::fit_fidelity_mabk(fidelity, 8.0 * std::f64::consts::SQRT_2 * coherence)
    }
}

/// Builds the noise-model density matrix from its weights.
pub fn apply_noise(params: &NoiseParams) -> DensityMatrix {
    let ghz = ghz_state().to_density();
    let mut mat = ghz.matrix() * Complex64::new(params.p_coh, 0.0);
    let half_diag = Complex64::new(params.p_diag / 2.0, 0.0);
    mat[(IDX_HVVH, IDX_HVVH)] += half_diag;
    mat[(IDX_VHHV, IDX_VHHV)] += half_diag;
    mat += Matrix16::identity() * Complex64::new(params.p_white / DIM as f64, 0.0);
    DensityMatrix::new(mat).expect("noise model produces a valid state")
}

/// The joint state of two independent down-conversion pairs,
/// (|HV⟩ + |VH⟩)/√2 on photons (1,2) and on photons (3,4).
pub fn spdc_two_pairs() -> PureState {
    let mut amps = Amplitudes::zeros();
    let quarter = Complex64::new(0.5, 0.0);
    for label in ["HVHV", "HVVH", "VHHV", "VHVH"] {
        amps[basis_index(label).unwrap()] = quarter;
    }
    PureState::new(amps).unwrap()
}

/// Fourfold post-selection at the polarizing beam splitter.
///
/// The PBS transmits H and reflects V, so one photon per output port
/// requires photons 2 and 3 to carry the same polarization; all other
/// amplitudes are discarded. `overlap` is the temporal-mode overlap of the
/// two photons at the PBS: it scales the coherence between the surviving
/// both-H and both-V branches, leaving an incoherent mixture at 0 and the
/// pure superposition at 1.
///
/// Returns the renormalized post-selected state together with the
/// pre-normalization weight (the success probability of the selection).
pub fn pbs_postselect(state: &PureState, overlap: f64) -> Result<(DensityMatrix, f64)> {
    if !(0.0..=1.0).contains(&overlap) {
        return Err(Error::BadOverlap { overlap });
    }
    let mut branch_hh = Amplitudes::zeros();
    let mut branch_vv = Amplitudes::zeros();
    for index in 0..DIM {
        let bit2 = index >> 2 & 1;
        let bit3 = index >> 1 & 1;
        if bit2 == 0 && bit3 == 0 {
            branch_hh[index] = state.amp(index);
        } else if bit2 == 1 && bit3 == 1 {
            branch_vv[index] = state.amp(index);
        }
    }
    let weight: f64 = branch_hh
        .iter()
        .chain(branch_vv.iter())
        .map(|a| a.norm_sqr())
        .sum();
    if weight <= WEIGHT_TOL {
        return Err(Error::EmptyPostSelection);
    }
    let g = Complex64::new(overlap, 0.0);
    let mat = (branch_hh * branch_hh.adjoint()
        + branch_vv * branch_vv.adjoint()
        + (branch_hh * branch_vv.adjoint() + branch_vv * branch_hh.adjoint()) * g)
        / Complex64::new(weight, 0.0);
    Ok((DensityMatrix::new(mat)?, weight))
}

/// One point of a pump-delay scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DelayPoint {
    /// Delay-mirror displacement in micrometers.
    pub delay_um: f64,
    /// Temporal-mode overlap g = exp(−d²/2τ²).
    pub overlap: f64,
}

impl DelayPoint {
    pub fn at(delay_um: f64, coherence_tau_um: f64) -> Self {
        let ratio = delay_um / coherence_tau_um;
        Self {
            delay_um,
            overlap: (-0.5 * ratio * ratio).exp(),
        }
    }
}

/// Configuration for [`delay_scan`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DelayScanConfig {
    /// Coherence length of the temporal-overlap envelope, micrometers.
    pub coherence_tau_um: f64,
    /// Coherence at zero delay, i.e. the best attainable visibility.
    pub visibility_ceiling: f64,
    /// Total fourfold rate across all 16 outcomes, per second.
    pub rate_total: f64,
}

impl Default for DelayScanConfig {
    fn default() -> Self {
        Self {
            coherence_tau_um: 25.0,
            visibility_ceiling: 0.84,
            rate_total: 2.6,
        }
    }
}

/// Predicted rates of the all-H′ and single-V′ fourfold coincidences.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DelayScanPoint {
    pub delay_um: f64,
    pub overlap: f64,
    /// Rate of the H′H′H′H′ coincidence, per second.
    pub rate_all_hp: f64,
    /// Rate of the H′H′H′V′ coincidence, per second.
    pub rate_last_vp: f64,
}

/// Scans the pump delay mirror: at each position the post-selected state is
/// rebuilt with coherence `ceiling · g(delay)` and analyzed in the all-X
/// basis. At zero delay the single-V′ outcome is suppressed with visibility
/// equal to the ceiling; far outside the coherence length both rates meet.
pub fn delay_scan(positions: &[f64], cfg: &DelayScanConfig) -> Result<Vec<DelayScanPoint>> {
    if cfg.coherence_tau_um <= 0.0 {
        return Err(Error::InvalidRunConfig {
            reason: format!(
                "coherence length must be positive, got {}",
                cfg.coherence_tau_um
            ),
        });
    }
    if !(0.0..=1.0).contains(&cfg.visibility_ceiling) {
        return Err(Error::BadOverlap {
            overlap: cfg.visibility_ceiling,
        });
    }
    let source = spdc_two_pairs();
    let all_x: SettingVector = "XXXX".parse().unwrap();
    let all_hp = Outcome::from_index(0b0000);
    let last_vp = Outcome::from_index(0b0001);
    positions
        .iter()
        .map(|&delay_um| {
            let point = DelayPoint::at(delay_um, cfg.coherence_tau_um);
            let (rho, _) = pbs_postselect(&source, cfg.visibility_ceiling * point.overlap)?;
            let dist = outcome_distribution(&rho, &all_x);
            Ok(DelayScanPoint {
                delay_um,
                overlap: point.overlap,
                rate_all_hp: cfg.rate_total * dist.prob(all_hp),
                rate_last_vp: cfg.rate_total * dist.prob(last_vp),
            })
        })
        .collect()
}
