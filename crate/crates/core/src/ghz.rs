//! The non-statistical GHZ argument against local realism.
//!
//! Local realism assigns every photon predetermined values X_i and Y_i for
//! its two possible measurements. Reproducing the three deterministic
//! parity constraints of the stabilizer measurements forces the product
//! X₁Y₂Y₃X₄ = +1, while the quantum state is a −1 eigenstate of the same
//! joint measurement — the two predictions occupy disjoint halves of the
//! outcome space. This module keeps the local-realistic side free of any
//! Hilbert-space algebra: assignments are enumerated exhaustively and the
//! constraints are parity predicates over outcome strings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{correlation, outcome_distribution, DensityMatrix, Outcome, SettingVector, Sign};

/// Largest data-flipping error rate for which the all-or-nothing argument
/// still refutes local realism.
pub const RYFF_ERROR_BOUND: f64 = 0.25;

/// The four joint measurements: three parity constraints plus the
/// contradiction setting, in presentation order.
pub fn stabilizer_settings() -> [SettingVector; 4] {
    ["XXXX", "XYXY", "XXYY", "XYYX"].map(|s| s.parse().unwrap())
}

fn contradiction_setting() -> SettingVector {
    "XYYX".parse().unwrap()
}

/// A deterministic assignment of local values: one X_i and one Y_i per
/// photon, each ±1. There are exactly 2⁸ = 256 of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LhvAssignment {
    pub x: [Sign; 4],
    pub y: [Sign; 4],
}

impl LhvAssignment {
    pub const COUNT: usize = 256;

    /// Decodes an index, bits 0–3 the X values and bits 4–7 the Y values
    /// (photon 1 first within each nibble).
    pub fn from_index(index: usize) -> Self {
        assert!(index < Self::COUNT, "assignment index out of range: {index}");
        let bit = |pos: usize| Sign::from_bit(index >> pos & 1 == 1);
        Self {
            x: [bit(3), bit(2), bit(1), bit(0)],
            y: [bit(7), bit(6), bit(5), bit(4)],
        }
    }

    /// All 256 assignments in index order.
    pub fn all() -> impl Iterator<Item = LhvAssignment> {
        (0..Self::COUNT).map(Self::from_index)
    }

    /// The predetermined value revealed by measuring `setting` on a photon.
    pub fn local_value(&self, photon: usize, setting: crate::qcore::Setting) -> Sign {
        match setting {
            crate::qcore::Setting::X => self.x[photon],
            crate::qcore::Setting::Y => self.y[photon],
            other => panic!("elements of reality are defined for X and Y only, got {other:?}"),
        }
    }

    /// Product of the four local values under a setting vector.
    pub fn product(&self, sv: &SettingVector) -> Sign {
        (0..4)
            .map(|p| self.local_value(p, sv.setting(p)))
            .fold(Sign::Plus, |acc, s| acc * s)
    }

    /// Whether the assignment reproduces the three deterministic parities.
    pub fn satisfies_parity_constraints(&self) -> bool {
        let [xxxx, xyxy, xxyy, _] = stabilizer_settings();
        self.product(&xxxx) == Sign::Plus
            && self.product(&xyxy) == Sign::Plus
            && self.product(&xxyy) == Sign::Plus
    }
}

/// All assignments compatible with the three parity constraints, in
/// enumeration order. Every one of them carries X₁Y₂Y₃X₄ = +1.
pub fn enumerate_consistent_lhv() -> Vec<LhvAssignment> {
    let consistent: Vec<LhvAssignment> = LhvAssignment::all()
        .filter(LhvAssignment::satisfies_parity_constraints)
        .collect();
    for a in &consistent {
        assert_eq!(
            a.product(&contradiction_setting()),
            Sign::Plus,
            "constraint algebra violated"
        );
    }
    consistent
}

/// The outcome strings local realism allows for the X₁Y₂Y₃X₄ measurement:
/// the realized values of every constraint-consistent assignment. Rejects
/// any other setting, since the argument is specific to this one.
pub fn lhv_predicted_outcomes(sv: &SettingVector) -> Result<Vec<Outcome>> {
    if *sv != contradiction_setting() {
        return Err(Error::WrongSetting {
            expected: contradiction_setting().to_string(),
            got: sv.to_string(),
        });
    }
    let mut seen = [false; Outcome::COUNT];
    for a in enumerate_consistent_lhv() {
        let outcome = Outcome::from_signs([
            a.local_value(0, sv.setting(0)),
            a.local_value(1, sv.setting(1)),
            a.local_value(2, sv.setting(2)),
            a.local_value(3, sv.setting(3)),
        ]);
        seen[outcome.index()] = true;
    }
    Ok(Outcome::all().filter(|o| seen[o.index()]).collect())
}

/// Head-to-head comparison of the two predictions on a given state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContradictionReport {
    /// The joint measurement the argument is about.
    pub setting: SettingVector,
    /// Outcomes allowed by local realism (even parity).
    pub lhv_support: Vec<String>,
    /// Outcomes predicted by quantum mechanics (odd parity).
    pub qm_support: Vec<String>,
    /// Probability mass the state puts on the local-realistic support.
    pub observed_lhv_fraction: f64,
    /// Probability mass on the quantum support.
    pub observed_qm_fraction: f64,
    /// Fraction of events landing on the local-realistic side; equals
    /// (1 − V)/2 for a state with contradiction-setting visibility V.
    pub error_rate: f64,
    /// The data-flipping bound the error rate is compared against.
    pub ryff_bound: f64,
    /// ryff_bound − error_rate.
    pub ryff_margin: f64,
    /// True when the error rate stays below the bound.
    pub passes_ryff: bool,
}

/// Evaluates the X₁Y₂Y₃X₄ distribution of `rho` and splits it across the
/// two rival supports.
pub fn contradiction_report(rho: &DensityMatrix) -> ContradictionReport {
    let sv = contradiction_setting();
    let lhv = lhv_predicted_outcomes(&sv).expect("fixed setting");
    let dist = outcome_distribution(rho, &sv);
    let observed_lhv_fraction: f64 = lhv.iter().map(|o| dist.prob(*o)).sum();
    let qm: Vec<Outcome> = Outcome::all().filter(|o| !lhv.contains(o)).collect();
    let observed_qm_fraction: f64 = qm.iter().map(|o| dist.prob(*o)).sum();
    let error_rate = observed_lhv_fraction;
    ContradictionReport {
        setting: sv,
        lhv_support: lhv.iter().map(|o| o.label(&sv)).collect(),
        qm_support: qm.iter().map(|o| o.label(&sv)).collect(),
        observed_lhv_fraction,
        observed_qm_fraction,
        error_rate,
        ryff_bound: RYFF_ERROR_BOUND,
        ryff_margin: RYFF_ERROR_BOUND - error_rate,
        passes_ryff: error_rate < RYFF_ERROR_BOUND,
    }
}

/// Visibility |P(expected parity) − P(other parity)| = |⟨O⟩| for each of
/// the four joint measurements, in [`stabilizer_settings`] order.
pub fn stabilizer_visibilities(rho: &DensityMatrix) -> [f64; 4] {
    stabilizer_settings().map(|sv| correlation(rho, &sv).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::{apply_noise, NoiseParams};
    use crate::qcore::ghz_state;
    use approx::assert_abs_diff_eq;

    #[test]
    fn all_plus_assignment_is_consistent() {
        let a = LhvAssignment::from_index(0);
        assert!(a.x.iter().chain(a.y.iter()).all(|s| *s == Sign::Plus));
        assert!(a.satisfies_parity_constraints());
        assert_eq!(a.product(&contradiction_setting()), Sign::Plus);
    }

    #[test]
    fn consistent_set_has_32_elements() {
        // 8 free bits minus 3 independent parity constraints.
        assert_eq!(enumerate_consistent_lhv().len(), 32);
    }

    #[test]
    fn product_identity_holds_on_all_assignments() {
        // (X₁X₂X₃X₄)(X₁Y₂X₃Y₄)(X₁X₂Y₃Y₄) = X₁Y₂Y₃X₄ with no filtering.
        let [xxxx, xyxy, xxyy, xyyx] = stabilizer_settings();
        for a in LhvAssignment::all() {
            let lhs = a.product(&xxxx) * a.product(&xyxy) * a.product(&xxyy);
            assert_eq!(lhs, a.product(&xyyx));
        }
    }

    #[test]
    fn no_consistent_assignment_yields_minus() {
        let xyyx = contradiction_setting();
        let inconsistent = enumerate_consistent_lhv()
            .iter()
            .filter(|a| a.product(&xyyx) == Sign::Minus)
            .count();
        assert_eq!(inconsistent, 0);
    }

    #[test]
    fn lhv_outcomes_are_the_even_parity_strings() {
        let sv = contradiction_setting();
        let outcomes = lhv_predicted_outcomes(&sv).unwrap();
        assert_eq!(outcomes.len(), 8);
        let labels: Vec<String> = outcomes.iter().map(|o| o.label(&sv)).collect();
        for want in [
            "H'RRH'", "H'RLV'", "H'LRV'", "H'LLH'", "V'RRV'", "V'RLH'", "V'LRH'", "V'LLV'",
        ] {
            assert!(labels.iter().any(|l| l == want), "missing {want}");
        }
        for o in &outcomes {
            assert_eq!(o.parity(), Sign::Plus);
        }
    }

    #[test]
    fn lhv_outcomes_reject_other_settings() {
        let other: SettingVector = "XXXX".parse().unwrap();
        assert!(matches!(
            lhv_predicted_outcomes(&other),
            Err(Error::WrongSetting { .. })
        ));
    }

    #[test]
    fn lhv_support_is_disjoint_from_quantum_support() {
        let sv = contradiction_setting();
        let lhv = lhv_predicted_outcomes(&sv).unwrap();
        let dist = outcome_distribution(&ghz_state().to_density(), &sv);
        for o in lhv {
            assert_abs_diff_eq!(dist.prob(o), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ideal_state_has_zero_error_rate() {
        let report = contradiction_report(&ghz_state().to_density());
        assert_abs_diff_eq!(report.error_rate, 0.0, epsilon = 1e-12);
        assert!(report.passes_ryff);
        assert_eq!(report.lhv_support.len(), 8);
        assert_eq!(report.qm_support.len(), 8);
    }

    #[test]
    fn dephased_state_error_rate_matches_visibility() {
        let rho = apply_noise(&NoiseParams::dephased(0.789).unwrap());
        let report = contradiction_report(&rho);
        assert_abs_diff_eq!(report.error_rate, (1.0 - 0.789) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.error_rate, 0.1055, epsilon = 1e-12);
        assert!(report.passes_ryff);
    }

    #[test]
    fn maximally_mixed_state_fails_the_bound() {
        let report = contradiction_report(&DensityMatrix::maximally_mixed());
        assert_abs_diff_eq!(report.error_rate, 0.5, epsilon = 1e-12);
        assert!(!report.passes_ryff);
    }

    #[test]
    fn fractions_always_sum_to_one() {
        let states = [
            ghz_state().to_density(),
            DensityMatrix::maximally_mixed(),
            apply_noise(&NoiseParams::new(0.4, 0.35, 0.25).unwrap()),
        ];
        for rho in &states {
            let report = contradiction_report(rho);
            assert_abs_diff_eq!(
                report.observed_lhv_fraction + report.observed_qm_fraction,
                1.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn visibilities_of_reference_states() {
        let ideal = stabilizer_visibilities(&ghz_state().to_density());
        for v in ideal {
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
        }
        let mixed = stabilizer_visibilities(&DensityMatrix::maximally_mixed());
        for v in mixed {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
        }
        // Per-setting fits reproduce the measured contrasts.
        let measured = [0.820, 0.807, 0.781, 0.789];
        for (k, target) in measured.into_iter().enumerate() {
            let rho = apply_noise(&NoiseParams::dephased(target).unwrap());
            assert_abs_diff_eq!(stabilizer_visibilities(&rho)[k], target, epsilon = 1e-12);
        }
    }
}
