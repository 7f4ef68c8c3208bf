//! Born-rule outcome distributions under local ±1 measurements.

use serde::{Deserialize, Serialize};

use super::setting::{Matrix2, SettingVector, Sign, Vector2};
use super::state::{Amplitudes, DensityMatrix, Matrix16, DIM, N_PHOTONS};

/// One joint outcome, a string of four ±1 results (photon 1 first).
///
/// Encoded in four bits with the same ordering as the basis index: photon 1
/// is the most significant bit, and a set bit means the −1 outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Outcome(u8);

impl Outcome {
    pub const COUNT: usize = DIM;

    pub fn from_index(index: usize) -> Self {
        assert!(index < Self::COUNT, "outcome index out of range: {index}");
        Self(index as u8)
    }

    pub fn from_signs(signs: [Sign; N_PHOTONS]) -> Self {
        let mut bits = 0u8;
        for sign in signs {
            bits <<= 1;
            if sign == Sign::Minus {
                bits |= 1;
            }
        }
        Self(bits)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Outcome sign of a photon, 0-based (index 0 is photon 1).
    pub fn sign(self, photon: usize) -> Sign {
        Sign::from_bit(self.0 >> (N_PHOTONS - 1 - photon) & 1 == 1)
    }

    pub fn signs(self) -> [Sign; N_PHOTONS] {
        [self.sign(0), self.sign(1), self.sign(2), self.sign(3)]
    }

    /// Product of the four outcome signs.
    pub fn parity(self) -> Sign {
        Sign::from_bit(self.0.count_ones() % 2 == 1)
    }

    pub fn all() -> impl Iterator<Item = Outcome> {
        (0..Self::COUNT).map(Outcome::from_index)
    }

    /// Label under a given setting vector, e.g. `"H'RRV'"` for `XYYX`.
    pub fn label(self, sv: &SettingVector) -> String {
        (0..N_PHOTONS)
            .map(|p| sv.setting(p).outcome_label(self.sign(p)))
            .collect()
    }
}

/// Probabilities of the 16 joint outcomes of one setting vector.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution {
    probs: [f64; DIM],
}

impl OutcomeDistribution {
    pub fn prob(&self, outcome: Outcome) -> f64 {
        self.probs[outcome.index()]
    }

    pub fn probs(&self) -> &[f64; DIM] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Total probability of outcomes with the given parity.
    pub fn parity_mass(&self, parity: Sign) -> f64 {
        Outcome::all()
            .filter(|o| o.parity() == parity)
            .map(|o| self.prob(o))
            .sum()
    }

    /// Outcomes with probability above `tol`, in index order.
    pub fn support(&self, tol: f64) -> Vec<Outcome> {
        Outcome::all().filter(|o| self.prob(*o) > tol).collect()
    }

    /// Σ (product of signs) · p, the four-photon correlation.
    pub fn expectation(&self) -> f64 {
        Outcome::all()
            .map(|o| o.parity().value() * self.prob(o))
            .sum()
    }
}

/// Tensor product of four single-photon kets, photon 1 first.
pub fn product_state(vectors: &[Vector2; N_PHOTONS]) -> Amplitudes {
    Amplitudes::from_fn(|index, _| {
        (0..N_PHOTONS)
            .map(|p| vectors[p][index >> (N_PHOTONS - 1 - p) & 1])
            .product()
    })
}

/// Tensor product of four single-photon operators, photon 1 first.
pub fn product_operator(ops: &[Matrix2; N_PHOTONS]) -> Matrix16 {
    Matrix16::from_fn(|row, col| {
        (0..N_PHOTONS)
            .map(|p| {
                let shift = N_PHOTONS - 1 - p;
                ops[p][(row >> shift & 1, col >> shift & 1)]
            })
            .product()
    })
}

/// The 16×16 observable O₁⊗O₂⊗O₃⊗O₄ of a setting vector.
pub fn setting_operator(sv: &SettingVector) -> Matrix16 {
    let ops = [
        sv.setting(0).observable(),
        sv.setting(1).observable(),
        sv.setting(2).observable(),
        sv.setting(3).observable(),
    ];
    product_operator(&ops)
}

/// Born-rule distribution: p(s) = ⟨χ_s|ρ|χ_s⟩ with χ_s the product of the
/// per-photon analyzer eigenstates selected by the outcome string.
pub fn outcome_distribution(rho: &DensityMatrix, sv: &SettingVector) -> OutcomeDistribution {
    let mut probs = [0.0; DIM];
    for outcome in Outcome::all() {
        let vectors = [
            sv.setting(0).eigenvector(outcome.sign(0)),
            sv.setting(1).eigenvector(outcome.sign(1)),
            sv.setting(2).eigenvector(outcome.sign(2)),
            sv.setting(3).eigenvector(outcome.sign(3)),
        ];
        let chi = product_state(&vectors);
        let p = (chi.adjoint() * rho.matrix() * chi)[(0, 0)].re;
        debug_assert!(p > -1e-9, "negative outcome probability {p}");
        probs[outcome.index()] = p.max(0.0);
    }
    OutcomeDistribution { probs }
}

/// Four-photon correlation ⟨O₁⊗O₂⊗O₃⊗O₄⟩, computed from the distribution.
pub fn correlation(rho: &DensityMatrix, sv: &SettingVector) -> f64 {
    outcome_distribution(rho, sv).expectation()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::state::ghz_state;
    use approx::assert_abs_diff_eq;

    fn sv(s: &str) -> SettingVector {
        s.parse().unwrap()
    }

    #[test]
    fn outcome_encoding_round_trips() {
        let o = Outcome::from_signs([Sign::Plus, Sign::Minus, Sign::Minus, Sign::Plus]);
        assert_eq!(o.index(), 0b0110);
        assert_eq!(o.signs(), [Sign::Plus, Sign::Minus, Sign::Minus, Sign::Plus]);
        assert_eq!(o.parity(), Sign::Plus);
        assert_eq!(Outcome::from_index(0b0001).parity(), Sign::Minus);
    }

    #[test]
    fn outcome_labels_follow_settings() {
        let o = Outcome::from_index(0b0110);
        assert_eq!(o.label(&sv("XXYY")), "H'V'LR");
        assert_eq!(o.label(&sv("XYYX")), "H'LLH'");
        assert_eq!(Outcome::from_index(0).label(&sv("XXXA")), "H'H'H'A+");
    }

    #[test]
    fn ghz_xxyy_distribution_is_uniform_on_even_parity() {
        let rho = ghz_state().to_density();
        let dist = outcome_distribution(&rho, &sv("XXYY"));
        let expected: Vec<&str> = vec![
            "H'H'RR", "H'H'LL", "H'V'RL", "H'V'LR", "V'H'RL", "V'H'LR", "V'V'RR", "V'V'LL",
        ];
        let support = dist.support(1e-12);
        assert_eq!(support.len(), 8);
        let labels: Vec<String> = support.iter().map(|o| o.label(&sv("XXYY"))).collect();
        for want in &expected {
            assert!(labels.iter().any(|l| l == want), "missing {want}");
        }
        for o in &support {
            assert_abs_diff_eq!(dist.prob(*o), 0.125, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(dist.total(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ghz_xyyx_support_is_the_odd_parity_set() {
        let rho = ghz_state().to_density();
        let dist = outcome_distribution(&rho, &sv("XYYX"));
        let expected = [
            "H'RRV'", "H'RLH'", "H'LRH'", "H'LLV'", "V'RRH'", "V'RLV'", "V'LRV'", "V'LLH'",
        ];
        let labels: Vec<String> = dist
            .support(1e-12)
            .iter()
            .map(|o| o.label(&sv("XYYX")))
            .collect();
        assert_eq!(labels.len(), 8);
        for want in expected {
            assert!(labels.iter().any(|l| l == want), "missing {want}");
        }
        for o in dist.support(1e-12) {
            assert_abs_diff_eq!(dist.prob(o), 0.125, epsilon = 1e-12);
            assert_eq!(o.parity(), Sign::Minus);
        }
    }

    #[test]
    fn maximally_mixed_state_is_uniform() {
        let rho = DensityMatrix::maximally_mixed();
        for setting in ["XXXX", "XYXY", "XYYX", "XXAB"] {
            let dist = outcome_distribution(&rho, &sv(setting));
            for o in Outcome::all() {
                assert_abs_diff_eq!(dist.prob(o), 1.0 / 16.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn stabilizer_correlations_of_ghz() {
        let rho = ghz_state().to_density();
        assert_abs_diff_eq!(correlation(&rho, &sv("XXXX")), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(correlation(&rho, &sv("XYXY")), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(correlation(&rho, &sv("XXYY")), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(correlation(&rho, &sv("XYYX")), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn rotated_setting_correlation_matches_trace_oracle() {
        // Independent route: Tr(ρ O) with the tensor-product observable.
        let rho = ghz_state().to_density();
        let setting = sv("XXXA");
        let from_distribution = correlation(&rho, &setting);
        let from_trace = rho.expectation(&setting_operator(&setting));
        assert_abs_diff_eq!(from_distribution, from_trace, epsilon = 1e-12);
        assert_abs_diff_eq!(
            from_distribution,
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn even_parity_law_for_stabilizer_settings() {
        let rho = ghz_state().to_density();
        for setting in ["XXXX", "XYXY", "XXYY"] {
            let dist = outcome_distribution(&rho, &sv(setting));
            assert_abs_diff_eq!(dist.parity_mass(Sign::Minus), 0.0, epsilon = 1e-12);
        }
    }
}
