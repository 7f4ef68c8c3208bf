//! The four-party MABK Bell inequality and the entanglement witness built
//! on it.
//!
//! The Bell operator combines eight three-photon correlations with the two
//! rotated analyzers A = (X + Y)/√2 and B = (X − Y)/√2 on photon 4:
//!
//! ```text
//! A = ½(XXX − XYY + YXY + YYX)(a + b) + ½(YYY + XYX + XXY − YXX)(a − b)
//! ```
//!
//! Local realism bounds |⟨A⟩| by 2 (verified here by exhausting all 256
//! deterministic strategies), quantum mechanics reaches 4√2 on the GHZ
//! state, and as a 16×16 matrix the operator reduces to 4√2 times the GHZ
//! branch-flip, which ties ⟨A⟩ to the branch coherence through
//! ⟨A⟩ = 8√2·Re⟨HVVH|ρ|VHHV⟩ for every state.

use serde::{Deserialize, Serialize};

use crate::qcore::{
    correlation, ghz_coherence, product_operator, setting_observable, DensityMatrix, Matrix16,
    Setting, SettingVector, Sign,
};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Classical (local-realistic) bound on |⟨A⟩|.
pub const LHV_BOUND: f64 = 2.0;
/// Threshold above which the Bell value witnesses genuine four-partite
/// entanglement, together with fidelity > 1/2.
pub const WITNESS_BOUND: f64 = 4.0;
/// Fidelity threshold of the witness.
pub const FIDELITY_BOUND: f64 = 0.5;
/// Visibility needed to violate the inequality family of Żukowski's
/// construction; cited constant, not derived here.
pub const ZUKOWSKI_THRESHOLD: f64 = 0.329;

/// One term of the expanded Bell operator: a four-photon setting with a
/// ±1/2 coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MabkTerm {
    pub settings: SettingVector,
    pub coeff: f64,
}

/// Three-photon groups of the operator. The first couples to (a + b), the
/// second to (a − b); each sign multiplies the group coefficient ½.
const GROUP_SUM: [([Setting; 3], f64); 4] = [
    ([Setting::X, Setting::X, Setting::X], 1.0),
    ([Setting::X, Setting::Y, Setting::Y], -1.0),
    ([Setting::Y, Setting::X, Setting::Y], 1.0),
    ([Setting::Y, Setting::Y, Setting::X], 1.0),
];
const GROUP_DIFF: [([Setting; 3], f64); 4] = [
    ([Setting::Y, Setting::Y, Setting::Y], 1.0),
    ([Setting::X, Setting::Y, Setting::X], 1.0),
    ([Setting::X, Setting::X, Setting::Y], 1.0),
    ([Setting::Y, Setting::X, Setting::X], -1.0),
];

/// The 16 (setting, ±½) terms of the Bell operator, in a fixed order:
/// the (a + b) group first, each triple with its A then its B setting.
pub fn mabk_terms() -> Vec<MabkTerm> {
    let mut terms = Vec::with_capacity(16);
    for (triple, sign) in GROUP_SUM {
        for fourth in [Setting::A, Setting::B] {
            terms.push(MabkTerm {
                settings: SettingVector::new([triple[0], triple[1], triple[2], fourth]),
                coeff: 0.5 * sign,
            });
        }
    }
    for (triple, sign) in GROUP_DIFF {
        terms.push(MabkTerm {
            settings: SettingVector::new([triple[0], triple[1], triple[2], Setting::A]),
            coeff: 0.5 * sign,
        });
        terms.push(MabkTerm {
            settings: SettingVector::new([triple[0], triple[1], triple[2], Setting::B]),
            coeff: -0.5 * sign,
        });
    }
    terms
}

/// The Bell operator assembled as a dense 16×16 matrix.
pub fn mabk_operator() -> Matrix16 {
    let mut op = Matrix16::zeros();
    for term in mabk_terms() {
        let ops = [
            setting_observable(term.settings.setting(0)),
            setting_observable(term.settings.setting(1)),
            setting_observable(term.settings.setting(2)),
            setting_observable(term.settings.setting(3)),
        ];
        op += product_operator(&ops) * num_complex::Complex64::new(term.coeff, 0.0);
    }
    op
}

/// ⟨A⟩ evaluated as the coefficient-weighted sum of the 16 correlations.
///
/// The same number is recomputed as Tr(ρÂ) from the assembled matrix; the
/// two routes must agree to 1e-10.
pub fn mabk_expectation(rho: &DensityMatrix) -> f64 {
    let term_sum: f64 = mabk_terms()
        .iter()
        .map(|t| t.coeff * correlation(rho, &t.settings))
        .sum();
    let trace = rho.expectation(&mabk_operator());
    assert!(
        (term_sum - trace).abs() <= 1e-10,
        "term-sum and trace evaluations disagree: {term_sum} vs {trace}"
    );
    term_sum
}

/// A deterministic local strategy: a fixed ±1 answer for both settings of
/// every photon (X/Y for photons 1–3, A/B for photon 4). 2⁸ = 256 total.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    /// values[p][0] answers the first setting of photon p (X, or A for
    /// photon 4); values[p][1] the second (Y, or B).
    pub values: [[Sign; 2]; 4],
}

impl DeterministicStrategy {
    pub const COUNT: usize = 256;

    pub fn from_index(index: usize) -> Self {
        assert!(index < Self::COUNT, "strategy index out of range: {index}");
        let bit = |pos: usize| Sign::from_bit(index >> pos & 1 == 1);
        let mut values = [[Sign::Plus; 2]; 4];
        for (p, pair) in values.iter_mut().enumerate() {
            pair[0] = bit(2 * p);
            pair[1] = bit(2 * p + 1);
        }
        Self { values }
    }

    pub fn all() -> impl Iterator<Item = DeterministicStrategy> {
        (0..Self::COUNT).map(Self::from_index)
    }

    pub fn local_value(&self, photon: usize, setting: Setting) -> Sign {
        let slot = match (photon, setting) {
            (0..=2, Setting::X) | (3, Setting::A) => 0,
            (0..=2, Setting::Y) | (3, Setting::B) => 1,
            _ => panic!("photon {photon} is never measured with {setting:?}"),
        };
        self.values[photon][slot]
    }

    /// The strategy's value of the full Bell expression.
    pub fn mabk_value(&self, terms: &[MabkTerm]) -> f64 {
        terms
            .iter()
            .map(|t| {
                let product = (0..4)
                    .map(|p| self.local_value(p, t.settings.setting(p)))
                    .fold(Sign::Plus, |acc, s| acc * s);
                t.coeff * product.value()
            })
            .sum()
    }
}

/// Extremes of the Bell expression over all deterministic strategies.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LhvExtremes {
    pub max: f64,
    pub min: f64,
    /// First strategy (in enumeration order) attaining the maximum.
    pub argmax: DeterministicStrategy,
    /// Number of strategies attaining the maximum.
    pub n_attaining_max: usize,
}

/// Exhausts all 256 deterministic strategies. The maximum is exactly 2.
pub fn lhv_max() -> LhvExtremes {
    let terms = mabk_terms();
    let mut max = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    let mut argmax = DeterministicStrategy::from_index(0);
    let mut n_attaining_max = 0usize;
    for strategy in DeterministicStrategy::all() {
        let value = strategy.mabk_value(&terms);
        min = min.min(value);
        if value > max {
            max = value;
            argmax = strategy;
            n_attaining_max = 1;
        } else if value == max {
            n_attaining_max += 1;
        }
    }
    LhvExtremes {
        max,
        min,
        argmax,
        n_attaining_max,
    }
}

/// Largest eigenvalue magnitude of the Bell operator, 4√2, reached by the
/// GHZ state.
pub fn quantum_max() -> f64 {
    mabk_operator()
        .symmetric_eigenvalues()
        .iter()
        .map(|e| e.abs())
        .fold(0.0, f64::max)
}

/// Visibility thresholds for beating local realism with different
/// arguments.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ThresholdVisibilities {
    /// Computed: classical bound over quantum maximum, 2/(4√2) ≈ 35.4 %.
    pub mabk: f64,
    /// Cited constant for the stronger inequality family, 32.9 %.
    pub zukowski: f64,
    /// Error-rate bound of the all-or-nothing argument, 50 %.
    pub ghz_ryff: f64,
}

pub fn threshold_visibilities() -> ThresholdVisibilities {
    ThresholdVisibilities {
        mabk: LHV_BOUND / quantum_max(),
        zukowski: ZUKOWSKI_THRESHOLD,
        // error rate (1 − V)/2 stays below the bound iff V > 1 − 2·bound
        ghz_ryff: 1.0 - 2.0 * crate::ghz::RYFF_ERROR_BOUND,
    }
}

/// Joint evaluation of the two witness conditions on a state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessReport {
    /// Signed Bell expectation ⟨A⟩.
    pub mabk_value: f64,
    /// GHZ fidelity ⟨Ψ|ρ|Ψ⟩.
    pub fidelity: f64,
    /// |⟨A⟩| > 2: the state has no local-realistic model.
    pub lhv_violated: bool,
    /// Both witness conditions hold: |⟨A⟩| > 4 and F > 1/2.
    pub genuine: bool,
    /// |⟨A⟩| − 2.
    pub lhv_margin: f64,
    /// |⟨A⟩| − 4.
    pub mabk_margin: f64,
    /// F − 1/2.
    pub fidelity_margin: f64,
    pub thresholds: ThresholdVisibilities,
}

/// Evaluates |⟨A⟩| > 4 and F > 1/2 on a state; both must hold to certify
/// genuine four-partite entanglement. The Bell value is cross-checked
/// against 8√2 times the branch coherence, an identity valid for any
/// state.
pub fn witness(rho: &DensityMatrix) -> WitnessReport {
    let mabk_value = mabk_expectation(rho);
    let from_coherence = 8.0 * SQRT_2 * ghz_coherence(rho);
    assert!(
        (mabk_value - from_coherence).abs() <= 1e-10,
        "coherence identity violated: {mabk_value} vs {from_coherence}"
    );
    let fidelity = crate::qcore::fidelity_ghz(rho);
    let magnitude = mabk_value.abs();
    WitnessReport {
        mabk_value,
        fidelity,
        lhv_violated: magnitude > LHV_BOUND,
        genuine: magnitude > WITNESS_BOUND && fidelity > FIDELITY_BOUND,
        lhv_margin: magnitude - LHV_BOUND,
        mabk_margin: magnitude - WITNESS_BOUND,
        fidelity_margin: fidelity - FIDELITY_BOUND,
        thresholds: threshold_visibilities(),
    }
}
