//! Jones-matrix algebra for the waveplate settings of the analyzers.
//!
//! Polarization angles are measured clockwise from horizontal when looking
//! into the beam, so `linear_polarization(θ)` is cos θ·|H⟩ − sin θ·|V⟩.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qcore::{Matrix2, Setting, Sign, Vector2};

/// Jones vector of a linear polarization at `angle_deg`.
pub fn linear_polarization(angle_deg: f64) -> Vector2 {
    let rad = angle_deg.to_radians();
    Vector2::new(
        Complex64::new(rad.cos(), 0.0),
        Complex64::new(-rad.sin(), 0.0),
    )
}

/// Real rotation of the polarization plane by `angle_deg`.
pub fn rotation(angle_deg: f64) -> Matrix2 {
    let rad = angle_deg.to_radians();
    Matrix2::new(
        Complex64::new(rad.cos(), 0.0),
        Complex64::new(-rad.sin(), 0.0),
        Complex64::new(rad.sin(), 0.0),
        Complex64::new(rad.cos(), 0.0),
    )
}

/// Quarter-wave plate with its fast axis at `axis_deg`: the slow axis is
/// retarded by a quarter wave, R(θ)·diag(1, i)·R(−θ).
pub fn quarter_wave_plate(axis_deg: f64) -> Matrix2 {
    let retarder = Matrix2::new(
        Complex64::ONE,
        Complex64::ZERO,
        Complex64::ZERO,
        Complex64::new(0.0, 1.0),
    );
    rotation(axis_deg) * retarder * rotation(-axis_deg)
}

/// One eigenstate-to-linear-polarization conversion check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QwpCase {
    pub setting: char,
    pub outcome: String,
    pub target_angle_deg: f64,
    /// 1 − |⟨target|QWP|eigenstate⟩|.
    pub deviation: f64,
}

/// Result of [`qwp_equivalence_check`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QwpCheck {
    pub cases: Vec<QwpCase>,
    pub max_deviation: f64,
    pub pass: bool,
}

const QWP_TOL: f64 = 1e-12;

/// Verifies that a quarter-wave plate at 45° converts the rotated-analyzer
/// eigenstates into the expected linear polarizations: the A eigenstates to
/// −22.5° and 67.5°, the B eigenstates to −67.5° and 22.5°. Also checks
/// that four passes through the plate compose to the identity.
pub fn qwp_equivalence_check() -> QwpCheck {
    let qwp = quarter_wave_plate(45.0);
    let targets = [
        (Setting::A, Sign::Plus, -22.5),
        (Setting::A, Sign::Minus, 67.5),
        (Setting::B, Sign::Plus, -67.5),
        (Setting::B, Sign::Minus, 22.5),
    ];
    let mut cases = Vec::with_capacity(targets.len() + 1);
    for (setting, outcome, angle) in targets {
        let converted = qwp * setting.eigenvector(outcome);
        let target = linear_polarization(angle);
        let deviation = 1.0 - target.dotc(&converted).norm();
        cases.push(QwpCase {
            setting: setting.to_char(),
            outcome: setting.outcome_label(outcome).to_string(),
            target_angle_deg: angle,
            deviation: deviation.abs(),
        });
    }

    // Quarter-wave involution: QWP⁴ = I up to global phase.
    let fourth = qwp * qwp * qwp * qwp;
    let phase = fourth[(0, 0)] / fourth[(0, 0)].norm();
    let identity_dev = (fourth / phase - Matrix2::identity())
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    cases.push(QwpCase {
        setting: 'I',
        outcome: "QWP^4".to_string(),
        target_angle_deg: 0.0,
        deviation: identity_dev,
    });

    let max_deviation = cases.iter().map(|c| c.deviation).fold(0.0, f64::max);
    QwpCheck {
        cases,
        max_deviation,
        pass: max_deviation <= QWP_TOL,
    }
}
