//! Measurement settings and their single-photon observables.

use std::fmt;
use std::str::FromStr;

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

pub type Matrix2 = SMatrix<Complex64, 2, 2>;
pub type Vector2 = SVector<Complex64, 2>;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// A ±1 measurement outcome or local hidden value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// Maps bit 0 to +1 and bit 1 to −1.
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// One polarization measurement choice for a single photon.
///
/// `X` analyzes the H′/V′ linear basis, `Y` the R/L circular basis, and
/// `A`/`B` are the rotated observables (X ± Y)/√2 used by the Bell test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Setting {
    X,
    Y,
    A,
    B,
}

impl Setting {
    pub const ALL: [Setting; 4] = [Setting::X, Setting::Y, Setting::A, Setting::B];

    /// The 2×2 Hermitian observable with eigenvalues ±1.
    pub fn observable(self) -> Matrix2 {
        let x = Matrix2::new(
            Complex64::ZERO,
            Complex64::ONE,
            Complex64::ONE,
            Complex64::ZERO,
        );
        let y = Matrix2::new(
            Complex64::ZERO,
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::ZERO,
        );
        match self {
            Setting::X => x,
            Setting::Y => y,
            Setting::A => (x + y) * Complex64::new(SQRT_HALF, 0.0),
            Setting::B => (x - y) * Complex64::new(SQRT_HALF, 0.0),
        }
    }

    /// The normalized eigenvector for the given outcome.
    ///
    /// All four settings have eigenvectors of the form (1, ±e^{iφ})/√2 with
    /// φ = 0 (X), π/2 (Y), π/4 (A) and −π/4 (B).
    pub fn eigenvector(self, outcome: Sign) -> Vector2 {
        let phase = match self {
            Setting::X => 0.0,
            Setting::Y => std::f64::consts::FRAC_PI_2,
            Setting::A => std::f64::consts::FRAC_PI_4,
            Setting::B => -std::f64::consts::FRAC_PI_4,
        };
        let second = Complex64::from_polar(SQRT_HALF, phase) * outcome.value();
        Vector2::new(Complex64::new(SQRT_HALF, 0.0), second)
    }

    /// Human-readable label of an outcome, matching the analyzer eigenstate.
    pub fn outcome_label(self, outcome: Sign) -> &'static str {
        match (self, outcome) {
            (Setting::X, Sign::Plus) => "H'",
            (Setting::X, Sign::Minus) => "V'",
            (Setting::Y, Sign::Plus) => "R",
            (Setting::Y, Sign::Minus) => "L",
            (Setting::A, Sign::Plus) => "A+",
            (Setting::A, Sign::Minus) => "A-",
            (Setting::B, Sign::Plus) => "B+",
            (Setting::B, Sign::Minus) => "B-",
        }
    }

    pub fn from_char(c: char) -> Option<Setting> {
        match c {
            'X' | 'x' => Some(Setting::X),
            'Y' | 'y' => Some(Setting::Y),
            'A' | 'a' => Some(Setting::A),
            'B' | 'b' => Some(Setting::B),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Setting::X => 'X',
            Setting::Y => 'Y',
            Setting::A => 'A',
            Setting::B => 'B',
        }
    }
}

/// Free-function form of [`Setting::observable`].
pub fn setting_observable(setting: Setting) -> Matrix2 {
    setting.observable()
}

/// One measurement setting per photon, photon 1 first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SettingVector {
    settings: [Setting; 4],
}

impl SettingVector {
    pub const fn new(settings: [Setting; 4]) -> Self {
        Self { settings }
    }

    pub fn settings(&self) -> [Setting; 4] {
        self.settings
    }

    /// Setting for a photon, 0-based (index 0 is photon 1).
    pub fn setting(&self, photon: usize) -> Setting {
        self.settings[photon]
    }
}

impl fmt::Display for SettingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.settings {
            write!(f, "{}", s.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for SettingVector {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self, Error> {
        let bad = || Error::BadSettingString {
            input: input.to_string(),
        };
        let mut settings = [Setting::X; 4];
        let mut chars = input.chars();
        for slot in settings.iter_mut() {
            *slot = chars.next().and_then(Setting::from_char).ok_or_else(bad)?;
        }
        if chars.next().is_some() {
            return Err(bad());
        }
        Ok(Self { settings })
    }
}

impl Serialize for SettingVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SettingVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn max_entry(m: &Matrix2) -> f64 {
        m.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn observables_are_hermitian_traceless_involutions() {
        for s in Setting::ALL {
            let o = s.observable();
            assert!(max_entry(&(o - o.adjoint())) < 1e-12, "{s:?} not Hermitian");
            assert!(o.trace().norm() < 1e-12, "{s:?} not traceless");
            let square = o * o;
            assert!(
                max_entry(&(square - Matrix2::identity())) < 1e-12,
                "{s:?} squared is not the identity"
            );
        }
    }

    #[test]
    fn eigenvectors_match_observables() {
        for s in Setting::ALL {
            let o = s.observable();
            for sign in [Sign::Plus, Sign::Minus] {
                let v = s.eigenvector(sign);
                let residual = o * v - v * Complex64::new(sign.value(), 0.0);
                assert!(
                    residual.iter().map(|c| c.norm()).fold(0.0, f64::max) < 1e-12,
                    "{s:?}/{sign:?} eigenvector fails"
                );
                assert_abs_diff_eq!(v.dotc(&v).re, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn x_eigenvectors_are_diagonal_linear_basis() {
        // H' = (H + V)/√2 is the +1 eigenstate, V' = (H − V)/√2 the −1 one.
        let hp = Setting::X.eigenvector(Sign::Plus);
        assert_abs_diff_eq!(hp[0].re, SQRT_HALF, epsilon = 1e-15);
        assert_abs_diff_eq!(hp[1].re, SQRT_HALF, epsilon = 1e-15);
        let vp = Setting::X.eigenvector(Sign::Minus);
        assert_abs_diff_eq!(vp[1].re, -SQRT_HALF, epsilon = 1e-15);
    }

    #[test]
    fn y_eigenvectors_are_circular_basis() {
        let r = Setting::Y.eigenvector(Sign::Plus);
        assert_abs_diff_eq!(r[1].im, SQRT_HALF, epsilon = 1e-15);
        assert_abs_diff_eq!(r[1].re, 0.0, epsilon = 1e-15);
        let l = Setting::Y.eigenvector(Sign::Minus);
        assert_abs_diff_eq!(l[1].im, -SQRT_HALF, epsilon = 1e-15);
    }

    #[test]
    fn setting_vector_round_trips_through_strings() {
        let sv: SettingVector = "XYYX".parse().unwrap();
        assert_eq!(sv.to_string(), "XYYX");
        assert_eq!(sv.setting(0), Setting::X);
        assert_eq!(sv.setting(1), Setting::Y);
        assert!("XY".parse::<SettingVector>().is_err());
        assert!("XYZW".parse::<SettingVector>().is_err());
        assert!("XYYXX".parse::<SettingVector>().is_err());
    }
}
