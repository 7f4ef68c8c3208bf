//! Pure states and density matrices on the 16-dimensional four-photon space.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Number of photons in the entangled state.
pub const N_PHOTONS: usize = 4;
/// Hilbert-space dimension, 2⁴.
pub const DIM: usize = 16;
/// Basis index of `|HVVH⟩`, one of the two GHZ branches.
pub const IDX_HVVH: usize = 0b0110;
/// Basis index of `|VHHV⟩`, the other GHZ branch.
pub const IDX_VHHV: usize = 0b1001;

pub type Amplitudes = SVector<Complex64, DIM>;
pub type Matrix16 = SMatrix<Complex64, DIM, DIM>;

/// Tolerance for identities that are exact up to rounding.
const EXACT_TOL: f64 = 1e-12;
/// Eigenvalues of a physical density matrix may dip this far below zero.
const EIGENVALUE_FLOOR: f64 = -1e-10;

/// Basis index of a product label such as `"HVVH"` (photon 1 first).
pub fn basis_index(label: &str) -> Result<usize> {
    let bad = || Error::BadBasisLabel {
        label: label.to_string(),
    };
    if label.chars().count() != N_PHOTONS {
        return Err(bad());
    }
    let mut index = 0;
    for c in label.chars() {
        index <<= 1;
        match c {
            'H' | 'h' => {}
            'V' | 'v' => index |= 1,
            _ => return Err(bad()),
        }
    }
    Ok(index)
}

/// Product label of a basis index; inverse of [`basis_index`].
pub fn basis_label(index: usize) -> String {
    assert!(index < DIM, "basis index out of range: {index}");
    (0..N_PHOTONS)
        .map(|photon| {
            if index >> (N_PHOTONS - 1 - photon) & 1 == 0 {
                'H'
            } else {
                'V'
            }
        })
        .collect()
}

/// A normalized pure state of the four photons.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: Amplitudes,
}

impl PureState {
    /// Wraps an amplitude vector, rejecting it unless Σ|amp|² = 1 within 1e-12.
    pub fn new(amps: Amplitudes) -> Result<Self> {
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > EXACT_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self { amps })
    }

    /// The product basis state named by `label`, e.g. `"HVVH"`.
    pub fn basis(label: &str) -> Result<Self> {
        let mut amps = Amplitudes::zeros();
        amps[basis_index(label)?] = Complex64::ONE;
        Ok(Self { amps })
    }

    pub fn amplitudes(&self) -> &Amplitudes {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product ⟨self|other⟩.
    pub fn overlap(&self, other: &PureState) -> Complex64 {
        self.amps.dotc(&other.amps)
    }

    /// The projector |ψ⟩⟨ψ| as a density matrix.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            mat: self.amps * self.amps.adjoint(),
        }
    }
}

/// The four-photon GHZ state (|HVVH⟩ + |VHHV⟩)/√2.
pub fn ghz_state() -> PureState {
    let mut amps = Amplitudes::zeros();
    let w = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[IDX_HVVH] = w;
    amps[IDX_VHHV] = w;
    PureState { amps }
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: Matrix16,
}

impl DensityMatrix {
    /// Validates Hermiticity and trace within 1e-12 and eigenvalues down to
    /// −1e-10 (the looser tier because they come out of an iterative solver).
    pub fn new(mat: Matrix16) -> Result<Self> {
        let mut max_dev: f64 = 0.0;
        for r in 0..DIM {
            for c in r..DIM {
                max_dev = max_dev.max((mat[(r, c)] - mat[(c, r)].conj()).norm());
            }
        }
        if max_dev > EXACT_TOL {
            return Err(Error::NotHermitian { max_dev });
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > EXACT_TOL || trace.im.abs() > EXACT_TOL {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        let eigenvalues = mat.symmetric_eigenvalues();
        if let Some(min) = eigenvalues.iter().cloned().reduce(f64::min) {
            if min < EIGENVALUE_FLOOR {
                return Err(Error::NotPositive { value: min });
            }
        }
        Ok(Self { mat })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        psi.to_density()
    }

    /// The maximally mixed state I/16.
    pub fn maximally_mixed() -> Self {
        Self {
            mat: Matrix16::identity() * Complex64::new(1.0 / DIM as f64, 0.0),
        }
    }

    /// A random full-rank mixed state, drawn as GG†/Tr(GG†) with Ginibre G.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let g = Matrix16::from_fn(|_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let gram = g * g.adjoint();
        let trace = gram.trace().re;
        Self {
            mat: gram / Complex64::new(trace, 0.0),
        }
    }

    pub fn matrix(&self) -> &Matrix16 {
        &self.mat
    }

    /// Matrix element ⟨bra|ρ|ket⟩ for two basis labels.
    pub fn element(&self, bra: &str, ket: &str) -> Result<Complex64> {
        Ok(self.mat[(basis_index(bra)?, basis_index(ket)?)])
    }

    /// Tr(ρ O) for a Hermitian observable O.
    pub fn expectation(&self, op: &Matrix16) -> f64 {
        let mut sum = Complex64::ZERO;
        for r in 0..DIM {
            for c in 0..DIM {
                sum += self.mat[(r, c)] * op[(c, r)];
            }
        }
        debug_assert!(sum.im.abs() < 1e-9, "expectation has imaginary part {}", sum.im);
        sum.re
    }
}

/// Overlap ⟨Ψ|ρ|Ψ⟩ with the GHZ target state.
///
/// Evaluated both directly and through the population/coherence
/// decomposition ½(ρ_HVVH,HVVH + ρ_VHHV,VHHV) + Re ρ_HVVH,VHHV; the two
/// routes must agree to 1e-12.
pub fn fidelity_ghz(rho: &DensityMatrix) -> f64 {
    let ghz = ghz_state();
    let direct = (ghz.amplitudes().adjoint() * rho.mat * ghz.amplitudes())[(0, 0)].re;
    let populations =
        0.5 * (rho.mat[(IDX_HVVH, IDX_HVVH)].re + rho.mat[(IDX_VHHV, IDX_VHHV)].re);
    let decomposed = populations + ghz_coherence(rho);
    assert!(
        (direct - decomposed).abs() <= EXACT_TOL,
        "fidelity routes disagree: {direct} vs {decomposed}"
    );
    decomposed
}

/// The GHZ branch coherence Re⟨HVVH|ρ|VHHV⟩.
pub fn ghz_coherence(rho: &DensityMatrix) -> f64 {
    rho.mat[(IDX_HVVH, IDX_VHHV)].re
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn basis_index_follows_msb_convention() {
        assert_eq!(basis_index("HHHH").unwrap(), 0);
        assert_eq!(basis_index("HVVH").unwrap(), IDX_HVVH);
        assert_eq!(basis_index("VHHV").unwrap(), IDX_VHHV);
        assert_eq!(basis_index("VVVV").unwrap(), 15);
        assert_eq!(basis_label(IDX_HVVH), "HVVH");
        assert_eq!(basis_label(IDX_VHHV), "VHHV");
        assert!(basis_index("HVX").is_err());
        assert!(basis_index("HVXH").is_err());
    }

    #[test]
    #[allow(clippy::approx_constant)] // frozen reference value
    fn ghz_state_has_two_equal_amplitudes() {
        let psi = ghz_state();
        assert_abs_diff_eq!(psi.amp(IDX_HVVH).re, 0.70711, epsilon = 5e-6);
        assert_abs_diff_eq!(psi.amp(IDX_VHHV).re, 0.70711, epsilon = 5e-6);
        for i in 0..DIM {
            if i != IDX_HVVH && i != IDX_VHHV {
                assert_eq!(psi.amp(i), Complex64::ZERO);
            }
        }
        assert_abs_diff_eq!(psi.norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ghz_overlap_with_branch_is_half() {
        let psi = ghz_state();
        let branch = PureState::basis("HVVH").unwrap();
        assert_abs_diff_eq!(psi.overlap(&branch).norm_sqr(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn non_normalized_state_rejected() {
        let mut amps = Amplitudes::zeros();
        amps[0] = Complex64::new(0.5, 0.0);
        assert!(matches!(
            PureState::new(amps),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn density_validation_rejects_bad_matrices() {
        let mut mat = Matrix16::zeros();
        mat[(0, 1)] = Complex64::new(0.3, 0.0);
        mat[(0, 0)] = Complex64::ONE;
        assert!(matches!(
            DensityMatrix::new(mat),
            Err(Error::NotHermitian { .. })
        ));

        let double = Matrix16::identity() * Complex64::new(2.0 / DIM as f64, 0.0);
        assert!(matches!(
            DensityMatrix::new(double),
            Err(Error::TraceNotOne { .. })
        ));

        // Unit-trace Hermitian matrix with a −1 eigenvalue.
        let mut indef = Matrix16::zeros();
        indef[(0, 0)] = Complex64::new(2.0, 0.0);
        indef[(1, 1)] = Complex64::new(-1.0, 0.0);
        assert!(matches!(
            DensityMatrix::new(indef),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn fidelity_of_reference_states() {
        let pure = ghz_state().to_density();
        assert_abs_diff_eq!(fidelity_ghz(&pure), 1.0, epsilon = 1e-12);

        let a = PureState::basis("HVVH").unwrap().to_density();
        let b = PureState::basis("VHHV").unwrap().to_density();
        let diag =
            DensityMatrix::new((a.matrix() + b.matrix()) * Complex64::new(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(fidelity_ghz(&diag), 0.5, epsilon = 1e-12);

        let mixed = DensityMatrix::maximally_mixed();
        assert_abs_diff_eq!(fidelity_ghz(&mixed), 1.0 / 16.0, epsilon = 1e-12);
    }

    #[test]
    fn coherence_of_reference_states() {
        assert_abs_diff_eq!(ghz_coherence(&ghz_state().to_density()), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(
            ghz_coherence(&DensityMatrix::maximally_mixed()),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn random_density_is_valid() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..10 {
            let rho = DensityMatrix::random(&mut rng);
            assert!(DensityMatrix::new(*rho.matrix()).is_ok());
        }
    }
}
