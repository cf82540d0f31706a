//! Single-state quantities: l₁ coherence, relative entropy of coherence,
//! negativity and α-classical purity.
//!
//! Everything here reduces to the moduli of the amplitudes (coherence) or to
//! the Schmidt spectrum (negativity), so no density matrix is ever formed.

#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::states::{diagonal_part, PureState, SchmidtSpectrum, SimplexPoint};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherenceValue {
    pub value: f64,
    pub dimension: usize,
}

impl CoherenceValue {
    /// `C_l1 / (N − 1)`; `None` for `N = 1`.
    pub fn scaled_l1(&self) -> Option<f64> {
        (self.dimension > 1).then(|| self.value / (self.dimension - 1) as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NegativityValue {
    pub value: f64,
    /// `(N − 1)/2`.
    pub max_value: f64,
}

impl NegativityValue {
    /// `𝒩/𝒩_max`; `None` for `N = 1` where the maximum is zero.
    pub fn scaled(&self) -> Option<f64> {
        (self.max_value > 0.0).then(|| self.value / self.max_value)
    }
}

/// `C_l1(ψ) = (Σ_i |ψ_i|)² − 1`.
pub fn l1_coherence(state: &PureState) -> CoherenceValue {
    let s: f64 = state.amplitudes().iter().map(|a| a.norm()).sum();
    CoherenceValue {
        value: (s * s - 1.0).max(0.0),
        dimension: state.dim(),
    }
}

/// `C_l1` from the diagonal `λ_i = |ψ_i|²`: `(Σ √λ_i)² − 1`.
pub fn l1_coherence_of_diagonal(diag: &SimplexPoint) -> CoherenceValue {
    let s = diag.sqrt_sum();
    CoherenceValue {
        value: (s * s - 1.0).max(0.0),
        dimension: diag.dim(),
    }
}

/// `C_r(ψ) = −Σ λ_i ln λ_i` over the diagonal, natural log, `0 ln 0 = 0`.
pub fn relative_entropy_coherence(state: &PureState) -> CoherenceValue {
    relative_entropy_of_diagonal(&diagonal_part(state))
}

pub fn relative_entropy_of_diagonal(diag: &SimplexPoint) -> CoherenceValue {
    let h: f64 = diag
        .weights()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum();
    CoherenceValue {
        value: h.max(0.0),
        dimension: diag.dim(),
    }
}

/// Pure-state negativity `((Σ √λ_i)² − 1)/2`.
pub fn negativity(spectrum: &SchmidtSpectrum) -> NegativityValue {
    let s = spectrum.sqrt_sum();
    NegativityValue {
        value: ((s * s - 1.0) / 2.0).max(0.0),
        max_value: (spectrum.dim() as f64 - 1.0) / 2.0,
    }
}

/// `Tr[(ρ^(d))^α] = Σ λ_i^α`, with `0^α = 0`.
pub fn alpha_classical_purity(diag: &SimplexPoint, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain {
            function: "alpha_classical_purity",
            value: alpha,
        });
    }
    Ok(diag
        .weights()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| if alpha == 2.0 { l * l } else { l.powf(alpha) })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_complex::Complex64;

    fn state(moduli_sq: &[f64]) -> PureState {
        PureState::new(
            moduli_sq
                .iter()
                .enumerate()
                .map(|(k, l)| Complex64::from_polar(l.sqrt(), 0.37 * k as f64))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn l1_examples() {
        assert_eq!(l1_coherence(&PureState::basis(5, 1).unwrap()).value, 0.0);
        for n in [2usize, 3, 10] {
            let v = l1_coherence(&PureState::uniform_superposition(n).unwrap());
            assert!((v.value - (n - 1) as f64).abs() < 1e-12);
            assert!((v.scaled_l1().unwrap() - 1.0).abs() < 1e-12);
        }
        let psi = state(&[0.5, 0.3, 0.2]);
        let s = 0.5f64.sqrt() + 0.3f64.sqrt() + 0.2f64.sqrt();
        assert!((l1_coherence(&psi).value - (s * s - 1.0)).abs() < 1e-14);
        // Off-diagonal double sum 2(√(.5·.3) + √(.5·.2) + √(.3·.2)).
        let off = 2.0 * ((0.15f64).sqrt() + (0.1f64).sqrt() + (0.06f64).sqrt());
        assert!((l1_coherence(&psi).value - off).abs() < 1e-14);
        assert_eq!(
            l1_coherence_of_diagonal(&diagonal_part(&psi)).value,
            l1_coherence(&psi).value
        );
        assert!(CoherenceValue { value: 0.0, dimension: 1 }.scaled_l1().is_none());
    }

    #[test]
    fn relative_entropy_examples() {
        assert_eq!(relative_entropy_coherence(&PureState::basis(4, 2).unwrap()).value, 0.0);
        for n in [2usize, 7] {
            let v = relative_entropy_coherence(&PureState::uniform_superposition(n).unwrap());
            assert!((v.value - (n as f64).ln()).abs() < 1e-14);
        }
        let v = relative_entropy_coherence(&state(&[0.5, 0.5]));
        assert!((v.value - core::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn negativity_examples() {
        let prod = SchmidtSpectrum::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(negativity(&prod).value, 0.0);
        let me = negativity(&SchmidtSpectrum::uniform(2).unwrap());
        assert!((me.value - 0.5).abs() < 1e-15);
        assert_eq!(me.max_value, 0.5);
        assert!((me.scaled().unwrap() - 1.0).abs() < 1e-15);
        let v = negativity(&SchmidtSpectrum::new(vec![0.75, 0.25]).unwrap());
        // ((√3 + 1)²/4 − 1)/2 = √3/4
        assert!((v.value - 3f64.sqrt() / 4.0).abs() < 1e-15);
        assert!((v.value - 0.433_012_701_892_219_3).abs() < 1e-15);
        assert!(negativity(&SchmidtSpectrum::uniform(1).unwrap()).scaled().is_none());
    }

    #[test]
    fn purity_examples() {
        let d = SimplexPoint::new(vec![0.5, 0.3, 0.2]).unwrap();
        assert!((alpha_classical_purity(&d, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let expect = 0.5f64.sqrt() + 0.3f64.sqrt() + 0.2f64.sqrt();
        assert!((alpha_classical_purity(&d, 0.5).unwrap() - expect).abs() < 1e-15);
        assert!((alpha_classical_purity(&d, 0.5).unwrap() - 1.702_04).abs() < 1e-5);
        let u = SimplexPoint::uniform(8).unwrap();
        assert!((alpha_classical_purity(&u, 2.0).unwrap() - 0.125).abs() < 1e-15);
        let z = SimplexPoint::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(alpha_classical_purity(&z, 0.5).unwrap(), 1.0);
        assert!(alpha_classical_purity(&d, 0.0).is_err());
        assert!(alpha_classical_purity(&d, -1.0).is_err());
    }
}
