//! Distances from a pure state to the maximally entangled set `ℳ_E` and to the
//! maximally coherent set `ℳ`.
//!
//! Both infima depend on the state only through `S = Σ √λ_i` (Schmidt
//! coefficients for `ℳ_E`, diagonal weights for `ℳ`):
//!
//! * trace: `2 √(1 − S²/N)`
//! * Hilbert–Schmidt: `√2 √(1 − S²/N)`
//! * Bures: `√2 √(1 − S/√N)`
//!
//! Radicands are clamped to `[0, 1]`; near the target sets rounding can push
//! them a few ulps below zero.

use num_complex::Complex64;
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::measures::{l1_coherence_of_diagonal, negativity};
use crate::states::{diagonal_part, PureState, SchmidtSpectrum, SimplexPoint};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceTriple {
    pub trace: f64,
    pub hilbert_schmidt: f64,
    pub bures: f64,
}

impl DistanceTriple {
    fn from_sqrt_sum(s: f64, n: usize) -> Self {
        let nf = n as f64;
        let r = (1.0 - s * s / nf).clamp(0.0, 1.0).sqrt();
        let rb = (1.0 - s / nf.sqrt()).clamp(0.0, 1.0).sqrt();
        Self {
            trace: 2.0 * r,
            hilbert_schmidt: core::f64::consts::SQRT_2 * r,
            bures: core::f64::consts::SQRT_2 * rb,
        }
    }
}

pub fn distance_to_max_entangled(spectrum: &SchmidtSpectrum) -> DistanceTriple {
    DistanceTriple::from_sqrt_sum(spectrum.sqrt_sum(), spectrum.dim())
}

pub fn distance_to_max_coherent(state: &PureState) -> DistanceTriple {
    let s: f64 = state.amplitudes().iter().map(|a| a.norm()).sum();
    DistanceTriple::from_sqrt_sum(s, state.dim())
}

pub fn distance_to_max_coherent_of_diagonal(diag: &SimplexPoint) -> DistanceTriple {
    DistanceTriple::from_sqrt_sum(diag.sqrt_sum(), diag.dim())
}

/// The member of `ℳ` attaining the infimum: `e^{iθ_j}/√N` with the phases of
/// `state` (zero phase where the amplitude vanishes).
pub fn closest_max_coherent(state: &PureState) -> PureState {
    let a = 1.0 / (state.dim() as f64).sqrt();
    let amps = state
        .amplitudes()
        .iter()
        .map(|z| {
            if z.norm() > 0.0 {
                Complex64::from_polar(a, z.arg())
            } else {
                Complex64::new(a, 0.0)
            }
        })
        .collect();
    PureState::normalized(amps).expect("non-empty")
}

#[derive(Clone, Copy, Debug)]
pub enum ComplementarityInput<'a> {
    Entangled(&'a SchmidtSpectrum),
    Coherent(&'a SimplexPoint),
}

/// Absolute residuals of the distance/measure complementarity identities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplementarityResiduals {
    /// `|N D²_Tr/8 + 𝒩 − 𝒩_max|` or `|N Δ²_Tr/4 + C_l1 − (N−1)|`.
    pub trace: f64,
    /// `|N D²_HS/4 + 𝒩 − 𝒩_max|` or `|N Δ²_HS/2 + C_l1 − (N−1)|`.
    pub hilbert_schmidt: f64,
}

impl ComplementarityResiduals {
    pub fn max(&self) -> f64 {
        self.trace.max(self.hilbert_schmidt)
    }
}

pub fn complementarity_residuals(input: ComplementarityInput<'_>) -> ComplementarityResiduals {
    match input {
        ComplementarityInput::Entangled(spectrum) => {
            let n = spectrum.dim() as f64;
            let d = distance_to_max_entangled(spectrum);
            let neg = negativity(spectrum);
            ComplementarityResiduals {
                trace: (n * d.trace * d.trace / 8.0 + neg.value - neg.max_value).abs(),
                hilbert_schmidt: (n * d.hilbert_schmidt * d.hilbert_schmidt / 4.0 + neg.value
                    - neg.max_value)
                    .abs(),
            }
        }
        ComplementarityInput::Coherent(diag) => {
            let n = diag.dim() as f64;
            let d = distance_to_max_coherent_of_diagonal(diag);
            let c = l1_coherence_of_diagonal(diag).value;
            ComplementarityResiduals {
                trace: (n * d.trace * d.trace / 4.0 + c - (n - 1.0)).abs(),
                hilbert_schmidt: (n * d.hilbert_schmidt * d.hilbert_schmidt / 2.0 + c - (n - 1.0))
                    .abs(),
            }
        }
    }
}

/// `‖ψ^(d) − I/N‖₁ = Σ_i |λ_i − 1/N|`.
pub fn diag_trace_distance_to_maxmixed(diag: &SimplexPoint) -> f64 {
    let u = 1.0 / diag.dim() as f64;
    diag.weights().iter().map(|l| (l - u).abs()).sum()
}

/// `‖p − q‖₁ − ‖√p − √q‖₂²` for commuting (diagonal) operators; never below
/// `−1e−12` in exact arithmetic terms.
pub fn sqrt_trace_inequality_check(p: &SimplexPoint, q: &SimplexPoint) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    let mut l1 = 0.0;
    let mut hs = 0.0;
    for (a, b) in p.weights().iter().zip(q.weights()) {
        l1 += (a - b).abs();
        let d = a.sqrt() - b.sqrt();
        hs += d * d;
    }
    Ok(l1 - hs)
}

/// `Δ²_B` lower-bound residual `‖ψ^(d) − I/N‖₁ − Δ²_B(ψ)`.
pub fn coherent_bures_bound_residual(state: &PureState) -> f64 {
    let d = diagonal_part(state);
    let b = distance_to_max_coherent_of_diagonal(&d).bures;
    diag_trace_distance_to_maxmixed(&d) - b * b
}
