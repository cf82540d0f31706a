//! Grid searches for the distance from a state to the maximally coherent set
//! (`e^{iθ_j}/√N`) or, at `N = 2`, to the maximally entangled set
//! (`(I ⊗ U)|Φ⁺⟩`). Both use the pure-state trace distance
//! `2√(1 − |⟨ψ|φ⟩|²)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use typicality_core::states::{BipartitePureState, PureState};

use crate::{OracleError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Coherent,
    Entangled,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridMinimum {
    /// Smallest trace distance found on the grid.
    pub distance: f64,
    /// The true infimum over the family is at least `distance − error_bound`.
    pub error_bound: f64,
}

pub enum GridInput<'a> {
    Single(&'a PureState),
    Bipartite(&'a BipartitePureState),
}

impl<'a> From<&'a PureState> for GridInput<'a> {
    fn from(s: &'a PureState) -> Self {
        GridInput::Single(s)
    }
}

impl<'a> From<&'a BipartitePureState> for GridInput<'a> {
    fn from(s: &'a BipartitePureState) -> Self {
        GridInput::Bipartite(s)
    }
}

fn trace_distance_from_overlap(overlap_sq: f64) -> f64 {
    2.0 * (1.0 - overlap_sq).clamp(0.0, 1.0).sqrt()
}

/// Grid-minimized trace distance from `state` to `family`, with
/// `resolution` points per angular axis.
pub fn oracle_min_distance<'a>(
    state: impl Into<GridInput<'a>>,
    family: Family,
    resolution: usize,
) -> Result<GridMinimum> {
    if resolution < 2 {
        return Err(OracleError::Unsupported("resolution must be at least 2"));
    }
    match (state.into(), family) {
        (GridInput::Single(psi), Family::Coherent) => coherent(psi, resolution),
        (GridInput::Bipartite(psi), Family::Entangled) => entangled(psi, resolution),
        _ => Err(OracleError::Unsupported("family does not match the state type")),
    }
}

fn coherent(psi: &PureState, resolution: usize) -> Result<GridMinimum> {
    let n = psi.dim();
    if n > 3 {
        return Err(OracleError::TooLarge(n, 3));
    }
    let amps = psi.amplitudes();
    let h = TAU / resolution as f64;
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let axes = n - 1;
    let total = resolution.pow(axes as u32);
    let mut best = f64::INFINITY;
    for idx in 0..total {
        // Global phase is irrelevant, so the first phase stays at 0.
        let mut overlap = amps[0] * inv_sqrt_n;
        let mut rest = idx;
        for a in amps.iter().skip(1) {
            let theta = (rest % resolution) as f64 * h;
            rest /= resolution;
            overlap += a * Complex64::from_polar(inv_sqrt_n, -theta);
        }
        best = best.min(trace_distance_from_overlap(overlap.norm_sqr()));
    }
    // A grid member within h/2 in every phase has overlap ≥ cos(h/2) with the
    // optimum; the trace-distance triangle inequality then gives the bound.
    Ok(GridMinimum {
        distance: best,
        error_bound: 2.0 * (h / 2.0).sin(),
    })
}

fn entangled(psi: &BipartitePureState, resolution: usize) -> Result<GridMinimum> {
    if psi.dim() != 2 {
        return Err(OracleError::Unsupported("entangled grid only at N = 2"));
    }
    let m = psi.amplitudes();
    let h_theta = (PI / 2.0) / (resolution - 1) as f64;
    let h_phase = TAU / resolution as f64;
    let mut best = f64::INFINITY;
    for t in 0..resolution {
        let theta = t as f64 * h_theta;
        let (s, c) = theta.sin_cos();
        for a in 0..resolution {
            let alpha = a as f64 * h_phase;
            for b in 0..resolution {
                let beta = b as f64 * h_phase;
                // U = [[e^{iα} cos θ, e^{iβ} sin θ], [−e^{−iβ} sin θ, e^{−iα} cos θ]]
                let u00 = Complex64::from_polar(c, alpha);
                let u01 = Complex64::from_polar(s, beta);
                let u10 = -Complex64::from_polar(s, -beta);
                let u11 = Complex64::from_polar(c, -alpha);
                // (I ⊗ U)|Φ⁺⟩ has coefficient matrix Uᵀ/√2.
                let phi = [[u00, u10], [u01, u11]];
                let mut overlap = Complex64::new(0.0, 0.0);
                for i in 0..2 {
                    for j in 0..2 {
                        overlap += phi[i][j].conj() * m[(i, j)];
                    }
                }
                let overlap_sq = overlap.norm_sqr() / 2.0;
                best = best.min(trace_distance_from_overlap(overlap_sq));
            }
        }
    }
    // SU(2) as unit quaternions in Hopf coordinates; a cell's half-diagonal r
    // bounds the quaternion distance, and |Tr U†V|/2 ≥ 1 − r²/2.
    let r = (h_theta * h_theta + 2.0 * h_phase * h_phase).sqrt() / 2.0;
    let dot = (1.0 - r * r / 2.0).max(0.0);
    Ok(GridMinimum {
        distance: best,
        error_bound: 2.0 * (1.0 - dot * dot).sqrt(),
    })
}
