use nalgebra::DMatrix;
use num_complex::Complex64;
use typicality_core::states::{BipartitePureState, PureState};

use crate::{OracleError, Result};

const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = -1e-10;
const HERMITIAN_TOL: f64 = 1e-10;
const MAX_NEGATIVITY_DIM: usize = 8;

/// A validated density operator.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(OracleError::InvalidDensityMatrix("not square"));
        }
        let n = entries.nrows();
        for i in 0..n {
            for j in 0..n {
                if (entries[(i, j)] - entries[(j, i)].conj()).norm() > HERMITIAN_TOL {
                    return Err(OracleError::InvalidDensityMatrix("not Hermitian"));
                }
            }
        }
        if (entries.trace().re - 1.0).abs() > TRACE_TOL {
            return Err(OracleError::InvalidDensityMatrix("trace differs from 1"));
        }
        let eig = entries.clone().symmetric_eigen();
        if eig.eigenvalues.iter().any(|&l| l < PSD_TOL) {
            return Err(OracleError::InvalidDensityMatrix("negative eigenvalue"));
        }
        Ok(Self { entries })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(state: &PureState) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Self {
            entries: &v * v.adjoint(),
        }
    }

    /// Projector onto a bipartite state, basis order `|i⟩|j⟩ ↦ i·N + j`.
    pub fn bipartite_projector(state: &BipartitePureState) -> Self {
        Self::projector(&state.to_vector())
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Partial transpose on the second factor of `ℂ^n ⊗ ℂ^n`.
    pub fn partial_transpose_b(&self, n: usize) -> DMatrix<Complex64> {
        assert_eq!(n * n, self.dim());
        DMatrix::from_fn(n * n, n * n, |r, c| {
            let (i, j) = (r / n, r % n);
            let (k, l) = (c / n, c % n);
            self.entries[(i * n + l, k * n + j)]
        })
    }
}

/// `Σ_{i≠j} |ρ_ij|`.
pub fn oracle_l1(rho: &DensityMatrix) -> f64 {
    let n = rho.dim();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += rho.entries[(i, j)].norm();
            }
        }
    }
    total
}

/// `(‖ρ^{T_B}‖₁ − 1)/2` from the eigenvalues of the partial transpose.
pub fn oracle_negativity(state: &BipartitePureState) -> Result<f64> {
    let n = state.dim();
    if n > MAX_NEGATIVITY_DIM {
        return Err(OracleError::TooLarge(n, MAX_NEGATIVITY_DIM));
    }
    let pt = DensityMatrix::bipartite_projector(state).partial_transpose_b(n);
    let trace_norm: f64 = pt.symmetric_eigen().eigenvalues.iter().map(|l| l.abs()).sum();
    Ok((trace_norm - 1.0) / 2.0)
}

/// Schmidt coefficients as eigenvalues of the reduced state `M M†`, sorted
/// in decreasing order.
pub fn gram_schmidt_spectrum(state: &BipartitePureState) -> Vec<f64> {
    let m = state.amplitudes();
    let gram = m * m.adjoint();
    let mut eig: Vec<f64> = gram.symmetric_eigen().eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    eig
}
