//! Pure states, their Haar-uniform sampling, Schmidt spectra and diagonals.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;
use rand_core::RngCore;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-12;
const SPECTRUM_RENORMALIZE: f64 = 1e-12;
const SPECTRUM_MAX_DRIFT: f64 = 1e-9;

/// Unit vector of amplitudes in the fixed reference basis `{|i⟩}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wraps amplitudes that are already normalized to within `1e-12`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let norm_sqr = squared_norm(&amplitudes);
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales `amplitudes` to unit length.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::ZeroDimension);
        }
        let norm = squared_norm(&amplitudes).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self { amplitudes })
    }

    /// `|i⟩` in dimension `n`.
    pub fn basis(n: usize, i: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if i >= n {
            return Err(Error::InvalidInput("basis index out of range"));
        }
        let mut amplitudes = alloc::vec![Complex64::new(0.0, 0.0); n];
        amplitudes[i] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// `(1/√n) Σ_j |j⟩`.
    pub fn uniform_superposition(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        let a = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        Ok(Self {
            amplitudes: alloc::vec![a; n],
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }
}

fn squared_norm(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum()
}

/// Pure state of `C^N ⊗ C^N`; entry `(i, j)` is the amplitude of `|i⟩_A|j⟩_B`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartitePureState {
    amplitudes: DMatrix<Complex64>,
}

impl BipartitePureState {
    pub fn new(amplitudes: DMatrix<Complex64>) -> Result<Self> {
        if amplitudes.nrows() != amplitudes.ncols() {
            return Err(Error::DimensionMismatch(amplitudes.nrows(), amplitudes.ncols()));
        }
        if amplitudes.nrows() == 0 {
            return Err(Error::ZeroDimension);
        }
        let norm_sqr = squared_norm(amplitudes.as_slice());
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self { amplitudes })
    }

    /// `Σ_i √λ_i |i⟩|i⟩` for a given (not necessarily sorted) spectrum.
    pub fn from_schmidt_coefficients(lambdas: &[f64]) -> Result<Self> {
        let n = lambdas.len();
        let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for (i, &l) in lambdas.iter().enumerate() {
            if !(l >= 0.0) {
                return Err(Error::InvalidInput("negative Schmidt coefficient"));
            }
            m[(i, i)] = Complex64::new(l.sqrt(), 0.0);
        }
        Self::new(m)
    }

    /// `(1/√N) Σ_i |i⟩|i⟩`.
    pub fn maximally_entangled(n: usize) -> Result<Self> {
        Self::from_schmidt_coefficients(&alloc::vec![1.0 / n as f64; n])
    }

    /// Subsystem dimension `N`.
    pub fn dim(&self) -> usize {
        self.amplitudes.nrows()
    }

    pub fn amplitudes(&self) -> &DMatrix<Complex64> {
        &self.amplitudes
    }

    /// The same state viewed as a vector in `C^(N²)`, index `i·N + j`.
    pub fn to_vector(&self) -> PureState {
        let n = self.dim();
        let mut v = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                v.push(self.amplitudes[(i, j)]);
            }
        }
        PureState { amplitudes: v }
    }
}

/// Squared Schmidt coefficients, sorted non-increasing, summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpectrum {
    lambdas: Vec<f64>,
}

impl SchmidtSpectrum {
    /// Validates a probability vector and sorts it non-increasing.
    pub fn new(mut lambdas: Vec<f64>) -> Result<Self> {
        validate_probability(&lambdas, 1e-10)?;
        lambdas.sort_unstable_by(|a, b| b.total_cmp(a));
        Ok(Self { lambdas })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(alloc::vec![1.0 / n as f64; n])
    }

    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// `Σ_i √λ_i`.
    pub fn sqrt_sum(&self) -> f64 {
        self.lambdas.iter().map(|l| l.sqrt()).sum()
    }

    /// The spectrum as a point of the simplex, i.e. the diagonal of `ρ_A` in
    /// its Schmidt basis.
    pub fn to_simplex_point(&self) -> SimplexPoint {
        SimplexPoint {
            weights: self.lambdas.clone(),
        }
    }
}

/// A point of the probability simplex `Δ_{N−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexPoint {
    weights: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        validate_probability(&weights, NORM_TOL)?;
        Ok(Self { weights })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(alloc::vec![1.0 / n as f64; n])
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ_i √w_i`.
    pub fn sqrt_sum(&self) -> f64 {
        self.weights.iter().map(|w| w.sqrt()).sum()
    }
}

fn validate_probability(p: &[f64], tol: f64) -> Result<()> {
    if p.is_empty() {
        return Err(Error::ZeroDimension);
    }
    if p.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidInput("negative or non-finite weight"));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::NotNormalized(total));
    }
    Ok(())
}

fn complex_gaussian<R: RngCore + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Haar-uniform pure state of `C^n`: normalized i.i.d. complex Gaussians.
pub fn haar_sample<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Result<PureState> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        if squared_norm(&v) > 0.0 {
            return PureState::normalized(v);
        }
    }
}

/// Haar-uniform pure state of `C^n ⊗ C^n`.
pub fn haar_sample_bipartite<R: RngCore + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<BipartitePureState> {
    let v = haar_sample(n * n, rng)?;
    // Row-major fill so that entry (i, j) is vector index i·n + j.
    let m = DMatrix::from_row_slice(n, n, v.amplitudes());
    Ok(BipartitePureState { amplitudes: m })
}

/// Squared singular values of the amplitude matrix.
pub fn schmidt_spectrum(state: &BipartitePureState) -> Result<SchmidtSpectrum> {
    let max_iterations = 1000.max(100 * state.dim());
    let svd = state
        .amplitudes
        .clone()
        .try_svd(false, false, f64::EPSILON, max_iterations)
        .ok_or(Error::SvdNoConvergence)?;
    let mut lambdas: Vec<f64> = svd
        .singular_values
        .iter()
        .map(|s| (s * s).max(0.0))
        .collect();
    let total: f64 = lambdas.iter().sum();
    let drift = (total - 1.0).abs();
    if drift > SPECTRUM_MAX_DRIFT || !total.is_finite() {
        return Err(Error::NormalizationDrift(total));
    }
    if drift > SPECTRUM_RENORMALIZE {
        for l in &mut lambdas {
            *l /= total;
        }
    }
    lambdas.sort_unstable_by(|a, b| b.total_cmp(a));
    Ok(SchmidtSpectrum { lambdas })
}

/// Uniform (Dirichlet(1,…,1)) point of `Δ_{n−1}` via normalized exponentials.
pub fn simplex_sample<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Result<SimplexPoint> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    loop {
        let mut w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
        let total: f64 = w.iter().sum();
        if total > 0.0 {
            for x in &mut w {
                *x /= total;
            }
            return Ok(SimplexPoint { weights: w });
        }
    }
}

/// `⟨a|b⟩`.
pub fn overlap(a: &PureState, b: &PureState) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Hilbert–Schmidt distance `‖|a⟩⟨a| − |b⟩⟨b|‖₂ = √(2 − 2|⟨a|b⟩|²)`.
pub fn pure_state_hs_distance(a: &PureState, b: &PureState) -> Result<f64> {
    let f = overlap(a, b)?.norm_sqr();
    Ok((2.0 - 2.0 * f).max(0.0).sqrt())
}

/// `(|ψ_1|², …, |ψ_N|²)`.
pub fn diagonal_part(state: &PureState) -> SimplexPoint {
    SimplexPoint {
        weights: state.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
    }
}
