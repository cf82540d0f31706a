//! Analytic Haar averages, variances and large-`N` limits.
//!
//! All gamma-function ratios are taken as log-gamma differences; arguments
//! reach `N² + 1/2` for the entangled Bures average, where `Γ` itself
//! overflows long before `N = 128`.

use alloc::vec::Vec;
use core::f64::consts::{E, PI};

#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::specfun::{self, log_gamma_ratio_unchecked, log_gamma_unchecked, SQRT_PI};

/// Asymptotic scaled mean negativity `E 𝒩 / 𝒩_max` for large `N`.
pub const ASYMPTOTIC_SCALED_NEGATIVITY: f64 = 0.72037;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClosedFormQuantity {
    MeanL1,
    MeanL1Scaled,
    VarianceL1,
    VarianceL1Scaled,
    VarianceL1Published,
    SecondMomentL1,
    MeanRelativeEntropy,
    MeanBuresSqCoherent,
    MeanTraceSqCoherent,
    MeanHsSqCoherent,
    RmsTraceCoherent,
    MeanBuresSqEntangled,
    MeanScaledNegativity,
    MeanNegativity,
    MeanTraceSqEntangled,
    MeanHsSqEntangled,
    MeanDiagTraceDistance,
    MeanAlphaPurity,
    VarianceAlphaPurity,
}

impl ClosedFormQuantity {
    pub const ALL: [ClosedFormQuantity; 19] = [
        Self::MeanL1,
        Self::MeanL1Scaled,
        Self::VarianceL1,
        Self::VarianceL1Scaled,
        Self::VarianceL1Published,
        Self::SecondMomentL1,
        Self::MeanRelativeEntropy,
        Self::MeanBuresSqCoherent,
        Self::MeanTraceSqCoherent,
        Self::MeanHsSqCoherent,
        Self::RmsTraceCoherent,
        Self::MeanBuresSqEntangled,
        Self::MeanScaledNegativity,
        Self::MeanNegativity,
        Self::MeanTraceSqEntangled,
        Self::MeanHsSqEntangled,
        Self::MeanDiagTraceDistance,
        Self::MeanAlphaPurity,
        Self::VarianceAlphaPurity,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::MeanL1 => "mean_l1",
            Self::MeanL1Scaled => "mean_l1_scaled",
            Self::VarianceL1 => "var_l1",
            Self::VarianceL1Scaled => "var_l1_scaled",
            Self::VarianceL1Published => "var_l1_published",
            Self::SecondMomentL1 => "second_moment_l1",
            Self::MeanRelativeEntropy => "mean_relent",
            Self::MeanBuresSqCoherent => "mean_d2_b_coh",
            Self::MeanTraceSqCoherent => "mean_d2_tr_coh",
            Self::MeanHsSqCoherent => "mean_d2_hs_coh",
            Self::RmsTraceCoherent => "rms_tr_coh",
            Self::MeanBuresSqEntangled => "mean_d2_b_ent",
            Self::MeanScaledNegativity => "mean_negativity_scaled",
            Self::MeanNegativity => "mean_negativity",
            Self::MeanTraceSqEntangled => "mean_d2_tr_ent",
            Self::MeanHsSqEntangled => "mean_d2_hs_ent",
            Self::MeanDiagTraceDistance => "mean_diag_trace_dist",
            Self::MeanAlphaPurity => "mean_alpha_purity",
            Self::VarianceAlphaPurity => "var_alpha_purity",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.id() == id)
    }

    pub fn needs_alpha(self) -> bool {
        matches!(self, Self::MeanAlphaPurity | Self::VarianceAlphaPurity)
    }

    /// Values built on the numerically observed 0.72037 constant rather
    /// than an exact finite-`N` formula.
    pub fn is_asymptotic_reference(self) -> bool {
        matches!(
            self,
            Self::MeanScaledNegativity
                | Self::MeanNegativity
                | Self::MeanTraceSqEntangled
                | Self::MeanHsSqEntangled
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosedFormValue {
    pub quantity: ClosedFormQuantity,
    pub n: u64,
    pub alpha: Option<f64>,
    pub value: f64,
    pub limit_value: Option<f64>,
}

impl ClosedFormValue {
    fn new(quantity: ClosedFormQuantity, n: u64, value: f64) -> Self {
        Self {
            quantity,
            n,
            alpha: None,
            value,
            limit_value: None,
        }
    }

    fn with_limit(mut self, limit: f64) -> Self {
        self.limit_value = Some(limit);
        self
    }

    fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }
}

fn check_n(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(n as f64)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain {
            function: "alpha",
            value: alpha,
        });
    }
    Ok(())
}

/// `ln Γ(x) − ln Γ(y)`.
fn ln_gamma_diff(x: f64, y: f64) -> f64 {
    if x >= y {
        log_gamma_ratio_unchecked(y, x - y)
    } else {
        -log_gamma_ratio_unchecked(x, y - x)
    }
}

/// `E C_l1 = (N − 1)π/4`.
pub fn mean_l1_coherence(n: u64) -> Result<ClosedFormValue> {
    let nf = check_n(n)?;
    Ok(ClosedFormValue::new(ClosedFormQuantity::MeanL1, n, (nf - 1.0) * PI / 4.0))
}

/// `E[C_l1/(N−1)] = π/4` for every `N ≥ 2`.
pub fn mean_l1_scaled(n: u64) -> Result<ClosedFormValue> {
    check_n(n)?;
    if n < 2 {
        return Err(Error::InvalidInput("scaled l1 coherence needs N >= 2"));
    }
    Ok(ClosedFormValue::new(ClosedFormQuantity::MeanL1Scaled, n, PI / 4.0).with_limit(PI / 4.0))
}

/// Bracket of the l₁ variance, `[(16π − 5π²)N + 7π² − 32π + 32]`.
///
/// Expanding `E C_l1² − (E C_l1)²` from the second moment puts a factor `π`
/// on the linear coefficient. The commonly quoted `(16 − 5π)N` drops it; that
/// form is kept as [`variance_l1_published`] for comparison only.
fn l1_variance_bracket(nf: f64) -> f64 {
    PI * (16.0 - 5.0 * PI) * nf + (7.0 * PI * PI - 32.0 * PI + 32.0)
}

/// `𝔻 C_l1 = (N−1)/(16(N+1)) [(16π − 5π²)N + 7π² − 32π + 32]`,
/// equal to `E C_l1² − (E C_l1)²`. Grows linearly in `N`.
pub fn variance_l1_coherence(n: u64) -> Result<ClosedFormValue> {
    let nf = check_n(n)?;
    let value = (nf - 1.0) / (16.0 * (nf + 1.0)) * l1_variance_bracket(nf);
    Ok(ClosedFormValue::new(ClosedFormQuantity::VarianceL1, n, value))
}

/// The variance as usually printed,
/// `(N−1)/(16(N+1)) [(16 − 5π)N + 7π² − 32π + 32]`. It is not
/// `E C_l1² − (E C_l1)²` (at `N = 2` it gives 0.023757 against the true
/// `(32 − 3π²)/48 ≈ 0.049818`).
pub fn variance_l1_published(n: u64) -> Result<ClosedFormValue> {
    let nf = check_n(n)?;
    let bracket = (16.0 - 5.0 * PI) * nf + (7.0 * PI * PI - 32.0 * PI + 32.0);
    let value = (nf - 1.0) / (16.0 * (nf + 1.0)) * bracket;
    Ok(ClosedFormValue::new(ClosedFormQuantity::VarianceL1Published, n, value))
}

/// `𝔻[C_l1/(N−1)] = 𝔻 C_l1/(N−1)²`, tending to 0.
pub fn variance_l1_scaled(n: u64) -> Result<ClosedFormValue> {
    let nf = check_n(n)?;
    if n < 2 {
        return Err(Error::InvalidInput("scaled l1 coherence needs N >= 2"));
    }
    let value = l1_variance_bracket(nf) / (16.0 * (nf * nf - 1.0));
    Ok(ClosedFormValue::new(ClosedFormQuantity::VarianceL1Scaled, n, value).with_limit(0.0))
}

/// `E C_l1²`.
pub fn mean_second_moment_l1(n: u64) -> Result<ClosedFormValue> {
    let nf = check_n(n)?;
    let a = (nf - 1.0) * (nf - 2.0) * (nf - 3.0) * PI * PI / (16.0 * (nf + 1.0));
    let b = (nf - 1.0) * (nf - 2.0) * PI / (nf + 1.0);
    let c = 2.0 * (nf - 1.0) / (nf + 1.0);
    Ok(ClosedFormValue::new(ClosedFormQuantity::SecondMomentL1, n, a + b + c))
}

/// `E C_r = Σ_{k=2}^N 1/k`.
pub fn mean_relative_entropy_coherence(n: u64) -> Result<ClosedFormValue> {
    check_n(n)?;
    let value: f64 = (2..=n).rev().map(|k| 1.0 / k as f64).sum();
    Ok(ClosedFormValue::new(ClosedFormQuantity::MeanRelativeEntropy, n, value))
}

/// `E Δ²_B(ψ, ℳ) = 2 − √N B(1/2, N)`, tending to `2 − √π`.
pub fn mean_bures_sq_to_max_coherent(n: u64) -> Result<ClosedFormValue> {
    let nf = check_n(n)?;
    let value = 2.0 - (0.5 * nf.ln() + specfun::log_beta(0.5, nf)?).exp();
    Ok(
        ClosedFormValue::new(ClosedFormQuantity::MeanBuresSqCoherent, n, value)
            .with_limit(2.0 - SQRT_PI),
    )
}

/// `E Δ²_Tr(ψ, ℳ) = (N − 1)(4 − π)/N`.
pub fn mean_trace_sq_to_max_coherent(n: u64) -> Result<ClosedFormValue> {
    let nf = check_n(n)?;
    Ok(ClosedFormValue::new(
        ClosedFormQuantity::MeanTraceSqCoherent,
        n,
        (nf - 1.0) * (4.0 - PI) / nf,
    )
    .with_limit(4.0 - PI))
}

/// `E Δ²_HS(ψ, ℳ) = (N − 1)(4 − π)/(2N)`.
pub fn mean_hs_sq_to_max_coherent(n: u64) -> Result<ClosedFormValue> {
    let nf = check_n(n)?;
    Ok(ClosedFormValue::new(
        ClosedFormQuantity::MeanHsSqCoherent,
        n,
        (nf - 1.0) * (4.0 - PI) / (2.0 * nf),
    )
    .with_limit((4.0 - PI) / 2.0))
}

/// `Δ^RMS_Tr = √((4 − π)(N − 1)/N)`, tending to `√(4 − π)`.
pub fn rms_trace_dist_to_max_coherent(n: u64) -> Result<ClosedFormValue> {
    let sq = mean_trace_sq_to_max_coherent(n)?;
    Ok(
        ClosedFormValue::new(ClosedFormQuantity::RmsTraceCoherent, n, sq.value.sqrt())
            .with_limit((4.0 - PI).sqrt()),
    )
}

/// `Γ(N²)/Γ(N² + 1/2)`.
pub fn half_gamma_ratio(n: u64) -> Result<f64> {
    let nf = check_n(n)?;
    Ok((-log_gamma_ratio_unchecked(nf * nf, 0.5)).exp())
}

/// `E D²_B(ψ_AB, ℳ_E)` given `Σ_{k=0}^{N−1} I_k` (the moments of
/// [`specfun::laguerre_integral_half`]):
/// `2[1 − N^(−1/2) Γ(N²)/Γ(N²+1/2) Σ_k I_k]`.
pub fn mean_bures_sq_to_max_entangled_from_sum(n: u64, laguerre_sum: f64) -> Result<ClosedFormValue> {
    let nf = check_n(n)?;
    let mean_sqrt_sum = half_gamma_ratio(n)? * laguerre_sum;
    let value = 2.0 * (1.0 - mean_sqrt_sum / nf.sqrt());
    Ok(ClosedFormValue::new(
        ClosedFormQuantity::MeanBuresSqEntangled,
        n,
        value.clamp(0.0, 2.0),
    ))
}

/// Same as [`mean_bures_sq_to_max_entangled_from_sum`], computing the exact
/// Laguerre moments on the spot. Prefer a [`LaguerreHalfSums`] table when
/// evaluating many `N`.
pub fn mean_bures_sq_to_max_entangled(n: u64) -> Result<ClosedFormValue> {
    check_n(n)?;
    mean_bures_sq_to_max_entangled_from_sum(n, specfun::laguerre_integral_half_sum(n))
}

/// Prefix sums `Σ_{k<N} I_k`, grown on demand.
#[derive(Clone, Debug, Default)]
pub struct LaguerreHalfSums {
    // prefix[N] = Σ_{k<N} I_k
    prefix: Vec<f64>,
    comp: f64,
}

impl LaguerreHalfSums {
    pub fn new() -> Self {
        Self {
            prefix: alloc::vec![0.0],
            comp: 0.0,
        }
    }

    /// Largest `N` whose sum is available.
    pub fn len(&self) -> u64 {
        self.prefix.len().saturating_sub(1) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, n: u64) -> Option<f64> {
        self.prefix.get(n as usize).copied()
    }

    /// Extends the table through `N = n` and returns the sum for `n`.
    pub fn ensure(&mut self, n: u64) -> f64 {
        if self.prefix.is_empty() {
            self.prefix.push(0.0);
        }
        while self.len() < n {
            let k = self.len();
            let acc = *self.prefix.last().expect("non-empty");
            let y = specfun::laguerre_integral_half(k).to_f64() - self.comp;
            let t = acc + y;
            self.comp = (t - acc) - y;
            self.prefix.push(t);
        }
        self.prefix[n as usize]
    }
}

/// Asymptotic references derived from `E 𝒩 ≈ 0.72037 𝒩_max` through the
/// complementarity identities. Not exact at finite `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NegativityReference {
    pub scaled_negativity: ClosedFormValue,
    pub negativity: ClosedFormValue,
    pub trace_sq: ClosedFormValue,
    pub hs_sq: ClosedFormValue,
}

pub fn mean_negativity_reference(n: u64) -> Result<NegativityReference> {
    let nf = check_n(n)?;
    if n < 2 {
        return Err(Error::InvalidInput("negativity reference needs N >= 2"));
    }
    let c = ASYMPTOTIC_SCALED_NEGATIVITY;
    let nmax = (nf - 1.0) / 2.0;
    let trace_sq = 4.0 * (1.0 - c) * (nf - 1.0) / nf;
    Ok(NegativityReference {
        scaled_negativity: ClosedFormValue::new(ClosedFormQuantity::MeanScaledNegativity, n, c)
            .with_limit(c),
        negativity: ClosedFormValue::new(ClosedFormQuantity::MeanNegativity, n, c * nmax),
        trace_sq: ClosedFormValue::new(ClosedFormQuantity::MeanTraceSqEntangled, n, trace_sq)
            .with_limit(4.0 * (1.0 - c)),
        hs_sq: ClosedFormValue::new(ClosedFormQuantity::MeanHsSqEntangled, n, trace_sq / 2.0)
            .with_limit(2.0 * (1.0 - c)),
    })
}

/// `E ‖ψ^(d) − I/N‖₁ = 2(1 − 1/N)^N`, tending to `2/e`.
pub fn mean_diag_trace_distance(n: u64) -> Result<ClosedFormValue> {
    let nf = check_n(n)?;
    let value = 2.0 * (nf * (-1.0 / nf).ln_1p()).exp();
    Ok(ClosedFormValue::new(ClosedFormQuantity::MeanDiagTraceDistance, n, value).with_limit(2.0 / E))
}

/// `E Tr[(ψ^(d))^α] = Γ(α+1)Γ(N+1)/Γ(α+N)`; `α = 1` gives 1.
pub fn mean_alpha_purity(n: u64, alpha: f64) -> Result<ClosedFormValue> {
    let nf = check_n(n)?;
    check_alpha(alpha)?;
    let value = if alpha == 1.0 {
        1.0
    } else {
        (log_gamma_unchecked(alpha + 1.0) + ln_gamma_diff(nf + 1.0, nf + alpha)).exp()
    };
    let limit = if alpha > 1.0 { Some(0.0) } else { None };
    let mut v = ClosedFormValue::new(ClosedFormQuantity::MeanAlphaPurity, n, value).with_alpha(alpha);
    v.limit_value = limit;
    Ok(v)
}

/// Large-`N` behaviour of the α-purity variance, which scales as
/// `N^(1 − 2α)` for `α ≠ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PurityVarianceTrend {
    /// `α > 1/2`, `α ≠ 1`: variance → 0.
    Vanishing,
    /// `α = 1`: the purity is identically 1.
    Constant,
    /// `α = 1/2`: variance tends to a positive constant.
    Bounded,
    /// `0 < α < 1/2`: variance → ∞.
    Divergent,
}

pub fn purity_variance_trend(alpha: f64) -> Result<PurityVarianceTrend> {
    check_alpha(alpha)?;
    Ok(if alpha == 1.0 {
        PurityVarianceTrend::Constant
    } else if alpha > 0.5 {
        PurityVarianceTrend::Vanishing
    } else if alpha == 0.5 {
        PurityVarianceTrend::Bounded
    } else {
        PurityVarianceTrend::Divergent
    })
}

/// `E (Tr[(ψ^(d))^α])² = Γ(N+1)/Γ(N+2α) [Γ(2α+1) + (N−1)Γ(α+1)²]`.
pub fn second_moment_alpha_purity(n: u64, alpha: f64) -> Result<f64> {
    let nf = check_n(n)?;
    check_alpha(alpha)?;
    if alpha == 1.0 {
        return Ok(1.0);
    }
    let prefactor = ln_gamma_diff(nf + 1.0, nf + 2.0 * alpha);
    let g2 = log_gamma_unchecked(2.0 * alpha + 1.0);
    let g1 = log_gamma_unchecked(alpha + 1.0);
    let bracket = g2.exp() + (nf - 1.0) * (2.0 * g1).exp();
    Ok((prefactor + bracket.ln()).exp())
}

/// `𝔻 Tr[(ψ^(d))^α]`, zero at `α = 1`.
pub fn variance_alpha_purity(n: u64, alpha: f64) -> Result<ClosedFormValue> {
    let mean = mean_alpha_purity(n, alpha)?.value;
    let second = second_moment_alpha_purity(n, alpha)?;
    let value = if alpha == 1.0 {
        0.0
    } else {
        (second - mean * mean).max(0.0)
    };
    let mut v = ClosedFormValue::new(ClosedFormQuantity::VarianceAlphaPurity, n, value).with_alpha(alpha);
    if alpha > 0.5 {
        v.limit_value = Some(0.0);
    }
    Ok(v)
}

/// Uniform-Dirichlet moment `E[∏ λ_i^{α_i}] = Γ(N)/Γ(N + Σα_i) ∏ Γ(1 + α_i)`.
/// `exponents` may be shorter than `N`; missing entries are zero.
pub fn dirichlet_moment(n: u64, exponents: &[f64]) -> Result<f64> {
    let nf = check_n(n)?;
    if exponents.len() as u64 > n {
        return Err(Error::DimensionMismatch(exponents.len(), n as usize));
    }
    let mut total = 0.0;
    let mut log_prod = 0.0;
    for &a in exponents {
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::Domain {
                function: "dirichlet_moment",
                value: a,
            });
        }
        total += a;
        log_prod += log_gamma_unchecked(1.0 + a);
    }
    Ok((ln_gamma_diff(nf, nf + total) + log_prod).exp())
}

/// Evaluates any quantity by id. `alpha` is required for the purity
/// quantities and ignored otherwise.
pub fn evaluate(quantity: ClosedFormQuantity, n: u64, alpha: Option<f64>) -> Result<ClosedFormValue> {
    use ClosedFormQuantity as Q;
    let need_alpha = || alpha.ok_or(Error::InvalidInput("alpha required"));
    match quantity {
        Q::MeanL1 => mean_l1_coherence(n),
        Q::MeanL1Scaled => mean_l1_scaled(n),
        Q::VarianceL1 => variance_l1_coherence(n),
        Q::VarianceL1Scaled => variance_l1_scaled(n),
        Q::VarianceL1Published => variance_l1_published(n),
        Q::SecondMomentL1 => mean_second_moment_l1(n),
        Q::MeanRelativeEntropy => mean_relative_entropy_coherence(n),
        Q::MeanBuresSqCoherent => mean_bures_sq_to_max_coherent(n),
        Q::MeanTraceSqCoherent => mean_trace_sq_to_max_coherent(n),
        Q::MeanHsSqCoherent => mean_hs_sq_to_max_coherent(n),
        Q::RmsTraceCoherent => rms_trace_dist_to_max_coherent(n),
        Q::MeanBuresSqEntangled => mean_bures_sq_to_max_entangled(n),
        Q::MeanScaledNegativity => mean_negativity_reference(n).map(|r| r.scaled_negativity),
        Q::MeanNegativity => mean_negativity_reference(n).map(|r| r.negativity),
        Q::MeanTraceSqEntangled => mean_negativity_reference(n).map(|r| r.trace_sq),
        Q::MeanHsSqEntangled => mean_negativity_reference(n).map(|r| r.hs_sq),
        Q::MeanDiagTraceDistance => mean_diag_trace_distance(n),
        Q::MeanAlphaPurity => mean_alpha_purity(n, need_alpha()?),
        Q::VarianceAlphaPurity => variance_alpha_purity(n, need_alpha()?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn l1_mean_values() {
        assert_eq!(mean_l1_coherence(1).unwrap().value, 0.0);
        assert!((mean_l1_coherence(2).unwrap().value - 0.785_398_163_397_448_3).abs() < 1e-15);
        assert!((mean_l1_coherence(5).unwrap().value - PI).abs() < 1e-15);
        assert_eq!(mean_l1_scaled(17).unwrap().value, PI / 4.0);
    }

    #[test]
    fn l1_mean_equals_dirichlet_route() {
        for n in 2..200u64 {
            let via = (n * (n - 1)) as f64 * dirichlet_moment(n, &[0.5, 0.5]).unwrap();
            assert!(close(via, mean_l1_coherence(n).unwrap().value, 1e-12), "n={n}");
        }
    }

    #[test]
    fn l1_variance_values() {
        assert_eq!(variance_l1_coherence(1).unwrap().value, 0.0);
        // N = 2: C = 2√(λ(1 − λ)) with λ uniform, so E C² = 2/3 and E C = π/4.
        let v2 = 2.0 / 3.0 - PI * PI / 16.0;
        assert!(close(variance_l1_coherence(2).unwrap().value, v2, 1e-13));
        assert!(close(v2, (32.0 - 3.0 * PI * PI) / 48.0, 1e-14));
        let p2 = variance_l1_published(2).unwrap().value;
        assert!(close(p2, (64.0 - 42.0 * PI + 7.0 * PI * PI) / 48.0, 1e-13));
        assert!((p2 - 0.023_757_07).abs() < 1e-8);
        assert!((mean_second_moment_l1(2).unwrap().value - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(mean_second_moment_l1(1).unwrap().value, 0.0);
        let slope = PI * (16.0 - 5.0 * PI) / 16.0;
        let big = variance_l1_coherence(1 << 20).unwrap().value / (1u64 << 20) as f64;
        assert!((big - slope).abs() < 1e-5);
    }

    #[test]
    fn l1_moment_consistency() {
        for n in (1..=10_000u64).step_by(7) {
            let m = mean_l1_coherence(n).unwrap().value;
            let s = mean_second_moment_l1(n).unwrap().value;
            let v = variance_l1_coherence(n).unwrap().value;
            assert!((s - m * m - v).abs() <= 1e-10 * v.max(1e-3), "n={n}");
        }
        for n in 2..300u64 {
            let v = variance_l1_coherence(n).unwrap().value;
            let nm1 = (n - 1) as f64;
            assert!(close(variance_l1_scaled(n).unwrap().value, v / (nm1 * nm1), 1e-12));
        }
    }

    #[test]
    fn relative_entropy_mean() {
        assert_eq!(mean_relative_entropy_coherence(1).unwrap().value, 0.0);
        assert_eq!(mean_relative_entropy_coherence(2).unwrap().value, 0.5);
        let v = mean_relative_entropy_coherence(1024).unwrap().value;
        assert!((v - (1024f64.ln() + 0.577_215_664_901_532_9 - 1.0)).abs() < 5e-4);
    }

    #[test]
    fn coherent_bures_mean() {
        assert!(mean_bures_sq_to_max_coherent(1).unwrap().value.abs() < 1e-15);
        let want = 2.0 - 4.0 * 2f64.sqrt() / 3.0;
        assert!(close(mean_bures_sq_to_max_coherent(2).unwrap().value, want, 1e-13));
        assert!((want - 0.114_382).abs() < 1e-6);
        let big = mean_bures_sq_to_max_coherent(1 << 20).unwrap();
        assert!((big.value - big.limit_value.unwrap()).abs() < 1e-3);
        assert!((big.limit_value.unwrap() - 0.2275).abs() < 1e-4);
    }

    #[test]
    fn coherent_bures_mean_is_increasing_below_two() {
        let mut prev = -1.0;
        let mut prev_gap = f64::INFINITY;
        for k in 0..=20u32 {
            let v = mean_bures_sq_to_max_coherent(1 << k).unwrap();
            assert!(v.value > prev && v.value < 2.0);
            let gap = (v.value - v.limit_value.unwrap()).abs();
            assert!(gap < prev_gap);
            prev = v.value;
            prev_gap = gap;
        }
    }

    #[test]
    fn coherent_trace_mean() {
        assert_eq!(rms_trace_dist_to_max_coherent(1).unwrap().value, 0.0);
        let r4 = rms_trace_dist_to_max_coherent(4).unwrap().value;
        assert!(close(r4, ((4.0 - PI) * 0.75).sqrt(), 1e-15));
        assert!((r4 - 0.802_374_918_481_164_3).abs() < 1e-14);
        // √(4 − π) ≈ 0.92650, sometimes misquoted as 0.9625.
        assert!(((4.0 - PI).sqrt() - 0.926_502_750_352_208_5).abs() < 1e-15);
        for n in 1..500u64 {
            let lhs = n as f64 / 4.0 * mean_trace_sq_to_max_coherent(n).unwrap().value
                + mean_l1_coherence(n).unwrap().value;
            assert!((lhs - (n - 1) as f64).abs() <= 1e-12 * (n as f64).max(1.0));
        }
    }

    #[test]
    fn entangled_bures_mean() {
        assert!(mean_bures_sq_to_max_entangled(1).unwrap().value.abs() < 1e-15);
        // Γ(4)/Γ(4.5) = 6 / (105√π/16)
        let gamma_ratio = 6.0 / (105.0 * SQRT_PI / 16.0);
        let want = 2.0 * (1.0 - gamma_ratio * (11.0 * SQRT_PI / 8.0) / 2f64.sqrt());
        let got = mean_bures_sq_to_max_entangled(2).unwrap().value;
        assert!(close(got, want, 1e-13), "{got} vs {want}");
        let mut prev = -1.0;
        let mut table = LaguerreHalfSums::new();
        for k in 1..=7u32 {
            let n = 1u64 << k;
            let v = mean_bures_sq_to_max_entangled_from_sum(n, table.ensure(n)).unwrap().value;
            assert!((0.0..=2.0).contains(&v));
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn half_gamma_ratio_tripwire() {
        for n in [64u64, 100, 128, 1024] {
            let nsq = (n * n) as f64;
            assert!(close(half_gamma_ratio(n).unwrap(), nsq.powf(-0.5), 1e-4));
        }
    }

    #[test]
    fn laguerre_table_matches_direct_sum() {
        let mut t = LaguerreHalfSums::new();
        assert_eq!(t.ensure(0), 0.0);
        for n in [1u64, 2, 5, 17] {
            assert!(close(t.ensure(n), specfun::laguerre_integral_half_sum(n), 1e-15));
        }
        assert_eq!(t.len(), 17);
        assert!(t.get(18).is_none());
    }

    #[test]
    fn negativity_reference() {
        let r = mean_negativity_reference(1 << 20).unwrap();
        assert!((r.trace_sq.limit_value.unwrap() - 1.1185).abs() < 1e-4);
        assert!((r.hs_sq.limit_value.unwrap() - 0.5593).abs() < 1e-4);
        assert!((r.trace_sq.value - r.trace_sq.limit_value.unwrap()).abs() < 1e-5);
        let r32 = mean_negativity_reference(32).unwrap();
        // Integrated complementarity: (8/N)(𝒩_max − E𝒩).
        let via = 8.0 / 32.0 * (15.5 - r32.negativity.value);
        assert!(close(r32.trace_sq.value, via, 1e-14));
        assert!(mean_negativity_reference(1).is_err());
        assert!(ClosedFormQuantity::MeanTraceSqEntangled.is_asymptotic_reference());
    }

    #[test]
    fn diag_trace_mean() {
        assert_eq!(mean_diag_trace_distance(1).unwrap().value, 0.0);
        assert!((mean_diag_trace_distance(2).unwrap().value - 0.5).abs() < 1e-15);
        assert!((mean_diag_trace_distance(4).unwrap().value - 0.632_812_5).abs() < 1e-15);
        let big = mean_diag_trace_distance(1_000_000).unwrap();
        assert!((big.value - 2.0 / E).abs() < 1e-6);
    }

    #[test]
    fn alpha_purity_mean() {
        for n in [1u64, 2, 9] {
            assert_eq!(mean_alpha_purity(n, 1.0).unwrap().value, 1.0);
            assert!(close(mean_alpha_purity(n, 2.0).unwrap().value, 2.0 / (n as f64 + 1.0), 1e-13));
        }
        assert!(close(mean_alpha_purity(2, 0.5).unwrap().value, 4.0 / 3.0, 1e-14));
        assert!(close(mean_alpha_purity(8, 2.0).unwrap().value, 2.0 / 9.0, 1e-14));
        assert!(mean_alpha_purity(3, 0.0).is_err());
        assert!(mean_alpha_purity(3, -2.0).is_err());
    }

    #[test]
    fn alpha_purity_variance() {
        for n in [1u64, 5] {
            assert_eq!(variance_alpha_purity(n, 1.0).unwrap().value, 0.0);
        }
        assert!(close(variance_alpha_purity(2, 2.0).unwrap().value, 1.0 / 45.0, 1e-12));
        assert!(variance_alpha_purity(1 << 10, 2.0).unwrap().value <= 1e-4);
        // Scaling N^(1 − 2α): grows for α < 1/2, settles at α = 1/2,
        // decays for 1/2 < α < 1.
        let grow = |a: f64| {
            variance_alpha_purity(1 << 20, a).unwrap().value / variance_alpha_purity(1 << 10, a).unwrap().value
        };
        assert!((grow(0.3) / 2f64.powf(4.0) - 1.0).abs() < 0.05);
        assert!((grow(0.5) - 1.0).abs() < 0.01);
        assert!((grow(0.7) * 2f64.powf(4.0) - 1.0).abs() < 0.05);
        assert!(close(variance_alpha_purity(1 << 20, 0.5).unwrap().value, 0.018_252_3, 1e-5));
        assert_eq!(purity_variance_trend(0.3).unwrap(), PurityVarianceTrend::Divergent);
        assert_eq!(purity_variance_trend(0.5).unwrap(), PurityVarianceTrend::Bounded);
        assert_eq!(purity_variance_trend(0.7).unwrap(), PurityVarianceTrend::Vanishing);
        assert_eq!(purity_variance_trend(3.0).unwrap(), PurityVarianceTrend::Vanishing);
        assert_eq!(purity_variance_trend(1.0).unwrap(), PurityVarianceTrend::Constant);
    }

    #[test]
    fn alpha_purity_second_moment_consistency() {
        for n in 1..=512u64 {
            for alpha in [0.5, 2.0, 3.0] {
                let m = mean_alpha_purity(n, alpha).unwrap().value;
                let s = second_moment_alpha_purity(n, alpha).unwrap();
                let v = variance_alpha_purity(n, alpha).unwrap().value;
                assert!((s - m * m - v).abs() <= 1e-10 * s, "n={n} alpha={alpha}");
            }
        }
    }

    #[test]
    fn dirichlet_moments() {
        assert!((dirichlet_moment(4, &[0.0, 0.0, 0.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((dirichlet_moment(2, &[0.5, 0.5]).unwrap() - PI / 8.0).abs() < 1e-15);
        assert!((dirichlet_moment(3, &[1.0, 1.0, 0.0]).unwrap() - 1.0 / 12.0).abs() < 1e-15);
        assert!((dirichlet_moment(5, &[1.0, 1.0]).unwrap() - 1.0 / 30.0).abs() < 1e-15);
        assert!((dirichlet_moment(2, &[0.5]).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(dirichlet_moment(2, &[1.0, -0.5]).is_err());
        assert!(dirichlet_moment(2, &[1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn ids_round_trip() {
        for q in ClosedFormQuantity::ALL {
            assert_eq!(ClosedFormQuantity::from_id(q.id()), Some(q));
        }
        assert!(ClosedFormQuantity::from_id("nope").is_none());
    }

    #[test]
    fn evaluate_dispatch() {
        let v = evaluate(ClosedFormQuantity::MeanAlphaPurity, 8, Some(2.0)).unwrap();
        assert!(close(v.value, 2.0 / 9.0, 1e-14));
        assert!(evaluate(ClosedFormQuantity::VarianceAlphaPurity, 8, None).is_err());
        assert!(evaluate(ClosedFormQuantity::MeanL1, 0, None).is_err());
    }
}
