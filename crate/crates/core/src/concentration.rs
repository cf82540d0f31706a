//! Lévy-type tail bounds for the Haar averages and the tools to set them
//! against observed tail frequencies.
//!
//! A pure state of `ℂ^N` is a point of the real sphere `𝕊^(2N−1)`, so the
//! bounds below use `k + 1 = 2N` (single system) or `k + 1 = 2N²` (bipartite).

use core::f64::consts::{LN_2, PI, SQRT_2};

#[allow(unused_imports)] // inherent methods shadow it when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

fn levy_denominator() -> f64 {
    9.0 * PI * PI * PI * LN_2
}

fn check_positive(function: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { function, value })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevyParameters {
    sphere_dim_k: u64,
    lipschitz_eta: f64,
    epsilon: f64,
}

impl LevyParameters {
    pub fn new(sphere_dim_k: u64, lipschitz_eta: f64, epsilon: f64) -> Result<Self> {
        if sphere_dim_k == 0 {
            return Err(Error::InvalidInput("sphere dimension must be positive"));
        }
        check_positive("lipschitz_eta", lipschitz_eta)?;
        check_positive("epsilon", epsilon)?;
        Ok(Self {
            sphere_dim_k,
            lipschitz_eta,
            epsilon,
        })
    }

    /// Parameters for a single system of dimension `n` (`k = 2N − 1`).
    pub fn single(n: u64, lipschitz_eta: f64, epsilon: f64) -> Result<Self> {
        Self::new(2 * n - 1, lipschitz_eta, epsilon)
    }

    /// Parameters for an `N × N` bipartite system (`k = 2N² − 1`).
    pub fn bipartite(n: u64, lipschitz_eta: f64, epsilon: f64) -> Result<Self> {
        Self::new(2 * n * n - 1, lipschitz_eta, epsilon)
    }

    pub fn sphere_dim_k(&self) -> u64 {
        self.sphere_dim_k
    }

    pub fn lipschitz_eta(&self) -> f64 {
        self.lipschitz_eta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `(k + 1)ε² / (9π³η² ln 2)`.
    pub fn exponent(&self) -> f64 {
        let k1 = (self.sphere_dim_k + 1) as f64;
        k1 * self.epsilon * self.epsilon
            / (levy_denominator() * self.lipschitz_eta * self.lipschitz_eta)
    }
}

fn capped(exponent: f64) -> f64 {
    (2.0 * (-exponent).exp()).min(2.0)
}

/// `2 exp(−(k + 1)ε² / (9π³η² ln 2))`, never above 2.
pub fn levy_bound(params: &LevyParameters) -> f64 {
    capped(params.exponent())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// Unscaled `C_l1`; does not concentrate.
    L1Unscaled,
    /// `C_l1/(N − 1)` around `π/4`.
    L1Scaled,
    /// `𝒩/𝒩_max`.
    NegativityScaled,
    /// `Δ²_Tr` to the maximally coherent set.
    TraceDistCoherent,
    /// `Δ²_B` to the maximally coherent set.
    BuresCoherent,
}

impl BoundKind {
    pub const ALL: [BoundKind; 5] = [
        Self::L1Unscaled,
        Self::L1Scaled,
        Self::NegativityScaled,
        Self::TraceDistCoherent,
        Self::BuresCoherent,
    ];

    /// Id of the Monte Carlo quantity this bound speaks about.
    pub fn quantity_id(self) -> &'static str {
        match self {
            Self::L1Unscaled => "l1",
            Self::L1Scaled => "l1_scaled",
            Self::NegativityScaled => "negativity_scaled",
            Self::TraceDistCoherent => "d2_tr_coh",
            Self::BuresCoherent => "d2_b_coh",
        }
    }

    pub fn concentrates(self) -> bool {
        !matches!(self, Self::L1Unscaled)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub n: u64,
    pub epsilon: f64,
    /// The bound as stated, capped at 2.
    pub analytic_bound: f64,
    /// Generic Lévy bound for the documented `(k, η)`.
    pub reconstruction: f64,
    pub levy: LevyParameters,
    pub empirical_tail: Option<f64>,
    pub samples: Option<u64>,
}

impl BoundReport {
    /// Stated exponent over the reconstructed one. 1 except for the
    /// negativity bound, where it is 4.
    pub fn exponent_ratio(&self) -> f64 {
        let stated = -(self.analytic_bound / 2.0).ln();
        let rebuilt = self.levy.exponent();
        if rebuilt == 0.0 {
            1.0
        } else {
            stated / rebuilt
        }
    }

    pub fn with_empirical(mut self, tail: f64, samples: u64) -> Self {
        self.empirical_tail = Some(tail);
        self.samples = Some(samples);
        self
    }
}

fn report(kind: BoundKind, n: u64, epsilon: f64, stated_exponent: f64, levy: LevyParameters) -> BoundReport {
    BoundReport {
        kind,
        n,
        epsilon,
        analytic_bound: capped(stated_exponent),
        reconstruction: levy_bound(&levy),
        levy,
        empirical_tail: None,
        samples: None,
    }
}

fn check_bound_args(n: u64, epsilon: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidInput("bounds need N >= 2"));
    }
    check_positive("epsilon", epsilon)?;
    Ok(n as f64)
}

/// `Pr(|C_l1 − E C_l1| > ε) ≤ 2 exp(−4ε² / (9π³ N ln 2))`; `η = N/√2`.
pub fn bound_l1_unscaled(n: u64, epsilon: f64) -> Result<BoundReport> {
    let nf = check_bound_args(n, epsilon)?;
    let stated = 4.0 * epsilon * epsilon / (levy_denominator() * nf);
    let levy = LevyParameters::single(n, nf / SQRT_2, epsilon)?;
    Ok(report(BoundKind::L1Unscaled, n, epsilon, stated, levy))
}

/// `2 exp(−4(N−1)²ε² / (9Nπ³ ln 2))` for `C_l1/(N−1)`; `η = N/(√2(N−1))`.
pub fn bound_l1_scaled(n: u64, epsilon: f64) -> Result<BoundReport> {
    let nf = check_bound_args(n, epsilon)?;
    let m = nf - 1.0;
    let stated = 4.0 * m * m * epsilon * epsilon / (levy_denominator() * nf);
    let levy = LevyParameters::single(n, nf / (SQRT_2 * m), epsilon)?;
    Ok(report(BoundKind::L1Scaled, n, epsilon, stated, levy))
}

/// `2 exp(−16(N−1)²ε² / (9π³ ln 2))` for `𝒩/𝒩_max`, as stated. The
/// reconstruction from `η = N/(√2(N−1))` on `𝕊^(2N²−1)` has a 4× smaller
/// exponent; both are reported.
pub fn bound_negativity_scaled(n: u64, epsilon: f64) -> Result<BoundReport> {
    let nf = check_bound_args(n, epsilon)?;
    let m = nf - 1.0;
    let stated = 16.0 * m * m * epsilon * epsilon / levy_denominator();
    let levy = LevyParameters::bipartite(n, nf / (SQRT_2 * m), epsilon)?;
    Ok(report(BoundKind::NegativityScaled, n, epsilon, stated, levy))
}

/// `2 exp(−Nε² / (36π³ ln 2))` for `Δ²_Tr`; `η = 2√2`.
pub fn bound_tr_dist_coherent(n: u64, epsilon: f64) -> Result<BoundReport> {
    let nf = check_bound_args(n, epsilon)?;
    let stated = nf * epsilon * epsilon / (4.0 * levy_denominator());
    let levy = LevyParameters::single(n, 2.0 * SQRT_2, epsilon)?;
    Ok(report(BoundKind::TraceDistCoherent, n, epsilon, stated, levy))
}

/// `2 exp(−Nε² / (9π³ ln 2))` for `Δ²_B`; `η = √2`.
pub fn bound_bures_coherent(n: u64, epsilon: f64) -> Result<BoundReport> {
    let nf = check_bound_args(n, epsilon)?;
    let stated = nf * epsilon * epsilon / levy_denominator();
    let levy = LevyParameters::single(n, SQRT_2, epsilon)?;
    Ok(report(BoundKind::BuresCoherent, n, epsilon, stated, levy))
}

pub fn bound(kind: BoundKind, n: u64, epsilon: f64) -> Result<BoundReport> {
    match kind {
        BoundKind::L1Unscaled => bound_l1_unscaled(n, epsilon),
        BoundKind::L1Scaled => bound_l1_scaled(n, epsilon),
        BoundKind::NegativityScaled => bound_negativity_scaled(n, epsilon),
        BoundKind::TraceDistCoherent => bound_tr_dist_coherent(n, epsilon),
        BoundKind::BuresCoherent => bound_bures_coherent(n, epsilon),
    }
}

/// `min(1, variance/ε²)`.
pub fn chebyshev_bound(variance: f64, epsilon: f64) -> Result<f64> {
    if !(variance >= 0.0) || !variance.is_finite() {
        return Err(Error::Domain {
            function: "chebyshev_bound",
            value: variance,
        });
    }
    check_positive("epsilon", epsilon)?;
    Ok((variance / (epsilon * epsilon)).min(1.0))
}

/// Count of `|x − center| > ε`, mergeable across partitions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TailCounter {
    pub exceed: u64,
    pub total: u64,
}

impl TailCounter {
    pub fn push(&mut self, x: f64, center: f64, epsilon: f64) {
        self.total += 1;
        // NaN counts as an exceedance; it is never "close".
        if !((x - center).abs() <= epsilon) {
            self.exceed += 1;
        }
    }

    pub fn merge(&mut self, other: &TailCounter) {
        self.exceed += other.exceed;
        self.total += other.total;
    }

    pub fn finish(&self) -> Result<TailEstimate> {
        if self.total == 0 {
            return Err(Error::EmptySamples);
        }
        let n = self.total as f64;
        let p = self.exceed as f64 / n;
        Ok(TailEstimate {
            fraction: p,
            stderr: (p * (1.0 - p) / n).sqrt(),
            exceed: self.exceed,
            samples: self.total,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailEstimate {
    pub fraction: f64,
    /// Binomial standard error `√(p(1 − p)/n)`.
    pub stderr: f64,
    pub exceed: u64,
    pub samples: u64,
}

pub fn empirical_tail<I>(samples: I, center: f64, epsilon: f64) -> Result<TailEstimate>
where
    I: IntoIterator<Item = f64>,
{
    check_positive("epsilon", epsilon)?;
    let mut counter = TailCounter::default();
    for x in samples {
        counter.push(x, center, epsilon);
    }
    counter.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn levy_examples() {
        let tiny = LevyParameters::new(9, 1.0, 1e-12).unwrap();
        assert!((levy_bound(&tiny) - 2.0).abs() < 1e-15);
        let p = LevyParameters::single(2, SQRT_2, 1.0).unwrap();
        let want = 2.0 * (-4.0 / (2.0 * 9.0 * PI.powi(3) * LN_2)).exp();
        assert!(close(levy_bound(&p), want, 1e-14));
        for eps in [0.1, 1.0, 3.0] {
            let a = levy_bound(&LevyParameters::new(31, 0.7, eps).unwrap());
            let b = levy_bound(&LevyParameters::new(31, 1.4, eps).unwrap());
            assert!(close(b, 2.0 * (a / 2.0).powf(0.25), 1e-13));
        }
        assert!(LevyParameters::new(0, 1.0, 1.0).is_err());
        assert!(LevyParameters::new(3, 0.0, 1.0).is_err());
        assert!(LevyParameters::new(3, 1.0, -1.0).is_err());
    }

    #[test]
    fn specific_bounds_match_levy() {
        for n in [2u64, 3, 8, 64, 1024, 1 << 14] {
            for eps in [0.01, 0.05, 0.1, 0.5, 1.0, 4.0] {
                for kind in BoundKind::ALL {
                    let r = bound(kind, n, eps).unwrap();
                    if kind == BoundKind::NegativityScaled {
                        assert!(close(r.exponent_ratio(), 4.0, 1e-9) || r.analytic_bound < 1e-300);
                    } else {
                        assert!((r.analytic_bound - r.reconstruction).abs() <= 1e-12, "{kind:?} {n} {eps}");
                    }
                }
            }
        }
    }

    #[test]
    fn l1_bounds() {
        let r = bound_l1_unscaled(2, 0.5).unwrap();
        let want = 2.0 * (-1.0 / (18.0 * PI.powi(3) * LN_2)).exp();
        assert!(close(r.analytic_bound, want, 1e-14));
        assert!(bound_l1_unscaled(1 << 20, 1.0).unwrap().analytic_bound > 1.9999);
        // At ε = 0.05 the bound is still ≈ 1.9 at N = 2¹⁰; it only drops
        // below 1e-3 past N ≈ 1.5·10⁵.
        let b = bound_l1_scaled(1 << 10, 0.05).unwrap().analytic_bound;
        assert!((b - 1.897_070_244_231_354_7).abs() < 1e-12);
        assert!(bound_l1_scaled(1 << 18, 0.05).unwrap().analytic_bound <= 1e-3);
        assert!(bound_l1_scaled(2, 0.05).unwrap().analytic_bound > 1.999);
        assert!(bound_l1_scaled(1, 0.05).is_err());
    }

    #[test]
    fn other_bounds() {
        let b = bound_negativity_scaled(32, 0.05).unwrap().analytic_bound;
        assert!((b - 1.639_540_634_365_577).abs() < 1e-12);
        assert!(bound_negativity_scaled(512, 0.05).unwrap().analytic_bound <= 1e-6);
        assert!(bound_negativity_scaled(32, 1e-9).unwrap().analytic_bound > 1.999_999);
        let b = bound_tr_dist_coherent(1 << 14, 0.1).unwrap().analytic_bound;
        assert!((b - 1.618_318_982_774_541).abs() < 1e-12);
        assert!(bound_tr_dist_coherent(1 << 19, 0.1).unwrap().analytic_bound <= 0.02);
        assert!(bound_tr_dist_coherent(8, 1e-9).unwrap().analytic_bound > 1.999_999);
        let b = bound_bures_coherent(1 << 12, 0.1).unwrap().analytic_bound;
        let want = 2.0 * (-4096.0 * 0.01 / (9.0 * PI.powi(3) * LN_2)).exp();
        assert!(close(b, want, 1e-14));
        assert!((b - 1.618_318_982_774_541).abs() < 1e-12);
        assert!(bound_bures_coherent(8, 1e-9).unwrap().analytic_bound > 1.999_999);
    }

    #[test]
    fn bounds_are_monotone() {
        for kind in BoundKind::ALL {
            let mut prev = f64::INFINITY;
            for i in 1..200 {
                let b = bound(kind, 64, 0.02 * i as f64).unwrap().analytic_bound;
                assert!(b <= prev);
                prev = b;
            }
            if kind.concentrates() {
                let mut prev = f64::INFINITY;
                for n in 2..400u64 {
                    let b = bound(kind, n, 0.3).unwrap().analytic_bound;
                    assert!(b <= prev, "{kind:?} n={n}");
                    prev = b;
                }
            }
        }
    }

    #[test]
    fn chebyshev() {
        assert_eq!(chebyshev_bound(0.0, 0.1).unwrap(), 0.0);
        assert!((chebyshev_bound(0.04, 0.2).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(chebyshev_bound(1.0, 0.2).unwrap(), 1.0);
        assert!((chebyshev_bound(0.01, 0.2).unwrap() - 0.25).abs() < 1e-15);
        assert!(chebyshev_bound(-1.0, 0.2).is_err());
        assert!(chebyshev_bound(1.0, 0.0).is_err());
    }

    #[test]
    fn tails() {
        let t = empirical_tail(vec![1.0; 10], 1.0, 0.1).unwrap();
        assert_eq!((t.fraction, t.stderr), (0.0, 0.0));
        let t = empirical_tail(vec![0.0, 0.5, 1.0, 3.0], 0.5, 0.6).unwrap();
        assert_eq!(t.exceed, 1);
        assert!((t.stderr - (0.25f64 * 0.75 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(empirical_tail(vec![0.0, 1.0], 0.5, 10.0).unwrap().fraction, 0.0);
        assert!(matches!(empirical_tail(vec![], 0.0, 1.0), Err(Error::EmptySamples)));
        let mut a = TailCounter::default();
        a.push(5.0, 0.0, 1.0);
        let mut b = TailCounter::default();
        b.push(0.5, 0.0, 1.0);
        b.push(f64::NAN, 0.0, 1.0);
        a.merge(&b);
        assert_eq!(a, TailCounter { exceed: 2, total: 3 });
    }
}
