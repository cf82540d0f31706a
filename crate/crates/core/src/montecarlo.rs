//! Monte Carlo estimation over Haar-random states.
//!
//! Sample `i` always draws from substream `i` of the master seed, and the
//! samples are grouped in contiguous blocks of [`BLOCK_SIZE`] indices. Block
//! accumulators merge exactly, so a run's result does not depend on how the
//! blocks are spread over workers.

use alloc::string::ToString;
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use crate::accumulator::{MomentAccumulator, Moments};
use crate::closedform::ClosedFormQuantity;
use crate::concentration::{TailCounter, TailEstimate};
use crate::distances::{
    diag_trace_distance_to_maxmixed, distance_to_max_coherent, distance_to_max_entangled,
};
use crate::error::{Error, Result};
use crate::measures::{
    alpha_classical_purity, l1_coherence, negativity, relative_entropy_of_diagonal,
};
use crate::rng::{SampleRng, StreamFactory};
use crate::states::{diagonal_part, haar_sample, haar_sample_bipartite, schmidt_spectrum};

pub const BLOCK_SIZE: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuantityId {
    L1,
    L1Scaled,
    RelativeEntropy,
    Negativity,
    NegativityScaled,
    TraceSqEntangled,
    HsSqEntangled,
    BuresSqEntangled,
    TraceSqCoherent,
    HsSqCoherent,
    BuresSqCoherent,
    DiagTraceDistance,
    AlphaPurity,
}

impl QuantityId {
    pub const ALL: [QuantityId; 13] = [
        Self::L1,
        Self::L1Scaled,
        Self::RelativeEntropy,
        Self::Negativity,
        Self::NegativityScaled,
        Self::TraceSqEntangled,
        Self::HsSqEntangled,
        Self::BuresSqEntangled,
        Self::TraceSqCoherent,
        Self::HsSqCoherent,
        Self::BuresSqCoherent,
        Self::DiagTraceDistance,
        Self::AlphaPurity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::L1 => "l1",
            Self::L1Scaled => "l1_scaled",
            Self::RelativeEntropy => "relent",
            Self::Negativity => "negativity",
            Self::NegativityScaled => "negativity_scaled",
            Self::TraceSqEntangled => "d2_tr_ent",
            Self::HsSqEntangled => "d2_hs_ent",
            Self::BuresSqEntangled => "d2_b_ent",
            Self::TraceSqCoherent => "d2_tr_coh",
            Self::HsSqCoherent => "d2_hs_coh",
            Self::BuresSqCoherent => "d2_b_coh",
            Self::DiagTraceDistance => "diag_trace_dist",
            Self::AlphaPurity => "alpha_purity",
        }
    }

    /// Whether samples are `N × N` bipartite states rather than states of `ℂ^N`.
    pub fn is_bipartite(self) -> bool {
        matches!(
            self,
            Self::Negativity
                | Self::NegativityScaled
                | Self::TraceSqEntangled
                | Self::HsSqEntangled
                | Self::BuresSqEntangled
        )
    }

    /// The closed form (or asymptotic reference) for the quantity's mean.
    pub fn mean_closed_form(self) -> ClosedFormQuantity {
        use ClosedFormQuantity as C;
        match self {
            Self::L1 => C::MeanL1,
            Self::L1Scaled => C::MeanL1Scaled,
            Self::RelativeEntropy => C::MeanRelativeEntropy,
            Self::Negativity => C::MeanNegativity,
            Self::NegativityScaled => C::MeanScaledNegativity,
            Self::TraceSqEntangled => C::MeanTraceSqEntangled,
            Self::HsSqEntangled => C::MeanHsSqEntangled,
            Self::BuresSqEntangled => C::MeanBuresSqEntangled,
            Self::TraceSqCoherent => C::MeanTraceSqCoherent,
            Self::HsSqCoherent => C::MeanHsSqCoherent,
            Self::BuresSqCoherent => C::MeanBuresSqCoherent,
            Self::DiagTraceDistance => C::MeanDiagTraceDistance,
            Self::AlphaPurity => C::MeanAlphaPurity,
        }
    }
}

impl fmt::Display for QuantityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QuantityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|q| q.as_str() == s)
            .ok_or_else(|| Error::UnknownQuantity(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantitySpec {
    id: QuantityId,
    n: usize,
    alpha: Option<f64>,
}

impl QuantitySpec {
    /// `alpha` is required for `alpha_purity` and rejected otherwise.
    pub fn new(id: QuantityId, n: usize, alpha: Option<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if matches!(id, QuantityId::L1Scaled | QuantityId::NegativityScaled) && n < 2 {
            return Err(Error::InvalidInput("scaled quantities need N >= 2"));
        }
        match (id, alpha) {
            (QuantityId::AlphaPurity, None) => return Err(Error::InvalidInput("alpha required")),
            (QuantityId::AlphaPurity, Some(a)) if !(a > 0.0) || !a.is_finite() => {
                return Err(Error::Domain {
                    function: "alpha",
                    value: a,
                })
            }
            (QuantityId::AlphaPurity, _) => {}
            (_, Some(_)) => return Err(Error::InvalidInput("alpha only applies to alpha_purity")),
            _ => {}
        }
        Ok(Self { id, n, alpha })
    }

    pub fn id(&self) -> QuantityId {
        self.id
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    /// Draws one state and evaluates the functional on it.
    pub fn sample(&self, rng: &mut SampleRng) -> Result<f64> {
        use QuantityId as Q;
        let n = self.n;
        if self.id.is_bipartite() {
            let spectrum = schmidt_spectrum(&haar_sample_bipartite(n, rng)?)?;
            return Ok(match self.id {
                Q::Negativity => negativity(&spectrum).value,
                Q::NegativityScaled => negativity(&spectrum).scaled().unwrap_or(0.0),
                Q::TraceSqEntangled => sq(distance_to_max_entangled(&spectrum).trace),
                Q::HsSqEntangled => sq(distance_to_max_entangled(&spectrum).hilbert_schmidt),
                _ => sq(distance_to_max_entangled(&spectrum).bures),
            });
        }
        let psi = haar_sample(n, rng)?;
        Ok(match self.id {
            Q::L1 => l1_coherence(&psi).value,
            Q::L1Scaled => l1_coherence(&psi).scaled_l1().unwrap_or(0.0),
            Q::RelativeEntropy => relative_entropy_of_diagonal(&diagonal_part(&psi)).value,
            Q::TraceSqCoherent => sq(distance_to_max_coherent(&psi).trace),
            Q::HsSqCoherent => sq(distance_to_max_coherent(&psi).hilbert_schmidt),
            Q::BuresSqCoherent => sq(distance_to_max_coherent(&psi).bures),
            Q::DiagTraceDistance => diag_trace_distance_to_maxmixed(&diagonal_part(&psi)),
            Q::AlphaPurity => {
                alpha_classical_purity(&diagonal_part(&psi), self.alpha.unwrap_or(2.0))?
            }
            _ => unreachable!("bipartite ids handled above"),
        })
    }
}

fn sq(x: f64) -> f64 {
    x * x
}

/// Number of blocks covering `samples` indices.
pub fn block_count(samples: u64) -> u64 {
    samples.div_ceil(BLOCK_SIZE)
}

/// Sample indices of block `block`.
pub fn block_range(block: u64, samples: u64) -> Range<u64> {
    let start = block * BLOCK_SIZE;
    start.min(samples)..(start + BLOCK_SIZE).min(samples)
}

/// Evaluates the samples with the given indices, in order.
pub fn for_each_sample<F>(
    spec: &QuantitySpec,
    streams: &StreamFactory,
    indices: Range<u64>,
    mut f: F,
) -> Result<()>
where
    F: FnMut(f64) -> Result<()>,
{
    for i in indices {
        let mut rng = streams.stream(i);
        f(spec.sample(&mut rng)?)?;
    }
    Ok(())
}

pub fn accumulate_block(
    spec: &QuantitySpec,
    streams: &StreamFactory,
    block: u64,
    samples: u64,
) -> Result<MomentAccumulator> {
    let mut acc = MomentAccumulator::new();
    for_each_sample(spec, streams, block_range(block, samples), |x| acc.push(x))?;
    Ok(acc)
}

pub fn tail_block(
    spec: &QuantitySpec,
    streams: &StreamFactory,
    block: u64,
    samples: u64,
    center: f64,
    epsilon: f64,
) -> Result<TailCounter> {
    let mut counter = TailCounter::default();
    for_each_sample(spec, streams, block_range(block, samples), |x| {
        counter.push(x, center, epsilon);
        Ok(())
    })?;
    Ok(counter)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimateReport {
    pub quantity: QuantityId,
    pub n: usize,
    pub alpha: Option<f64>,
    pub samples: u64,
    pub mean: f64,
    pub variance: f64,
    /// `√(variance / samples)`.
    pub stderr: f64,
    /// Standard error of `variance`.
    pub variance_stderr: f64,
    pub master_seed: u64,
    /// Wall-clock seconds, filled in by callers that can measure time.
    pub elapsed: Option<f64>,
}

impl EstimateReport {
    pub fn from_accumulator(
        spec: &QuantitySpec,
        acc: &MomentAccumulator,
        master_seed: u64,
    ) -> Result<Self> {
        let m: Moments = acc.finish()?;
        Ok(Self {
            quantity: spec.id,
            n: spec.n,
            alpha: spec.alpha,
            samples: m.count,
            mean: m.mean,
            variance: m.variance,
            stderr: m.stderr(),
            variance_stderr: m.variance_stderr(),
            master_seed,
            elapsed: None,
        })
    }
}

/// Sequential estimate. Parallel drivers produce the same result by merging
/// [`accumulate_block`] outputs.
pub fn estimate(spec: &QuantitySpec, samples: u64, master_seed: u64) -> Result<EstimateReport> {
    if samples == 0 {
        return Err(Error::EmptySamples);
    }
    let streams = StreamFactory::new(master_seed);
    let mut acc = MomentAccumulator::new();
    for b in 0..block_count(samples) {
        acc.merge(&accumulate_block(spec, &streams, b, samples)?);
    }
    EstimateReport::from_accumulator(spec, &acc, master_seed)
}

/// Fraction of samples with `|x − center| > ε`.
pub fn estimate_tail(
    spec: &QuantitySpec,
    center: f64,
    epsilon: f64,
    samples: u64,
    master_seed: u64,
) -> Result<TailEstimate> {
    if !(epsilon > 0.0) {
        return Err(Error::Domain {
            function: "epsilon",
            value: epsilon,
        });
    }
    if samples == 0 {
        return Err(Error::EmptySamples);
    }
    let streams = StreamFactory::new(master_seed);
    let mut counter = TailCounter::default();
    for b in 0..block_count(samples) {
        counter.merge(&tail_block(spec, &streams, b, samples, center, epsilon)?);
    }
    counter.finish()
}
