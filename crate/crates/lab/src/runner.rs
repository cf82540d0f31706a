//! Thread-pool driver for the block-partitioned estimators in
//! `typicality_core::montecarlo`.
//!
//! Workers take whole blocks; block results merge exactly, so the output is
//! bit-identical for every thread count.

use std::time::Instant;

use rayon::prelude::*;
use typicality_core::accumulator::MomentAccumulator;
use typicality_core::concentration::{TailCounter, TailEstimate};
use typicality_core::montecarlo::{
    accumulate_block, block_count, block_range, for_each_sample, EstimateReport, QuantitySpec,
};
use typicality_core::rng::StreamFactory;
use typicality_core::Error as CoreError;

use crate::error::Result;

pub struct Runner {
    pool: rayon::ThreadPool,
}

impl Runner {
    /// `None` uses the machine's available parallelism.
    pub fn new(threads: Option<usize>) -> Result<Self> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(t) = threads {
            builder = builder.num_threads(t.max(1));
        }
        Ok(Self {
            pool: builder.build()?,
        })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn estimate(&self, spec: &QuantitySpec, samples: u64, seed: u64) -> Result<EstimateReport> {
        if samples == 0 {
            return Err(CoreError::EmptySamples.into());
        }
        let start = Instant::now();
        let streams = StreamFactory::new(seed);
        let acc = self.pool.install(|| {
            (0..block_count(samples))
                .into_par_iter()
                .map(|b| accumulate_block(spec, &streams, b, samples))
                .try_reduce(MomentAccumulator::new, |mut a, b| {
                    a.merge(&b);
                    Ok(a)
                })
        })?;
        let mut report = EstimateReport::from_accumulator(spec, &acc, seed)?;
        report.elapsed = Some(start.elapsed().as_secs_f64());
        Ok(report)
    }

    /// Tail fractions `Pr(|x − center| > ε)` for every `ε`, from one pass
    /// over the samples.
    pub fn tails(
        &self,
        spec: &QuantitySpec,
        center: f64,
        epsilons: &[f64],
        samples: u64,
        seed: u64,
    ) -> Result<Vec<TailEstimate>> {
        if samples == 0 {
            return Err(CoreError::EmptySamples.into());
        }
        if let Some(&bad) = epsilons.iter().find(|e| !(**e > 0.0)) {
            return Err(CoreError::Domain {
                function: "epsilon",
                value: bad,
            }
            .into());
        }
        let streams = StreamFactory::new(seed);
        let empty = || vec![TailCounter::default(); epsilons.len()];
        let counters = self.pool.install(|| {
            (0..block_count(samples))
                .into_par_iter()
                .map(|b| {
                    let mut counters = empty();
                    for_each_sample(spec, &streams, block_range(b, samples), |x| {
                        for (c, &eps) in counters.iter_mut().zip(epsilons) {
                            c.push(x, center, eps);
                        }
                        Ok(())
                    })?;
                    Ok::<_, CoreError>(counters)
                })
                .try_reduce(empty, |mut a, b| {
                    for (x, y) in a.iter_mut().zip(&b) {
                        x.merge(y);
                    }
                    Ok(a)
                })
        })?;
        Ok(counters
            .iter()
            .map(TailCounter::finish)
            .collect::<std::result::Result<_, _>>()?)
    }

    /// Applies `f` to every sample and reduces the per-block results with
    /// `merge` in block order.
    pub fn map_blocks<T, F, M>(
        &self,
        spec: &QuantitySpec,
        samples: u64,
        seed: u64,
        per_sample: F,
        merge: M,
    ) -> Result<T>
    where
        T: Default + Send,
        F: Fn(&mut T, f64) + Sync,
        M: Fn(T, T) -> T + Sync,
    {
        let streams = StreamFactory::new(seed);
        let parts: Vec<T> = self.pool.install(|| {
            (0..block_count(samples))
                .into_par_iter()
                .map(|b| {
                    let mut state = T::default();
                    for_each_sample(spec, &streams, block_range(b, samples), |x| {
                        per_sample(&mut state, x);
                        Ok(())
                    })?;
                    Ok::<_, CoreError>(state)
                })
                .collect::<std::result::Result<_, _>>()
        })?;
        Ok(parts.into_iter().fold(T::default(), merge))
    }

    /// Runs `f` inside the pool.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }
}
