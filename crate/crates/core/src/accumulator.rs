//! Exact, order-independent sample statistics.
//!
//! Power sums are kept as fixed-point integers with unit `2^-1074`, which
//! holds any finite `f64` exactly. Merging two accumulators is integer
//! addition, so the result after merging is bit-identical whatever the
//! grouping or order of partial sums. `Σx` and `Σx²` are exact (the square is
//! split into a rounded product plus its exact error); `Σx³` and `Σx⁴` sum
//! rounded powers exactly and only feed the standard error of the variance.

use num_bigint::BigInt;
use num_rational::BigRational;
#[allow(unused_imports)] // inherent methods shadow Float when std is linked
use num_traits::{Float, One, Zero};

use crate::error::{Error, Result};
use crate::specfun::ratio_to_f64;

/// 32-bit chunks from bit 0 (`2^-1074`) up to past `2^1024`, with headroom
/// for carries.
const LIMBS: usize = 68;
const CHUNK: u32 = 32;
const CHUNK_MASK: i64 = (1 << CHUNK) - 1;
/// Limbs gain at most `2^32` per add, so i64 limbs survive `2^30` adds
/// between normalizations with room to spare.
const NORMALIZE_EVERY: u32 = 1 << 30;
/// Fixed-point unit exponent: the stored integer is `sum · 2^SCALE_BITS`.
const SCALE_BITS: usize = 1074;

/// Exact sum of finite `f64` values.
#[derive(Clone, Debug)]
pub struct ExactSum {
    limbs: [i64; LIMBS],
    pending: u32,
}

impl Default for ExactSum {
    fn default() -> Self {
        Self {
            limbs: [0; LIMBS],
            pending: 0,
        }
    }
}

impl ExactSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a finite value; non-finite input is rejected.
    pub fn add(&mut self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::NonFinite(x));
        }
        if x == 0.0 {
            return Ok(());
        }
        let bits = x.to_bits();
        let biased = ((bits >> 52) & 0x7ff) as usize;
        let frac = bits & ((1u64 << 52) - 1);
        // value = mantissa · 2^(offset − 1074)
        let (mantissa, offset) = if biased == 0 {
            (frac, 0)
        } else {
            (frac | (1u64 << 52), biased - 1)
        };
        let idx = offset / CHUNK as usize;
        let wide = (mantissa as u128) << (offset % CHUNK as usize);
        let negative = bits >> 63 == 1;
        for j in 0..3 {
            let chunk = ((wide >> (CHUNK as usize * j)) as i64) & CHUNK_MASK;
            if chunk != 0 {
                if negative {
                    self.limbs[idx + j] -= chunk;
                } else {
                    self.limbs[idx + j] += chunk;
                }
            }
        }
        self.pending += 1;
        if self.pending >= NORMALIZE_EVERY {
            self.normalize();
        }
        Ok(())
    }

    /// Propagates carries so every limb but the top lies in `[0, 2^32)`.
    /// This form is unique for a given value.
    fn normalize(&mut self) {
        for i in 0..LIMBS - 1 {
            let carry = self.limbs[i] >> CHUNK;
            self.limbs[i] -= carry << CHUNK;
            self.limbs[i + 1] += carry;
        }
        self.pending = 0;
    }

    pub fn merge(&mut self, other: &ExactSum) {
        let mut other = other.clone();
        other.normalize();
        self.normalize();
        for (a, b) in self.limbs.iter_mut().zip(other.limbs.iter()) {
            *a += *b;
        }
        self.normalize();
    }

    /// The sum as an integer multiple of `2^-1074`.
    pub fn to_scaled_integer(&self) -> BigInt {
        let mut s = self.clone();
        s.normalize();
        let mut acc = BigInt::zero();
        for &limb in s.limbs.iter().rev() {
            acc = (acc << CHUNK) + BigInt::from(limb);
        }
        acc
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.to_scaled_integer(), BigInt::one() << SCALE_BITS)
    }

    /// The sum correctly truncated to `f64`.
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.to_scaled_integer(), &(BigInt::one() << SCALE_BITS))
    }
}

impl PartialEq for ExactSum {
    fn eq(&self, other: &Self) -> bool {
        let mut a = self.clone();
        let mut b = other.clone();
        a.normalize();
        b.normalize();
        a.limbs == b.limbs
    }
}

impl Eq for ExactSum {}

/// Count and first four power sums of a sample.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MomentAccumulator {
    count: u64,
    s1: ExactSum,
    s2: ExactSum,
    s3: ExactSum,
    s4: ExactSum,
}

impl MomentAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn push(&mut self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::NonFinite(x));
        }
        let sq = x * x;
        if !sq.is_finite() {
            return Err(Error::NonFinite(sq));
        }
        let sq_err = libm::fma(x, x, -sq);
        let cube = sq * x;
        let fourth = sq * sq;
        self.s1.add(x)?;
        self.s2.add(sq)?;
        self.s2.add(sq_err)?;
        self.s3.add(if cube.is_finite() { cube } else { 0.0 })?;
        self.s4.add(if fourth.is_finite() { fourth } else { 0.0 })?;
        self.count += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &MomentAccumulator) {
        self.count += other.count;
        self.s1.merge(&other.s1);
        self.s2.merge(&other.s2);
        self.s3.merge(&other.s3);
        self.s4.merge(&other.s4);
    }

    /// Brings every sum to its canonical representation. Merging already
    /// does this; call it before comparing raw fields after pushes.
    pub fn normalize(&mut self) {
        self.s1.normalize();
        self.s2.normalize();
        self.s3.normalize();
        self.s4.normalize();
    }

    pub fn finish(&self) -> Result<Moments> {
        if self.count == 0 {
            return Err(Error::EmptySamples);
        }
        let n = BigRational::from_integer(BigInt::from(self.count));
        let s1 = self.s1.to_rational();
        let s2 = self.s2.to_rational();
        let mean = &s1 / &n;
        let (variance, m4) = if self.count > 1 {
            let nm1 = &n - BigRational::one();
            let var = (&n * &s2 - &s1 * &s1) / (&n * &nm1);
            // Σ(x − m)⁴ = S4 − 4mS3 + 6m²S2 − 3n m⁴.
            let s3 = self.s3.to_rational();
            let s4 = self.s4.to_rational();
            let m2 = &mean * &mean;
            let c4 = &s4 - BigRational::from_integer(4.into()) * &mean * &s3
                + BigRational::from_integer(6.into()) * &m2 * &s2
                - BigRational::from_integer(3.into()) * &n * &m2 * &m2;
            (to_f64(&var), to_f64(&(c4 / &n)))
        } else {
            (0.0, 0.0)
        };
        Ok(Moments {
            count: self.count,
            mean: to_f64(&mean),
            variance: variance.max(0.0),
            fourth_central: m4.max(0.0),
        })
    }
}

fn to_f64(r: &BigRational) -> f64 {
    ratio_to_f64(r.numer(), r.denom())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    /// Unbiased sample variance; 0 for a single sample.
    pub variance: f64,
    /// Biased fourth central moment `Σ(x − m)⁴/n`.
    pub fourth_central: f64,
}

impl Moments {
    /// `√(variance / n)`.
    pub fn stderr(&self) -> f64 {
        (self.variance / self.count as f64).sqrt()
    }

    /// Large-sample standard error of the variance estimate,
    /// `√((μ₄ − σ⁴(n − 3)/(n − 1))/n)`.
    pub fn variance_stderr(&self) -> f64 {
        if self.count < 4 {
            return f64::INFINITY;
        }
        let n = self.count as f64;
        let s4 = self.variance * self.variance;
        ((self.fourth_central - s4 * (n - 3.0) / (n - 1.0)).max(0.0) / n).sqrt()
    }
}
