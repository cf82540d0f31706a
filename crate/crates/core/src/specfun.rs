//! Special functions: log-gamma, beta, Laguerre polynomials and the exact
//! half-integer Laguerre moments `∫₀^∞ e^(−x) √x L_k(x)² dx`.
//!
//! The floating-point routines are accurate to a few ulps over the ranges the
//! closed forms need (arguments up to ~10⁶). The Laguerre moments are computed
//! in exact rational arithmetic because their alternating-sum representation
//! loses every significant digit in `f64` once `k` exceeds about 20.

use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
#[allow(unused_imports)] // inherent methods shadow Float when std is linked
use num_traits::{Float, One, Signed, Zero};

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
pub(crate) const SQRT_PI: f64 = 1.772_453_850_905_516;

/// `ζ(k) − 1` for `k = 2, 3, …, 31`.
const ZETA_MINUS_ONE: [f64; 30] = [
    0.644_934_066_848_226_4,
    0.202_056_903_159_594_3,
    0.082_323_233_711_138_19,
    0.036_927_755_143_369_93,
    0.017_343_061_984_449_14,
    0.008_349_277_381_922_827,
    0.004_077_356_197_944_339,
    0.002_008_392_826_082_214,
    0.000_994_575_127_818_085_3,
    0.000_494_188_604_119_464_6,
    0.000_246_086_553_308_048_3,
    0.000_122_713_347_578_489_1,
    6.124_813_505_870_483e-5,
    3.058_823_630_702_049e-5,
    1.528_225_940_865_187e-5,
    7.637_197_637_899_762e-6,
    3.817_293_264_999_84e-6,
    1.908_212_716_553_939e-6,
    9.539_620_338_727_961e-7,
    4.769_329_867_878_065e-7,
    2.384_505_027_277_33e-7,
    1.192_199_259_653_111e-7,
    5.960_818_905_125_948e-8,
    2.980_350_351_465_228e-8,
    1.490_155_482_836_504e-8,
    7.450_711_789_835_429e-9,
    3.725_334_024_788_457e-9,
    1.862_659_723_513_049e-9,
    9.313_274_324_196_682e-10,
    4.656_629_065_033_784e-10,
];

/// Stirling-series coefficients `B₂ₘ / (2m(2m−1))`, `m = 1..=8`.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Below this argument the Stirling series is reached by upward recurrence.
const STIRLING_MIN: f64 = 15.0;

fn stirling_tail(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut acc = 0.0;
    for c in STIRLING.iter().rev() {
        acc = acc * inv2 + c;
    }
    acc * inv
}

/// `ln Γ(1 + z)` for `|z| ≤ 1/2` (Abramowitz & Stegun 6.1.33).
fn ln_gamma_1p(z: f64) -> f64 {
    // (−1)^k z^k = (−z)^k
    let mut power = -z;
    let mut series = 0.0;
    for (i, zm1) in ZETA_MINUS_ONE.iter().enumerate() {
        let k = (i + 2) as f64;
        power *= -z;
        series += zm1 * power / k;
    }
    -z.ln_1p() + z * (1.0 - EULER_GAMMA) + series
}

/// Natural logarithm of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "log_gamma",
            value: x,
        });
    }
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return log_gamma_unchecked(x + 1.0) - x.ln();
    }
    if x <= 1.5 {
        return ln_gamma_1p(x - 1.0);
    }
    if x <= 2.5 {
        let z = x - 2.0;
        return z.ln_1p() + ln_gamma_1p(z);
    }
    if x < STIRLING_MIN {
        let mut shifted = x;
        let mut prod = 1.0;
        while shifted < STIRLING_MIN {
            prod *= shifted;
            shifted += 1.0;
        }
        return stirling(shifted) - prod.ln();
    }
    stirling(x)
}

fn stirling(x: f64) -> f64 {
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_tail(x)
}

/// `ln Γ(x + a) − ln Γ(x)` for `x > 0`, `a ≥ 0`.
///
/// For large `x` the difference is formed analytically from the Stirling
/// expansion so that ratios such as `Γ(N²)/Γ(N² + ½)` keep full relative
/// precision.
pub fn log_gamma_ratio(x: f64, a: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "log_gamma_ratio",
            value: x,
        });
    }
    if !(a >= 0.0) || !a.is_finite() {
        return Err(Error::Domain {
            function: "log_gamma_ratio",
            value: a,
        });
    }
    Ok(log_gamma_ratio_unchecked(x, a))
}

pub(crate) fn log_gamma_ratio_unchecked(x: f64, a: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    if x < STIRLING_MIN {
        return log_gamma_unchecked(x + a) - log_gamma_unchecked(x);
    }
    // (x+a-1/2) ln(x+a) - (x-1/2) ln x - a, rearranged to avoid cancellation.
    let xa = x + a;
    (x - 0.5) * (a / x).ln_1p() + a * xa.ln() - a + stirling_tail(xa) - stirling_tail(x)
}

/// `ln B(x, y)`.
pub fn log_beta(x: f64, y: f64) -> Result<f64> {
    for v in [x, y] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Domain {
                function: "beta",
                value: v,
            });
        }
    }
    let (small, large) = if x <= y { (x, y) } else { (y, x) };
    Ok(log_gamma_unchecked(small) - log_gamma_ratio_unchecked(large, small))
}

/// Euler beta function `B(x, y) = Γ(x)Γ(y)/Γ(x+y)`, evaluated in log space.
pub fn beta(x: f64, y: f64) -> Result<f64> {
    log_beta(x, y).map(f64::exp)
}

/// Laguerre polynomial `L_k(x)` by the three-term recurrence
/// `(n+1) L_{n+1} = (2n+1−x) L_n − n L_{n−1}`.
pub fn laguerre(k: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for n in 1..k {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 - x) * cur - nf * prev) / (nf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// A number of the form `r·√π` with `r` rational, stored exactly.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactHalfInteger {
    coefficient: BigRational,
}

impl ExactHalfInteger {
    /// Builds `numerator/denominator · √π`; the fraction is reduced.
    pub fn new(numerator: BigInt, denominator: BigInt) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::InvalidInput("zero denominator"));
        }
        Ok(Self {
            coefficient: BigRational::new(numerator, denominator),
        })
    }

    pub fn numerator(&self) -> &BigInt {
        self.coefficient.numer()
    }

    /// Always positive.
    pub fn denominator(&self) -> &BigInt {
        self.coefficient.denom()
    }

    /// The rational coefficient `r`.
    pub fn coefficient(&self) -> &BigRational {
        &self.coefficient
    }

    /// `r` rounded to `f64`.
    pub fn coefficient_f64(&self) -> f64 {
        ratio_to_f64(self.numerator(), self.denominator())
    }

    /// `r·√π` rounded to `f64`.
    pub fn to_f64(&self) -> f64 {
        self.coefficient_f64() * SQRT_PI
    }
}

impl fmt::Debug for ExactHalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}/{})·√π", self.numerator(), self.denominator())
    }
}

/// Converts `num/den` to the nearest-ish `f64` (within two ulps) without
/// overflowing on operands far beyond the `f64` range.
pub(crate) fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let negative = num.is_negative() != den.is_negative();
    let n = num.abs();
    let d = den.abs();
    let shift = d.bits() as i64 - n.bits() as i64 + 66;
    let q = if shift >= 0 {
        (n << shift as usize) / &d
    } else {
        n / (d << (-shift) as usize)
    };
    let (_, digits) = q.to_u64_digits();
    // q < 2^67, so at most two 64-bit digits.
    let mut mantissa = 0.0;
    for digit in digits.iter().rev() {
        mantissa = mantissa * 18_446_744_073_709_551_616.0 + *digit as f64;
    }
    let value = libm::ldexp(mantissa, -(shift as i32));
    if negative {
        -value
    } else {
        value
    }
}

fn factorial(k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= i;
    }
    acc
}

/// Exact value of `I_k = ∫₀^∞ e^(−x) x^(1/2) L_k(x)² dx` as a rational
/// multiple of `√π`.
///
/// Uses the single alternating sum
/// `I_k = ((−1)^k / k!) Σₙ (−1)ⁿ C(k,n) Γ(n+3/2)² / (n! Γ(n−k+3/2))`
/// with `Γ(n+3/2) = √π (2n+1)!!/2^(n+1)` and
/// `Γ(n+3/2)/Γ(n−k+3/2) = ∏_{j<k} (n + 1/2 − j)`. All terms are scaled to
/// the common denominator `2^(2k+1) (k!)²`; consecutive terms differ by a
/// small rational factor, so the sum costs `O(k)` big-by-small operations.
pub fn laguerre_integral_half(k: u64) -> ExactHalfInteger {
    // X_n = (−1)^n C(k,n) (2n+1)!! P_n 2^(k−n) k!/n!,  P_n = ∏_{j<k} (2n+1−2j).
    let mut p0 = BigInt::one();
    for j in 0..k {
        p0 *= 1i64 - 2 * j as i64;
    }
    let mut term = (p0 * factorial(k)) << k as usize;
    let mut sum = term.clone();
    for n in 0..k {
        // X_{n+1}/X_n = −(k−n)(2n+3)² / (2 (n+1)² (2n+3−2k))
        let two_n3 = 2 * n as i64 + 3;
        let up = (k - n) as i64 * two_n3 * two_n3;
        let down = 2 * ((n + 1) * (n + 1)) as i64 * (two_n3 - 2 * k as i64);
        term *= -up;
        let (quot, rem) = term.div_rem(&BigInt::from(down));
        debug_assert!(rem.is_zero());
        term = quot;
        sum += &term;
    }
    if k % 2 == 1 {
        sum = -sum;
    }
    let kf = factorial(k);
    let denominator = (&kf * &kf) << (2 * k as usize + 1);
    ExactHalfInteger {
        coefficient: BigRational::new(sum, denominator),
    }
}

/// `Σ_{k<n} I_k` in `f64`; every term is positive so plain summation is
/// accurate to a few ulps.
pub fn laguerre_integral_half_sum(n: u64) -> f64 {
    let mut acc = 0.0;
    let mut comp = 0.0;
    for k in 0..n {
        let y = laguerre_integral_half(k).to_f64() - comp;
        let t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    acc
}

/// `Γ(x)` for moderate positive arguments.
pub fn gamma(x: f64) -> Result<f64> {
    log_gamma(x).map(f64::exp)
}
