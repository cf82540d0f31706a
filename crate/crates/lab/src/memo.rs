//! Process-wide cache of the Laguerre prefix sums behind the entangled
//! Bures average, so sweeps over `N` share one table.

use std::sync::{LazyLock, PoisonError, RwLock};

use typicality_core::closedform::{
    self, mean_bures_sq_to_max_entangled_from_sum, ClosedFormQuantity, ClosedFormValue,
    LaguerreHalfSums,
};

use crate::error::Result;

static SUMS: LazyLock<RwLock<LaguerreHalfSums>> =
    LazyLock::new(|| RwLock::new(LaguerreHalfSums::new()));

/// `Σ_{k<n} I_k`.
pub fn laguerre_half_sum(n: u64) -> f64 {
    if let Some(v) = SUMS.read().unwrap_or_else(PoisonError::into_inner).get(n) {
        return v;
    }
    SUMS.write().unwrap_or_else(PoisonError::into_inner).ensure(n)
}

/// [`closedform::evaluate`] with the entangled Bures average served from the
/// cache.
pub fn closed_form(q: ClosedFormQuantity, n: u64, alpha: Option<f64>) -> Result<ClosedFormValue> {
    Ok(match q {
        ClosedFormQuantity::MeanBuresSqEntangled => {
            mean_bures_sq_to_max_entangled_from_sum(n, laguerre_half_sum(n))?
        }
        _ => closedform::evaluate(q, n, alpha)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn memo_matches_direct_evaluation() {
        for n in [1u64, 2, 3, 8, 20, 5] {
            let cached = closed_form(ClosedFormQuantity::MeanBuresSqEntangled, n, None).unwrap();
            let direct = closedform::mean_bures_sq_to_max_entangled(n).unwrap();
            assert!((cached.value - direct.value).abs() < 1e-13, "n={n}");
        }
        assert!(closed_form(ClosedFormQuantity::MeanBuresSqEntangled, 0, None).is_err());
    }
}
