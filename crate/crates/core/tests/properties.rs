use std::f64::consts::{LN_2, SQRT_2};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use typicality_core::accumulator::{ExactSum, MomentAccumulator};
use typicality_core::closedform::{mean_l1_coherence, mean_trace_sq_to_max_coherent};
use typicality_core::distances::{
    complementarity_residuals, distance_to_max_coherent, distance_to_max_entangled,
    sqrt_trace_inequality_check, ComplementarityInput,
};
use typicality_core::measures::{l1_coherence, negativity, relative_entropy_coherence};
use typicality_core::rng::StreamFactory;
use typicality_core::states::{haar_sample, PureState, SchmidtSpectrum, SimplexPoint};

fn normalize(w: &[f64]) -> Vec<f64> {
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

fn weights(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-6f64..1.0, 1..=max_len).prop_map(|w| normalize(&w))
}

fn state(max_len: usize) -> impl Strategy<Value = PureState> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_len)
        .prop_filter("non-zero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(|v| {
            PureState::normalized(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap()
        })
}

fn finite_values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(
        prop_oneof![-1e6f64..1e6, -1e-6f64..1e-6, Just(0.0), -1e150f64..1e150],
        0..64,
    )
}

proptest! {
    #[test]
    fn exact_sum_matches_rational_sum(xs in finite_values()) {
        let mut s = ExactSum::new();
        let mut want = BigRational::from_integer(BigInt::from(0));
        for &x in &xs {
            s.add(x).unwrap();
            want += BigRational::from_float(x).unwrap();
        }
        prop_assert_eq!(s.to_rational(), want);
    }

    #[test]
    fn accumulator_merge_is_associative_and_commutative(
        a in finite_values(), b in finite_values(), c in finite_values()
    ) {
        let acc = |xs: &[f64]| {
            let mut m = MomentAccumulator::new();
            for &x in xs {
                m.push(x).unwrap();
            }
            m
        };
        let (ma, mb, mc) = (acc(&a), acc(&b), acc(&c));
        let mut left = ma.clone();
        left.merge(&mb);
        left.merge(&mc);
        let mut bc = mb.clone();
        bc.merge(&mc);
        let mut right = ma.clone();
        right.merge(&bc);
        let mut swapped = mc.clone();
        swapped.merge(&ma);
        swapped.merge(&mb);
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(&left, &swapped);
    }

    #[test]
    fn l1_coherence_matches_double_sum(psi in state(16)) {
        let amps = psi.amplitudes();
        let mut double = 0.0;
        for (i, a) in amps.iter().enumerate() {
            for (j, b) in amps.iter().enumerate() {
                if i != j {
                    double += (a * b.conj()).norm();
                }
            }
        }
        prop_assert!((l1_coherence(&psi).value - double).abs() <= 1e-12 * (1.0 + double));
    }

    #[test]
    fn negativity_is_half_l1_of_schmidt_vector(w in weights(12)) {
        let spectrum = SchmidtSpectrum::new(w.clone()).unwrap();
        let root: Vec<Complex64> = w.iter().map(|x| Complex64::new(x.sqrt(), 0.0)).collect();
        let as_state = PureState::new(root).unwrap();
        let neg = negativity(&spectrum);
        prop_assert!((neg.value - l1_coherence(&as_state).value / 2.0).abs() <= 1e-12);
        let scaled = neg.scaled().unwrap_or(0.0);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&scaled));
    }

    #[test]
    fn complementarity_holds_on_arbitrary_spectra(w in weights(40)) {
        let spectrum = SchmidtSpectrum::new(w.clone()).unwrap();
        prop_assert!(complementarity_residuals(ComplementarityInput::Entangled(&spectrum)).max() <= 1e-9);
        let diag = SimplexPoint::new(w).unwrap();
        prop_assert!(complementarity_residuals(ComplementarityInput::Coherent(&diag)).max() <= 1e-9);
    }

    #[test]
    fn trace_over_hs_is_sqrt_two(w in weights(20), psi in state(20)) {
        let triples = [
            distance_to_max_entangled(&SchmidtSpectrum::new(w).unwrap()),
            distance_to_max_coherent(&psi),
        ];
        for d in triples {
            if d.hilbert_schmidt > 1e-6 {
                prop_assert!((d.trace / d.hilbert_schmidt - SQRT_2).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn sqrt_trace_inequality(p in weights(16), q in weights(16)) {
        let n = p.len().min(q.len());
        let (p, q) = (normalize(&p[..n]), normalize(&q[..n]));
        let r = sqrt_trace_inequality_check(&SimplexPoint::new(p).unwrap(), &SimplexPoint::new(q).unwrap()).unwrap();
        prop_assert!(r >= -1e-12);
    }
}

#[test]
fn integrated_coherent_complementarity() {
    for n in [1u64, 2, 3, 10, 1000, 1 << 20] {
        let nf = n as f64;
        let lhs = nf / 4.0 * mean_trace_sq_to_max_coherent(n).unwrap().value
            + mean_l1_coherence(n).unwrap().value;
        assert!((lhs - (nf - 1.0)).abs() <= 1e-12 * nf.max(1.0), "n={n}");
    }
}

/// `C_l1 ≥ max{C_r, 2^{C_r} − 1}` for pure states, with `C_r` read in nats
/// and in bits. The bits reading of the exponential form is
/// `C_l1 ≥ e^{C_r,nats} − 1`, the strongest of the four.
#[test]
fn coherence_ordering_both_log_readings() {
    let streams = StreamFactory::new(4);
    let slack = 1e-12;
    let mut violations = [0u32; 4];
    for i in 0..10_000u64 {
        let n = 2 + (i % 7) as usize;
        let psi = haar_sample(n, &mut streams.stream(i)).unwrap();
        let l1 = l1_coherence(&psi).value;
        let nats = relative_entropy_coherence(&psi).value;
        let bits = nats / LN_2;
        let checks = [
            l1 >= nats - slack,
            l1 >= bits - slack,
            l1 >= 2f64.powf(nats) - 1.0 - slack,
            l1 >= 2f64.powf(bits) - 1.0 - slack,
        ];
        for (v, ok) in violations.iter_mut().zip(checks) {
            *v += u32::from(!ok);
        }
    }
    assert_eq!(violations, [0; 4]);
}
