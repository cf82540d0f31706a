//! Fast paths in `typicality-core` against the brute-force oracles.

use typicality_core::distances::{distance_to_max_coherent, distance_to_max_entangled};
use typicality_core::measures::{l1_coherence, negativity};
use typicality_core::rng::StreamFactory;
use typicality_core::specfun::laguerre_integral_half;
use typicality_core::states::{
    haar_sample, haar_sample_bipartite, schmidt_spectrum, BipartitePureState, PureState,
    SchmidtSpectrum,
};
use typicality_oracles::*;

const INSTANCES: u64 = 1000;

#[test]
fn l1_matches_density_matrix_double_sum() {
    let streams = StreamFactory::new(101);
    for i in 0..INSTANCES {
        let n = 2 + (i % 15) as usize;
        let psi = haar_sample(n, &mut streams.stream(i)).unwrap();
        let rho = DensityMatrix::projector(&psi);
        let fast = l1_coherence(&psi).value;
        assert!((oracle_l1(&rho) - fast).abs() < 1e-10, "n={n}");
    }
}

#[test]
fn negativity_matches_partial_transpose() {
    let streams = StreamFactory::new(202);
    for i in 0..INSTANCES {
        let n = 2 + (i % 4) as usize;
        let psi = haar_sample_bipartite(n, &mut streams.stream(i)).unwrap();
        let fast = negativity(&schmidt_spectrum(&psi).unwrap()).value;
        assert!((oracle_negativity(&psi).unwrap() - fast).abs() < 1e-9, "n={n}");
    }
}

#[test]
fn schmidt_spectrum_matches_gram_eigenvalues() {
    let streams = StreamFactory::new(303);
    for i in 0..INSTANCES {
        let n = 2 + (i % 7) as usize;
        let psi = haar_sample_bipartite(n, &mut streams.stream(i)).unwrap();
        let fast = schmidt_spectrum(&psi).unwrap();
        let slow = gram_schmidt_spectrum(&psi);
        for (a, b) in fast.lambdas().iter().zip(&slow) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn laguerre_moments_match_quadrature_and_series() {
    for k in 0..=64u64 {
        let exact = laguerre_integral_half(k).to_f64();
        let q = oracle_quadrature_laguerre(k as usize, 0.5).unwrap();
        assert!(((q.value - exact) / exact).abs() < 1e-10, "k={k}");
        let series = laguerre_connection_sum(k as usize) * std::f64::consts::PI.sqrt();
        assert!(((series - exact) / exact).abs() < 1e-13, "k={k}");
    }
}

#[test]
fn coherent_infimum_matches_grid_search() {
    let psi = PureState::new(vec![
        num_complex::Complex64::new(0.9f64.sqrt(), 0.0),
        num_complex::Complex64::new(0.0, 0.1f64.sqrt()),
    ])
    .unwrap();
    let g = oracle_min_distance(&psi, Family::Coherent, 4096).unwrap();
    let closed = distance_to_max_coherent(&psi).trace;
    assert!((closed - 0.894_427_190_999_916).abs() < 1e-12);
    assert!(g.distance >= closed - 1e-9);
    assert!(g.distance <= closed + g.error_bound);

    let streams = StreamFactory::new(404);
    for i in 0..200 {
        let n = 2 + (i % 2) as usize;
        let psi = haar_sample(n, &mut streams.stream(i)).unwrap();
        let g = oracle_min_distance(&psi, Family::Coherent, 256).unwrap();
        let closed = distance_to_max_coherent(&psi).trace;
        assert!(g.distance >= closed - 1e-9, "grid beat the infimum");
        assert!(g.distance <= closed + g.error_bound);
    }
}

#[test]
fn entangled_infimum_matches_grid_search() {
    let psi = BipartitePureState::from_schmidt_coefficients(&[0.75, 0.25]).unwrap();
    let g = oracle_min_distance(&psi, Family::Entangled, 96).unwrap();
    let closed = distance_to_max_entangled(&SchmidtSpectrum::new(vec![0.75, 0.25]).unwrap()).trace;
    assert!((closed - (2.0 - 3f64.sqrt()).sqrt()).abs() < 1e-12);
    assert!(g.distance >= closed - 1e-9);
    assert!(g.distance <= closed + g.error_bound);

    let streams = StreamFactory::new(505);
    for i in 0..40 {
        let psi = haar_sample_bipartite(2, &mut streams.stream(i)).unwrap();
        let g = oracle_min_distance(&psi, Family::Entangled, 48).unwrap();
        let closed = distance_to_max_entangled(&schmidt_spectrum(&psi).unwrap()).trace;
        assert!(g.distance >= closed - 1e-9, "grid beat the infimum");
        assert!(g.distance <= closed + g.error_bound);
    }
}

#[test]
fn two_pass_agrees_with_exact_accumulator() {
    use typicality_core::accumulator::MomentAccumulator;
    let streams = StreamFactory::new(606);
    let xs: Vec<f64> = (0..10_000)
        .map(|i| l1_coherence(&haar_sample(6, &mut streams.stream(i)).unwrap()).value)
        .collect();
    let mut acc = MomentAccumulator::new();
    for &x in &xs {
        acc.push(x).unwrap();
    }
    let m = acc.finish().unwrap();
    let t = two_pass_mean_variance(&xs).unwrap();
    assert!(((m.mean - t.mean) / t.mean).abs() < 1e-13);
    assert!(((m.variance - t.variance) / t.variance).abs() < 1e-10);
}
