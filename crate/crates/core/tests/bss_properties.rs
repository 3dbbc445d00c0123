mod common;

use common::*;
use lp_embed::bss::{
    select_and_add, sparsify, sparsify_traced, step_bounds, BarrierState, IsotropicSet,
    SparsifierParams, Tolerances,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn iso_from(rows: &Mat) -> IsotropicSet {
    IsotropicSet::from_rows(&from_rows(rows)).unwrap()
}

#[test]
fn oracle_sanity() {
    let a = vec![
        vec![2.0, 1.0, 0.0],
        vec![1.0, 2.0, 0.0],
        vec![0.0, 0.0, 5.0],
    ];
    let ev = jacobi_eigenvalues(&a);
    assert!(
        (ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12 && (ev[2] - 5.0).abs() < 1e-12
    );
    assert_eq!(count_compositions(3, 2), 6);
}

#[test]
fn seeded_r4_instance() {
    let rows = random_isotropic(100, 4, 11);
    let iso = iso_from(&rows);
    let theta = 1.0 / 3.0;
    let out = sparsify(&iso, theta).unwrap();
    assert!(out.len() <= 36, "|sigma| = {}", out.len());
    assert!(out.kappa <= 4.0, "kappa = {}", out.kappa);

    let ev = jacobi_eigenvalues(&weighted_outer_sum(&rows, &out.dense(100)));
    assert!((ev[0] - 1.0).abs() <= 1e-9, "floor {}", ev[0]);
    assert!(ev[3] <= 4.0 + 1e-6);
    assert!((ev[3] / ev[0] - out.kappa).abs() < 1e-9);
}

#[test]
fn potentials_never_increase() {
    let rows = random_isotropic(100, 4, 5);
    let iso = iso_from(&rows);
    let theta = 1.0 / 3.0;
    let params = SparsifierParams::new(theta, 4).unwrap();
    let (_, trace) = sparsify_traced(&iso, theta, &Tolerances::default()).unwrap();
    assert_eq!(trace.len(), params.steps);

    // replay the chosen updates and recompute everything from scratch
    let mut weights = vec![0.0; 100];
    let mut u = 4.0 / params.eps_upper;
    let mut l = -4.0 / params.eps_lower;
    let mut prev = (params.eps_upper, params.eps_lower);
    for rec in &trace {
        weights[rec.index] += rec.weight;
        u += params.delta_upper;
        l += params.delta_lower;
        let ev = jacobi_eigenvalues(&weighted_outer_sum(&rows, &weights));
        assert!(
            l < ev[0] && ev[3] < u,
            "step {}: {:?} not inside ({l}, {u})",
            rec.step,
            ev
        );
        let up: f64 = ev.iter().map(|x| 1.0 / (u - x)).sum();
        let lo: f64 = ev.iter().map(|x| 1.0 / (x - l)).sum();
        assert!(
            up <= prev.0 + 1e-8 && lo <= prev.1 + 1e-8,
            "step {}",
            rec.step
        );
        assert!((up - rec.upper_potential_after).abs() < 1e-9);
        prev = (up, lo);
    }
    let (u_n, l_n) = (trace.last().unwrap().upper, trace.last().unwrap().lower);
    assert!(l_n > 0.0);
    assert!(u_n / l_n <= ((1.0 + theta) / (1.0 - theta)).powi(2) + 1e-9);
}

#[test]
fn single_step_matches_traced_step() {
    let rows = random_isotropic(30, 3, 2);
    let iso = iso_from(&rows);
    let params = SparsifierParams::new(0.5, 3).unwrap();
    let s0 = BarrierState::initial(&iso, &params);
    let s1 = select_and_add(&s0, &iso, &params).unwrap();
    let (_, trace) = sparsify_traced(&iso, 0.5, &Tolerances::default()).unwrap();
    let first = trace[0];
    assert_eq!(s1.weights()[first.index], first.weight);
    assert_eq!(s1.step(), 1);

    // the chosen vector maximizes L - U among admissible candidates
    let gaps: Vec<f64> = (0..30)
        .map(|i| {
            let (u, l) = step_bounds(&s0, &params, &iso.vector(i)).unwrap();
            assert!(u > 0.0);
            l - u
        })
        .collect();
    let best = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(gaps[first.index], best);
    assert!(best >= -1e-10);
    assert!((1.0 / first.weight - 0.5 * (first.upper_bound + first.lower_bound)).abs() < 1e-12);
}

#[test]
fn step_bounds_sum_to_feasibility_budget() {
    // sum_i U(v_i) <= 1 - theta <= sum_i L(v_i) at the initial state
    let rows = random_isotropic(60, 5, 8);
    let iso = iso_from(&rows);
    let theta = 0.4;
    let params = SparsifierParams::new(theta, 5).unwrap();
    let state = BarrierState::initial(&iso, &params);
    let (mut su, mut sl) = (0.0, 0.0);
    for i in 0..60 {
        let (u, l) = step_bounds(&state, &params, &iso.vector(i)).unwrap();
        su += u;
        sl += l;
    }
    assert!(su <= 1.0 - theta + 1e-12, "{su}");
    assert!(sl >= 1.0 - theta - 1e-12, "{sl}");
}

#[test]
fn deterministic_runs() {
    let iso = iso_from(&random_isotropic(80, 4, 3));
    let a = sparsify(&iso, 0.5).unwrap();
    let b = sparsify(&iso, 0.5).unwrap();
    assert_eq!(a.support, b.support);
    assert_eq!(
        a.weights.iter().map(|w| w.to_bits()).collect::<Vec<_>>(),
        b.weights.iter().map(|w| w.to_bits()).collect::<Vec<_>>()
    );
}

#[test]
fn identity_rows_with_padding() {
    let r = 4;
    let mut rows = DMatrix::zeros(10, r);
    for i in 0..r {
        rows[(2 * i + 1, i)] = 1.0;
    }
    let iso = IsotropicSet::from_rows(&rows).unwrap();
    let theta = 0.25;
    let out = sparsify(&iso, theta).unwrap();
    assert_eq!(out.support, vec![1, 3, 5, 7]);
    let bound = ((1.0 + theta) / (1.0 - theta)).powi(2);
    assert!(out
        .weights
        .iter()
        .all(|&w| (1.0 - 1e-9..=bound + 1e-6).contains(&w)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn permutation_equivariance(seed in 0u64..1000, shift in 1usize..39) {
        let rows = random_isotropic(40, 3, seed);
        let permuted: Mat = (0..40).map(|i| rows[(i + shift) % 40].clone()).collect();
        let a = sparsify(&iso_from(&rows), 0.5).unwrap();
        let b = sparsify(&iso_from(&permuted), 0.5).unwrap();
        let mut pairs_a: Vec<(usize, f64)> = a.support.iter().copied().zip(a.weights.iter().copied()).collect();
        let mut pairs_b: Vec<(usize, f64)> = b
            .support
            .iter()
            .map(|&j| (j + shift) % 40)
            .zip(b.weights.iter().copied())
            .collect();
        pairs_a.sort_by_key(|p| p.0);
        pairs_b.sort_by_key(|p| p.0);
        prop_assert_eq!(pairs_a.len(), pairs_b.len());
        for (x, y) in pairs_a.iter().zip(&pairs_b) {
            prop_assert_eq!(x.0, y.0);
            prop_assert!((x.1 - y.1).abs() <= 1e-9 * x.1.max(1.0));
        }
    }

    #[test]
    fn spectral_contract(seed in 0u64..1000, r in 1usize..6, extra in 0usize..40, theta in 0.2f64..0.8) {
        let m = r + extra;
        let rows = random_isotropic(m, r, seed);
        let out = sparsify(&iso_from(&rows), theta).unwrap();
        let steps = SparsifierParams::new(theta, r).unwrap().steps;
        prop_assert!(out.len() <= m.min(steps));
        let ev = jacobi_eigenvalues(&weighted_outer_sum(&rows, &out.dense(m)));
        prop_assert!(ev[0] >= 1.0 - 1e-9);
        prop_assert!(ev[r - 1] <= ((1.0 + theta) / (1.0 - theta)).powi(2) + 1e-6);
        prop_assert!(out.weights.iter().all(|&w| w > 0.0));
    }
}
