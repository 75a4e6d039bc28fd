//! Benchmark states fed through the bounds and entanglement reports.

use roofs_core::bounds::{bfq_bound, fj_curve, spin_length_bound};
use roofs_core::entanglement::{duan_report, two_spin_report};
use roofs_core::metrology::qfi;
use roofs_core::quantum::{make_fock_algebra, make_spin_algebra, random_density_matrix, RandomStateConfig};
use roofs_core::states::{planar_squeezed_state, singlet_state, spin_squeezed_state, two_mode_squeezed_vacuum};

#[test]
fn planar_states_give_exact_bfq_values() {
    for (j, c) in [(0.5, 0.25), (1.0, 7.0 / 16.0)] {
        let spin = make_spin_algebra(j).unwrap();
        let p = planar_squeezed_state(&spin, 1e-14).unwrap();
        assert!((p.c_j - c).abs() < 1e-6);
        let r = bfq_bound(&p.state, &spin).unwrap();
        assert!((r.rhs - 4.0 * (j - c)).abs() < 1e-5, "{r:?}");
        assert!(r.slack >= -1e-9);
    }
}

#[test]
fn spin_squeezed_sweep_respects_bfq() {
    let spin = make_spin_algebra(10.0).unwrap();
    for k in 0..9 {
        let lambda = 10f64.powi(k - 2);
        let psi = spin_squeezed_state(&spin, lambda).unwrap();
        let r = bfq_bound(&psi, &spin).unwrap();
        assert!(r.rhs <= qfi(&psi, &spin.jz).unwrap() + 1e-9);
    }
}

#[test]
fn spin_length_bound_on_random_spin_one_states() {
    let spin = make_spin_algebra(1.0).unwrap();
    let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let curve = fj_curve(&spin, &grid).unwrap();
    for seed in 0..30 {
        let rho = random_density_matrix(&RandomStateConfig::full_rank(3, 500 + seed)).unwrap();
        assert!(spin_length_bound(&rho, &spin, &curve).unwrap().slack >= -1e-9);
    }
}

#[test]
fn squeezed_and_singlet_states_are_flagged() {
    let fock = make_fock_algebra(40).unwrap();
    let tmsv = duan_report(&two_mode_squeezed_vacuum(0.5, 40).unwrap(), &fock).unwrap();
    assert!(tmsv.duan_violated && tmsv.usefulness.more_useful_than_p_nonnegative_class);
    let half = make_spin_algebra(0.5).unwrap();
    let s = two_spin_report(&singlet_state(&half), &half, &half).unwrap();
    assert!(s.entangled && s.more_useful_than_spin_coherent_products);
}
