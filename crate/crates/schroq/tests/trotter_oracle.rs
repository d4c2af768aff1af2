//! Trotter circuits against the dense spectral propagator.

mod common;

use nalgebra::DMatrix;
use schroq::evolution::{evolve, trotter_step_circuit, PotentialSpec, TrotterConfig};
use schroq::mesh_qft::{decode_wavefunction, encode_wavefunction};
use schroq::reference::{dense_hamiltonian, initial_state_library};
use schroq::validate::dense;
use schroq::{MeshConvention, MeshKind};

fn step_matrix_physical(
    pot: &PotentialSpec,
    mesh: MeshConvention,
    dt: f64,
) -> DMatrix<num_complex::Complex64> {
    let cfg = TrotterConfig::new(dt, mesh).unwrap();
    let step = dense::circuit_matrix_applied(&trotter_step_circuit(pot, &cfg).unwrap());
    dense::to_physical_frame(&step, mesh)
}

#[test]
fn halving_dt_cuts_per_step_error_about_eightfold() {
    let mesh = MeshConvention::with_qubits(MeshKind::Symmetric, 3).unwrap();
    let pot = PotentialSpec::harmonic(20.0).unwrap();
    let h = dense_hamiltonian(&pot, mesh).unwrap();
    let err = |dt: f64| (step_matrix_physical(&pot, mesh, dt) - h.evolution_matrix(dt)).norm();
    let e1 = err(2e-3);
    let e2 = err(1e-3);
    let ratio = e1 / e2;
    assert!((6.0..10.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn step_approaches_identity_linearly_as_dt_vanishes() {
    let mesh = MeshConvention::with_qubits(MeshKind::Symmetric, 3).unwrap();
    let pot = PotentialSpec::harmonic(20.0).unwrap();
    let id = DMatrix::identity(8, 8);
    let d1 = (step_matrix_physical(&pot, mesh, 1e-6) - &id).norm();
    let d2 = (step_matrix_physical(&pot, mesh, 5e-7) - &id).norm();
    assert!(d1 < 1e-2);
    let ratio = d1 / d2;
    assert!((1.8..2.2).contains(&ratio), "ratio {ratio}");
}

#[test]
fn doubling_steps_quarters_fixed_time_error() {
    let mesh = MeshConvention::with_qubits(MeshKind::Symmetric, 3).unwrap();
    let pot = PotentialSpec::harmonic(20.0).unwrap();
    let h = dense_hamiltonian(&pot, mesh).unwrap();
    let t = 0.1;
    let exact = h.evolution_matrix(t);
    let global_err = |n: usize| {
        let step = step_matrix_physical(&pot, mesh, t / n as f64);
        let mut u = DMatrix::identity(8, 8);
        for _ in 0..n {
            u = &step * u;
        }
        (&u - &exact).norm()
    };
    let e1 = global_err(20);
    let e2 = global_err(40);
    let ratio = e1 / e2;
    assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn encoded_evolution_agrees_with_exact_propagator() {
    // encode, evolve by circuits, decode == exact_evolution within O(t dt^2),
    // with the quadratic rate verified by halving dt.
    let mesh = MeshConvention::with_qubits(MeshKind::Symmetric, 4).unwrap();
    let pot = PotentialSpec::square_well(100.0).unwrap();
    let h = dense_hamiltonian(&pot, mesh).unwrap();
    let psi = initial_state_library("gauss20", mesh).unwrap();
    let t = 0.06;
    let exact = h.exact_evolution(&psi, t).unwrap();

    let circuit_err = |n: usize| {
        let cfg = TrotterConfig::new(t / n as f64, mesh).unwrap();
        let mut st = encode_wavefunction(&psi).unwrap();
        evolve(&mut st, &pot, &cfg, n).unwrap();
        let decoded = decode_wavefunction(&st, mesh).unwrap();
        decoded
            .values()
            .iter()
            .zip(exact.values())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    let e50 = circuit_err(50);
    let e100 = circuit_err(100);
    let e200 = circuit_err(200);
    assert!(e50 < 0.05, "n=50 deviation {e50}");
    let r1 = e50 / e100;
    let r2 = e100 / e200;
    assert!((3.0..5.0).contains(&r1), "first halving ratio {r1}");
    assert!((3.0..5.0).contains(&r2), "second halving ratio {r2}");
}

#[test]
fn ho_eigenstate_only_gains_a_phase() {
    // fig 2(a) parameters: evolving the discretized ground state for
    // t = 0.045 in 30 steps leaves the state unchanged up to a phase.
    let mesh = MeshConvention::with_qubits(MeshKind::Asymmetric, 4).unwrap();
    let pot = PotentialSpec::harmonic(100.0).unwrap();
    let h = dense_hamiltonian(&pot, mesh).unwrap();
    let mut ground = h.eigenvector(0).unwrap();
    ground.normalize().unwrap();

    let cfg = TrotterConfig::new(0.045 / 30.0, mesh).unwrap();
    let mut st = encode_wavefunction(&ground).unwrap();
    evolve(&mut st, &pot, &cfg, 30).unwrap();
    let decoded = decode_wavefunction(&st, mesh).unwrap();
    let overlap = ground.overlap(&decoded);
    assert!(overlap.norm() >= 0.99, "overlap magnitude {}", overlap.norm());
    // and the phase matches e^{-i E0 t} to Trotter accuracy
    let expected = -h.eigenvalues()[0] * 0.045;
    let diff = (overlap.arg() - expected).rem_euclid(std::f64::consts::TAU);
    let diff = diff.min(std::f64::consts::TAU - diff);
    assert!(diff < 0.02, "phase deviation {diff}");
}

#[test]
fn every_builder_rejects_out_of_range_qubits() {
    let mesh = MeshConvention::with_qubits(MeshKind::Symmetric, 4).unwrap();
    let cfg = TrotterConfig::new(1e-3, mesh).unwrap();
    assert!(schroq::evolution::kinetic_circuit(&cfg, 4, &[0, 1, 2, 9]).is_err());
    assert!(schroq::evolution::harmonic_circuit(5.0, &cfg, 4, &[7, 1, 2, 3]).is_err());
    assert!(schroq::evolution::square_well_circuit(5.0, 1e-3, 2, &[0, 5]).is_err());
}
