//! Register-level checks against independent dense and combinatorial
//! oracles.

mod common;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schroq::validate::dense;
use schroq::{Circuit, Control, GateOp};

fn random_circuit(q: usize, len: usize, rng: &mut impl Rng) -> Circuit {
    let mut c = Circuit::new(q);
    for _ in 0..len {
        let theta = rng.gen::<f64>() * std::f64::consts::TAU;
        let a = rng.gen_range(0..q);
        let mut b = rng.gen_range(0..q);
        while b == a {
            b = rng.gen_range(0..q);
        }
        let kinds = if q >= 3 { 7 } else { 6 };
        let gate = match rng.gen_range(0..kinds) {
            0 => GateOp::phase(theta, a),
            1 => GateOp::x(a),
            2 => GateOp::h(a),
            3 => GateOp::multi_cphase(theta, vec![Control { qubit: a, polarity: rng.gen() }], b),
            4 => GateOp::global(theta),
            5 => GateOp::swap(a, b),
            _ => {
                // doubly controlled phase needs a third qubit
                let mut t = rng.gen_range(0..q);
                while t == a || t == b {
                    t = rng.gen_range(0..q);
                }
                GateOp::multi_cphase(
                    theta,
                    vec![
                        Control { qubit: a, polarity: rng.gen() },
                        Control { qubit: b, polarity: rng.gen() },
                    ],
                    t,
                )
            }
        };
        c.push(gate).unwrap();
    }
    c
}

#[test]
fn apply_circuit_matches_matrix_product_up_to_six_qubits() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for q in 2..=6usize {
        for _ in 0..4 {
            let c = random_circuit(q, 20, &mut rng);
            let applied = dense::circuit_matrix_applied(&c);
            let oracle = dense::circuit_matrix_oracle(&c);
            let err = dense::max_abs_diff(&applied, &oracle);
            assert!(err < 1e-10, "q={q}: max deviation {err}");
        }
    }
}

#[test]
fn marginals_match_brute_force_summation() {
    // independent marginalization: walk every (outcome, rest) pair by
    // explicit bit surgery instead of the library's index masks
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let st = common::random_state(8, &mut rng);
    let subset = [0usize, 1, 2, 3];
    let probs = st.register_distribution(&subset).unwrap();
    assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    for (outcome, &p) in probs.iter().enumerate() {
        let mut brute = 0.0;
        for rest in 0..16usize {
            // subset qubits 0..4 are the four most significant bits
            let index = (outcome << 4) | rest;
            brute += st.amplitudes()[index].norm_sqr();
        }
        assert!((p - brute).abs() < 1e-12, "outcome {outcome}");
    }
}

#[test]
fn conditioning_agrees_with_marginal_probability() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let st = common::random_state(6, &mut rng);
    let subset = [1usize, 4];
    let probs = st.register_distribution(&subset).unwrap();
    for outcome in 0..4usize {
        let (sub, p) = st.condition_on_outcome(&subset, outcome).unwrap();
        assert!((p - probs[outcome]).abs() < 1e-12);
        assert!((sub.norm_sqr() - 1.0).abs() < 1e-12);
        assert_eq!(sub.num_qubits(), 4);
    }
}

#[test]
fn gates_on_disjoint_qubits_leave_marginals_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let st0 = common::random_state(5, &mut rng);
    let watched = [3usize, 4];
    let before = st0.register_distribution(&watched).unwrap();
    let gates = [
        GateOp::phase(0.9, 0),
        GateOp::cphase(1.3, 0, 1),
        GateOp::h(2),
        GateOp::x(1),
        GateOp::swap(0, 2),
    ];
    let mut st = st0.clone();
    for g in &gates {
        st.apply_gate(g).unwrap();
        let after = st.register_distribution(&watched).unwrap();
        for (a, b) in before.iter().zip(&after) {
            assert!((a - b).abs() < 1e-12, "gate {g:?} disturbed a disjoint marginal");
        }
    }
}

#[test]
fn norm_stays_unit_over_long_random_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let mut st = common::random_state(6, &mut rng);
    let c = random_circuit(6, 500, &mut rng);
    st.apply_circuit(&c).unwrap();
    assert!((st.norm_sqr() - 1.0).abs() < 1e-10);
}

#[test]
fn swap_gate_equals_index_permutation_matrix() {
    let mut c = Circuit::new(3);
    c.push(GateOp::swap(0, 2)).unwrap();
    let m = dense::circuit_matrix_applied(&c);
    for col in 0..8usize {
        // MSB-first: swapping qubits 0 and 2 exchanges the weight-4 and
        // weight-1 bits
        let b0 = (col >> 2) & 1;
        let b2 = col & 1;
        let row = (col & 0b010) | (b2 << 2) | b0;
        for r in 0..8 {
            let expect = if r == row { Complex64::ONE } else { Complex64::ZERO };
            assert!((m[(r, col)] - expect).norm() < 1e-15);
        }
    }
}
