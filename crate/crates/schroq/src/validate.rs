//! The self-check battery behind `schroq validate`.
//!
//! Every check compares an implementation path against an independent
//! reference: gate application against explicit matrix products, the QFT
//! circuit against the O(N^2) DFT kernel, diagonal circuits against their
//! scalar phase formulas, Trotter steps against the dense spectral
//! propagator, and the phase-estimation pipeline against exactly solvable
//! cases.  Each check reports the measured figure next to its bound so a
//! failure message carries the numbers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::evolution::{
    self, coulomb_surrogate_inverse_abs, lower_to_two_qubit, trotter_step_circuit, PotentialSpec,
    TrotterConfig,
};
use crate::mesh_qft::{
    decode_momentum, decode_wavefunction, encode_wavefunction, momentum_transform_direct,
    qft_circuit, x_to_p, MeshConvention, MeshKind, SampledWavefunction,
};
use crate::phase_estimation::{phase_estimate, PhaseEstimationConfig};
use crate::reference::{dense_hamiltonian, initial_state_library, square_well_levels};
use crate::register::{Circuit, Control, GateOp, StateVector};

/// Outcome of one validation check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// The measured figure of merit (an error, a count mismatch, ...).
    pub measured: f64,
    /// The bound it must stay within.
    pub bound: f64,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, measured: f64, bound: f64, detail: impl Into<String>) -> Self {
        CheckResult {
            name,
            passed: measured <= bound,
            measured,
            bound,
            detail: detail.into(),
        }
    }
}

/// Deliberate fault injection, used as a negative control to demonstrate
/// that the checks can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultInjection {
    None,
    /// Perturb one controlled-phase angle of the QFT circuit by 1e-3.
    QftAngle,
}

/// Dense reference constructions, independent of the gate-application path.
pub mod dense {
    use super::*;

    /// The unitary of one gate, built column by column from its definition.
    pub fn gate_matrix(gate: &GateOp, num_qubits: usize) -> DMatrix<Complex64> {
        let dim = 1usize << num_qubits;
        let mask = |q: usize| 1usize << (num_qubits - 1 - q);
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            match gate {
                GateOp::PhaseRotation { theta, target } => {
                    let ph = if col & mask(*target) != 0 {
                        Complex64::cis(*theta)
                    } else {
                        Complex64::ONE
                    };
                    m[(col, col)] = ph;
                }
                GateOp::PauliX { target } => {
                    m[(col ^ mask(*target), col)] = Complex64::ONE;
                }
                GateOp::Hadamard { target } => {
                    let w = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                    let bit = col & mask(*target) != 0;
                    m[(col & !mask(*target), col)] += w;
                    m[(col | mask(*target), col)] += if bit { -w } else { w };
                }
                GateOp::ControlledPhase { theta, controls, target } => {
                    let matches = controls
                        .iter()
                        .all(|c| (col & mask(c.qubit) != 0) == c.polarity);
                    let ph = if matches && col & mask(*target) != 0 {
                        Complex64::cis(*theta)
                    } else {
                        Complex64::ONE
                    };
                    m[(col, col)] = ph;
                }
                GateOp::GlobalPhase { theta } => {
                    m[(col, col)] = Complex64::cis(*theta);
                }
                GateOp::Swap { a, b } => {
                    let (ma, mb) = (mask(*a), mask(*b));
                    let ba = col & ma != 0;
                    let bb = col & mb != 0;
                    let mut row = col & !(ma | mb);
                    if bb {
                        row |= ma;
                    }
                    if ba {
                        row |= mb;
                    }
                    m[(row, col)] = Complex64::ONE;
                }
            }
        }
        m
    }

    /// Product of the gate matrices, in application order.
    pub fn circuit_matrix_oracle(circuit: &Circuit) -> DMatrix<Complex64> {
        let dim = 1usize << circuit.num_qubits();
        let mut u = DMatrix::identity(dim, dim);
        for gate in circuit.gates() {
            u = gate_matrix(gate, circuit.num_qubits()) * u;
        }
        u
    }

    /// Matrix of a circuit as the simulator applies it (one basis state per
    /// column).
    pub fn circuit_matrix_applied(circuit: &Circuit) -> DMatrix<Complex64> {
        let dim = 1usize << circuit.num_qubits();
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let mut st = StateVector::basis_state(circuit.num_qubits(), col)
                .expect("basis index in range");
            st.apply_circuit(circuit).expect("validated circuit");
            for row in 0..dim {
                m[(row, col)] = st.amplitudes()[row];
            }
        }
        m
    }

    /// The DFT matrix (1/sqrt(N)) e^{+-2 pi i j k / N}.
    pub fn dft_matrix(n: usize, inverse: bool) -> DMatrix<Complex64> {
        let sign = if inverse { -1.0 } else { 1.0 };
        let scale = 1.0 / (n as f64).sqrt();
        DMatrix::from_fn(n, n, |k, j| {
            Complex64::cis(sign * std::f64::consts::TAU * (j * k) as f64 / n as f64) * scale
        })
    }

    /// Conjugates an encoded-frame matrix back to the physical frame of the
    /// mesh convention.
    pub fn to_physical_frame(u: &DMatrix<Complex64>, mesh: MeshConvention) -> DMatrix<Complex64> {
        let n = mesh.num_points();
        let c = mesh.offset();
        let d: Vec<Complex64> = (0..n)
            .map(|k| Complex64::cis(std::f64::consts::TAU * c * k as f64))
            .collect();
        DMatrix::from_fn(n, n, |i, j| d[i].conj() * u[(i, j)] * d[j])
    }

    pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn random_state(q: usize, rng: &mut impl Rng) -> StateVector {
    let raw: Vec<Complex64> = (0..1usize << q)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm: f64 = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(raw.into_iter().map(|a| a / norm).collect())
        .expect("normalized by construction")
}

fn random_circuit(q: usize, len: usize, rng: &mut impl Rng) -> Circuit {
    let mut c = Circuit::new(q);
    for _ in 0..len {
        let theta = rng.gen::<f64>() * std::f64::consts::TAU;
        let a = rng.gen_range(0..q);
        let mut b = rng.gen_range(0..q);
        while b == a {
            b = rng.gen_range(0..q);
        }
        let gate = match rng.gen_range(0..6) {
            0 => GateOp::phase(theta, a),
            1 => GateOp::x(a),
            2 => GateOp::h(a),
            3 => GateOp::multi_cphase(
                theta,
                vec![Control { qubit: a, polarity: rng.gen() }],
                b,
            ),
            4 => GateOp::global(theta),
            _ => GateOp::swap(a, b),
        };
        c.push(gate).expect("indices in range");
    }
    c
}

/// The circuits of the three potentials plus the kinetic factor, at desk
/// scale with the stock experiment strengths.
fn standard_circuits() -> Vec<(&'static str, Circuit)> {
    let sym = MeshConvention::with_qubits(MeshKind::Symmetric, 4).expect("power of two");
    let asym = MeshConvention::with_qubits(MeshKind::Asymmetric, 4).expect("power of two");
    let dt = 1.5e-3;
    let cfg_sym = TrotterConfig::new(dt, sym).expect("valid dt");
    let cfg_asym = TrotterConfig::new(dt, asym).expect("valid dt");
    let q = &[0usize, 1, 2, 3][..];
    vec![
        (
            "harmonic asymmetric",
            evolution::harmonic_circuit(100.0, &cfg_asym, 4, q).expect("builds"),
        ),
        (
            "harmonic symmetric",
            evolution::harmonic_circuit(100.0, &cfg_sym, 4, q).expect("builds"),
        ),
        (
            "square well",
            evolution::square_well_circuit(100.0, dt, 4, q).expect("builds"),
        ),
        (
            "coulomb",
            evolution::coulomb_circuit(10.0, &cfg_sym, 4, q).expect("builds"),
        ),
        (
            "kinetic symmetric",
            evolution::kinetic_circuit(&cfg_sym, 4, q).expect("builds"),
        ),
        (
            "kinetic asymmetric",
            evolution::kinetic_circuit(&cfg_asym, 4, q).expect("builds"),
        ),
    ]
}

fn check_norm_preservation() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut worst = 0.0f64;
    let sym = MeshConvention::with_qubits(MeshKind::Symmetric, 4).expect("power of two");
    let pots = [
        PotentialSpec::harmonic(100.0).expect("valid"),
        PotentialSpec::square_well(100.0).expect("valid"),
        PotentialSpec::coulomb(10.0).expect("valid"),
    ];
    let cfg = TrotterConfig::new(1.5e-3, sym).expect("valid dt");
    let steps: Vec<Circuit> = pots
        .iter()
        .map(|p| trotter_step_circuit(p, &cfg).expect("builds"))
        .collect();
    for _ in 0..100 {
        let mut st = random_state(4, &mut rng);
        for step in &steps {
            st.apply_circuit(step).expect("matched widths");
        }
        worst = worst.max((st.norm_sqr() - 1.0).abs());
    }
    CheckResult::new(
        "norm-preservation",
        worst,
        1e-10,
        "100 random states through all three potentials' Trotter steps",
    )
}

fn check_gate_unitarity() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let c = random_circuit(4, 30, &mut rng);
        let st0 = random_state(4, &mut rng);
        let mut st = st0.clone();
        st.apply_circuit(&c).expect("matched widths");
        st.apply_circuit(&c.inverse()).expect("matched widths");
        let diff = st
            .amplitudes()
            .iter()
            .zip(st0.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        worst = worst.max(diff);
    }
    CheckResult::new(
        "gate-unitarity",
        worst,
        1e-12,
        "random circuits followed by their inverses restore the state",
    )
}

fn check_dense_equivalence() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let c = random_circuit(4, 25, &mut rng);
        let applied = dense::circuit_matrix_applied(&c);
        let oracle = dense::circuit_matrix_oracle(&c);
        worst = worst.max(dense::max_abs_diff(&applied, &oracle));
    }
    CheckResult::new(
        "dense-equivalence",
        worst,
        1e-10,
        "gate application against explicit 16x16 matrix products",
    )
}

fn check_qft_dft(fault: FaultInjection) -> CheckResult {
    let mut worst = 0.0f64;
    for s in 1..=4usize {
        let qubits: Vec<usize> = (0..s).collect();
        let mut circuit = qft_circuit(s, &qubits, false).expect("nonempty");
        if fault == FaultInjection::QftAngle {
            let gates: Vec<GateOp> = circuit
                .gates()
                .iter()
                .cloned()
                .map(|g| match g {
                    GateOp::ControlledPhase { theta, controls, target } => {
                        GateOp::ControlledPhase { theta: theta + 1e-3, controls, target }
                    }
                    other => other,
                })
                .collect();
            let mut faulty = Circuit::new(s);
            for g in gates {
                faulty.push(g).expect("same indices");
            }
            circuit = faulty;
        }
        let applied = dense::circuit_matrix_applied(&circuit);
        let oracle = dense::dft_matrix(1 << s, false);
        worst = worst.max(dense::max_abs_diff(&applied, &oracle));
    }
    CheckResult::new(
        "qft-dft",
        worst,
        1e-10,
        "QFT circuit against the O(N^2) DFT kernel, s = 1..4",
    )
}

fn check_qft_roundtrip() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let st0 = random_state(4, &mut rng);
    let mut st = st0.clone();
    let qubits: Vec<usize> = (0..4).collect();
    st.apply_circuit(&qft_circuit(4, &qubits, false).expect("nonempty"))
        .expect("matched widths");
    st.apply_circuit(&qft_circuit(4, &qubits, true).expect("nonempty"))
        .expect("matched widths");
    let worst = st
        .amplitudes()
        .iter()
        .zip(st0.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    CheckResult::new("qft-roundtrip", worst, 1e-12, "QFT then inverse QFT is the identity")
}

fn check_mesh_roundtrip() -> CheckResult {
    let mut worst = 0.0f64;
    for kind in [MeshKind::Asymmetric, MeshKind::Symmetric] {
        let conv = MeshConvention::with_qubits(kind, 4).expect("power of two");
        let wf = initial_state_library("gauss20", conv).expect("known name");
        let st = encode_wavefunction(&wf).expect("normalized");
        let back = decode_wavefunction(&st, conv).expect("matched sizes");
        let diff = back
            .values()
            .iter()
            .zip(wf.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        worst = worst.max(diff);
    }
    CheckResult::new("mesh-roundtrip", worst, 1e-12, "decode after encode, both conventions")
}

fn check_momentum_chain() -> CheckResult {
    let mut worst = 0.0f64;
    for kind in [MeshKind::Asymmetric, MeshKind::Symmetric] {
        let conv = MeshConvention::with_qubits(kind, 4).expect("power of two");
        let wf = SampledWavefunction::from_fn(conv, |x| {
            Complex64::new((-25.0 * x * x).exp(), 0.4 * x)
        })
        .expect("normalizable");
        let direct = momentum_transform_direct(&wf);
        let mut st = encode_wavefunction(&wf).expect("normalized");
        x_to_p(&mut st).expect("square register");
        let via = decode_momentum(&st, conv).expect("matched sizes");
        let diff = via
            .iter()
            .zip(&direct)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        worst = worst.max(diff);
    }
    CheckResult::new(
        "momentum-chain",
        worst,
        1e-10,
        "encode, inverse QFT, momentum decode against the direct transform sum",
    )
}

fn check_symmetric_parity() -> CheckResult {
    let conv = MeshConvention::with_qubits(MeshKind::Symmetric, 4).expect("power of two");
    let wf = initial_state_library("gauss20", conv).expect("known name");
    let mut st = encode_wavefunction(&wf).expect("normalized");
    x_to_p(&mut st).expect("square register");
    let ps = decode_momentum(&st, conv).expect("matched sizes");
    let n = ps.len();
    let worst = (0..n)
        .map(|j| (ps[j] - ps[n - 1 - j]).norm())
        .fold(0.0f64, f64::max);
    CheckResult::new(
        "symmetric-parity",
        worst,
        1e-10,
        "even wavefunction keeps an even momentum profile on the symmetric mesh",
    )
}

fn diagonal_of(circuit: &Circuit) -> Vec<Complex64> {
    let q = circuit.num_qubits();
    (0..1usize << q)
        .map(|i| {
            let mut st = StateVector::basis_state(q, i).expect("in range");
            st.apply_circuit(circuit).expect("matched widths");
            st.amplitudes()[i]
        })
        .collect()
}

fn check_diagonal_equivalence() -> CheckResult {
    let sym = MeshConvention::with_qubits(MeshKind::Symmetric, 4).expect("power of two");
    let asym = MeshConvention::with_qubits(MeshKind::Asymmetric, 4).expect("power of two");
    let dt = 1.5e-3;
    let mut worst = 0.0f64;
    let mut detail = String::new();

    for (name, conv) in [("asymmetric", asym), ("symmetric", sym)] {
        let cfg = TrotterConfig::new(dt, conv).expect("valid dt");
        let xs = conv.mesh_points();
        let pots = [
            ("harmonic", PotentialSpec::harmonic(100.0).expect("valid")),
            ("square well", PotentialSpec::square_well(100.0).expect("valid")),
        ];
        for (pname, pot) in pots {
            let circuit =
                evolution::potential_half_circuit(&pot, &cfg, 4, &[0, 1, 2, 3]).expect("builds");
            let diag = diagonal_of(&circuit);
            for k in 0..16 {
                let expected = Complex64::cis(-pot.value(xs[k]) * dt / 2.0);
                worst = worst.max((diag[k] - expected).norm());
            }
            detail.push_str(&format!("{pname} {name}; "));
        }
        // kinetic against the momentum grid
        let kin = evolution::kinetic_circuit(&cfg, 4, &[0, 1, 2, 3]).expect("builds");
        let diag = diagonal_of(&kin);
        let ps = conv.momentum_points();
        for j in 0..16 {
            let expected = Complex64::cis(-ps[j] * ps[j] * dt / 2.0);
            worst = worst.max((diag[j] - expected).norm());
        }
    }
    // coulomb against the truncated-reciprocal surrogate
    let cfg = TrotterConfig::new(dt, sym).expect("valid dt");
    let coul = evolution::coulomb_circuit(10.0, &cfg, 4, &[0, 1, 2, 3]).expect("builds");
    let diag = diagonal_of(&coul);
    for k in 0..16 {
        let expected = Complex64::cis(10.0 * dt / 2.0 * coulomb_surrogate_inverse_abs(k));
        worst = worst.max((diag[k] - expected).norm());
    }
    detail.push_str("coulomb surrogate; kinetic both grids");
    CheckResult::new("diagonal-equivalence", worst, 1e-12, detail)
}

fn check_circuit_diagonality() -> CheckResult {
    let mut worst = 0.0f64;
    for (_, circuit) in standard_circuits() {
        let m = dense::circuit_matrix_applied(&circuit);
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if i != j {
                    worst = worst.max(m[(i, j)].norm());
                }
            }
        }
    }
    CheckResult::new(
        "circuit-diagonality",
        worst,
        1e-12,
        "potential and kinetic circuits are diagonal in their frames",
    )
}

fn check_reciprocal_accuracy() -> CheckResult {
    let conv = MeshConvention::with_qubits(MeshKind::Symmetric, 4).expect("power of two");
    let xs = conv.mesh_points();
    let mut worst = 0.0f64;
    for k in 0..16 {
        let exact = 1.0 / xs[k].abs();
        let rel = (coulomb_surrogate_inverse_abs(k) - exact).abs() / exact;
        worst = worst.max(rel);
    }
    CheckResult::new(
        "reciprocal-accuracy",
        worst,
        0.016,
        "truncated reciprocal against 1/|x_k| over the sixteen mesh points",
    )
}

fn check_coulomb_symmetry() -> CheckResult {
    let sym = MeshConvention::with_qubits(MeshKind::Symmetric, 4).expect("power of two");
    let cfg = TrotterConfig::new(1.5e-3, sym).expect("valid dt");
    let circuit = evolution::coulomb_circuit(10.0, &cfg, 4, &[0, 1, 2, 3]).expect("builds");
    let diag = diagonal_of(&circuit);
    let worst = (0..16)
        .map(|k| (diag[k] - diag[15 - k]).norm())
        .fold(0.0f64, f64::max);
    CheckResult::new(
        "coulomb-symmetry",
        worst,
        1e-14,
        "coulomb phases agree at x and -x by the bit-flip construction",
    )
}

fn check_kinetic_gate_count() -> CheckResult {
    let mut mismatch = 0.0f64;
    let mut detail = String::new();
    for s in 2..=5usize {
        let mesh = MeshConvention::with_qubits(MeshKind::Symmetric, s).expect("power of two");
        let cfg = TrotterConfig::new(1e-3, mesh).expect("valid dt");
        let qubits: Vec<usize> = (0..s).collect();
        let c = evolution::kinetic_circuit(&cfg, s, &qubits).expect("builds");
        let singles = c
            .gates()
            .iter()
            .filter(|g| matches!(g, GateOp::PhaseRotation { .. }))
            .count();
        let doubles = c
            .gates()
            .iter()
            .filter(|g| matches!(g, GateOp::ControlledPhase { .. }))
            .count();
        let globals = c
            .gates()
            .iter()
            .filter(|g| matches!(g, GateOp::GlobalPhase { .. }))
            .count();
        if singles != s || doubles != s * (s - 1) / 2 || globals != 1 {
            mismatch += 1.0;
        }
        detail.push_str(&format!("s={s}: {singles}+{doubles}+{globals}g; "));
    }
    CheckResult::new("kinetic-gate-count", mismatch, 0.0, detail)
}

fn check_lowering() -> CheckResult {
    let mut worst = 0.0f64;
    let mut max_arity = 0usize;
    for (_, circuit) in standard_circuits() {
        let lowered = lower_to_two_qubit(&circuit).expect("two controls at most");
        max_arity = max_arity.max(lowered.max_arity());
        let a = dense::circuit_matrix_applied(&circuit);
        let b = dense::circuit_matrix_applied(&lowered);
        worst = worst.max(dense::max_abs_diff(&a, &b));
    }
    let mut r = CheckResult::new(
        "lowering",
        worst,
        1e-12,
        format!("post-lowering max arity {max_arity}; unitaries agree"),
    );
    if max_arity > 2 {
        r.passed = false;
    }
    r
}

fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Per-step Trotter error against the dense propagator over
/// dt in [1e-4, 1e-2]; returns the fitted log-log slope and the sweep table.
pub fn trotter_per_step_sweep() -> (f64, String) {
    let mesh = MeshConvention::with_qubits(MeshKind::Symmetric, 3).expect("power of two");
    let pot = PotentialSpec::harmonic(20.0).expect("valid");
    let h = dense_hamiltonian(&pot, mesh).expect("small dense system");
    let mut table = String::from("dt, per-step Frobenius error\n");
    let mut points = Vec::new();
    for i in 0..9 {
        let dt = 1e-4 * 10f64.powf(i as f64 / 4.0);
        let cfg = TrotterConfig::new(dt, mesh).expect("valid dt");
        let step =
            dense::circuit_matrix_applied(&trotter_step_circuit(&pot, &cfg).expect("builds"));
        let step_phys = dense::to_physical_frame(&step, mesh);
        let err = (&step_phys - h.evolution_matrix(dt)).norm();
        table.push_str(&format!("{dt:.6e}, {err:.6e}\n"));
        points.push((dt.ln(), err.ln()));
    }
    (fit_slope(&points), table)
}

fn check_trotter_per_step_slope() -> CheckResult {
    let (slope, table) = trotter_per_step_sweep();
    CheckResult::new(
        "trotter-step-slope",
        (slope - 3.0).abs(),
        0.2,
        format!("fitted slope {slope:.3}\n{table}"),
    )
}

fn check_trotter_global_slope() -> CheckResult {
    let mesh = MeshConvention::with_qubits(MeshKind::Symmetric, 3).expect("power of two");
    let pot = PotentialSpec::harmonic(20.0).expect("valid");
    let h = dense_hamiltonian(&pot, mesh).expect("small dense system");
    let t = 0.1;
    let exact = h.evolution_matrix(t);
    let mut points = Vec::new();
    for n_steps in [8usize, 16, 32, 64, 128] {
        let dt = t / n_steps as f64;
        let cfg = TrotterConfig::new(dt, mesh).expect("valid dt");
        let step =
            dense::circuit_matrix_applied(&trotter_step_circuit(&pot, &cfg).expect("builds"));
        let step_phys = dense::to_physical_frame(&step, mesh);
        let mut u = DMatrix::identity(8, 8);
        for _ in 0..n_steps {
            u = &step_phys * u;
        }
        points.push((dt.ln(), (&u - &exact).norm().ln()));
    }
    let slope = fit_slope(&points);
    CheckResult::new(
        "trotter-global-slope",
        (slope - 2.0).abs(),
        0.2,
        format!("fixed t = {t}, fitted slope {slope:.3}"),
    )
}

/// A free-particle eigenstate with its eigenphase placed exactly on work
/// bin `m`: the initial samples, the matching config, and the bin.
fn on_grid_toy(m: usize, e_ref_extra: f64) -> (SampledWavefunction, PhaseEstimationConfig, PotentialSpec) {
    let mesh = MeshConvention::with_qubits(MeshKind::Symmetric, 4).expect("power of two");
    // momentum basis state |j = 5> expressed as grid samples
    let j = 5usize;
    let mut st = StateVector::basis_state(4, j).expect("in range");
    crate::mesh_qft::p_to_x(&mut st).expect("square register");
    let samples = decode_wavefunction(&st, mesh).expect("matched sizes");
    let p = mesh.momentum_points()[j];
    let energy = p * p / 2.0;
    let t = 0.05;
    let delta_e = std::f64::consts::TAU / t / 16.0;
    let e_ref = energy + m as f64 * delta_e + e_ref_extra;
    let pot = PotentialSpec::Harmonic { omega: 1e-9 };
    let cfg = PhaseEstimationConfig::new(4, t, 2, e_ref, mesh).expect("valid");
    (samples, cfg, pot)
}

fn check_qpe_exactness() -> CheckResult {
    let m = 5usize;
    let (samples, cfg, pot) = on_grid_toy(m, 0.0);
    let spectrum = phase_estimate(&samples, &pot, &cfg).expect("pipeline runs");
    let p = spectrum.bins()[m].probability;
    CheckResult::new(
        "qpe-exactness",
        (p - 1.0).abs(),
        1e-10,
        format!("on-grid eigenphase concentrates in bin {m} with p = {p:.12}"),
    )
}

fn check_qpe_aliasing() -> CheckResult {
    let m = 5usize;
    let (samples, cfg, pot) = on_grid_toy(m, 0.0);
    let base = phase_estimate(&samples, &pot, &cfg).expect("pipeline runs");

    // shifting E_ref by r bins rotates the outcome distribution by r
    let r = 3usize;
    let shifted_cfg = cfg.with_e_ref(cfg.e_ref() + r as f64 * cfg.delta_e());
    let shifted = phase_estimate(&samples, &pot, &shifted_cfg).expect("pipeline runs");
    let mut worst = 0.0f64;
    for m0 in 0..16 {
        let expect = base.bins()[m0].probability;
        let got = shifted.bins()[(m0 + r) % 16].probability;
        worst = worst.max((expect - got).abs());
    }
    // shifting by the full window leaves the distribution untouched
    let window_cfg = cfg.with_e_ref(cfg.e_ref() + cfg.energy_window());
    let window = phase_estimate(&samples, &pot, &window_cfg).expect("pipeline runs");
    for m0 in 0..16 {
        worst = worst.max((base.bins()[m0].probability - window.bins()[m0].probability).abs());
    }
    CheckResult::new(
        "qpe-aliasing",
        worst,
        1e-12,
        "E_ref shifts rotate bins cyclically; a full-window shift is invisible",
    )
}

fn check_spectrum_completeness() -> CheckResult {
    let mesh = MeshConvention::with_qubits(MeshKind::Asymmetric, 4).expect("power of two");
    let cfg = PhaseEstimationConfig::new(4, 0.045, 30, std::f64::consts::TAU / 0.045, mesh)
        .expect("valid");
    let pot = PotentialSpec::harmonic(100.0).expect("valid");
    let initial = initial_state_library("gauss100", mesh).expect("known name");
    let spectrum = phase_estimate(&initial, &pot, &cfg).expect("pipeline runs");
    CheckResult::new(
        "spectrum-completeness",
        (spectrum.total_probability() - 1.0).abs(),
        1e-10,
        "bin probabilities sum to one",
    )
}

fn check_well_solver() -> CheckResult {
    let levels = square_well_levels(100.0, 0.25);
    let expected = [-88.12, -54.05, -7.005];
    let mut worst = 0.0f64;
    if levels.len() != 3 {
        return CheckResult::new("well-solver", levels.len() as f64, 3.0, "bound-state count");
    }
    for (l, e) in levels.iter().zip(expected) {
        worst = worst.max((l.energy - e).abs());
        worst = worst.max(l.residual / 1e-10 * 0.01); // residual scaled into the same bound
    }
    CheckResult::new(
        "well-solver",
        worst,
        0.01,
        format!(
            "roots {:?}",
            levels.iter().map(|l| l.energy).collect::<Vec<_>>()
        ),
    )
}

fn check_oracle_hermitian() -> CheckResult {
    let mut worst = 0.0f64;
    let sym = MeshConvention::with_qubits(MeshKind::Symmetric, 4).expect("power of two");
    let asym = MeshConvention::with_qubits(MeshKind::Asymmetric, 4).expect("power of two");
    let systems = [
        (PotentialSpec::harmonic(100.0).expect("valid"), asym),
        (PotentialSpec::square_well(100.0).expect("valid"), sym),
        (PotentialSpec::coulomb(10.0).expect("valid"), sym),
    ];
    for (pot, conv) in systems {
        let h = dense_hamiltonian(&pot, conv).expect("small dense system");
        worst = worst.max(h.hermiticity_defect() / 1e-12 * 1e-10);
        for i in 0..h.dim() {
            let vi = h.eigenvector(i).expect("in range");
            for j in i..h.dim() {
                let vj = h.eigenvector(j).expect("in range");
                let dot = vi.overlap(&vj).norm();
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - expect).abs());
            }
        }
    }
    CheckResult::new(
        "oracle-hermitian",
        worst,
        1e-10,
        "dense Hamiltonians are Hermitian with orthonormal eigenvectors",
    )
}

/// Runs the whole battery.  The fault flag perturbs the QFT check so its
/// failure path can be demonstrated.
pub fn run_all(fault: FaultInjection) -> Vec<CheckResult> {
    vec![
        check_norm_preservation(),
        check_gate_unitarity(),
        check_dense_equivalence(),
        check_qft_dft(fault),
        check_qft_roundtrip(),
        check_mesh_roundtrip(),
        check_momentum_chain(),
        check_symmetric_parity(),
        check_diagonal_equivalence(),
        check_circuit_diagonality(),
        check_reciprocal_accuracy(),
        check_coulomb_symmetry(),
        check_kinetic_gate_count(),
        check_lowering(),
        check_trotter_per_step_slope(),
        check_trotter_global_slope(),
        check_qpe_exactness(),
        check_qpe_aliasing(),
        check_spectrum_completeness(),
        check_well_solver(),
        check_oracle_hermitian(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_battery_passes() {
        for check in run_all(FaultInjection::None) {
            assert!(
                check.passed,
                "{}: measured {:.3e} bound {:.3e}\n{}",
                check.name, check.measured, check.bound, check.detail
            );
        }
    }

    #[test]
    fn fault_injection_trips_qft_check() {
        let results = run_all(FaultInjection::QftAngle);
        let qft = results.iter().find(|c| c.name == "qft-dft").unwrap();
        assert!(!qft.passed, "perturbed angle must fail the DFT comparison");
        // and only that check is affected
        for check in results.iter().filter(|c| c.name != "qft-dft") {
            assert!(check.passed, "{} unexpectedly failed", check.name);
        }
    }
}
