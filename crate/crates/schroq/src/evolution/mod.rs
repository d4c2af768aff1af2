//! Trotter-step circuits for H = p^2/2 + V(x).
//!
//! One step of length dt is the symmetric factorization
//!
//! ```text
//!   e^{-iV dt/2}  U_QFT  e^{-iK dt}  U_QFT^dag  e^{-iV dt/2}
//! ```
//!
//! applied to the encoded simulation register.  Both the kinetic factor and
//! every built-in potential are diagonal in their own frame, so each factor
//! is a pure phase network:
//!
//! * quadratic phases (kinetic, harmonic) expand (j/N - c)^2 over the bits
//!   of j into single-qubit rotations plus one controlled phase per bit
//!   pair;
//! * the square well phases exactly the two quadrants where the first two
//!   bits differ;
//! * the Coulomb factor folds x -> -x with controlled bit flips and then
//!   walks the leading-bit branches of the truncated reciprocal expansion.

pub mod lower;
pub mod reciprocal;

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::mesh_qft::{qft_circuit, MeshConvention, MeshKind};
use crate::register::{Circuit, Control, GateOp, StateVector};

pub use lower::{lower_to_two_qubit, rewrite_negative_controls};
pub use reciprocal::{coulomb_branch_value, reciprocal_coefficients, truncated_reciprocal};

/// Fixed square-well half-width; the well circuit hinges on the first two
/// bits of the mesh index, which pins a = 1/4 on the unit box.
pub const SQUARE_WELL_HALF_WIDTH: f64 = 0.25;

/// A potential on the unit box, hbar = m = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialSpec {
    Harmonic { omega: f64 },
    SquareWell { depth: f64, half_width: f64 },
    Coulomb { strength: f64 },
}

impl PotentialSpec {
    pub fn harmonic(omega: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "harmonic strength must be positive, got {omega}"
            )));
        }
        Ok(PotentialSpec::Harmonic { omega })
    }

    pub fn square_well(depth: f64) -> Result<Self> {
        if !(depth > 0.0) || !depth.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "well depth must be positive, got {depth}"
            )));
        }
        Ok(PotentialSpec::SquareWell {
            depth,
            half_width: SQUARE_WELL_HALF_WIDTH,
        })
    }

    pub fn coulomb(strength: f64) -> Result<Self> {
        if !(strength > 0.0) || !strength.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coulomb strength must be positive, got {strength}"
            )));
        }
        Ok(PotentialSpec::Coulomb { strength })
    }

    /// V(x) on the grid.  The well uses the half-open quadrant convention
    /// -a <= x < a of the bit test j1 != j2, so the scalar value and the
    /// circuit agree at every mesh point of either convention.  The Coulomb
    /// value is the exact -kappa/|x| (the circuits use the truncated
    /// reciprocal surrogate instead; see [`coulomb_surrogate_value`]).
    pub fn value(&self, x: f64) -> f64 {
        match self {
            PotentialSpec::Harmonic { omega } => 0.5 * omega * omega * x * x,
            PotentialSpec::SquareWell { depth, half_width } => {
                if x >= -half_width && x < *half_width {
                    -depth
                } else {
                    0.0
                }
            }
            PotentialSpec::Coulomb { strength } => -strength / x.abs(),
        }
    }
}

/// Time step plus mesh layout for the circuit builders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrotterConfig {
    dt: f64,
    mesh: MeshConvention,
}

impl TrotterConfig {
    /// dt = 0 is admitted so that zero-strength circuits degrade to the
    /// identity; negative or non-finite steps are rejected.
    pub fn new(dt: f64, mesh: MeshConvention) -> Result<Self> {
        if !(dt >= 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "time step must be nonnegative, got {dt}"
            )));
        }
        Ok(TrotterConfig { dt, mesh })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn mesh(&self) -> MeshConvention {
        self.mesh
    }

    pub fn sim_qubits(&self) -> usize {
        self.mesh.qubits()
    }
}

fn check_qubit_window(num_qubits: usize, qubits: &[usize]) -> Result<()> {
    for &q in qubits {
        if q >= num_qubits {
            return Err(Error::QubitOutOfRange { index: q, num_qubits });
        }
    }
    Ok(())
}

/// Diagonal circuit multiplying basis state |j> by e^{i gamma (j/2^s - c)^2},
/// where j is read MSB-first off the given qubits.
///
/// Expanding over the bits j_n of j (n = 1..s, j_n^2 = j_n):
///
/// ```text
///   (j/2^s - c)^2 = c^2 + sum_n j_n (2^{-2n} - 2c 2^{-n})
///                       + 2 sum_{m<n} j_m j_n 2^{-m-n}
/// ```
///
/// giving one global phase, s rotations and s(s-1)/2 controlled phases.
pub fn quadratic_phase_circuit(
    num_qubits: usize,
    qubits: &[usize],
    gamma: f64,
    offset: f64,
) -> Result<Circuit> {
    check_qubit_window(num_qubits, qubits)?;
    let s = qubits.len();
    if s == 0 {
        return Err(Error::EmptySubset);
    }
    let mut circuit = Circuit::new(num_qubits);
    circuit.push(GateOp::global(gamma * offset * offset))?;
    for n in 1..=s {
        let w = 0.5f64.powi(n as i32);
        circuit.push(GateOp::phase(gamma * (w * w - 2.0 * offset * w), qubits[n - 1]))?;
    }
    for m in 1..=s {
        for n in (m + 1)..=s {
            let theta = 2.0 * gamma * 0.5f64.powi((m + n) as i32);
            circuit.push(GateOp::cphase(theta, qubits[m - 1], qubits[n - 1]))?;
        }
    }
    Ok(circuit)
}

/// Kinetic factor e^{-iK dt} in the momentum frame: phase
/// e^{i alpha (j/N - c)^2} with alpha = -(2 pi N)^2 dt / 2 and c the grid
/// offset, which equals e^{-i p_j^2 dt / 2} on the momentum grid.
pub fn kinetic_circuit(cfg: &TrotterConfig, num_qubits: usize, qubits: &[usize]) -> Result<Circuit> {
    let n = cfg.mesh().num_points() as f64;
    let alpha = -(TAU * n).powi(2) * cfg.dt() / 2.0;
    quadratic_phase_circuit(num_qubits, qubits, alpha, cfg.mesh().offset())
}

/// Harmonic half-step e^{-iV dt/2} for V = (omega^2/2) x^2: the kinetic
/// builder with strength beta = -omega^2 dt / 4 on the coordinate grid.
pub fn harmonic_circuit(
    omega: f64,
    cfg: &TrotterConfig,
    num_qubits: usize,
    qubits: &[usize],
) -> Result<Circuit> {
    let beta = -omega * omega * cfg.dt() / 4.0;
    quadratic_phase_circuit(num_qubits, qubits, beta, cfg.mesh().offset())
}

/// Square-well half-step: diag(1, e^{i V0 dt/2}, e^{i V0 dt/2}, 1) on the
/// first two simulation qubits (the well occupies exactly the quadrants
/// where j1 != j2).  Two controlled phases with mixed polarities.
pub fn square_well_circuit(
    depth: f64,
    dt: f64,
    num_qubits: usize,
    qubits: &[usize],
) -> Result<Circuit> {
    check_qubit_window(num_qubits, qubits)?;
    if qubits.len() < 2 {
        return Err(Error::InvalidParameter(
            "square-well circuit needs at least two simulation qubits".into(),
        ));
    }
    let theta = depth * dt / 2.0;
    let mut circuit = Circuit::new(num_qubits);
    // j1 = 0, j2 = 1
    circuit.push(GateOp::cphase0(theta, qubits[0], qubits[1]))?;
    // j1 = 1, j2 = 0
    circuit.push(GateOp::cphase0(theta, qubits[1], qubits[0]))?;
    Ok(circuit)
}

/// The same well unitary spelled out as X-conjugated controlled phases, for
/// gate-count reporting against the network form.
pub fn square_well_circuit_decomposed(
    depth: f64,
    dt: f64,
    num_qubits: usize,
    qubits: &[usize],
) -> Result<Circuit> {
    check_qubit_window(num_qubits, qubits)?;
    if qubits.len() < 2 {
        return Err(Error::InvalidParameter(
            "square-well circuit needs at least two simulation qubits".into(),
        ));
    }
    let theta = depth * dt / 2.0;
    let (a, b) = (qubits[0], qubits[1]);
    let mut circuit = Circuit::new(num_qubits);
    circuit.push(GateOp::x(a))?;
    circuit.push(GateOp::cphase(theta, a, b))?;
    circuit.push(GateOp::x(a))?;
    circuit.push(GateOp::x(b))?;
    circuit.push(GateOp::cphase(theta, b, a))?;
    circuit.push(GateOp::x(b))?;
    Ok(circuit)
}

fn push_controlled_not(circuit: &mut Circuit, control: Control, target: usize) -> Result<()> {
    circuit.push(GateOp::h(target))?;
    circuit.push(GateOp::multi_cphase(std::f64::consts::PI, vec![control], target))?;
    circuit.push(GateOp::h(target))
}

/// Coulomb half-step e^{+i kappa dt / (2 |x_k|)} with 1/|x_k| replaced by
/// the truncated reciprocal expansion; s = 4 on the symmetric mesh only.
///
/// On that mesh |x_k| = 0.0 j2 j3 j4 1 (binary) once the negative half is
/// folded over, so the circuit is: bit-flips on j2..j4 controlled on j1 = 0,
/// a shared phase network over j2..j4, and the flips undone.  The network
/// realizes the branch values U4, V4, V3(j4), V2(j3, j4) as phases
/// conditioned on the position of the leading 1 bit; two-bit branch
/// conditions give doubly controlled phases (arity 3 before lowering).
pub fn coulomb_circuit(
    strength: f64,
    cfg: &TrotterConfig,
    num_qubits: usize,
    qubits: &[usize],
) -> Result<Circuit> {
    check_qubit_window(num_qubits, qubits)?;
    if qubits.len() != 4 {
        return Err(Error::Unsupported(format!(
            "coulomb circuit is built for s = 4, got s = {}",
            qubits.len()
        )));
    }
    if cfg.mesh().kind() != MeshKind::Symmetric || cfg.mesh().num_points() != 16 {
        return Err(Error::InvalidParameter(
            "coulomb circuit requires the 16-point symmetric mesh (x = 0 must be excluded)"
                .into(),
        ));
    }
    let theta = strength * cfg.dt() / 2.0;
    let (q1, q2, q3, q4) = (qubits[0], qubits[1], qubits[2], qubits[3]);

    let v2 = |j3: u8, j4: u8| coulomb_branch_value(1, j3, j4);
    let v3 = |j4: u8| coulomb_branch_value(0, 1, j4);
    let v4 = coulomb_branch_value(0, 0, 1);
    let u4 = coulomb_branch_value(0, 0, 0);

    let mut circuit = Circuit::new(num_qubits);

    // fold x < 0 onto x > 0: flip j2..j4 when j1 = 0
    let fold = |circuit: &mut Circuit| -> Result<()> {
        for &t in &[q2, q3, q4] {
            push_controlled_not(circuit, Control::off(q1), t)?;
        }
        Ok(())
    };
    fold(&mut circuit)?;

    // background term: the all-zero branch value everywhere, corrected
    // inside each branch below
    circuit.push(GateOp::global(theta * u4))?;
    // j2 = 1 branch: V2(j3, j4) expanded multilinearly over j3, j4
    circuit.push(GateOp::phase(theta * (v2(0, 0) - u4), q2))?;
    circuit.push(GateOp::cphase(theta * (v2(1, 0) - v2(0, 0)), q2, q3))?;
    circuit.push(GateOp::cphase(theta * (v2(0, 1) - v2(0, 0)), q2, q4))?;
    circuit.push(GateOp::multi_cphase(
        theta * (v2(1, 1) - v2(1, 0) - v2(0, 1) + v2(0, 0)),
        vec![Control::on(q2), Control::on(q3)],
        q4,
    ))?;
    // j2 = 0, j3 = 1 branch: V3(j4)
    circuit.push(GateOp::cphase0(theta * (v3(0) - u4), q2, q3))?;
    circuit.push(GateOp::multi_cphase(
        theta * (v3(1) - v3(0)),
        vec![Control::off(q2), Control::on(q3)],
        q4,
    ))?;
    // j2 = j3 = 0, j4 = 1 branch: V4
    circuit.push(GateOp::multi_cphase(
        theta * (v4 - u4),
        vec![Control::off(q2), Control::off(q3)],
        q4,
    ))?;

    fold(&mut circuit)?;
    Ok(circuit)
}

/// The truncated-reciprocal surrogate the circuit actually applies at mesh
/// index k of the 16-point symmetric grid: an approximation of 1/|x_k|.
pub fn coulomb_surrogate_inverse_abs(k: usize) -> f64 {
    assert!(k < 16);
    let j1 = (k >> 3) & 1;
    let (j2, j3, j4) = if j1 == 1 {
        (((k >> 2) & 1) as u8, ((k >> 1) & 1) as u8, (k & 1) as u8)
    } else {
        (
            (1 - ((k >> 2) & 1)) as u8,
            (1 - ((k >> 1) & 1)) as u8,
            (1 - (k & 1)) as u8,
        )
    };
    coulomb_branch_value(j2, j3, j4)
}

/// Surrogate potential value -kappa * yhat(|x_k|) used by both the circuit
/// and the matching dense-oracle variant.
pub fn coulomb_surrogate_value(strength: f64, k: usize) -> f64 {
    -strength * coulomb_surrogate_inverse_abs(k)
}

/// Half-step e^{-iV dt/2} for any built-in potential.
pub fn potential_half_circuit(
    pot: &PotentialSpec,
    cfg: &TrotterConfig,
    num_qubits: usize,
    qubits: &[usize],
) -> Result<Circuit> {
    match pot {
        PotentialSpec::Harmonic { omega } => harmonic_circuit(*omega, cfg, num_qubits, qubits),
        PotentialSpec::SquareWell { depth, .. } => {
            square_well_circuit(*depth, cfg.dt(), num_qubits, qubits)
        }
        PotentialSpec::Coulomb { strength } => coulomb_circuit(*strength, cfg, num_qubits, qubits),
    }
}

/// One symmetric Trotter step on an explicit qubit window:
/// half-potential, inverse QFT, kinetic, forward QFT, half-potential.
pub fn trotter_step_circuit_on(
    pot: &PotentialSpec,
    cfg: &TrotterConfig,
    num_qubits: usize,
    qubits: &[usize],
) -> Result<Circuit> {
    if qubits.len() != cfg.sim_qubits() {
        return Err(Error::QubitCountMismatch {
            circuit: cfg.sim_qubits(),
            state: qubits.len(),
        });
    }
    let mut step = potential_half_circuit(pot, cfg, num_qubits, qubits)?;
    step.extend(&qft_circuit(num_qubits, qubits, true)?)?;
    step.extend(&kinetic_circuit(cfg, num_qubits, qubits)?)?;
    step.extend(&qft_circuit(num_qubits, qubits, false)?)?;
    step.extend(&potential_half_circuit(pot, cfg, num_qubits, qubits)?)?;
    Ok(step)
}

/// One Trotter step over a bare simulation register.
pub fn trotter_step_circuit(pot: &PotentialSpec, cfg: &TrotterConfig) -> Result<Circuit> {
    let s = cfg.sim_qubits();
    let qubits: Vec<usize> = (0..s).collect();
    trotter_step_circuit_on(pot, cfg, s, &qubits)
}

/// n_steps repetitions of the Trotter step.  Adjacent half-potential factors
/// are left unmerged, mirroring the circuit as drawn.
pub fn evolve(
    state: &mut StateVector,
    pot: &PotentialSpec,
    cfg: &TrotterConfig,
    n_steps: usize,
) -> Result<()> {
    if n_steps == 0 {
        return Err(Error::InvalidParameter("n_steps must be at least 1".into()));
    }
    let step = trotter_step_circuit(pot, cfg)?;
    for _ in 0..n_steps {
        state.apply_circuit(&step)?;
    }
    Ok(())
}
