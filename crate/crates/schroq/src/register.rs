//! State-vector representation and gate application.
//!
//! A [`StateVector`] stores the 2^q complex amplitudes of a q-qubit register.
//! Qubit 0 is the *most significant* bit of the basis index, so a basis label
//! read left to right as a binary string is the index of its amplitude.  This
//! matches the j = j1 j2 ... js convention used throughout the circuit
//! builders, where j1 carries weight 2^(s-1).
//!
//! Gates are symbolic [`GateOp`] values collected into [`Circuit`]s; applying
//! a gate updates the amplitudes in place in O(2^q).

use num_complex::Complex64;

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-8;

/// A control qubit together with its polarity: `polarity = true` conditions
/// on |1>, `false` on |0> (the "empty circle" convention).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Control {
    pub qubit: usize,
    pub polarity: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Control { qubit, polarity: true }
    }

    pub fn off(qubit: usize) -> Self {
        Control { qubit, polarity: false }
    }
}

/// A single symbolic gate.
///
/// `ControlledPhase` multiplies by e^{i theta} the amplitudes whose control
/// bits all match their declared polarity and whose target bit is 1.  An
/// empty control list makes it equivalent to `PhaseRotation`.  `GlobalPhase`
/// is retained as a gate because controlled global phases become physical in
/// phase estimation.  `Swap` is applied as an index permutation, exactly
/// equivalent to the three-CNOT realization.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    /// diag(1, e^{i theta}) on the target qubit.
    PhaseRotation { theta: f64, target: usize },
    /// NOT gate.
    PauliX { target: usize },
    Hadamard { target: usize },
    ControlledPhase {
        theta: f64,
        controls: Vec<Control>,
        target: usize,
    },
    GlobalPhase { theta: f64 },
    Swap { a: usize, b: usize },
}

impl GateOp {
    pub fn phase(theta: f64, target: usize) -> Self {
        GateOp::PhaseRotation { theta, target }
    }

    pub fn x(target: usize) -> Self {
        GateOp::PauliX { target }
    }

    pub fn h(target: usize) -> Self {
        GateOp::Hadamard { target }
    }

    /// Controlled phase with a single polarity-1 control.
    pub fn cphase(theta: f64, control: usize, target: usize) -> Self {
        GateOp::ControlledPhase {
            theta,
            controls: vec![Control::on(control)],
            target,
        }
    }

    /// Controlled phase with a single polarity-0 control.
    pub fn cphase0(theta: f64, control: usize, target: usize) -> Self {
        GateOp::ControlledPhase {
            theta,
            controls: vec![Control::off(control)],
            target,
        }
    }

    pub fn multi_cphase(theta: f64, controls: Vec<Control>, target: usize) -> Self {
        GateOp::ControlledPhase { theta, controls, target }
    }

    pub fn global(theta: f64) -> Self {
        GateOp::GlobalPhase { theta }
    }

    pub fn swap(a: usize, b: usize) -> Self {
        GateOp::Swap { a, b }
    }

    /// Number of qubits the gate touches (controls + targets).
    pub fn arity(&self) -> usize {
        match self {
            GateOp::PhaseRotation { .. } | GateOp::PauliX { .. } | GateOp::Hadamard { .. } => 1,
            GateOp::ControlledPhase { controls, .. } => controls.len() + 1,
            GateOp::GlobalPhase { .. } => 0,
            GateOp::Swap { .. } => 2,
        }
    }

    /// The gate implementing the inverse unitary.
    pub fn inverse(&self) -> GateOp {
        match self {
            GateOp::PhaseRotation { theta, target } => GateOp::PhaseRotation {
                theta: -theta,
                target: *target,
            },
            GateOp::ControlledPhase { theta, controls, target } => GateOp::ControlledPhase {
                theta: -theta,
                controls: controls.clone(),
                target: *target,
            },
            GateOp::GlobalPhase { theta } => GateOp::GlobalPhase { theta: -theta },
            other => other.clone(),
        }
    }

    /// All qubits referenced by the gate.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            GateOp::PhaseRotation { target, .. }
            | GateOp::PauliX { target }
            | GateOp::Hadamard { target } => vec![*target],
            GateOp::ControlledPhase { controls, target, .. } => {
                let mut qs: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
                qs.push(*target);
                qs
            }
            GateOp::GlobalPhase { .. } => vec![],
            GateOp::Swap { a, b } => vec![*a, *b],
        }
    }

    fn validate(&self, num_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { index: q, num_qubits });
            }
        }
        let mut sorted = qs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != qs.len() {
            return Err(Error::DuplicateQubits(format!("{qs:?}")));
        }
        Ok(())
    }

    /// One line in the dump format:
    /// `GATE_KIND target(s) [controls with polarity] angle` with angles at 17
    /// significant digits.
    pub fn dump_line(&self) -> String {
        match self {
            GateOp::PhaseRotation { theta, target } => {
                format!("PHASE {target} [] {theta:.16e}")
            }
            GateOp::PauliX { target } => format!("X {target} []"),
            GateOp::Hadamard { target } => format!("H {target} []"),
            GateOp::ControlledPhase { theta, controls, target } => {
                let ctrls: Vec<String> = controls
                    .iter()
                    .map(|c| format!("{}{}", if c.polarity { '+' } else { '-' }, c.qubit))
                    .collect();
                format!("CPHASE {target} [{}] {theta:.16e}", ctrls.join(" "))
            }
            GateOp::GlobalPhase { theta } => format!("GPHASE - [] {theta:.16e}"),
            GateOp::Swap { a, b } => format!("SWAP {a} {b} []"),
        }
    }
}

/// An ordered list of gates over a fixed-width register.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<GateOp>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit { num_qubits, gates: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: GateOp) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends all gates of `other`, which must be on the same register width.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::QubitCountMismatch {
                circuit: other.num_qubits,
                state: self.num_qubits,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    /// The adjoint circuit: gates reversed, each inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(GateOp::inverse).collect(),
        }
    }

    /// Largest (controls + targets) count over all gates.
    pub fn max_arity(&self) -> usize {
        self.gates.iter().map(GateOp::arity).max().unwrap_or(0)
    }

    /// Histogram of gate arities, indexed by arity.
    pub fn arity_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0usize; self.max_arity() + 1];
        for g in &self.gates {
            hist[g.arity()] += 1;
        }
        hist
    }

    /// Plain-text dump, one line per gate.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            out.push_str(&g.dump_line());
            out.push('\n');
        }
        out
    }
}

/// Normalized complex amplitudes over 2^q basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The computational basis state |index> on q qubits.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amps = vec![Complex64::ZERO; dim];
        amps[index] = Complex64::ONE;
        Ok(StateVector { num_qubits, amps })
    }

    /// Builds a state from raw amplitudes; the length must be a power of two
    /// and the norm must already be 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(StateVector {
            num_qubits: dim.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// <self|other>.
    pub fn overlap(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Bit mask selecting the given qubit; qubit 0 is the MSB of the index.
    fn mask(&self, qubit: usize) -> usize {
        1usize << (self.num_qubits - 1 - qubit)
    }

    pub fn apply_gate(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.apply_gate_masked(gate, 0);
        Ok(())
    }

    /// Applies `gate` only to amplitudes whose index has every bit of
    /// `ctrl_mask` set.  Passing 0 applies it unconditionally.  This realizes
    /// gate promotion with extra polarity-1 controls without rewriting the
    /// gate list.
    fn apply_gate_masked(&mut self, gate: &GateOp, ctrl_mask: usize) {
        let dim = self.amps.len();
        match gate {
            GateOp::PhaseRotation { theta, target } => {
                let m = self.mask(*target);
                let ph = Complex64::cis(*theta);
                for i in 0..dim {
                    if i & m != 0 && i & ctrl_mask == ctrl_mask {
                        self.amps[i] *= ph;
                    }
                }
            }
            GateOp::PauliX { target } => {
                let m = self.mask(*target);
                for i in 0..dim {
                    if i & m == 0 && i & ctrl_mask == ctrl_mask {
                        self.amps.swap(i, i | m);
                    }
                }
            }
            GateOp::Hadamard { target } => {
                let m = self.mask(*target);
                let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
                for i in 0..dim {
                    if i & m == 0 && i & ctrl_mask == ctrl_mask {
                        let a = self.amps[i];
                        let b = self.amps[i | m];
                        self.amps[i] = (a + b) * inv_sqrt2;
                        self.amps[i | m] = (a - b) * inv_sqrt2;
                    }
                }
            }
            GateOp::ControlledPhase { theta, controls, target } => {
                let tm = self.mask(*target);
                let mut all = 0usize;
                let mut want = 0usize;
                for c in controls {
                    let cm = self.mask(c.qubit);
                    all |= cm;
                    if c.polarity {
                        want |= cm;
                    }
                }
                let ph = Complex64::cis(*theta);
                for i in 0..dim {
                    if i & tm != 0 && i & all == want && i & ctrl_mask == ctrl_mask {
                        self.amps[i] *= ph;
                    }
                }
            }
            GateOp::GlobalPhase { theta } => {
                let ph = Complex64::cis(*theta);
                for i in 0..dim {
                    if i & ctrl_mask == ctrl_mask {
                        self.amps[i] *= ph;
                    }
                }
            }
            GateOp::Swap { a, b } => {
                let ma = self.mask(*a);
                let mb = self.mask(*b);
                for i in 0..dim {
                    if i & ma != 0 && i & mb == 0 && i & ctrl_mask == ctrl_mask {
                        self.amps.swap(i, i ^ ma ^ mb);
                    }
                }
            }
        }
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(Error::QubitCountMismatch {
                circuit: circuit.num_qubits(),
                state: self.num_qubits,
            });
        }
        for gate in circuit.gates() {
            self.apply_gate_masked(gate, 0);
        }
        Ok(())
    }

    /// Applies the circuit only on the |1> branch of `control`, i.e. the
    /// circuit with every gate promoted by one polarity-1 control.  The
    /// control qubit must not appear in the circuit's gates.
    pub fn apply_circuit_controlled(&mut self, circuit: &Circuit, control: usize) -> Result<()> {
        if circuit.num_qubits() != self.num_qubits {
            return Err(Error::QubitCountMismatch {
                circuit: circuit.num_qubits(),
                state: self.num_qubits,
            });
        }
        if control >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                index: control,
                num_qubits: self.num_qubits,
            });
        }
        let cm = self.mask(control);
        for gate in circuit.gates() {
            debug_assert!(!gate.qubits().contains(&control));
            self.apply_gate_masked(gate, cm);
        }
        Ok(())
    }

    /// Marginal outcome distribution over an ordered qubit subset; outcome
    /// bits are read with `qubits[0]` as the most significant.
    pub fn register_distribution(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        if qubits.is_empty() {
            return Err(Error::EmptySubset);
        }
        for &q in qubits {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange { index: q, num_qubits: self.num_qubits });
            }
        }
        let mut probs = vec![0.0f64; 1 << qubits.len()];
        for (i, amp) in self.amps.iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            probs[self.subset_outcome(i, qubits)] += p;
        }
        Ok(probs)
    }

    fn subset_outcome(&self, index: usize, qubits: &[usize]) -> usize {
        let mut out = 0usize;
        for &q in qubits {
            out = (out << 1) | ((index & self.mask(q) != 0) as usize);
        }
        out
    }

    /// Projects onto `outcome` of the given qubits and returns the
    /// renormalized state of the complement register (remaining qubits in
    /// ascending order) together with the outcome probability.
    pub fn condition_on_outcome(
        &self,
        qubits: &[usize],
        outcome: usize,
    ) -> Result<(StateVector, f64)> {
        if qubits.is_empty() {
            return Err(Error::EmptySubset);
        }
        if outcome >= 1usize << qubits.len() {
            return Err(Error::IndexOutOfRange { index: outcome, dim: 1 << qubits.len() });
        }
        let rest: Vec<usize> = (0..self.num_qubits).filter(|q| !qubits.contains(q)).collect();
        if rest.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut sub = vec![Complex64::ZERO; 1 << rest.len()];
        let mut prob = 0.0f64;
        for (i, amp) in self.amps.iter().enumerate() {
            if self.subset_outcome(i, qubits) == outcome {
                prob += amp.norm_sqr();
                sub[self.subset_outcome(i, &rest)] = *amp;
            }
        }
        if prob <= 1e-14 {
            return Err(Error::UnreachableOutcome { outcome, probability: prob });
        }
        let scale = 1.0 / prob.sqrt();
        for a in &mut sub {
            *a *= scale;
        }
        Ok((
            StateVector { num_qubits: rest.len(), amps: sub },
            prob,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_state_definitions() {
        let s = StateVector::basis_state(1, 0).unwrap();
        assert_eq!(s.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);

        let s = StateVector::basis_state(2, 3).unwrap();
        assert_eq!(
            s.amplitudes(),
            &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]
        );

        let s = StateVector::basis_state(8, 0).unwrap();
        assert_eq!(s.dim(), 256);
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|a| *a == Complex64::ZERO));
    }

    #[test]
    fn basis_state_out_of_range() {
        assert!(matches!(
            StateVector::basis_state(2, 4),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn pauli_x_is_not() {
        let mut s = StateVector::basis_state(1, 0).unwrap();
        s.apply_gate(&GateOp::x(0)).unwrap();
        assert_eq!(s.amplitudes(), &[c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn phase_pi_is_z() {
        let mut s = StateVector::basis_state(1, 0).unwrap();
        s.apply_gate(&GateOp::h(0)).unwrap();
        s.apply_gate(&GateOp::phase(std::f64::consts::PI, 0)).unwrap();
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitudes()[0] - c(inv_sqrt2, 0.0)).norm() < 1e-15);
        assert!((s.amplitudes()[1] - c(-inv_sqrt2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn controlled_phase_definition() {
        // control = qubit 1 (LSB here), target = qubit 0, polarity 1
        let theta = 0.7;
        let mut s = StateVector::basis_state(2, 3).unwrap(); // |11>
        s.apply_gate(&GateOp::cphase(theta, 1, 0)).unwrap();
        assert!((s.amplitudes()[3] - Complex64::cis(theta)).norm() < 1e-15);

        let mut s = StateVector::basis_state(2, 1).unwrap(); // |01>
        s.apply_gate(&GateOp::cphase(theta, 1, 0)).unwrap();
        assert_eq!(s.amplitudes()[1], c(1.0, 0.0)); // target bit is 0, unchanged
    }

    #[test]
    fn polarity_zero_control() {
        let theta = 0.3;
        // phase applies when control qubit 0 is |0> and target qubit 1 is |1>
        let mut s = StateVector::basis_state(2, 1).unwrap(); // |01>
        s.apply_gate(&GateOp::cphase0(theta, 0, 1)).unwrap();
        assert!((s.amplitudes()[1] - Complex64::cis(theta)).norm() < 1e-15);

        let mut s = StateVector::basis_state(2, 3).unwrap(); // |11>
        s.apply_gate(&GateOp::cphase0(theta, 0, 1)).unwrap();
        assert_eq!(s.amplitudes()[3], c(1.0, 0.0));
    }

    #[test]
    fn msb_first_indexing() {
        // X on qubit 0 of a 3-qubit register flips the weight-4 bit.
        let mut s = StateVector::basis_state(3, 0).unwrap();
        s.apply_gate(&GateOp::x(0)).unwrap();
        assert_eq!(s.amplitudes()[4], c(1.0, 0.0));
    }

    #[test]
    fn empty_and_involutive_circuits() {
        let mut s = StateVector::basis_state(3, 5).unwrap();
        let orig = s.clone();
        s.apply_circuit(&Circuit::new(3)).unwrap();
        assert_eq!(s, orig);

        let mut c2 = Circuit::new(3);
        c2.push(GateOp::x(0)).unwrap();
        c2.push(GateOp::x(0)).unwrap();
        s.apply_circuit(&c2).unwrap();
        assert_eq!(s, orig);
    }

    #[test]
    fn gate_then_inverse_restores() {
        let mut s = StateVector::basis_state(3, 0).unwrap();
        for q in 0..3 {
            s.apply_gate(&GateOp::h(q)).unwrap();
        }
        let before = s.clone();
        let gates = [
            GateOp::phase(0.4, 1),
            GateOp::cphase(1.1, 0, 2),
            GateOp::multi_cphase(0.9, vec![Control::off(0), Control::on(1)], 2),
            GateOp::swap(0, 2),
            GateOp::global(0.25),
            GateOp::h(1),
            GateOp::x(2),
        ];
        for g in &gates {
            s.apply_gate(g).unwrap();
        }
        for g in gates.iter().rev() {
            s.apply_gate(&g.inverse()).unwrap();
        }
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_marginal() {
        let mut s = StateVector::basis_state(2, 0).unwrap();
        s.apply_gate(&GateOp::h(0)).unwrap();
        // CNOT via H-CP-H
        s.apply_gate(&GateOp::h(1)).unwrap();
        s.apply_gate(&GateOp::cphase(std::f64::consts::PI, 0, 1)).unwrap();
        s.apply_gate(&GateOp::h(1)).unwrap();

        let probs = s.register_distribution(&[0]).unwrap();
        assert!((probs[0] - 0.5).abs() < 1e-12);
        assert!((probs[1] - 0.5).abs() < 1e-12);

        let (cond, p) = s.condition_on_outcome(&[0], 0).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
        assert!((cond.amplitudes()[0].norm() - 1.0).abs() < 1e-12);
        assert!(cond.amplitudes()[1].norm() < 1e-12);
    }

    #[test]
    fn distribution_of_two_qubit_basis() {
        let s = StateVector::basis_state(2, 0).unwrap();
        let probs = s.register_distribution(&[0]).unwrap();
        assert_eq!(probs, vec![1.0, 0.0]);
    }

    #[test]
    fn product_state_conditioning_is_exact() {
        // |10> x |1>: conditioning qubits {0,1} on outcome 2 leaves |1>.
        let s = StateVector::basis_state(3, 0b101).unwrap();
        let (cond, p) = s.condition_on_outcome(&[0, 1], 0b10).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
        assert_eq!(cond.num_qubits(), 1);
        assert!((cond.amplitudes()[1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unreachable_outcome_is_an_error() {
        let s = StateVector::basis_state(2, 0).unwrap();
        match s.condition_on_outcome(&[0], 1) {
            Err(Error::UnreachableOutcome { .. }) => {}
            other => panic!("expected UnreachableOutcome, got {other:?}"),
        }
    }

    #[test]
    fn empty_subset_rejected() {
        let s = StateVector::basis_state(2, 0).unwrap();
        assert!(matches!(s.register_distribution(&[]), Err(Error::EmptySubset)));
    }

    #[test]
    fn invalid_qubit_rejected() {
        let mut s = StateVector::basis_state(2, 0).unwrap();
        assert!(matches!(
            s.apply_gate(&GateOp::x(2)),
            Err(Error::QubitOutOfRange { .. })
        ));
        let mut c3 = Circuit::new(3);
        c3.push(GateOp::x(0)).unwrap();
        assert!(matches!(
            s.apply_circuit(&c3),
            Err(Error::QubitCountMismatch { .. })
        ));
    }

    #[test]
    fn duplicate_control_target_rejected() {
        let mut c2 = Circuit::new(2);
        assert!(matches!(
            c2.push(GateOp::cphase(0.1, 1, 1)),
            Err(Error::DuplicateQubits(_))
        ));
    }

    #[test]
    fn max_arity_report() {
        let mut c3 = Circuit::new(3);
        c3.push(GateOp::h(0)).unwrap();
        assert_eq!(c3.max_arity(), 1);
        c3.push(GateOp::multi_cphase(0.2, vec![Control::on(0), Control::off(1)], 2))
            .unwrap();
        assert_eq!(c3.max_arity(), 3);
        assert_eq!(c3.arity_histogram(), vec![0, 1, 0, 1]);
    }

    #[test]
    fn controlled_circuit_matches_promoted_gates() {
        // Applying a circuit controlled on qubit 0 must equal promoting each
        // gate with an extra polarity-1 control.
        let mut inner = Circuit::new(3);
        inner.push(GateOp::h(1)).unwrap();
        inner.push(GateOp::phase(0.8, 2)).unwrap();
        inner.push(GateOp::cphase(0.5, 1, 2)).unwrap();
        inner.push(GateOp::global(0.3)).unwrap();

        let mut a = StateVector::basis_state(3, 0).unwrap();
        a.apply_gate(&GateOp::h(0)).unwrap();
        let mut b = a.clone();

        a.apply_circuit_controlled(&inner, 0).unwrap();

        b.apply_gate(&GateOp::multi_cphase(0.0, vec![Control::on(0)], 1)).unwrap();
        // promote by hand: H -> controlled-H is not in the gate set, so check
        // against direct slice arithmetic instead.
        let dim = b.dim();
        let m0 = 1usize << 2; // qubit 0 mask in 3 qubits
        let mut expected = b.amplitudes().to_vec();
        {
            // controlled H(1)
            let m = 1usize << 1;
            let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
            for i in 0..dim {
                if i & m0 != 0 && i & m == 0 {
                    let x = expected[i];
                    let y = expected[i | m];
                    expected[i] = (x + y) * inv_sqrt2;
                    expected[i | m] = (x - y) * inv_sqrt2;
                }
            }
            // controlled phase(0.8, 2)
            let m2 = 1usize;
            for (i, e) in expected.iter_mut().enumerate() {
                if i & m0 != 0 && i & m2 != 0 {
                    *e *= Complex64::cis(0.8);
                }
            }
            // controlled cphase(0.5, 1, 2)
            for (i, e) in expected.iter_mut().enumerate() {
                if i & m0 != 0 && i & m != 0 && i & 1 != 0 {
                    *e *= Complex64::cis(0.5);
                }
            }
            // controlled global phase
            for (i, e) in expected.iter_mut().enumerate() {
                if i & m0 != 0 {
                    *e *= Complex64::cis(0.3);
                }
            }
        }
        for (x, y) in a.amplitudes().iter().zip(&expected) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn dump_format() {
        let mut c2 = Circuit::new(2);
        c2.push(GateOp::phase(1.0, 0)).unwrap();
        c2.push(GateOp::cphase0(0.5, 0, 1)).unwrap();
        let dump = c2.dump();
        let lines: Vec<&str> = dump.lines().collect();
        assert_eq!(lines[0], "PHASE 0 [] 1.0000000000000000e0");
        assert_eq!(lines[1], "CPHASE 1 [-0] 5.0000000000000000e-1");
    }
}
