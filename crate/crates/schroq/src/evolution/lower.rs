//! Gate-arity lowering.
//!
//! Diagonal phase terms over three bits come out of the synthesis as
//! controlled-phase gates with two controls.  A doubly controlled phase is
//! rewritten with the standard identity (phases halve, the middle control is
//! toggled through the first)
//!
//! ```text
//!   CCP(theta; a, b -> t) = CP(theta/2; b -> t) CX(a -> b)
//!                           CP(-theta/2; b -> t) CX(a -> b)
//!                           CP(theta/2; a -> t)
//! ```
//!
//! with the controlled-NOT expressed as H(b) CP(pi; a -> b) H(b), keeping
//! every emitted gate inside the one- and two-qubit set.  Polarity-0
//! controls are folded to polarity 1 by X conjugation first.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::register::{Circuit, Control, GateOp};

/// Rewrites every polarity-0 control into X-conjugated polarity-1 form.
/// The unitary is unchanged; only the gate inventory differs.
pub fn rewrite_negative_controls(circuit: &Circuit) -> Circuit {
    let mut out = Circuit::new(circuit.num_qubits());
    for gate in circuit.gates() {
        match gate {
            GateOp::ControlledPhase { theta, controls, target }
                if controls.iter().any(|c| !c.polarity) =>
            {
                let flips: Vec<usize> = controls
                    .iter()
                    .filter(|c| !c.polarity)
                    .map(|c| c.qubit)
                    .collect();
                for &q in &flips {
                    out.push(GateOp::x(q)).expect("validated by source circuit");
                }
                out.push(GateOp::multi_cphase(
                    *theta,
                    controls.iter().map(|c| Control::on(c.qubit)).collect(),
                    *target,
                ))
                .expect("validated by source circuit");
                for &q in &flips {
                    out.push(GateOp::x(q)).expect("validated by source circuit");
                }
            }
            other => out.push(other.clone()).expect("validated by source circuit"),
        }
    }
    out
}

fn push_cnot(out: &mut Circuit, control: usize, target: usize) -> Result<()> {
    out.push(GateOp::h(target))?;
    out.push(GateOp::cphase(PI, control, target))?;
    out.push(GateOp::h(target))
}

/// Lowers every gate of arity three to one- and two-qubit gates.  Gates that
/// are already one- or two-qubit pass through untouched (including
/// polarity-0 single controls, which the simulator supports natively).
pub fn lower_to_two_qubit(circuit: &Circuit) -> Result<Circuit> {
    let mut out = Circuit::new(circuit.num_qubits());
    for gate in circuit.gates() {
        if gate.arity() <= 2 {
            out.push(gate.clone())?;
            continue;
        }
        let GateOp::ControlledPhase { theta, controls, target } = gate else {
            return Err(Error::Unsupported(format!(
                "cannot lower gate of arity {}",
                gate.arity()
            )));
        };
        if controls.len() != 2 {
            return Err(Error::Unsupported(format!(
                "lowering supports at most two controls, got {}",
                controls.len()
            )));
        }
        // fold polarity-0 controls to polarity 1
        let flips: Vec<usize> = controls
            .iter()
            .filter(|c| !c.polarity)
            .map(|c| c.qubit)
            .collect();
        for &q in &flips {
            out.push(GateOp::x(q))?;
        }
        let (a, b) = (controls[0].qubit, controls[1].qubit);
        let half = theta / 2.0;
        out.push(GateOp::cphase(half, b, *target))?;
        push_cnot(&mut out, a, b)?;
        out.push(GateOp::cphase(-half, b, *target))?;
        push_cnot(&mut out, a, b)?;
        out.push(GateOp::cphase(half, a, *target))?;
        for &q in &flips {
            out.push(GateOp::x(q))?;
        }
    }
    Ok(out)
}
