//! Coordinate/momentum meshes, their phase redefinitions, and the QFT.
//!
//! The box is fixed to x in [-1/2, 1/2] with N = 2^s points.  Two mesh
//! conventions are supported:
//!
//! * **Asymmetric**: x_k = k/N - 1/2 and p_j = 2 pi (j - N/2).  The grid
//!   contains x = 0 but is not symmetric about it.
//! * **Symmetric**: x_k = k/N - (1/2 - 1/(2N)) and
//!   p_j = 2 pi (j - (N/2 - 1/2)).  The grid maps to itself under x -> -x and
//!   excludes x = 0, which suits symmetric and singular potentials.
//!
//! Writing the offset as c (1/2 or 1/2 - 1/(2N)), both grids read
//! x_k = k/N - c and p_j = 2 pi (j - N c), and the change of basis between
//! them is the plain DFT *after* a per-index phase redefinition of the
//! wavefunction:
//!
//! ```text
//!   stored amplitude a_k = e^{2 pi i c k} psi(x_k)        (encode)
//!   psi(p_j) = e^{2 pi i c j} e^{-2 pi i N c^2} b_j       (momentum decode)
//! ```
//!
//! where b is the state after the inverse QFT.  For the asymmetric grid the
//! encode factor is just (-1)^k.  The constant e^{-2 pi i N c^2} is a global
//! phase absorbed by the basis redefinition; it is kept in the momentum
//! decode so that the decoded values match the O(N^2) transform sum exactly,
//! and omitted everywhere else.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::register::{Circuit, GateOp, StateVector};

/// Which of the two grid layouts is in use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshKind {
    Asymmetric,
    Symmetric,
}

/// A mesh layout over N = 2^s points on [-1/2, 1/2].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeshConvention {
    kind: MeshKind,
    num_points: usize,
}

impl MeshConvention {
    pub fn new(kind: MeshKind, num_points: usize) -> Result<Self> {
        if num_points < 2 || !num_points.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(num_points));
        }
        Ok(MeshConvention { kind, num_points })
    }

    /// Convenience constructor from the simulation qubit count s.
    pub fn with_qubits(kind: MeshKind, sim_qubits: usize) -> Result<Self> {
        if sim_qubits == 0 {
            return Err(Error::InvalidParameter("need at least one qubit".into()));
        }
        MeshConvention::new(kind, 1usize << sim_qubits)
    }

    pub fn kind(&self) -> MeshKind {
        self.kind
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn qubits(&self) -> usize {
        self.num_points.trailing_zeros() as usize
    }

    /// The grid offset c with x_k = k/N - c and p_j = 2 pi (j - N c).
    pub fn offset(&self) -> f64 {
        match self.kind {
            MeshKind::Asymmetric => 0.5,
            MeshKind::Symmetric => 0.5 - 1.0 / (2.0 * self.num_points as f64),
        }
    }

    /// Coordinate grid points, ascending.
    pub fn mesh_points(&self) -> Vec<f64> {
        let n = self.num_points as f64;
        let c = self.offset();
        (0..self.num_points).map(|k| k as f64 / n - c).collect()
    }

    /// Momentum grid points, ascending.
    pub fn momentum_points(&self) -> Vec<f64> {
        let n = self.num_points as f64;
        let c = self.offset();
        (0..self.num_points)
            .map(|j| TAU * (j as f64 - n * c))
            .collect()
    }

    fn encode_phase(&self, k: usize) -> Complex64 {
        Complex64::cis(TAU * self.offset() * k as f64)
    }

    /// Phase recovering psi(p_j) from the post-inverse-QFT amplitude,
    /// including the constant absorbed by the basis redefinition.
    fn momentum_decode_phase(&self, j: usize) -> Complex64 {
        let c = self.offset();
        Complex64::cis(TAU * c * j as f64 - TAU * self.num_points as f64 * c * c)
    }
}

/// A wavefunction sampled on a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWavefunction {
    convention: MeshConvention,
    values: Vec<Complex64>,
}

impl SampledWavefunction {
    pub fn new(convention: MeshConvention, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != convention.num_points() {
            return Err(Error::InvalidParameter(format!(
                "expected {} samples, got {}",
                convention.num_points(),
                values.len()
            )));
        }
        Ok(SampledWavefunction { convention, values })
    }

    /// Samples f on the grid and normalizes.
    pub fn from_fn(convention: MeshConvention, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values: Vec<Complex64> = convention.mesh_points().iter().map(|&x| f(x)).collect();
        let mut wf = SampledWavefunction::new(convention, values)?;
        wf.normalize()?;
        Ok(wf)
    }

    pub fn convention(&self) -> MeshConvention {
        self.convention
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr();
        if n <= 0.0 {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        let s = 1.0 / n.sqrt();
        for v in &mut self.values {
            *v *= s;
        }
        Ok(())
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// <self|other> on the grid.
    pub fn overlap(&self, other: &SampledWavefunction) -> Complex64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Applies the convention's phase redefinition and loads the samples onto a
/// simulation register.  The input must be normalized.
pub fn encode_wavefunction(samples: &SampledWavefunction) -> Result<StateVector> {
    let norm_sqr = samples.norm_sqr();
    if (norm_sqr - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm_sqr });
    }
    let conv = samples.convention();
    let amps: Vec<Complex64> = samples
        .values()
        .iter()
        .enumerate()
        .map(|(k, v)| conv.encode_phase(k) * v)
        .collect();
    StateVector::from_amplitudes(amps)
}

/// Inverse of [`encode_wavefunction`]: strips the phase redefinition.
pub fn decode_wavefunction(state: &StateVector, conv: MeshConvention) -> Result<SampledWavefunction> {
    if state.dim() != conv.num_points() {
        return Err(Error::QubitCountMismatch {
            circuit: conv.qubits(),
            state: state.num_qubits(),
        });
    }
    let values: Vec<Complex64> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, a)| conv.encode_phase(k).conj() * a)
        .collect();
    SampledWavefunction::new(conv, values)
}

/// Reads momentum-space values psi(p_j) off a state that has been taken to
/// the momentum frame with [`x_to_p`].
pub fn decode_momentum(state: &StateVector, conv: MeshConvention) -> Result<Vec<Complex64>> {
    if state.dim() != conv.num_points() {
        return Err(Error::QubitCountMismatch {
            circuit: conv.qubits(),
            state: state.num_qubits(),
        });
    }
    Ok(state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(j, a)| conv.momentum_decode_phase(j) * a)
        .collect())
}

/// Builds the QFT circuit on the given ordered qubits (`qubits[0]` is the
/// most significant).  Applied to basis state |j> restricted to the subset it
/// produces (1/sqrt(N)) sum_k e^{2 pi i j k / N} |k>; the inverse flag
/// returns the adjoint.  Only Hadamard, controlled-phase and swap gates are
/// used; swaps realize the final bit reversal and the simulator applies them
/// as index permutations.
pub fn qft_circuit(num_qubits: usize, qubits: &[usize], inverse: bool) -> Result<Circuit> {
    if qubits.is_empty() {
        return Err(Error::EmptySubset);
    }
    let s = qubits.len();
    let mut circuit = Circuit::new(num_qubits);
    for i in 0..s {
        circuit.push(GateOp::h(qubits[i]))?;
        for d in 1..(s - i) {
            let theta = TAU / (1u64 << (d + 1)) as f64;
            circuit.push(GateOp::cphase(theta, qubits[i + d], qubits[i]))?;
        }
    }
    for i in 0..s / 2 {
        circuit.push(GateOp::swap(qubits[i], qubits[s - 1 - i]))?;
    }
    if inverse {
        Ok(circuit.inverse())
    } else {
        Ok(circuit)
    }
}

/// Takes an encoded coordinate-frame state to the momentum frame (inverse
/// QFT over all qubits of the state).
pub fn x_to_p(state: &mut StateVector) -> Result<()> {
    let qubits: Vec<usize> = (0..state.num_qubits()).collect();
    let c = qft_circuit(state.num_qubits(), &qubits, true)?;
    state.apply_circuit(&c)
}

/// Takes a momentum-frame state back to the coordinate frame (forward QFT).
pub fn p_to_x(state: &mut StateVector) -> Result<()> {
    let qubits: Vec<usize> = (0..state.num_qubits()).collect();
    let c = qft_circuit(state.num_qubits(), &qubits, false)?;
    state.apply_circuit(&c)
}

/// Direct O(N^2) evaluation of the grid transform
/// psi(p_j) = (1/sqrt(N)) sum_k e^{-2 pi i (j - N c)(k/N - c)} psi(x_k),
/// used as the oracle for the circuit path.
pub fn momentum_transform_direct(samples: &SampledWavefunction) -> Vec<Complex64> {
    let conv = samples.convention();
    let n = conv.num_points();
    let nf = n as f64;
    let c = conv.offset();
    let scale = 1.0 / nf.sqrt();
    (0..n)
        .map(|j| {
            let pj = j as f64 - nf * c;
            samples
                .values()
                .iter()
                .enumerate()
                .map(|(k, v)| Complex64::cis(-TAU * pj * (k as f64 / nf - c)) * v)
                .sum::<Complex64>()
                * scale
        })
        .collect()
}
