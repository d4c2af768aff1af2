//! Quantum-circuit simulation of one-dimensional Schrödinger eigenproblems.
//!
//! The crate builds explicit one- and two-qubit gate circuits that Trotterize
//! the time evolution e^{-iHt} for H = p^2/2 + V(x) on a 2^s-point grid over
//! [-1/2, 1/2], runs phase estimation against those circuits to read energy
//! spectra out of a work register, and projects approximate eigenfunctions
//! from the post-measurement simulation register.  Harmonic-oscillator,
//! square-well and Coulomb potentials are built in, together with analytic
//! references and a dense-matrix oracle for validation.
//!
//! Modules follow the pipeline:
//!
//! * [`register`] — state vectors, gates, circuits.
//! * [`mesh_qft`] — coordinate/momentum grids, phase redefinitions, QFT.
//! * [`evolution`] — Trotter-step circuit builders for the three potentials.
//! * [`phase_estimation`] — the full spectrum/eigenfunction pipeline.
//! * [`reference`] — analytic levels, dense Hamiltonian oracle, initial states.
//! * [`experiments`] — named parameter presets for reproducible runs.
//! * [`validate`] — the self-check battery behind `schroq validate`.

pub mod error;
pub mod evolution;
pub mod experiments;
pub mod mesh_qft;
pub mod phase_estimation;
pub mod reference;
pub mod register;
pub mod validate;

pub use error::{Error, Result};
pub use evolution::{PotentialSpec, TrotterConfig};
pub use mesh_qft::{MeshConvention, MeshKind, SampledWavefunction};
pub use phase_estimation::{PhaseAnchor, PhaseEstimationConfig, SpectrumBin, SpectrumResult};
pub use register::{Circuit, Control, GateOp, StateVector};
