//! Runs the book's code blocks as doc tests.
//!
//! mdbook cannot execute snippets against a dependency, so each chapter is
//! included here as module documentation and `cargo test --doc` picks the
//! ```rust fences up.  One module per chapter keeps failures attributable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/states-and-gates.md")]
pub mod states_and_gates {}

#[doc = include_str!("../../../book/src/meshes-and-qft.md")]
pub mod meshes_and_qft {}

#[doc = include_str!("../../../book/src/trotter-circuits.md")]
pub mod trotter_circuits {}

#[doc = include_str!("../../../book/src/phase-estimation.md")]
pub mod phase_estimation {}

#[doc = include_str!("../../../book/src/reference-oracles.md")]
pub mod reference_oracles {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
