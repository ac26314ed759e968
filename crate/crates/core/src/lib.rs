//! Entanglement gain under non-selective projective measurements.
//!
//! A non-selective von Neumann measurement along a basis `{|ψ_j⟩}` maps a
//! bipartite state ρ to the dephased mixture ρ' = Σ_j Π_j ρ Π_j. Unlike
//! selective measurements, this channel can *increase* entanglement for
//! suitable (state, basis) pairs. This crate provides:
//!
//! - core bipartite state types and linear algebra ([`qstate`]),
//! - entanglement quantifiers built on the partial transpose ([`entanglement`]),
//! - the non-selective channel, its mixed-unitary realization, and the
//!   local-unitary reduction of maximally entangled two-qubit bases
//!   ([`measurement`]),
//! - constructive recipes: a state that gains for a given measurement, a
//!   measurement that gains for a given state, and the closed-form two-qubit
//!   theory of optimal gain ([`constructions`]),
//! - an exactly solvable dephasing model that converges to the channel
//!   exponentially fast ([`dynamics`]),
//! - reproducible Haar-random sampling experiments ([`montecarlo`]).

pub mod constructions;
pub mod dynamics;
pub mod entanglement;
mod error;
pub(crate) mod linalg;
pub mod measurement;
pub mod montecarlo;
pub mod qstate;

pub use error::{Error, Result};
pub use qstate::{BipartiteDims, DensityMatrix, Ket, SchmidtForm};

/// Dense complex matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;
/// Dense complex vector used throughout the crate.
pub type CVector = nalgebra::DVector<num_complex::Complex64>;
