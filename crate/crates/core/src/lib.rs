//! Radical-pair spin dynamics with a relative-entropy measure of
//! singlet-triplet coherence.
//!
//! The crate builds spin Hamiltonians for two electrons coupled to nuclear
//! spins, propagates the density matrix under spin-selective recombination and
//! singlet-triplet dephasing, and evaluates reaction yields, the angular
//! sensitivity of the singlet yield and the reaction-averaged coherence.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coherence;
pub mod compass;
pub mod dynamics;
pub mod eigh;
pub mod error;
pub mod model;
pub mod operator;
pub mod selfcheck;
pub mod spinops;
pub mod superop;

pub use coherence::{st_coherence, CoherenceReport, StProjectors};
pub use dynamics::{propagate, Engine, EvolutionParams, Trajectory};
pub use error::{Error, Result};
pub use model::{initial_state, Coupling, HamiltonianSpec, HyperfineTensor};
pub use operator::{DensityMatrix, Operator, PureState, C64};
pub use spinops::SpinSystem;
