//! Complex Lie algebras given by structure constants: validation, the
//! `GL_n(ℂ)` action and its infinitesimal form `π`, pairings, derivations and
//! a catalog of examples.

pub mod action;
pub mod bracket;
pub mod catalog;
pub mod derivations;
pub mod descriptor;
pub mod random;

pub use action::{act, bracket_inner, endo_inner, pi_action};
pub use bracket::BracketTensor;
pub use derivations::derivation_space;
pub use descriptor::{validate, AlgebraDescriptor};
