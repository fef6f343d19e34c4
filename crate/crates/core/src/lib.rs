//! Decidable bornological ideal-convergence checks for nets of partial maps
//! between finite metric spaces.
//!
//! Everything is exact and finite: spaces carry rational distance matrices,
//! index sets are explicit finite preorders, ideals and bornologies are
//! explicit subset families, and every epsilon-quantified convergence
//! predicate is decided on the positive distance spectrum. On top of the
//! checkers sits a certification harness that runs the structural
//! equivalences between the different convergence formulations as properties
//! over seeded random instances and serializes any counterexample it finds.

pub mod bornology;
pub mod convergence;
pub mod error;
pub mod harness;
pub mod instance_file;
pub mod metric;
pub mod order;
pub mod partial_map;
pub mod rational;
pub mod subset;

pub use error::{Diagnostic, Error};
pub use rational::{Extended, Rational};
pub use subset::Subset;
