//! Exact symbolic engine for the Lie coalgebra of multiple polylogarithms.
//!
//! The crate computes correlator cobrackets and symbols, quadrangular
//! polylogarithms, cluster integrable symbol spaces of type A, and runs
//! mechanical checks of identities between them. All arithmetic is exact.

pub mod cache;
pub mod checks;
pub mod cluster;
pub mod confspace;
pub mod corr;
pub mod exactalg;
pub mod gangl;
pub mod par;
pub mod quad;
pub mod words;
