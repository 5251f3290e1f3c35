//! Verification toolkit for fake projective planes.
//!
//! An interval engine derives line-bundle cohomology over the Picard lattice.
//! The other modules build on it, and `replay` turns named results into
//! derivations over cited axioms.

pub mod axioms;
pub mod config;
pub mod cohomology;
pub mod curve;
pub mod derived;
pub mod group_action;
pub mod picard;
pub mod reider;
pub mod replay;
