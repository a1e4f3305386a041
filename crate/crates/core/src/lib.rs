//! Balanced locally repairable codes built from partial geometries.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: GF(2) matrices (rank, RREF, nullspace) and small finite fields.
//! - [`geometry`]: partial geometries, the axiom validator, and generalized
//!   quadrangle constructors.
//! - [`code`]: the binary code whose parity checks are the lines of a geometry.
//! - [`repair`]: repair degree, alternativity, local repair tolerance, the repair
//!   executor and an availability simulator.
//! - [`bounds`]: the rank expression ϑ, rate bounds, and the parameter catalog.
//! - [`cli`]: the command-line front end.

pub mod algebra;
pub mod bounds;
pub mod cli;
pub mod code;
pub mod geometry;
pub mod repair;
