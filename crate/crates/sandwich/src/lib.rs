//! Exact rational analysis of semicontinuous functions on desk-scale models.
//!
//! Everything here runs on exact `p/q` arithmetic: order comparisons are
//! decided, not approximated, and every constructed object (envelopes,
//! inserted functions, extensions, lattice expressions) is verified against
//! its defining inequalities before it is returned.
//!
//! The crate is organized around the pipeline it implements:
//!
//! - [`funcspace`]: piecewise-linear, eventually periodic, and finite
//!   function types with lattice and norm structure.
//! - [`semicont`]: semicontinuity predicates, upper/lower envelopes, and
//!   Lipschitz regularization families (the constructive meet/join
//!   decompositions of semicontinuous functions).
//! - [`compactc`]: finite-subfamily extraction from families of continuous
//!   functions whose meet and join are separated by a gap.
//! - [`insertion`]: the gap insertion oracle and the certified dyadic
//!   iteration that sandwiches a continuous function between an upper
//!   semicontinuous floor and a lower semicontinuous ceiling.
//! - [`extension`]: extension operators from a dense subspace to a
//!   compactification, level-set closure obstructions, and the end-to-end
//!   insertion pipeline.
//! - [`stonew`]: lattice Stone-Weierstrass machinery on finite spaces.
//! - [`cli`]: a structured problem format and the command driver behind the
//!   `sandwich` binary.
//!
//! The `examples/` directory of this crate walks through each capability;
//! `cargo run --example insert_between` is a good place to start.

pub mod cli;
pub mod compactc;
mod error;
pub mod extension;
pub mod funcspace;
pub mod insertion;
pub mod semicont;
pub mod stonew;

pub use error::{Error, Result};
pub use funcspace::{FiniteFunction, PLFunction, Rat, SeqFunction};
