//! Exact representations of bounded real-valued functions on the three desk
//! models — a closed rational interval (piecewise linear with jumps), the
//! naturals with an optional point at infinity (eventually periodic), and a
//! finite discrete space — together with the lattice, vector-space, and
//! uniform-norm structure of the bounded function ring.

mod finite;
mod pl;
mod rational;
mod seq;

pub use finite::{FiniteFunction, FiniteLeOutcome};
pub use pl::{Breakpoint, LeOutcome, PLFunction, Piece};
pub use rational::Rat;
pub use seq::{SeqFunction, SeqLeOutcome};
