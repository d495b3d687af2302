//! Quantum knots: mosaic basis states acted on by an ambient group of local
//! moves, knot-invariant observables, and knots realized as nodal lines of
//! complex fields together with their Schrödinger evolution.

pub mod ambient;
pub mod hilbert;
pub mod mosaic;
pub mod par;
pub mod invariants;
pub mod classify;
pub mod nodal;
pub mod evolve;
