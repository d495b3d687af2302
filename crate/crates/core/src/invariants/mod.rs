//! Mosaic-to-diagram conversion and exact Kauffman bracket and Jones
//! polynomials.

mod bracket;
mod diagram;
mod poly;

pub use bracket::{bracket, jones, jones_of_mosaic, BracketSettings, DEFAULT_CROSSING_CAP};
pub use diagram::{GaussPassage, PdCrossing, PlanarDiagram};
pub(crate) use diagram::UnionFind;
pub use poly::{LaurentPoly, Variable};

use thiserror::Error;

use crate::mosaic::MosaicError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvariantError {
    #[error(transparent)]
    Mosaic(#[from] MosaicError),
    #[error("mosaic has no strands, so it has no diagram")]
    NoComponents,
    #[error("diagram has {count} crossings, above the state-sum cap of {cap}")]
    TooManyCrossings { count: usize, cap: usize },
    #[error("malformed diagram: {0}")]
    Malformed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cannot evaluate a polynomial with negative exponents at 0")]
    PoleAtZero,
    #[error("Jones polynomial has an odd power of t^(1/2), so it has no value at negative t")]
    HalfIntegerExponent,
}

/// Jones polynomial in t for a knot: exponents in t^(1/2) units halved.
pub fn jones_in_t(v: &LaurentPoly) -> Result<LaurentPoly, InvariantError> {
    v.compress(2).ok_or(InvariantError::HalfIntegerExponent)
}
