//! Exact character calculus on the three-dimensional torus.

mod frac;
mod laurent;
mod vertex;
mod weight;

use thiserror::Error;

pub use frac::FracChar;
pub use laurent::{Exponent, Laurent2, Laurent3, LaurentPoly};
pub use vertex::{
    char_parities, diagram_gf, edge_char, edge_e, embed_transverse, restrict_cy, taylor_poincare,
    vertex_q, vertex_v, EdgeFrame, Parities, VertexGF,
};
pub use weight::{weight_product, Frame, WeightProduct};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    /// A division that must be exact left a remainder. Signals a bug, never
    /// bad input.
    #[error("not divisible by (1 - t{}): remainder {remainder}", axis + 1)]
    NotDivisible { axis: usize, remainder: String },
    #[error("character is not a Laurent polynomial: denominator exponents {den:?}, numerator {num}")]
    NotLaurent { den: [u32; 3], num: String },
    #[error("character has a zero weight with multiplicity {multiplicity}")]
    ZeroWeight { multiplicity: String },
    #[error("weight {weight:?} vanishes at the evaluation point")]
    VanishingFactor { weight: Vec<i64> },
    #[error("edge frame ({m}, {mprime}) is not Calabi-Yau")]
    NonCalabiYauFrame { m: i64, mprime: i64 },
}
