//! Binary linear codes of dimension five described by defining vectors:
//! column multiplicities over the points of the projective space.

pub mod analysis;
pub mod certify;
pub mod defining;
pub mod enumeration;
pub mod equivalence;
pub mod gf2;
pub mod tables;

pub use analysis::{
    hull_dimension, hull_dimension_of, weight_enumerator, CodeProfile, WeightEnumerator,
};
pub use defining::{weight_vector, DefiningVector, TypeSignature, WeightVector};
pub use gf2::BitMatrix;
