//! Exhaustive verification tools for quadratic APN functions over GF(2^n).
//!
//! The crate builds the quadrinomial family over GF(2^{3k}), checks
//! differential uniformity with two independent verifiers, computes Walsh
//! spectra and code-based CCZ invariants, and replays each step of the APN
//! argument for the family at concrete parameters.

pub mod affine;
pub mod analysis;
pub mod code;
pub mod error;
pub mod family;
pub mod field;
pub mod function;
pub mod io;
pub mod par;
pub mod proof;
pub mod workflow;

pub use error::{Error, Result};
pub use field::{Elem, Exp, FieldCtx, FieldSpec};
pub use function::{UnivariatePoly, VBFunction};
