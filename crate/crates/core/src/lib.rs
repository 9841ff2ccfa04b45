//! Linear masking schemes against probing attacks and tamper-resistant codes
//! against combined probing and forcing attacks, over GF(2).
//!
//! * [`gf2`]: bit-packed vectors and matrices, rank, column independence,
//!   systematic forms and cyclic codes.
//! * [`codebook`]: named code families, the table of maximum OPS lengths and
//!   the Gilbert-Varshamov test.
//! * [`masker`]: OPS masking schemes, encoding, and probing-security checks
//!   by rank criterion and by exhaustive mutual information.
//! * [`leakage`]: worst-case and empirical leakage as a function of the number
//!   of probes.
//! * [`otr`]: tamper-resistant codes, forcing-attack sweeps and the
//!   construction search.

pub mod codebook;
pub mod error;
pub mod gf2;
pub mod leakage;
pub mod masker;
pub mod otr;
pub mod reference;

pub use error::{CodeError, Result};
pub use gf2::{BitMatrix, BitVector};
