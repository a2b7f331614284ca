//! Exact-arithmetic tools for designs in Hamming association schemes.
//!
//! The crate derives full association-scheme parameter sets from Krein
//! arrays, verifies orthogonal arrays and their fiber subschemes by
//! explicit counting, and decides integer feasibility of triple
//! intersection number systems. All derivations run on arbitrary-precision
//! rationals; there is no floating point anywhere.

pub mod cli;
pub mod designs;
pub mod exactmath;
pub mod hamming;
pub mod scheme;
pub mod triple;

pub use designs::{ExplicitScheme, PointSet};
pub use exactmath::{Matrix, Rat};
pub use hamming::HammingContext;
pub use scheme::{KreinArray, SchemeParameters};
