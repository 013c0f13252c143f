//! W-weighted core-EP inverses of rectangular matrix pairs: the dense kernels,
//! several independent representations, residual verification, a flop-count
//! model and a reproducible benchmark harness.

pub mod bench;
pub mod complexity;
pub mod dense;
pub mod error;
pub mod gen;
pub mod genin;
pub mod io;
pub mod method;
pub mod reps;
pub mod verify;

pub use dense::{Matrix, Tolerance, C64};
pub use error::{Error, Result};
pub use genin::{ExponentChoice, WeightedPair};
pub use method::Method;
