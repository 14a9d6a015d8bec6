//! Finite-dimensional operator theory toolkit.
//!
//! Polydisc supremum norms, von Neumann inequality experiments with
//! Varopoulos operators, Parrott completions, one- and two-variable
//! Carathéodory–Fejér interpolation, two-variable Hankel operators and
//! operator-space structures on ℓ¹(n), all at finite truncation scale.

pub mod bounds;
pub mod cf;
pub mod error;
pub mod hankel;
pub mod matrix;
pub mod multop;
pub mod opspace;
pub mod parrott;
pub mod parse;
pub mod poly;
pub mod tolerance;
pub mod torus;
pub mod varopoulos;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};
pub use multop::{Laurent, TruncatedMultOp};
pub use poly::{CommutingTuple, MatrixPoly, MultiPoly};
pub use tolerance::Tolerance;

/// Sizes the global worker pool used by grid sweeps. Must run before the
/// first parallel call; later calls fail.
pub fn configure_threads(n: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::PreconditionFailed(e.to_string()))
}
