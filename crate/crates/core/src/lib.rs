//! Exact Hurwitz numbers of Riemann and Klein surfaces.
//!
//! Character sums over S_d, Schur functions in power sums, hypergeometric
//! generating series, a permutation-counting oracle and Monte Carlo checks of
//! the matrix-integral identities that produce those series.

pub mod characters;
pub mod error;
pub mod genfun;
pub mod hurwitz;
pub mod mc;
pub mod oracle;
pub mod partition;
pub mod scalar;
pub mod selftest;
pub mod symfunc;

pub use error::{Error, Result};
pub use hurwitz::{hurwitz, Cutoff, HurwitzQuery, HurwitzResult};
pub use oracle::SurfacePresentation;
pub use partition::{partitions_of, CycleClass, FrobeniusCoords, Partition};
pub use scalar::{format_rational, parse_rational, Rational, Scalar};
pub use symfunc::{PowerAlphabet, SparseSymPoly};
