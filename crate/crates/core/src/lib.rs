//! Best Frobenius-norm approximation of a real square matrix by the square of
//! a skew-symmetric matrix, and an accelerometer-only angular-velocity
//! estimator built on top of it.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: the dense [`Matrix`] type, Frobenius inner product and norm,
//!   symmetric/skew split, the `star`/`ast` maps between skew 3×3 matrices and
//!   vectors, matrix CSV I/O.
//! * [`spectral`]: cyclic Jacobi eigensolver for symmetric matrices with
//!   eigenvalues returned in non-increasing order.
//! * [`skew_square`]: the skew-square-spectral approximant, membership in the
//!   set of skew squares, and a constructive skew square root.
//! * [`motion`]: fixed-axis rotation profiles and exact body kinematics.
//! * [`measurement`]: synthetic noisy `P` matrix series.
//! * [`pipeline`]: the square-root estimator, the integration baseline, the
//!   relative L² error metric, and the per-instant error bounds.
//! * [`cli`]: the `skewsq` command-line front end.

pub mod cli;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod motion;
pub mod pipeline;
pub mod skew_square;
pub mod spectral;

pub use error::{Error, Result};
pub use linalg::{Matrix, Vector3};
pub use measurement::MeasurementSeries;
pub use motion::{MotionProfile, ProfileKind};
pub use pipeline::{EstimateSeries, Method};
pub use skew_square::SkewSquareResult;
pub use spectral::SpectralDecomp;
