//! Numerical Hardy-space toolkit for hypersurface-deleted model domains.
//!
//! The library evaluates the closed-form Szegő and Cauchy-type kernels of
//! punctured disks, conformal images of the disk, `𝔻×𝔻*`, and the
//! power-generalized Hartogs triangles; builds boundary quadrature grids for
//! those domains and for egg domains under their natural boundary measures;
//! and implements the associated filtered Hardy-space machinery: Fourier
//! multiplier projections, reproducing-identity evaluation, monomial norms,
//! membership tests, and filtration-stabilization diagnostics.
//!
//! Everything is double-precision and closed-form or spectrally convergent;
//! values are immutable after construction and safe to share across threads.

// Validation guards are written `!(x > 0.0)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod domains;
pub mod eggs;
pub mod error;
pub mod kernels;
pub mod projections;
pub mod rigidity;
pub mod series;

pub use error::{Error, Result};
