//! Geodesic distances on a catalog of metric spaces, geodesic exponential
//! kernels `exp(-λ d(x, y)^q)`, and finite-sample checks of positive
//! definiteness (PD) and conditional negative definiteness (CND).
//!
//! The crate is `no_std` and only needs `alloc`. Elementary functions come
//! from `libm`, so results do not depend on the platform's libm.
//!
//! Module map:
//! - [`linalg`]: dense matrices, symmetric eigensolver, Cholesky, SVD values.
//! - [`space`]: space descriptions, points, point sets and distance dispatch.
//! - [`manifolds`]: closed-form distances and geodesic interpolation.
//! - [`kernels`]: distance and Gram matrices, kernel constructions.
//! - [`spectral`]: eigenspectra, PD/CND verdicts, λ-sweeps.
//! - [`metric_props`]: metric-axiom scans, geodesic checks, CAT(κ) checks.

#![no_std]
// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod kernels;
pub mod linalg;
pub mod manifolds;
pub mod metric_props;
pub mod space;
pub mod spectral;

pub use error::{Error, Result};
pub use kernels::{DistanceMatrix, GramMatrix, KernelSpec};
pub use linalg::Matrix;
pub use space::{GrassmannMetric, Point, PointSet, SpaceKind, SpaceSpec, SpdMetric};
pub use spectral::{LambdaGrid, LambdaSweep, SpectrumReport, SweepVerdict, Verdict};
