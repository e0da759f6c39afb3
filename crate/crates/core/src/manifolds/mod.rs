//! Closed-form distances and geodesic interpolation for each space kind.

pub mod edit;
pub mod graph;
pub mod grassmann;
pub mod hyperbolic;
pub mod lq;
pub mod spd;
pub mod sphere;
pub mod tree;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::space::{self, Point, SpaceSpec, SpdMetric};

pub use edit::edit_distance;
pub use graph::{graph_shortest_paths, WeightedGraph};
pub use grassmann::{grassmann_distance, principal_angles};
pub use hyperbolic::hyperbolic_distance;
pub use lq::lq_distance;
pub use spd::spd_distance;
pub use sphere::{projective_distance, sphere_distance};
pub use tree::tree_distance;

pub fn euclidean_distance(x: &[f64], y: &[f64]) -> f64 {
    libm::sqrt(x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum())
}

/// Point at arc-length fraction `t` along the minimizing geodesic from `x`
/// to `y`, so that `d(x, γ) = t·d(x, y)`.
///
/// Supported for euclidean, sphere, hyperbolic and SPD spaces under the
/// Frobenius, log-Euclidean and affine-invariant metrics.
pub fn geodesic_interpolate(space: &SpaceSpec, x: &Point, y: &Point, t: f64) -> Result<Point> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "must lie in [0, 1]",
        });
    }
    space::validate_point(space, x)?;
    space::validate_point(space, y)?;
    if t == 0.0 {
        return Ok(x.clone());
    }
    match (space, x, y) {
        (SpaceSpec::Euclidean { .. }, Point::Vector(x), Point::Vector(y)) => Ok(Point::Vector(
            x.iter()
                .zip(y)
                .map(|(a, b)| a + t * (b - a))
                .collect::<Vec<_>>(),
        )),
        (SpaceSpec::Sphere { .. }, Point::Vector(x), Point::Vector(y)) => {
            sphere::interpolate(x, y, t).map(Point::Vector)
        }
        (SpaceSpec::Hyperbolic { .. }, Point::Vector(x), Point::Vector(y)) => {
            Ok(Point::Vector(hyperbolic::interpolate(x, y, t)))
        }
        (SpaceSpec::Spd { metric, .. }, Point::Matrix(a), Point::Matrix(b))
            if *metric != SpdMetric::Fisher =>
        {
            spd::interpolate(a, b, *metric, t).map(Point::Matrix)
        }
        _ => Err(Error::Unsupported {
            operation: "geodesic interpolation",
            kind: space.kind(),
        }),
    }
}
