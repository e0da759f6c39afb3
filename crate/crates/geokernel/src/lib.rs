//! Experiment harness for geodesic exponential kernels: seeded samplers,
//! neighbor graphs, spectrum experiments with JSON and CSV output, and
//! distance-matrix file input. The `geokernel` binary wraps these.

pub mod error;
pub mod experiment;
pub mod io;
pub mod panels;
pub mod sampling;

pub use error::{HarnessError, Result};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentResult};
pub use geokernel_core;
pub use sampling::{build_neighbor_graph, sample_points, sample_space, GraphRule, GraphSampler};
