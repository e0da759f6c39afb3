//! The five spectrum panels on synthetic data: SPD matrices, unit-norm
//! descriptors, lines, 15-dimensional subspaces, and a neighbor graph.

use std::fmt::Write as _;
use std::path::Path;

use geokernel_core::spectral::describe_sweep;
use geokernel_core::{GrassmannMetric, SpaceSpec, SpdMetric};

use crate::error::Result;
use crate::experiment::{
    run_experiment, write_file, write_result, ExperimentConfig, ExperimentResult,
};
use crate::sampling::{ClusterCloud, GraphRule, GraphSampler};

pub const SUMMARY_FILE: &str = "summary.txt";

pub fn panel_configs(seed: u64) -> Vec<ExperimentConfig> {
    let spd = |metric| SpaceSpec::Spd { size: 3, metric };
    let lines = |metric| SpaceSpec::Grassmann {
        ambient: 50,
        rank: 1,
        metric,
    };
    vec![
        ExperimentConfig::new("panel_a_spd", spd(SpdMetric::AffineInvariant), 100, seed)
            .with_variants(SpdMetric::ALL.iter().map(|&m| spd(m)).collect()),
        ExperimentConfig::new(
            "panel_b_sphere",
            SpaceSpec::Sphere { ambient: 64 },
            200,
            seed,
        ),
        ExperimentConfig::new(
            "panel_c_grassmann_k1",
            lines(GrassmannMetric::Intrinsic),
            100,
            seed,
        )
        .with_variants(GrassmannMetric::ALL.iter().map(|&m| lines(m)).collect()),
        ExperimentConfig::new(
            "panel_d_grassmann_k15",
            SpaceSpec::Grassmann {
                ambient: 100,
                rank: 15,
                metric: GrassmannMetric::Intrinsic,
            },
            100,
            seed,
        ),
        ExperimentConfig::new("panel_e_graph", SpaceSpec::Graph, 124, seed).with_graph(
            GraphSampler {
                cloud: ClusterCloud::default(),
                rule: GraphRule::ConnectivityRadius,
            },
        ),
    ]
}

/// Human-readable verdicts of one experiment.
pub fn summarize(result: &ExperimentResult) -> String {
    let config = result.config();
    let mut out = String::new();
    writeln!(
        out,
        "{}: {} n={} seed={}",
        config.name, config.space, config.n, config.seed
    )
    .unwrap();
    for s in &result.sweeps {
        writeln!(
            out,
            "  {} q={}: {}",
            s.variant,
            s.sweep.q,
            describe_sweep(&s.sweep)
        )
        .unwrap();
    }
    for c in &result.cnd {
        writeln!(
            out,
            "  {} metric: {} (deflated min eig {:e})",
            c.variant, c.check.verdict, c.check.witness
        )
        .unwrap();
    }
    out
}

/// Runs every panel, writing per-panel results and a summary into `dir`.
pub fn reproduce(seed: u64, dir: &Path) -> Result<Vec<ExperimentResult>> {
    let results = panel_configs(seed)
        .iter()
        .map(run_experiment)
        .collect::<Result<Vec<_>>>()?;
    let mut summary = String::new();
    for r in &results {
        write_result(r, dir)?;
        summary.push_str(&summarize(r));
    }
    write_file(&dir.join(SUMMARY_FILE), &summary)?;
    Ok(results)
}
