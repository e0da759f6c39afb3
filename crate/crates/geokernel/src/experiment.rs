//! Spectrum experiments: sample once, evaluate every metric variant at
//! every `(q, λ)` cell, and persist the results.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use geokernel_core::kernels::gram_matrix;
use geokernel_core::spectral::{cnd_verdict, CndCheck};
use geokernel_core::{
    DistanceMatrix, KernelSpec, LambdaGrid, LambdaSweep, SpaceSpec, SpectrumReport,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::sampling::{describe_sampler, sample_space, GraphRule, GraphSampler};

pub const CSV_HEADER: &str = "space,variant,q,lambda,eig_index,eigenvalue";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// File stem of the written results.
    pub name: String,
    pub space: SpaceSpec,
    /// Metric variants evaluated on the same sample; empty means `space`.
    #[serde(default)]
    pub variants: Vec<SpaceSpec>,
    pub n: usize,
    pub seed: u64,
    pub q_values: Vec<f64>,
    pub grid: LambdaGrid,
    #[serde(default)]
    pub graph: GraphSampler,
}

impl ExperimentConfig {
    /// Config with `q ∈ {1, 2}` and the default λ grid.
    pub fn new(name: impl Into<String>, space: SpaceSpec, n: usize, seed: u64) -> Self {
        Self {
            name: name.into(),
            space,
            variants: Vec::new(),
            n,
            seed,
            q_values: vec![1.0, 2.0],
            grid: LambdaGrid::default(),
            graph: GraphSampler::default(),
        }
    }

    pub fn with_variants(mut self, variants: Vec<SpaceSpec>) -> Self {
        self.variants = variants;
        self
    }

    pub fn with_q_values(mut self, q_values: Vec<f64>) -> Self {
        self.q_values = q_values;
        self
    }

    pub fn with_grid(mut self, grid: LambdaGrid) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_graph(mut self, graph: GraphSampler) -> Self {
        self.graph = graph;
        self
    }

    /// Variants actually evaluated.
    pub fn effective_variants(&self) -> Vec<SpaceSpec> {
        if self.variants.is_empty() {
            vec![self.space]
        } else {
            self.variants.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.space.validate()?;
        if self.n < 2 {
            return Err(HarnessError::Config(format!(
                "n must be at least 2, got {}",
                self.n
            )));
        }
        if self.q_values.is_empty() {
            return Err(HarnessError::Config("at least one q is required".into()));
        }
        for &q in &self.q_values {
            KernelSpec::new(1.0, q)?;
        }
        // the grid is validated on construction and deserialization
        for v in &self.variants {
            v.validate()?;
            if !same_underlying_space(v, &self.space) {
                return Err(HarnessError::Config(format!(
                    "variant {v} is not a metric of {}",
                    self.space
                )));
            }
        }
        match self.graph.rule {
            GraphRule::Epsilon(e) if e.is_nan() || e <= 0.0 => {
                Err(HarnessError::Config("ε must be positive".into()))
            }
            GraphRule::Knn(0) => Err(HarnessError::Config("k must be at least 1".into())),
            _ => Ok(()),
        }
    }
}

fn same_underlying_space(a: &SpaceSpec, b: &SpaceSpec) -> bool {
    match (*a, *b) {
        (SpaceSpec::Spd { size: x, .. }, SpaceSpec::Spd { size: y, .. }) => x == y,
        (
            SpaceSpec::Grassmann {
                ambient: a1,
                rank: r1,
                ..
            },
            SpaceSpec::Grassmann {
                ambient: a2,
                rank: r2,
                ..
            },
        ) => a1 == a2 && r1 == r2,
        _ => a == b,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config: ExperimentConfig,
    pub library_version: String,
    pub sampler: String,
}

/// Gram spectrum of one `(variant, q, λ)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub variant: String,
    pub q: f64,
    pub lambda: f64,
    pub report: SpectrumReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantSweep {
    pub variant: String,
    pub sweep: LambdaSweep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantCnd {
    pub variant: String,
    pub check: CndCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub provenance: Provenance,
    /// Ordered by variant, then q, then λ.
    pub reports: Vec<CellReport>,
    pub sweeps: Vec<VariantSweep>,
    pub cnd: Vec<VariantCnd>,
}

impl ExperimentResult {
    pub fn config(&self) -> &ExperimentConfig {
        &self.provenance.config
    }

    pub fn sweep(&self, variant: &str, q: f64) -> Option<&LambdaSweep> {
        self.sweeps
            .iter()
            .find(|s| s.variant == variant && s.sweep.q == q)
            .map(|s| &s.sweep)
    }

    pub fn cnd(&self, variant: &str) -> Option<&CndCheck> {
        self.cnd
            .iter()
            .find(|c| c.variant == variant)
            .map(|c| &c.check)
    }
}

/// Pairwise distances of one sample under every configured variant.
pub fn variant_distances(config: &ExperimentConfig) -> Result<Vec<(SpaceSpec, DistanceMatrix)>> {
    config.validate()?;
    let sample = sample_space(&config.space, config.n, config.seed, &config.graph)?;
    config
        .effective_variants()
        .into_par_iter()
        .map(|v| {
            let d = sample.with_space(v)?.pairwise_distances()?;
            Ok((v, d))
        })
        .collect()
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let distances = variant_distances(config)?;
    let cells: Vec<(usize, f64, f64)> = (0..distances.len())
        .flat_map(|v| {
            config.q_values.iter().flat_map(move |&q| {
                config
                    .grid
                    .values()
                    .iter()
                    .map(move |&lambda| (v, q, lambda))
            })
        })
        .collect();
    let reports = cells
        .into_par_iter()
        .map(|(v, q, lambda)| {
            let (space, d) = &distances[v];
            let g = gram_matrix(d, KernelSpec::new(lambda, q)?);
            Ok(CellReport {
                variant: space.variant_name().to_string(),
                q,
                lambda,
                report: SpectrumReport::for_gram(&g, None)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let per_sweep = config.grid.len();
    let sweeps = reports
        .chunks(per_sweep)
        .map(|chunk| {
            let spectra: Vec<SpectrumReport> = chunk.iter().map(|c| c.report.clone()).collect();
            VariantSweep {
                variant: chunk[0].variant.clone(),
                sweep: LambdaSweep::from_reports(config.grid.clone(), chunk[0].q, &spectra),
            }
        })
        .collect();
    let cnd = distances
        .par_iter()
        .map(|(space, d)| {
            Ok(VariantCnd {
                variant: space.variant_name().to_string(),
                check: cnd_verdict(d.entries(), None)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExperimentResult {
        provenance: Provenance {
            config: config.clone(),
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            sampler: describe_sampler(&config.space, &config.graph),
        },
        reports,
        sweeps,
        cnd,
    })
}

/// Structured result document (JSON), newline terminated.
pub fn to_structured(result: &ExperimentResult) -> Result<String> {
    let mut s = serde_json::to_string_pretty(result)?;
    s.push('\n');
    Ok(s)
}

pub fn from_structured(text: &str) -> Result<ExperimentResult> {
    Ok(serde_json::from_str(text)?)
}

/// Plot-data table: one row per eigenvalue of every cell, indices from 1.
pub fn to_csv(result: &ExperimentResult) -> String {
    let space = result.config().space.kind().name();
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for cell in &result.reports {
        for (i, e) in cell.report.eigenvalues.iter().enumerate() {
            writeln!(
                out,
                "{space},{},{},{:e},{},{:e}",
                cell.variant,
                cell.q,
                cell.lambda,
                i + 1,
                e
            )
            .expect("writing to a String cannot fail");
        }
    }
    out
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}

/// Writes `<name>.json` and `<name>.csv` into `dir`, creating it if
/// needed. Returns the two paths.
pub fn write_result(result: &ExperimentResult, dir: &Path) -> Result<[PathBuf; 2]> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let name = &result.config().name;
    let json = dir.join(format!("{name}.json"));
    let csv = dir.join(format!("{name}.csv"));
    write_file(&json, &to_structured(result)?)?;
    write_file(&csv, &to_csv(result))?;
    Ok([json, csv])
}

pub fn read_result(path: &Path) -> Result<ExperimentResult> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    from_structured(&text)
}
