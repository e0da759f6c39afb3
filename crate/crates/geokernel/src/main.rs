use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use geokernel::experiment::{run_experiment, to_csv, to_structured, ExperimentConfig};
use geokernel::geokernel_core::kernels::sqrt_distance_matrix;
use geokernel::geokernel_core::metric_props::{cat_check, check_metric_axioms};
use geokernel::geokernel_core::spectral::schonberg_crosscheck;
use geokernel::geokernel_core::{
    DistanceMatrix, GrassmannMetric, KernelSpec, LambdaGrid, SpaceSpec, SpdMetric,
};
use geokernel::io::read_distance_matrix;
use geokernel::panels::{self, summarize};
use geokernel::{sample_space, GraphRule, GraphSampler, HarnessError};

#[derive(Parser)]
#[command(
    name = "geokernel",
    version,
    about = "PD / CND checks for geodesic exponential kernels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    Euclidean,
    Lq,
    Sphere,
    Projective,
    Hyperbolic,
    Spd,
    Grassmann,
    Graph,
    Tree,
    String,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Frobenius,
    #[value(alias = "log_euclidean")]
    LogEuclidean,
    #[value(alias = "affine_invariant")]
    AffineInvariant,
    Fisher,
    Intrinsic,
    #[value(alias = "extrinsic")]
    Chordal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Structured,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum, default_value = "sphere")]
    space: SpaceArg,
    /// Metric variant for spd and grassmann spaces.
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Dimension (euclidean, lq, hyperbolic), ambient dimension (sphere,
    /// projective, grassmann) or matrix size (spd).
    #[arg(long)]
    dim: Option<usize>,
    /// Subspace dimension for grassmann.
    #[arg(long, default_value_t = 2)]
    rank: usize,
    /// Norm exponent for lq.
    #[arg(long, default_value_t = 3.0)]
    q_norm: f64,
    /// eps:<radius>, knn:<k> or connectivity.
    #[arg(long, default_value = "knn:5")]
    graph_rule: String,
}

#[derive(Args)]
struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Machine-readable output instead of a text summary.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Gram spectrum of one kernel on a sample.
    Spectrum {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Minimum Gram eigenvalues over a λ grid.
    Sweep {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0])]
        q: Vec<f64>,
        /// min:max:count, log-spaced.
        #[arg(long)]
        lambda_grid: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// CND verdict of a sampled or loaded distance matrix, cross-checked
    /// against the Laplacian λ-sweep.
    Cnd {
        #[command(flatten)]
        sample: SampleArgs,
        /// Plain-text distance matrix to analyze instead of a sample.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        lambda_grid: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Metric axioms including the full triangle-inequality scan.
    MetricCheck {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Check the square-root metric instead.
        #[arg(long)]
        sqrt: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// CAT(κ) comparison on a triangle of three sampled points.
    CatCheck {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long, default_value_t = 9)]
        samples_per_edge: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Runs the five spectrum panels and writes results into a directory.
    Reproduce {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Harness(HarnessError),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        Failure::Harness(e)
    }
}

impl From<geokernel::geokernel_core::Error> for Failure {
    fn from(e: geokernel::geokernel_core::Error) -> Self {
        Failure::Harness(e.into())
    }
}

impl SampleArgs {
    fn space(&self) -> Result<SpaceSpec, Failure> {
        let spd_metric = match self.variant {
            None | Some(VariantArg::AffineInvariant) => Some(SpdMetric::AffineInvariant),
            Some(VariantArg::Frobenius) => Some(SpdMetric::Frobenius),
            Some(VariantArg::LogEuclidean) => Some(SpdMetric::LogEuclidean),
            Some(VariantArg::Fisher) => Some(SpdMetric::Fisher),
            _ => None,
        };
        let grassmann_metric = match self.variant {
            None | Some(VariantArg::Intrinsic) => Some(GrassmannMetric::Intrinsic),
            Some(VariantArg::Chordal) => Some(GrassmannMetric::Chordal),
            _ => None,
        };
        let bad_variant = || Failure::Usage("--variant does not apply to this space".into());
        let dim = |d: usize| self.dim.unwrap_or(d);
        let space = match self.space {
            SpaceArg::Euclidean => SpaceSpec::Euclidean { dim: dim(3) },
            SpaceArg::Lq => SpaceSpec::Lq {
                dim: dim(3),
                q_norm: self.q_norm,
            },
            SpaceArg::Sphere => SpaceSpec::Sphere { ambient: dim(3) },
            SpaceArg::Projective => SpaceSpec::Projective { ambient: dim(3) },
            SpaceArg::Hyperbolic => SpaceSpec::Hyperbolic { dim: dim(2) },
            SpaceArg::Spd => SpaceSpec::Spd {
                size: dim(3),
                metric: spd_metric.ok_or_else(bad_variant)?,
            },
            SpaceArg::Grassmann => SpaceSpec::Grassmann {
                ambient: dim(4),
                rank: self.rank,
                metric: grassmann_metric.ok_or_else(bad_variant)?,
            },
            SpaceArg::Graph => SpaceSpec::Graph,
            SpaceArg::Tree => SpaceSpec::Tree,
            SpaceArg::String => SpaceSpec::String,
        };
        let has_variant = matches!(space, SpaceSpec::Spd { .. } | SpaceSpec::Grassmann { .. });
        if self.variant.is_some() && !has_variant {
            return Err(bad_variant());
        }
        Ok(space)
    }

    fn graph(&self) -> Result<GraphSampler, Failure> {
        let rule: GraphRule = self
            .graph_rule
            .parse()
            .map_err(|e: HarnessError| Failure::Usage(e.to_string()))?;
        Ok(GraphSampler {
            rule,
            ..GraphSampler::default()
        })
    }

    fn config(&self, name: &str) -> Result<ExperimentConfig, Failure> {
        Ok(ExperimentConfig::new(name, self.space()?, self.n, self.seed).with_graph(self.graph()?))
    }

    fn distances(&self) -> Result<DistanceMatrix, Failure> {
        let set = sample_space(&self.space()?, self.n, self.seed, &self.graph()?)?;
        Ok(set.pairwise_distances()?)
    }
}

fn parse_grid(grid: Option<&str>) -> Result<LambdaGrid, Failure> {
    match grid {
        None => Ok(LambdaGrid::default()),
        Some(s) => s.parse().map_err(|e: geokernel::geokernel_core::Error| {
            Failure::Usage(format!("--lambda-grid: {e}"))
        }),
    }
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            Failure::Harness(HarnessError::Io {
                path: path.clone(),
                source: e,
            })
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| {
                Failure::Harness(HarnessError::Io {
                    path: "<stdout>".into(),
                    source: e,
                })
            })
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(HarnessError::from)?;
    s.push('\n');
    Ok(s)
}

fn load_or_sample(sample: &SampleArgs, input: Option<&Path>) -> Result<DistanceMatrix, Failure> {
    match input {
        Some(path) => Ok(read_distance_matrix(path)?),
        None => sample.distances(),
    }
}

fn experiment_output(config: &ExperimentConfig, output: &OutputArgs) -> Result<(), Failure> {
    let result = run_experiment(config)?;
    let text = match output.format {
        None => summarize(&result),
        Some(Format::Csv) => to_csv(&result),
        Some(Format::Structured) => to_structured(&result)?,
    };
    emit(output, &text)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Spectrum {
            sample,
            q,
            lambda,
            output,
        } => {
            let spec = KernelSpec::new(lambda, q).map_err(|e| Failure::Usage(e.to_string()))?;
            let config = sample
                .config("spectrum")?
                .with_q_values(vec![spec.q()])
                .with_grid(LambdaGrid::new(vec![spec.lambda()])?);
            experiment_output(&config, &output)
        }
        Command::Sweep {
            sample,
            q,
            lambda_grid,
            output,
        } => {
            let config = sample
                .config("sweep")?
                .with_q_values(q)
                .with_grid(parse_grid(lambda_grid.as_deref())?);
            experiment_output(&config, &output)
        }
        Command::Cnd {
            sample,
            input,
            lambda_grid,
            output,
        } => {
            let grid = parse_grid(lambda_grid.as_deref())?;
            let d = load_or_sample(&sample, input.as_deref())?;
            let report = schonberg_crosscheck(&d, &grid)?;
            let text = match output.format {
                Some(Format::Csv) => format!(
                    "n,verdict,witness,tolerance,sweep_passes,consistent\n{},{:?},{:e},{:e},{},{}\n",
                    report.cnd.sample_size,
                    report.cnd.verdict,
                    report.cnd.witness,
                    report.cnd.tolerance,
                    report.sweep.verdict.passes(),
                    report.consistent
                ),
                Some(Format::Structured) => json(&report)?,
                None => format!(
                    "n={}: {} (deflated min eig {:e})\n{report}\n",
                    report.cnd.sample_size, report.cnd.verdict, report.cnd.witness
                ),
            };
            emit(&output, &text)
        }
        Command::MetricCheck {
            sample,
            input,
            tol,
            sqrt,
            output,
        } => {
            let mut d = load_or_sample(&sample, input.as_deref())?;
            if sqrt {
                d = sqrt_distance_matrix(&d);
            }
            let report = check_metric_axioms(d.entries(), tol)?;
            let text = match output.format {
                Some(Format::Csv) => format!(
                    "n,asymmetric_pairs,nonzero_diagonal,negative_entries,indiscernible_pairs,triangle_violations,worst_triangle_slack\n{},{},{},{},{},{},{:e}\n",
                    report.sample_size,
                    report.asymmetric_pairs,
                    report.nonzero_diagonal,
                    report.negative_entries,
                    report.indiscernible_pairs,
                    report.triangle_violations,
                    report.worst_triangle_slack
                ),
                Some(Format::Structured) => json(&report)?,
                None => format!(
                    "n={}: {} ({} triangle violations, worst slack {:e})\n",
                    report.sample_size,
                    if report.is_metric() { "metric (no violation found)" } else { "NOT a metric" },
                    report.triangle_violations,
                    report.worst_triangle_slack
                ),
            };
            emit(&output, &text)
        }
        Command::CatCheck {
            sample,
            kappa,
            samples_per_edge,
            output,
        } => {
            let set = sample_space(&sample.space()?, 3, sample.seed, &sample.graph()?)?;
            let p = set.points();
            let report = cat_check(set.space(), [&p[0], &p[1], &p[2]], kappa, samples_per_edge)?;
            let text = match output.format {
                Some(Format::Csv) => {
                    let mut s = String::from("edge,t,slack\n");
                    for x in &report.samples {
                        s.push_str(&format!("{},{},{:e}\n", x.edge, x.t, x.slack));
                    }
                    s
                }
                Some(Format::Structured) => json(&report)?,
                None => format!(
                    "CAT({kappa}): {} (worst slack {:e} over {} samples)\n",
                    if report.satisfied() {
                        "SATISFIED"
                    } else {
                        "VIOLATED"
                    },
                    report.worst_slack,
                    report.samples.len()
                ),
            };
            emit(&output, &text)
        }
        Command::Reproduce { seed, out } => {
            let results = panels::reproduce(seed, &out)?;
            let mut text = String::new();
            for r in &results {
                text.push_str(&summarize(r));
            }
            text.push_str(&format!("results written to {}\n", out.display()));
            emit(
                &OutputArgs {
                    out: None,
                    format: None,
                },
                &text,
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Harness(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
