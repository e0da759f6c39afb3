use std::process::Command;

use geokernel::experiment::{
    from_structured, read_result, run_experiment, to_structured, write_result, CSV_HEADER,
};
use geokernel::geokernel_core::manifolds::grassmann::check_frame;
use geokernel::geokernel_core::manifolds::spd::check_spd;
use geokernel::geokernel_core::space::distance;
use geokernel::geokernel_core::{
    GrassmannMetric, LambdaGrid, Point, PointSet, SpaceSpec, SpdMetric,
};
use geokernel::io::format_matrix;
use geokernel::sampling::{sample_space, substream, ClusterCloud, GraphSampler};
use geokernel::{build_neighbor_graph, sample_points, ExperimentConfig, GraphRule};
use proptest::prelude::*;
use rand::Rng;

fn small_config(space: SpaceSpec, seed: u64) -> ExperimentConfig {
    ExperimentConfig::new("small", space, 12, seed)
        .with_grid(LambdaGrid::log_spaced(0.1, 100.0, 4).unwrap())
}

#[test]
fn sampling_is_deterministic_and_prefix_stable() {
    for space in [
        SpaceSpec::Sphere { ambient: 5 },
        SpaceSpec::Hyperbolic { dim: 3 },
        SpaceSpec::Spd {
            size: 3,
            metric: SpdMetric::Fisher,
        },
        SpaceSpec::Grassmann {
            ambient: 6,
            rank: 2,
            metric: GrassmannMetric::Chordal,
        },
    ] {
        let a = sample_points(&space, 20, 11).unwrap();
        let b = sample_points(&space, 20, 11).unwrap();
        assert_eq!(a, b);
        let prefix = sample_points(&space, 7, 11).unwrap();
        assert_eq!(prefix.points(), &a.points()[..7]);
        assert_ne!(sample_points(&space, 20, 12).unwrap(), a);
    }
}

#[test]
fn sampled_points_pass_validation() {
    let spd = sample_points(
        &SpaceSpec::Spd {
            size: 3,
            metric: SpdMetric::AffineInvariant,
        },
        200,
        3,
    )
    .unwrap();
    for p in spd.points() {
        check_spd(p.as_matrix().unwrap()).unwrap();
    }
    let frames = sample_points(
        &SpaceSpec::Grassmann {
            ambient: 100,
            rank: 15,
            metric: GrassmannMetric::Intrinsic,
        },
        100,
        3,
    )
    .unwrap();
    for p in frames.points() {
        check_frame(p.as_matrix().unwrap()).unwrap();
    }
}

#[test]
fn pairwise_distance_examples() {
    let one = sample_points(&SpaceSpec::Sphere { ambient: 3 }, 1, 0).unwrap();
    let d = one.pairwise_distances().unwrap();
    assert_eq!((d.n(), d.get(0, 0)), (1, 0.0));

    let space = SpaceSpec::Sphere { ambient: 3 };
    let e = PointSet::new(
        space,
        vec![
            Point::Vector(vec![1.0, 0.0, 0.0]),
            Point::Vector(vec![0.0, 1.0, 0.0]),
        ],
    )
    .unwrap();
    let d = e.pairwise_distances().unwrap();
    assert_eq!(d.get(0, 1), std::f64::consts::FRAC_PI_2);
    assert_eq!(d.get(1, 0), std::f64::consts::FRAC_PI_2);

    let set = sample_points(
        &SpaceSpec::Spd {
            size: 3,
            metric: SpdMetric::LogEuclidean,
        },
        15,
        4,
    )
    .unwrap();
    let d = set.pairwise_distances().unwrap();
    let p = set.points();
    for (i, j) in [(0, 1), (3, 14), (7, 2)] {
        assert_eq!(d.get(i, j), distance(set.space(), &p[i], &p[j]).unwrap());
    }
}

#[test]
fn graph_distances_dominate_euclidean_distances() {
    let mut rng = substream(5, 0);
    let points: Vec<Point> = (0..50)
        .map(|_| Point::Vector(vec![rng.random::<f64>(), rng.random::<f64>()]))
        .collect();
    let cloud = PointSet::new(SpaceSpec::Euclidean { dim: 2 }, points).unwrap();
    let g = build_neighbor_graph(&cloud, GraphRule::Epsilon(0.3)).unwrap();
    let graph = PointSet::all_vertices(SpaceSpec::Graph, g)
        .unwrap()
        .pairwise_distances()
        .unwrap();
    let euclid = cloud.pairwise_distances().unwrap();
    for i in 0..50 {
        for j in 0..50 {
            assert!(graph.get(i, j) >= euclid.get(i, j) - 1e-12);
        }
    }
}

#[test]
fn graph_samples_use_the_cloud() {
    let sampler = GraphSampler {
        cloud: ClusterCloud::default(),
        rule: GraphRule::ConnectivityRadius,
    };
    let set = sample_space(&SpaceSpec::Graph, 60, 1, &sampler).unwrap();
    assert_eq!(set.len(), 60);
    assert_eq!(set.graph().unwrap().vertex_count(), 60);
    let tiny = GraphSampler {
        rule: GraphRule::Epsilon(1e-3),
        ..sampler
    };
    let err = sample_space(&SpaceSpec::Graph, 60, 1, &tiny).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn written_files_are_identical_across_runs_and_round_trip() {
    let config = small_config(SpaceSpec::Hyperbolic { dim: 2 }, 9);
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = run_experiment(&config).unwrap();
    let [json_a, csv_a] = write_result(&first, a.path()).unwrap();
    let [json_b, csv_b] = write_result(&run_experiment(&config).unwrap(), b.path()).unwrap();
    assert_eq!(
        std::fs::read(&json_a).unwrap(),
        std::fs::read(json_b).unwrap()
    );
    assert_eq!(
        std::fs::read(&csv_a).unwrap(),
        std::fs::read(csv_b).unwrap()
    );
    assert_eq!(read_result(&json_a).unwrap(), first);
    let csv = std::fs::read_to_string(csv_a).unwrap();
    assert!(csv.starts_with(CSV_HEADER));
    assert!(csv.ends_with('\n') && !csv.contains('\r'));
}

#[test]
fn unreadable_result_is_an_io_error() {
    let err = read_result(std::path::Path::new("/nonexistent/result.json")).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert!(from_structured("{").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn results_round_trip_through_the_structured_format(
        seed in any::<u64>(),
        which in 0..5usize,
    ) {
        let space = [
            SpaceSpec::Sphere { ambient: 3 },
            SpaceSpec::Spd { size: 2, metric: SpdMetric::AffineInvariant },
            SpaceSpec::Tree,
            SpaceSpec::String,
            SpaceSpec::Lq { dim: 3, q_norm: 4.0 },
        ][which];
        let result = run_experiment(&small_config(space, seed)).unwrap();
        let text = to_structured(&result).unwrap();
        prop_assert_eq!(from_structured(&text).unwrap(), result.clone());
        prop_assert_eq!(to_structured(&run_experiment(&small_config(space, seed)).unwrap()).unwrap(), text);
    }
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_geokernel"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn cli_verdict_wording_and_exit_codes() {
    let (code, out, _) = cli(&["sweep", "--space", "sphere", "--n", "40", "--seed", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("q=1: PD (no violation found"), "{out}");
    assert!(out.contains("q=2: NOT PD (witness λ="), "{out}");

    let (code, out, _) = cli(&[
        "spectrum",
        "--space",
        "euclidean",
        "--n",
        "10",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 11);
    assert!(out.starts_with(CSV_HEADER));

    assert_eq!(cli(&["sweep", "--no-such-flag"]).0, 1);
    assert_eq!(cli(&["sweep", "--lambda-grid", "1:2"]).0, 1);
    assert_eq!(
        cli(&["sweep", "--space", "sphere", "--variant", "fisher"]).0,
        1
    );
    assert_eq!(cli(&["sweep", "--space", "spd", "--n", "1"]).0, 2);
    assert_eq!(cli(&["cnd", "--input", "/nonexistent/matrix.txt"]).0, 3);
    assert_eq!(cli(&["--help"]).0, 0);
}

#[test]
fn cli_reads_distance_matrix_files() {
    let dir = tempfile::tempdir().unwrap();
    let line = dir.path().join("line.txt");
    // squared distances of 0, 1, 2 on a line: CND but not a metric
    let m =
        geokernel::geokernel_core::Matrix::from_fn(3, 3, |i, j| ((i as f64) - (j as f64)).powi(2));
    std::fs::write(&line, format_matrix(&m)).unwrap();
    let path = line.to_str().unwrap();

    let (code, out, _) = cli(&["cnd", "--input", path]);
    assert_eq!(code, 0);
    assert!(out.contains("n=3: CND (no violation found)"), "{out}");
    let (code, out, _) = cli(&["metric-check", "--input", path]);
    assert_eq!(code, 0);
    assert!(out.contains("NOT a metric (2 triangle violations"), "{out}");
    let (code, out, _) = cli(&["metric-check", "--input", path, "--sqrt"]);
    assert_eq!(code, 0);
    assert!(out.contains("metric (no violation found)"), "{out}");

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0 1\n1 zero\n").unwrap();
    let (code, _, err) = cli(&["cnd", "--input", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn cli_cat_check_and_structured_output() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("cat.json");
    let (code, _, _) = cli(&[
        "cat-check",
        "--space",
        "hyperbolic",
        "--kappa",
        "0",
        "--seed",
        "3",
        "--format",
        "structured",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(out_path).unwrap();
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["verdict"], "SATISFIED");
    assert_eq!(report["samples"].as_array().unwrap().len(), 27);

    let (code, out, _) = cli(&["cat-check", "--space", "sphere", "--kappa", "-1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("CAT(-1): VIOLATED"), "{out}");
    assert_eq!(cli(&["cat-check", "--space", "projective"]).0, 2);
}
