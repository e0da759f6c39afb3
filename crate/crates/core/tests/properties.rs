use geokernel_core::kernels::{gram_matrix, sqrt_distance_matrix};
use geokernel_core::manifolds::{geodesic_interpolate, hyperbolic::exp_at_origin};
use geokernel_core::metric_props::{
    cat_check, check_geodesic_property, check_metric_axioms, comparison_triangle,
};
use geokernel_core::spectral::{cnd_verdict, eigenspectrum, pd_verdict};
use geokernel_core::{
    DistanceMatrix, GrassmannMetric, KernelSpec, Matrix, Point, PointSet, SpaceSpec, SpdMetric,
};
use proptest::prelude::*;

fn unit_vector(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, d)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-2)
        .prop_map(|v| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / n).collect()
        })
}

fn hyperbolic_point(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.5..1.5f64, dim).prop_map(|v| exp_at_origin(&v))
}

fn spd(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-2.0..2.0f64, n * n).prop_map(move |v| {
        let g = Matrix::from_vec(n, n, v).unwrap();
        let a = g
            .tr_matmul(&g)
            .unwrap()
            .add(&Matrix::identity(n).scale(0.1))
            .unwrap();
        a.symmetrized().unwrap()
    })
}

fn orthogonal(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-1.0..1.0f64, n * n)
        .prop_map(move |v| {
            geokernel_core::linalg::orthonormalize(&Matrix::from_vec(n, n, v).unwrap())
        })
        .prop_filter_map("full rank", move |q| q.ok().filter(|q| q.cols() == n))
}

fn frame(ambient: usize, rank: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-1.0..1.0f64, ambient * rank).prop_filter_map("full rank", move |v| {
        geokernel_core::linalg::orthonormalize(&Matrix::from_vec(ambient, rank, v).unwrap())
            .ok()
            .filter(|q| q.cols() == rank)
    })
}

fn vectors(points: Vec<Vec<f64>>) -> Vec<Point> {
    points.into_iter().map(Point::Vector).collect()
}

fn matrices(points: Vec<Matrix>) -> Vec<Point> {
    points.into_iter().map(Point::Matrix).collect()
}

/// A labelled sample from each vector- or matrix-valued space.
fn any_point_set() -> impl Strategy<Value = PointSet> {
    let n = 2..12usize;
    prop_oneof![
        n.clone()
            .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-3.0..3.0f64, 3), n))
            .prop_map(|p| PointSet::new(SpaceSpec::Euclidean { dim: 3 }, vectors(p)).unwrap()),
        n.clone()
            .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-3.0..3.0f64, 3), n))
            .prop_map(|p| PointSet::new(
                SpaceSpec::Lq {
                    dim: 3,
                    q_norm: 3.0
                },
                vectors(p)
            )
            .unwrap()),
        n.clone()
            .prop_flat_map(|n| prop::collection::vec(unit_vector(4), n))
            .prop_map(|p| PointSet::new(SpaceSpec::Sphere { ambient: 4 }, vectors(p)).unwrap()),
        n.clone()
            .prop_flat_map(|n| prop::collection::vec(unit_vector(4), n))
            .prop_map(|p| PointSet::new(SpaceSpec::Projective { ambient: 4 }, vectors(p)).unwrap()),
        n.clone()
            .prop_flat_map(|n| prop::collection::vec(hyperbolic_point(2), n))
            .prop_map(|p| PointSet::new(SpaceSpec::Hyperbolic { dim: 2 }, vectors(p)).unwrap()),
        (n.clone(), prop::sample::select(SpdMetric::ALL.to_vec()))
            .prop_flat_map(|(n, m)| (prop::collection::vec(spd(3), n), Just(m)))
            .prop_map(|(p, metric)| {
                PointSet::new(SpaceSpec::Spd { size: 3, metric }, matrices(p)).unwrap()
            }),
        (
            n.clone(),
            prop::sample::select(GrassmannMetric::ALL.to_vec())
        )
            .prop_flat_map(|(n, m)| (prop::collection::vec(frame(5, 2), n), Just(m)))
            .prop_map(|(p, metric)| {
                let space = SpaceSpec::Grassmann {
                    ambient: 5,
                    rank: 2,
                    metric,
                };
                PointSet::new(space, matrices(p)).unwrap()
            }),
        n.prop_flat_map(|n| prop::collection::vec("[acgt]{0,8}", n))
            .prop_map(|p| PointSet::new(
                SpaceSpec::String,
                p.into_iter().map(Point::Text).collect()
            )
            .unwrap()),
    ]
}

fn distance_matrix(points: Vec<Vec<f64>>) -> DistanceMatrix {
    PointSet::new(
        SpaceSpec::Euclidean {
            dim: points[0].len(),
        },
        vectors(points),
    )
    .unwrap()
    .pairwise_distances()
    .unwrap()
}

fn euclidean_cloud() -> impl Strategy<Value = DistanceMatrix> {
    (2..15usize)
        .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-2.0..2.0f64, 2), n))
        .prop_map(distance_matrix)
}

fn apply(q: &Matrix, x: &[f64]) -> Vec<f64> {
    (0..q.rows())
        .map(|i| q.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pairwise_distances_are_metrics(set in any_point_set()) {
        let d = set.pairwise_distances().unwrap();
        let report = check_metric_axioms(d.entries(), 1e-9).unwrap();
        prop_assert_eq!(report.asymmetric_pairs, 0);
        prop_assert_eq!(report.nonzero_diagonal, 0);
        prop_assert_eq!(report.negative_entries, 0);
        prop_assert_eq!(report.triangle_violations, 0, "worst slack {}", report.worst_triangle_slack);
    }

    #[test]
    fn sphere_distance_is_rotation_invariant(
        q in orthogonal(4), x in unit_vector(4), y in unit_vector(4)
    ) {
        let space = SpaceSpec::Sphere { ambient: 4 };
        let d = geokernel_core::space::distance;
        let before = d(&space, &Point::Vector(x.clone()), &Point::Vector(y.clone())).unwrap();
        let after = d(&space, &Point::Vector(apply(&q, &x)), &Point::Vector(apply(&q, &y))).unwrap();
        prop_assert!((before - after).abs() < 1e-10);
    }

    #[test]
    fn affine_invariant_is_congruence_invariant(a in spd(3), b in spd(3), g in spd(3)) {
        let space = SpaceSpec::Spd { size: 3, metric: SpdMetric::AffineInvariant };
        let move_by = |m: &Matrix| g.matmul(m).unwrap().matmul(&g).unwrap().symmetrized().unwrap();
        let d = geokernel_core::space::distance;
        let before = d(&space, &Point::Matrix(a.clone()), &Point::Matrix(b.clone())).unwrap();
        let after = d(&space, &Point::Matrix(move_by(&a)), &Point::Matrix(move_by(&b))).unwrap();
        prop_assert!((before - after).abs() < 1e-7 * (1.0 + before), "{before} vs {after}");
    }

    #[test]
    fn hyperbolic_distance_is_boost_invariant(
        x in hyperbolic_point(2), y in hyperbolic_point(2), r in -1.0..1.0f64
    ) {
        let (c, s) = (r.cosh(), r.sinh());
        let boost = |p: &[f64]| vec![c * p[0] + s * p[1], s * p[0] + c * p[1], p[2]];
        let space = SpaceSpec::Hyperbolic { dim: 2 };
        let d = geokernel_core::space::distance;
        let before = d(&space, &Point::Vector(x.clone()), &Point::Vector(y.clone())).unwrap();
        let after = d(&space, &Point::Vector(boost(&x)), &Point::Vector(boost(&y))).unwrap();
        prop_assert!((before - after).abs() < 1e-8 * (1.0 + before));
    }

    #[test]
    fn geodesics_have_unit_speed(
        which in 0..5usize,
        u in unit_vector(3), v in unit_vector(3),
        h1 in hyperbolic_point(2), h2 in hyperbolic_point(2),
        a in spd(2), b in spd(2),
    ) {
        let (space, x, y) = match which {
            0 => (SpaceSpec::Euclidean { dim: 3 }, Point::Vector(u), Point::Vector(v)),
            1 => {
                prop_assume!(u.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() > -0.99);
                (SpaceSpec::Sphere { ambient: 3 }, Point::Vector(u), Point::Vector(v))
            }
            2 => (SpaceSpec::Hyperbolic { dim: 2 }, Point::Vector(h1), Point::Vector(h2)),
            3 => (SpaceSpec::Spd { size: 2, metric: SpdMetric::AffineInvariant }, Point::Matrix(a), Point::Matrix(b)),
            _ => (SpaceSpec::Spd { size: 2, metric: SpdMetric::LogEuclidean }, Point::Matrix(a), Point::Matrix(b)),
        };
        let report = check_geodesic_property(&space, &x, &y, 7).unwrap();
        prop_assert!(report.max_deviation < 1e-8 * report.length.max(1.0), "{report:?}");
        let start = geodesic_interpolate(&space, &x, &y, 0.0).unwrap();
        prop_assert!(geokernel_core::space::distance(&space, &start, &x).unwrap() < 1e-12);
    }

    #[test]
    fn gram_matrices_are_symmetric_with_unit_diagonal(
        d in euclidean_cloud(), lambda in 1e-3..1e2f64, q in 0.5..3.0f64
    ) {
        let g = gram_matrix(&d, KernelSpec::new(lambda, q).unwrap());
        let k = g.entries();
        prop_assert_eq!(k.max_asymmetry(), 0.0);
        for i in 0..g.n() {
            prop_assert_eq!(k[(i, i)], 1.0);
            for j in 0..g.n() {
                prop_assert!(k[(i, j)] >= 0.0 && k[(i, j)] <= 1.0);
            }
        }
    }

    #[test]
    fn scaling_distances_rescales_bandwidth(
        d in euclidean_cloud(), lambda in 1e-2..10.0f64, q in 0.5..3.0f64, c in 0.1..5.0f64
    ) {
        let scaled = gram_matrix(&d.scaled(c).unwrap(), KernelSpec::new(lambda, q).unwrap());
        let rebanded = gram_matrix(&d, KernelSpec::new(lambda * c.powf(q), q).unwrap());
        let diff = scaled.entries().sub(rebanded.entries()).unwrap().max_abs();
        prop_assert!(diff < 1e-12);
    }

    #[test]
    fn pd_verdict_is_permutation_invariant(
        d in euclidean_cloud(), lambda in 1e-2..10.0f64, seed in any::<u64>()
    ) {
        let k = gram_matrix(&d, KernelSpec::gaussian(lambda).unwrap()).entries().clone();
        let n = k.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        // Fisher–Yates driven by a splitmix stream
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let j = (s >> 33) as usize % (i + 1);
            perm.swap(i, j);
        }
        let a = pd_verdict(&k, None).unwrap();
        let b = pd_verdict(&k.permuted(&perm).unwrap(), None).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert!((a.min_eigenvalue - b.min_eigenvalue).abs() < 1e-10);
    }

    #[test]
    fn cnd_verdict_is_scale_invariant(
        set in any_point_set(), c in 1e-3..1e3f64
    ) {
        let d = set.pairwise_distances().unwrap();
        let a = cnd_verdict(d.entries(), None).unwrap();
        let b = cnd_verdict(d.scaled(c).unwrap().entries(), None).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
    }

    #[test]
    fn squared_euclidean_distances_are_cnd(d in euclidean_cloud()) {
        prop_assert!(cnd_verdict(d.powf(2.0).entries(), None).unwrap().verdict.holds());
    }

    #[test]
    fn spectrum_preserves_trace_and_frobenius_norm(
        m in (1usize..10).prop_flat_map(|n| prop::collection::vec(-3.0..3.0f64, n * n).prop_map(move |v| {
            let a = Matrix::from_vec(n, n, v).unwrap();
            Matrix::from_fn(n, n, |i, j| a[(i, j)] + a[(j, i)])
        }))
    ) {
        let e = eigenspectrum(&m).unwrap();
        let tol = 1e-8 * m.rows() as f64 * m.max_abs().max(1.0);
        prop_assert!(e.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!((e.iter().sum::<f64>() - m.trace()).abs() < tol);
        let fro2 = m.frobenius_norm().powi(2);
        prop_assert!((e.iter().map(|x| x * x).sum::<f64>() - fro2).abs() < tol * fro2.max(1.0));
    }

    #[test]
    fn sqrt_of_a_metric_is_a_metric(set in any_point_set()) {
        let d = sqrt_distance_matrix(&set.pairwise_distances().unwrap());
        prop_assert!(check_metric_axioms(d.entries(), 1e-9).unwrap().triangle_violations == 0);
    }

    #[test]
    fn squared_collinear_triples_violate_the_triangle_inequality(
        a in -5.0..5.0f64, gap1 in 0.1..3.0f64, gap2 in 0.1..3.0f64
    ) {
        let d = distance_matrix(vec![vec![a], vec![a + gap1], vec![a + gap1 + gap2]]);
        let report = check_metric_axioms(d.powf(2.0).entries(), 1e-9).unwrap();
        prop_assert!(report.triangle_violations > 0);
        prop_assert!(!report.is_metric());
    }

    #[test]
    fn comparison_triangles_realize_their_sides(
        sides in (0.0..3.0f64, 0.0..3.0f64, 0.0..1.0f64).prop_map(|(b, c, f)| {
            // a between |b − c| and b + c
            let a = (b - c).abs() + f * (b + c - (b - c).abs());
            (a, b, c)
        }),
        kappa in prop_oneof![Just(0.0), -4.0..-0.01f64, 0.01..0.5f64],
    ) {
        let (a, b, c) = sides;
        prop_assume!(kappa <= 0.0 || a + b + c < 2.0 * std::f64::consts::PI / kappa.sqrt() * 0.999);
        let t = comparison_triangle(a, b, c, kappa).unwrap();
        for (got, want) in t.realized_sides().iter().zip([a, b, c]) {
            prop_assert!((got - want).abs() < 1e-9, "{got} vs {want} (κ = {kappa})");
        }
    }

    #[test]
    fn model_spaces_compare_exactly_with_themselves(
        which in 0..3usize,
        e in prop::collection::vec(prop::collection::vec(-2.0..2.0f64, 2), 3),
        s in prop::collection::vec(unit_vector(3), 3),
        h in prop::collection::vec(hyperbolic_point(2), 3),
    ) {
        let (space, kappa, pts) = match which {
            0 => (SpaceSpec::Euclidean { dim: 2 }, 0.0, vectors(e)),
            1 => {
                // keep the triangle inside an open hemisphere so the perimeter is < 2π
                let lift = |v: &[f64]| {
                    let w = [v[0] + 3.0, v[1], v[2]];
                    let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                    w.iter().map(|x| x / n).collect::<Vec<_>>()
                };
                (SpaceSpec::Sphere { ambient: 3 }, 1.0, vectors(s.iter().map(|v| lift(v)).collect()))
            }
            _ => (SpaceSpec::Hyperbolic { dim: 2 }, -1.0, vectors(h)),
        };
        let report = cat_check(&space, [&pts[0], &pts[1], &pts[2]], kappa, 9).unwrap();
        prop_assert!(report.samples.iter().all(|x| x.slack.abs() < 1e-8), "{report:?}");
    }

    #[test]
    fn cat_verdicts_are_monotone_in_kappa(
        which in 0..2usize,
        s in prop::collection::vec(unit_vector(3), 3),
        h in prop::collection::vec(hyperbolic_point(2), 3),
        k1 in -2.0..0.3f64, dk in 0.0..0.3f64,
    ) {
        let (space, pts) = match which {
            0 => {
                let lift = |v: &[f64]| {
                    let w = [v[0] + 2.0, v[1], v[2]];
                    let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                    w.iter().map(|x| x / n).collect::<Vec<_>>()
                };
                (SpaceSpec::Sphere { ambient: 3 }, vectors(s.iter().map(|v| lift(v)).collect()))
            }
            _ => (SpaceSpec::Hyperbolic { dim: 2 }, vectors(h)),
        };
        let k2 = k1 + dk;
        let tri = [&pts[0], &pts[1], &pts[2]];
        let lower = cat_check(&space, tri, k1, 9);
        let upper = cat_check(&space, tri, k2, 9);
        if let (Ok(lower), Ok(upper)) = (lower, upper) {
            prop_assert!(!lower.satisfied() || upper.satisfied(), "κ₁ = {k1}, κ₂ = {k2}");
        }
    }
}

#[test]
fn octant_midpoint_violation_is_large() {
    let space = SpaceSpec::Sphere { ambient: 3 };
    let e = |i: usize| {
        let mut v = vec![0.0; 3];
        v[i] = 1.0;
        Point::Vector(v)
    };
    let report = cat_check(&space, [&e(0), &e(1), &e(2)], 0.0, 9).unwrap();
    assert!(!report.satisfied());
    assert!(report.worst_slack < -0.1);
}
