//! Metric-axiom scans, the geodesic property, and CAT(κ) comparison
//! triangles.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::manifolds::{euclidean_distance, geodesic_interpolate, hyperbolic, sphere};
use crate::space::{distance, Point, SpaceSpec};

/// Slack below which a CAT(κ) sample counts as a violation.
pub const CAT_SLACK_TOLERANCE: f64 = -1e-9;
/// Relative deviation allowed by [`check_geodesic_property`].
pub const GEODESIC_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_SAMPLES_PER_EDGE: usize = 9;

const MAX_EXAMPLES: usize = 16;

/// Ordered triple `(i, j, k)` with `D[i][j] + D[j][k] − D[i][k] < −tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TriangleViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AxiomReport {
    pub sample_size: usize,
    pub tolerance: f64,
    /// Pairs `i < j` with `|D[i][j] − D[j][i]| > tol`.
    pub asymmetric_pairs: usize,
    pub nonzero_diagonal: usize,
    pub negative_entries: usize,
    /// Pairs `i ≠ j` at distance `≤ tol`.
    pub indiscernible_pairs: usize,
    pub triangle_violations: usize,
    /// First few violating triples in scan order.
    pub triangle_examples: Vec<TriangleViolation>,
    /// Minimum of `D[i][j] + D[j][k] − D[i][k]` over all triples.
    pub worst_triangle_slack: f64,
}

impl AxiomReport {
    pub fn is_metric(&self) -> bool {
        self.asymmetric_pairs == 0
            && self.nonzero_diagonal == 0
            && self.negative_entries == 0
            && self.indiscernible_pairs == 0
            && self.triangle_violations == 0
    }
}

/// Scans all metric axioms with absolute tolerance `tol`, including the
/// triangle inequality over all `n³` ordered triples.
pub fn check_metric_axioms(d: &Matrix, tol: f64) -> Result<AxiomReport> {
    let n = d.require_square()?;
    let mut r = AxiomReport {
        sample_size: n,
        tolerance: tol,
        worst_triangle_slack: f64::INFINITY,
        ..AxiomReport::default()
    };
    for i in 0..n {
        if libm::fabs(d[(i, i)]) > tol {
            r.nonzero_diagonal += 1;
        }
        for j in 0..n {
            if d[(i, j)] < -tol {
                r.negative_entries += 1;
            }
            if i < j {
                if libm::fabs(d[(i, j)] - d[(j, i)]) > tol {
                    r.asymmetric_pairs += 1;
                }
                if d[(i, j)] <= tol || d[(j, i)] <= tol {
                    r.indiscernible_pairs += 1;
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let dij = d[(i, j)];
            for k in 0..n {
                let slack = dij + d[(j, k)] - d[(i, k)];
                if slack < r.worst_triangle_slack {
                    r.worst_triangle_slack = slack;
                }
                if slack < -tol {
                    r.triangle_violations += 1;
                    if r.triangle_examples.len() < MAX_EXAMPLES {
                        r.triangle_examples
                            .push(TriangleViolation { i, j, k, slack });
                    }
                }
            }
        }
    }
    if n == 0 {
        r.worst_triangle_slack = 0.0;
    }
    Ok(r)
}

/// Simply connected model surface of constant curvature `kappa`.
///
/// Points are plane coordinates for `κ = 0`, vectors on the sphere of radius
/// `1/√κ` in R³ for `κ > 0`, and vectors on the hyperboloid
/// `−x₀² + x₁² + x₂² = −1/|κ|` for `κ < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpace {
    kappa: f64,
}

impl ModelSpace {
    pub fn new(kappa: f64) -> Result<Self> {
        if !kappa.is_finite() {
            return Err(Error::InvalidParameter {
                name: "kappa",
                value: kappa,
                reason: "must be finite",
            });
        }
        Ok(Self { kappa })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `1/√|κ|`, or 1 when flat.
    fn radius(&self) -> f64 {
        if self.kappa == 0.0 {
            1.0
        } else {
            1.0 / libm::sqrt(libm::fabs(self.kappa))
        }
    }

    /// Diameter `π/√κ` for `κ > 0`, infinite otherwise.
    pub fn diameter(&self) -> f64 {
        if self.kappa > 0.0 {
            PI * self.radius()
        } else {
            f64::INFINITY
        }
    }

    fn unit(&self, x: &[f64]) -> Vec<f64> {
        let r = self.radius();
        x.iter().map(|v| v / r).collect()
    }

    pub fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        let r = self.radius();
        if self.kappa == 0.0 {
            euclidean_distance(x, y)
        } else if self.kappa > 0.0 {
            r * sphere::angle(&self.unit(x), &self.unit(y))
        } else {
            r * hyperbolic::distance_unchecked(&self.unit(x), &self.unit(y))
        }
    }

    /// Point at arc-length fraction `t` from `x` to `y`.
    pub fn interpolate(&self, x: &[f64], y: &[f64], t: f64) -> Result<Vec<f64>> {
        let r = self.radius();
        let unit = if self.kappa == 0.0 {
            return Ok(x.iter().zip(y).map(|(a, b)| a + t * (b - a)).collect());
        } else if self.kappa > 0.0 {
            sphere::interpolate(&self.unit(x), &self.unit(y), t)?
        } else {
            hyperbolic::interpolate(&self.unit(x), &self.unit(y), t)
        };
        Ok(unit.into_iter().map(|v| v * r).collect())
    }

    /// Point at distance `dist` from the base point in direction `angle`
    /// measured from the first axis.
    fn polar(&self, dist: f64, angle: f64) -> Vec<f64> {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        if self.kappa == 0.0 {
            return alloc::vec![dist * c, dist * s];
        }
        let r = self.radius();
        let th = dist / r;
        let (radial, along) = if self.kappa > 0.0 {
            (libm::cos(th), libm::sin(th))
        } else {
            (libm::cosh(th), libm::sinh(th))
        };
        alloc::vec![r * radial, r * along * c, r * along * s]
    }

    /// Cosine of the angle at a vertex with adjacent sides `b`, `c` and
    /// opposite side `a`.
    fn vertex_angle_cos(&self, a: f64, b: f64, c: f64) -> f64 {
        if b == 0.0 || c == 0.0 {
            return 1.0;
        }
        let cos = if self.kappa == 0.0 {
            (b * b + c * c - a * a) / (2.0 * b * c)
        } else {
            let k = 1.0 / self.radius();
            let (a, b, c) = (a * k, b * k, c * k);
            if self.kappa > 0.0 {
                (libm::cos(a) - libm::cos(b) * libm::cos(c)) / (libm::sin(b) * libm::sin(c))
            } else {
                (libm::cosh(b) * libm::cosh(c) - libm::cosh(a)) / (libm::sinh(b) * libm::sinh(c))
            }
        };
        cos.clamp(-1.0, 1.0)
    }
}

/// Triangle in the model space with prescribed side lengths.
///
/// Side `a` is opposite the first vertex, `b` opposite the second and `c`
/// opposite the third, so `c = d(v₀, v₁)` and `b = d(v₀, v₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTriangle {
    pub sides: [f64; 3],
    pub kappa: f64,
    pub vertices: [Vec<f64>; 3],
    model: ModelSpace,
}

impl ComparisonTriangle {
    pub fn model(&self) -> &ModelSpace {
        &self.model
    }

    /// Model-space distances `[d(v₁,v₂), d(v₀,v₂), d(v₀,v₁)]`, matching
    /// the order of `sides`.
    pub fn realized_sides(&self) -> [f64; 3] {
        let [p, q, r] = &self.vertices;
        [
            self.model.distance(q, r),
            self.model.distance(p, r),
            self.model.distance(p, q),
        ]
    }
}

pub fn comparison_triangle(a: f64, b: f64, c: f64, kappa: f64) -> Result<ComparisonTriangle> {
    let model = ModelSpace::new(kappa)?;
    for (name, v) in [("a", a), ("b", b), ("c", c)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::InvalidParameter {
                name,
                value: v,
                reason: "side length must be nonnegative and finite",
            });
        }
    }
    let perimeter = a + b + c;
    let slack = 1e-12 * perimeter.max(1.0);
    if a > b + c + slack || b > a + c + slack || c > a + b + slack {
        return Err(Error::TriangleInequality { a, b, c });
    }
    let bound = 2.0 * model.diameter();
    if perimeter >= bound {
        return Err(Error::PerimeterTooLarge { perimeter, bound });
    }
    let angle = libm::acos(model.vertex_angle_cos(a, b, c));
    let vertices = [
        model.polar(0.0, 0.0),
        model.polar(c, 0.0),
        model.polar(b, angle),
    ];
    Ok(ComparisonTriangle {
        sides: [a, b, c],
        kappa,
        vertices,
        model,
    })
}

/// One sampled point `x` at fraction `t` along `edge`, compared against
/// the opposite vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CatSample {
    /// `0` is the edge from vertex 0 to 1, `1` from 1 to 2, `2` from 2 to 0.
    pub edge: usize,
    pub t: f64,
    /// `d_model(x̄, opposite) − d(x, opposite)`.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum CatVerdict {
    Satisfied,
    ViolatedAt(Vec<CatSample>),
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CatReport {
    pub kappa: f64,
    pub samples: Vec<CatSample>,
    /// Zero when there are no samples.
    pub worst_slack: f64,
    pub verdict: CatVerdict,
}

impl CatReport {
    pub fn satisfied(&self) -> bool {
        self.verdict == CatVerdict::Satisfied
    }
}

/// Samples each edge of the geodesic triangle `(p, q, r)` at fractions
/// `j/(s+1)`, `j = 1..=s`, and compares the distance to the opposite vertex
/// with the same quantity in the comparison triangle.
///
/// Triangles with a zero-length side are trivially satisfied.
pub fn cat_check(
    space: &SpaceSpec,
    vertices: [&Point; 3],
    kappa: f64,
    samples_per_edge: usize,
) -> Result<CatReport> {
    let [p, q, r] = vertices;
    let sides = [
        distance(space, q, r)?,
        distance(space, p, r)?,
        distance(space, p, q)?,
    ];
    if sides.contains(&0.0) {
        return Ok(CatReport {
            kappa,
            samples: Vec::new(),
            worst_slack: 0.0,
            verdict: CatVerdict::Satisfied,
        });
    }
    let tri = comparison_triangle(sides[0], sides[1], sides[2], kappa)?;
    let model = tri.model;
    let edges: [(&Point, &Point, &Point, usize, usize, usize); 3] =
        [(p, q, r, 0, 1, 2), (q, r, p, 1, 2, 0), (r, p, q, 2, 0, 1)];
    let mut samples = Vec::with_capacity(3 * samples_per_edge);
    for (edge, &(from, to, opposite, i, j, k)) in edges.iter().enumerate() {
        for s in 1..=samples_per_edge {
            let t = s as f64 / (samples_per_edge + 1) as f64;
            let x = geodesic_interpolate(space, from, to, t)?;
            let actual = distance(space, &x, opposite)?;
            let xb = model.interpolate(&tri.vertices[i], &tri.vertices[j], t)?;
            let compared = model.distance(&xb, &tri.vertices[k]);
            samples.push(CatSample {
                edge,
                t,
                slack: compared - actual,
            });
        }
    }
    let worst_slack = samples
        .iter()
        .map(|s| s.slack)
        .fold(f64::INFINITY, f64::min);
    let worst_slack = if samples.is_empty() { 0.0 } else { worst_slack };
    let violations: Vec<CatSample> = samples
        .iter()
        .filter(|s| s.slack < CAT_SLACK_TOLERANCE)
        .copied()
        .collect();
    Ok(CatReport {
        kappa,
        samples,
        worst_slack,
        verdict: if violations.is_empty() {
            CatVerdict::Satisfied
        } else {
            CatVerdict::ViolatedAt(violations)
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeodesicReport {
    pub length: f64,
    /// Max over sampled `s, t` of `|d(γ(s), γ(t)) − |s − t|·L|`.
    pub max_deviation: f64,
    pub holds: bool,
}

/// Checks `d(γ(s), γ(t)) = |s − t|·d(γ(0), γ(1))` on `samples` evenly
/// spaced parameters in `[0, 1]` (all pairs) for an arbitrary curve.
pub fn check_curve<C, D>(curve: C, dist: D, samples: usize) -> Result<GeodesicReport>
where
    C: Fn(f64) -> Result<Point>,
    D: Fn(&Point, &Point) -> Result<f64>,
{
    let samples = samples.max(2);
    let ts: Vec<f64> = (0..samples)
        .map(|i| i as f64 / (samples - 1) as f64)
        .collect();
    let points = ts.iter().map(|&t| curve(t)).collect::<Result<Vec<_>>>()?;
    let length = dist(&points[0], &points[samples - 1])?;
    let mut max_deviation: f64 = 0.0;
    for i in 0..samples {
        for j in (i + 1)..samples {
            let d = dist(&points[i], &points[j])?;
            max_deviation = max_deviation.max(libm::fabs(d - (ts[j] - ts[i]) * length));
        }
    }
    Ok(GeodesicReport {
        length,
        max_deviation,
        holds: max_deviation <= GEODESIC_TOLERANCE * length,
    })
}

/// [`check_curve`] applied to the minimizing geodesic from `x` to `y`.
pub fn check_geodesic_property(
    space: &SpaceSpec,
    x: &Point,
    y: &Point,
    samples: usize,
) -> Result<GeodesicReport> {
    check_curve(
        |t| geodesic_interpolate(space, x, y, t),
        |a, b| distance(space, a, b),
        samples,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    fn v(x: &[f64]) -> Point {
        Point::Vector(x.to_vec())
    }

    #[test]
    fn axioms_of_a_line_and_its_squares() {
        let d = Matrix::from_rows(&[[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]]).unwrap();
        let r = check_metric_axioms(&d, 1e-9).unwrap();
        assert!(r.is_metric());
        assert_eq!(r.worst_triangle_slack, 0.0);
        let sq = d.map(|x| x * x);
        let r = check_metric_axioms(&sq, 1e-9).unwrap();
        assert!(!r.is_metric());
        // (0,1,2) and (2,1,0)
        assert_eq!(r.triangle_violations, 2);
        assert_eq!(r.worst_triangle_slack, -2.0);
    }

    #[test]
    fn axioms_flag_each_defect() {
        let d = Matrix::from_rows(&[[1.0, -1.0, 0.0], [2.0, 0.0, 1.0], [0.0, 1.0, 0.0]]).unwrap();
        let r = check_metric_axioms(&d, 1e-9).unwrap();
        assert_eq!(r.nonzero_diagonal, 1);
        assert_eq!(r.negative_entries, 1);
        assert_eq!(r.asymmetric_pairs, 1);
        assert_eq!(r.indiscernible_pairs, 2);
    }

    #[test]
    fn right_triangle_in_the_plane() {
        let t = comparison_triangle(5.0, 4.0, 3.0, 0.0).unwrap();
        let s = t.realized_sides();
        for (got, want) in s.iter().zip([5.0, 4.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((t.vertices[2][0]).abs() < 1e-15);
        assert!((t.vertices[2][1] - 4.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_triangle_is_collinear() {
        let t = comparison_triangle(2.0, 1.0, 1.0, 0.0).unwrap();
        let s = t.realized_sides();
        assert!((s[0] - 2.0).abs() < 1e-12);
        assert!(t.vertices[2][1].abs() < 1e-15);
    }

    #[test]
    fn octant_triangle_on_the_unit_sphere() {
        let t = comparison_triangle(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, 1.0).unwrap();
        for s in t.realized_sides() {
            assert!((s - FRAC_PI_2).abs() < 1e-12);
        }
        for p in &t.vertices {
            assert!((crate::linalg::norm(p) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn comparison_triangle_rejections() {
        assert!(matches!(
            comparison_triangle(1.0, 1.0, 3.0, 0.0),
            Err(Error::TriangleInequality { .. })
        ));
        assert!(matches!(
            comparison_triangle(3.0, 3.0, 3.0, 1.0),
            Err(Error::PerimeterTooLarge { .. })
        ));
        assert!(comparison_triangle(-1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn euclidean_triangle_is_exactly_cat0() {
        let space = SpaceSpec::Euclidean { dim: 2 };
        let (p, q, r) = (v(&[0.0, 0.0]), v(&[3.0, 1.0]), v(&[-1.0, 2.0]));
        let rep = cat_check(&space, [&p, &q, &r], 0.0, DEFAULT_SAMPLES_PER_EDGE).unwrap();
        assert!(rep.satisfied());
        assert_eq!(rep.samples.len(), 27);
        assert!(rep.samples.iter().all(|s| s.slack.abs() < 1e-12));
    }

    #[test]
    fn sphere_octant_violates_cat0() {
        let space = SpaceSpec::Sphere { ambient: 3 };
        let (p, q, r) = (
            v(&[1.0, 0.0, 0.0]),
            v(&[0.0, 1.0, 0.0]),
            v(&[0.0, 0.0, 1.0]),
        );
        let rep = cat_check(&space, [&p, &q, &r], 0.0, DEFAULT_SAMPLES_PER_EDGE).unwrap();
        assert!(!rep.satisfied());
        // midpoint: median of the flat equilateral triangle minus π/2
        let want = 3f64.sqrt() / 2.0 * FRAC_PI_2 - FRAC_PI_2;
        assert!((rep.worst_slack - want).abs() < 1e-12);
        let at_one = cat_check(&space, [&p, &q, &r], 1.0, 9).unwrap();
        assert!(at_one.samples.iter().all(|s| s.slack.abs() < 1e-9));
    }

    #[test]
    fn degenerate_vertices_are_trivially_satisfied() {
        let space = SpaceSpec::Euclidean { dim: 1 };
        let (p, q) = (v(&[0.0]), v(&[1.0]));
        let rep = cat_check(&space, [&p, &p, &q], 0.0, 9).unwrap();
        assert!(rep.satisfied());
        assert!(rep.samples.is_empty());
    }

    #[test]
    fn sphere_arc_is_geodesic_and_chord_is_not() {
        let space = SpaceSpec::Sphere { ambient: 2 };
        let (x, y) = (v(&[1.0, 0.0]), v(&[0.0, 1.0]));
        let rep = check_geodesic_property(&space, &x, &y, 11).unwrap();
        assert!(rep.holds && rep.max_deviation < 1e-8);
        assert!((rep.length - FRAC_PI_2).abs() < 1e-15);

        let chord = |t: f64| {
            let p = [1.0 - t, t];
            let n = crate::linalg::norm(&p);
            Ok(Point::Vector(alloc::vec![p[0] / n, p[1] / n]))
        };
        let rep = check_curve(chord, |a, b| distance(&space, a, b), 11).unwrap();
        assert!(!rep.holds);
    }
}
