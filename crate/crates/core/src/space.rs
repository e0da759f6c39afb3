//! Space descriptions, point representations and distance dispatch.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::kernels::DistanceMatrix;
use crate::linalg::Matrix;
use crate::manifolds::{self, graph::WeightedGraph};

/// Tolerance used when validating unit norms, hyperboloid membership and
/// frame orthonormality.
pub const POINT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SpaceKind {
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

impl SpaceKind {
    pub const ALL: [SpaceKind; 10] = [
        SpaceKind::Euclidean,
        SpaceKind::Lq,
        SpaceKind::Sphere,
        SpaceKind::Projective,
        SpaceKind::Hyperbolic,
        SpaceKind::Spd,
        SpaceKind::Grassmann,
        SpaceKind::Graph,
        SpaceKind::Tree,
        SpaceKind::String,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::Euclidean => "euclidean",
            SpaceKind::Lq => "lq",
            SpaceKind::Sphere => "sphere",
            SpaceKind::Projective => "projective",
            SpaceKind::Hyperbolic => "hyperbolic",
            SpaceKind::Spd => "spd",
            SpaceKind::Grassmann => "grassmann",
            SpaceKind::Graph => "graph",
            SpaceKind::Tree => "tree",
            SpaceKind::String => "string",
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SpdMetric {
    Frobenius,
    LogEuclidean,
    AffineInvariant,
    /// Fisher information metric of fixed-mean multivariate normals,
    /// normalized as `affine_invariant / √2`.
    Fisher,
}

impl SpdMetric {
    pub const ALL: [SpdMetric; 4] = [
        SpdMetric::Frobenius,
        SpdMetric::LogEuclidean,
        SpdMetric::AffineInvariant,
        SpdMetric::Fisher,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpdMetric::Frobenius => "frobenius",
            SpdMetric::LogEuclidean => "log_euclidean",
            SpdMetric::AffineInvariant => "affine_invariant",
            SpdMetric::Fisher => "fisher",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum GrassmannMetric {
    /// Arc length `‖θ‖₂` of the principal angles.
    Intrinsic,
    /// Projection-embedding chordal distance `sqrt(Σ sin² θᵢ)`.
    Chordal,
}

impl GrassmannMetric {
    pub const ALL: [GrassmannMetric; 2] = [GrassmannMetric::Intrinsic, GrassmannMetric::Chordal];

    pub fn name(self) -> &'static str {
        match self {
            GrassmannMetric::Intrinsic => "intrinsic",
            GrassmannMetric::Chordal => "chordal",
        }
    }
}

/// A metric space instance. Dimensions are stored per kind so that the
/// metric variant exists exactly for SPD and Grassmann spaces.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum SpaceSpec {
    /// `R^dim` with the Euclidean norm.
    Euclidean { dim: usize },
    /// `R^dim` with the `l_q` norm, `q > 2`.
    Lq { dim: usize, q_norm: f64 },
    /// Unit sphere in `R^ambient`.
    Sphere { ambient: usize },
    /// Lines through the origin of `R^ambient`, represented by unit vectors.
    Projective { ambient: usize },
    /// `H^dim` in the hyperboloid model, points in `R^(dim+1)`.
    Hyperbolic { dim: usize },
    /// Symmetric positive definite `size×size` matrices.
    Spd { size: usize, metric: SpdMetric },
    /// `rank`-dimensional subspaces of `R^ambient`, as orthonormal frames.
    Grassmann {
        ambient: usize,
        rank: usize,
        metric: GrassmannMetric,
    },
    /// Shortest-path metric of a weighted graph.
    Graph,
    /// Path metric of a weighted tree.
    Tree,
    /// Strings under unit-cost edit distance.
    String,
}

impl SpaceSpec {
    pub fn kind(&self) -> SpaceKind {
        match self {
            SpaceSpec::Euclidean { .. } => SpaceKind::Euclidean,
            SpaceSpec::Lq { .. } => SpaceKind::Lq,
            SpaceSpec::Sphere { .. } => SpaceKind::Sphere,
            SpaceSpec::Projective { .. } => SpaceKind::Projective,
            SpaceSpec::Hyperbolic { .. } => SpaceKind::Hyperbolic,
            SpaceSpec::Spd { .. } => SpaceKind::Spd,
            SpaceSpec::Grassmann { .. } => SpaceKind::Grassmann,
            SpaceSpec::Graph => SpaceKind::Graph,
            SpaceSpec::Tree => SpaceKind::Tree,
            SpaceSpec::String => SpaceKind::String,
        }
    }

    /// Name of the metric variant, `"default"` for kinds without variants.
    pub fn variant_name(&self) -> &'static str {
        match self {
            SpaceSpec::Spd { metric, .. } => metric.name(),
            SpaceSpec::Grassmann { metric, .. } => metric.name(),
            _ => "default",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dim_ok = |name: &'static str, d: usize| {
            if d >= 1 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value: d as f64,
                    reason: "must be at least 1",
                })
            }
        };
        match *self {
            SpaceSpec::Euclidean { dim } | SpaceSpec::Hyperbolic { dim } => dim_ok("dim", dim),
            SpaceSpec::Lq { dim, q_norm } => {
                dim_ok("dim", dim)?;
                manifolds::lq::check_exponent(q_norm)
            }
            SpaceSpec::Sphere { ambient } | SpaceSpec::Projective { ambient } => {
                dim_ok("ambient", ambient)
            }
            SpaceSpec::Spd { size, .. } => dim_ok("size", size),
            SpaceSpec::Grassmann { ambient, rank, .. } => {
                dim_ok("ambient", ambient)?;
                dim_ok("rank", rank)?;
                if rank > ambient {
                    return Err(Error::InvalidParameter {
                        name: "rank",
                        value: rank as f64,
                        reason: "must not exceed the ambient dimension",
                    });
                }
                Ok(())
            }
            SpaceSpec::Graph | SpaceSpec::Tree | SpaceSpec::String => Ok(()),
        }
    }

    /// Same space with a different SPD/Grassmann metric; other kinds are
    /// returned unchanged.
    pub fn with_spd_metric(self, metric: SpdMetric) -> Self {
        match self {
            SpaceSpec::Spd { size, .. } => SpaceSpec::Spd { size, metric },
            other => other,
        }
    }

    pub fn with_grassmann_metric(self, metric: GrassmannMetric) -> Self {
        match self {
            SpaceSpec::Grassmann { ambient, rank, .. } => SpaceSpec::Grassmann {
                ambient,
                rank,
                metric,
            },
            other => other,
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Euclidean { dim } => write!(f, "euclidean(R^{dim})"),
            SpaceSpec::Lq { dim, q_norm } => write!(f, "lq(R^{dim}, q={q_norm})"),
            SpaceSpec::Sphere { ambient } => write!(f, "sphere(S^{})", ambient - 1),
            SpaceSpec::Projective { ambient } => write!(f, "projective(P^{})", ambient - 1),
            SpaceSpec::Hyperbolic { dim } => write!(f, "hyperbolic(H^{dim})"),
            SpaceSpec::Spd { size, metric } => write!(f, "spd({size}x{size}, {})", metric.name()),
            SpaceSpec::Grassmann {
                ambient,
                rank,
                metric,
            } => write!(f, "grassmann(G({rank},{ambient}), {})", metric.name()),
            SpaceSpec::Graph => f.write_str("graph"),
            SpaceSpec::Tree => f.write_str("tree"),
            SpaceSpec::String => f.write_str("string"),
        }
    }
}

/// A single element of some space.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Point {
    Vector(Vec<f64>),
    Matrix(Matrix),
    Vertex(usize),
    Text(String),
}

impl Point {
    pub fn as_vector(&self) -> Option<&[f64]> {
        match self {
            Point::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&Matrix> {
        match self {
            Point::Matrix(m) => Some(m),
            _ => None,
        }
    }
}

fn want_vector<'a>(space: &SpaceSpec, p: &'a Point, len: usize) -> Result<&'a [f64]> {
    let v = p
        .as_vector()
        .ok_or(Error::WrongRepresentation { kind: space.kind() })?;
    if v.len() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            found: v.len(),
        });
    }
    Ok(v)
}

fn want_matrix<'a>(
    space: &SpaceSpec,
    p: &'a Point,
    rows: usize,
    cols: usize,
) -> Result<&'a Matrix> {
    let m = p
        .as_matrix()
        .ok_or(Error::WrongRepresentation { kind: space.kind() })?;
    if m.rows() != rows {
        return Err(Error::DimensionMismatch {
            expected: rows,
            found: m.rows(),
        });
    }
    if m.cols() != cols {
        return Err(Error::DimensionMismatch {
            expected: cols,
            found: m.cols(),
        });
    }
    Ok(m)
}

/// Checks that `p` is a valid element of `space`. Graph and tree vertices
/// are range-checked by [`PointSet`], which owns the graph.
pub fn validate_point(space: &SpaceSpec, p: &Point) -> Result<()> {
    match *space {
        SpaceSpec::Euclidean { dim } | SpaceSpec::Lq { dim, .. } => {
            let v = want_vector(space, p, dim)?;
            if v.iter().all(|x| x.is_finite()) {
                Ok(())
            } else {
                Err(Error::NonFinite)
            }
        }
        SpaceSpec::Sphere { ambient } | SpaceSpec::Projective { ambient } => {
            manifolds::sphere::check_unit(want_vector(space, p, ambient)?)
        }
        SpaceSpec::Hyperbolic { dim } => {
            manifolds::hyperbolic::check_on_hyperboloid(want_vector(space, p, dim + 1)?)
        }
        SpaceSpec::Spd { size, .. } => {
            manifolds::spd::check_spd(want_matrix(space, p, size, size)?)
        }
        SpaceSpec::Grassmann { ambient, rank, .. } => {
            manifolds::grassmann::check_frame(want_matrix(space, p, ambient, rank)?)
        }
        SpaceSpec::Graph | SpaceSpec::Tree => match p {
            Point::Vertex(_) => Ok(()),
            _ => Err(Error::WrongRepresentation { kind: space.kind() }),
        },
        SpaceSpec::String => match p {
            Point::Text(_) => Ok(()),
            _ => Err(Error::WrongRepresentation { kind: space.kind() }),
        },
    }
}

/// Distance between two points of a space that does not need auxiliary
/// structure. Graph and tree spaces go through [`PointSet`].
pub fn distance(space: &SpaceSpec, x: &Point, y: &Point) -> Result<f64> {
    match *space {
        SpaceSpec::Euclidean { dim } => Ok(manifolds::euclidean_distance(
            want_vector(space, x, dim)?,
            want_vector(space, y, dim)?,
        )),
        SpaceSpec::Lq { dim, q_norm } => manifolds::lq::lq_distance(
            want_vector(space, x, dim)?,
            want_vector(space, y, dim)?,
            q_norm,
        ),
        SpaceSpec::Sphere { ambient } => manifolds::sphere::sphere_distance(
            want_vector(space, x, ambient)?,
            want_vector(space, y, ambient)?,
        ),
        SpaceSpec::Projective { ambient } => manifolds::sphere::projective_distance(
            want_vector(space, x, ambient)?,
            want_vector(space, y, ambient)?,
        ),
        SpaceSpec::Hyperbolic { dim } => manifolds::hyperbolic::hyperbolic_distance(
            want_vector(space, x, dim + 1)?,
            want_vector(space, y, dim + 1)?,
        ),
        SpaceSpec::Spd { size, metric } => manifolds::spd::spd_distance(
            want_matrix(space, x, size, size)?,
            want_matrix(space, y, size, size)?,
            metric,
        ),
        SpaceSpec::Grassmann {
            ambient,
            rank,
            metric,
        } => manifolds::grassmann::grassmann_distance(
            want_matrix(space, x, ambient, rank)?,
            want_matrix(space, y, ambient, rank)?,
            metric,
        ),
        SpaceSpec::String => match (x, y) {
            (Point::Text(s), Point::Text(t)) => Ok(manifolds::edit::edit_distance(s, t) as f64),
            _ => Err(Error::WrongRepresentation {
                kind: SpaceKind::String,
            }),
        },
        SpaceSpec::Graph | SpaceSpec::Tree => Err(Error::Unsupported {
            operation: "point distance without a graph",
            kind: space.kind(),
        }),
    }
}

/// A homogeneous, validated collection of points of one space.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    space: SpaceSpec,
    points: Vec<Point>,
    graph: Option<WeightedGraph>,
}

impl PointSet {
    /// Validates every point against `space`. Graph and tree spaces must use
    /// [`PointSet::on_graph`].
    pub fn new(space: SpaceSpec, points: Vec<Point>) -> Result<Self> {
        space.validate()?;
        if matches!(space, SpaceSpec::Graph | SpaceSpec::Tree) {
            return Err(Error::Unsupported {
                operation: "point set without a graph",
                kind: space.kind(),
            });
        }
        for p in &points {
            validate_point(&space, p)?;
        }
        Ok(Self {
            space,
            points,
            graph: None,
        })
    }

    /// Vertices of `graph`; for [`SpaceSpec::Tree`] the graph must be a tree.
    pub fn on_graph(space: SpaceSpec, graph: WeightedGraph, vertices: Vec<usize>) -> Result<Self> {
        match space {
            SpaceSpec::Tree => manifolds::tree::check_tree(&graph)?,
            SpaceSpec::Graph => {}
            _ => {
                return Err(Error::Unsupported {
                    operation: "graph-backed point set",
                    kind: space.kind(),
                })
            }
        }
        for &v in &vertices {
            if v >= graph.vertex_count() {
                return Err(Error::IndexOutOfRange {
                    index: v,
                    len: graph.vertex_count(),
                });
            }
        }
        Ok(Self {
            space,
            points: vertices.into_iter().map(Point::Vertex).collect(),
            graph: Some(graph),
        })
    }

    /// All vertices of `graph`, in order.
    pub fn all_vertices(space: SpaceSpec, graph: WeightedGraph) -> Result<Self> {
        let n = graph.vertex_count();
        Self::on_graph(space, graph, (0..n).collect())
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn graph(&self) -> Option<&WeightedGraph> {
        self.graph.as_ref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same points viewed under another SPD or Grassmann metric.
    pub fn with_space(&self, space: SpaceSpec) -> Result<Self> {
        let compatible = match (self.space, space) {
            (SpaceSpec::Spd { size: a, .. }, SpaceSpec::Spd { size: b, .. }) => a == b,
            (
                SpaceSpec::Grassmann {
                    ambient: a,
                    rank: r,
                    ..
                },
                SpaceSpec::Grassmann {
                    ambient: b,
                    rank: s,
                    ..
                },
            ) => a == b && r == s,
            (x, y) => x == y,
        };
        if !compatible {
            return Err(Error::Unsupported {
                operation: "change of space",
                kind: self.space.kind(),
            });
        }
        Ok(Self {
            space,
            points: self.points.clone(),
            graph: self.graph.clone(),
        })
    }

    /// Pairwise distance matrix, dispatching to the distance of the space.
    /// Only the upper triangle is evaluated; the lower one is mirrored.
    pub fn pairwise_distances(&self) -> Result<DistanceMatrix> {
        let n = self.points.len();
        let mut d = Matrix::zeros(n, n);
        match (&self.space, &self.graph) {
            (SpaceSpec::Graph | SpaceSpec::Tree, Some(g)) => {
                let all = if matches!(self.space, SpaceSpec::Tree) {
                    manifolds::tree::tree_distances(g)?
                } else {
                    manifolds::graph::graph_shortest_paths(g)?
                };
                let ids: Vec<usize> = self
                    .points
                    .iter()
                    .map(|p| match p {
                        Point::Vertex(v) => *v,
                        _ => unreachable!("graph point sets hold vertices"),
                    })
                    .collect();
                for i in 0..n {
                    for j in 0..n {
                        d[(i, j)] = all[(ids[i], ids[j])];
                    }
                }
            }
            _ => {
                for i in 0..n {
                    for j in (i + 1)..n {
                        let v = distance(&self.space, &self.points[i], &self.points[j])?;
                        d[(i, j)] = v;
                        d[(j, i)] = v;
                    }
                }
            }
        }
        DistanceMatrix::new(d, Some(self.space))
    }
}
