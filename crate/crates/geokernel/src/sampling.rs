//! Seeded samplers.
//!
//! Every sample `i` draws from its own ChaCha8 stream (`seed`, stream `i`),
//! so a sample does not depend on how many draws earlier samples consumed
//! and parallel generation matches sequential generation.

use std::fmt;
use std::str::FromStr;

use geokernel_core::linalg::orthonormalize;
use geokernel_core::manifolds::hyperbolic::exp_at_origin;
use geokernel_core::manifolds::WeightedGraph;
use geokernel_core::{Matrix, Point, PointSet, SpaceSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Ridge added to `GᵀG` so sampled SPD matrices are safely invertible.
pub const SPD_RIDGE: f64 = 1e-3;
pub const STRING_ALPHABET: &[u8] = b"acgt";
pub const STRING_LENGTHS: std::ops::RangeInclusive<usize> = 3..=8;

/// Generator for sample `stream` under `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn normals(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

fn unit_vector(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    loop {
        let v = normals(rng, len);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn sample_one(space: &SpaceSpec, rng: &mut impl Rng) -> Result<Point> {
    Ok(match *space {
        SpaceSpec::Euclidean { dim } | SpaceSpec::Lq { dim, .. } => {
            Point::Vector(normals(rng, dim))
        }
        SpaceSpec::Sphere { ambient } | SpaceSpec::Projective { ambient } => {
            Point::Vector(unit_vector(rng, ambient))
        }
        SpaceSpec::Hyperbolic { dim } => Point::Vector(exp_at_origin(&normals(rng, dim))),
        SpaceSpec::Spd { size, .. } => {
            let g = Matrix::from_vec(size, size, normals(rng, size * size))?;
            let a = g
                .tr_matmul(&g)?
                .add(&Matrix::identity(size).scale(SPD_RIDGE))?;
            Point::Matrix(a.symmetrized()?)
        }
        SpaceSpec::Grassmann { ambient, rank, .. } => loop {
            let a = Matrix::from_vec(ambient, rank, normals(rng, ambient * rank))?;
            let q = orthonormalize(&a)?;
            if q.cols() == rank {
                break Point::Matrix(q);
            }
        },
        SpaceSpec::Graph | SpaceSpec::Tree | SpaceSpec::String => {
            return Err(geokernel_core::Error::Unsupported {
                operation: "point sampling",
                kind: space.kind(),
            }
            .into())
        }
    })
}

/// `n` points of a vector- or matrix-valued space.
///
/// Sphere and projective points are normalized standard normals, hyperbolic
/// points are standard normal tangent vectors at the base point pushed
/// through the exponential map, SPD points are `GᵀG + 10⁻³·I`, Grassmann
/// points are orthonormalized standard normal frames, and Euclidean / lq
/// points are standard normal.
pub fn sample_points(space: &SpaceSpec, n: usize, seed: u64) -> Result<PointSet> {
    space.validate()?;
    let points = (0..n)
        .map(|i| sample_one(space, &mut substream(seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PointSet::new(*space, points)?)
}

/// Random tree on `n` vertices: vertex `i ≥ 1` attaches to a uniform
/// earlier vertex with weight uniform in `[0.1, 1)`.
pub fn random_tree(n: usize, seed: u64) -> Result<WeightedGraph> {
    let mut g = WeightedGraph::new(n);
    for i in 1..n {
        let mut rng = substream(seed, i as u64);
        let parent = rng.random_range(0..i);
        let weight = rng.random_range(0.1..1.0);
        g.add_edge(parent, i, weight)?;
    }
    Ok(g)
}

/// `n` random strings over `acgt` with lengths uniform in `3..=8`.
pub fn random_strings(n: usize, seed: u64) -> Vec<String> {
    (0..n)
        .map(|i| {
            let mut rng = substream(seed, i as u64);
            let len = rng.random_range(STRING_LENGTHS);
            (0..len)
                .map(|_| STRING_ALPHABET[rng.random_range(0..STRING_ALPHABET.len())] as char)
                .collect()
        })
        .collect()
}

/// Two axis-aligned Gaussian clusters in the plane; the first `n/2`
/// samples belong to the first cluster.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterCloud {
    pub centers: [[f64; 2]; 2],
    pub std_dev: [f64; 2],
}

impl Default for ClusterCloud {
    /// Elongated clusters at `(0, ±0.75)` with standard deviations
    /// `(1.0, 0.3)`.
    fn default() -> Self {
        Self {
            centers: [[0.0, -0.75], [0.0, 0.75]],
            std_dev: [1.0, 0.3],
        }
    }
}

impl ClusterCloud {
    pub fn sample(&self, n: usize, seed: u64) -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| {
                let c = self.centers[usize::from(i >= n / 2)];
                let z = normals(&mut substream(seed, i as u64), 2);
                vec![c[0] + self.std_dev[0] * z[0], c[1] + self.std_dev[1] * z[1]]
            })
            .collect()
    }
}

/// Neighborhood rule for geometric graphs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphRule {
    /// Connect pairs at distance `≤ ε`.
    Epsilon(f64),
    /// Connect each point to its `k` nearest neighbors (symmetrized).
    Knn(usize),
    /// `ε` equal to the smallest radius that connects the sample, i.e. the
    /// longest edge of a Euclidean minimum spanning tree.
    ConnectivityRadius,
}

impl Default for GraphRule {
    fn default() -> Self {
        GraphRule::Knn(5)
    }
}

impl fmt::Display for GraphRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphRule::Epsilon(eps) => write!(f, "eps:{eps}"),
            GraphRule::Knn(k) => write!(f, "knn:{k}"),
            GraphRule::ConnectivityRadius => f.write_str("connectivity"),
        }
    }
}

/// Parses `eps:<radius>`, `knn:<k>` or `connectivity`.
impl FromStr for GraphRule {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            HarnessError::Config(format!(
                "bad graph rule {s:?}; expected eps:<r>, knn:<k> or connectivity"
            ))
        };
        match s.split_once(':') {
            None if s == "connectivity" => Ok(GraphRule::ConnectivityRadius),
            Some(("eps", r)) => {
                let r: f64 = r.parse().map_err(|_| bad())?;
                if r > 0.0 && r.is_finite() {
                    Ok(GraphRule::Epsilon(r))
                } else {
                    Err(HarnessError::Config("ε must be positive".into()))
                }
            }
            Some(("knn", k)) => {
                let k: usize = k.parse().map_err(|_| bad())?;
                if k >= 1 {
                    Ok(GraphRule::Knn(k))
                } else {
                    Err(HarnessError::Config("k must be at least 1".into()))
                }
            }
            _ => Err(bad()),
        }
    }
}

fn euclidean_coordinates(points: &PointSet) -> Result<Vec<&[f64]>> {
    if !matches!(points.space(), SpaceSpec::Euclidean { .. }) {
        return Err(HarnessError::Config(format!(
            "neighbor graphs need Euclidean points, got {}",
            points.space()
        )));
    }
    Ok(points
        .points()
        .iter()
        .map(|p| p.as_vector().expect("validated euclidean point"))
        .collect())
}

fn pair_distances(x: &[&[f64]]) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = geokernel_core::manifolds::euclidean_distance(x[i], x[j]);
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    d
}

/// Longest edge of the Euclidean minimum spanning tree (Prim, `O(n²)`).
pub fn connectivity_radius(d: &[Vec<f64>]) -> f64 {
    let n = d.len();
    if n < 2 {
        return 0.0;
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    best[0] = 0.0;
    let mut radius: f64 = 0.0;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]))
            .expect("vertices remain");
        in_tree[u] = true;
        radius = radius.max(best[u]);
        for v in 0..n {
            if !in_tree[v] && d[u][v] < best[v] {
                best[v] = d[u][v];
            }
        }
    }
    radius
}

fn first_unreachable(g: &WeightedGraph) -> Option<usize> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    if n > 0 {
        seen[0] = true;
    }
    while let Some(u) = stack.pop() {
        for &(v, _) in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.iter().position(|s| !s)
}

/// Geometric graph on Euclidean points with edges weighted by Euclidean
/// distance. Fails if the result is disconnected.
#[allow(clippy::needless_range_loop)]
pub fn build_neighbor_graph(points: &PointSet, rule: GraphRule) -> Result<WeightedGraph> {
    let x = euclidean_coordinates(points)?;
    let n = x.len();
    if n < 2 {
        return Err(HarnessError::Config(
            "a neighbor graph needs at least 2 points".into(),
        ));
    }
    let d = pair_distances(&x);
    let mut g = WeightedGraph::new(n);
    let (eps, hint) = match rule {
        GraphRule::Epsilon(eps) => (Some(eps), "ε"),
        GraphRule::ConnectivityRadius => (Some(connectivity_radius(&d)), "ε"),
        GraphRule::Knn(_) => (None, "k"),
    };
    match (eps, rule) {
        (Some(eps), _) => {
            for i in 0..n {
                for j in (i + 1)..n {
                    if d[i][j] > 0.0 && d[i][j] <= eps {
                        g.add_edge(i, j, d[i][j])?;
                    }
                }
            }
        }
        (None, GraphRule::Knn(k)) => {
            for i in 0..n {
                let mut order: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                order.sort_by(|&a, &b| d[i][a].total_cmp(&d[i][b]).then(a.cmp(&b)));
                for &j in order.iter().take(k) {
                    if d[i][j] > 0.0 && !g.has_edge(i, j) {
                        g.add_edge(i, j, d[i][j])?;
                    }
                }
            }
        }
        (None, _) => unreachable!("only kNN has no radius"),
    }
    if let Some(to) = first_unreachable(&g) {
        return Err(HarnessError::DisconnectedGraph {
            source: geokernel_core::Error::Disconnected { from: 0, to },
            hint,
        });
    }
    Ok(g)
}

/// Graph-specific sampling parameters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GraphSampler {
    pub cloud: ClusterCloud,
    pub rule: GraphRule,
}

/// Sample of any space kind: graph samples are the vertices of a neighbor
/// graph on a two-cluster cloud, tree samples are the vertices of a random
/// tree, and string samples are random `acgt` words.
pub fn sample_space(
    space: &SpaceSpec,
    n: usize,
    seed: u64,
    graph: &GraphSampler,
) -> Result<PointSet> {
    match space {
        SpaceSpec::Graph => {
            let cloud = PointSet::new(
                SpaceSpec::Euclidean { dim: 2 },
                graph
                    .cloud
                    .sample(n, seed)
                    .into_iter()
                    .map(Point::Vector)
                    .collect(),
            )?;
            let g = build_neighbor_graph(&cloud, graph.rule)?;
            Ok(PointSet::all_vertices(SpaceSpec::Graph, g)?)
        }
        SpaceSpec::Tree => Ok(PointSet::all_vertices(
            SpaceSpec::Tree,
            random_tree(n, seed)?,
        )?),
        SpaceSpec::String => Ok(PointSet::new(
            SpaceSpec::String,
            random_strings(n, seed)
                .into_iter()
                .map(Point::Text)
                .collect(),
        )?),
        _ => sample_points(space, n, seed),
    }
}

/// One-line description of how [`sample_space`] draws points of `space`.
pub fn describe_sampler(space: &SpaceSpec, graph: &GraphSampler) -> String {
    let how = match space {
        SpaceSpec::Euclidean { .. } | SpaceSpec::Lq { .. } => "standard normal vectors".to_string(),
        SpaceSpec::Sphere { .. } | SpaceSpec::Projective { .. } => {
            "normalized standard normal vectors".to_string()
        }
        SpaceSpec::Hyperbolic { .. } => {
            "exponential map at the base point of standard normal tangent vectors".to_string()
        }
        SpaceSpec::Spd { size, .. } => {
            format!("G^T G + {SPD_RIDGE:e} I with G a standard normal {size}x{size} matrix")
        }
        SpaceSpec::Grassmann { .. } => "orthonormalized standard normal frames".to_string(),
        SpaceSpec::Graph => format!(
            "vertices of a {} graph on a two-cluster Gaussian cloud (centers {:?}, std {:?})",
            graph.rule, graph.cloud.centers, graph.cloud.std_dev
        ),
        SpaceSpec::Tree => "random recursive tree, parent uniform, weights U[0.1, 1)".to_string(),
        SpaceSpec::String => "uniform acgt strings of length 3 to 8".to_string(),
    };
    format!("{how}; ChaCha8 stream i of the seed for sample i")
}
