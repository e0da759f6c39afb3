//! Distance matrices, geodesic exponential kernels `exp(−λ d^q)`, the
//! base-point kernel built from a CND metric, and the square-root metric.

use alloc::format;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::space::SpaceSpec;

/// Symmetry and zero-diagonal tolerance for distance matrices, relative to
/// `max(1, max |entry|)`.
pub const DISTANCE_MATRIX_TOLERANCE: f64 = 1e-12;

/// Bandwidth `lambda` and exponent `q` of `k(x, y) = exp(−λ d(x, y)^q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KernelSpec {
    lambda: f64,
    q: f64,
}

impl KernelSpec {
    pub fn new(lambda: f64, q: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "must be positive and finite",
            });
        }
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::InvalidParameter {
                name: "q",
                value: q,
                reason: "must be positive and finite",
            });
        }
        Ok(Self { lambda, q })
    }

    /// Geodesic Gaussian kernel (`q = 2`).
    pub fn gaussian(lambda: f64) -> Result<Self> {
        Self::new(lambda, 2.0)
    }

    /// Geodesic Laplacian kernel (`q = 1`).
    pub fn laplacian(lambda: f64) -> Result<Self> {
        Self::new(lambda, 1.0)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

/// A validated `n×n` distance matrix: finite, symmetric, zero diagonal,
/// nonnegative. Entries within tolerance of symmetric are averaged so the
/// stored matrix is exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    entries: Matrix,
    space: Option<SpaceSpec>,
}

impl DistanceMatrix {
    pub fn new(entries: Matrix, space: Option<SpaceSpec>) -> Result<Self> {
        let n = entries.require_square()?;
        if !entries.is_finite() {
            return Err(Error::InvalidDistanceMatrix {
                reason: "non-finite entry".into(),
            });
        }
        let tol = DISTANCE_MATRIX_TOLERANCE * entries.max_abs().max(1.0);
        let mut m = entries;
        for i in 0..n {
            if m[(i, i)].abs() > tol {
                return Err(Error::InvalidDistanceMatrix {
                    reason: format!("diagonal entry {i} is {}", m[(i, i)]),
                });
            }
            m[(i, i)] = 0.0;
            for j in (i + 1)..n {
                let (a, b) = (m[(i, j)], m[(j, i)]);
                if (a - b).abs() > tol {
                    return Err(Error::InvalidDistanceMatrix {
                        reason: format!("entries ({i},{j}) and ({j},{i}) differ: {a} vs {b}"),
                    });
                }
                if a < 0.0 || b < 0.0 {
                    return Err(Error::InvalidDistanceMatrix {
                        reason: format!("negative entry at ({i},{j}): {}", a.min(b)),
                    });
                }
                let s = 0.5 * (a + b);
                m[(i, j)] = s;
                m[(j, i)] = s;
            }
        }
        Ok(Self { entries: m, space })
    }

    pub fn n(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn space(&self) -> Option<&SpaceSpec> {
        self.space.as_ref()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.max_abs()
    }

    /// `c·D` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter {
                name: "scale",
                value: c,
                reason: "must be positive and finite",
            });
        }
        Ok(Self {
            entries: self.entries.scale(c),
            space: self.space,
        })
    }

    /// Entrywise power `d^p`, e.g. squared distances.
    pub fn powf(&self, p: f64) -> Self {
        Self {
            entries: self.entries.map(|x| libm::pow(x, p)),
            space: self.space,
        }
    }

    pub fn into_matrix(self) -> Matrix {
        self.entries
    }
}

/// Kernel matrix with the spec that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    entries: Matrix,
    kernel: KernelSpec,
    space: Option<SpaceSpec>,
}

impl GramMatrix {
    pub fn n(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn kernel(&self) -> KernelSpec {
        self.kernel
    }

    pub fn space(&self) -> Option<&SpaceSpec> {
        self.space.as_ref()
    }
}

/// `exp(−λ d^q)`.
pub fn exp_kernel_value(d: f64, spec: KernelSpec) -> Result<f64> {
    if !(d >= 0.0) || !d.is_finite() {
        return Err(Error::InvalidParameter {
            name: "distance",
            value: d,
            reason: "must be nonnegative and finite",
        });
    }
    Ok(libm::exp(-spec.lambda * libm::pow(d, spec.q)))
}

pub fn gram_matrix(d: &DistanceMatrix, spec: KernelSpec) -> GramMatrix {
    let n = d.n();
    let mut k = Matrix::identity(n);
    for i in 0..n {
        for j in (i + 1)..n {
            // entries are validated nonnegative and finite
            let v = libm::exp(-spec.lambda * libm::pow(d.get(i, j), spec.q));
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    GramMatrix {
        entries: k,
        kernel: spec,
        space: d.space,
    }
}

/// Base-point kernel `K[i][j] = ½(D[i][i₀] + D[i₀][j] − D[i][j])`, which is
/// positive semidefinite whenever `D` is conditionally negative definite.
/// Row and column `i₀` vanish.
pub fn centered_cnd_kernel(d: &DistanceMatrix, base: usize) -> Result<Matrix> {
    let n = d.n();
    if base >= n {
        return Err(Error::IndexOutOfRange {
            index: base,
            len: n,
        });
    }
    Ok(Matrix::from_fn(n, n, |i, j| {
        0.5 * (d.get(i, base) + d.get(base, j) - d.get(i, j))
    }))
}

/// Entrywise square root of a distance matrix.
pub fn sqrt_distance_matrix(d: &DistanceMatrix) -> DistanceMatrix {
    DistanceMatrix {
        entries: d.entries.map(libm::sqrt),
        space: d.space,
    }
}
