//! Eigenspectra and empirical PD / CND verdicts.
//!
//! Verdicts from finite samples are one-sided: a negative eigenvalue beyond
//! tolerance is a witness against positive definiteness, while a clean
//! spectrum only means no violation was found at this sample size.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::kernels::{gram_matrix, DistanceMatrix, GramMatrix, KernelSpec};
use crate::linalg::{symmetric_eigen, Matrix};
use crate::space::SpaceSpec;

/// Relative symmetry tolerance for [`eigenspectrum`] input.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Default verdict tolerance `1e-8 · n · max|entry|`.
pub fn default_tolerance(n: usize, max_abs: f64) -> f64 {
    1e-8 * n as f64 * max_abs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum Verdict {
    Pd,
    NotPd,
    Cnd,
    NotCnd,
}

impl Verdict {
    /// True for `Pd` and `Cnd`.
    pub fn holds(self) -> bool {
        matches!(self, Verdict::Pd | Verdict::Cnd)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pd => "PD (no violation found)",
            Verdict::NotPd => "NOT PD (witness found)",
            Verdict::Cnd => "CND (no violation found)",
            Verdict::NotCnd => "NOT CND (witness found)",
        })
    }
}

fn check_symmetric(s: &Matrix) -> Result<usize> {
    let n = s.require_square()?;
    if !s.is_finite() {
        return Err(Error::NonFinite);
    }
    let asym = s.max_asymmetry();
    if asym > SYMMETRY_TOLERANCE * s.max_abs() {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    Ok(n)
}

/// All eigenvalues of a symmetric matrix, in descending order.
pub fn eigenspectrum(s: &Matrix) -> Result<Vec<f64>> {
    check_symmetric(s)?;
    let mut values = symmetric_eigen(&s.symmetrized()?, false)?.values;
    values.reverse();
    Ok(values)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PdCheck {
    pub verdict: Verdict,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
}

/// PD iff the minimum eigenvalue is at least `−tol`; `tol` defaults to
/// [`default_tolerance`].
pub fn pd_verdict(k: &Matrix, tol: Option<f64>) -> Result<PdCheck> {
    let eig = eigenspectrum(k)?;
    let tolerance = tol.unwrap_or_else(|| default_tolerance(k.rows(), k.max_abs()));
    let min_eigenvalue = eig.last().copied().unwrap_or(0.0);
    Ok(PdCheck {
        verdict: if min_eigenvalue >= -tolerance {
            Verdict::Pd
        } else {
            Verdict::NotPd
        },
        min_eigenvalue,
        tolerance,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CndCheck {
    pub verdict: Verdict,
    /// Most negative eigenvalue of `−D` on the complement of `𝟙`; zero when
    /// that complement is trivial (`n ≤ 1`).
    pub witness: f64,
    pub tolerance: f64,
    pub sample_size: usize,
}

/// `−D` compressed onto the orthogonal complement of `𝟙`, as an
/// `(n−1)×(n−1)` matrix. A Householder reflection `H` maps `𝟙/√n` to `e₀`;
/// the trailing block of `H(−D)H` is the compression.
fn deflated_negative(d: &Matrix) -> Result<Matrix> {
    let n = d.require_square()?;
    if n <= 1 {
        return Ok(Matrix::zeros(0, 0));
    }
    let a = d.scale(-1.0);
    let inv_sqrt_n = 1.0 / libm::sqrt(n as f64);
    // u = 𝟙/√n − e₀, normalized
    let mut u: Vec<f64> = alloc::vec![inv_sqrt_n; n];
    u[0] -= 1.0;
    let un = libm::sqrt(u.iter().map(|x| x * x).sum());
    for x in u.iter_mut() {
        *x /= un;
    }
    // H A H = A − 2 u vᵀ − 2 v uᵀ + 4 c u uᵀ with v = A u, c = uᵀ A u
    let v: Vec<f64> = (0..n)
        .map(|i| a.row(i).iter().zip(&u).map(|(x, y)| x * y).sum())
        .collect();
    let c: f64 = u.iter().zip(&v).map(|(x, y)| x * y).sum();
    let m = Matrix::from_fn(n - 1, n - 1, |i, j| {
        let (i, j) = (i + 1, j + 1);
        a[(i, j)] - 2.0 * u[i] * v[j] - 2.0 * v[i] * u[j] + 4.0 * c * u[i] * u[j]
    });
    m.symmetrized()
}

fn check_zero_diagonal(d: &Matrix) -> Result<()> {
    let n = check_symmetric(d)?;
    let tol = crate::kernels::DISTANCE_MATRIX_TOLERANCE * d.max_abs().max(1.0);
    for i in 0..n {
        if d[(i, i)].abs() > tol {
            return Err(Error::InvalidDistanceMatrix {
                reason: alloc::format!("diagonal entry {i} is {}", d[(i, i)]),
            });
        }
    }
    Ok(())
}

/// CND iff `−D` is positive semidefinite on vectors summing to zero, up to
/// `tol` (default [`default_tolerance`] of `D`).
pub fn cnd_verdict(d: &Matrix, tol: Option<f64>) -> Result<CndCheck> {
    check_zero_diagonal(d)?;
    let n = d.rows();
    let tolerance = tol.unwrap_or_else(|| default_tolerance(n, d.max_abs()));
    let deflated = deflated_negative(d)?;
    let witness = symmetric_eigen(&deflated, false)?
        .values
        .first()
        .copied()
        .unwrap_or(0.0);
    Ok(CndCheck {
        verdict: if witness >= -tolerance {
            Verdict::Cnd
        } else {
            Verdict::NotCnd
        },
        witness,
        tolerance,
        sample_size: n,
    })
}

/// Sorted spectrum of an analyzed matrix with its verdict.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumReport {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub kernel: Option<KernelSpec>,
    pub space: Option<SpaceSpec>,
    pub sample_size: usize,
}

impl SpectrumReport {
    /// Spectrum and PD verdict of a Gram matrix.
    pub fn for_gram(g: &GramMatrix, tol: Option<f64>) -> Result<Self> {
        let eigenvalues = eigenspectrum(g.entries())?;
        let tolerance = tol.unwrap_or_else(|| default_tolerance(g.n(), g.entries().max_abs()));
        let min_eigenvalue = eigenvalues.last().copied().unwrap_or(0.0);
        Ok(Self {
            verdict: if min_eigenvalue >= -tolerance {
                Verdict::Pd
            } else {
                Verdict::NotPd
            },
            eigenvalues,
            min_eigenvalue,
            tolerance,
            kernel: Some(g.kernel()),
            space: g.space().copied(),
            sample_size: g.n(),
        })
    }

    /// Spectrum of `−D` on the complement of `𝟙` with the CND verdict.
    /// Holds `n − 1` eigenvalues.
    pub fn for_cnd(d: &DistanceMatrix, tol: Option<f64>) -> Result<Self> {
        let m = d.entries();
        check_zero_diagonal(m)?;
        let n = d.n();
        let tolerance = tol.unwrap_or_else(|| default_tolerance(n, m.max_abs()));
        let mut eigenvalues = symmetric_eigen(&deflated_negative(m)?, false)?.values;
        eigenvalues.reverse();
        let min_eigenvalue = eigenvalues.last().copied().unwrap_or(0.0);
        Ok(Self {
            verdict: if min_eigenvalue >= -tolerance {
                Verdict::Cnd
            } else {
                Verdict::NotCnd
            },
            eigenvalues,
            min_eigenvalue,
            tolerance,
            kernel: None,
            space: d.space().copied(),
            sample_size: n,
        })
    }
}

/// Strictly increasing list of positive bandwidths.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<f64>", into = "Vec<f64>"))]
pub struct LambdaGrid(Vec<f64>);

impl LambdaGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter {
                name: "lambda grid",
                value: 0.0,
                reason: "must not be empty",
            });
        }
        for &v in &values {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "lambda",
                    value: v,
                    reason: "must be positive and finite",
                });
            }
        }
        for w in values.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParameter {
                    name: "lambda",
                    value: w[1],
                    reason: "grid must be strictly increasing",
                });
            }
        }
        Ok(Self(values))
    }

    /// `count` logarithmically spaced points from `min` to `max` inclusive.
    pub fn log_spaced(min: f64, max: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidParameter {
                name: "count",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        if !(min > 0.0) || !(max >= min) || !max.is_finite() {
            return Err(Error::InvalidParameter {
                name: "lambda range",
                value: min,
                reason: "need 0 < min <= max",
            });
        }
        if count == 1 {
            return Self::new(alloc::vec![min]);
        }
        let (lo, hi) = (libm::log10(min), libm::log10(max));
        let step = (hi - lo) / (count - 1) as f64;
        let values = (0..count)
            .map(|i| match i {
                0 => min,
                i if i == count - 1 => max,
                i => libm::pow(10.0, lo + step * i as f64),
            })
            .collect();
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for LambdaGrid {
    /// 20 log-spaced points in `[10⁻², 10³]`.
    fn default() -> Self {
        Self::log_spaced(1e-2, 1e3, 20).expect("default grid is valid")
    }
}

impl TryFrom<Vec<f64>> for LambdaGrid {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<LambdaGrid> for Vec<f64> {
    fn from(g: LambdaGrid) -> Self {
        g.0
    }
}

/// Parses `min:max:count`.
impl FromStr for LambdaGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: &'static str| Error::InvalidParameter {
            name: "lambda grid",
            value: f64::NAN,
            reason,
        };
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected min:max:count"));
        }
        let min: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| bad("min is not a number"))?;
        let max: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| bad("max is not a number"))?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| bad("count is not an integer"))?;
        Self::log_spaced(min, max, count)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum SweepVerdict {
    PdForAllTested,
    FailsAt(Vec<f64>),
}

impl SweepVerdict {
    pub fn passes(&self) -> bool {
        matches!(self, SweepVerdict::PdForAllTested)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LambdaSweep {
    pub grid: LambdaGrid,
    pub q: f64,
    pub min_eigenvalues: Vec<f64>,
    pub tolerances: Vec<f64>,
    pub verdict: SweepVerdict,
}

impl LambdaSweep {
    /// Summarizes per-λ Gram spectra, in grid order.
    pub fn from_reports(grid: LambdaGrid, q: f64, reports: &[SpectrumReport]) -> Self {
        let min_eigenvalues: Vec<f64> = reports.iter().map(|r| r.min_eigenvalue).collect();
        let tolerances: Vec<f64> = reports.iter().map(|r| r.tolerance).collect();
        let failing: Vec<f64> = grid
            .values()
            .iter()
            .zip(reports)
            .filter(|(_, r)| !r.verdict.holds())
            .map(|(&l, _)| l)
            .collect();
        Self {
            grid,
            q,
            min_eigenvalues,
            tolerances,
            verdict: if failing.is_empty() {
                SweepVerdict::PdForAllTested
            } else {
                SweepVerdict::FailsAt(failing)
            },
        }
    }

    /// Most negative minimum eigenvalue over the grid, with its λ.
    pub fn worst(&self) -> (f64, f64) {
        self.grid.values().iter().zip(&self.min_eigenvalues).fold(
            (f64::NAN, f64::INFINITY),
            |(bl, be), (&l, &e)| {
                if e < be {
                    (l, e)
                } else {
                    (bl, be)
                }
            },
        )
    }
}

/// Gram spectra of `exp(−λ D^q)` for every λ in the grid.
pub fn sweep_spectra(d: &DistanceMatrix, q: f64, grid: &LambdaGrid) -> Result<Vec<SpectrumReport>> {
    grid.values()
        .iter()
        .map(|&lambda| {
            let spec = KernelSpec::new(lambda, q)?;
            SpectrumReport::for_gram(&gram_matrix(d, spec), None)
        })
        .collect()
}

pub fn lambda_sweep(d: &DistanceMatrix, q: f64, grid: &LambdaGrid) -> Result<LambdaSweep> {
    let reports = sweep_spectra(d, q, grid)?;
    Ok(LambdaSweep::from_reports(grid.clone(), q, &reports))
}

/// Finite-sample Schoenberg check: the CND verdict of `D` against the
/// `q = 1` λ-sweep.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SchonbergReport {
    pub cnd: CndCheck,
    pub sweep: LambdaSweep,
    pub consistent: bool,
}

impl fmt::Display for SchonbergReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lambda, min_eig) = self.sweep.worst();
        write!(
            f,
            "{}: {} (deflated min eig {:.3e}) vs Laplacian sweep {} (worst λ={lambda:.3e}, min eig={min_eig:.3e})",
            if self.consistent { "consistent" } else { "INCONSISTENT" },
            self.cnd.verdict,
            self.cnd.witness,
            if self.sweep.verdict.passes() { "PD at all λ" } else { "fails" },
        )
    }
}

pub fn schonberg_crosscheck(d: &DistanceMatrix, grid: &LambdaGrid) -> Result<SchonbergReport> {
    let cnd = cnd_verdict(d.entries(), None)?;
    let sweep = lambda_sweep(d, 1.0, grid)?;
    let consistent = cnd.verdict.holds() == sweep.verdict.passes();
    Ok(SchonbergReport {
        cnd,
        sweep,
        consistent,
    })
}

/// Human-readable sweep summary in the one-sided wording used by the CLI.
pub fn describe_sweep(sweep: &LambdaSweep) -> String {
    match &sweep.verdict {
        SweepVerdict::PdForAllTested => match sweep.grid.len() {
            1 => alloc::format!(
                "PD (no violation found at λ={:.6e})",
                sweep.grid.values()[0]
            ),
            n => alloc::format!("PD (no violation found at {n} grid points)"),
        },
        SweepVerdict::FailsAt(_) => {
            let (lambda, min_eig) = sweep.worst();
            alloc::format!("NOT PD (witness λ={lambda:.6e}, min eig={min_eig:.6e})")
        }
    }
}
