//! Symmetric positive definite matrices under four metrics.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{cholesky, solve_lower, symmetric_eigen, Matrix};
use crate::space::SpdMetric;

/// Eigenvalues are clamped below at this value before taking logarithms.
pub const LOG_EIGEN_FLOOR: f64 = 1e-14;

/// Relative tolerance on `|a_ij − a_ji|` accepted as symmetric.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

pub fn check_symmetric(a: &Matrix) -> Result<()> {
    a.require_square()?;
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let asym = a.max_asymmetry();
    if asym > SYMMETRY_TOLERANCE * a.max_abs().max(1.0) {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    Ok(())
}

pub fn check_spd(a: &Matrix) -> Result<()> {
    check_symmetric(a)?;
    let min_eigenvalue = symmetric_eigen(&a.symmetrized()?, false)?
        .values
        .first()
        .copied()
        .unwrap_or(f64::INFINITY);
    if !(min_eigenvalue > 0.0) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue });
    }
    Ok(())
}

/// Matrix logarithm via the symmetric eigendecomposition.
pub fn logm(a: &Matrix) -> Result<Matrix> {
    let e = symmetric_eigen(&a.symmetrized()?, true)?;
    Ok(e.map_spectrum(|x| libm::log(x.max(LOG_EIGEN_FLOOR))))
}

/// Matrix exponential of a symmetric matrix.
pub fn expm(s: &Matrix) -> Result<Matrix> {
    let e = symmetric_eigen(&s.symmetrized()?, true)?;
    Ok(e.map_spectrum(libm::exp))
}

/// `A^t` for SPD `A`.
pub fn powm(a: &Matrix, t: f64) -> Result<Matrix> {
    let e = symmetric_eigen(&a.symmetrized()?, true)?;
    Ok(e.map_spectrum(|x| libm::pow(x.max(LOG_EIGEN_FLOOR), t)))
}

/// `L⁻¹ B L⁻ᵀ` where `A = L Lᵀ`; its eigenvalues are those of `A⁻¹B`.
fn whitened(a: &Matrix, b: &Matrix) -> Result<(Matrix, Matrix)> {
    let l = cholesky(a)?;
    let x = solve_lower(&l, b)?;
    let c = solve_lower(&l, &x.transpose())?;
    Ok((l, c.symmetrized()?))
}

/// Logarithms of the generalized eigenvalues `λᵢ(A⁻¹B)`.
pub fn log_generalized_eigenvalues(a: &Matrix, b: &Matrix) -> Result<Vec<f64>> {
    let (_, c) = whitened(a, b)?;
    Ok(symmetric_eigen(&c, false)?
        .values
        .into_iter()
        .map(|x| libm::log(x.max(LOG_EIGEN_FLOOR)))
        .collect())
}

pub fn spd_distance(a: &Matrix, b: &Matrix, metric: SpdMetric) -> Result<f64> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.rows(),
        });
    }
    check_spd(a)?;
    check_spd(b)?;
    match metric {
        SpdMetric::Frobenius => Ok(a.sub(b)?.frobenius_norm()),
        SpdMetric::LogEuclidean => Ok(logm(a)?.sub(&logm(b)?)?.frobenius_norm()),
        SpdMetric::AffineInvariant => affine_invariant(a, b),
        SpdMetric::Fisher => Ok(affine_invariant(a, b)? * core::f64::consts::FRAC_1_SQRT_2),
    }
}

fn affine_invariant(a: &Matrix, b: &Matrix) -> Result<f64> {
    let logs = log_generalized_eigenvalues(a, b)?;
    Ok(libm::sqrt(logs.iter().map(|x| x * x).sum()))
}

pub(crate) fn interpolate(a: &Matrix, b: &Matrix, metric: SpdMetric, t: f64) -> Result<Matrix> {
    match metric {
        SpdMetric::Frobenius => a.scale(1.0 - t).add(&b.scale(t)),
        SpdMetric::LogEuclidean => expm(&logm(a)?.scale(1.0 - t).add(&logm(b)?.scale(t))?),
        // γ(t) = L (L⁻¹ B L⁻ᵀ)^t Lᵀ
        SpdMetric::AffineInvariant => {
            let (l, c) = whitened(a, b)?;
            l.matmul(&powm(&c, t)?)?
                .matmul(&l.transpose())?
                .symmetrized()
        }
        SpdMetric::Fisher => Err(Error::Unsupported {
            operation: "geodesic interpolation (fisher)",
            kind: crate::space::SpaceKind::Spd,
        }),
    }
}
