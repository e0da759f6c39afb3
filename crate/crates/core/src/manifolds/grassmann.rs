//! Grassmannians of `k`-planes in `R^n`, represented by orthonormal frames.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{singular_values, Matrix};
use crate::space::{GrassmannMetric, POINT_TOLERANCE};

pub fn check_frame(u: &Matrix) -> Result<()> {
    if !u.is_finite() {
        return Err(Error::NonFinite);
    }
    let gram = u.tr_matmul(u)?;
    let deviation = gram.sub(&Matrix::identity(u.cols()))?.max_abs();
    if deviation > POINT_TOLERANCE {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(())
}

/// Principal angles in ascending order.
///
/// Cosines come from the singular values of `UᵀV`. Angles whose cosine
/// exceeds `1/√2` are recomputed from the sines, the singular values of
/// `V − U(UᵀV)`, where `arccos` would lose half the digits.
pub fn principal_angles(u: &Matrix, v: &Matrix) -> Result<Vec<f64>> {
    if u.rows() != v.rows() {
        return Err(Error::DimensionMismatch {
            expected: u.rows(),
            found: v.rows(),
        });
    }
    if u.cols() != v.cols() {
        return Err(Error::DimensionMismatch {
            expected: u.cols(),
            found: v.cols(),
        });
    }
    check_frame(u)?;
    check_frame(v)?;
    let m = u.tr_matmul(v)?;
    let cosines: Vec<f64> = singular_values(&m)
        .into_iter()
        .map(|s| s.clamp(0.0, 1.0))
        .collect();
    let need_sines = cosines.iter().any(|&c| c > FRAC_1_SQRT_2);
    let sines: Vec<f64> = if need_sines {
        let w = v.sub(&u.matmul(&m)?)?;
        let mut s: Vec<f64> = singular_values(&w)
            .into_iter()
            .map(|s| s.clamp(0.0, 1.0))
            .collect();
        s.reverse();
        s
    } else {
        Vec::new()
    };
    Ok(cosines
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if c > FRAC_1_SQRT_2 {
                libm::asin(sines[i])
            } else {
                libm::acos(c)
            }
        })
        .collect())
}

pub fn grassmann_distance(u: &Matrix, v: &Matrix, metric: GrassmannMetric) -> Result<f64> {
    let angles = principal_angles(u, v)?;
    let sum: f64 = match metric {
        GrassmannMetric::Intrinsic => angles.iter().map(|t| t * t).sum(),
        GrassmannMetric::Chordal => angles
            .iter()
            .map(|&t| {
                let s = libm::sin(t);
                s * s
            })
            .sum(),
    };
    Ok(libm::sqrt(sum))
}
