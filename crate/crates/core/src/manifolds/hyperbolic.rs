//! Hyperbolic space in the hyperboloid model `{x : ⟨x,x⟩_M = −1, x₀ > 0}`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::space::POINT_TOLERANCE;

/// Minkowski form `−x₀y₀ + Σᵢ xᵢyᵢ`.
pub fn minkowski(x: &[f64], y: &[f64]) -> f64 {
    -x[0] * y[0] + x[1..].iter().zip(&y[1..]).map(|(a, b)| a * b).sum::<f64>()
}

/// The tolerance on `⟨x,x⟩_M + 1` scales with `x₀²` since that is the
/// magnitude of the cancelling terms.
pub fn check_on_hyperboloid(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    let q = minkowski(x, x);
    let x0 = x[0];
    let tol = POINT_TOLERANCE * (x0 * x0).max(1.0);
    if !q.is_finite() || !(x0 > 0.0) || libm::fabs(q + 1.0) > tol {
        return Err(Error::OffHyperboloid {
            minkowski_norm: q,
            x0,
        });
    }
    Ok(())
}

/// `arcosh(−⟨x,y⟩_M)`, evaluated as `2·asinh(‖x−y‖_M / 2)` where
/// `‖x−y‖²_M = ⟨x−y, x−y⟩_M = 2(cosh d − 1)` is nonnegative on the sheet.
pub fn hyperbolic_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    check_on_hyperboloid(x)?;
    check_on_hyperboloid(y)?;
    Ok(distance_unchecked(x, y))
}

pub(crate) fn distance_unchecked(x: &[f64], y: &[f64]) -> f64 {
    let d0 = x[0] - y[0];
    let spatial: f64 = x[1..]
        .iter()
        .zip(&y[1..])
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let chord2 = (spatial - d0 * d0).max(0.0);
    2.0 * libm::asinh(0.5 * libm::sqrt(chord2))
}

/// Exponential map at the base point `(1, 0, …, 0)` applied to the tangent
/// vector `(0, v)`.
pub fn exp_at_origin(v: &[f64]) -> Vec<f64> {
    let r = libm::sqrt(v.iter().map(|x| x * x).sum());
    let mut out = Vec::with_capacity(v.len() + 1);
    out.push(libm::cosh(r));
    if r == 0.0 {
        out.extend(v.iter().map(|_| 0.0));
    } else {
        let s = libm::sinh(r) / r;
        out.extend(v.iter().map(|x| s * x));
    }
    out
}

pub(crate) fn interpolate(x: &[f64], y: &[f64], t: f64) -> Vec<f64> {
    let len = distance_unchecked(x, y);
    if len == 0.0 {
        return x.to_vec();
    }
    // tangent at x towards y: y + ⟨x,y⟩ x, Minkowski norm sinh(len)
    let c = minkowski(x, y);
    let u: Vec<f64> = y.iter().zip(x).map(|(b, a)| b + c * a).collect();
    let un = libm::sqrt(minkowski(&u, &u).max(0.0));
    let un = if un > 0.0 { un } else { libm::sinh(len) };
    let (ch, sh) = (libm::cosh(t * len), libm::sinh(t * len));
    x.iter()
        .zip(&u)
        .map(|(a, b)| ch * a + sh * b / un)
        .collect()
}
