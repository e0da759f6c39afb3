use crate::error::{Error, Result};

pub fn check_exponent(q_norm: f64) -> Result<()> {
    if !(q_norm > 2.0) || !q_norm.is_finite() {
        return Err(Error::InvalidParameter {
            name: "q_norm",
            value: q_norm,
            reason: "must be a finite value above 2 (use the euclidean kind for q = 2)",
        });
    }
    Ok(())
}

/// `(Σ |xᵢ − yᵢ|^q)^{1/q}`, scaled by the largest coordinate gap to avoid
/// overflow.
pub fn lq_distance(x: &[f64], y: &[f64], q_norm: f64) -> Result<f64> {
    check_exponent(q_norm)?;
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    let scale = x
        .iter()
        .zip(y)
        .fold(0.0_f64, |m, (a, b)| m.max(libm::fabs(a - b)));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| libm::pow(libm::fabs(a - b) / scale, q_norm))
        .sum();
    Ok(scale * libm::pow(sum, 1.0 / q_norm))
}
