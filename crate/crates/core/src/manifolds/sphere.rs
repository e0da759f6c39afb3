//! Unit sphere and real projective space, both represented by unit vectors.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::space::POINT_TOLERANCE;

pub fn check_unit(x: &[f64]) -> Result<()> {
    let n = norm(x);
    if !n.is_finite() || libm::fabs(n - 1.0) > POINT_TOLERANCE {
        return Err(Error::NotUnitNorm { norm: n });
    }
    Ok(())
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    check_unit(x)?;
    check_unit(y)
}

/// `(‖x − y‖, ‖x + y‖)`, i.e. `(2 sin θ/2, 2 cos θ/2)` for unit vectors.
fn half_chords(x: &[f64], y: &[f64]) -> (f64, f64) {
    let (mut minus, mut plus) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        minus += (a - b) * (a - b);
        plus += (a + b) * (a + b);
    }
    (libm::sqrt(minus), libm::sqrt(plus))
}

/// Great-circle distance `arccos⟨x, y⟩`, evaluated as `2·atan2(‖x−y‖, ‖x+y‖)`
/// which stays accurate near 0 and π.
pub fn sphere_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    Ok(angle(x, y))
}

pub(crate) fn angle(x: &[f64], y: &[f64]) -> f64 {
    let (minus, plus) = half_chords(x, y);
    2.0 * libm::atan2(minus, plus)
}

/// `arccos|⟨x, y⟩|`, the angle between the lines spanned by `x` and `y`.
pub fn projective_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    check_pair(x, y)?;
    let (minus, plus) = half_chords(x, y);
    Ok(2.0 * libm::atan2(minus.min(plus), minus.max(plus)))
}

pub(crate) fn interpolate(x: &[f64], y: &[f64], t: f64) -> Result<Vec<f64>> {
    let (minus, plus) = half_chords(x, y);
    if plus < 1e-12 {
        return Err(Error::GeodesicNotUnique);
    }
    let theta = 2.0 * libm::atan2(minus, plus);
    if theta == 0.0 {
        return Ok(x.to_vec());
    }
    // unit tangent at x pointing towards y
    let c = dot(x, y);
    let mut u: Vec<f64> = y.iter().zip(x).map(|(b, a)| b - c * a).collect();
    let un = norm(&u);
    for v in u.iter_mut() {
        *v /= un;
    }
    let (s, co) = (libm::sin(t * theta), libm::cos(t * theta));
    Ok(x.iter().zip(&u).map(|(a, b)| co * a + s * b).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI};

    const E1: [f64; 3] = [1.0, 0.0, 0.0];
    const E2: [f64; 3] = [0.0, 1.0, 0.0];

    #[test]
    fn sphere_closed_forms() {
        assert_eq!(sphere_distance(&E1, &E1).unwrap(), 0.0);
        assert!((sphere_distance(&E1, &E2).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((sphere_distance(&E1, &[-1.0, 0.0, 0.0]).unwrap() - PI).abs() < 1e-15);
    }

    #[test]
    fn projective_closed_forms() {
        assert!((projective_distance(&E1, &E2).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(projective_distance(&E1, &[-1.0, 0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn non_unit_input_names_the_norm() {
        let err = sphere_distance(&[2.0, 0.0, 0.0], &E1).unwrap_err();
        assert_eq!(err, Error::NotUnitNorm { norm: 2.0 });
        assert!(projective_distance(&E1, &[0.5, 0.0, 0.0]).is_err());
    }

    #[test]
    fn antipodal_geodesic_is_rejected() {
        assert_eq!(
            interpolate(&E1, &[-1.0, 0.0, 0.0], 0.5).unwrap_err(),
            Error::GeodesicNotUnique
        );
    }

    #[test]
    fn midpoint_of_orthogonal_pair() {
        let m = interpolate(&E1, &E2, 0.5).unwrap();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert!((m[0] - r).abs() < 1e-15 && (m[1] - r).abs() < 1e-15 && m[2].abs() < 1e-15);
    }
}
