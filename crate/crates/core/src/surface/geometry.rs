//! Hyperbolic triangle trigonometry from side lengths.

use crate::error::{Error, Result};

/// Strict triangle inequalities on three finite positive lengths.
pub fn satisfies_triangle_inequality(a: f64, b: f64, c: f64) -> bool {
    a > 0.0 && b > 0.0 && c > 0.0 && a < b + c && b < c + a && c < a + b
}

/// Angle between sides `a` and `b`, opposite `c`, in a hyperbolic triangle.
///
/// Evaluated through the half-angle tangent
/// `tan^2(g/2) = sinh(s-a) sinh(s-b) / (sinh s sinh(s-c))`, which agrees
/// with `arccos((cosh a cosh b - cosh c) / (sinh a sinh b))` but keeps full
/// relative accuracy for short sides and for angles near `0` or `pi`.
pub fn corner_angle(a: f64, b: f64, c: f64) -> Result<f64> {
    if !satisfies_triangle_inequality(a, b, c) {
        return Err(Error::TriangleInequality {
            triangle: usize::MAX,
            edges: ["a".into(), "b".into(), "c".into()],
            lengths: [a, b, c],
        });
    }
    Ok(corner_angle_unchecked(a, b, c))
}

pub(crate) fn corner_angle_unchecked(a: f64, b: f64, c: f64) -> f64 {
    let s = 0.5 * (a + b + c);
    let num = (s - a).sinh() * (s - b).sinh();
    let den = s.sinh() * (s - c).sinh();
    2.0 * (num / den).sqrt().atan()
}

/// The law-of-cosines form, kept for cross-checks.
pub fn corner_angle_arccos(a: f64, b: f64, c: f64) -> f64 {
    ((a.cosh() * b.cosh() - c.cosh()) / (a.sinh() * b.sinh())).clamp(-1.0, 1.0).acos()
}

/// Partial derivatives `(d/da, d/db, d/dc)` of the angle between `a` and `b`.
///
/// From `cos g = (cosh a cosh b - cosh c) / (sinh a sinh b)`:
/// `d cos g / da = coth b - cos g coth a` and `d cos g / dc = -sinh c / (sinh a sinh b)`.
pub fn corner_angle_gradient(a: f64, b: f64, c: f64) -> [f64; 3] {
    let g = corner_angle_unchecked(a, b, c);
    let (sin_g, cos_g) = g.sin_cos();
    let coth = |x: f64| x.cosh() / x.sinh();
    let dcos_da = coth(b) - cos_g * coth(a);
    let dcos_db = coth(a) - cos_g * coth(b);
    let dcos_dc = -c.sinh() / (a.sinh() * b.sinh());
    [-dcos_da / sin_g, -dcos_db / sin_g, -dcos_dc / sin_g]
}

/// Area `pi - (alpha + beta + gamma)` of a hyperbolic triangle.
pub fn triangle_area(a: f64, b: f64, c: f64) -> f64 {
    std::f64::consts::PI
        - corner_angle_unchecked(a, b, c)
        - corner_angle_unchecked(b, c, a)
        - corner_angle_unchecked(c, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn equilateral_cosh_three() {
        let a = 3f64.acosh();
        // (9 - 3) / 8 = 3/4
        assert_abs_diff_eq!(corner_angle(a, a, a).unwrap(), 0.75f64.acos(), epsilon = 1e-14);
    }

    #[test]
    fn euclidean_limit() {
        let a = 1e-4;
        assert_abs_diff_eq!(corner_angle(a, a, a).unwrap(), PI / 3.0, epsilon = 1e-6);
    }

    #[test]
    fn matches_arccos_form() {
        for (a, b, c) in [(1.0, 1.3, 1.6), (0.5, 2.0, 1.8), (3.0, 2.5, 0.9), (0.2, 0.3, 0.45)] {
            assert_abs_diff_eq!(
                corner_angle(a, b, c).unwrap(),
                corner_angle_arccos(a, b, c),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn rejects_degenerate() {
        assert!(corner_angle(1.0, 1.0, 10.0).is_err());
        assert!(corner_angle(1.0, 1.0, 2.0).is_err());
        assert!(corner_angle(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn gradient_matches_central_differences() {
        let (a, b, c) = (0.9, 1.4, 1.1);
        let g = corner_angle_gradient(a, b, c);
        let h = 1e-6;
        let fd = [
            (corner_angle_unchecked(a + h, b, c) - corner_angle_unchecked(a - h, b, c)) / (2.0 * h),
            (corner_angle_unchecked(a, b + h, c) - corner_angle_unchecked(a, b - h, c)) / (2.0 * h),
            (corner_angle_unchecked(a, b, c + h) - corner_angle_unchecked(a, b, c - h)) / (2.0 * h),
        ];
        for k in 0..3 {
            assert_abs_diff_eq!(g[k], fd[k], epsilon = 1e-8);
        }
        assert!(g[2] > 0.0);
    }

    #[test]
    fn angle_sum_below_pi() {
        for (a, b, c) in [(1.0, 1.3, 1.6), (0.01, 0.012, 0.015), (4.0, 4.0, 4.0)] {
            assert!(triangle_area(a, b, c) > 0.0);
        }
    }
}
