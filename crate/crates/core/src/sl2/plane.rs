//! Points of the upper half-plane and the Mobius action of `PSL(2, R)`.

use num_complex::Complex64;

use super::algebra::{classify, Sl2Matrix};
use crate::error::{Error, Result};

/// A point `x + iy` of the upper half-plane, `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicPoint {
    pub x: f64,
    pub y: f64,
}

impl HyperbolicPoint {
    pub const I: HyperbolicPoint = HyperbolicPoint { x: 0.0, y: 1.0 };

    pub fn new(x: f64, y: f64) -> Result<Self> {
        if y > 0.0 && x.is_finite() && y.is_finite() {
            Ok(HyperbolicPoint { x, y })
        } else {
            Err(Error::OutOfRange(format!("point ({x}, {y}) is not in the upper half-plane")))
        }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub(crate) fn from_complex(z: Complex64) -> Self {
        HyperbolicPoint { x: z.re, y: z.im }
    }
}

/// Mobius action `z -> (az + b)/(cz + d)`.
pub fn mobius(m: &Sl2Matrix, p: HyperbolicPoint) -> HyperbolicPoint {
    let [a, b, c, d] = m.entries();
    let z = p.to_complex();
    HyperbolicPoint::from_complex((a * z + b) / (c * z + d))
}

/// Hyperbolic distance in the upper half-plane.
pub fn hyp_distance(p: HyperbolicPoint, q: HyperbolicPoint) -> f64 {
    let chord = ((p.x - q.x).powi(2) + (p.y - q.y).powi(2)).sqrt();
    2.0 * (chord / (2.0 * (p.y * q.y).sqrt())).asinh()
}

/// The fixed point in the upper half-plane of an elliptic element.
pub fn fixed_point(m: &Sl2Matrix) -> Result<HyperbolicPoint> {
    if !classify(m).is_elliptic() {
        return Err(Error::NotElliptic);
    }
    let [a, _, c, d] = m.entries();
    let tr = a + d;
    // c z^2 + (d - a) z - b = 0 has discriminant Tr^2 - 4 < 0.
    let x = (a - d) / (2.0 * c);
    let y = (4.0 - tr * tr).sqrt() / (2.0 * c.abs());
    Ok(HyperbolicPoint { x, y })
}

/// Isometry sending `i` to `p` and the upward unit tangent at `i` to the
/// tangent at `p` of the geodesic towards `q` (`q != p`).
pub fn moving_frame(p: HyperbolicPoint, q: HyperbolicPoint) -> Sl2Matrix {
    let sy = p.y.sqrt();
    let to_p = Sl2Matrix::normalized(sy, p.x / sy, 0.0, 1.0 / sy);
    // w = to_p^{-1}(q), then rotate about i so that w lies on the upward axis.
    let w = mobius(&to_p.inverse(), q).to_complex();
    let i = Complex64::new(0.0, 1.0);
    let disk = (w - i) / (w + i);
    let phi = disk.arg();
    let (s, c) = (0.5 * phi).sin_cos();
    let rot = Sl2Matrix::normalized(c, s, -s, c);
    to_p * rot
}

/// The orientation-preserving isometry taking `p1 -> q1` and `p2 -> q2`.
/// Assumes `d(p1, p2) = d(q1, q2) > 0`.
pub fn isometry_from_pairs(
    p1: HyperbolicPoint,
    p2: HyperbolicPoint,
    q1: HyperbolicPoint,
    q2: HyperbolicPoint,
) -> Sl2Matrix {
    moving_frame(q1, q2) * moving_frame(p1, p2).inverse()
}

/// Point at hyperbolic distance `r` from `i`, leaving `i` in the direction
/// rotated counterclockwise by `angle` from straight up.
pub fn point_from_i(r: f64, angle: f64) -> HyperbolicPoint {
    let i = Complex64::new(0.0, 1.0);
    let zeta = Complex64::from_polar((0.5 * r).tanh(), angle);
    HyperbolicPoint::from_complex(i * (1.0 + zeta) / (1.0 - zeta))
}

/// The hyperbolic translation along the geodesic through `x1` and `x2`,
/// moving `x1` to `x2`.
pub fn translation_between(x1: HyperbolicPoint, x2: HyperbolicPoint) -> Sl2Matrix {
    let d = hyp_distance(x1, x2);
    let frame = moving_frame(x1, x2);
    let h = 0.5 * d;
    let diag = Sl2Matrix::normalized(h.exp(), 0.0, 0.0, (-h).exp());
    frame * diag * frame.inverse()
}
