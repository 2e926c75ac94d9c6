//! Orientation-preserving isometries of the Euclidean plane.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

pub type PlanePoint = [f64; 2];

/// `v -> N v + w` with `N` a rotation. The angle is the source of truth; the
/// matrix is cached from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Se2Element {
    angle: f64,
    rot: [[f64; 2]; 2],
    pub w: PlanePoint,
}

impl Se2Element {
    pub fn new(angle: f64, w: PlanePoint) -> Self {
        let angle = angle.rem_euclid(TAU);
        let (s, c) = angle.sin_cos();
        Se2Element { angle, rot: [[c, -s], [s, c]], w }
    }

    /// Rotation by `angle` about `center`.
    pub fn rotation_about(center: PlanePoint, angle: f64) -> Self {
        let r = Se2Element::new(angle, [0.0, 0.0]);
        let nc = r.rotate(center);
        Se2Element::new(angle, [center[0] - nc[0], center[1] - nc[1]])
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn rotation(&self) -> [[f64; 2]; 2] {
        self.rot
    }

    fn rotate(&self, v: PlanePoint) -> PlanePoint {
        [
            self.rot[0][0] * v[0] + self.rot[0][1] * v[1],
            self.rot[1][0] * v[0] + self.rot[1][1] * v[1],
        ]
    }

    pub fn apply(&self, v: PlanePoint) -> PlanePoint {
        let r = self.rotate(v);
        [r[0] + self.w[0], r[1] + self.w[1]]
    }

    /// `self . other`
    pub fn compose(&self, other: &Se2Element) -> Se2Element {
        Se2Element::new(self.angle + other.angle, self.apply(other.w))
    }

    pub fn inverse(&self) -> Se2Element {
        let inv = Se2Element::new(-self.angle, [0.0, 0.0]);
        let t = inv.rotate(self.w);
        Se2Element::new(-self.angle, [-t[0], -t[1]])
    }

    /// `g . self . g^{-1}`
    pub fn conjugate_by(&self, g: &Se2Element) -> Se2Element {
        g.compose(self).compose(&g.inverse())
    }

    pub fn is_elliptic(&self) -> bool {
        // det(1 - N) = 2 - 2 cos(angle)
        2.0 - 2.0 * self.angle.cos() > 1e-24
    }
}

/// `x = (1 - N)^{-1} w`.
pub fn se2_fixed_point(s: &Se2Element) -> Result<PlanePoint> {
    if !s.is_elliptic() {
        return Err(Error::NotElliptic);
    }
    let n = s.rot;
    let (a, b, c, d) = (1.0 - n[0][0], -n[0][1], -n[1][0], 1.0 - n[1][1]);
    let det = a * d - b * c;
    Ok([(d * s.w[0] - b * s.w[1]) / det, (-c * s.w[0] + a * s.w[1]) / det])
}

/// `|| (1 - N1)^{-1} w1 - (1 - N2)^{-1} w2 ||`.
pub fn se2_pair_distance(s1: &Se2Element, s2: &Se2Element) -> Result<f64> {
    let x1 = se2_fixed_point(s1)?;
    let x2 = se2_fixed_point(s2)?;
    Ok((x1[0] - x2[0]).hypot(x1[1] - x2[1]))
}

pub fn wedge(u: PlanePoint, v: PlanePoint) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

/// `x1 ^ x2 + x2 ^ x3 + x3 ^ x1`.
pub fn wedge_sum(x1: PlanePoint, x2: PlanePoint, x3: PlanePoint) -> f64 {
    wedge(x1, x2) + wedge(x2, x3) + wedge(x3, x1)
}

/// Sign of the wedge sum: `+1` when `x3` lies left of the directed line
/// `x1 -> x2`, `-1` on the right, `0` when collinear.
pub fn triple_orientation(x1: PlanePoint, x2: PlanePoint, x3: PlanePoint) -> i8 {
    let w = wedge_sum(x1, x2, x3);
    let scale = [x1, x2, x3]
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if w.abs() <= 1e-14 * scale * scale {
        0
    } else if w > 0.0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn half_turn_fixed_point() {
        let s = Se2Element::new(PI, [2.0, 0.0]);
        let x = se2_fixed_point(&s).unwrap();
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], 0.0, epsilon = 1e-15);
        assert_eq!(se2_fixed_point(&Se2Element::new(0.0, [1.0, 2.0])), Err(Error::NotElliptic));
    }

    #[test]
    fn distance_three_four_five() {
        let s1 = Se2Element::rotation_about([0.0, 0.0], PI / 3.0);
        let s2 = Se2Element::rotation_about([3.0, 4.0], PI / 3.0);
        assert_abs_diff_eq!(se2_pair_distance(&s1, &s2).unwrap(), 5.0, epsilon = 1e-13);
        assert_eq!(se2_pair_distance(&s1, &s1).unwrap(), 0.0);
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(triple_orientation([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]), 1);
        assert_eq!(triple_orientation([0.0, 0.0], [1.0, 0.0], [2.0, 0.0]), 0);
        assert_eq!(triple_orientation([1.0, 0.0], [0.0, 0.0], [0.0, 1.0]), -1);
        assert_eq!(wedge_sum([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]), 1.0);
    }

    #[test]
    fn compose_and_inverse() {
        let g = Se2Element::new(0.7, [1.0, -2.0]);
        let id = g.compose(&g.inverse());
        let p = id.apply([0.3, 0.4]);
        assert_abs_diff_eq!(p[0], 0.3, epsilon = 1e-14);
        assert_abs_diff_eq!(p[1], 0.4, epsilon = 1e-14);
    }
}
