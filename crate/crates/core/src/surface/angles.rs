//! Angle data, strata, collar constant and decorations.

use std::f64::consts::{PI, TAU};

use super::ConeSurface;
use crate::error::{Error, Result};

/// Tolerance on the Euler characteristic when deciding flatness.
pub const CHI_TOL: f64 = 1e-9;
/// Distance in radians to `2 pi k`, `k >= 1`, counted as lying on a wall.
pub const WALL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct AngleData {
    pub genus: usize,
    pub theta: Vec<f64>,
}

impl AngleData {
    pub fn new(genus: usize, theta: Vec<f64>) -> Result<Self> {
        if let Some(t) = theta.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
            return Err(Error::OutOfRange(format!("cone angle {t} must be finite and >= 0")));
        }
        Ok(AngleData { genus, theta })
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    /// `(2 - 2g - n) + sum theta_j / 2 pi`.
    pub fn chi(&self) -> f64 {
        (2.0 - 2.0 * self.genus as f64 - self.n() as f64) + self.theta.iter().sum::<f64>() / TAU
    }

    pub fn theta_max(&self) -> f64 {
        self.theta.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Distance from `theta` to the nearest positive multiple of `2 pi`.
pub fn wall_distance(theta: f64) -> f64 {
    let k = (theta / TAU).round().max(1.0);
    (theta - k * TAU).abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct StratumReport {
    pub chi: f64,
    pub hyperbolic: bool,
    pub flat: bool,
    /// No angle within tolerance of a positive multiple of `2 pi`.
    pub regular: bool,
    /// Every angle below `pi`.
    pub small: bool,
    pub wall_vertices: Vec<usize>,
}

pub fn classify_angles(data: &AngleData) -> Result<StratumReport> {
    let chi = data.chi();
    if chi > CHI_TOL {
        return Err(Error::NotAdmissible { chi });
    }
    let wall_vertices: Vec<usize> = data
        .theta
        .iter()
        .enumerate()
        .filter(|(_, t)| wall_distance(**t) <= WALL_TOL)
        .map(|(i, _)| i)
        .collect();
    Ok(StratumReport {
        chi,
        hyperbolic: chi < -CHI_TOL,
        flat: chi.abs() <= CHI_TOL,
        regular: wall_vertices.is_empty(),
        small: data.theta.iter().all(|t| *t < PI),
        wall_vertices,
    })
}

/// `arccosh(1 / sin(theta_max / 2)) / 2`, defined when every angle lies in `(0, pi)`.
pub fn collar_constant(data: &AngleData) -> Result<f64> {
    if data.theta.is_empty() {
        return Err(Error::OutOfRange("no cone angles".into()));
    }
    if let Some(t) = data.theta.iter().find(|t| !(**t > 0.0 && **t < PI)) {
        return Err(Error::OutOfRange(format!("cone angle {t} outside (0, pi)")));
    }
    Ok((1.0 / (0.5 * data.theta_max()).sin()).acosh() / 2.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decoration {
    eps: Vec<f64>,
}

impl Decoration {
    pub fn new(eps: Vec<f64>) -> Result<Self> {
        if let Some(e) = eps.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
            return Err(Error::OutOfRange(format!("decoration entry {e} must be finite and >= 0")));
        }
        Ok(Decoration { eps })
    }

    pub fn zero(n: usize) -> Self {
        Decoration { eps: vec![0.0; n] }
    }

    /// Rescales to total 1.
    pub fn normalized(eps: Vec<f64>) -> Result<Self> {
        let d = Decoration::new(eps)?;
        let total: f64 = d.eps.iter().sum();
        if total <= 0.0 {
            return Err(Error::OutOfRange("decoration is identically zero".into()));
        }
        Ok(Decoration { eps: d.eps.iter().map(|e| e / total).collect() })
    }

    pub fn values(&self) -> &[f64] {
        &self.eps
    }

    /// True when every entry lies in `[0, bound)`.
    pub fn within(&self, bound: f64) -> bool {
        self.eps.iter().all(|e| *e < bound)
    }
}

/// `a_i - (eps_b + eps_c)` per edge joining `x_b` and `x_c`, in edge-id order.
pub fn reduced_lengths(s: &ConeSurface, dec: &Decoration) -> Result<Vec<f64>> {
    if dec.eps.len() != s.num_vertices() {
        return Err(Error::DimensionMismatch { expected: s.num_vertices(), found: dec.eps.len() });
    }
    Ok((0..s.num_edges())
        .map(|e| {
            let (b, c) = s.edge_endpoints(e);
            s.edges()[e].length - (dec.eps[b] + dec.eps[c])
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn strata_examples() {
        let r = classify_angles(&AngleData::new(1, vec![0.0]).unwrap()).unwrap();
        assert_eq!(r.chi, -1.0);
        assert!(r.hyperbolic && r.regular && r.small && !r.flat);

        let e = classify_angles(&AngleData::new(0, vec![PI; 3]).unwrap()).unwrap_err();
        assert_eq!(e, Error::NotAdmissible { chi: 0.5 });

        let r = classify_angles(&AngleData::new(0, vec![PI; 4]).unwrap()).unwrap();
        assert!(r.flat && !r.hyperbolic && !r.small);

        let r = classify_angles(&AngleData::new(2, vec![TAU, 1.0]).unwrap()).unwrap();
        assert_eq!(r.wall_vertices, vec![0]);
        assert!(!r.regular);
    }

    #[test]
    fn wall_distance_ignores_zero() {
        assert_eq!(wall_distance(0.0), TAU);
        assert_abs_diff_eq!(wall_distance(4.0 * PI + 0.1), 0.1, epsilon = 1e-12);
    }

    #[test]
    fn collar_examples() {
        let c = collar_constant(&AngleData::new(0, vec![PI / 3.0, 0.2, 0.5]).unwrap()).unwrap();
        assert_abs_diff_eq!(c, 2f64.acosh() / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c, 0.658479, epsilon = 1e-6);
        let near = collar_constant(&AngleData::new(0, vec![PI - 1e-8]).unwrap()).unwrap();
        assert!(near < 1e-3);
        assert!(collar_constant(&AngleData::new(0, vec![PI]).unwrap()).is_err());
        assert!(collar_constant(&AngleData::new(0, vec![0.0]).unwrap()).is_err());
    }

    #[test]
    fn decoration_normalizes() {
        let d = Decoration::normalized(vec![1.0, 3.0, 4.0]).unwrap();
        assert_abs_diff_eq!(d.values().iter().sum::<f64>(), 1.0, epsilon = 1e-15);
        assert!(Decoration::normalized(vec![0.0, 0.0]).is_err());
        assert!(Decoration::new(vec![-1.0]).is_err());
    }
}
