//! Small triangulated surfaces used by tests, the CLI self-test and the
//! bundled data files.

use std::f64::consts::TAU;

use crate::error::Result;
use crate::surface::{ConeSurface, EdgeRecord, SideRecord, SurfaceDescription, TriangleRecord};

fn describe(edges: &[(&str, f64)], triangles: &[[(&str, bool); 3]]) -> SurfaceDescription {
    SurfaceDescription {
        edges: edges.iter().map(|(id, l)| EdgeRecord { id: id.to_string(), length: *l }).collect(),
        triangles: triangles
            .iter()
            .map(|t| TriangleRecord { sides: t.map(|(e, f)| SideRecord::new(e, f)) })
            .collect(),
    }
}

/// One-vertex torus: two triangles sharing all three edges.
pub fn torus(a: f64, b: f64, c: f64) -> Result<ConeSurface> {
    ConeSurface::from_description(&describe(
        &[("a", a), ("b", b), ("c", c)],
        &[[("a", true), ("b", true), ("c", true)], [("a", false), ("b", false), ("c", false)]],
    ))
}

/// Sphere with three cone points: a triangle doubled along its boundary.
pub fn sphere3(a: f64, b: f64, c: f64) -> Result<ConeSurface> {
    ConeSurface::from_description(&describe(
        &[("a", a), ("b", b), ("c", c)],
        &[[("a", true), ("b", true), ("c", true)], [("c", false), ("b", false), ("a", false)]],
    ))
}

pub const TETRAHEDRON_EDGES: [&str; 6] = ["e01", "e02", "e03", "e12", "e13", "e23"];

/// Sphere with four cone points triangulated as a tetrahedron. Edge `eij`
/// runs from vertex `i` to vertex `j > i`; lengths in `TETRAHEDRON_EDGES` order.
pub fn tetrahedron(lengths: [f64; 6]) -> Result<ConeSurface> {
    let face = |u: usize, v: usize, w: usize| -> [(&'static str, bool); 3] {
        [(u, v), (v, w), (w, u)].map(|(x, y)| {
            let id = TETRAHEDRON_EDGES
                .iter()
                .find(|e| **e == format!("e{}{}", x.min(y), x.max(y)))
                .copied()
                .expect("tetrahedron edge");
            (id, x < y)
        })
    };
    let edges: Vec<(&str, f64)> = TETRAHEDRON_EDGES.iter().copied().zip(lengths).collect();
    ConeSurface::from_description(&describe(
        &edges,
        &[face(0, 2, 1), face(0, 1, 3), face(0, 3, 2), face(1, 2, 3)],
    ))
}

pub const TWO_POINT_TORUS_EDGES: [&str; 6] = ["d00", "d01", "d10", "d11", "h", "w"];

/// Torus with two cone points: a two-by-one grid of squares, each cut by a
/// diagonal. Lengths in `TWO_POINT_TORUS_EDGES` order.
pub fn two_point_torus(lengths: [f64; 6]) -> Result<ConeSurface> {
    let edges: Vec<(&str, f64)> = TWO_POINT_TORUS_EDGES.iter().copied().zip(lengths).collect();
    ConeSurface::from_description(&describe(
        &edges,
        &[
            [("h", true), ("d10", true), ("d00", false)],
            [("w", true), ("d11", true), ("d10", false)],
            [("h", false), ("d01", true), ("d11", false)],
            [("w", false), ("d00", true), ("d01", false)],
        ],
    ))
}

/// Tetrahedron with unit edges at vertex 0 and base edges `base`; the cone
/// angle at vertex 0 grows with `base` and crosses `2 pi` near `1.7877`.
pub fn apex_family(base: f64) -> Result<ConeSurface> {
    tetrahedron([1.0, 1.0, 1.0, base, base, base])
}

/// The base length at which the apex of `apex_family` reaches `2 pi`.
pub fn apex_wall_base() -> f64 {
    let apex = |b: f64| apex_family(b).map(|s| s.cone_angle(0) - TAU).unwrap_or(f64::NAN);
    let (mut lo, mut hi) = (1.5, 1.99);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if apex(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The reference corpus: name and surface.
pub fn standard() -> Vec<(&'static str, ConeSurface)> {
    let build = || -> Result<Vec<(&'static str, ConeSurface)>> {
        Ok(vec![
            ("torus-scalene", torus(1.0, 1.3, 1.6)?),
            ("torus-equilateral", torus(1.0, 1.0, 1.0)?),
            ("sphere3", sphere3(1.0, 1.3, 1.6)?),
            ("sphere3-equilateral", sphere3(1.2, 1.2, 1.2)?),
            ("tetrahedron", tetrahedron([1.0, 1.2, 1.1, 0.9, 1.3, 1.05])?),
            ("two-point-torus", two_point_torus([0.6, 0.62, 0.58, 0.65, 1.0, 0.95])?),
        ])
    };
    build().expect("reference corpus is valid")
}

/// A one-vertex torus with one long edge, far from Delaunay.
pub fn long_edge_torus() -> Result<ConeSurface> {
    torus(1.0, 1.2, 2.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let expected = [(1, 1, 3), (1, 1, 3), (0, 3, 3), (0, 3, 3), (0, 4, 6), (1, 2, 6)];
        for ((name, s), want) in standard().iter().zip(expected) {
            assert_eq!((s.genus(), s.num_vertices(), s.num_edges()), want, "{name}");
            assert_eq!(s.num_edges(), 6 * s.genus() + 3 * s.num_vertices() - 6, "{name}");
        }
    }

    #[test]
    fn apex_wall() {
        let b = apex_wall_base();
        assert!((b - 1.787744135607195).abs() < 1e-9);
        let s = apex_family(b).unwrap();
        assert!((s.cone_angle(0) - TAU).abs() < 1e-12);
        assert!(s.cone_angles().chi() < 0.0);
    }
}
