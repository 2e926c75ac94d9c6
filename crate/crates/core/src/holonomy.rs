//! Discrete developing map and vertex-loop holonomy.
//!
//! Every triangle has a canonical placement: corner 0 at `i`, corner 1 on the
//! upward imaginary axis and corner 2 to its left. A developed triangle is the
//! image of its canonical placement under an isometry `A_t`; crossing the side
//! `h` of triangle `t` into its neighbour `t'` composes with the gluing map
//! `G(h)` that carries the canonical `t'` onto the far side of `h`.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::sl2::{
    classify, fixed_point, hyp_distance, isometry_from_pairs, mobius, point_from_i,
    rotation_angle, HyperbolicPoint, IsometryClass, Sl2Matrix,
};
use crate::surface::{next, prev, wall_distance, ConeSurface, WALL_TOL};

/// Developed sides shorter than this are treated as collapsed.
const COLLAPSE_TOL: f64 = 1e-12;

/// Vertex loop based at one developed triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexLoop {
    pub vertex: usize,
    /// Half-edges leaving the vertex, in the counterclockwise order traversed.
    pub chain: Vec<usize>,
    pub holonomy: Sl2Matrix,
    /// Developed position of the vertex in the base triangle of the loop.
    pub center: HyperbolicPoint,
}

#[derive(Debug, Clone)]
pub struct HolonomyAtlas {
    canonical: Vec<[HyperbolicPoint; 3]>,
    placements: Vec<Sl2Matrix>,
    positions: Vec<[HyperbolicPoint; 3]>,
    /// Half-edge of the parent triangle crossed to reach each triangle.
    tree_parent: Vec<Option<usize>>,
    transitions: Vec<(usize, Sl2Matrix)>,
    loops: Vec<VertexLoop>,
    theta: Vec<f64>,
    edge_ids: Vec<String>,
    base: usize,
}

pub(crate) fn canonical_triangle(s: &ConeSurface, t: usize) -> [HyperbolicPoint; 3] {
    let l0 = s.halfedge_length(3 * t);
    let l2 = s.halfedge_length(3 * t + 2);
    let alpha0 = s.corner_angle_at(3 * t);
    [HyperbolicPoint::I, point_from_i(l0, 0.0), point_from_i(l2, alpha0)]
}

/// Maps the canonical placement of the triangle across `h` onto the far side
/// of `h` in the canonical frame of the triangle containing `h`.
pub(crate) fn gluing(s: &ConeSurface, canonical: &[[HyperbolicPoint; 3]], h: usize) -> Sl2Matrix {
    let (t, k) = (h / 3, h % 3);
    let g = s.twin(h);
    let (u, j) = (g / 3, g % 3);
    // twin runs from our corner k + 1 back to our corner k
    isometry_from_pairs(
        canonical[u][j],
        canonical[u][(j + 1) % 3],
        canonical[t][(k + 1) % 3],
        canonical[t][k],
    )
}

/// Rotation about the corner at the start of `h0`, in the canonical frame of
/// the triangle of `h0`, obtained by crossing every corner of the fan once.
fn corner_loop(
    s: &ConeSurface,
    canonical: &[[HyperbolicPoint; 3]],
    h0: usize,
) -> (Vec<usize>, Sl2Matrix) {
    let mut chain = vec![h0];
    let mut m = Sl2Matrix::IDENTITY;
    let mut h = h0;
    loop {
        let p = prev(h);
        m = m * gluing(s, canonical, p);
        h = s.twin(p);
        if h == h0 {
            break;
        }
        chain.push(h);
    }
    (chain, m)
}

pub fn develop(s: &ConeSurface) -> Result<HolonomyAtlas> {
    develop_from(s, 0)
}

/// Breadth-first layout over the dual graph starting from `base`.
pub fn develop_from(s: &ConeSurface, base: usize) -> Result<HolonomyAtlas> {
    let nt = s.num_triangles();
    if base >= nt {
        return Err(Error::OutOfRange(format!("base triangle {base} of {nt}")));
    }
    let canonical: Vec<_> = (0..nt).map(|t| canonical_triangle(s, t)).collect();
    let mut placements = vec![Sl2Matrix::IDENTITY; nt];
    let mut tree_parent = vec![None; nt];
    let mut reached = vec![false; nt];
    let mut tree_halfedge = vec![false; 3 * nt];
    reached[base] = true;
    let mut queue = VecDeque::from([base]);
    while let Some(t) = queue.pop_front() {
        for k in 0..3 {
            let h = 3 * t + k;
            let u = s.twin(h) / 3;
            if !reached[u] {
                reached[u] = true;
                placements[u] = placements[t] * gluing(s, &canonical, h);
                tree_parent[u] = Some(h);
                tree_halfedge[h] = true;
                tree_halfedge[s.twin(h)] = true;
                queue.push_back(u);
            }
        }
    }

    let mut positions = Vec::with_capacity(nt);
    for t in 0..nt {
        let p = canonical[t].map(|c| mobius(&placements[t], c));
        for k in 0..3 {
            let d = hyp_distance(p[k], p[(k + 1) % 3]);
            if d.is_nan() || d < COLLAPSE_TOL {
                return Err(Error::NumericalCollapse(format!(
                    "triangle {t} side {k} developed to length {d:e}"
                )));
            }
        }
        positions.push(p);
    }

    let mut transitions = Vec::new();
    for h in 0..3 * nt {
        let g = s.twin(h);
        if !tree_halfedge[h] && h < g {
            let glue = gluing(s, &canonical, h);
            let t_el = placements[h / 3] * glue * placements[g / 3].inverse();
            transitions.push((h, t_el));
        }
    }

    let mut loops = Vec::with_capacity(s.num_vertices());
    for v in 0..s.num_vertices() {
        let h0 = s.orbit(v)[0];
        let (chain, local) = corner_loop(s, &canonical, h0);
        let a = placements[h0 / 3];
        loops.push(VertexLoop {
            vertex: v,
            chain,
            holonomy: local.conjugate_by(&a),
            center: positions[h0 / 3][h0 % 3],
        });
    }

    Ok(HolonomyAtlas {
        canonical,
        placements,
        positions,
        tree_parent,
        transitions,
        loops,
        theta: s.cone_angles().theta,
        edge_ids: s.edges().iter().map(|e| e.id.clone()).collect(),
        base,
    })
}

impl HolonomyAtlas {
    pub fn base(&self) -> usize {
        self.base
    }

    /// Developed corners of triangle `t`.
    pub fn positions(&self, t: usize) -> [HyperbolicPoint; 3] {
        self.positions[t]
    }

    pub fn placement(&self, t: usize) -> Sl2Matrix {
        self.placements[t]
    }

    pub fn tree_parent(&self, t: usize) -> Option<usize> {
        self.tree_parent[t]
    }

    /// `(half-edge, A_t G(h) A_t'^{-1})` for dual edges outside the spanning tree.
    pub fn transitions(&self) -> &[(usize, Sl2Matrix)] {
        &self.transitions
    }

    pub fn vertex_loops(&self) -> &[VertexLoop] {
        &self.loops
    }

    pub fn theta(&self, v: usize) -> f64 {
        self.theta[v]
    }

    /// The same atlas viewed through the isometry `g`.
    pub fn conjugated(&self, g: &Sl2Matrix) -> HolonomyAtlas {
        let mut out = self.clone();
        for a in out.placements.iter_mut() {
            *a = *g * *a;
        }
        for p in out.positions.iter_mut() {
            *p = p.map(|q| mobius(g, q));
        }
        for (_, t) in out.transitions.iter_mut() {
            *t = t.conjugate_by(g);
        }
        for l in out.loops.iter_mut() {
            l.holonomy = l.holonomy.conjugate_by(g);
            l.center = mobius(g, l.center);
        }
        out
    }

    /// Loop around the start corner of `h`, based at the triangle of `h`.
    pub fn corner_holonomy(&self, s: &ConeSurface, h: usize) -> Result<Sl2Matrix> {
        let v = s.tail(h);
        if wall_distance(self.theta[v]) <= WALL_TOL {
            return Err(Error::WallAngle { vertex: v, theta: self.theta[v] });
        }
        let (_, local) = corner_loop(s, &self.canonical, h);
        Ok(local.conjugate_by(&self.placements[h / 3]))
    }

    /// Text table: one row per triangle with its developed corners, one row
    /// per vertex with holonomy entries and the classified angle.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (t, p) in self.positions.iter().enumerate() {
            let _ = write!(out, "triangle {t}");
            for q in p {
                let _ = write!(out, " {:.16e} {:.16e}", q.x, q.y);
            }
            out.push('\n');
        }
        for l in &self.loops {
            let [a, b, c, d] = l.holonomy.entries();
            let class = match classify(&l.holonomy) {
                IsometryClass::Elliptic { .. } => rotation_angle(&l.holonomy)
                    .map(|ang| format!("elliptic {ang:.16e}"))
                    .unwrap_or_else(|_| "elliptic".into()),
                IsometryClass::Hyperbolic { length } => format!("hyperbolic {length:.16e}"),
                IsometryClass::Parabolic => "parabolic".into(),
                IsometryClass::Identity => "identity".into(),
            };
            let _ = writeln!(
                out,
                "vertex {} {:.16e} {:.16e} {:.16e} {:.16e} {class}",
                l.vertex, a, b, c, d
            );
        }
        out
    }

    pub fn edge_id(&self, e: usize) -> &str {
        &self.edge_ids[e]
    }
}

/// `rho(gamma_h)`, refused on a wall where it degenerates to the identity.
pub fn vertex_holonomy(atlas: &HolonomyAtlas, v: usize) -> Result<Sl2Matrix> {
    let theta = atlas.theta[v];
    if wall_distance(theta) <= WALL_TOL {
        return Err(Error::WallAngle { vertex: v, theta });
    }
    Ok(atlas.loops[v].holonomy)
}

/// Distance between the fixed points of the two endpoint holonomies of edge
/// `e`, both based at the triangle carrying the forward side of `e`.
pub fn alength_from_fixed_points(atlas: &HolonomyAtlas, s: &ConeSurface, e: usize) -> Result<f64> {
    let h = s.edge_halves(e)[0];
    let hb = atlas.corner_holonomy(s, h)?;
    let hc = atlas.corner_holonomy(s, next(h))?;
    Ok(hyp_distance(fixed_point(&hb)?, fixed_point(&hc)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::Sl2Vector;
    use approx::assert_abs_diff_eq;

    const TORUS: &str = r#"{"edges":[{"id":"a","length":1.0},{"id":"b","length":1.3},{"id":"c","length":1.6}],
        "triangles":[{"sides":[{"edge":"a","dir":"+"},{"edge":"b","dir":"+"},{"edge":"c","dir":"+"}]},
                     {"sides":[{"edge":"a","dir":"-"},{"edge":"b","dir":"-"},{"edge":"c","dir":"-"}]}]}"#;
    const SPHERE: &str = r#"{"edges":[{"id":"a","length":1.0},{"id":"b","length":1.3},{"id":"c","length":1.6}],
        "triangles":[{"sides":[{"edge":"a","dir":"+"},{"edge":"b","dir":"+"},{"edge":"c","dir":"+"}]},
                     {"sides":[{"edge":"c","dir":"-"},{"edge":"b","dir":"-"},{"edge":"a","dir":"-"}]}]}"#;

    #[test]
    fn developed_sides_match() {
        let s = ConeSurface::from_json(TORUS).unwrap();
        let atlas = develop(&s).unwrap();
        for t in 0..s.num_triangles() {
            let p = atlas.positions(t);
            for k in 0..3 {
                let d = hyp_distance(p[k], p[(k + 1) % 3]);
                assert_abs_diff_eq!(d, s.halfedge_length(3 * t + k), epsilon = 1e-10);
            }
        }
        assert_eq!(atlas.positions(0)[0], HyperbolicPoint::I);
        // corner 2 sits left of the upward first side
        assert!(atlas.positions(0)[2].x < 0.0);
    }

    #[test]
    fn holonomy_rotates_by_cone_angle() {
        for text in [TORUS, SPHERE] {
            let s = ConeSurface::from_json(text).unwrap();
            let atlas = develop(&s).unwrap();
            for v in 0..s.num_vertices() {
                let m = vertex_holonomy(&atlas, v).unwrap();
                let theta = s.cone_angle(v);
                assert_abs_diff_eq!(m.trace().abs(), 2.0 * (0.5 * theta).cos().abs(), epsilon = 1e-10);
                assert_abs_diff_eq!(rotation_angle(&m).unwrap(), theta, epsilon = 1e-9);
                let c = fixed_point(&m).unwrap();
                assert!(hyp_distance(c, atlas.vertex_loops()[v].center) < 1e-9);
            }
        }
    }

    #[test]
    fn sphere_relation() {
        let s = ConeSurface::from_json(SPHERE).unwrap();
        let atlas = develop(&s).unwrap();
        let r: Vec<Sl2Matrix> = (0..3).map(|k| atlas.corner_holonomy(&s, k).unwrap()).collect();
        assert!((r[0] * r[1] * r[2]).distance_to_identity() < 1e-10);
    }

    #[test]
    fn alengths_recovered() {
        for text in [TORUS, SPHERE] {
            let s = ConeSurface::from_json(text).unwrap();
            let atlas = develop(&s).unwrap();
            for e in 0..s.num_edges() {
                let a = alength_from_fixed_points(&atlas, &s, e).unwrap();
                assert_abs_diff_eq!(a, s.edges()[e].length, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn conjugation_equivariance() {
        let s = ConeSurface::from_json(TORUS).unwrap();
        let atlas = develop(&s).unwrap();
        let g = crate::sl2::sl2_exp(Sl2Vector::new(0.3, -0.2, 0.7));
        let moved = atlas.conjugated(&g);
        let m0 = vertex_holonomy(&atlas, 0).unwrap().conjugate_by(&g);
        let m1 = vertex_holonomy(&moved, 0).unwrap();
        assert!(m0.projective_distance(&m1) < 1e-12);
    }

    #[test]
    fn base_change_keeps_traces() {
        let s = ConeSurface::from_json(TORUS).unwrap();
        let a0 = develop_from(&s, 0).unwrap();
        let a1 = develop_from(&s, 1).unwrap();
        assert_abs_diff_eq!(
            vertex_holonomy(&a0, 0).unwrap().trace().abs(),
            vertex_holonomy(&a1, 0).unwrap().trace().abs(),
            epsilon = 1e-12
        );
        assert_eq!(a0.transitions().len(), 2);
        assert!(develop_from(&s, 5).is_err());
    }

    #[test]
    fn dump_has_rows() {
        let s = ConeSurface::from_json(SPHERE).unwrap();
        let text = develop(&s).unwrap().dump();
        assert_eq!(text.lines().filter(|l| l.starts_with("triangle")).count(), 2);
        assert_eq!(text.lines().filter(|l| l.starts_with("vertex")).count(), 3);
    }
}
