//! Edge flips towards a locally Delaunay triangulation.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::holonomy::{canonical_triangle, gluing};
use crate::poisson::{eta_matrix, PoissonMatrix};
use crate::sl2::{hyp_distance, mobius};
use crate::surface::{next, prev, ConeSurface, Side};

/// Edges with `psi_0` below `-DELAUNAY_TOL` are flipped.
pub const DELAUNAY_TOL: f64 = 1e-10;
pub const MAX_FLIPS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct FlipMove {
    pub edge: String,
    pub triangles: (usize, usize),
    pub pre_length: f64,
    pub post_length: f64,
    pub pre_psi: f64,
}

impl FlipMove {
    /// `edge pre-length post-length pre-psi`.
    pub fn log_line(&self) -> String {
        format!("{} {:.16e} {:.16e} {:.16e}", self.edge, self.pre_length, self.post_length, self.pre_psi)
    }
}

/// `pi` minus the two corner angles facing edge `e`.
pub fn edge_invariant(s: &ConeSurface, e: usize) -> f64 {
    let [h, g] = s.edge_halves(e);
    PI - s.corner_angle_at(prev(h)) - s.corner_angle_at(prev(g))
}

pub fn edge_invariants(s: &ConeSurface) -> Vec<f64> {
    (0..s.num_edges()).map(|e| edge_invariant(s, e)).collect()
}

/// Length of the other diagonal of the quadrilateral around `e`, measured
/// between the two developed opposite corners.
pub fn flipped_length(s: &ConeSurface, e: usize) -> Result<f64> {
    let [h, g] = s.edge_halves(e);
    let (t1, t2) = (h / 3, g / 3);
    if t1 == t2 {
        return Err(Error::UnflippableConfiguration(format!(
            "edge {} borders triangle {t1} on both sides",
            s.edges()[e].id
        )));
    }
    let angle_a = s.corner_angle_at(h) + s.corner_angle_at(next(g));
    let angle_b = s.corner_angle_at(next(h)) + s.corner_angle_at(g);
    if angle_a >= PI || angle_b >= PI {
        return Err(Error::UnflippableConfiguration(format!(
            "quadrilateral around edge {} is not convex ({angle_a}, {angle_b})",
            s.edges()[e].id
        )));
    }
    let canon = [canonical_triangle(s, t1), canonical_triangle(s, t2)];
    let mut table = vec![canon[0]; s.num_triangles()];
    table[t2] = canon[1];
    let c = canon[0][(h % 3 + 2) % 3];
    let d = mobius(&gluing(s, &table, h), canon[1][(g % 3 + 2) % 3]);
    Ok(hyp_distance(c, d))
}

/// Replaces `e` by the other diagonal of its quadrilateral. The edge keeps
/// its id; the two triangles keep their slots. The new edge runs from the
/// corner right of `e` to the corner left of it, so flipping twice restores
/// the triangulation with `e` reversed.
pub fn flip(s: &ConeSurface, e: usize) -> Result<ConeSurface> {
    let new_length = flipped_length(s, e)?;
    let [h, g] = s.edge_halves(e);
    // t1 = (A->B, B->C, C->A) with h = A->B, t2 = (B->A, A->D, D->B) with g = B->A
    let (t1, t2) = (h / 3, g / 3);
    let mut triangles = s.triangles().to_vec();
    triangles[t1] = [s.side(next(g)), Side { edge: e, forward: true }, s.side(prev(h))];
    triangles[t2] = [Side { edge: e, forward: false }, s.side(prev(g)), s.side(next(h))];
    let mut edges = s.edges().to_vec();
    edges[e].length = new_length;
    let mut tails: Vec<usize> = (0..3 * s.num_triangles()).map(|x| s.tail(x)).collect();
    let (a, b, c, d) = (s.tail(h), s.tail(g), s.tail(prev(h)), s.tail(prev(g)));
    tails[3 * t1..3 * t1 + 3].copy_from_slice(&[a, d, c]);
    tails[3 * t2..3 * t2 + 3].copy_from_slice(&[c, d, b]);
    Ok(ConeSurface::from_parts(edges, triangles)?.relabel_vertices(&tails))
}

/// Flips the most negative edge until every `psi_0 >= -DELAUNAY_TOL`.
pub fn make_delaunay(s: &ConeSurface) -> Result<(ConeSurface, Vec<FlipMove>)> {
    make_delaunay_with(s, DELAUNAY_TOL, MAX_FLIPS)
}

pub fn make_delaunay_with(s: &ConeSurface, tol: f64, max_flips: usize) -> Result<(ConeSurface, Vec<FlipMove>)> {
    let mut cur = s.clone();
    let mut moves = Vec::new();
    loop {
        let psi = edge_invariants(&cur);
        // strict comparison keeps the lowest id among ties
        let worst = psi
            .iter()
            .enumerate()
            .fold(None, |best: Option<(usize, f64)>, (e, &v)| match best {
                Some((_, b)) if b <= v => best,
                _ => Some((e, v)),
            });
        let Some((e, value)) = worst else {
            return Ok((cur, moves));
        };
        if value >= -tol {
            return Ok((cur, moves));
        }
        if moves.len() >= max_flips {
            return Err(Error::NonTermination(moves.len()));
        }
        let [h, g] = cur.edge_halves(e);
        let next_surface = flip(&cur, e)?;
        moves.push(FlipMove {
            edge: cur.edges()[e].id.clone(),
            triangles: (h / 3, g / 3),
            pre_length: cur.edges()[e].length,
            post_length: next_surface.edges()[e].length,
            pre_psi: value,
        });
        cur = next_surface;
    }
}

/// Compares `eta` after the flip with the push-forward `J P J^T` of `eta`
/// before it, `J` the finite-difference Jacobian of the coordinate change.
/// Returns the largest entry of the difference relative to
/// `max(max|P_post|, 1)`, so that a bivector vanishing up to rounding on
/// both sides compares as equal.
pub fn flip_chain_rule_residual(s: &ConeSurface, e: usize) -> Result<f64> {
    let pre = eta_matrix(s)?;
    let post = eta_matrix(&flip(s, e)?)?;
    let n = s.num_edges();
    let x = s.lengths();
    let mut jac = DMatrix::<f64>::identity(n, n);
    jac[(e, e)] = 0.0;
    for l in 0..n {
        let step = 1e-6 * x[l];
        let mut plus = x.clone();
        let mut minus = x.clone();
        plus[l] += step;
        minus[l] -= step;
        let fp = flipped_length(&s.with_lengths(&plus)?, e)?;
        let fm = flipped_length(&s.with_lengths(&minus)?, e)?;
        jac[(e, l)] = (fp - fm) / (2.0 * step);
    }
    let pushed = PoissonMatrix::from_matrix(&jac * pre.matrix() * jac.transpose());
    let diff = (pushed.matrix() - post.matrix()).amax();
    Ok(diff / post.max_abs().max(1.0))
}
