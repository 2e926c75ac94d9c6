//! Triangulated closed cone surfaces with hyperbolic edge lengths.
//!
//! Half-edge `h = 3 t + k` is side `k` of triangle `t`, running from corner
//! `k` to corner `k + 1` along the counterclockwise boundary. The corner at
//! the start of `h` lies between side `k` and side `k - 1` and faces side
//! `k + 1`. Around a vertex, the germ following `h` counterclockwise is
//! `twin(prev(h))`, reached by turning through the corner angle at `h`.

mod angles;
mod geometry;
mod io;

pub use angles::{
    classify_angles, collar_constant, reduced_lengths, wall_distance, AngleData, Decoration,
    StratumReport, CHI_TOL, WALL_TOL,
};
pub use geometry::{
    corner_angle, corner_angle_arccos, corner_angle_gradient, satisfies_triangle_inequality,
    triangle_area,
};
pub use io::{Dir, EdgeRecord, SideRecord, SurfaceDescription, TriangleRecord};

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: String,
    pub length: f64,
}

/// One side of a triangle: an edge traversed forward (`+`) or backward (`-`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Side {
    pub edge: usize,
    pub forward: bool,
}

/// A directed-arc germ leaving a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Germ {
    pub halfedge: usize,
    pub edge: usize,
}

/// Germs at one vertex in counterclockwise order, with the corner angle
/// between each germ and its successor.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFan {
    pub vertex: usize,
    pub germs: Vec<Germ>,
    pub gaps: Vec<f64>,
    /// `prefix[i]` is the counterclockwise angle from germ 0 to germ `i`.
    pub prefix: Vec<f64>,
    pub theta: f64,
}

impl VertexFan {
    pub fn len(&self) -> usize {
        self.germs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.germs.is_empty()
    }

    /// Counterclockwise angle swept from germ `i` to germ `j`, in `[0, theta)`.
    pub fn ccw_angle(&self, i: usize, j: usize) -> f64 {
        if j >= i {
            self.prefix[j] - self.prefix[i]
        } else {
            self.theta - (self.prefix[i] - self.prefix[j])
        }
    }

    /// Clockwise angle `d(g_i, g_j)` swept from germ `i` to germ `j`.
    pub fn cw_angle(&self, i: usize, j: usize) -> f64 {
        if i == j {
            0.0
        } else {
            self.theta - self.ccw_angle(i, j)
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConeSurface {
    edges: Vec<Edge>,
    triangles: Vec<[Side; 3]>,
    twin: Vec<usize>,
    /// `[forward half-edge, backward half-edge]` per edge.
    halves: Vec<[usize; 2]>,
    corner_vertex: Vec<usize>,
    /// Per vertex, half-edges leaving it in counterclockwise order.
    orbits: Vec<Vec<usize>>,
    corner_angles: Vec<f64>,
    cone_angles: Vec<f64>,
    genus: usize,
}

pub fn next(h: usize) -> usize {
    3 * (h / 3) + (h % 3 + 1) % 3
}

pub fn prev(h: usize) -> usize {
    3 * (h / 3) + (h % 3 + 2) % 3
}

impl ConeSurface {
    /// Builds from a wire-format description.
    pub fn from_description(desc: &SurfaceDescription) -> Result<Self> {
        let mut edges = Vec::with_capacity(desc.edges.len());
        for rec in &desc.edges {
            if !(rec.length.is_finite() && rec.length > 0.0) {
                return Err(Error::NonPositiveLength { edge: rec.id.clone(), length: rec.length });
            }
            edges.push(Edge { id: rec.id.clone(), length: rec.length });
        }
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        for w in edges.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::DuplicateEdge(w[0].id.clone()));
            }
        }
        let index: HashMap<&str, usize> =
            edges.iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect();
        let mut triangles = Vec::with_capacity(desc.triangles.len());
        for tri in &desc.triangles {
            let mut sides = [Side { edge: 0, forward: true }; 3];
            for (k, rec) in tri.sides.iter().enumerate() {
                let edge = *index
                    .get(rec.edge.as_str())
                    .ok_or_else(|| Error::UnknownEdge(rec.edge.clone()))?;
                sides[k] = Side { edge, forward: rec.dir.is_forward() };
            }
            triangles.push(sides);
        }
        Self::from_parts(edges, triangles)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_description(&SurfaceDescription::from_json(text)?)
    }

    /// Builds from edges already sorted by id and triangles referencing them.
    pub(crate) fn from_parts(edges: Vec<Edge>, triangles: Vec<[Side; 3]>) -> Result<Self> {
        let nh = 3 * triangles.len();
        let mut halves = vec![[usize::MAX; 2]; edges.len()];
        for (t, tri) in triangles.iter().enumerate() {
            for (k, side) in tri.iter().enumerate() {
                let slot = &mut halves[side.edge][usize::from(!side.forward)];
                if *slot != usize::MAX {
                    return Err(Error::NonManifold(format!(
                        "edge {} appears twice with dir {}",
                        edges[side.edge].id,
                        if side.forward { "+" } else { "-" }
                    )));
                }
                *slot = 3 * t + k;
            }
        }
        let mut twin = vec![0; nh];
        for (e, pair) in halves.iter().enumerate() {
            if pair.contains(&usize::MAX) {
                return Err(Error::NonManifold(format!(
                    "edge {} must appear exactly once with each dir",
                    edges[e].id
                )));
            }
            twin[pair[0]] = pair[1];
            twin[pair[1]] = pair[0];
        }
        if triangles.is_empty() {
            return Err(Error::NonManifold("no triangles".into()));
        }

        let mut seen = vec![false; triangles.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(t) = queue.pop_front() {
            for k in 0..3 {
                let u = twin[3 * t + k] / 3;
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Disconnected);
        }

        let mut corner_vertex = vec![usize::MAX; nh];
        let mut orbits = Vec::new();
        for h0 in 0..nh {
            if corner_vertex[h0] != usize::MAX {
                continue;
            }
            let v = orbits.len();
            let mut orbit = vec![h0];
            corner_vertex[h0] = v;
            let mut h = twin[prev(h0)];
            while h != h0 {
                corner_vertex[h] = v;
                orbit.push(h);
                h = twin[prev(h)];
            }
            orbits.push(orbit);
        }

        let chi = orbits.len() as i64 - edges.len() as i64 + triangles.len() as i64;
        if chi > 2 || chi % 2 != 0 {
            return Err(Error::NonManifold(format!("Euler characteristic {chi}")));
        }
        let genus = ((2 - chi) / 2) as usize;

        let mut surface = ConeSurface {
            edges,
            triangles,
            twin,
            halves,
            corner_vertex,
            orbits,
            corner_angles: vec![0.0; nh],
            cone_angles: Vec::new(),
            genus,
        };
        surface.refresh_angles()?;
        Ok(surface)
    }

    fn refresh_angles(&mut self) -> Result<()> {
        for (t, tri) in self.triangles.iter().enumerate() {
            let l = tri.map(|s| self.edges[s.edge].length);
            if !satisfies_triangle_inequality(l[0], l[1], l[2]) {
                return Err(Error::TriangleInequality {
                    triangle: t,
                    edges: tri.map(|s| self.edges[s.edge].id.clone()),
                    lengths: l,
                });
            }
            for k in 0..3 {
                self.corner_angles[3 * t + k] =
                    geometry::corner_angle_unchecked(l[k], l[(k + 2) % 3], l[(k + 1) % 3]);
            }
        }
        self.cone_angles = self
            .orbits
            .iter()
            .map(|o| o.iter().map(|&h| self.corner_angles[h]).sum())
            .collect();
        Ok(())
    }

    /// Renumbers vertices so that the start of half-edge `h` gets label
    /// `tail_labels[h]`; the labels must be a consistent bijection.
    pub(crate) fn relabel_vertices(mut self, tail_labels: &[usize]) -> Self {
        let n = self.orbits.len();
        let mut orbits = vec![Vec::new(); n];
        let mut cone = vec![0.0; n];
        for (v, orbit) in self.orbits.iter().enumerate() {
            let label = tail_labels[orbit[0]];
            orbits[label] = orbit.clone();
            cone[label] = self.cone_angles[v];
        }
        for (label, orbit) in orbits.iter().enumerate() {
            for &h in orbit {
                self.corner_vertex[h] = label;
            }
        }
        self.orbits = orbits;
        self.cone_angles = cone;
        self
    }

    /// Same combinatorics with new lengths, in edge-id order.
    pub fn with_lengths(&self, lengths: &[f64]) -> Result<Self> {
        if lengths.len() != self.edges.len() {
            return Err(Error::DimensionMismatch { expected: self.edges.len(), found: lengths.len() });
        }
        let mut out = self.clone();
        for (e, &l) in out.edges.iter_mut().zip(lengths) {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::NonPositiveLength { edge: e.id.clone(), length: l });
            }
            e.length = l;
        }
        out.refresh_angles()?;
        Ok(out)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn num_vertices(&self) -> usize {
        self.orbits.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[Side; 3]] {
        &self.triangles
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.binary_search_by(|e| e.id.as_str().cmp(id)).ok()
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.length).collect()
    }

    pub fn twin(&self, h: usize) -> usize {
        self.twin[h]
    }

    pub fn side(&self, h: usize) -> Side {
        self.triangles[h / 3][h % 3]
    }

    pub fn halfedge_edge(&self, h: usize) -> usize {
        self.side(h).edge
    }

    pub fn halfedge_length(&self, h: usize) -> f64 {
        self.edges[self.halfedge_edge(h)].length
    }

    /// `[forward, backward]` half-edges of an edge.
    pub fn edge_halves(&self, e: usize) -> [usize; 2] {
        self.halves[e]
    }

    /// Vertex at the start of half-edge `h`.
    pub fn tail(&self, h: usize) -> usize {
        self.corner_vertex[h]
    }

    pub fn head(&self, h: usize) -> usize {
        self.corner_vertex[next(h)]
    }

    /// `(tail, head)` of the edge's forward direction.
    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        let h = self.halves[e][0];
        (self.tail(h), self.head(h))
    }

    /// Angle of the corner at the start of half-edge `h`.
    pub fn corner_angle_at(&self, h: usize) -> f64 {
        self.corner_angles[h]
    }

    pub fn cone_angle(&self, v: usize) -> f64 {
        self.cone_angles[v]
    }

    pub fn cone_angles(&self) -> AngleData {
        AngleData { genus: self.genus, theta: self.cone_angles.clone() }
    }

    /// Half-edges leaving `v`, counterclockwise, starting from the smallest.
    pub fn orbit(&self, v: usize) -> &[usize] {
        &self.orbits[v]
    }

    pub fn vertex_fan(&self, v: usize) -> VertexFan {
        let orbit = &self.orbits[v];
        let germs = orbit.iter().map(|&h| Germ { halfedge: h, edge: self.halfedge_edge(h) }).collect();
        let gaps: Vec<f64> = orbit.iter().map(|&h| self.corner_angles[h]).collect();
        let mut prefix = Vec::with_capacity(gaps.len());
        let mut acc = 0.0;
        for g in &gaps {
            prefix.push(acc);
            acc += g;
        }
        VertexFan { vertex: v, germs, gaps, prefix, theta: self.cone_angles[v] }
    }

    pub fn vertex_fans(&self) -> Vec<VertexFan> {
        (0..self.num_vertices()).map(|v| self.vertex_fan(v)).collect()
    }

    /// Sum of triangle areas `pi - (alpha + beta + gamma)`.
    pub fn area(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| PI - (0..3).map(|k| self.corner_angles[3 * t + k]).sum::<f64>())
            .sum()
    }

    pub fn to_description(&self) -> SurfaceDescription {
        SurfaceDescription {
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord { id: e.id.clone(), length: e.length })
                .collect(),
            triangles: self
                .triangles
                .iter()
                .map(|tri| TriangleRecord {
                    sides: tri.map(|s| SideRecord::new(&self.edges[s.edge].id, s.forward)),
                })
                .collect(),
        }
    }

    /// Canonical text: edges sorted by id, lengths with 17 significant digits.
    pub fn to_canonical_json(&self) -> String {
        self.to_description().to_canonical_json()
    }
}
