//! Windowed incidence structures `(V, E, F)`.
//!
//! Faces are Grünbaum polygons: closed cycles, or infinite paths that are cut
//! where they leave the window. A cut face is stored as the maximal run of its
//! vertices inside the window together with the first vertex outside on each
//! side, and is marked truncated.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Vec3Q;
use crate::group::Window;
use crate::skeleton::Edge;

/// A polygon given by its vertex path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Face {
    pub vertices: Vec<Vec3Q>,
    /// The path is a cycle; its last vertex is joined to its first.
    pub closed: bool,
    /// The face continues beyond both ends of the stored path.
    pub truncated: bool,
}

impl Face {
    pub fn closed(vertices: Vec<Vec3Q>) -> Self {
        Face { vertices, closed: true, truncated: false }
    }

    pub fn truncated(vertices: Vec<Vec3Q>) -> Self {
        Face { vertices, closed: false, truncated: true }
    }

    pub fn edge_count(&self) -> usize {
        match (self.closed, self.vertices.len()) {
            (_, 0) | (_, 1) => 0,
            (true, n) => n,
            (false, n) => n - 1,
        }
    }

    /// Consecutive vertex pairs, including the closing pair of a cycle.
    pub fn segments(&self) -> impl Iterator<Item = (&Vec3Q, &Vec3Q)> + '_ {
        let n = self.vertices.len();
        (0..self.edge_count()).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    /// Interior corners `(prev, vertex, next)`: every vertex of a cycle, every
    /// vertex but the two ends of a path.
    pub fn corners(&self) -> Vec<(&Vec3Q, &Vec3Q, &Vec3Q)> {
        corner_positions(self.vertices.len(), self.closed)
            .map(|(a, b, c)| (&self.vertices[a], &self.vertices[b], &self.vertices[c]))
            .collect()
    }

    /// Least presentation over reversal and, for cycles, rotation.
    pub fn canonical(&self) -> Face {
        Face { vertices: canonical_sequence(&self.vertices, self.closed), ..self.clone() }
    }

    pub fn image(&self, g: &crate::isometry::Isometry) -> Face {
        Face { vertices: self.vertices.iter().map(|p| g.apply(p)).collect(), ..self.clone() }
    }
}

fn corner_positions(n: usize, closed: bool) -> impl Iterator<Item = (usize, usize, usize)> {
    let range = if closed { 0..n } else { 1..n.saturating_sub(1).max(1) };
    range.map(move |i| ((i + n - 1) % n, i, (i + 1) % n))
}

/// Least sequence among the reversal and (for cycles) rotations of `seq`.
pub fn canonical_sequence<T: Ord + Clone>(seq: &[T], cyclic: bool) -> Vec<T> {
    let mut rev: Vec<T> = seq.to_vec();
    rev.reverse();
    if !cyclic {
        return std::cmp::min(seq.to_vec(), rev);
    }
    let n = seq.len();
    let mut best = seq.to_vec();
    for s in [seq, &rev[..]] {
        for r in 0..n {
            let cand: Vec<T> = s[r..].iter().chain(&s[..r]).cloned().collect();
            if cand < best {
                best = cand;
            }
        }
    }
    best
}

/// A face by vertex indices into its polyhedron.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexedFace {
    pub vertices: Vec<usize>,
    pub closed: bool,
}

impl IndexedFace {
    pub fn truncated(&self) -> bool {
        !self.closed
    }

    pub fn edge_count(&self) -> usize {
        match (self.closed, self.vertices.len()) {
            (_, 0) | (_, 1) => 0,
            (true, n) => n,
            (false, n) => n - 1,
        }
    }

    pub fn segments(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.vertices.len();
        (0..self.edge_count()).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn corners(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        corner_positions(self.vertices.len(), self.closed)
            .map(|(a, b, c)| (self.vertices[a], self.vertices[b], self.vertices[c]))
    }
}

/// The corner of face `face` at `vertex` between edges to `a` and `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub vertex: usize,
    pub a: usize,
    pub c: usize,
    pub face: usize,
}

/// Incident triple `v ≤ e ≤ f`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flag {
    pub v: Vec3Q,
    pub e: Edge,
    pub f: usize,
}

/// Vertex, edge and face sets with incidence, optionally relative to a window.
#[derive(Debug, Clone)]
pub struct Polyhedron {
    vertices: Vec<Vec3Q>,
    edges: Vec<[usize; 2]>,
    faces: Vec<IndexedFace>,
    window: Option<Window>,
    index: HashMap<Vec3Q, usize>,
    edge_index: HashMap<[usize; 2], usize>,
}

impl PartialEq for Polyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.edges == other.edges
            && self.faces == other.faces
            && self.window == other.window
    }
}

impl Eq for Polyhedron {}

fn ordered(i: usize, j: usize) -> [usize; 2] {
    if i < j {
        [i, j]
    } else {
        [j, i]
    }
}

impl Polyhedron {
    /// Validates incidence: edge endpoints are vertices and consecutive face
    /// vertices are edges. Output is in canonical order.
    pub fn new(vertices: Vec<Vec3Q>, edges: Vec<Edge>, faces: Vec<Face>, window: Option<Window>) -> Result<Self> {
        let mut vertices = vertices;
        vertices.sort();
        vertices.dedup();
        let index: HashMap<Vec3Q, usize> = vertices.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let lookup = |p: &Vec3Q| {
            index.get(p).copied().ok_or_else(|| Error::Invariant(format!("{p} is not a vertex")))
        };
        let mut eidx = edges
            .iter()
            .map(|e| {
                let (a, b) = e.endpoints();
                Ok(ordered(lookup(a)?, lookup(b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        eidx.sort_unstable();
        eidx.dedup();
        let edge_index: HashMap<[usize; 2], usize> = eidx.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let mut fidx = Vec::with_capacity(faces.len());
        for f in &faces {
            if f.closed == f.truncated {
                return Err(Error::Invariant("a face is either closed or truncated".into()));
            }
            if f.closed && f.vertices.len() < 3 {
                return Err(Error::Invariant("closed face with fewer than 3 vertices".into()));
            }
            if f.vertices.len() < 2 {
                return Err(Error::Invariant("face with fewer than 2 vertices".into()));
            }
            let ids = f.vertices.iter().map(&lookup).collect::<Result<Vec<_>>>()?;
            let face = IndexedFace { vertices: canonical_sequence(&ids, f.closed), closed: f.closed };
            for (a, b) in face.segments() {
                if !edge_index.contains_key(&ordered(a, b)) {
                    return Err(Error::Invariant(format!(
                        "face segment {} - {} is not an edge",
                        vertices[a], vertices[b]
                    )));
                }
            }
            fidx.push(face);
        }
        fidx.sort();
        fidx.dedup();
        Ok(Polyhedron { vertices, edges: eidx, faces: fidx, window, index, edge_index })
    }

    /// Vertices and edges taken from the faces.
    pub fn from_faces(faces: Vec<Face>, window: Option<Window>) -> Result<Self> {
        let vertices: Vec<Vec3Q> = faces.iter().flat_map(|f| f.vertices.iter().cloned()).collect();
        let edges = faces
            .iter()
            .flat_map(|f| f.segments().map(|(a, b)| Edge::new(a.clone(), b.clone())).collect::<Vec<_>>())
            .collect::<Result<Vec<_>>>()?;
        Polyhedron::new(vertices, edges, faces, window)
    }

    pub fn vertices(&self) -> &[Vec3Q] {
        &self.vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> Edge {
        let [a, b] = self.edges[i];
        Edge::new(self.vertices[a].clone(), self.vertices[b].clone()).expect("edges are nondegenerate")
    }

    pub fn faces(&self) -> &[IndexedFace] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> Face {
        let f = &self.faces[i];
        Face {
            vertices: f.vertices.iter().map(|&j| self.vertices[j].clone()).collect(),
            closed: f.closed,
            truncated: !f.closed,
        }
    }

    pub fn window(&self) -> Option<&Window> {
        self.window.as_ref()
    }

    pub fn vertex_index(&self, p: &Vec3Q) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn edge_id(&self, i: usize, j: usize) -> Option<usize> {
        self.edge_index.get(&ordered(i, j)).copied()
    }

    /// Inside the core window; every vertex of an unwindowed polyhedron is core.
    pub fn is_core_vertex(&self, i: usize) -> bool {
        self.window.as_ref().map_or(true, |w| w.core_contains(&self.vertices[i]))
    }

    pub fn is_window_vertex(&self, i: usize) -> bool {
        self.window.as_ref().map_or(true, |w| w.contains(&self.vertices[i]))
    }

    /// Edges with at least one endpoint in the core window.
    pub fn is_core_edge(&self, e: usize) -> bool {
        let [a, b] = self.edges[e];
        self.is_core_vertex(a) || self.is_core_vertex(b)
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &[a, b] in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Every face corner, in face order.
    pub fn corners(&self) -> Vec<Corner> {
        self.faces
            .iter()
            .enumerate()
            .flat_map(|(fi, f)| f.corners().map(move |(a, v, c)| Corner { vertex: v, a, c, face: fi }))
            .collect()
    }

    /// Flags at core vertices. Each face corner at `v` yields the two flags
    /// through its arms.
    pub fn flags(&self) -> Vec<Flag> {
        let mut out: Vec<Flag> = self
            .corners()
            .into_iter()
            .filter(|k| self.is_core_vertex(k.vertex))
            .flat_map(|k| {
                let v = self.vertices[k.vertex].clone();
                [k.a, k.c].map(|n| Flag {
                    v: v.clone(),
                    e: Edge::new(v.clone(), self.vertices[n].clone()).expect("face arms are edges"),
                    f: k.face,
                })
            })
            .collect();
        out.sort();
        out
    }

    pub fn closed_face_count(&self) -> usize {
        self.faces.iter().filter(|f| f.closed).count()
    }

    /// Every face is a closed polygon.
    pub fn is_finite(&self) -> bool {
        self.faces.iter().all(|f| f.closed)
    }
}
