//! Edge orbits, the skeleton graph and stars of edges at the base point.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{QSqrt3, Vec3Q};
use crate::group::{
    enumerate_elements, point_stabilizer, rational_sqrt_upper, ElementSet, GroupSpec, LatticeBasis, LatticeClass,
    Window,
};
use crate::isometry::Isometry;

/// Unordered segment between two distinct points, stored smaller endpoint first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    a: Vec3Q,
    b: Vec3Q,
}

impl Edge {
    pub fn new(p: Vec3Q, q: Vec3Q) -> Result<Self> {
        match p.cmp(&q) {
            std::cmp::Ordering::Less => Ok(Edge { a: p, b: q }),
            std::cmp::Ordering::Greater => Ok(Edge { a: q, b: p }),
            std::cmp::Ordering::Equal => Err(Error::Invariant(format!("degenerate edge at {p}"))),
        }
    }

    pub fn endpoints(&self) -> (&Vec3Q, &Vec3Q) {
        (&self.a, &self.b)
    }

    pub fn contains(&self, p: &Vec3Q) -> bool {
        &self.a == p || &self.b == p
    }

    /// The endpoint other than `p`, if `p` is an endpoint.
    pub fn other(&self, p: &Vec3Q) -> Option<&Vec3Q> {
        if &self.a == p {
            Some(&self.b)
        } else if &self.b == p {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn image(&self, g: &Isometry) -> Edge {
        Edge::new(g.apply(&self.a), g.apply(&self.b)).expect("isometries are injective")
    }

    pub fn length_sq(&self) -> QSqrt3 {
        (&self.b - &self.a).norm_sq()
    }
}

/// Undirected graph on exact points with an adjacency index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonGraph {
    vertices: Vec<Vec3Q>,
    edges: Vec<[usize; 2]>,
    adjacency: Vec<Vec<usize>>,
    index: HashMap<Vec3Q, usize>,
}

impl SkeletonGraph {
    pub fn from_edges(edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut es: Vec<Edge> = edges.into_iter().collect();
        es.sort();
        es.dedup();
        let mut vertices: Vec<Vec3Q> = es.iter().flat_map(|e| [e.a.clone(), e.b.clone()]).collect();
        vertices.sort();
        vertices.dedup();
        let index: HashMap<Vec3Q, usize> = vertices.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let mut adjacency = vec![Vec::new(); vertices.len()];
        let edges: Vec<[usize; 2]> = es
            .iter()
            .map(|e| {
                let (i, j) = (index[&e.a], index[&e.b]);
                adjacency[i].push(j);
                adjacency[j].push(i);
                [i, j]
            })
            .collect();
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        SkeletonGraph { vertices, edges, adjacency, index }
    }

    pub fn vertices(&self) -> &[Vec3Q] {
        &self.vertices
    }

    pub fn edge_indices(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.edges
            .iter()
            .map(|&[i, j]| Edge { a: self.vertices[i].clone(), b: self.vertices[j].clone() })
            .collect()
    }

    pub fn index_of(&self, p: &Vec3Q) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn neighbor_points(&self, p: &Vec3Q) -> Vec<Vec3Q> {
        match self.index_of(p) {
            Some(i) => self.adjacency[i].iter().map(|&j| self.vertices[j].clone()).collect(),
            None => Vec::new(),
        }
    }

    pub fn degree(&self, p: &Vec3Q) -> usize {
        self.index_of(p).map_or(0, |i| self.adjacency[i].len())
    }

    pub fn has_edge(&self, p: &Vec3Q, q: &Vec3Q) -> bool {
        match (self.index_of(p), self.index_of(q)) {
            (Some(i), Some(j)) => self.adjacency[i].binary_search(&j).is_ok(),
            _ => false,
        }
    }

    pub fn dump(&self) -> GraphDump {
        GraphDump { vertices: self.vertices.clone(), edges: self.edges.clone() }
    }
}

/// JSON form of a graph: vertex list and edge index pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDump {
    pub vertices: Vec<Vec3Q>,
    pub edges: Vec<[usize; 2]>,
}

/// Images of `e` with at least one endpoint in the window.
pub fn edge_orbit(g: &GroupSpec, e: &Edge, w: &Window) -> Result<SkeletonGraph> {
    let (a, b) = e.endpoints();
    let reach = rational_sqrt_upper(&a.norm_sq()).max(rational_sqrt_upper(&b.norm_sq()));
    let elements = enumerate_elements(g, &w.grown(&(&reach + &reach)));
    edge_orbit_with(&elements, e, w)
}

/// [`edge_orbit`] over a precomputed element set covering the window grown by
/// twice the larger endpoint norm.
pub fn edge_orbit_with(elements: &ElementSet, e: &Edge, w: &Window) -> Result<SkeletonGraph> {
    let (a, b) = e.endpoints();
    if !elements.iter().any(|g| &g.apply(a) == b) {
        return Err(Error::NotVertexTransitive);
    }
    let images = elements.iter().map(|g| e.image(g)).filter(|img| {
        let (p, q) = img.endpoints();
        w.contains(p) || w.contains(q)
    });
    Ok(SkeletonGraph::from_edges(images))
}

/// The star `Q_v`: the orbit of `[u v]` under the stabilizer of `u`.
pub fn star(g: &GroupSpec, u: &Vec3Q, v: &Vec3Q) -> Result<Vec<Edge>> {
    let stab = point_stabilizer(g, u)?;
    star_with(&stab, u, v)
}

pub fn star_with(stabilizer: &[Isometry], u: &Vec3Q, v: &Vec3Q) -> Result<Vec<Edge>> {
    if u == v {
        return Err(Error::Invariant("star needs two distinct points".into()));
    }
    let mut edges: Vec<Edge> = stabilizer
        .iter()
        .map(|s| Edge::new(u.clone(), s.apply(v)))
        .collect::<Result<_>>()?;
    edges.sort();
    edges.dedup();
    Ok(edges)
}

/// Far endpoints of a star at `u`, in canonical point order.
pub fn star_endpoints(star: &[Edge], u: &Vec3Q) -> Result<Vec<Vec3Q>> {
    let mut pts = star
        .iter()
        .map(|e| e.other(u).cloned().ok_or_else(|| Error::Invariant(format!("star edge {e:?} misses {u}"))))
        .collect::<Result<Vec<_>>>()?;
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// Per-class outcome of the star comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarClassEntry {
    pub representative: Vec3Q,
    pub members_checked: usize,
    /// Distinct star sizes observed in the class.
    pub star_sizes: Vec<usize>,
    pub pass: bool,
    /// A member whose reduced star differs from the representative's.
    pub witness: Option<Vec3Q>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarClassReport {
    pub entries: Vec<StarClassEntry>,
}

impl StarClassReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

/// Star directions at `u` reduced modulo the translation lattice.
fn reduced_star(stabilizer: &[Isometry], u: &Vec3Q, v: &Vec3Q, lattice: &LatticeBasis) -> Vec<[QSqrt3; 3]> {
    let mut keys: Vec<[QSqrt3; 3]> = stabilizer.iter().map(|s| lattice.coset_key(&(&s.apply(v) - u))).collect();
    keys.sort();
    keys.dedup();
    keys
}

/// For each class, compares the stars `Q_v` of its core-window members with
/// `u` fixed. Two stars of the same class differ by lattice translations of
/// their far endpoints, so they are compared modulo Λ; raw edge counts are
/// reported alongside.
pub fn star_class_invariance(
    g: &GroupSpec,
    u: &Vec3Q,
    classes: &[LatticeClass],
    lattice: &LatticeBasis,
    w: &Window,
) -> Result<StarClassReport> {
    let stab = point_stabilizer(g, u)?;
    let entries = classes
        .iter()
        .map(|class| {
            let members: Vec<&Vec3Q> = class.members.iter().filter(|p| *p != u && w.core_contains(p)).collect();
            let mut reference: Option<Vec<[QSqrt3; 3]>> = None;
            let mut witness = None;
            let mut sizes: HashSet<usize> = HashSet::new();
            for &m in &members {
                let r = reduced_star(&stab, u, m, lattice);
                sizes.insert(star_with(&stab, u, m).map(|s| s.len()).unwrap_or(0));
                match &reference {
                    None => reference = Some(r),
                    Some(r0) if *r0 != r && witness.is_none() => witness = Some(m.clone()),
                    _ => {}
                }
            }
            let mut star_sizes: Vec<usize> = sizes.into_iter().collect();
            star_sizes.sort_unstable();
            StarClassEntry {
                representative: class.representative.clone(),
                members_checked: members.len(),
                star_sizes,
                pass: witness.is_none(),
                witness,
            }
        })
        .collect();
    Ok(StarClassReport { entries })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityReport {
    pub connected_in_core: bool,
    pub core_radius: String,
    pub core_vertices: usize,
    pub reached: usize,
    /// A core vertex not reached from the root.
    pub witness: Option<Vec3Q>,
}

/// Breadth-first reachability inside the full window from the vertex nearest
/// the origin. This certifies connectivity of the core window only.
pub fn connectivity_check(graph: &SkeletonGraph, w: &Window) -> ConnectivityReport {
    let verts = graph.vertices();
    let root = (0..verts.len())
        .filter(|&i| w.contains(&verts[i]))
        .min_by(|&i, &j| verts[i].norm_sq().value_cmp(&verts[j].norm_sq()).then_with(|| verts[i].cmp(&verts[j])));
    let core: Vec<usize> = (0..verts.len()).filter(|&i| w.core_contains(&verts[i])).collect();
    let mut seen = vec![false; verts.len()];
    if let Some(r) = root {
        let mut queue = VecDeque::from([r]);
        seen[r] = true;
        while let Some(i) = queue.pop_front() {
            for &j in graph.neighbors(i) {
                if !seen[j] && w.contains(&verts[j]) {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    let witness = core.iter().find(|&&i| !seen[i]).map(|&i| verts[i].clone());
    ConnectivityReport {
        connected_in_core: witness.is_none(),
        core_radius: w.core_radius().to_string(),
        core_vertices: core.len(),
        reached: core.iter().filter(|&&i| seen[i]).count(),
        witness,
    }
}
