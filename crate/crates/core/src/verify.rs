//! Certificates for the polyhedron axioms and for full transitivity.
//!
//! Every check is relative to the core of the polyhedron's window: a core
//! vertex lies in the core ball, a core edge has at least one core endpoint
//! and a core face piece has a corner at a core vertex. An unwindowed
//! polyhedron is core everywhere.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Rational, Vec3Q};
use crate::group::{enumerate_elements, rational_sqrt_upper, translation_lattice_with, ElementSet, GroupSpec, Window};
use crate::isometry::Isometry;
use crate::polyhedron::{Flag, Polyhedron};
use crate::skeleton::Edge;

/// Concrete evidence that an axiom fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A core edge lying in the wrong number of faces.
    Edge { edge: Edge, faces: usize },
    /// A core vertex whose faces do not form one circuit, or meet too often.
    Vertex { vertex: Vec3Q, reason: String },
    /// Two core edges not joined by a chain of faces.
    Disconnected { edge: Edge, unreachable: Edge },
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Witness::Edge { edge, faces } => {
                let (a, b) = edge.endpoints();
                write!(f, "edge {a} -- {b} lies in {faces} face(s)")
            }
            Witness::Vertex { vertex, reason } => write!(f, "vertex {vertex}: {reason}"),
            Witness::Disconnected { edge, unreachable } => {
                let (a, b) = edge.endpoints();
                let (c, d) = unreachable.endpoints();
                write!(f, "no face chain from edge {a} -- {b} to edge {c} -- {d}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub pass: bool,
    pub witness: Option<Witness>,
}

impl AxiomCheck {
    fn from_witness(witness: Option<Witness>) -> Self {
        AxiomCheck { pass: witness.is_none(), witness }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    /// Radius of the core ball the report certifies; `None` when unwindowed.
    pub core_radius: Option<String>,
    pub core_vertices: usize,
    pub core_edges: usize,
    pub core_faces: usize,
    /// Every core edge lies in exactly two faces.
    pub two_faces_per_edge: AxiomCheck,
    /// The faces at every core vertex form a single circuit.
    pub vertex_circuits: AxiomCheck,
    /// Core edges are linked by chains of faces.
    pub connected: AxiomCheck,
    /// Faces at a core vertex are bounded by its degree.
    pub locally_finite: AxiomCheck,
    pub max_faces_at_vertex: usize,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.pass)
    }

    pub fn checks(&self) -> [(&'static str, &AxiomCheck); 4] {
        [
            ("two faces per edge", &self.two_faces_per_edge),
            ("vertex circuits", &self.vertex_circuits),
            ("face-chain connectivity", &self.connected),
            ("local finiteness", &self.locally_finite),
        ]
    }

    pub fn render(&self) -> String {
        let mut out = match &self.core_radius {
            Some(r) => format!("axioms in core window of radius {r}\n"),
            None => "axioms on the whole polyhedron\n".to_string(),
        };
        out += &format!(
            "core: {} vertices, {} edges, {} faces\n",
            self.core_vertices, self.core_edges, self.core_faces
        );
        for (i, (name, check)) in self.checks().iter().enumerate() {
            let status = if check.pass { "pass" } else { "FAIL" };
            out += &format!("({}) {name}: {status}\n", i + 1);
            if let Some(w) = &check.witness {
                out += &format!("    witness: {w}\n");
            }
        }
        out
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Checks the four polyhedron axioms in the core of `p`'s window.
pub fn verify_axioms(p: &Polyhedron) -> AxiomReport {
    let core_edges: Vec<usize> = (0..p.edges().len()).filter(|&e| p.is_core_edge(e)).collect();
    let core_vertices: Vec<usize> = (0..p.vertices().len()).filter(|&v| p.is_core_vertex(v)).collect();

    let mut edge_faces = vec![0usize; p.edges().len()];
    let mut chains = UnionFind::new(p.edges().len());
    for f in p.faces() {
        let ids: Vec<usize> = f.segments().map(|(a, b)| p.edge_id(a, b).expect("face segments are edges")).collect();
        for &e in &ids {
            edge_faces[e] += 1;
            chains.union(ids[0], e);
        }
    }

    let axiom1 = core_edges
        .iter()
        .find(|&&e| edge_faces[e] != 2)
        .map(|&e| Witness::Edge { edge: p.edge(e), faces: edge_faces[e] });

    let mut corners_at: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); p.vertices().len()];
    for k in p.corners() {
        if p.is_core_vertex(k.vertex) {
            corners_at[k.vertex].push((k.a, k.c, k.face));
        }
    }
    let adjacency = p.neighbors();
    let mut axiom2 = None;
    let mut axiom4 = None;
    let mut max_faces = 0;
    for &v in &core_vertices {
        let corners = &corners_at[v];
        let mut faces: Vec<usize> = corners.iter().map(|k| k.2).collect();
        faces.sort_unstable();
        faces.dedup();
        max_faces = max_faces.max(faces.len());
        if axiom4.is_none() && faces.len() > adjacency[v].len() {
            axiom4 = Some(Witness::Vertex {
                vertex: p.vertices()[v].clone(),
                reason: format!("{} faces at a vertex of degree {}", faces.len(), adjacency[v].len()),
            });
        }
        if axiom2.is_none() {
            if let Some(reason) = circuit_defect(corners) {
                axiom2 = Some(Witness::Vertex { vertex: p.vertices()[v].clone(), reason });
            }
        }
    }

    let axiom3 = core_edges.split_first().and_then(|(&first, rest)| {
        let root = chains.find(first);
        rest.iter()
            .find(|&&e| chains.find(e) != root)
            .map(|&e| Witness::Disconnected { edge: p.edge(first), unreachable: p.edge(e) })
    });

    AxiomReport {
        core_radius: p.window().map(|w| w.core_radius().to_string()),
        core_vertices: core_vertices.len(),
        core_edges: core_edges.len(),
        core_faces: core_face_count(p),
        two_faces_per_edge: AxiomCheck::from_witness(axiom1),
        vertex_circuits: AxiomCheck::from_witness(axiom2),
        connected: AxiomCheck::from_witness(axiom3),
        locally_finite: AxiomCheck::from_witness(axiom4),
        max_faces_at_vertex: max_faces,
    }
}

/// Corners at one vertex chain into a single cycle when each arm is shared by
/// exactly two corners and the arm graph is connected.
fn circuit_defect(corners: &[(usize, usize, usize)]) -> Option<String> {
    if corners.is_empty() {
        return Some("no face meets the vertex".into());
    }
    let mut arms: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, &(a, c, _)) in corners.iter().enumerate() {
        arms.entry(a).or_default().push(i);
        arms.entry(c).or_default().push(i);
    }
    if let Some((_, users)) = arms.iter().find(|(_, users)| users.len() != 2) {
        return Some(format!("an edge at the vertex is shared by {} face corner(s)", users.len()));
    }
    let mut seen = vec![false; corners.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        let (a, c, _) = corners[i];
        for arm in [a, c] {
            for &j in &arms[&arm] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    let reached = seen.iter().filter(|&&s| s).count();
    (reached != corners.len())
        .then(|| format!("faces split into several circuits ({reached} of {} corners in one)", corners.len()))
}

fn core_face_count(p: &Polyhedron) -> usize {
    let mut faces: Vec<usize> = p.corners().into_iter().filter(|k| p.is_core_vertex(k.vertex)).map(|k| k.face).collect();
    faces.sort_unstable();
    faces.dedup();
    faces.len()
}

/// Orbit counts of core vertices, edges and face pieces under the
/// enumerated group elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityReport {
    pub core_radius: Option<String>,
    pub vertex_orbits: usize,
    pub edge_orbits: usize,
    pub face_orbits: usize,
    /// Group elements examined.
    pub elements: usize,
    /// Rank of the translation lattice among the examined elements.
    pub lattice_rank: Option<usize>,
    /// Element images of core items that are missing from the polyhedron.
    pub violations: usize,
    pub violation_examples: Vec<String>,
}

impl TransitivityReport {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.vertex_orbits, self.edge_orbits, self.face_orbits)
    }

    pub fn fully_transitive(&self) -> bool {
        self.counts() == (1, 1, 1) && self.violations == 0
    }

    pub fn render(&self) -> String {
        let scope = match &self.core_radius {
            Some(r) => format!("in core window of radius {r}"),
            None => "on the whole polyhedron".to_string(),
        };
        let mut out = format!(
            "orbits {scope}: vertices {}, edges {}, faces {}\n",
            self.vertex_orbits, self.edge_orbits, self.face_orbits
        );
        out += &format!("group elements examined: {}", self.elements);
        if let Some(rank) = self.lattice_rank {
            out += &format!(", translation lattice rank {rank}");
        }
        out += "\n";
        out += &format!("symmetry violations: {}\n", self.violations);
        for v in &self.violation_examples {
            out += &format!("    {v}\n");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagOrbits {
    pub count: usize,
    pub flags: usize,
    pub representatives: Vec<Flag>,
}

const VIOLATION_EXAMPLES: usize = 5;

/// Group elements sending each anchor vertex into the core, grown on demand.
struct Action<'a> {
    group: &'a GroupSpec,
    p: &'a Polyhedron,
    core: Rational,
    reach: Rational,
    elements: ElementSet,
    transports: HashMap<usize, Vec<(usize, usize)>>,
    violations: usize,
    examples: Vec<String>,
}

impl<'a> Action<'a> {
    fn new(group: &'a GroupSpec, p: &'a Polyhedron) -> Self {
        let core = match p.window() {
            Some(w) => w.core_radius(),
            None => {
                let max = p.vertices().iter().map(|v| v.norm_sq()).max_by(|a, b| a.value_cmp(b));
                max.map_or(Rational::ZERO, |m| rational_sqrt_upper(&m))
            }
        };
        let reach = Rational::ONE;
        let elements = Self::enumerate(group, &core, &reach);
        Action {
            group,
            p,
            core,
            reach,
            elements,
            transports: HashMap::new(),
            violations: 0,
            examples: Vec::new(),
        }
    }

    fn enumerate(group: &GroupSpec, core: &Rational, reach: &Rational) -> ElementSet {
        let radius = &(core + reach) + &Rational::ONE;
        let w = Window::new(radius, Rational::ONE).expect("radius exceeds one");
        enumerate_elements(group, &w)
    }

    /// `(element, image vertex)` for elements mapping vertex `r` into the core.
    fn transports(&mut self, r: usize) -> &[(usize, usize)] {
        if !self.transports.contains_key(&r) {
            let norm = rational_sqrt_upper(&self.p.vertices()[r].norm_sq());
            if norm > self.reach {
                self.reach = &norm + &Rational::ONE;
                self.elements = Self::enumerate(self.group, &self.core, &self.reach);
                self.transports.clear();
            }
            let src = &self.p.vertices()[r];
            let list = self
                .elements
                .iter()
                .enumerate()
                .filter_map(|(i, g)| {
                    let img = g.apply(src);
                    let j = self.p.vertex_index(&img)?;
                    self.p.is_core_vertex(j).then_some((i, j))
                })
                .collect();
            self.transports.insert(r, list);
        }
        &self.transports[&r]
    }

    fn element(&self, i: usize) -> &Isometry {
        &self.elements.as_slice()[i]
    }

    fn violation(&mut self, what: String) {
        self.violations += 1;
        if self.examples.len() < VIOLATION_EXAMPLES {
            self.examples.push(what);
        }
    }

    /// Union-find orbit partition of `items`, each anchored at a core vertex.
    /// `image` maps an item under an element whose anchor image is known.
    fn partition(
        &mut self,
        anchors: &[usize],
        uf: &mut UnionFind,
        image: impl Fn(&Isometry, usize, &Polyhedron) -> std::result::Result<usize, String>,
    ) {
        let vs = self.p.vertices();
        let mut order: Vec<usize> = (0..anchors.len()).collect();
        order.sort_by(|&a, &b| {
            vs[anchors[a]].norm_sq().value_cmp(&vs[anchors[b]].norm_sq()).then(anchors[a].cmp(&anchors[b])).then(a.cmp(&b))
        });
        let mut visited = vec![false; anchors.len()];
        for i in order {
            if visited[i] {
                continue;
            }
            visited[i] = true;
            let list = self.transports(anchors[i]).to_vec();
            for (g, _) in list {
                match image(self.element(g), i, self.p) {
                    Ok(j) => {
                        visited[j] = true;
                        uf.union(i, j);
                    }
                    Err(what) => self.violation(what),
                }
            }
        }
    }

    fn lattice_rank(&self) -> Option<usize> {
        translation_lattice_with(&self.elements).ok().map(|b| b.vectors().len())
    }
}

fn count_roots(uf: &mut UnionFind, items: impl Iterator<Item = usize>) -> usize {
    let mut roots: Vec<usize> = items.map(|i| uf.find(i)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

struct Incidence {
    core_vertices: Vec<usize>,
    core_edges: Vec<usize>,
    edge_anchor: Vec<usize>,
    /// Corners at core vertices: `(vertex, a, c, face)`.
    corners: Vec<(usize, usize, usize, usize)>,
    corner_index: HashMap<(usize, usize, usize), usize>,
}

impl Incidence {
    fn new(p: &Polyhedron) -> Self {
        let vs = p.vertices();
        let core_vertices: Vec<usize> = (0..vs.len()).filter(|&v| p.is_core_vertex(v)).collect();
        let core_edges: Vec<usize> = (0..p.edges().len()).filter(|&e| p.is_core_edge(e)).collect();
        let edge_anchor = core_edges
            .iter()
            .map(|&e| {
                let [a, b] = p.edges()[e];
                match (p.is_core_vertex(a), p.is_core_vertex(b)) {
                    (true, true) if vs[b].norm_sq().value_cmp(&vs[a].norm_sq()).is_lt() => b,
                    (true, _) => a,
                    _ => b,
                }
            })
            .collect();
        let corners: Vec<(usize, usize, usize, usize)> = p
            .corners()
            .into_iter()
            .filter(|k| p.is_core_vertex(k.vertex))
            .map(|k| (k.vertex, k.a.min(k.c), k.a.max(k.c), k.face))
            .collect();
        let corner_index = corners.iter().enumerate().map(|(i, &(v, a, c, _))| ((v, a, c), i)).collect();
        Incidence { core_vertices, core_edges, edge_anchor, corners, corner_index }
    }

    fn corner_image(&self, g: &Isometry, i: usize, p: &Polyhedron) -> std::result::Result<usize, String> {
        let (v, a, c, _) = self.corners[i];
        let vs = p.vertices();
        let img = |k: usize| p.vertex_index(&g.apply(&vs[k]));
        let missing = || format!("corner at {} has no image corner", vs[v]);
        let (gv, ga, gc) = match (img(v), img(a), img(c)) {
            (Some(x), Some(y), Some(z)) => (x, y, z),
            _ => return Err(missing()),
        };
        self.corner_index.get(&(gv, ga.min(gc), ga.max(gc))).copied().ok_or_else(missing)
    }
}

fn transitivity(action: &mut Action, inc: &Incidence) -> (usize, usize, usize) {
    let p = action.p;
    let vs = p.vertices();

    let mut uf = UnionFind::new(inc.core_vertices.len());
    let position: HashMap<usize, usize> = inc.core_vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    action.partition(&inc.core_vertices, &mut uf, |g, i, p| {
        let v = inc.core_vertices[i];
        p.vertex_index(&g.apply(&vs[v]))
            .and_then(|j| position.get(&j).copied())
            .ok_or_else(|| format!("vertex {} has no image vertex", vs[v]))
    });
    let vertex_orbits = count_roots(&mut uf, 0..inc.core_vertices.len());

    let mut uf = UnionFind::new(inc.core_edges.len());
    let position: HashMap<usize, usize> = inc.core_edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    action.partition(&inc.edge_anchor, &mut uf, |g, i, p| {
        let [a, b] = p.edges()[inc.core_edges[i]];
        let image = |k: usize| p.vertex_index(&g.apply(&vs[k]));
        image(a)
            .zip(image(b))
            .and_then(|(x, y)| p.edge_id(x, y))
            .and_then(|e| position.get(&e).copied())
            .ok_or_else(|| format!("edge {} -- {} has no image edge", vs[a], vs[b]))
    });
    let edge_orbits = count_roots(&mut uf, 0..inc.core_edges.len());

    let mut uf = UnionFind::new(inc.corners.len());
    let mut first_of_face: HashMap<usize, usize> = HashMap::new();
    for (i, k) in inc.corners.iter().enumerate() {
        let first = *first_of_face.entry(k.3).or_insert(i);
        uf.union(first, i);
    }
    let anchors: Vec<usize> = inc.corners.iter().map(|k| k.0).collect();
    action.partition(&anchors, &mut uf, |g, i, p| inc.corner_image(g, i, p));
    let face_orbits = count_roots(&mut uf, first_of_face.values().copied());

    (vertex_orbits, edge_orbits, face_orbits)
}

fn transitivity_with(action: &mut Action, inc: &Incidence) -> TransitivityReport {
    let (vertex_orbits, edge_orbits, face_orbits) = transitivity(action, inc);
    TransitivityReport {
        core_radius: action.p.window().map(|w| w.core_radius().to_string()),
        vertex_orbits,
        edge_orbits,
        face_orbits,
        elements: action.elements.len(),
        lattice_rank: action.lattice_rank(),
        violations: action.violations,
        violation_examples: action.examples.clone(),
    }
}

/// Orbits of core vertices, edges and face pieces under `g`. An element acts
/// on an item when it maps the item's anchor vertex into the core.
pub fn transitivity_report(g: &GroupSpec, p: &Polyhedron) -> TransitivityReport {
    let inc = Incidence::new(p);
    transitivity_with(&mut Action::new(g, p), &inc)
}

fn flag_partition(action: &mut Action, inc: &Incidence) -> FlagOrbits {
    let p = action.p;
    let vs = p.vertices();
    // Flag 2i takes arm a of corner i, flag 2i + 1 takes arm c.
    let n = inc.corners.len() * 2;
    let anchors: Vec<usize> = (0..n).map(|f| inc.corners[f / 2].0).collect();
    let mut uf = UnionFind::new(n);
    action.partition(&anchors, &mut uf, |g, f, p| {
        let (_, a, c, _) = inc.corners[f / 2];
        let arm = if f % 2 == 0 { a } else { c };
        let j = inc.corner_image(g, f / 2, p)?;
        let (_, ja, _, _) = inc.corners[j];
        let garm = p.vertex_index(&g.apply(&vs[arm])).ok_or_else(|| "flag arm has no image".to_string())?;
        Ok(2 * j + usize::from(garm != ja))
    });
    let mut reps: HashMap<usize, usize> = HashMap::new();
    for f in 0..n {
        let r = uf.find(f);
        reps.entry(r).or_insert(f);
    }
    let mut representatives: Vec<Flag> = reps
        .values()
        .map(|&f| {
            let (v, a, c, face) = inc.corners[f / 2];
            let arm = if f % 2 == 0 { a } else { c };
            Flag {
                v: vs[v].clone(),
                e: Edge::new(vs[v].clone(), vs[arm].clone()).expect("flag edges are nondegenerate"),
                f: face,
            }
        })
        .collect();
    representatives.sort();
    FlagOrbits { count: reps.len(), flags: n, representatives }
}

/// Orbits of flags at core vertices. Errors when `p` is fully transitive but
/// the count is not 1, 2 or 4.
pub fn flag_orbits(g: &GroupSpec, p: &Polyhedron) -> Result<FlagOrbits> {
    Ok(symmetry_report(g, p)?.flags)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub transitivity: TransitivityReport,
    pub flags: FlagOrbits,
}

/// Transitivity and flag orbits from a single enumeration.
pub fn symmetry_report(g: &GroupSpec, p: &Polyhedron) -> Result<SymmetryReport> {
    let inc = Incidence::new(p);
    let mut action = Action::new(g, p);
    let flags = flag_partition(&mut action, &inc);
    let transitivity = transitivity_with(&mut action, &inc);
    if flags.flags != p.flags().len() {
        return Err(Error::Inconsistency(format!(
            "{} corner flags against {} incident flags",
            flags.flags,
            p.flags().len()
        )));
    }
    if transitivity.fully_transitive() && ![1, 2, 4].contains(&flags.count) {
        return Err(Error::Inconsistency(format!(
            "fully transitive structure with {} flag orbits",
            flags.count
        )));
    }
    Ok(SymmetryReport { transitivity, flags })
}

/// Flags at core vertices summed over faces: every segment of a face
/// contributes one flag per core endpoint that is a corner of that face.
pub fn flag_identity(p: &Polyhedron) -> (usize, usize) {
    let by_faces: usize = p
        .faces()
        .iter()
        .map(|f| {
            let n = f.vertices.len();
            f.segments()
                .enumerate()
                .map(|(i, (a, b))| {
                    let interior = |pos: usize| f.closed || (pos != 0 && pos != n - 1);
                    usize::from(p.is_core_vertex(a) && interior(i))
                        + usize::from(p.is_core_vertex(b) && interior((i + 1) % n))
                })
                .sum::<usize>()
        })
        .sum();
    (p.flags().len(), by_faces)
}
