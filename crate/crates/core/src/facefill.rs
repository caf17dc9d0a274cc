//! Vertex figures, angle classes, face tracing and polyhedron assembly.
//!
//! A vertex figure at `u` is a cyclic order on the far endpoints of the star;
//! consecutive endpoints `s, s'` span the face angle `∠s u s'`. Angles are
//! classed by the symmetries of the stabilizer that preserve the figure.
//!
//! Faces are traced under the alternation rule: leaving an angle of type α
//! the next angle is of type β and vice versa. At every edge the figure
//! offers exactly one angle of each type, so the continuation is forced.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{QSqrt3, Rational, Vec3Q};
use crate::group::{enumerate_elements, point_stabilizer, rational_sqrt_upper, Character, ElementSet, GroupSpec, Window};
use crate::honeypie::{base_point, honeypie_generators, named_points, HoneypieConfig};
use crate::isometry::Isometry;
use crate::polyhedron::{canonical_sequence, Face, Polyhedron};
use crate::skeleton::{star_endpoints, star_with, Edge, SkeletonGraph};

/// Largest star for which all cyclic orders are enumerated.
pub const MAX_FIGURE_SIZE: usize = 10;

/// Cyclic order on the far endpoints of a star at `center`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexFigure {
    center: Vec3Q,
    cycle: Vec<Vec3Q>,
}

impl VertexFigure {
    pub fn new(center: Vec3Q, cycle: Vec<Vec3Q>) -> Result<Self> {
        if cycle.len() < 3 {
            return Err(Error::DegenerateVertexFigure(cycle.len()));
        }
        let distinct: HashSet<&Vec3Q> = cycle.iter().collect();
        if distinct.len() != cycle.len() || distinct.contains(&center) {
            return Err(Error::Invariant("figure points must be distinct and differ from the center".into()));
        }
        Ok(VertexFigure { center, cycle })
    }

    pub fn center(&self) -> &Vec3Q {
        &self.center
    }

    pub fn cycle(&self) -> &[Vec3Q] {
        &self.cycle
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    /// Endpoints of angle `i`: `(cycle[i], cycle[i+1])`.
    pub fn pair(&self, i: usize) -> (&Vec3Q, &Vec3Q) {
        (&self.cycle[i], &self.cycle[(i + 1) % self.cycle.len()])
    }

    /// Position of the angle with endpoints `{a, c}`.
    pub fn pair_position(&self, a: &Vec3Q, c: &Vec3Q) -> Option<usize> {
        let i = self.cycle.iter().position(|p| p == a)?;
        let n = self.cycle.len();
        if &self.cycle[(i + 1) % n] == c {
            Some(i)
        } else if &self.cycle[(i + n - 1) % n] == c {
            Some((i + n - 1) % n)
        } else {
            None
        }
    }

    pub fn position(&self, p: &Vec3Q) -> Option<usize> {
        self.cycle.iter().position(|q| q == p)
    }

    pub fn image(&self, g: &Isometry) -> VertexFigure {
        VertexFigure { center: g.apply(&self.center), cycle: self.cycle.iter().map(|p| g.apply(p)).collect() }
    }

    /// Unordered angle endpoint pairs, each stored least point first.
    fn pair_set(&self) -> HashSet<(Vec3Q, Vec3Q)> {
        (0..self.len())
            .map(|i| {
                let (a, c) = self.pair(i);
                if a < c {
                    (a.clone(), c.clone())
                } else {
                    (c.clone(), a.clone())
                }
            })
            .collect()
    }

    /// `g` fixes the center and permutes the angles.
    pub fn is_preserved_by(&self, g: &Isometry) -> bool {
        if g.apply(&self.center) != self.center {
            return false;
        }
        let pairs = self.pair_set();
        (0..self.len()).all(|i| {
            let (a, c) = self.pair(i);
            let (a, c) = (g.apply(a), g.apply(c));
            let key = if a < c { (a, c) } else { (c, a) };
            pairs.contains(&key)
        })
    }

    /// Least presentation over rotation and reversal.
    pub fn canonical(&self) -> VertexFigure {
        VertexFigure { center: self.center.clone(), cycle: canonical_sequence(&self.cycle, true) }
    }
}

/// Permutations of `points` induced by the stabilizer, deduplicated.
fn induced_permutations(points: &[Vec3Q], stabilizer: &[Isometry]) -> Result<Vec<Vec<usize>>> {
    let index: HashMap<&Vec3Q, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut perms: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in stabilizer {
        let perm = points
            .iter()
            .map(|p| {
                index
                    .get(&s.apply(p))
                    .copied()
                    .ok_or_else(|| Error::Invariant("stabilizer does not permute the star".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        perms.insert(perm);
    }
    Ok(perms.into_iter().collect())
}

fn canonical_cycle(cycle: &[usize], perms: &[Vec<usize>]) -> Vec<usize> {
    perms
        .iter()
        .map(|p| canonical_sequence(&cycle.iter().map(|&i| p[i]).collect::<Vec<_>>(), true))
        .min()
        .expect("the identity is always present")
}

/// All cycles through `0..n` starting at 0, one per reversal pair.
fn all_cycles(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if cur.len() == n {
            if cur[1] < cur[n - 1] {
                out.push(cur.clone());
            }
            return;
        }
        for i in 1..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; n];
    used[0] = true;
    go(&mut vec![0], &mut used, &mut out);
    out
}

/// Class index of each angle position under the permutations preserving the cycle.
fn position_labels(cycle: &[usize], perms: &[Vec<usize>]) -> Vec<usize> {
    let n = cycle.len();
    let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    let pos: HashMap<(usize, usize), usize> = (0..n).map(|i| (key(cycle[i], cycle[(i + 1) % n]), i)).collect();
    let sym: Vec<&Vec<usize>> = perms
        .iter()
        .filter(|p| pos.keys().all(|&(a, b)| pos.contains_key(&key(p[a], p[b]))))
        .collect();
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    for i in 0..n {
        if labels[i] != usize::MAX {
            continue;
        }
        for p in &sym {
            let j = pos[&key(p[cycle[i]], p[cycle[(i + 1) % n]])];
            labels[j] = next;
        }
        next += 1;
    }
    labels
}

/// How angle classes sit around a figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alternation {
    /// One class: every angle is equivalent.
    Single,
    /// Even length, one parity of positions is a single class α and the
    /// other parity shares no class with it.
    Alternating { alpha_parity: usize },
    Violated,
}

impl Alternation {
    pub fn of(labels: &[usize]) -> Alternation {
        let distinct: HashSet<usize> = labels.iter().copied().collect();
        if distinct.len() == 1 {
            return Alternation::Single;
        }
        if labels.len() % 2 == 1 {
            return Alternation::Violated;
        }
        let even: HashSet<usize> = labels.iter().step_by(2).copied().collect();
        let odd: HashSet<usize> = labels.iter().skip(1).step_by(2).copied().collect();
        if !even.is_disjoint(&odd) {
            return Alternation::Violated;
        }
        match (even.len(), odd.len()) {
            (1, 1) => {
                let alpha_parity = if labels[0] < labels[1] { 0 } else { 1 };
                Alternation::Alternating { alpha_parity }
            }
            (1, _) => Alternation::Alternating { alpha_parity: 0 },
            (_, 1) => Alternation::Alternating { alpha_parity: 1 },
            _ => Alternation::Violated,
        }
    }

    pub fn passes(self) -> bool {
        self != Alternation::Violated
    }
}

fn common_center(star: &[Edge]) -> Result<Vec3Q> {
    let first = star.first().ok_or(Error::DegenerateVertexFigure(0))?;
    let (a, b) = first.endpoints();
    for cand in [a, b] {
        if star.iter().all(|e| e.contains(cand)) {
            return Ok(cand.clone());
        }
    }
    Err(Error::Invariant("star edges do not share an endpoint".into()))
}

/// Every cyclic order of the star endpoints up to reversal, rotation and the
/// stabilizer, as canonical representatives in increasing order.
pub fn cyclic_classes(star: &[Edge], stabilizer: &[Isometry]) -> Result<Vec<VertexFigure>> {
    if star.len() < 3 {
        return Err(Error::DegenerateVertexFigure(star.len()));
    }
    if star.len() > MAX_FIGURE_SIZE {
        return Err(Error::Invariant(format!(
            "star of {} edges exceeds the enumeration limit {MAX_FIGURE_SIZE}",
            star.len()
        )));
    }
    let u = common_center(star)?;
    let pts = star_endpoints(star, &u)?;
    let perms = induced_permutations(&pts, stabilizer)?;
    let classes: BTreeSet<Vec<usize>> = all_cycles(pts.len()).iter().map(|c| canonical_cycle(c, &perms)).collect();
    classes
        .into_iter()
        .map(|c| VertexFigure::new(u.clone(), c.iter().map(|&i| pts[i].clone()).collect()))
        .collect()
}

/// Cyclic classes whose angle classes alternate around the cycle.
pub fn enumerate_vertex_figures(star: &[Edge], stabilizer: &[Isometry]) -> Result<Vec<VertexFigure>> {
    Ok(cyclic_classes(star, stabilizer)?
        .into_iter()
        .filter(|vf| Alternation::of(&figure_labels(vf, stabilizer)).passes())
        .collect())
}

fn figure_labels(vf: &VertexFigure, stabilizer: &[Isometry]) -> Vec<usize> {
    let mut pts = vf.cycle.clone();
    pts.sort();
    let index: HashMap<&Vec3Q, usize> = pts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let cycle: Vec<usize> = vf.cycle.iter().map(|p| index[p]).collect();
    let perms = induced_permutations(&pts, stabilizer).expect("stabilizer permutes its own star");
    position_labels(&cycle, &perms)
}

/// Stabilizer elements that preserve the figure.
pub fn figure_symmetries(vf: &VertexFigure, stabilizer: &[Isometry]) -> Vec<Isometry> {
    stabilizer.iter().filter(|s| vf.is_preserved_by(s)).cloned().collect()
}

/// One class of face angles of a figure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleClass {
    pub label: String,
    /// Angle positions in the figure belonging to the class.
    pub positions: Vec<usize>,
    pub vertex: Vec3Q,
    /// Endpoints of the angle at the first position.
    pub ends: [Vec3Q; 2],
    /// `(a − u)·(c − u)` for the representative.
    pub dot: QSqrt3,
    /// Squared cosine, exact in the field.
    pub cos_sq: QSqrt3,
    /// The cosine itself when both arms have equal length.
    pub cos: Option<QSqrt3>,
}

impl AngleClass {
    pub fn contains(&self, position: usize) -> bool {
        self.positions.contains(&position)
    }
}

/// Angle classes of `vf` under the stabilizer elements preserving it.
/// Labels: `alpha` for the class filling one parity of an alternating figure
/// (or the only class), then `beta1`, `beta2`, … by first position; figures
/// that do not alternate get `a0`, `a1`, ….
pub fn angle_classes_with(vf: &VertexFigure, stabilizer: &[Isometry]) -> Vec<AngleClass> {
    let labels = figure_labels(vf, stabilizer);
    let count = labels.iter().max().map_or(0, |m| m + 1);
    let alternation = Alternation::of(&labels);
    let alpha_class = match alternation {
        Alternation::Single => Some(0),
        Alternation::Alternating { alpha_parity } => Some(labels[alpha_parity]),
        Alternation::Violated => None,
    };
    let mut beta = 0;
    (0..count)
        .map(|k| {
            let positions: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == k).collect();
            let label = match alpha_class {
                Some(a) if a == k => "alpha".to_string(),
                Some(_) => {
                    beta += 1;
                    format!("beta{beta}")
                }
                None => format!("a{k}"),
            };
            let (a, c) = vf.pair(positions[0]);
            let (da, dc) = (a - &vf.center, c - &vf.center);
            let dot = da.dot(&dc);
            let (na, nc) = (da.norm_sq(), dc.norm_sq());
            let cos_sq = (&dot * &dot).checked_div(&(&na * &nc)).expect("arms are nonzero");
            let cos = (na == nc).then(|| dot.checked_div(&na).expect("arms are nonzero"));
            AngleClass { label, positions, vertex: vf.center.clone(), ends: [a.clone(), c.clone()], dot, cos_sq, cos }
        })
        .collect()
}

pub fn angle_classes(vf: &VertexFigure, g: &GroupSpec) -> Result<Vec<AngleClass>> {
    let stab = point_stabilizer(g, vf.center())?;
    Ok(angle_classes_with(vf, &stab))
}

/// Per-position labels from a class list.
pub fn class_of_positions(classes: &[AngleClass], n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for (k, c) in classes.iter().enumerate() {
        for &p in &c.positions {
            out[p] = k;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AngleType {
    Alpha,
    Beta,
}

impl AngleType {
    pub fn opposite(self) -> AngleType {
        match self {
            AngleType::Alpha => AngleType::Beta,
            AngleType::Beta => AngleType::Alpha,
        }
    }
}

/// α/β type of every angle position, or the reason the figure cannot be filled.
pub fn position_types(classes: &[AngleClass], n: usize) -> Result<Vec<AngleType>> {
    let labels = class_of_positions(classes, n);
    match Alternation::of(&labels) {
        Alternation::Single => Err(Error::FillingNotUnique(
            "a single angle class offers two equivalent continuations at every edge".into(),
        )),
        Alternation::Violated => Err(Error::AlternationViolated(format!(
            "angle classes {labels:?} do not alternate around the figure"
        ))),
        Alternation::Alternating { alpha_parity } => Ok((0..n)
            .map(|i| if i % 2 == alpha_parity { AngleType::Alpha } else { AngleType::Beta })
            .collect()),
    }
}

fn upper_norm(p: &Vec3Q) -> Rational {
    rational_sqrt_upper(&p.norm_sq())
}

/// Picks the symmetry group of the polyhedron generated by `vf` inside `g`.
///
/// The stabilizer of the polyhedron at `u` consists of the stabilizer
/// elements preserving the figure. When that is all of `Γ_u` the group is `g`
/// itself; otherwise the candidates are the kernels of sign characters that
/// cut `Γ_u` down to exactly those elements. Candidates are tried in
/// increasing mask order and the first one transitive on the star edges is
/// returned.
pub fn select_symmetry_group(g: &GroupSpec, vf: &VertexFigure) -> Result<GroupSpec> {
    let u = vf.center();
    let full = g.with_character(Character::TRIVIAL);
    let reach = vf.cycle().iter().map(|s| upper_norm(&(s - u))).max().expect("figure is nonempty");
    let nu = upper_norm(u);
    let radius = &(&Rational::integer(2) * &(&nu + &reach)) + &Rational::integer(2);
    let w = Window::new(radius, Rational::ONE)?;
    let elements = enumerate_elements(&full, &w);
    let stab: Vec<(&Isometry, u64)> = elements
        .iter()
        .filter(|e| &e.apply(u) == u)
        .map(|e| (e, elements.parity(e).expect("enumerated")))
        .collect();
    let preserving: Vec<bool> = stab.iter().map(|(s, _)| vf.is_preserved_by(s)).collect();
    if g.character() != Character::TRIVIAL {
        let ch = g.character();
        if stab.iter().zip(&preserving).any(|((_, p), &keep)| ch.in_kernel(*p) && !keep) {
            return Err(Error::FigureSelection("the given group does not preserve the figure".into()));
        }
        return Ok(g.clone());
    }
    let s0 = &vf.cycle()[0];
    let star: HashSet<&Vec3Q> = vf.cycle().iter().collect();
    for ch in elements.valid_characters() {
        let cuts_exactly = stab.iter().zip(&preserving).all(|((_, p), &keep)| ch.in_kernel(*p) == keep);
        if !cuts_exactly {
            continue;
        }
        let mut reached: HashSet<Vec3Q> = HashSet::new();
        for e in elements.iter() {
            if !ch.in_kernel(elements.parity(e).expect("enumerated")) {
                continue;
            }
            let (eu, es) = (e.apply(u), e.apply(s0));
            if &eu == u && star.contains(&es) {
                reached.insert(es);
            } else if &es == u && star.contains(&eu) {
                reached.insert(eu);
            }
        }
        if reached.len() == star.len() {
            return Ok(full.with_character(ch));
        }
    }
    Err(Error::FigureSelection("no sign character gives an edge-transitive symmetry group".into()))
}

/// Face tracing context: the symmetry group enumerated over the window, the
/// transports `g` with `g(u) = b` for every window vertex `b`, and the graph.
pub struct FaceFilling {
    group: GroupSpec,
    figure: VertexFigure,
    classes: Vec<AngleClass>,
    types: Vec<AngleType>,
    window: Window,
    transports: HashMap<Vec3Q, Vec<(Isometry, Isometry)>>,
    graph: SkeletonGraph,
}

impl FaceFilling {
    /// `group` must be the symmetry group (see [`select_symmetry_group`]).
    pub fn new(group: &GroupSpec, vf: &VertexFigure, w: &Window) -> Result<Self> {
        let u = vf.center();
        let longest = vf.cycle().iter().map(|s| (s - u).norm_sq()).max_by(|a, b| a.value_cmp(b)).expect("nonempty");
        if QSqrt3::rational(w.radius().square()).value_cmp(&longest).is_lt() {
            return Err(Error::WindowTooSmall("window radius is shorter than an edge".into()));
        }
        if !w.core_contains(u) {
            return Err(Error::WindowTooSmall(format!("core window misses the base point {u}")));
        }
        let stab = point_stabilizer(group, u)?;
        if let Some(s) = stab.iter().find(|s| !vf.is_preserved_by(s)) {
            return Err(Error::Inconsistency(format!("stabilizer element {s:?} does not preserve the figure")));
        }
        let classes = angle_classes_with(vf, &stab);
        let types = position_types(&classes, vf.len())?;
        let elements = enumerate_elements(group, &w.grown(&upper_norm(u)));
        let mut transports: HashMap<Vec3Q, Vec<(Isometry, Isometry)>> = HashMap::new();
        for e in elements.iter() {
            let b = e.apply(u);
            if w.contains(&b) {
                transports.entry(b).or_default().push((e.clone(), e.inverse()));
            }
        }
        if transports.get(u).map_or(0, Vec::len) != stab.len() {
            return Err(Error::Inconsistency("transports at u disagree with the stabilizer".into()));
        }
        let mut edges = Vec::new();
        for list in transports.values() {
            for (g, _) in list {
                let b = g.apply(u);
                for s in vf.cycle() {
                    edges.push(Edge::new(b.clone(), g.apply(s))?);
                }
            }
        }
        let graph = SkeletonGraph::from_edges(edges);
        Ok(FaceFilling {
            group: group.clone(),
            figure: vf.clone(),
            classes,
            types,
            window: w.clone(),
            transports,
            graph,
        })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn figure(&self) -> &VertexFigure {
        &self.figure
    }

    pub fn classes(&self) -> &[AngleClass] {
        &self.classes
    }

    pub fn types(&self) -> &[AngleType] {
        &self.types
    }

    pub fn graph(&self) -> &SkeletonGraph {
        &self.graph
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn has_transport(&self, b: &Vec3Q) -> bool {
        self.transports.contains_key(b)
    }

    /// Type and class index of the angle `∠a b c`, read through a transport.
    pub fn classify_angle(&self, a: &Vec3Q, b: &Vec3Q, c: &Vec3Q) -> Option<(AngleType, usize)> {
        let (_, inv) = self.transports.get(b)?.first()?;
        let pos = self.figure.pair_position(&inv.apply(a), &inv.apply(c))?;
        let labels = class_of_positions(&self.classes, self.figure.len());
        Some((self.types[pos], labels[pos]))
    }

    /// The angles at window vertex `b`, as `(a, c, type)`.
    pub fn angles_at(&self, b: &Vec3Q) -> Option<Vec<(Vec3Q, Vec3Q, AngleType)>> {
        let (g, _) = self.transports.get(b)?.first()?;
        Some(
            (0..self.figure.len())
                .map(|i| {
                    let (a, c) = self.figure.pair(i);
                    (g.apply(a), g.apply(c), self.types[i])
                })
                .collect(),
        )
    }

    /// Next vertex after arriving at `b` from `a`, where the angle at `a` had
    /// type `t`, read off the figure through one transport.
    fn step_transport(&self, a: &Vec3Q, b: &Vec3Q, t: AngleType) -> Result<Option<Vec3Q>> {
        let Some((g, inv)) = self.transports.get(b).and_then(|l| l.first()) else {
            return Ok(None);
        };
        let s = inv.apply(a);
        let i = self
            .figure
            .position(&s)
            .ok_or_else(|| Error::Inconsistency(format!("{a} is not adjacent to {b}")))?;
        let n = self.figure.len();
        let prev = (i + n - 1) % n;
        let next = if self.types[i] != t {
            &self.figure.cycle[(i + 1) % n]
        } else if self.types[prev] != t {
            &self.figure.cycle[prev]
        } else {
            return Err(Error::AlternationViolated(format!("no angle of type {:?} at {b}", t.opposite())));
        };
        Ok(Some(g.apply(next)))
    }

    /// Same step by testing every graph neighbor of `b` against every element
    /// carrying `b` to `u`.
    fn step_raw(&self, a: &Vec3Q, b: &Vec3Q, t: AngleType) -> Result<Option<Vec3Q>> {
        let Some(list) = self.transports.get(b) else {
            return Ok(None);
        };
        let mut found = Vec::new();
        for c in self.graph.neighbor_points(b) {
            if &c == a {
                continue;
            }
            let mut verdicts = list.iter().map(|(_, inv)| {
                self.figure
                    .pair_position(&inv.apply(a), &inv.apply(&c))
                    .is_some_and(|pos| self.types[pos] != t)
            });
            let first = verdicts.next().expect("transport list is nonempty");
            if verdicts.any(|v| v != first) {
                return Err(Error::Inconsistency(format!("angle {a} {b} {c} is classified differently by two symmetries")));
            }
            if first {
                found.push(c);
            }
        }
        match found.len() {
            0 => Err(Error::AlternationViolated(format!("no continuation at {b} coming from {a}"))),
            1 => Ok(found.pop()),
            k => Err(Error::FillingNotUnique(format!("{k} continuations at {b} coming from {a}"))),
        }
    }

    fn step(&self, a: &Vec3Q, b: &Vec3Q, t: AngleType) -> Result<Option<Vec3Q>> {
        let x = self.step_transport(a, b, t)?;
        let y = self.step_raw(a, b, t)?;
        if x != y {
            return Err(Error::Inconsistency(format!("transport and alternation disagree at {b}")));
        }
        Ok(x)
    }

    fn walk(&self, from: &Vec3Q, to: &Vec3Q, t: AngleType, stop: Option<(&Vec3Q, &Vec3Q)>) -> Result<(Vec<Vec3Q>, bool)> {
        let limit = 2 * self.figure.len() * self.transports.len() + 2;
        let mut path = vec![to.clone()];
        let (mut prev, mut cur, mut t) = (from.clone(), to.clone(), t);
        for _ in 0..limit {
            if let Some((sa, sb)) = stop {
                if &prev == sa && &cur == sb {
                    path.pop();
                    return Ok((path, true));
                }
            }
            match self.step(&prev, &cur, t)? {
                None => return Ok((path, false)),
                Some(next) => {
                    path.push(next.clone());
                    prev = std::mem::replace(&mut cur, next);
                    t = t.opposite();
                }
            }
        }
        Err(Error::Inconsistency("face trace did not terminate".into()))
    }

    /// Traces the face through the angle `∠a b c`, running the transport and
    /// alternation methods side by side.
    pub fn trace(&self, a: &Vec3Q, b: &Vec3Q, c: &Vec3Q) -> Result<Face> {
        let (t, _) = self
            .classify_angle(a, b, c)
            .ok_or_else(|| Error::Invariant(format!("{a} {b} {c} is not an angle of the figure")))?;
        let (forward, closed) = self.walk(b, c, t, Some((a, b)))?;
        let mut vertices = vec![b.clone()];
        if closed {
            vertices.extend(forward);
            return Ok(Face::closed(vertices));
        }
        let (backward, _) = self.walk(b, a, t, None)?;
        let mut out: Vec<Vec3Q> = backward.into_iter().rev().collect();
        out.append(&mut vertices);
        out.extend(forward);
        Ok(Face::truncated(out))
    }

    /// Chains the angles of every window vertex into faces. Every transport of
    /// a vertex must produce the same angles.
    pub fn assemble(&self) -> Result<Polyhedron> {
        let verts = self.graph.vertices();
        let mut table: HashMap<(usize, usize), Vec<(usize, AngleType)>> = HashMap::new();
        let mut keys: Vec<(usize, usize, usize)> = Vec::new();
        let mut window_vertices: Vec<&Vec3Q> = self.transports.keys().collect();
        window_vertices.sort();
        for b in window_vertices {
            let bi = self.graph.index_of(b).expect("window vertices are graph vertices");
            let list = &self.transports[b];
            let mut reference: Option<BTreeSet<(Vec3Q, Vec3Q, bool)>> = None;
            for (g, _) in list {
                let set: BTreeSet<(Vec3Q, Vec3Q, bool)> = (0..self.figure.len())
                    .map(|i| {
                        let (a, c) = self.figure.pair(i);
                        let (a, c) = (g.apply(a), g.apply(c));
                        let alpha = self.types[i] == AngleType::Alpha;
                        if a < c {
                            (a, c, alpha)
                        } else {
                            (c, a, alpha)
                        }
                    })
                    .collect();
                match &reference {
                    None => reference = Some(set),
                    Some(r) if *r != set => {
                        return Err(Error::Inconsistency(format!("two symmetries disagree on the angles at {b}")))
                    }
                    _ => {}
                }
            }
            for (a, c, alpha) in reference.expect("transport list is nonempty") {
                let (ai, ci) = (self.graph.index_of(&a).expect("edge"), self.graph.index_of(&c).expect("edge"));
                let t = if alpha { AngleType::Alpha } else { AngleType::Beta };
                table.entry((bi, ai)).or_default().push((ci, t));
                table.entry((bi, ci)).or_default().push((ai, t));
                keys.push((bi, ai, ci));
            }
        }
        let next = |prev: usize, cur: usize, t: AngleType| -> Option<usize> {
            table.get(&(cur, prev)).and_then(|l| l.iter().find(|(_, tt)| *tt != t).map(|(c, _)| *c))
        };
        let angle_key = |a: usize, b: usize, c: usize| (b, a.min(c), a.max(c));
        let mut used: HashSet<(usize, usize, usize)> = HashSet::new();
        let mut faces = Vec::new();
        for &(b, a, c) in &keys {
            if used.contains(&angle_key(a, b, c)) {
                continue;
            }
            let t = table[&(b, a)].iter().find(|(x, _)| *x == c).expect("angle is tabled").1;
            used.insert(angle_key(a, b, c));
            let mut forward = vec![b, c];
            let (mut prev, mut cur, mut tt) = (b, c, t);
            let mut closed = false;
            while let Some(n) = next(prev, cur, tt) {
                if cur == b && prev == a {
                    closed = true;
                    break;
                }
                used.insert(angle_key(prev, cur, n));
                forward.push(n);
                prev = cur;
                cur = n;
                tt = tt.opposite();
            }
            let path: Vec<usize> = if closed {
                forward.pop();
                forward
            } else {
                let mut backward = vec![a];
                let (mut prev, mut cur, mut tt) = (b, a, t);
                while let Some(n) = next(prev, cur, tt) {
                    used.insert(angle_key(prev, cur, n));
                    backward.push(n);
                    prev = cur;
                    cur = n;
                    tt = tt.opposite();
                }
                backward.reverse();
                backward.extend(forward);
                backward
            };
            let pts: Vec<Vec3Q> = path.iter().map(|&i| verts[i].clone()).collect();
            faces.push(if closed { Face::closed(pts) } else { Face::truncated(pts) });
        }
        Polyhedron::new(verts.to_vec(), self.graph.edges(), faces, Some(self.window.clone()))
    }
}

/// Shape of a traced face: monotonicity in z, vertical drop and period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceProfile {
    pub closed: bool,
    pub vertices: usize,
    /// Sign of every nonzero `Δz` along the path, or 0 when `z` is not
    /// strictly monotone.
    pub z_direction: i32,
    /// The common `|Δz|` of every edge, when all edges agree.
    pub edge_drop: Option<QSqrt3>,
    /// Least number of edges after which the path repeats by a translation.
    pub period_edges: Option<usize>,
    pub period_translation: Option<Vec3Q>,
    /// Angle types at the interior corners, in path order.
    pub angle_types: Vec<AngleType>,
    /// Class indices of the same corners.
    pub angle_classes: Vec<usize>,
    /// α and β corners strictly alternate.
    pub alternates: bool,
}

impl FaceProfile {
    pub fn strictly_monotone(&self) -> bool {
        self.z_direction != 0
    }

    /// `|Δz|` over one period.
    pub fn period_drop(&self) -> Option<QSqrt3> {
        self.period_translation.as_ref().map(|t| t.z().abs())
    }
}

impl FaceFilling {
    /// Profile of a face traced by this filling.
    pub fn profile(&self, f: &Face) -> Result<FaceProfile> {
        let v = &f.vertices;
        let n = v.len();
        let dz: Vec<QSqrt3> = f.segments().map(|(a, b)| b.z() - a.z()).collect();
        let signs: HashSet<i32> = dz.iter().map(QSqrt3::sign).collect();
        let z_direction = match (signs.len(), signs.iter().next()) {
            (1, Some(&s)) if s != 0 => s,
            _ => 0,
        };
        let drops: HashSet<QSqrt3> = dz.iter().map(QSqrt3::abs).collect();
        let edge_drop = (drops.len() == 1).then(|| drops.into_iter().next().expect("one drop"));
        let mut period = None;
        if !f.closed {
            // A corner and its translate pin down the same face.
            for k in 1..n {
                if k + 3 > n {
                    break;
                }
                let t = &v[k] - &v[0];
                if !t.is_zero() && (0..n - k).all(|i| &v[i + k] - &v[i] == t) {
                    period = Some((k, t));
                    break;
                }
            }
        }
        let mut angle_types = Vec::new();
        let mut angle_classes = Vec::new();
        for (a, b, c) in f.corners() {
            let (t, k) = self
                .classify_angle(a, b, c)
                .ok_or_else(|| Error::Inconsistency(format!("corner at {b} is not an angle of the figure")))?;
            angle_types.push(t);
            angle_classes.push(k);
        }
        let alternates = angle_types.windows(2).all(|w| w[0] != w[1])
            && (!f.closed || angle_types.len() % 2 == 0);
        Ok(FaceProfile {
            closed: f.closed,
            vertices: n,
            z_direction,
            edge_drop,
            period_edges: period.as_ref().map(|p| p.0),
            period_translation: period.map(|p| p.1),
            angle_types,
            angle_classes,
            alternates,
        })
    }

    /// Traces the face through the representative angle of class `k`.
    pub fn trace_class(&self, k: usize) -> Result<Face> {
        let class = self.classes.get(k).ok_or_else(|| Error::Invariant(format!("no angle class {k}")))?;
        self.trace(&class.ends[0], self.figure.center(), &class.ends[1])
    }
}

/// The spiral face of the spiralhedron through its α angle at `u`, with its
/// profile.
pub fn s1_spiral(cfg: &HoneypieConfig, w: &Window) -> Result<(Face, FaceProfile)> {
    let g = honeypie_generators(cfg);
    let sel = s1_figure(cfg)?;
    let group = select_symmetry_group(&g, &sel.figure)?;
    let filling = FaceFilling::new(&group, &sel.figure, w)?;
    let alpha = &sel.classes[0];
    let face = filling.trace(&alpha.ends[0], sel.figure.center(), &alpha.ends[1])?;
    let profile = filling.profile(&face)?;
    Ok((face, profile))
}

/// Traces the face through `∠a u c` in the symmetry group `g`.
pub fn trace_face(g: &GroupSpec, vf: &VertexFigure, start: (&Vec3Q, &Vec3Q), w: &Window) -> Result<Face> {
    FaceFilling::new(g, vf, w)?.trace(start.0, vf.center(), start.1)
}

/// Images of `f` under elements carrying its vertex nearest the origin into
/// the window, clipped to the window and deduplicated.
///
/// Pieces are exact provided `f` was traced over a ball of radius at least
/// `2·radius + 2·|anchor| + edge length`.
pub fn face_orbit(g: &GroupSpec, f: &Face, w: &Window) -> Vec<Face> {
    let Some(anchor) = f
        .vertices
        .iter()
        .min_by(|a, b| a.norm_sq().value_cmp(&b.norm_sq()).then_with(|| a.cmp(b)))
    else {
        return Vec::new();
    };
    let elements = enumerate_elements(g, &w.grown(&upper_norm(anchor)));
    face_orbit_with(&elements, anchor, f, w)
}

fn face_orbit_with(elements: &ElementSet, anchor: &Vec3Q, f: &Face, w: &Window) -> Vec<Face> {
    let mut out: BTreeSet<Face> = BTreeSet::new();
    for e in elements.iter() {
        if !w.contains(&e.apply(anchor)) {
            continue;
        }
        for piece in clip_face(&f.image(e), w) {
            out.insert(piece.canonical());
        }
    }
    out.into_iter().collect()
}

/// Maximal runs of window vertices, each extended by one vertex on either side.
pub fn clip_face(f: &Face, w: &Window) -> Vec<Face> {
    let n = f.vertices.len();
    let inside: Vec<bool> = f.vertices.iter().map(|p| w.contains(p)).collect();
    if f.closed && inside.iter().all(|&x| x) {
        return vec![f.clone()];
    }
    let mut pieces = Vec::new();
    if f.closed {
        let Some(start) = (0..n).find(|&i| !inside[i]) else {
            return pieces;
        };
        let mut i = 1;
        while i <= n {
            let k = (start + i) % n;
            if inside[k] {
                let mut run = vec![f.vertices[(k + n - 1) % n].clone()];
                let mut j = i;
                while inside[(start + j) % n] {
                    run.push(f.vertices[(start + j) % n].clone());
                    j += 1;
                }
                run.push(f.vertices[(start + j) % n].clone());
                pieces.push(Face::truncated(run));
                i = j;
            } else {
                i += 1;
            }
        }
    } else {
        let mut i = 0;
        while i < n {
            if inside[i] {
                let lo = i.saturating_sub(1);
                let mut j = i;
                while j < n && inside[j] {
                    j += 1;
                }
                let hi = (j + 1).min(n);
                if hi - lo >= 2 {
                    pieces.push(Face::truncated(f.vertices[lo..hi].to_vec()));
                }
                i = j;
            } else {
                i += 1;
            }
        }
    }
    pieces
}

/// Every intermediate object of one run of the pipeline.
#[derive(Debug, Clone)]
pub struct Construction {
    /// Symmetry group of the polyhedron.
    pub group: GroupSpec,
    pub base: Vec3Q,
    pub neighbor: Vec3Q,
    pub figure: VertexFigure,
    pub classes: Vec<AngleClass>,
    pub polyhedron: Polyhedron,
}

/// Runs face filling for the figure `vf` of the star of `[u v]` in `g`.
pub fn build_construction(g: &GroupSpec, u: &Vec3Q, v: &Vec3Q, vf: &VertexFigure, w: &Window) -> Result<Construction> {
    if vf.center() != u {
        return Err(Error::Invariant("figure is not centered at the base point".into()));
    }
    let full = g.with_character(Character::TRIVIAL);
    let stab = point_stabilizer(&full, u)?;
    let ends = star_endpoints(&star_with(&stab, u, v)?, u)?;
    let mut cyc = vf.cycle().to_vec();
    cyc.sort();
    if cyc != ends {
        return Err(Error::Invariant("figure points are not the star endpoints".into()));
    }
    let group = select_symmetry_group(g, vf)?;
    let filling = FaceFilling::new(&group, vf, w)?;
    let polyhedron = filling.assemble()?;
    Ok(Construction {
        group,
        base: u.clone(),
        neighbor: v.clone(),
        figure: vf.clone(),
        classes: filling.classes().to_vec(),
        polyhedron,
    })
}

pub fn build_polyhedron(g: &GroupSpec, u: &Vec3Q, v: &Vec3Q, vf: &VertexFigure, w: &Window) -> Result<Polyhedron> {
    Ok(build_construction(g, u, v, vf, w)?.polyhedron)
}

/// The figure of the leveled star `Q_{v₁}` with angle classes
/// `α = ∠x₁ux₂`, `β₁ = ∠x₁uy₂`, `β₂ = ∠y₁uv₂`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct S1Figure {
    pub figure: VertexFigure,
    pub classes: Vec<AngleClass>,
    /// Number of alternating figure classes of the star.
    pub candidates: usize,
}

/// Selects the figure carrying the three prescribed angles as consecutive pairs
/// in three distinct classes, with the α class filling one parity.
pub fn s1_figure(cfg: &HoneypieConfig) -> Result<S1Figure> {
    let g = honeypie_generators(cfg);
    let n = named_points(cfg);
    let stab = point_stabilizer(&g, &n.u)?;
    let star = star_with(&stab, &n.u, &n.v1)?;
    let figures = enumerate_vertex_figures(&star, &stab)?;
    let prescribed = [(&n.x1, &n.x2), (&n.x1, &n.y2), (&n.y1, &n.v2)];
    let mut matches = Vec::new();
    for vf in &figures {
        for s in &stab {
            let img = vf.image(s);
            let Some(pos): Option<Vec<usize>> = prescribed.iter().map(|(a, c)| img.pair_position(a, c)).collect() else {
                continue;
            };
            let classes = angle_classes_with(&img, &stab);
            let labels = class_of_positions(&classes, img.len());
            let ks: Vec<usize> = pos.iter().map(|&p| labels[p]).collect();
            if ks[0] == ks[1] || ks[0] == ks[2] || ks[1] == ks[2] {
                continue;
            }
            let alpha_fills_parity = (0..img.len()).filter(|i| i % 2 == pos[0] % 2).all(|i| labels[i] == ks[0]);
            if !alpha_fills_parity {
                continue;
            }
            let names = ["alpha", "beta1", "beta2"];
            let mut named = classes.clone();
            for (slot, &k) in ks.iter().enumerate() {
                named[k].label = names[slot].to_string();
            }
            named.sort_by_key(|c| names.iter().position(|x| *x == c.label).unwrap_or(usize::MAX));
            matches.push((img, named));
            break;
        }
    }
    match matches.len() {
        1 => {
            let (figure, classes) = matches.pop().expect("one match");
            Ok(S1Figure { figure, classes, candidates: figures.len() })
        }
        0 => Err(Error::FigureSelection("no figure realizes the three prescribed angle classes".into())),
        k => Err(Error::FigureSelection(format!("{k} figures realize the prescribed angle classes"))),
    }
}

/// Full pipeline for the spiralhedron.
pub fn s1_construction(cfg: &HoneypieConfig, w: &Window) -> Result<Construction> {
    let g = honeypie_generators(cfg);
    let n = named_points(cfg);
    let sel = s1_figure(cfg)?;
    let mut c = build_construction(&g, &base_point(cfg), &n.v1, &sel.figure, w)?;
    for class in &mut c.classes {
        if let Some(named) = sel.classes.iter().find(|k| k.positions == class.positions) {
            class.label = named.label.clone();
        }
    }
    Ok(c)
}

pub fn build_s1(cfg: &HoneypieConfig, w: &Window) -> Result<Polyhedron> {
    Ok(s1_construction(cfg, w)?.polyhedron)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::honeypie::planar_generators;

    #[test]
    fn cycle_enumeration_counts() {
        assert_eq!(all_cycles(3).len(), 1);
        assert_eq!(all_cycles(4).len(), 3);
        assert_eq!(all_cycles(5).len(), 12);
    }

    #[test]
    fn alternation_rules() {
        assert_eq!(Alternation::of(&[0, 0, 0]), Alternation::Single);
        assert_eq!(Alternation::of(&[0, 1, 0, 1]), Alternation::Alternating { alpha_parity: 0 });
        assert_eq!(Alternation::of(&[0, 1, 0, 2]), Alternation::Alternating { alpha_parity: 0 });
        assert_eq!(Alternation::of(&[0, 1, 2, 1]), Alternation::Alternating { alpha_parity: 1 });
        assert_eq!(Alternation::of(&[0, 1, 2]), Alternation::Violated);
        assert_eq!(Alternation::of(&[0, 1, 1, 0]), Alternation::Violated);
        assert_eq!(Alternation::of(&[0, 1, 2, 3]), Alternation::Violated);
    }

    #[test]
    fn planar_star_has_three_figures() {
        let cfg = HoneypieConfig::default();
        let g = honeypie_generators(&cfg);
        let n = named_points(&cfg);
        let stab = point_stabilizer(&g, &n.u).unwrap();
        let star = star_with(&stab, &n.u, &n.v).unwrap();
        assert_eq!(cyclic_classes(&star, &stab).unwrap().len(), 3);
        let figs = enumerate_vertex_figures(&star, &stab).unwrap();
        assert_eq!(figs.len(), 3);
        for vf in &figs {
            let classes = angle_classes_with(vf, &stab);
            assert_eq!(classes.len(), 2);
            assert_eq!(classes[0].label, "alpha");
        }
    }

    #[test]
    fn degenerate_star_is_rejected() {
        let u = Vec3Q::zero();
        let e = Edge::new(u.clone(), Vec3Q::new(QSqrt3::ONE, QSqrt3::ZERO, QSqrt3::ZERO)).unwrap();
        assert_eq!(cyclic_classes(&[e], &[Isometry::identity()]), Err(Error::DegenerateVertexFigure(1)));
    }

    #[test]
    fn s1_figure_is_unique() {
        let sel = s1_figure(&HoneypieConfig::default()).unwrap();
        let labels: Vec<&str> = sel.classes.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["alpha", "beta1", "beta2"]);
        assert_eq!(sel.figure.len(), 8);
    }

    #[test]
    fn symmetry_group_of_s1_cuts_the_stabilizer_in_half() {
        let cfg = HoneypieConfig::default();
        let sel = s1_figure(&cfg).unwrap();
        let group = select_symmetry_group(&honeypie_generators(&cfg), &sel.figure).unwrap();
        assert_eq!(group.character(), Character(0b01111));
        assert_eq!(point_stabilizer(&group, sel.figure.center()).unwrap().len(), 4);
    }

    #[test]
    fn clipping_an_open_path() {
        let p = |x: i64| Vec3Q::new(x.into(), QSqrt3::ZERO, QSqrt3::ZERO);
        let w = Window::from_ints(2, 1).unwrap();
        let f = Face::truncated((-5..=5).map(p).collect());
        let pieces = clip_face(&f, &w);
        assert_eq!(pieces, vec![Face::truncated((-3..=3).map(p).collect())]);
    }

    #[test]
    fn planar_convex_figure_closes_faces() {
        let cfg = HoneypieConfig::default();
        let g = planar_generators(&cfg);
        let n = named_points(&cfg);
        let stab = point_stabilizer(&g, &n.u).unwrap();
        let star = star_with(&stab, &n.u, &n.v).unwrap();
        let w = Window::from_ints(6, 3).unwrap();
        let mut closed_sizes = Vec::new();
        for vf in enumerate_vertex_figures(&star, &stab).unwrap() {
            let poly = build_polyhedron(&g, &n.u, &n.v, &vf, &w).unwrap();
            let closed: Vec<usize> =
                poly.faces().iter().filter(|f| f.closed).map(|f| f.vertices.len()).collect();
            closed_sizes.push(closed.iter().copied().max().unwrap_or(0));
        }
        closed_sizes.sort();
        assert_eq!(closed_sizes, vec![0, 0, 12]);
    }
}
