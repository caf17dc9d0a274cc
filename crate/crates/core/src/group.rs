//! Windowed enumeration engine for groups generated by finitely many isometries.
//!
//! The groups of interest are infinite, so every set-valued result here is
//! relative to a [`Window`]: a ball around the origin with a boundary margin.
//! Claims are only ever tested inside the core ball (radius − margin).
//!
//! Elements are enumerated by breadth-first search over words, extending a
//! word on the right (`e ↦ e∘g`). For reflection generators of a compact
//! fundamental region this walks galleries of adjacent chambers, and the
//! chambers met along a straight segment from the base chamber to the chamber
//! of γ stay within one chamber diameter of that segment. Pruning words whose
//! origin image leaves `radius + 2·max|g(0)|` therefore never cuts off an
//! element γ with `|γ(0)| ≤ radius`.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Mat3Q, QSqrt3, Rational, Vec3Q};
use crate::isometry::{Isometry, IsometryKind};

/// Sign character of the generators: bit `i` set means generator `i ↦ −1`.
///
/// A group spec carrying a nontrivial character denotes the kernel of that
/// character, an index-2 subgroup of the group generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Character(pub u64);

impl Character {
    pub const TRIVIAL: Character = Character(0);

    /// Value on an element whose word has generator-count parities `parity`.
    pub fn value(self, parity: u64) -> i32 {
        if (self.0 & parity).count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn in_kernel(self, parity: u64) -> bool {
        self.value(parity) == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    generators: Vec<Isometry>,
    #[serde(default)]
    character: Character,
}

impl GroupSpec {
    pub fn new(generators: Vec<Isometry>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Invariant("generator list is empty".into()));
        }
        if generators.len() > 64 {
            return Err(Error::Invariant("at most 64 generators are supported".into()));
        }
        if let Some(i) = generators.iter().position(|g| !g.is_orthogonal()) {
            return Err(Error::Invariant(format!("generator {i} is not orthogonal")));
        }
        Ok(GroupSpec { generators, character: Character::TRIVIAL })
    }

    /// The trivial group, generated by the identity alone.
    pub fn trivial() -> Self {
        GroupSpec { generators: vec![Isometry::identity()], character: Character::TRIVIAL }
    }

    /// Restrict to the kernel of `character`. The character must be a valid
    /// homomorphism (see [`ElementSet::valid_characters`]).
    pub fn with_character(&self, character: Character) -> Self {
        GroupSpec { generators: self.generators.clone(), character }
    }

    pub fn generators(&self) -> &[Isometry] {
        &self.generators
    }

    pub fn character(&self) -> Character {
        self.character
    }

    /// Rational upper bound on `max_g |g(0)|`.
    pub fn max_displacement(&self) -> Rational {
        let max = self
            .generators
            .iter()
            .map(|g| g.translation_part().norm_sq())
            .max_by(|a, b| a.value_cmp(b))
            .unwrap_or(QSqrt3::ZERO);
        rational_sqrt_upper(&max)
    }

    /// Excursion slack used to prune words during enumeration.
    pub fn slack(&self) -> Rational {
        let d = self.max_displacement();
        &d + &d
    }
}

/// Smallest "nice" rational `r ≥ √x` (to 1/64 resolution), checked exactly.
pub fn rational_sqrt_upper(x: &QSqrt3) -> Rational {
    if x.sign() <= 0 {
        return Rational::ZERO;
    }
    let mut k = (x.to_f64().sqrt() * 64.0).ceil() as i64;
    loop {
        let r = Rational::new(k, 64);
        if QSqrt3::rational(r.square()).value_cmp(x).is_ge() {
            return r;
        }
        k += 1;
    }
}

/// Ball of `radius` around the origin; the core ball has radius `radius − margin`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    radius: Rational,
    margin: Rational,
}

impl Window {
    pub fn new(radius: Rational, margin: Rational) -> Result<Self> {
        if margin.signum() <= 0 || margin >= radius {
            return Err(Error::Invariant(format!(
                "window needs 0 < margin < radius, got radius {radius}, margin {margin}"
            )));
        }
        Ok(Window { radius, margin })
    }

    /// Convenience for integer radii and margins.
    pub fn from_ints(radius: i64, margin: i64) -> Result<Self> {
        Window::new(Rational::integer(radius), Rational::integer(margin))
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn margin(&self) -> &Rational {
        &self.margin
    }

    pub fn core_radius(&self) -> Rational {
        &self.radius - &self.margin
    }

    pub fn contains(&self, p: &Vec3Q) -> bool {
        within(p, &self.radius)
    }

    pub fn core_contains(&self, p: &Vec3Q) -> bool {
        within(p, &self.core_radius())
    }

    /// Same margin, radius grown by `extra`.
    pub fn grown(&self, extra: &Rational) -> Window {
        Window { radius: &self.radius + extra, margin: self.margin.clone() }
    }
}

/// `|p| ≤ r`, compared on squares.
pub fn within(p: &Vec3Q, r: &Rational) -> bool {
    p.norm_sq().value_cmp(&QSqrt3::rational(r.square())).is_le()
}

/// Canonically ordered, exactly deduplicated set of group elements.
///
/// Each element remembers the generator-count parities of the word that
/// reached it, so that sign characters can be evaluated on it.
#[derive(Debug, Clone)]
pub struct ElementSet {
    elements: Vec<Isometry>,
    parities: Vec<u64>,
    index: HashMap<Isometry, usize>,
    relators: Vec<u64>,
    generator_count: usize,
}

impl ElementSet {
    fn from_records(mut records: Vec<(Isometry, u64)>, relators: Vec<u64>, generator_count: usize) -> Self {
        records.sort_by(|a, b| a.0.cmp(&b.0));
        let index = records.iter().enumerate().map(|(i, (e, _))| (e.clone(), i)).collect();
        let (elements, parities) = records.into_iter().unzip();
        ElementSet { elements, parities, index, relators, generator_count }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Isometry> + '_ {
        self.elements.iter()
    }

    pub fn as_slice(&self) -> &[Isometry] {
        &self.elements
    }

    pub fn contains(&self, e: &Isometry) -> bool {
        self.index.contains_key(e)
    }

    pub fn parity(&self, e: &Isometry) -> Option<u64> {
        self.index.get(e).map(|&i| self.parities[i])
    }

    /// Characters that are homomorphisms on every relation observed in the
    /// enumerated part of the Cayley graph.
    pub fn valid_characters(&self) -> Vec<Character> {
        let k = self.generator_count.min(16);
        (0u64..(1 << k))
            .map(Character)
            .filter(|ch| self.relators.iter().all(|&r| ch.in_kernel(r)))
            .collect()
    }

    /// Elements in the kernel of `ch`.
    pub fn kernel(&self, ch: Character) -> ElementSet {
        let records = self
            .elements
            .iter()
            .zip(&self.parities)
            .filter(|(_, &p)| ch.in_kernel(p))
            .map(|(e, &p)| (e.clone(), p))
            .collect();
        ElementSet::from_records(records, self.relators.clone(), self.generator_count)
    }

    /// Elements mapping `from` to `to`.
    pub fn mapping<'a>(&'a self, from: &'a Vec3Q, to: &'a Vec3Q) -> impl Iterator<Item = &'a Isometry> + 'a {
        self.elements.iter().filter(move |e| &e.apply(from) == to)
    }
}

/// Breadth-first search over right-extended words, keeping elements that pass
/// `keep`. Records carry the parity mask and the word length that reached them.
fn bfs(g: &GroupSpec, keep: impl Fn(&Isometry) -> bool) -> (Vec<(Isometry, u64, usize)>, Vec<u64>) {
    let gens = g.generators();
    let mut seen: HashMap<Isometry, (u64, usize)> = HashMap::new();
    let mut relators: Vec<u64> = Vec::new();
    let id = Isometry::identity();
    seen.insert(id.clone(), (0, 0));
    let mut queue: VecDeque<(Isometry, u64, usize)> = VecDeque::new();
    queue.push_back((id, 0, 0));
    while let Some((e, parity, depth)) = queue.pop_front() {
        for (i, gen) in gens.iter().enumerate() {
            let next = e.compose(gen);
            let p = parity ^ (1 << i);
            if let Some(&(q, _)) = seen.get(&next) {
                let r = p ^ q;
                if r != 0 && !relators.contains(&r) {
                    relators.push(r);
                }
                continue;
            }
            if !keep(&next) {
                continue;
            }
            seen.insert(next.clone(), (p, depth + 1));
            queue.push_back((next, p, depth + 1));
        }
    }
    (seen.into_iter().map(|(e, (p, d))| (e, p, d)).collect(), relators)
}

/// All elements γ with `|γ(0)| ≤ radius + slack`; in particular every element
/// with `|γ(0)| ≤ radius`. Restricted to the kernel of the spec's character.
pub fn enumerate_elements(g: &GroupSpec, w: &Window) -> ElementSet {
    let bound = w.radius() + &g.slack();
    let (records, relators) = bfs(g, |e| within(e.translation_part(), &bound));
    let records = records.into_iter().map(|(e, p, _)| (e, p)).collect();
    let full = ElementSet::from_records(records, relators, g.generators().len());
    if g.character() == Character::TRIVIAL {
        full
    } else {
        full.kernel(g.character())
    }
}

/// Default cap on stabilizer word length.
pub const STABILIZER_WORD_CAP: usize = 20;

/// The finite stabilizer of `p`, with the default word-length cap.
pub fn point_stabilizer(g: &GroupSpec, p: &Vec3Q) -> Result<Vec<Isometry>> {
    point_stabilizer_capped(g, p, STABILIZER_WORD_CAP)
}

/// Every σ fixing `p` has `|σ(0) − p| = |p|`, so its gallery stays inside the
/// ball of radius `|p| + slack` around `p`. The search explores that ball and
/// fails loudly if some element fixing `p` is only reached by a word longer
/// than `cap`.
pub fn point_stabilizer_capped(g: &GroupSpec, p: &Vec3Q, cap: usize) -> Result<Vec<Isometry>> {
    let reach = &rational_sqrt_upper(&p.norm_sq()) + &g.slack();
    let (records, _) = bfs(g, |e| within(&(e.translation_part() - p), &reach));
    let fixing: Vec<(Isometry, u64, usize)> = records.into_iter().filter(|(e, _, _)| &e.apply(p) == p).collect();
    if fixing.iter().any(|(_, _, depth)| *depth > cap) {
        return Err(Error::StabilizerExhausted(cap));
    }
    let mut stab: Vec<Isometry> = fixing
        .into_iter()
        .filter(|(_, parity, _)| g.character().in_kernel(*parity))
        .map(|(e, _, _)| e)
        .collect();
    stab.sort();
    // closure check: the result must be a group
    let set: std::collections::HashSet<&Isometry> = stab.iter().collect();
    for a in &stab {
        if !set.contains(&a.inverse()) {
            return Err(Error::Inconsistency("stabilizer not closed under inverses".into()));
        }
        for b in &stab {
            if !set.contains(&a.compose(b)) {
                return Err(Error::Inconsistency("stabilizer not closed under composition".into()));
            }
        }
    }
    Ok(stab)
}

/// Images of `p` inside the window, deduplicated and sorted.
pub fn orbit_points(g: &GroupSpec, p: &Vec3Q, w: &Window) -> Vec<Vec3Q> {
    let reach = w.grown(&rational_sqrt_upper(&p.norm_sq()));
    orbit_points_with(&enumerate_elements(g, &reach), p, w)
}

/// Same as [`orbit_points`] but reusing an enumerated element set, which must
/// cover the window grown by `|p|`.
pub fn orbit_points_with(elements: &ElementSet, p: &Vec3Q, w: &Window) -> Vec<Vec3Q> {
    let mut pts: Vec<Vec3Q> = elements.iter().map(|e| e.apply(p)).filter(|q| w.contains(q)).collect();
    pts.sort();
    pts.dedup();
    pts
}

/// Basis of the translation subgroup Λ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBasis {
    basis: [Vec3Q; 3],
    #[serde(skip)]
    inverse: Option<Mat3Q>,
}

impl LatticeBasis {
    pub fn new(basis: [Vec3Q; 3]) -> Result<Self> {
        let m = Mat3Q::from_cols([&basis[0], &basis[1], &basis[2]]);
        let inverse = m
            .inverse()
            .map_err(|_| Error::Invariant("lattice basis is linearly dependent".into()))?;
        Ok(LatticeBasis { basis, inverse: Some(inverse) })
    }

    pub fn vectors(&self) -> &[Vec3Q; 3] {
        &self.basis
    }

    fn inverse(&self) -> Mat3Q {
        match &self.inverse {
            Some(m) => m.clone(),
            None => Mat3Q::from_cols([&self.basis[0], &self.basis[1], &self.basis[2]])
                .inverse()
                .expect("basis checked independent on construction"),
        }
    }

    /// Exact coordinates of `v` in this basis.
    pub fn coefficients(&self, v: &Vec3Q) -> [QSqrt3; 3] {
        self.inverse().mul_vec(v).0
    }

    pub fn is_lattice_vector(&self, v: &Vec3Q) -> bool {
        self.coefficients(v).iter().all(QSqrt3::is_integer)
    }

    /// Canonical representative of the coset `v + Λ`, as reduced coefficients.
    pub fn coset_key(&self, v: &Vec3Q) -> [QSqrt3; 3] {
        self.coefficients(v).map(|c| c.fract_rational())
    }

    pub fn combine(&self, coeffs: &[Rational; 3]) -> Vec3Q {
        let mut out = Vec3Q::zero();
        for (b, c) in self.basis.iter().zip(coeffs) {
            out = &out + &b.scale(&QSqrt3::rational(c.clone()));
        }
        out
    }
}

/// Three short independent translations spanning every pure translation found
/// in the window.
pub fn translation_lattice(g: &GroupSpec, w: &Window) -> Result<LatticeBasis> {
    let elements = enumerate_elements(g, w);
    translation_lattice_with(&elements)
}

pub fn translation_lattice_with(elements: &ElementSet) -> Result<LatticeBasis> {
    let mut translations: Vec<Vec3Q> = elements
        .iter()
        .filter(|e| e.classify() == IsometryKind::PureTranslation)
        .map(|e| e.translation_part().clone())
        .collect();
    translations.sort_by(|a, b| a.norm_sq().value_cmp(&b.norm_sq()).then_with(|| b.cmp(a)));
    let mut picked: Vec<Vec3Q> = Vec::new();
    for t in &translations {
        let independent = match picked.len() {
            0 => true,
            1 => !picked[0].cross(t).is_zero(),
            2 => !picked[0].cross(&picked[1]).dot(t).is_zero(),
            _ => break,
        };
        if independent {
            picked.push(t.clone());
        }
    }
    if picked.len() < 3 {
        return Err(Error::WindowTooSmall(format!(
            "found only {} independent translations",
            picked.len()
        )));
    }
    let start = LatticeBasis::new([picked[0].clone(), picked[1].clone(), picked[2].clone()])?;
    refine_basis(start, &translations)
}

/// Enlarges the lattice spanned by `basis` until every translation in `ts` is an
/// integer combination, via Hermite reduction of the rational coefficient rows.
fn refine_basis(basis: LatticeBasis, ts: &[Vec3Q]) -> Result<LatticeBasis> {
    let mut rows: Vec<[Rational; 3]> = Vec::new();
    for t in ts {
        let c = basis.coefficients(t);
        if c.iter().any(|x| !x.is_rational()) {
            return Err(Error::Inconsistency(format!("translation {t} is not commensurate with the lattice")));
        }
        if c.iter().any(|x| !x.is_integer()) {
            rows.push(c.map(|x| x.a().clone()));
        }
    }
    if rows.is_empty() {
        return Ok(basis);
    }
    for i in 0..3 {
        let mut unit = [Rational::ZERO, Rational::ZERO, Rational::ZERO];
        unit[i] = Rational::ONE;
        rows.push(unit);
    }
    let reduced = hermite_rows(&rows);
    let vecs: Vec<Vec3Q> = reduced.iter().map(|r| basis.combine(r)).collect();
    LatticeBasis::new([vecs[0].clone(), vecs[1].clone(), vecs[2].clone()])
}

/// Row-style Hermite reduction over Z of rational rows spanning a rank-3 lattice.
fn hermite_rows(rows: &[[Rational; 3]]) -> Vec<[Rational; 3]> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{Signed, Zero};

    let den = rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(BigInt::from(1), |acc, x| acc.lcm(&x.denom()));
    let mut m: Vec<[BigInt; 3]> = rows
        .iter()
        .map(|r| r.clone().map(|x| x.numer() * (&den / x.denom())))
        .collect();
    let mut out_rows: Vec<[BigInt; 3]> = Vec::new();
    for col in 0..3 {
        // Euclid on column `col` among remaining rows
        loop {
            let nonzero: Vec<usize> = (0..m.len()).filter(|&i| !m[i][col].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let pivot = *nonzero.iter().min_by_key(|&&i| m[i][col].abs()).expect("nonempty");
            let pv = m[pivot][col].clone();
            let prow = m[pivot].clone();
            for &i in &nonzero {
                if i == pivot {
                    continue;
                }
                let q = m[i][col].div_floor(&pv);
                for k in 0..3 {
                    m[i][k] = &m[i][k] - &q * &prow[k];
                }
            }
        }
        if let Some(i) = (0..m.len()).find(|&i| !m[i][col].is_zero()) {
            out_rows.push(m.remove(i));
        }
    }
    let den_r = |x: &BigInt| -> Rational {
        let s = format!("{x}/{den}");
        s.parse().expect("well-formed rational")
    };
    out_rows.iter().map(|r| [den_r(&r[0]), den_r(&r[1]), den_r(&r[2])]).collect()
}

/// A lattice class: orbit points that differ by a translation of the group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeClass {
    pub representative: Vec3Q,
    pub members: Vec<Vec3Q>,
}

/// Partition of `points` by `v ~ v'` iff `v − v'` is in Λ. Classes are sorted
/// by representative (the least member).
pub fn lattice_class_partition(points: &[Vec3Q], lattice: &LatticeBasis) -> Vec<LatticeClass> {
    let mut classes: HashMap<[QSqrt3; 3], Vec<Vec3Q>> = HashMap::new();
    for p in points {
        classes.entry(lattice.coset_key(p)).or_default().push(p.clone());
    }
    let mut out: Vec<LatticeClass> = classes
        .into_values()
        .map(|mut members| {
            members.sort();
            members.dedup();
            LatticeClass { representative: members[0].clone(), members }
        })
        .collect();
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::PlaneQ;

    fn v(x: i64, y: i64, z: i64) -> Vec3Q {
        Vec3Q::new(x.into(), y.into(), z.into())
    }

    fn refl(n: Vec3Q, d: i64) -> Isometry {
        Isometry::reflection(&PlaneQ::new(n, d.into()).unwrap()).unwrap()
    }

    /// Reflections in x=0,1 / y=0,1 / z=0,1: the cubic lattice group pmmm.
    fn box_group() -> GroupSpec {
        GroupSpec::new(vec![
            refl(v(1, 0, 0), 0),
            refl(v(1, 0, 0), 1),
            refl(v(0, 1, 0), 0),
            refl(v(0, 1, 0), 1),
            refl(v(0, 0, 1), 0),
            refl(v(0, 0, 1), 1),
        ])
        .unwrap()
    }

    #[test]
    fn order_two_group() {
        let r = refl(v(0, 0, 1), 0);
        let g = GroupSpec::new(vec![r.clone()]).unwrap();
        let els = enumerate_elements(&g, &Window::from_ints(5, 1).unwrap());
        assert_eq!(els.as_slice(), &{
            let mut e = vec![Isometry::identity(), r];
            e.sort();
            e
        }[..]);
    }

    #[test]
    fn identity_always_present() {
        let els = enumerate_elements(&GroupSpec::trivial(), &Window::from_ints(2, 1).unwrap());
        assert_eq!(els.len(), 1);
        assert!(els.contains(&Isometry::identity()));
    }

    #[test]
    fn window_invariants() {
        assert!(Window::from_ints(3, 0).is_err());
        assert!(Window::from_ints(3, 3).is_err());
        assert!(Window::from_ints(3, 1).is_ok());
    }

    #[test]
    fn box_group_stabilizers_and_lattice() {
        let g = box_group();
        // corner of the box: three mirrors, order 8
        assert_eq!(point_stabilizer(&g, &Vec3Q::zero()).unwrap().len(), 8);
        let interior = Vec3Q::new(QSqrt3::frac(1, 3, 0, 1), QSqrt3::frac(1, 5, 0, 1), QSqrt3::frac(2, 7, 0, 1));
        assert_eq!(point_stabilizer(&g, &interior).unwrap(), vec![Isometry::identity()]);
        let lat = translation_lattice(&g, &Window::from_ints(4, 1).unwrap()).unwrap();
        for b in lat.vectors() {
            assert_eq!(b.norm_sq(), QSqrt3::int(4));
        }
        assert!(lat.is_lattice_vector(&v(2, -4, 6)));
        assert!(!lat.is_lattice_vector(&v(1, 0, 0)));
        // orbit of the interior point: 8 lattice classes
        let w = Window::from_ints(3, 1).unwrap();
        let orbit = orbit_points(&g, &interior, &w);
        assert_eq!(lattice_class_partition(&orbit, &lat).len(), 8);
        let corner_orbit = orbit_points(&g, &Vec3Q::zero(), &w);
        assert_eq!(lattice_class_partition(&corner_orbit, &lat).len(), 1);
    }

    #[test]
    fn stabilizer_cap_is_loud() {
        let g = box_group();
        let far = v(3, 3, 3);
        assert_eq!(point_stabilizer_capped(&g, &far, 2), Err(Error::StabilizerExhausted(2)));
    }

    #[test]
    fn rational_sqrt_upper_bounds() {
        let r = rational_sqrt_upper(&QSqrt3::int(2));
        assert!(r.to_f64() >= 2f64.sqrt() && r.to_f64() < 2f64.sqrt() + 0.02);
        assert_eq!(rational_sqrt_upper(&QSqrt3::int(4)), Rational::integer(2));
    }

    #[test]
    fn hermite_refines_half_lattice() {
        let rows = vec![
            [Rational::new(1, 2), Rational::new(1, 2), Rational::ZERO],
            [Rational::ONE, Rational::ZERO, Rational::ZERO],
            [Rational::ZERO, Rational::ONE, Rational::ZERO],
            [Rational::ZERO, Rational::ZERO, Rational::ONE],
        ];
        let h = hermite_rows(&rows);
        assert_eq!(h.len(), 3);
        // determinant of the refined lattice is 1/2
        let row = |i: usize| h[i].clone().map(QSqrt3::rational);
        let m = Mat3Q([row(0), row(1), row(2)]);
        assert_eq!(m.det().abs(), QSqrt3::frac(1, 2, 0, 1));
    }

    #[test]
    fn characters_of_box_group() {
        let g = box_group();
        let els = enumerate_elements(&g, &Window::from_ints(3, 1).unwrap());
        // all generators commute pairwise or are parallel: every sign pattern is a homomorphism
        assert_eq!(els.valid_characters().len(), 64);
        let rot = els.kernel(Character((1 << 6) - 1));
        assert!(rot.iter().all(|e| e.det() == QSqrt3::ONE));
    }
}
