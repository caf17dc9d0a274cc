use proptest::prelude::*;

use ftpoly_core::export::{export_mesh, Format, SceneMetadata};
use ftpoly_core::facefill::{s1_construction, select_symmetry_group, Alternation, FaceFilling};
use ftpoly_core::fixtures::hexagonal_prism;
use ftpoly_core::group::{enumerate_elements, orbit_points, point_stabilizer, translation_lattice, within};
use ftpoly_core::honeypie::{honeypie_generators, named_points};
use ftpoly_core::polyhedron::canonical_sequence;
use ftpoly_core::skeleton::star_with;
use ftpoly_core::verify::{flag_identity, transitivity_report};
use ftpoly_core::{GroupSpec, HoneypieConfig, Isometry, QSqrt3, Vec3Q, Window};

fn word(g: &GroupSpec, letters: &[usize]) -> Isometry {
    letters.iter().fold(Isometry::identity(), |e, &i| e.compose(&g.generators()[i]))
}

fn letters() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..5, 0..16)
}

fn coord() -> impl Strategy<Value = QSqrt3> {
    (-20i64..20, 1i64..8, -20i64..20, 1i64..8).prop_map(|(a, b, c, d)| QSqrt3::frac(a, b, c, d))
}

fn point() -> impl Strategy<Value = Vec3Q> {
    (coord(), coord(), coord()).prop_map(|(x, y, z)| Vec3Q::new(x, y, z))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn words_form_a_group(a in letters(), b in letters(), c in letters()) {
        let g = honeypie_generators(&HoneypieConfig::default());
        let (a, b, c) = (word(&g, &a), word(&g, &b), word(&g, &c));
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert!(a.inverse().compose(&a).is_identity());
        prop_assert!(a.compose(&b).is_orthogonal());
    }

    #[test]
    fn words_preserve_distances(w in letters(), p in point(), q in point()) {
        let g = honeypie_generators(&HoneypieConfig::default());
        let e = word(&g, &w);
        prop_assert_eq!((&e.apply(&p) - &e.apply(&q)).norm_sq(), (&p - &q).norm_sq());
    }

    #[test]
    fn canonical_sequence_forgets_rotation_and_reversal(seq in prop::collection::vec(0u8..6, 1..9), r in 0usize..9) {
        let n = seq.len();
        let mut rotated: Vec<u8> = seq[r % n..].iter().chain(&seq[..r % n]).copied().collect();
        prop_assert_eq!(canonical_sequence(&rotated, true), canonical_sequence(&seq, true));
        rotated.reverse();
        prop_assert_eq!(canonical_sequence(&rotated, true), canonical_sequence(&seq, true));
        let mut rev = seq.clone();
        rev.reverse();
        prop_assert_eq!(canonical_sequence(&rev, false), canonical_sequence(&seq, false));
    }

    #[test]
    fn alternating_labels_pass(alpha in 0usize..4, betas in prop::collection::vec(4usize..7, 1..5)) {
        let labels: Vec<usize> = betas.iter().flat_map(|&b| [alpha, b]).collect();
        prop_assert!(Alternation::of(&labels).passes());
        let mut broken = labels.clone();
        broken.swap(0, 1);
        broken.push(alpha);
        prop_assert!(!Alternation::of(&broken).passes());
    }

    #[test]
    fn precision_changes_decimals_only(digits in 1usize..18) {
        let p = hexagonal_prism();
        let meta = SceneMetadata::default();
        let strip = |bytes: Vec<u8>| {
            String::from_utf8(bytes).unwrap().lines().filter(|l| !l.starts_with("v ")).map(String::from).collect::<Vec<_>>()
        };
        let a = strip(export_mesh(&p, Format::Obj, digits, &meta).unwrap());
        let b = strip(export_mesh(&p, Format::Obj, 12, &meta).unwrap());
        prop_assert_eq!(a, b);
        let json = export_mesh(&p, Format::Json, digits, &meta).unwrap();
        prop_assert_eq!(ftpoly_core::import_json(&json).unwrap().0, p);
    }
}

#[test]
fn enumeration_ignores_generator_order() {
    let g = honeypie_generators(&HoneypieConfig::default());
    let w = Window::from_ints(3, 1).unwrap();
    let reference = enumerate_elements(&g, &w).as_slice().to_vec();
    for perm in [[4, 3, 2, 1, 0], [2, 0, 4, 1, 3], [1, 2, 3, 4, 0]] {
        let gens = perm.iter().map(|&i| g.generators()[i].clone()).collect();
        let h = GroupSpec::new(gens).unwrap();
        assert_eq!(enumerate_elements(&h, &w).as_slice(), &reference[..]);
    }
}

#[test]
fn orbit_stabilizer_in_core() {
    let cfg = HoneypieConfig::default();
    let g = honeypie_generators(&cfg);
    let u = named_points(&cfg).u;
    let w = Window::from_ints(4, 1).unwrap();
    let core = w.core_radius();
    let elements = enumerate_elements(&g, &w);
    let mapping = elements.iter().filter(|e| within(&e.apply(&u), &core)).count();
    let orbit = orbit_points(&g, &u, &w).into_iter().filter(|p| w.core_contains(p)).count();
    let stab = point_stabilizer(&g, &u).unwrap().len();
    assert_eq!(mapping, orbit * stab);
}

#[test]
fn lattice_classes_are_an_equivalence() {
    let cfg = HoneypieConfig::default();
    let g = honeypie_generators(&cfg);
    let w = Window::from_ints(4, 1).unwrap();
    let lattice = translation_lattice(&g, &w).unwrap();
    let pts: Vec<Vec3Q> = orbit_points(&g, &named_points(&cfg).u, &w).into_iter().step_by(7).take(12).collect();
    let same = |p: &Vec3Q, q: &Vec3Q| lattice.is_lattice_vector(&(p - q));
    for a in &pts {
        assert!(same(a, a));
        for b in &pts {
            assert_eq!(same(a, b), same(b, a));
            for c in &pts {
                if same(a, b) && same(b, c) {
                    assert!(same(a, c));
                }
            }
        }
    }
}

#[test]
fn star_sizes_divide_the_stabilizer_order() {
    let cfg = HoneypieConfig::default();
    let g = honeypie_generators(&cfg);
    let n = named_points(&cfg);
    let stab = point_stabilizer(&g, &n.u).unwrap();
    for p in [&n.v, &n.w, &n.x, &n.y, &n.v1, &n.x1, &n.y2, &n.w2] {
        let star = star_with(&stab, &n.u, p).unwrap();
        assert_eq!(stab.len() % star.len(), 0, "star of {p}");
    }
}

#[test]
fn spiralhedron_is_consistent_with_its_figure() {
    let cfg = HoneypieConfig::default();
    let w = Window::from_ints(6, 2).unwrap();
    let c = s1_construction(&cfg, &w).unwrap();
    let p = &c.polyhedron;

    // faces around u, chained through shared edges, reproduce the figure
    let ui = p.vertex_index(&c.base).unwrap();
    let corners: Vec<(usize, usize)> = p.corners().into_iter().filter(|k| k.vertex == ui).map(|k| (k.a, k.c)).collect();
    assert_eq!(corners.len(), c.figure.len());
    let mut cycle = vec![corners[0].0, corners[0].1];
    let mut used = vec![false; corners.len()];
    used[0] = true;
    while cycle.len() < corners.len() {
        let last = *cycle.last().unwrap();
        let i = (0..corners.len()).find(|&i| !used[i] && (corners[i].0 == last || corners[i].1 == last)).unwrap();
        used[i] = true;
        cycle.push(if corners[i].0 == last { corners[i].1 } else { corners[i].0 });
    }
    let cycle: Vec<Vec3Q> = cycle.iter().map(|&i| p.vertices()[i].clone()).collect();
    assert_eq!(canonical_sequence(&cycle, true), canonical_sequence(c.figure.cycle(), true));

    // every face alternates its angle types
    let group = select_symmetry_group(&honeypie_generators(&cfg), &c.figure).unwrap();
    let filling = FaceFilling::new(&group, &c.figure, &w).unwrap();
    for i in 0..p.faces().len() {
        let profile = filling.profile(&p.face(i)).unwrap();
        assert!(profile.alternates && profile.strictly_monotone(), "face {i}");
    }

    let (flags, by_faces) = flag_identity(p);
    assert_eq!(flags, by_faces);
}

#[test]
fn prism_orbit_counts_do_not_grow_with_the_window() {
    let p = hexagonal_prism();
    let r = transitivity_report(&ftpoly_core::fixtures::hexagonal_prism_group(), &p);
    assert_eq!(r.counts(), (1, 2, 2));
    let cfg = HoneypieConfig::default();
    let mut last = (usize::MAX, usize::MAX, usize::MAX);
    for core in [2, 4] {
        let w = Window::from_ints(core + 2, 2).unwrap();
        let c = s1_construction(&cfg, &w).unwrap();
        let t = transitivity_report(&c.group, &c.polyhedron).counts();
        assert!(t.0 <= last.0 && t.1 <= last.1 && t.2 <= last.2);
        last = t;
    }
    assert_eq!(last, (1, 1, 1));
}
