//! The ten acceptance criteria, one PASS/FAIL line each.

use std::collections::HashSet;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};

use ftpoly_core::facefill::{
    enumerate_vertex_figures, s1_construction, s1_figure, s1_spiral, select_symmetry_group, AngleType, FaceFilling,
};
use ftpoly_core::fixtures::{cube_group, cube_missing_face, two_scale_cubes};
use ftpoly_core::group::{lattice_class_partition, orbit_points, point_stabilizer, translation_lattice};
use ftpoly_core::honeypie::{honeypie_generators, named_points, probe_corners, select_corner};
use ftpoly_core::skeleton::{star_class_invariance, star_with};
use ftpoly_core::verify::{symmetry_report, transitivity_report, verify_axioms, Witness};
use ftpoly_core::{Corner, HoneypieConfig, Isometry, QSqrt3, Rational, Vec3Q, Window};

const LATTICE_RUNTIME: Duration = Duration::from_secs(10);
const AXIOM_RUNTIME: Duration = Duration::from_secs(60);
const PINNED_CORNER: Corner = Corner::C90;
/// Brute-force trace results, in units of the slice height c.
const FROZEN_EDGE_DROP: i64 = 2;
const FROZEN_PERIOD_EDGES: usize = 8;
const FROZEN_PERIOD_DROP: i64 = 16;
const FROZEN_FLAG_ORBITS: usize = 4;
const RANDOM_WORDS: usize = 100_000;
const MAX_WORD_LENGTH: usize = 24;
const FLOAT_TOLERANCE: f64 = 1e-9;
const SHADOW_RADIUS: i64 = 8;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn lattice_classes() -> Outcome {
    let t0 = Instant::now();
    let cfg = HoneypieConfig::default();
    let g = honeypie_generators(&cfg);
    let w = Window::from_ints(6, 1).unwrap();
    let lattice = translation_lattice(&g, &w).map_err(|e| e.to_string())?;
    let u = named_points(&cfg).u;
    let layer: Vec<Vec3Q> = orbit_points(&g, &u, &w).into_iter().filter(|p| p.z().is_zero()).collect();
    let classes = lattice_class_partition(&layer, &lattice);
    let elapsed = t0.elapsed();
    check(classes.len() == 3, format!("{} classes", classes.len()))?;
    check(elapsed < LATTICE_RUNTIME, format!("took {elapsed:?}"))?;
    Ok(format!("3 classes on the base layer, {} points, {elapsed:.2?}", layer.len()))
}

fn planar_star() -> Outcome {
    let cfg = HoneypieConfig::default();
    check(cfg.corner == PINNED_CORNER, "default corner is not the pinned one")?;
    let probes = probe_corners(&cfg).map_err(|e| e.to_string())?;
    let matching: Vec<Corner> = probes.iter().filter(|p| p.matches()).map(|p| p.corner).collect();
    check(!matching.is_empty(), "no corner configuration has a four-edge star")?;
    check(select_corner(&cfg).map_err(|e| e.to_string())? == PINNED_CORNER, "oracle disagrees with the pin")?;
    let n = named_points(&cfg);
    let g = honeypie_generators(&cfg);
    let v = g.generators()[2].compose(&g.generators()[3]).apply(&n.u);
    check(v == n.v, "v is not the image of u under the second and third mirrors")?;
    let stab = point_stabilizer(&g, &n.u).map_err(|e| e.to_string())?;
    let star = star_with(&stab, &n.u, &v).map_err(|e| e.to_string())?;
    check(star.len() == 4, format!("{} edges", star.len()))?;
    Ok(format!("4 edges at u; corners matching: {matching:?}; pinned {PINNED_CORNER}"))
}

fn figure_classes() -> Outcome {
    let cfg = HoneypieConfig::default();
    let n = named_points(&cfg);
    let g = honeypie_generators(&cfg);
    let stab = point_stabilizer(&g, &n.u).map_err(|e| e.to_string())?;
    let star = star_with(&stab, &n.u, &n.v).map_err(|e| e.to_string())?;
    let figs = enumerate_vertex_figures(&star, &stab).map_err(|e| e.to_string())?;
    check(figs.len() == 3, format!("{} classes", figs.len()))?;
    Ok("3 vertex-figure classes".into())
}

fn angle_classes() -> Outcome {
    let cfg = HoneypieConfig::default();
    let n = named_points(&cfg);
    let sel = s1_figure(&cfg).map_err(|e| e.to_string())?;
    let labels: Vec<&str> = sel.classes.iter().map(|c| c.label.as_str()).collect();
    check(labels == ["alpha", "beta1", "beta2"], format!("classes {labels:?}"))?;
    let prescribed = [(&n.x1, &n.x2), (&n.x1, &n.y2), (&n.y1, &n.v2)];
    for (class, (a, c)) in sel.classes.iter().zip(prescribed) {
        let pos = sel.figure.pair_position(a, c).ok_or(format!("{} pair is not consecutive", class.label))?;
        check(class.contains(pos), format!("{} does not hold its prescribed angle", class.label))?;
    }
    let w = Window::from_ints(8, 2).unwrap();
    let group = select_symmetry_group(&honeypie_generators(&cfg), &sel.figure).map_err(|e| e.to_string())?;
    let filling = FaceFilling::new(&group, &sel.figure, &w).map_err(|e| e.to_string())?;
    for k in 0..filling.classes().len() {
        filling.trace_class(k).map_err(|e| format!("trace from class {k}: {e}"))?;
    }
    Ok(format!("alpha, beta1, beta2 on the prescribed pairs; {} traces unambiguous", filling.classes().len()))
}

fn spiral_face() -> Outcome {
    let mut notes = Vec::new();
    for (c, radius, full) in [(Rational::ONE, 12, true), (Rational::new(3, 2), 12, false)] {
        let cfg = HoneypieConfig::new(c.clone(), PINNED_CORNER, Rational::ONE).unwrap();
        let w = Window::from_ints(radius, 2).unwrap();
        let (face, profile) = s1_spiral(&cfg, &w).map_err(|e| e.to_string())?;
        check(!face.closed && face.truncated, "face is closed")?;
        check(profile.strictly_monotone(), "z is not strictly monotone")?;
        check(profile.alternates, "angle types do not alternate")?;
        check(profile.angle_types.contains(&AngleType::Alpha), "no alpha corner")?;
        let cq = QSqrt3::rational(c.clone());
        check(profile.edge_drop == Some(&QSqrt3::int(FROZEN_EDGE_DROP) * &cq), format!("edge drop {:?}", profile.edge_drop))?;
        if full {
            check(profile.period_edges == Some(FROZEN_PERIOD_EDGES), format!("period {:?}", profile.period_edges))?;
            check(
                profile.period_drop() == Some(&QSqrt3::int(FROZEN_PERIOD_DROP) * &cq),
                format!("period drop {:?}", profile.period_drop()),
            )?;
        }
        notes.push(format!("c={c}: {} vertices", face.vertices.len()));
    }
    Ok(format!(
        "infinite, monotone, alternating; drop {FROZEN_EDGE_DROP}c per edge, period {FROZEN_PERIOD_EDGES} edges ({FROZEN_PERIOD_DROP}c); {}",
        notes.join(", ")
    ))
}

fn s1_axioms() -> Outcome {
    let t0 = Instant::now();
    let cfg = HoneypieConfig::default();
    let w = Window::from_ints(8, 2).unwrap();
    let c = s1_construction(&cfg, &w).map_err(|e| e.to_string())?;
    let report = verify_axioms(&c.polyhedron);
    let elapsed = t0.elapsed();
    check(report.all_pass(), report.render())?;
    check(report.core_radius.as_deref() == Some("6"), "core radius is not 6")?;
    check(elapsed < AXIOM_RUNTIME, format!("took {elapsed:?}"))?;
    Ok(format!(
        "all four axioms in core radius 6 ({} core edges, each in 2 faces), {elapsed:.2?}",
        report.core_edges
    ))
}

fn full_transitivity() -> Outcome {
    let cfg = HoneypieConfig::default();
    let mut seen = Vec::new();
    for core in [5, 7] {
        let w = Window::from_ints(core + 2, 2).unwrap();
        let c = s1_construction(&cfg, &w).map_err(|e| e.to_string())?;
        let r = symmetry_report(&c.group, &c.polyhedron).map_err(|e| e.to_string())?;
        check(r.transitivity.counts() == (1, 1, 1), format!("core {core}: orbits {:?}", r.transitivity.counts()))?;
        check(r.transitivity.violations == 0, format!("core {core}: {:?}", r.transitivity.violation_examples))?;
        check([1, 2, 4].contains(&r.flags.count), format!("core {core}: {} flag orbits", r.flags.count))?;
        seen.push(r.flags.count);
    }
    check(seen.iter().all(|&k| k == FROZEN_FLAG_ORBITS), format!("flag orbits {seen:?}"))?;
    Ok(format!("orbits (1,1,1) and {FROZEN_FLAG_ORBITS} flag orbits at core radii 5 and 7"))
}

fn star_invariance() -> Outcome {
    let cfg = HoneypieConfig::default();
    let g = honeypie_generators(&cfg);
    let u = named_points(&cfg).u;
    let w = Window::from_ints(5, 1).unwrap();
    let lattice = translation_lattice(&g, &w).map_err(|e| e.to_string())?;
    let orbit = orbit_points(&g, &u, &w);
    let classes = lattice_class_partition(&orbit, &lattice);
    let report = star_class_invariance(&g, &u, &classes, &lattice, &w).map_err(|e| e.to_string())?;
    check(report.all_pass(), format!("{:?}", report.entries.iter().find(|e| !e.pass)))?;
    let checked: usize = report.entries.iter().map(|e| e.members_checked).sum();
    Ok(format!("{} lattice classes, {checked} neighbors checked", classes.len()))
}

fn float_matrix(e: &Isometry) -> ([[f64; 3]; 3], [f64; 3]) {
    let q = e.linear().0.clone().map(|row| row.map(|x| x.to_f64()));
    (q, e.translation_part().to_f64())
}

fn float_apply(m: &([[f64; 3]; 3], [f64; 3]), p: [f64; 3]) -> [f64; 3] {
    std::array::from_fn(|i| (0..3).map(|j| m.0[i][j] * p[j]).sum::<f64>() + m.1[i])
}

fn exactness() -> Outcome {
    let cfg = HoneypieConfig::default();
    let g = honeypie_generators(&cfg);
    let gens = g.generators();
    let probes = [Vec3Q::zero(), named_points(&cfg).u, named_points(&cfg).y1];
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    for _ in 0..RANDOM_WORDS {
        let len = rng.gen_range(1..=MAX_WORD_LENGTH);
        let mut e = Isometry::identity();
        for _ in 0..len {
            e = e.compose(&gens[rng.gen_range(0..gens.len())]);
        }
        check(e.is_orthogonal(), "a word lost orthogonality")?;
        for i in 0..probes.len() {
            for j in i + 1..probes.len() {
                let before = (&probes[i] - &probes[j]).norm_sq();
                let after = (&e.apply(&probes[i]) - &e.apply(&probes[j])).norm_sq();
                check(before == after, "a word changed a distance")?;
            }
        }
    }

    let w = Window::from_ints(SHADOW_RADIUS, 1).unwrap();
    let u = named_points(&cfg).u;
    let exact: Vec<[f64; 3]> = orbit_points(&g, &u, &w).iter().map(Vec3Q::to_f64).collect();
    let fg: Vec<_> = gens.iter().map(float_matrix).collect();
    let bound = SHADOW_RADIUS as f64 + g.slack().to_f64();
    let key = |p: [f64; 3]| p.map(|x| (x * 1e6).round() as i64);
    let start = u.to_f64();
    let mut seen: HashSet<[i64; 3]> = HashSet::from([key(start)]);
    let mut stack = vec![start];
    let mut shadow = vec![start];
    while let Some(p) = stack.pop() {
        for m in &fg {
            let q = float_apply(m, p);
            let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm <= bound && seen.insert(key(q)) {
                stack.push(q);
                shadow.push(q);
            }
        }
    }
    let r2 = (SHADOW_RADIUS * SHADOW_RADIUS) as f64;
    let inside: Vec<[f64; 3]> = shadow.into_iter().filter(|p| p.iter().map(|x| x * x).sum::<f64>() <= r2 + 1e-9).collect();
    check(inside.len() == exact.len(), format!("shadow {} points, exact {}", inside.len(), exact.len()))?;
    for p in &exact {
        let near = inside.iter().any(|q| (0..3).all(|i| (p[i] - q[i]).abs() <= FLOAT_TOLERANCE));
        check(near, format!("exact point {p:?} has no float shadow"))?;
    }
    Ok(format!("{RANDOM_WORDS} random words exact; {} orbit points match the float shadow", exact.len()))
}

fn negative_controls() -> Outcome {
    let r = verify_axioms(&cube_missing_face());
    check(!r.two_faces_per_edge.pass, "open cube passes axiom 1")?;
    let witness = match &r.two_faces_per_edge.witness {
        Some(w @ Witness::Edge { faces: 1, .. }) => w.to_string(),
        other => return Err(format!("unexpected witness {other:?}")),
    };
    let t = transitivity_report(&cube_group(), &two_scale_cubes());
    check(t.vertex_orbits == 2, format!("{} vertex orbits", t.vertex_orbits))?;
    Ok(format!("open cube: {witness}; two scales: 2 vertex orbits"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("lattice classes", lattice_classes),
        ("planar star", planar_star),
        ("vertex-figure classes", figure_classes),
        ("angle classes", angle_classes),
        ("spiral face", spiral_face),
        ("S1 axioms", s1_axioms),
        ("full transitivity", full_transitivity),
        ("star class invariance", star_invariance),
        ("exactness", exactness),
        ("negative controls", negative_controls),
    ];
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let line = match run() {
            Ok(detail) => format!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed.push(i + 1);
                format!("criterion {:>2} {name}: FAIL ({why})", i + 1)
            }
        };
        writeln!(out, "{line}").unwrap();
        out.flush().unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
