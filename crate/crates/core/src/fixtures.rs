//! Small hand-coded polyhedra with known answers, used as controls.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Mat3Q, QSqrt3, Rational, Vec3Q};
use crate::group::{Character, GroupSpec};
use crate::isometry::{Isometry, PlaneQ};
use crate::polyhedron::{Face, Polyhedron};

fn p(x: i64, y: i64, z: i64) -> Vec3Q {
    Vec3Q::new(x.into(), y.into(), z.into())
}

fn cube_faces(k: i64) -> Vec<Face> {
    let mut faces = Vec::new();
    for axis in 0..3 {
        for s in [-k, k] {
            let square = [(-k, -k), (k, -k), (k, k), (-k, k)];
            let pts = square
                .iter()
                .map(|&(a, b)| {
                    let mut c = [0i64; 3];
                    c[axis] = s;
                    c[(axis + 1) % 3] = a;
                    c[(axis + 2) % 3] = b;
                    p(c[0], c[1], c[2])
                })
                .collect();
            faces.push(Face::closed(pts));
        }
    }
    faces
}

/// The cube with vertices `(±k, ±k, ±k)`.
pub fn cube_scaled(k: i64) -> Polyhedron {
    Polyhedron::from_faces(cube_faces(k), None).expect("cube incidence is valid")
}

/// The cube with vertices `(±1, ±1, ±1)`.
pub fn cube() -> Polyhedron {
    cube_scaled(1)
}

/// The cube with its top face removed.
pub fn cube_missing_face() -> Polyhedron {
    let faces = cube_faces(1).into_iter().filter(|f| f.vertices.iter().any(|v| v.z() != &QSqrt3::ONE)).collect();
    Polyhedron::from_faces(faces, None).expect("open cube incidence is valid")
}

/// Concentric cubes of edge 2 and 4.
pub fn two_scale_cubes() -> Polyhedron {
    let faces = cube_faces(1).into_iter().chain(cube_faces(2)).collect();
    Polyhedron::from_faces(faces, None).expect("disjoint cubes are valid")
}

fn linear(rows: [[i64; 3]; 3]) -> Isometry {
    let m = Mat3Q::from_rows(rows.map(|r| p(r[0], r[1], r[2])));
    Isometry::new(m, Vec3Q::zero()).expect("signed permutation matrices are orthogonal")
}

/// Full octahedral group: the mirror `z = 0`, the mirror `x = y` and the
/// rotation cycling the axes.
pub fn cube_group() -> GroupSpec {
    GroupSpec::new(vec![
        linear([[1, 0, 0], [0, 1, 0], [0, 0, -1]]),
        linear([[0, 1, 0], [1, 0, 0], [0, 0, 1]]),
        linear([[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
    ])
    .expect("generators are orthogonal")
}

/// Rotation subgroup of [`cube_group`]: the kernel of the determinant.
pub fn cube_rotation_group() -> GroupSpec {
    cube_group().with_character(Character(0b011))
}

/// Hexagonal prism: regular hexagons of circumradius 1 at `z = ±1`.
pub fn hexagonal_prism() -> Polyhedron {
    let h = QSqrt3::frac(0, 1, 1, 2);
    let half = Rational::new(1, 2);
    let ring: Vec<(QSqrt3, QSqrt3)> = vec![
        (QSqrt3::ONE, QSqrt3::ZERO),
        (QSqrt3::rational(half.clone()), h.clone()),
        (QSqrt3::rational(-&half), h.clone()),
        (-&QSqrt3::ONE, QSqrt3::ZERO),
        (QSqrt3::rational(-&half), -&h),
        (QSqrt3::rational(half), -&h),
    ];
    let level = |z: i64| -> Vec<Vec3Q> { ring.iter().map(|(x, y)| Vec3Q::new(x.clone(), y.clone(), z.into())).collect() };
    let (top, bottom) = (level(1), level(-1));
    let mut faces = vec![Face::closed(top.clone()), Face::closed(bottom.clone())];
    for i in 0..6 {
        let j = (i + 1) % 6;
        faces.push(Face::closed(vec![top[i].clone(), top[j].clone(), bottom[j].clone(), bottom[i].clone()]));
    }
    Polyhedron::from_faces(faces, None).expect("prism incidence is valid")
}

/// Symmetries of the hexagonal prism: mirrors `z = 0`, `y = 0` and the
/// vertical mirror at 30° to the x-axis.
pub fn hexagonal_prism_group() -> GroupSpec {
    let mirror = |n: Vec3Q| Isometry::reflection(&PlaneQ::new(n, QSqrt3::ZERO).expect("unit normal")).expect("unit normal");
    GroupSpec::new(vec![
        mirror(p(0, 0, 1)),
        mirror(p(0, 1, 0)),
        mirror(Vec3Q::new(QSqrt3::rational(Rational::new(-1, 2)), QSqrt3::frac(0, 1, 1, 2), QSqrt3::ZERO)),
    ])
    .expect("mirrors are orthogonal")
}

/// Named fixtures selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fixture {
    Cube,
    CubeMissingFace,
    TwoScaleCubes,
    HexagonalPrism,
}

impl Fixture {
    pub const ALL: [Fixture; 4] = [Fixture::Cube, Fixture::CubeMissingFace, Fixture::TwoScaleCubes, Fixture::HexagonalPrism];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::Cube => "cube",
            Fixture::CubeMissingFace => "cube-missing-face",
            Fixture::TwoScaleCubes => "two-scale-cubes",
            Fixture::HexagonalPrism => "hexagonal-prism",
        }
    }

    pub fn polyhedron(self) -> Polyhedron {
        match self {
            Fixture::Cube => cube(),
            Fixture::CubeMissingFace => cube_missing_face(),
            Fixture::TwoScaleCubes => two_scale_cubes(),
            Fixture::HexagonalPrism => hexagonal_prism(),
        }
    }

    pub fn group(self) -> GroupSpec {
        match self {
            Fixture::HexagonalPrism => hexagonal_prism_group(),
            _ => cube_group(),
        }
    }
}

impl std::fmt::Display for Fixture {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Fixture::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("fixture {s}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{enumerate_elements, Window};
    use crate::verify::{flag_identity, symmetry_report, verify_axioms};

    #[test]
    fn cube_counts() {
        let c = cube();
        assert_eq!((c.vertices().len(), c.edges().len(), c.faces().len()), (8, 12, 6));
        assert_eq!(c.flags().len(), 48);
        let (a, b) = flag_identity(&c);
        assert_eq!(a, b);
    }

    #[test]
    fn cube_group_orders() {
        let w = Window::from_ints(3, 1).unwrap();
        assert_eq!(enumerate_elements(&cube_group(), &w).len(), 48);
        assert_eq!(enumerate_elements(&cube_rotation_group(), &w).len(), 24);
    }

    #[test]
    fn cube_is_regular_and_rotations_halve_it() {
        let c = cube();
        assert!(verify_axioms(&c).all_pass());
        let full = symmetry_report(&cube_group(), &c).unwrap();
        assert_eq!(full.transitivity.counts(), (1, 1, 1));
        assert_eq!(full.transitivity.violations, 0);
        assert_eq!(full.flags.count, 1);
        let rot = symmetry_report(&cube_rotation_group(), &c).unwrap();
        assert_eq!(rot.transitivity.counts(), (1, 1, 1));
        assert_eq!(rot.flags.count, 2);
    }

    #[test]
    fn open_cube_exposes_an_edge() {
        let r = verify_axioms(&cube_missing_face());
        assert!(!r.two_faces_per_edge.pass);
        match r.two_faces_per_edge.witness {
            Some(crate::verify::Witness::Edge { edge, faces }) => {
                assert_eq!(faces, 1);
                let (a, b) = edge.endpoints();
                assert_eq!((a.z(), b.z()), (&QSqrt3::ONE, &QSqrt3::ONE));
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn two_scales_give_two_vertex_orbits() {
        let r = symmetry_report(&cube_group(), &two_scale_cubes()).unwrap();
        assert_eq!(r.transitivity.vertex_orbits, 2);
        assert!(!verify_axioms(&two_scale_cubes()).connected.pass);
    }

    #[test]
    fn hexagonal_prism_truth() {
        let h = hexagonal_prism();
        assert_eq!((h.vertices().len(), h.edges().len(), h.faces().len()), (12, 18, 8));
        let r = verify_axioms(&h);
        assert!(r.all_pass(), "{}", r.render());
        assert_eq!(r.max_faces_at_vertex, 3);
        let s = symmetry_report(&hexagonal_prism_group(), &h).unwrap();
        assert_eq!(s.transitivity.counts(), (1, 2, 2));
        assert_eq!(s.transitivity.violations, 0);
        assert_eq!(s.flags.count, 3);
    }

    #[test]
    fn fixture_names_round_trip() {
        for f in Fixture::ALL {
            assert_eq!(f.name().parse::<Fixture>().unwrap(), f);
        }
        assert!("dodecahedron".parse::<Fixture>().is_err());
    }
}
