//! The honeypie group: reflections in the five faces of a triangular prism
//! whose footprint is the (2,3,6) triangle.
//!
//! Canonical placement, for scale `s` and height `c`:
//!
//! * footprint triangle `(0,0)`, `(s,0)`, `(3s/4, √3s/4)` with angles 30°, 60°
//!   and 90° at those corners;
//! * side `A`: the line `y = 0`;
//! * side `B`: the 30° line through the origin, normal `(−1/2, √3/2, 0)`;
//! * side `C`: the line through `(s,0)` and the right-angle corner, normal
//!   `(√3/2, 1/2, 0)` at offset `√3s/2`;
//! * `H₀` is `z = 0` and `H₄` is `z = c`.
//!
//! `H₁` and `H₂` are the two sides through the selected corner and `H₃` is the
//! side opposite it, so that `u = H₀ ∩ H₁ ∩ H₂` is that corner.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{QSqrt3, Rational, Vec3Q};
use crate::group::GroupSpec;
use crate::isometry::{Isometry, PlaneQ};

/// Footprint corner carrying the base point, named by its wedge angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Corner {
    C30,
    C90,
    C60,
}

impl Corner {
    pub const ALL: [Corner; 3] = [Corner::C30, Corner::C90, Corner::C60];

    pub fn degrees(self) -> u32 {
        match self {
            Corner::C30 => 30,
            Corner::C90 => 90,
            Corner::C60 => 60,
        }
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.degrees())
    }
}

impl FromStr for Corner {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c30" | "30" => Ok(Corner::C30),
            "c90" | "90" => Ok(Corner::C90),
            "c60" | "60" => Ok(Corner::C60),
            _ => Err(Error::Parse(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoneypieConfig {
    /// Height of the slice; `H₄` is `z = c`.
    pub c: Rational,
    pub corner: Corner,
    /// Footprint edge scale.
    pub scale: Rational,
}

impl Default for HoneypieConfig {
    /// The corner reproducing the four-edge planar star; see [`select_corner`].
    fn default() -> Self {
        HoneypieConfig { c: Rational::ONE, corner: Corner::C90, scale: Rational::ONE }
    }
}

impl HoneypieConfig {
    pub fn new(c: Rational, corner: Corner, scale: Rational) -> Result<Self> {
        if c.signum() <= 0 {
            return Err(Error::Invariant(format!("slice height must be positive, got {c}")));
        }
        if scale.signum() <= 0 {
            return Err(Error::Invariant(format!("footprint scale must be positive, got {scale}")));
        }
        Ok(HoneypieConfig { c, corner, scale })
    }

    pub fn with_corner(&self, corner: Corner) -> Self {
        HoneypieConfig { corner, ..self.clone() }
    }

    fn height(&self) -> QSqrt3 {
        QSqrt3::rational(self.c.clone())
    }

    fn s(&self) -> QSqrt3 {
        QSqrt3::rational(self.scale.clone())
    }
}

fn side_a() -> PlaneQ {
    PlaneQ { normal: Vec3Q::new(QSqrt3::ZERO, QSqrt3::ONE, QSqrt3::ZERO), offset: QSqrt3::ZERO }
}

fn side_b() -> PlaneQ {
    PlaneQ {
        normal: Vec3Q::new(QSqrt3::frac(-1, 2, 0, 1), QSqrt3::frac(0, 1, 1, 2), QSqrt3::ZERO),
        offset: QSqrt3::ZERO,
    }
}

fn side_c(cfg: &HoneypieConfig) -> PlaneQ {
    PlaneQ {
        normal: Vec3Q::new(QSqrt3::frac(0, 1, 1, 2), QSqrt3::frac(1, 2, 0, 1), QSqrt3::ZERO),
        offset: &QSqrt3::frac(0, 1, 1, 2) * &cfg.s(),
    }
}

fn horizontal(offset: QSqrt3) -> PlaneQ {
    PlaneQ { normal: Vec3Q::new(QSqrt3::ZERO, QSqrt3::ZERO, QSqrt3::ONE), offset }
}

/// The bounding planes `[H₀, H₁, H₂, H₃, H₄]` for the configured corner.
pub fn honeypie_planes(cfg: &HoneypieConfig) -> [PlaneQ; 5] {
    let (a, b, c) = (side_a(), side_b(), side_c(cfg));
    let (h1, h2, h3) = match cfg.corner {
        Corner::C90 => (b, c, a),
        Corner::C30 => (a, b, c),
        Corner::C60 => (c, a, b),
    };
    [horizontal(QSqrt3::ZERO), h1, h2, h3, horizontal(cfg.height())]
}

/// The reflections `γ₀ … γ₄` in `H₀ … H₄`, in that order.
pub fn honeypie_generators(cfg: &HoneypieConfig) -> GroupSpec {
    let gens = honeypie_planes(cfg)
        .iter()
        .map(|p| Isometry::reflection(p).expect("honeypie normals are unit"))
        .collect();
    GroupSpec::new(gens).expect("reflections are orthogonal")
}

/// The planar group generated by `γ₀ … γ₃`: the (2,3,6) wallpaper group on
/// `H₀` extended by the mirror `H₀` itself.
pub fn planar_generators(cfg: &HoneypieConfig) -> GroupSpec {
    let gens = honeypie_planes(cfg)[..4]
        .iter()
        .map(|p| Isometry::reflection(p).expect("honeypie normals are unit"))
        .collect();
    GroupSpec::new(gens).expect("reflections are orthogonal")
}

/// Generator `γᵢ` of the configured group.
pub fn gamma(cfg: &HoneypieConfig, i: usize) -> Isometry {
    honeypie_generators(cfg).generators()[i].clone()
}

/// The footprint corner selected by `cfg.corner`, at height 0.
pub fn base_point(cfg: &HoneypieConfig) -> Vec3Q {
    let s = cfg.s();
    let (x, y) = match cfg.corner {
        Corner::C30 => (QSqrt3::ZERO, QSqrt3::ZERO),
        Corner::C60 => (s, QSqrt3::ZERO),
        Corner::C90 => (&QSqrt3::frac(3, 4, 0, 1) * &s, &QSqrt3::frac(0, 1, 1, 4) * &s),
    };
    Vec3Q::new(x, y, QSqrt3::ZERO)
}

/// The points `v, w, x, y` on `H₀` and their copies one period up
/// (subscript 1, `z = 2c`) and one period down (subscript 2, `z = −2c`).
///
/// `v = γ₂γ₃(u)`, `x = γ₁(w)` and `y = γ₁(v)`. The word `γ₃(v)` returns `v`
/// itself whenever `v` lies on `H₃`, so `w` is taken as `γ₂(v)`, the remaining
/// reflection image of `v` through a plane at `u`; it equals `γ₃(u)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedPoints {
    pub u: Vec3Q,
    pub v: Vec3Q,
    pub w: Vec3Q,
    pub x: Vec3Q,
    pub y: Vec3Q,
    pub v1: Vec3Q,
    pub v2: Vec3Q,
    pub w1: Vec3Q,
    pub w2: Vec3Q,
    pub x1: Vec3Q,
    pub x2: Vec3Q,
    pub y1: Vec3Q,
    pub y2: Vec3Q,
}

impl NamedPoints {
    pub fn as_map(&self) -> BTreeMap<&'static str, Vec3Q> {
        [
            ("u", &self.u),
            ("v", &self.v),
            ("w", &self.w),
            ("x", &self.x),
            ("y", &self.y),
            ("v1", &self.v1),
            ("v2", &self.v2),
            ("w1", &self.w1),
            ("w2", &self.w2),
            ("x1", &self.x1),
            ("x2", &self.x2),
            ("y1", &self.y1),
            ("y2", &self.y2),
        ]
        .into_iter()
        .map(|(k, p)| (k, p.clone()))
        .collect()
    }

    /// Name of `p` if it is one of the named points.
    pub fn name_of(&self, p: &Vec3Q) -> Option<&'static str> {
        self.as_map().into_iter().find(|(_, q)| q == p).map(|(k, _)| k)
    }
}

pub fn named_points(cfg: &HoneypieConfig) -> NamedPoints {
    let g = honeypie_generators(cfg);
    let gs = g.generators();
    let u = base_point(cfg);
    let v = gs[2].compose(&gs[3]).apply(&u);
    let w = gs[2].apply(&v);
    let x = gs[1].apply(&w);
    let y = gs[1].apply(&v);
    // γ₄γ₀ is the vertical translation by 2c; γ₀γ₄ its inverse
    let up = gs[4].compose(&gs[0]);
    let down = gs[0].compose(&gs[4]);
    NamedPoints {
        v1: up.apply(&v),
        v2: down.apply(&v),
        w1: up.apply(&w),
        w2: down.apply(&w),
        x1: up.apply(&x),
        x2: down.apply(&x),
        y1: up.apply(&y),
        y2: down.apply(&y),
        u,
        v,
        w,
        x,
        y,
    }
}

/// Outcome of probing one corner for the planar star and its vertex figures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerProbe {
    pub corner: Corner,
    pub stabilizer_order: usize,
    pub star_size: usize,
    pub vertex_figure_classes: Option<usize>,
}

impl CornerProbe {
    /// Four edges at `u` and three vertex-figure classes.
    pub fn matches(&self) -> bool {
        self.star_size == 4 && self.vertex_figure_classes == Some(3)
    }
}

/// Probes every corner with the planar star `star(u, γ₂γ₃(u))`.
pub fn probe_corners(cfg: &HoneypieConfig) -> Result<Vec<CornerProbe>> {
    Corner::ALL
        .iter()
        .map(|&corner| {
            let c = cfg.with_corner(corner);
            let g = honeypie_generators(&c);
            let pts = named_points(&c);
            let stab = crate::group::point_stabilizer(&g, &pts.u)?;
            let star = crate::skeleton::star_with(&stab, &pts.u, &pts.v)?;
            let classes = match crate::facefill::enumerate_vertex_figures(&star, &stab) {
                Ok(figs) => Some(figs.len()),
                Err(Error::DegenerateVertexFigure(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(CornerProbe {
                corner,
                stabilizer_order: stab.len(),
                star_size: star.len(),
                vertex_figure_classes: classes,
            })
        })
        .collect()
}

/// The first corner (in `C30, C90, C60` order) whose planar star has four
/// edges and three vertex-figure classes.
pub fn select_corner(cfg: &HoneypieConfig) -> Result<Corner> {
    probe_corners(cfg)?
        .into_iter()
        .find(CornerProbe::matches)
        .map(|p| p.corner)
        .ok_or_else(|| Error::FigureSelection("no corner yields a four-edge star with three figure classes".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{point_stabilizer, Window};
    use crate::isometry::IsometryKind;

    fn q(an: i64, ad: i64, bn: i64, bd: i64) -> QSqrt3 {
        QSqrt3::frac(an, ad, bn, bd)
    }

    #[test]
    fn gamma0_is_horizontal_mirror() {
        let cfg = HoneypieConfig::default();
        let p = Vec3Q::new(QSqrt3::int(1), QSqrt3::int(2), QSqrt3::int(3));
        assert_eq!(gamma(&cfg, 0).apply(&p), Vec3Q::new(QSqrt3::int(1), QSqrt3::int(2), QSqrt3::int(-3)));
    }

    #[test]
    fn vertical_translation_is_two_c() {
        let cfg = HoneypieConfig::new(Rational::new(3, 2), Corner::C90, Rational::ONE).unwrap();
        let t = gamma(&cfg, 4).compose(&gamma(&cfg, 0));
        assert_eq!(t.classify(), IsometryKind::PureTranslation);
        assert_eq!(t.translation_part(), &Vec3Q::new(QSqrt3::ZERO, QSqrt3::ZERO, QSqrt3::int(3)));
    }

    #[test]
    fn vertical_planes_meet_at_wedge_angles() {
        for corner in Corner::ALL {
            let planes = honeypie_planes(&HoneypieConfig::default().with_corner(corner));
            let cos = |i: usize, j: usize| planes[i].normal.dot(&planes[j].normal).abs();
            let mut got = vec![cos(1, 2), cos(1, 3), cos(2, 3)];
            got.sort_by(|a, b| a.value_cmp(b));
            assert_eq!(got, vec![QSqrt3::ZERO, q(1, 2, 0, 1), q(0, 1, 1, 2)]);
            // the wedge at u is between H₁ and H₂
            let expected = match corner {
                Corner::C30 => q(0, 1, 1, 2),
                Corner::C60 => q(1, 2, 0, 1),
                Corner::C90 => QSqrt3::ZERO,
            };
            assert_eq!(cos(1, 2), expected, "{corner}");
        }
    }

    #[test]
    fn base_point_lies_on_three_planes() {
        for corner in Corner::ALL {
            let cfg = HoneypieConfig::default().with_corner(corner);
            let u = base_point(&cfg);
            let planes = honeypie_planes(&cfg);
            let on: Vec<usize> = (0..5).filter(|&i| planes[i].contains(&u)).collect();
            assert_eq!(on, vec![0, 1, 2], "{corner}");
            let g = honeypie_generators(&cfg);
            for i in 0..3 {
                assert_eq!(g.generators()[i].apply(&u), u);
            }
        }
        assert_eq!(base_point(&HoneypieConfig::default().with_corner(Corner::C30)), Vec3Q::zero());
    }

    #[test]
    fn named_points_for_default_configuration() {
        let n = named_points(&HoneypieConfig::default());
        assert_eq!(n.u, Vec3Q::new(q(3, 4, 0, 1), q(0, 1, 1, 4), QSqrt3::ZERO));
        assert_eq!(n.v, Vec3Q::new(q(3, 2, 0, 1), QSqrt3::ZERO, QSqrt3::ZERO));
        assert_eq!(n.w, Vec3Q::new(q(3, 4, 0, 1), q(0, 1, -1, 4), QSqrt3::ZERO));
        assert_eq!(n.x, Vec3Q::new(QSqrt3::ZERO, q(0, 1, 1, 2), QSqrt3::ZERO));
        assert_eq!(n.y, Vec3Q::new(q(3, 4, 0, 1), q(0, 1, 3, 4), QSqrt3::ZERO));
        for p in [&n.v, &n.w, &n.x, &n.y] {
            assert!(p.z().is_zero());
            assert_eq!((p - &n.u).norm_sq(), q(3, 4, 0, 1));
        }
        let up = Vec3Q::new(QSqrt3::ZERO, QSqrt3::ZERO, QSqrt3::int(2));
        assert_eq!(&n.v1 - &n.v, up);
        assert_eq!(&n.v2 - &n.v, -&up);
        assert_eq!(n.w, gamma(&HoneypieConfig::default(), 3).apply(&n.u));
        assert_eq!(n.name_of(&n.y2), Some("y2"));
    }

    #[test]
    fn stabilizer_orders_at_corners() {
        let cfg = HoneypieConfig::default();
        let order = |corner: Corner| {
            let c = cfg.with_corner(corner);
            point_stabilizer(&honeypie_generators(&c), &base_point(&c)).unwrap().len()
        };
        assert_eq!(order(Corner::C30), 24);
        assert_eq!(order(Corner::C60), 12);
        assert_eq!(order(Corner::C90), 8);
        let interior = Vec3Q::new(q(1, 2, 0, 1), q(0, 1, 1, 12), q(1, 2, 0, 1));
        assert_eq!(point_stabilizer(&honeypie_generators(&cfg), &interior).unwrap().len(), 1);
    }

    #[test]
    fn translation_lattice_has_rank_three() {
        let g = honeypie_generators(&HoneypieConfig::default());
        let l = crate::group::translation_lattice(&g, &Window::from_ints(6, 1).unwrap()).unwrap();
        let vertical = Vec3Q::new(QSqrt3::ZERO, QSqrt3::ZERO, QSqrt3::int(2));
        assert!(l.is_lattice_vector(&vertical));
        assert!(!l.is_lattice_vector(&Vec3Q::new(QSqrt3::ZERO, QSqrt3::ZERO, QSqrt3::ONE)));
    }

    #[test]
    fn corner_parsing() {
        assert_eq!("C90".parse::<Corner>().unwrap(), Corner::C90);
        assert_eq!("60".parse::<Corner>().unwrap(), Corner::C60);
        assert!("c45".parse::<Corner>().is_err());
        assert_eq!(Corner::C30.to_string(), "c30");
    }

    #[test]
    fn reflections_tile_a_neighbourhood_without_overlap() {
        // images of an interior point under distinct short words never coincide
        let cfg = HoneypieConfig::default();
        let g = honeypie_generators(&cfg);
        let e = crate::group::enumerate_elements(&g, &Window::from_ints(3, 1).unwrap());
        let p = Vec3Q::new(q(1, 2, 0, 1), q(0, 1, 1, 12), q(1, 3, 0, 1));
        let mut imgs: Vec<Vec3Q> = e.iter().map(|x| x.apply(&p)).collect();
        let n = imgs.len();
        imgs.sort();
        imgs.dedup();
        assert_eq!(imgs.len(), n);
    }
}
