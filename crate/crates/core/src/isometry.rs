//! Exact affine isometries `p ↦ Q·p + t` of E³.
//!
//! Composition convention: `a.compose(&b)` is the map `p ↦ a(b(p))`, so the
//! right factor acts first. A word written `γ₂γ₃` therefore means "apply γ₃,
//! then γ₂"; this fixes which concrete point a word like `γ₂γ₃(u)` denotes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Mat3Q, QSqrt3, Vec3Q};

/// An element of E(3) with exact orthogonal part and translation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isometry {
    q: Mat3Q,
    t: Vec3Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsometryKind {
    Identity,
    PureTranslation,
    Other,
}

impl Isometry {
    /// Checks `QᵀQ = I` exactly.
    pub fn new(q: Mat3Q, t: Vec3Q) -> Result<Self> {
        if !q.transpose().mul(&q).is_identity() {
            return Err(Error::Invariant("linear part is not orthogonal".into()));
        }
        Ok(Isometry { q, t })
    }

    pub fn identity() -> Self {
        Isometry { q: Mat3Q::identity(), t: Vec3Q::zero() }
    }

    pub fn translation(t: Vec3Q) -> Self {
        Isometry { q: Mat3Q::identity(), t }
    }

    /// Reflection through the plane `n·p = d`: `p ↦ p − 2(n·p − d)n`.
    pub fn reflection(plane: &PlaneQ) -> Result<Self> {
        if plane.normal.norm_sq() != QSqrt3::ONE {
            return Err(Error::Invariant("reflection plane normal is not a unit vector".into()));
        }
        let n = &plane.normal;
        let two = QSqrt3::int(2);
        let mut q = Mat3Q::identity();
        for i in 0..3 {
            for j in 0..3 {
                q.0[i][j] = &q.0[i][j] - &(&two * &(&n.0[i] * &n.0[j]));
            }
        }
        let t = n.scale(&(&two * &plane.offset));
        Ok(Isometry { q, t })
    }

    pub fn linear(&self) -> &Mat3Q {
        &self.q
    }

    pub fn translation_part(&self) -> &Vec3Q {
        &self.t
    }

    pub fn apply(&self, p: &Vec3Q) -> Vec3Q {
        &self.q.mul_vec(p) + &self.t
    }

    /// Linear part only; maps displacement vectors.
    pub fn apply_vector(&self, v: &Vec3Q) -> Vec3Q {
        self.q.mul_vec(v)
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry { q: self.q.mul(&other.q), t: self.apply(&other.t) }
    }

    pub fn inverse(&self) -> Isometry {
        let qt = self.q.transpose();
        let t = -&qt.mul_vec(&self.t);
        Isometry { q: qt, t }
    }

    pub fn det(&self) -> QSqrt3 {
        self.q.det()
    }

    pub fn is_orthogonal(&self) -> bool {
        self.q.transpose().mul(&self.q).is_identity()
    }

    pub fn is_identity(&self) -> bool {
        self.q.is_identity() && self.t.is_zero()
    }

    pub fn classify(&self) -> IsometryKind {
        match (self.q.is_identity(), self.t.is_zero()) {
            (true, true) => IsometryKind::Identity,
            (true, false) => IsometryKind::PureTranslation,
            _ => IsometryKind::Other,
        }
    }

    /// The 12 exact entries, matrix row-major then translation.
    pub fn entries(&self) -> [QSqrt3; 12] {
        let m = &self.q.0;
        let t = &self.t.0;
        [
            m[0][0].clone(), m[0][1].clone(), m[0][2].clone(),
            m[1][0].clone(), m[1][1].clone(), m[1][2].clone(),
            m[2][0].clone(), m[2][1].clone(), m[2][2].clone(),
            t[0].clone(), t[1].clone(), t[2].clone(),
        ]
    }

    pub fn from_entries(e: [QSqrt3; 12]) -> Result<Self> {
        let [a, b, c, d, e_, f, g, h, i, x, y, z] = e;
        Isometry::new(Mat3Q([[a, b, c], [d, e_, f], [g, h, i]]), Vec3Q::new(x, y, z))
    }
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Isometry(Q={:?}, t={})", self.q.0, self.t)
    }
}

impl Serialize for Isometry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Isometry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let e = <[QSqrt3; 12]>::deserialize(d)?;
        Isometry::from_entries(e).map_err(serde::de::Error::custom)
    }
}

/// The plane `normal · p = offset`, with `|normal| = 1` exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlaneQ {
    pub normal: Vec3Q,
    pub offset: QSqrt3,
}

impl PlaneQ {
    pub fn new(normal: Vec3Q, offset: QSqrt3) -> Result<Self> {
        if normal.norm_sq() != QSqrt3::ONE {
            return Err(Error::Invariant(format!("plane normal {normal} is not a unit vector")));
        }
        Ok(PlaneQ { normal, offset })
    }

    pub fn contains(&self, p: &Vec3Q) -> bool {
        self.normal.dot(p) == self.offset
    }
}
