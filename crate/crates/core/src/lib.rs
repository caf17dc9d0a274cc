//! Exact construction and verification of fully transitive polyhedra
//! generated by crystallographic reflection groups.
//!
//! The pipeline runs in three stages over a discrete group Γ of isometries:
//! a vertex set is the orbit Γ(u) of a base point, an edge set is the orbit of
//! one edge `[u v]`, and a face set is the orbit of one polygon traced through
//! the edge graph under a chosen vertex figure. All geometry is exact over
//! Q(√3); infinite periodic structures are handled inside a bounded [`Window`].
//!
//! The [`honeypie`] module builds the concrete group generated by reflections
//! in the faces of a (2,3,6)-triangular prism, and [`facefill::build_s1`] runs
//! the full pipeline for the hexagonal zig-zag spiralhedron.

pub mod error;
pub mod exact;
pub mod isometry;
pub mod group;
pub mod honeypie;
pub mod skeleton;
pub mod polyhedron;
pub mod facefill;
pub mod verify;
pub mod fixtures;
pub mod export;

pub use error::{Error, Result};
pub use exact::{Mat3Q, QSqrt3, Rational, Vec3Q};
pub use group::{
    enumerate_elements, lattice_class_partition, orbit_points, point_stabilizer, translation_lattice,
    Character, ElementSet, GroupSpec, LatticeBasis, LatticeClass, Window,
};
pub use isometry::{Isometry, IsometryKind, PlaneQ};
pub use honeypie::{Corner, HoneypieConfig};
pub use polyhedron::{Face, Flag, Polyhedron};
pub use skeleton::{Edge, SkeletonGraph};
pub use facefill::{build_s1, VertexFigure};
pub use verify::{flag_orbits, transitivity_report, verify_axioms, AxiomReport, TransitivityReport};
pub use export::{export_mesh, import_json, Format, SceneExport, SceneMetadata};
