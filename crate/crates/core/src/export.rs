//! Mesh and scene export: OFF, OBJ and a JSON scene carrying exact coordinates.
//!
//! OFF and OBJ get decimal renderings only. A truncated face is written as
//! an open polyline: in OBJ as an `l` record, in OFF as an ordinary face
//! record whose vertex list is the open path, on the line after a `# open`
//! comment.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{QSqrt3, Vec3Q};
use crate::group::Window;
use crate::honeypie::HoneypieConfig;
use crate::polyhedron::{Face, Polyhedron};
use crate::skeleton::Edge;

pub const DEFAULT_PRECISION: usize = 12;
pub const SCENE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Off,
    Obj,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Off => "off",
            Format::Obj => "obj",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "off" => Ok(Format::Off),
            "obj" => Ok(Format::Obj),
            "json" => Ok(Format::Json),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.extension())
    }
}

/// Descriptive data carried alongside the geometry.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SceneMetadata {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<HoneypieConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    /// Vertex, edge and face orbit counts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbits: Option<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag_orbits: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneVertex {
    pub exact: Vec3Q,
    pub approx: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SceneFace {
    pub vertices: Vec<usize>,
    pub closed: bool,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneExport {
    pub version: u32,
    pub metadata: SceneMetadata,
    pub vertices: Vec<SceneVertex>,
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<SceneFace>,
}

impl SceneExport {
    pub fn new(p: &Polyhedron, metadata: SceneMetadata, precision: usize) -> Self {
        let vertices = p
            .vertices()
            .iter()
            .map(|v| SceneVertex {
                exact: v.clone(),
                approx: v.0.clone().map(|c| decimal(&c, precision).parse().expect("rendered decimals parse")),
            })
            .collect();
        let faces = p
            .faces()
            .iter()
            .map(|f| SceneFace { vertices: f.vertices.clone(), closed: f.closed, truncated: f.truncated() })
            .collect();
        SceneExport { version: SCENE_VERSION, metadata, vertices, edges: p.edges().to_vec(), faces }
    }

    /// Rebuilds the exact polyhedron, with the window from the metadata.
    pub fn to_polyhedron(&self) -> Result<Polyhedron> {
        let n = self.vertices.len();
        let point = |i: usize| {
            self.vertices
                .get(i)
                .map(|v| v.exact.clone())
                .ok_or_else(|| Error::Invariant(format!("vertex index {i} out of range 0..{n}")))
        };
        let edges = self
            .edges
            .iter()
            .map(|&[a, b]| Edge::new(point(a)?, point(b)?))
            .collect::<Result<Vec<_>>>()?;
        let faces = self
            .faces
            .iter()
            .map(|f| {
                let vertices = f.vertices.iter().map(|&i| point(i)).collect::<Result<Vec<_>>>()?;
                Ok(Face { vertices, closed: f.closed, truncated: f.truncated })
            })
            .collect::<Result<Vec<_>>>()?;
        let vertices = self.vertices.iter().map(|v| v.exact.clone()).collect();
        Polyhedron::new(vertices, edges, faces, self.metadata.window.clone())
    }
}

/// Decimal rendering with `digits` significant digits, trailing zeros removed.
pub fn decimal(x: &QSqrt3, digits: usize) -> String {
    let v = x.to_f64();
    if v == 0.0 || !v.is_finite() {
        return "0".to_string();
    }
    let digits = digits.max(1) as i32;
    let exponent = v.abs().log10().floor() as i32;
    let places = (digits - 1 - exponent).max(0) as usize;
    let mut s = format!("{v:.places$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

fn point_line(prefix: &str, v: &Vec3Q, precision: usize) -> String {
    let [x, y, z] = &v.0;
    format!("{prefix}{} {} {}\n", decimal(x, precision), decimal(y, precision), decimal(z, precision))
}

fn off(p: &Polyhedron, meta: &SceneMetadata, precision: usize) -> String {
    let mut out = String::from("OFF\n");
    if !meta.name.is_empty() {
        let _ = writeln!(out, "# {}", meta.name);
    }
    let _ = writeln!(out, "{} {} {}", p.vertices().len(), p.faces().len(), p.edges().len());
    for v in p.vertices() {
        out += &point_line("", v, precision);
    }
    for f in p.faces() {
        if f.truncated() {
            out += "# open\n";
        }
        let _ = write!(out, "{}", f.vertices.len());
        for i in &f.vertices {
            let _ = write!(out, " {i}");
        }
        out += "\n";
    }
    out
}

fn obj(p: &Polyhedron, meta: &SceneMetadata, precision: usize) -> String {
    let mut out = String::new();
    if !meta.name.is_empty() {
        let _ = writeln!(out, "# {}", meta.name);
        let _ = writeln!(out, "o {}", meta.name.replace(char::is_whitespace, "_"));
    }
    for v in p.vertices() {
        out += &point_line("v ", v, precision);
    }
    for f in p.faces() {
        out += if f.truncated() { "l" } else { "f" };
        for i in &f.vertices {
            let _ = write!(out, " {}", i + 1);
        }
        out += "\n";
    }
    out
}

/// Serialises `p`; output is byte-identical for identical inputs.
pub fn export_mesh(p: &Polyhedron, format: Format, precision: usize, meta: &SceneMetadata) -> Result<Vec<u8>> {
    if p.vertices().is_empty() {
        return Err(Error::Invariant("nothing to export: the polyhedron is empty".into()));
    }
    Ok(match format {
        Format::Off => off(p, meta, precision).into_bytes(),
        Format::Obj => obj(p, meta, precision).into_bytes(),
        Format::Json => {
            let scene = SceneExport::new(p, meta.clone(), precision);
            let mut s = serde_json::to_string_pretty(&scene).expect("scene serialises");
            s.push('\n');
            s.into_bytes()
        }
    })
}

/// Reads a JSON scene back into an exact polyhedron.
pub fn import_json(bytes: &[u8]) -> Result<(Polyhedron, SceneMetadata)> {
    let scene: SceneExport = serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("scene: {e}")))?;
    let p = scene.to_polyhedron()?;
    Ok((p, scene.metadata))
}
