//! `ftpoly`: command-line front end for the construction and verification
//! pipeline.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use ftpoly_core::export::{export_mesh, Format as MeshFormat, SceneMetadata, DEFAULT_PRECISION};
use ftpoly_core::facefill::{
    angle_classes_with, cyclic_classes, enumerate_vertex_figures, s1_construction, s1_figure, select_symmetry_group,
    AngleClass, Construction, FaceFilling,
};
use ftpoly_core::fixtures::Fixture;
use ftpoly_core::group::{lattice_class_partition, orbit_points, point_stabilizer, translation_lattice};
use ftpoly_core::honeypie::{base_point, honeypie_generators, named_points, NamedPoints};
use ftpoly_core::skeleton::{star_endpoints, star_with};
use ftpoly_core::verify::{symmetry_report, verify_axioms, SymmetryReport};
use ftpoly_core::{Corner, GroupSpec, HoneypieConfig, Polyhedron, QSqrt3, Rational, Vec3Q, Window};

const DEFAULT_RADIUS: i64 = 8;
const DEFAULT_MARGIN: i64 = 2;

#[derive(Parser, Debug)]
#[command(name = "ftpoly", version, about = "Exact construction and verification of fully transitive polyhedra")]
struct Cli {
    /// Corner of the slice carrying the base point.
    #[arg(long, global = true)]
    corner: Option<Corner>,
    /// Height c of the slice.
    #[arg(long, global = true)]
    height: Option<Rational>,
    /// Scale of the triangular footprint.
    #[arg(long, global = true)]
    scale: Option<Rational>,
    /// Window radius.
    #[arg(long, global = true)]
    radius: Option<Rational>,
    /// Window margin; claims are made inside radius − margin.
    #[arg(long, global = true)]
    margin: Option<Rational>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Significant digits in decimal renderings.
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Output file; relative paths resolve against FTPOLY_OUTPUT_DIR when set.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, env = "FTPOLY_OUTPUT_DIR", hide_env_values = true, global = true)]
    output_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orbit of a point inside the window.
    Orbit {
        #[arg(long, default_value = "u")]
        point: String,
        /// Keep only points at this height.
        #[arg(long)]
        layer: Option<QSqrt3>,
    },
    /// Stabilizer of a point.
    Stabilizer {
        #[arg(long, default_value = "u")]
        point: String,
    },
    /// Lattice classes of the orbit of u.
    LatticeClasses {
        /// Use the whole orbit instead of the layer z = 0.
        #[arg(long)]
        all_layers: bool,
    },
    /// Star of the edge [u n].
    Star {
        #[arg(long, default_value = "v")]
        neighbor: String,
    },
    /// Vertex figures of the star of [u n].
    VertexFigures {
        #[arg(long, default_value = "v")]
        neighbor: String,
    },
    /// Trace one face of the spiralhedron.
    TraceFace {
        /// Angle class to start from; 0 is α.
        #[arg(long, default_value_t = 0)]
        class: usize,
    },
    /// Fill faces for a chosen star and vertex figure.
    Build {
        #[arg(long, default_value = "v")]
        neighbor: String,
        /// Index into the list printed by `vertex-figures`.
        #[arg(long, default_value_t = 0)]
        figure: usize,
    },
    /// Build the spiralhedron.
    S1,
    /// Check the polyhedron axioms and transitivity.
    Verify {
        #[arg(long)]
        fixture: Option<Fixture>,
    },
    /// Export a mesh or scene.
    Export {
        #[arg(long)]
        fixture: Option<Fixture>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
    Off,
    Obj,
}

impl OutputFormat {
    fn mesh(self) -> Option<MeshFormat> {
        match self {
            OutputFormat::Text => None,
            OutputFormat::Json => Some(MeshFormat::Json),
            OutputFormat::Off => Some(MeshFormat::Off),
            OutputFormat::Obj => Some(MeshFormat::Obj),
        }
    }
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    height: Option<Rational>,
    corner: Option<Corner>,
    scale: Option<Rational>,
    radius: Option<Rational>,
    margin: Option<Rational>,
    precision: Option<usize>,
}

enum Failure {
    Usage(String),
    Domain(anyhow::Error),
}

impl From<ftpoly_core::Error> for Failure {
    fn from(e: ftpoly_core::Error) -> Self {
        Failure::Domain(e.into())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

struct Settings {
    cfg: HoneypieConfig,
    window: Window,
    format: OutputFormat,
    precision: usize,
    output: Option<PathBuf>,
}

impl Settings {
    fn from_cli(cli: &Cli) -> Outcome<Self> {
        let file: FileConfig = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| Failure::Usage(format!("invalid config {}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let defaults = HoneypieConfig::default();
        let cfg = HoneypieConfig::new(
            cli.height.clone().or(file.height).unwrap_or(defaults.c),
            cli.corner.or(file.corner).unwrap_or(defaults.corner),
            cli.scale.clone().or(file.scale).unwrap_or(defaults.scale),
        )
        .map_err(|e| Failure::Usage(e.to_string()))?;
        let radius = cli.radius.clone().or(file.radius).unwrap_or(Rational::integer(DEFAULT_RADIUS));
        let margin = cli.margin.clone().or(file.margin).unwrap_or(Rational::integer(DEFAULT_MARGIN));
        let window = Window::new(radius, margin).map_err(|e| Failure::Usage(e.to_string()))?;
        let output = cli.output.as_ref().map(|p| match &cli.output_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.clone(),
        });
        Ok(Settings {
            cfg,
            window,
            format: cli.format.unwrap_or(OutputFormat::Text),
            precision: cli.precision.or(file.precision).unwrap_or(DEFAULT_PRECISION),
            output,
        })
    }

    fn emit(&self, bytes: &[u8]) -> Outcome<()> {
        match &self.output {
            Some(path) => write_file(path, bytes).map_err(Failure::Domain),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(bytes).and_then(|_| out.flush()).context("writing to standard output")?;
                Ok(())
            }
        }
    }

    /// Text or JSON for analysis commands; mesh formats are a usage error.
    fn report(&self, text: String, value: serde_json::Value) -> Outcome<()> {
        match self.format {
            OutputFormat::Text => self.emit(text.as_bytes()),
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&value).expect("reports serialise");
                s.push('\n');
                self.emit(s.as_bytes())
            }
            other => Err(Failure::Usage(format!("format {other:?} applies to mesh output only").to_lowercase())),
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn parse_point(s: &str, names: &NamedPoints) -> Outcome<Vec3Q> {
    if let Some(p) = names.as_map().get(s) {
        return Ok(p.clone());
    }
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Failure::Usage(format!("{s:?} is neither a named point nor x,y,z")));
    }
    let coord = |t: &str| t.trim().parse::<QSqrt3>().map_err(|e| Failure::Usage(e.to_string()));
    Ok(Vec3Q::new(coord(parts[0])?, coord(parts[1])?, coord(parts[2])?))
}

fn label(p: &Vec3Q, names: &NamedPoints) -> String {
    match names.name_of(p) {
        Some(n) => format!("{n} {p}"),
        None => p.to_string(),
    }
}

fn class_json(c: &AngleClass) -> serde_json::Value {
    json!({
        "label": c.label,
        "positions": c.positions,
        "ends": c.ends,
        "cos_sq": c.cos_sq,
        "cos": c.cos,
        "degrees": c.cos_sq.to_f64().sqrt().copysign(c.dot.to_f64()).acos().to_degrees(),
    })
}

fn class_line(c: &AngleClass, names: &NamedPoints) -> String {
    let deg = c.cos_sq.to_f64().sqrt().copysign(c.dot.to_f64()).acos().to_degrees();
    format!(
        "  {:<6} positions {:?}  angle {} u {}  cos^2 = {}  ({deg:.4} deg)\n",
        c.label,
        c.positions,
        names.name_of(&c.ends[0]).map_or(c.ends[0].to_string(), String::from),
        names.name_of(&c.ends[1]).map_or(c.ends[1].to_string(), String::from),
        c.cos_sq
    )
}

fn construction_output(s: &Settings, c: &Construction, name: &str) -> Outcome<()> {
    let names = named_points(&s.cfg);
    if let Some(format) = s.format.mesh() {
        let meta = SceneMetadata {
            name: name.to_string(),
            config: Some(s.cfg.clone()),
            window: Some(s.window.clone()),
            ..Default::default()
        };
        return s.emit(&export_mesh(&c.polyhedron, format, s.precision, &meta)?);
    }
    let p = &c.polyhedron;
    let mut text = format!("{name}: window radius {}, margin {}\n", s.window.radius(), s.window.margin());
    let _ = writeln!(text, "symmetry group character mask {:#b}", c.group.character().0);
    let _ = writeln!(text, "edge [{}] -- [{}]", label(&c.base, &names), label(&c.neighbor, &names));
    let cycle: Vec<String> = c.figure.cycle().iter().map(|q| label(q, &names)).collect();
    let _ = writeln!(text, "vertex figure: {}", cycle.join(", "));
    text += "angle classes:\n";
    for k in &c.classes {
        text += &class_line(k, &names);
    }
    let _ = writeln!(
        text,
        "{} vertices, {} edges, {} faces ({} closed, {} truncated)",
        p.vertices().len(),
        p.edges().len(),
        p.faces().len(),
        p.closed_face_count(),
        p.faces().len() - p.closed_face_count()
    );
    s.emit(text.as_bytes())
}

fn figure_for(s: &Settings, neighbor: &str, index: usize) -> Outcome<(GroupSpec, Vec3Q, Vec3Q, ftpoly_core::VertexFigure)> {
    let names = named_points(&s.cfg);
    let g = honeypie_generators(&s.cfg);
    let u = base_point(&s.cfg);
    let n = parse_point(neighbor, &names)?;
    let stab = point_stabilizer(&g, &u)?;
    let figs = enumerate_vertex_figures(&star_with(&stab, &u, &n)?, &stab)?;
    let count = figs.len();
    let vf = figs
        .into_iter()
        .nth(index)
        .ok_or_else(|| Failure::Usage(format!("figure index {index} out of range: {count} figures")))?;
    Ok((g, u, n, vf))
}

fn verify_output(s: &Settings, name: &str, group: &GroupSpec, p: &Polyhedron) -> Outcome<()> {
    let axioms = verify_axioms(p);
    let sym: Option<SymmetryReport> = if axioms.all_pass() { Some(symmetry_report(group, p)?) } else { None };
    let mut text = format!("{name}\n{}", axioms.render());
    if let Some(r) = &sym {
        text += &r.transitivity.render();
        let _ = writeln!(text, "flag orbits: {} ({} flags)", r.flags.count, r.flags.flags);
    }
    let value = json!({ "target": name, "axioms": axioms, "symmetry": sym });
    s.report(text, value)?;
    if !axioms.all_pass() {
        let failed: Vec<String> = axioms
            .checks()
            .iter()
            .enumerate()
            .filter(|(_, (_, c))| !c.pass)
            .map(|(i, (n, c))| match &c.witness {
                Some(w) => format!("axiom ({}) {n} fails: {w}", i + 1),
                None => format!("axiom ({}) {n} fails", i + 1),
            })
            .collect();
        return Err(Failure::Domain(anyhow::anyhow!(failed.join("; "))));
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome<()> {
    let s = Settings::from_cli(&cli)?;
    let names = named_points(&s.cfg);
    let g = honeypie_generators(&s.cfg);
    let u = base_point(&s.cfg);
    match cli.command {
        Command::Orbit { point, layer } => {
            let p = parse_point(&point, &names)?;
            let mut pts = orbit_points(&g, &p, &s.window);
            if let Some(z) = &layer {
                pts.retain(|q| q.z() == z);
            }
            let mut text = format!("orbit of {} in window radius {}: {} points\n", p, s.window.radius(), pts.len());
            for q in &pts {
                let _ = writeln!(text, "  {}", label(q, &names));
            }
            s.report(text, json!({ "point": p, "count": pts.len(), "points": pts }))
        }
        Command::Stabilizer { point } => {
            let p = parse_point(&point, &names)?;
            let stab = point_stabilizer(&g, &p)?;
            let mut text = format!("stabilizer of {p}: order {}\n", stab.len());
            for e in &stab {
                let _ = writeln!(text, "  det {}  fixes {}", e.det(), e.translation_part());
            }
            s.report(text, json!({ "point": p, "order": stab.len(), "elements": stab }))
        }
        Command::LatticeClasses { all_layers } => {
            let lattice = translation_lattice(&g, &s.window)?;
            let mut pts = orbit_points(&g, &u, &s.window);
            if !all_layers {
                pts.retain(|q| q.z().is_zero());
            }
            let classes = lattice_class_partition(&pts, &lattice);
            let mut text = format!("{} lattice classes among {} orbit points\n", classes.len(), pts.len());
            for c in &classes {
                let _ = writeln!(text, "  {} ({} points)", label(&c.representative, &names), c.members.len());
            }
            let value = json!({
                "count": classes.len(),
                "lattice": lattice.vectors(),
                "classes": classes.iter().map(|c| json!({"representative": c.representative, "size": c.members.len()})).collect::<Vec<_>>(),
            });
            s.report(text, value)
        }
        Command::Star { neighbor } => {
            let n = parse_point(&neighbor, &names)?;
            let stab = point_stabilizer(&g, &u)?;
            let star = star_with(&stab, &u, &n)?;
            let ends = star_endpoints(&star, &u)?;
            let mut text = format!("star of [u {n}]: {} edges\n", star.len());
            for q in &ends {
                let _ = writeln!(text, "  u -- {}", label(q, &names));
            }
            s.report(text, json!({ "center": u, "size": star.len(), "endpoints": ends }))
        }
        Command::VertexFigures { neighbor } => {
            let n = parse_point(&neighbor, &names)?;
            let stab = point_stabilizer(&g, &u)?;
            let star = star_with(&stab, &u, &n)?;
            let cyclic = cyclic_classes(&star, &stab)?;
            let figs = enumerate_vertex_figures(&star, &stab)?;
            let mut text = format!(
                "star of {} edges: {} cyclic classes, {} alternating vertex figures\n",
                star.len(),
                cyclic.len(),
                figs.len()
            );
            let mut list = Vec::new();
            for (i, vf) in figs.iter().enumerate() {
                let classes = angle_classes_with(vf, &stab);
                let cycle: Vec<String> = vf.cycle().iter().map(|q| label(q, &names)).collect();
                let _ = writeln!(text, "[{i}] {}", cycle.join(", "));
                for k in &classes {
                    text += &class_line(k, &names);
                }
                list.push(json!({ "cycle": vf.cycle(), "classes": classes.iter().map(class_json).collect::<Vec<_>>() }));
            }
            s.report(text, json!({ "star": star.len(), "cyclic_classes": cyclic.len(), "figures": list }))
        }
        Command::TraceFace { class } => {
            let sel = s1_figure(&s.cfg)?;
            let group = select_symmetry_group(&g, &sel.figure)?;
            let filling = FaceFilling::new(&group, &sel.figure, &s.window)?;
            let k = sel
                .classes
                .get(class)
                .ok_or_else(|| Failure::Usage(format!("angle class {class} out of range")))?;
            let face = filling.trace(&k.ends[0], sel.figure.center(), &k.ends[1])?;
            let profile = filling.profile(&face)?;
            let mut text = format!(
                "face through {} angle: {} vertices, {}\n",
                k.label,
                face.vertices.len(),
                if face.closed { "closed" } else { "infinite (truncated at the window)" }
            );
            let _ = writeln!(text, "strictly monotone in z: {}", profile.strictly_monotone());
            if let Some(d) = &profile.edge_drop {
                let _ = writeln!(text, "|dz| per edge: {d}");
            }
            if let (Some(k), Some(d)) = (profile.period_edges, profile.period_drop()) {
                let _ = writeln!(text, "period: {k} edges, |dz| {d}");
            }
            let _ = writeln!(text, "corner types alternate: {}", profile.alternates);
            for q in &face.vertices {
                let _ = writeln!(text, "  {}", label(q, &names));
            }
            s.report(text, json!({ "face": face, "profile": profile }))
        }
        Command::Build { neighbor, figure } => {
            let (g, u, n, vf) = figure_for(&s, &neighbor, figure)?;
            let c = ftpoly_core::facefill::build_construction(&g, &u, &n, &vf, &s.window)?;
            construction_output(&s, &c, &format!("figure {figure} of star [u {neighbor}]"))
        }
        Command::S1 => {
            let c = s1_construction(&s.cfg, &s.window)?;
            construction_output(&s, &c, "spiralhedron S1")
        }
        Command::Verify { fixture } => match fixture {
            Some(f) => verify_output(&s, f.name(), &f.group(), &f.polyhedron()),
            None => {
                let c = s1_construction(&s.cfg, &s.window)?;
                verify_output(&s, "spiralhedron S1", &c.group, &c.polyhedron)
            }
        },
        Command::Export { fixture } => {
            let format = s.format.mesh().unwrap_or(MeshFormat::Off);
            let (name, p, meta) = match fixture {
                Some(f) => (f.name().to_string(), f.polyhedron(), None),
                None => {
                    let c = s1_construction(&s.cfg, &s.window)?;
                    ("spiralhedron S1".to_string(), c.polyhedron, Some(s.cfg.clone()))
                }
            };
            let meta = SceneMetadata { name, config: meta, window: p.window().cloned(), ..Default::default() };
            s.emit(&export_mesh(&p, format, s.precision, &meta)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
