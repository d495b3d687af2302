use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qknot::ambient::DEFAULT_BUDGET;
use qknot::invariants::DEFAULT_CROSSING_CAP;
use qknot::nodal::DEFAULT_EXTENT;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "qknot",
    version,
    about = "Mosaic quantum knots, invariant observables and knotted nodal sets",
    args_override_self = true,
    propagate_version = true
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct Global {
    /// Output rendering.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Where to write the run manifest (default: <out>.manifest.json when --out is set).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// Rerun from a manifest; flags given alongside override its arguments.
    #[arg(long, global = true, value_name = "MANIFEST")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Worker threads (0 = all cores). Outputs do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Move table JSON (default: the built-in table).
    #[arg(long, global = true)]
    pub moves: Option<PathBuf>,
    /// Largest orbit materialized before giving up.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Largest crossing count accepted by the bracket state sum.
    #[arg(long, global = true, default_value_t = DEFAULT_CROSSING_CAP)]
    pub cap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Knot mosaics: validation, rendering, orbits and Jones polynomials.
    #[command(subcommand)]
    Mosaic(MosaicCmd),
    /// Diagonal observables on mosaic states.
    #[command(subcommand)]
    Observable(ObservableCmd),
    /// Wirtinger presentation of a knot group.
    Wirtinger(KnotInput),
    /// Complex fields on the 3-sphere and their nodal sets.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Schrödinger evolution of sampled fields in a periodic box.
    #[command(subcommand)]
    Evolve(EvolveCmd),
}

/// A mosaic file, a PD file, or `lib:trefoil`, `lib:figure_eight`, `lib:circle[:N]`.
#[derive(Debug, Args, Serialize)]
pub struct KnotInput {
    pub input: String,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MosaicCmd {
    /// Check that every connection point is matched.
    Validate(KnotInput),
    /// Render a mosaic with its crossing count and PD code.
    Show(KnotInput),
    /// Enumerate the ambient-group orbit.
    Orbit {
        #[command(flatten)]
        knot: KnotInput,
        /// List every member.
        #[arg(long)]
        members: bool,
    },
    /// Decide whether two mosaics lie in one orbit.
    SameOrbit { a: String, b: String },
    /// Jones polynomial (or the Kauffman bracket with --bracket).
    Jones {
        #[command(flatten)]
        knot: KnotInput,
        #[arg(long)]
        bracket: bool,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObservableCmd {
    /// Projector onto the orbit of a knot mosaic.
    Chi {
        /// Mosaic whose orbit defines the projector.
        #[arg(long)]
        knot: String,
        /// State JSON, or a mosaic for a single basis ket.
        #[arg(long)]
        state: String,
    },
    /// Observable whose eigenvalue on each orbit is a knot invariant.
    Invariant {
        /// `jones_at:T` (Jones polynomial at t = T), `crossings`, or `const:C`.
        #[arg(long, default_value = "jones_at:-1")]
        invariant: String,
        #[arg(long)]
        state: String,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct FieldArgs {
    /// `unknot`, `milnor:p,q`, `rudolph_F` or `rudolph_G`.
    #[arg(long)]
    pub field: String,
    /// Sphere radius (default 1).
    #[arg(long)]
    pub radius: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct GridArgs {
    /// Lattice nodes per axis.
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    /// Half-width of the sampled cube in chart coordinates.
    #[arg(long, default_value_t = DEFAULT_EXTENT)]
    pub extent: f64,
    #[arg(long, value_enum, default_value_t = PoleArg::Plus)]
    pub pole: PoleArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PoleArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveFormat {
    Json,
    Csv,
    Obj,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldCmd {
    /// Evaluate a field at one point.
    Eval {
        #[command(flatten)]
        field: FieldArgs,
        /// Point of C² as Re z,Im z,Re w,Im w.
        #[arg(long, conflicts_with = "at", required_unless_present = "at")]
        point: Option<String>,
        /// Point in chart coordinates x,y,z (see --pole).
        #[arg(long)]
        at: Option<String>,
        #[arg(long, value_enum, default_value_t = PoleArg::Plus)]
        pole: PoleArg,
    },
    /// Extract the nodal set as closed polylines.
    Extract {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Skip Newton refinement of the vertices.
        #[arg(long)]
        no_refine: bool,
        /// Curve export format; overrides --format.
        #[arg(long, value_enum)]
        export: Option<CurveFormat>,
    },
    /// Extract and compare the knot type with an expected knot.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Mosaic, PD file or library knot.
        #[arg(long)]
        expect: String,
    },
    /// Lattice points on one phase fiber.
    Fiber {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        /// Angular half-width of the fiber band.
        #[arg(long, default_value_t = 0.05)]
        band: f64,
        /// Points with |f| at or below this are left out.
        #[arg(long, default_value_t = 1e-3)]
        nodal_tol: f64,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct EvolveArgs {
    /// `field:<name>`, `gaussian` or `plane-wave:mx,my,mz`.
    #[arg(long, default_value = "gaussian")]
    pub init: String,
    /// Sphere radius of a field initial state.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Gaussian taper width of a field initial state (default side/12).
    #[arg(long)]
    pub envelope: Option<f64>,
    /// Gaussian centre x,y,z.
    #[arg(long, default_value = "0,0,0")]
    pub center: String,
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    /// Gaussian momentum px,py,pz.
    #[arg(long, default_value = "0,0,0")]
    pub momentum: String,
    /// `free`, `harmonic:w` or `harmonic:wx,wy,wz`.
    #[arg(long, default_value = "free")]
    pub hamiltonian: String,
    /// Box side (default: 8 × the bounding radius of a field's nodal set, else 16).
    #[arg(long)]
    pub side: Option<f64>,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    /// Keep every k-th state.
    #[arg(long, default_value_t = 10)]
    pub every: usize,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvolveCmd {
    /// Evolve and report norm conservation.
    Run {
        #[command(flatten)]
        evolve: EvolveArgs,
        /// Directory for binary snapshots.
        #[arg(long)]
        snapshots: Option<PathBuf>,
    },
    /// Evolve (or load snapshots) and track nodal lines.
    Track {
        #[command(flatten)]
        evolve: EvolveArgs,
        /// Read snapshots from this directory instead of evolving.
        #[arg(long)]
        from: Option<PathBuf>,
        /// Write the event log CSV here.
        #[arg(long)]
        events: Option<PathBuf>,
        /// Matching radius in grid spacings.
        #[arg(long, default_value_t = 4.0)]
        match_cells: f64,
        /// Relative amplitude below which components are dropped.
        #[arg(long, default_value_t = 1e-3)]
        amplitude_floor: f64,
    },
}
