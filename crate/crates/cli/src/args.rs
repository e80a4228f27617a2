use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "znpf", version, about = "Discretely holomorphic parafermions on Z_N lattice models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Plain `key=value` file supplying defaults for any flag; flags on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Tolerance for identity checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    /// Read every angle in degrees.
    #[arg(long, global = true)]
    pub deg: bool,

    /// Enumeration workers; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical weights x_k(α).
    Weights {
        #[arg(long)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Face residuals of the parafermion contour sum on the reference rhombus.
    Verify {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = std::f64::consts::FRAC_PI_2)]
        alpha: f64,
        /// Free couplings x_1..x_⌊N/2⌋; defaults to the critical weights.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// Check the antiholomorphic contour sum instead.
        #[arg(long)]
        anti: bool,
    },
    /// Solve the contour condition for the couplings.
    Solve {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        alpha: f64,
        /// Skip the companion (π−α) face.
        #[arg(long)]
        single: bool,
    },
    /// Star-triangle relation at critical weights.
    StarTriangle {
        #[arg(long)]
        n: i64,
        #[arg(long, value_delimiter = ',', num_args = 1)]
        alphas: Vec<f64>,
        /// Perturb x_1 of the first star weight by this amount.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        perturb: f64,
    },
    /// Build or load a covering lattice.
    Lattice {
        #[arg(value_enum)]
        action: LatticeAction,
        #[command(flatten)]
        shape: Shape,
        /// Lattice file for `load`.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Assign critical weights for this N.
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Exact enumeration checks on a saved lattice.
    Enumerate {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long, value_enum, default_value_t = Check::FaceSum)]
        check: Check,
        /// Weights modulus when the file carries no weights.
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, default_value_t = 1)]
        m: i64,
        /// Face to check; defaults to every interior face.
        #[arg(long)]
        face: Option<usize>,
        /// Dual vertex anchoring the strings of a path-independence check.
        #[arg(long)]
        anchor: Option<usize>,
        #[arg(long, default_value_t = 10_000_000)]
        cap: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LatticeAction {
    Build,
    Load,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LatticeType {
    Square,
    Tri,
    Hex,
    Multigrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    FaceSum,
    PathIndependence,
    Partition,
}

#[derive(Debug, Args)]
pub struct Shape {
    #[arg(long = "type", value_enum, default_value_t = LatticeType::Square)]
    pub kind: LatticeType,
    #[arg(long, default_value_t = 3)]
    pub rows: usize,
    #[arg(long, default_value_t = 3)]
    pub cols: usize,
    #[arg(long, default_value_t = 2)]
    pub size: usize,
    /// Rhombus angle (square) or first triangle angle (tri, hex).
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    pub alpha: f64,
    /// Second triangle angle (tri, hex).
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_3)]
    pub alpha2: f64,
    /// Number of line families (multigrid).
    #[arg(long, default_value_t = 5)]
    pub families: usize,
    /// Lines per family on each side of the origin (multigrid).
    #[arg(long, default_value_t = 1)]
    pub extent: u32,
    /// Explicit family angles (multigrid); overrides `--families`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub angles: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub offsets: Option<Vec<f64>>,
}
