//! `dihedral`: analyse, build, partition and sweep tetrahedra.
//!
//! Exit codes: 0 success, 1 a certified claim failed or output could not be
//! written, 2 parse error, 3 geometric precondition failure, 4 numeric
//! non-convergence.

macro_rules! out {
    ($($arg:tt)*) => {
        $crate::emit(format_args!($($arg)*))
    };
}

mod commands;
mod format;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dihedral_core::io::DocumentError;
use dihedral_core::{Error, ErrorCategory, Tolerance};

#[derive(Parser, Debug)]
#[command(
    name = "dihedral",
    version,
    about = "Dihedral angle sums of path and 4-ball tetrahedra"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Relative tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_rel: f64,
    /// Absolute tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol_abs: f64,
    /// Print angles in radians instead of degrees.
    #[arg(long, global = true)]
    pub radians: bool,
    /// Seed for randomised commands.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

impl GlobalOpts {
    pub fn tolerance(&self) -> Result<Tolerance, CliError> {
        Tolerance::new(self.tol_rel, self.tol_abs, Tolerance::default().angle_abs)
            .map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Report measurements and classes of a tetrahedron document (JSON).
    Analyze {
        /// Input document; `-` reads standard input.
        input: PathBuf,
    },
    /// Construct a 4-ball tetrahedron.
    Build {
        #[command(subcommand)]
        mode: BuildMode,
    },
    /// Partition a tetrahedron into path tetrahedra and export the mesh.
    Partition {
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// OFF mesh output.
        #[arg(long)]
        out: PathBuf,
        /// Optional OBJ boundary surface output.
        #[arg(long)]
        obj: Option<PathBuf>,
        /// Refinement depth for red8.
        #[arg(long, default_value_t = 1)]
        levels: u32,
    },
    /// Evaluate the dihedral sum over a family and check its bounds.
    Sweep {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Lower end of each parameter axis.
        #[arg(long)]
        lo: Option<f64>,
        /// Upper end of each parameter axis.
        #[arg(long)]
        hi: Option<f64>,
        /// Points per axis, or number of random samples.
        #[arg(long, short = 'n')]
        n: Option<usize>,
        /// Log-spaced axis.
        #[arg(long)]
        log: bool,
        /// CSV output.
        #[arg(long)]
        out: PathBuf,
    },
    /// Maximise the opposite-normal sum k over spherical triangles.
    CertifyKmax {
        #[arg(long, default_value_t = 40)]
        resolution: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum BuildMode {
    /// Apex over a triangle with apex tangent length l4.
    FromFace {
        #[arg(long, value_parser = parse_point)]
        p1: [f64; 3],
        #[arg(long, value_parser = parse_point)]
        p2: [f64; 3],
        #[arg(long, value_parser = parse_point)]
        p3: [f64; 3],
        #[arg(long)]
        l4: f64,
        /// Put the apex on the other side of the face.
        #[arg(long)]
        mirror: bool,
        #[command(flatten)]
        output: BuildOutput,
    },
    /// Tetrahedron inscribed in a trihedral cone with apex at the origin.
    FromCone {
        #[arg(long, value_parser = parse_point)]
        u1: [f64; 3],
        #[arg(long, value_parser = parse_point)]
        u2: [f64; 3],
        #[arg(long, value_parser = parse_point)]
        u3: [f64; 3],
        #[command(flatten)]
        output: BuildOutput,
    },
}

#[derive(Args, Debug)]
pub struct BuildOutput {
    /// Re-run the five 4-ball checks on the result.
    #[arg(long)]
    pub check: bool,
    /// Write the tetrahedron document here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum KindArg {
    Fourball24,
    Red8,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
#[value(rename_all = "snake_case")]
pub enum FamilyArg {
    PathDiag,
    CubeCorner,
    EqPyramid,
    EquifacialBox,
    RandomFourball,
}

fn parse_point(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x, y, z] = parts[..] else {
        return Err(format!("expected x,y,z, got {s:?}"));
    };
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("bad number {t:?}"));
    Ok([num(x)?, num(y)?, num(z)?])
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Document(DocumentError),
    Geometry(Error),
    Io(std::io::Error),
    ClaimFailed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Geometry(e)
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        match e {
            DocumentError::Geometry(g) => CliError::Geometry(g),
            other => CliError::Document(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Document(_) => 2,
            CliError::Geometry(e) => match e.category() {
                ErrorCategory::Precondition => 3,
                ErrorCategory::NonConvergence => 4,
            },
            CliError::Io(_) | CliError::ClaimFailed(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Document(e) => e.to_string(),
            CliError::Geometry(e) => e.to_string(),
            CliError::Io(e) => format!("i/o error: {e}"),
            CliError::ClaimFailed(m) => m.clone(),
        }
    }
}

/// Write one line to stdout. A closed pipe ends the process quietly.
pub fn emit(args: std::fmt::Arguments) {
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_fmt(args).and_then(|_| stdout.write_all(b"\n")) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: i/o error: {e}");
        std::process::exit(1);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
