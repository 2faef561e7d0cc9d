//! `nonneg3`: command-line front end to the boundary ideal and nested
//! polygon computations. Every command writes a JSON report.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nonneg3_core::groebner::Budget;
use serde_json::json;

use report::Report;

pub const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "nonneg3", version, about = "Exact checks for matrices of nonnegative rank three")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, env = "NONNEG3_THREADS")]
    pub threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_pairs: u64,
    #[arg(long, global = true, default_value_t = 1800.0)]
    pub max_seconds: f64,
    /// Lift the S-pair and time limits.
    #[arg(long, global = true)]
    pub unbounded: bool,
    /// Add wall-clock timing to the report (makes it non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

impl Global {
    pub fn budget(&self) -> Budget {
        if self.unbounded {
            Budget::UNBOUNDED
        } else {
            Budget { max_pairs: self.max_pairs, max_seconds: self.max_seconds }
        }
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Emit the quartic and sextic generators.
    Gens {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Generator file, one polynomial per line.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Buchberger's criterion and reduced-basis equality.
    GbCheck {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Check this generator file instead of the computed generators.
        #[arg(long)]
        gens: Option<PathBuf>,
    },
    /// Ideal membership in the boundary component.
    Member {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
        expr: Option<String>,
        /// Polynomial file, text or JSON.
        #[arg(long)]
        poly: Option<PathBuf>,
    },
    /// Pull f back and divide by the determinant of B.
    Pullback {
        /// Write the cofactor here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve for the sextic of one column triple.
    Sextic {
        /// Three distinct columns, e.g. 1,2,4.
        #[arg(long)]
        triple: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Jacobian rank of the patterned parametrization.
    DimCheck {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
    /// Equivariance of the cofactor under GL3 acting on the factors.
    InvarianceCheck {
        /// Random elements of GL3 in addition to diag(2,1,1) and one of SL3.
        #[arg(long, default_value_t = 20)]
        groups: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Minimality of the generating set.
    MinimalityCheck {
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
    /// Evaluate every generator on patterned samples.
    VanishCheck {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Decide whether the nonnegative rank is at most three.
    Nnrank {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Locate a matrix relative to the boundary.
    Boundary {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Build and verify one of the worked examples.
    Example {
        #[arg(value_enum)]
        which: ExampleKind,
        #[command(flatten)]
        params: ExampleParams,
        #[arg(long)]
        matrix_out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Draw the nested polygons and candidate triangles.
    Render {
        #[arg(long, conflicts_with = "example", required_unless_present = "example")]
        matrix: Option<PathBuf>,
        #[arg(long, value_enum)]
        example: Option<ExampleKind>,
        #[command(flatten)]
        params: ExampleParams,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExampleKind {
    Square,
    Moitra,
}

#[derive(Args, Debug, Clone)]
pub struct ExampleParams {
    /// Moitra example: the outer polygon has 3n vertices.
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long)]
    pub eps: Option<String>,
    /// Largest denominator for the rational circle points.
    #[arg(long, default_value_t = 1_000_000)]
    pub precision: u64,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gens { .. } => "gens",
            Command::GbCheck { .. } => "gb-check",
            Command::Member { .. } => "member",
            Command::Pullback { .. } => "pullback",
            Command::Sextic { .. } => "sextic",
            Command::DimCheck { .. } => "dim-check",
            Command::InvarianceCheck { .. } => "invariance-check",
            Command::MinimalityCheck { .. } => "minimality-check",
            Command::VanishCheck { .. } => "vanish-check",
            Command::Nnrank { .. } => "nnrank",
            Command::Boundary { .. } => "boundary",
            Command::Example { .. } => "example",
            Command::Render { .. } => "render",
        }
    }
}

/// Failure before a report could be produced.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(String),
}

impl From<nonneg3_core::Error> for CliError {
    fn from(e: nonneg3_core::Error) -> Self {
        use nonneg3_core::Error as E;
        match e {
            E::Internal(_) | E::BudgetExceeded(_) => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn emit(global: &Global, report: &Report) -> Result<(), CliError> {
    let text = report.to_json();
    match &global.report {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let g = &cli.global;
    if !g.unbounded && (g.max_pairs == 0 || g.max_seconds.is_nan() || g.max_seconds <= 0.0) {
        return Err(CliError::Usage("budget must be positive".into()));
    }
    if let Some(t) = g.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let start = Instant::now();
    let mut report = commands::dispatch(g, &cli.command)?;
    if g.timing {
        report.timing = Some(json!({ "seconds": start.elapsed().as_secs_f64() }));
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let global = cli.global.clone();
    let outcome = run(cli).and_then(|r| emit(&global, &r).map(|_| r));
    match outcome {
        Ok(r) => ExitCode::from(r.exit_code() as u8),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
