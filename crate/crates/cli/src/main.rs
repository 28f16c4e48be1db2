//! `atominfo`: entropies, complexity and information distances of atoms
//! from Slater-type orbital basis files.
//!
//! Exit status: 0 on success, 1 for bad input data or arguments, 2 when a
//! numerical stage (quadrature, normalization, entropy bounds) fails.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use atominfo::basis::{find_atom, parse_basis_file, AtomBasis};
use atominfo::densities::{local_entropy_curve, momentum_density, position_density, Space};
use atominfo::quadrature::QuadratureSpec;
use atominfo::report::{
    compare, compute_report, curve_table, distance_table, fit_log, fit_table, read_fit_points, report_table, scan,
    DensitySource, GridSpec, Table,
};
use atominfo::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "atominfo",
    version,
    about = "Information entropies and distances of atomic electron densities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One Table-style row for a single atom.
    Compute {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long)]
        atom: String,
        #[command(flatten)]
        gamma: GammaArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Rows for every atom in a basis file, ordered by Z.
    Scan {
        #[arg(long)]
        basis: PathBuf,
        #[command(flatten)]
        gamma: GammaArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Least-squares fit of S = a + b ln Z from a report CSV.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Kullback, symmetrized Kullback and Jensen-Shannon distances.
    Compare {
        /// basis:FILE#SYMBOL, asymptotic:I1=<real> or tf:Z=<int>
        #[arg(long)]
        a: DensitySource,
        #[arg(long)]
        b: DensitySource,
        #[arg(long, value_enum, default_value_t = SpaceArg::Position)]
        space: SpaceArg,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Local Shannon entropy curve -4πx² d ln d.
    LocalEntropy {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long)]
        atom: String,
        #[arg(long, value_enum)]
        space: SpaceArg,
        /// lin:A:B:N or log:A:B:N
        #[arg(long)]
        grid: GridSpec,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
}

#[derive(Args)]
struct GammaArgs {
    /// Complexity strengths ALPHA,BETA; repeat for several series.
    #[arg(long = "gamma", value_parser = parse_pair, default_values = ["1,1"])]
    pairs: Vec<(f64, f64)>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TolArgs {
    #[arg(long, default_value_t = 1e-9)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,
    #[arg(long, default_value_t = 12)]
    max_refinement: u32,
}

impl TolArgs {
    fn spec(&self) -> Result<QuadratureSpec> {
        QuadratureSpec::new(self.rel_tol, self.abs_tol, self.max_refinement)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    Position,
    Momentum,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Position => Space::Position,
            SpaceArg::Momentum => Space::Momentum,
        }
    }
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected ALPHA,BETA")?;
    let a: f64 = a.trim().parse().map_err(|_| format!("bad alpha `{a}`"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad beta `{b}`"))?;
    if !(a >= 0.0 && b >= 0.0) {
        return Err("strengths must be non-negative".into());
    }
    Ok((a, b))
}

fn load_basis(path: &Path) -> Result<Vec<AtomBasis>> {
    parse_basis_file(&std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?)
}

fn emit(table: &Table, output: &OutputArgs) -> Result<()> {
    let sink: Box<dyn Write> = match &output.out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| Error::file(path, e))?)),
        None => Box::new(io::stdout().lock()),
    };
    match output.format {
        Format::Csv => table.write_csv(sink),
        Format::Json => table.write_json(sink),
    }
}

/// Exit status for the worst of the given errors.
fn status(numerical: bool) -> ExitCode {
    ExitCode::from(if numerical { 2 } else { 1 })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Compute {
            basis,
            atom,
            gamma,
            output,
            tol,
        } => {
            let atoms = load_basis(&basis)?;
            let report = compute_report(find_atom(&atoms, &atom)?, &gamma.pairs, tol.spec()?)?;
            emit(&report_table(&[report], None), &output)?;
        }
        Command::Scan {
            basis,
            gamma,
            output,
            tol,
        } => {
            let atoms = load_basis(&basis)?;
            if atoms.is_empty() {
                return Err(Error::InvalidParameter(format!("{} holds no atoms", basis.display())));
            }
            let outcome = scan(&atoms, &gamma.pairs, tol.spec()?);
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            emit(&report_table(&outcome.reports, Some(&outcome.local_minima)), &output)?;
            for f in &outcome.failures {
                eprintln!("error: Z={} {}: {}", f.z, f.symbol, f.message);
            }
            if !outcome.failures.is_empty() {
                return Ok(status(outcome.failures.iter().any(|f| f.numerical)));
            }
        }
        Command::Fit { input, output } => {
            let points = read_fit_points(File::open(&input).map_err(|e| Error::file(&input, e))?)?;
            emit(&fit_table(&fit_log(&points)?), &output)?;
        }
        Command::Compare {
            a,
            b,
            space,
            output,
            tol,
        } => {
            let report = compare(&a, &b, space.into(), tol.spec()?)?;
            emit(
                &distance_table(&a.to_string(), &b.to_string(), space.into(), &report),
                &output,
            )?;
        }
        Command::LocalEntropy {
            basis,
            atom,
            space,
            grid,
            output,
            tol,
        } => {
            let atoms = load_basis(&basis)?;
            let atom = find_atom(&atoms, &atom)?;
            let d = match Space::from(space) {
                Space::Position => position_density(atom, tol.spec()?)?,
                Space::Momentum => momentum_density(atom, tol.spec()?)?,
            };
            emit(&curve_table(&local_entropy_curve(&d, &grid.points())?), &output)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            status(e.is_numerical())
        }
    }
}
