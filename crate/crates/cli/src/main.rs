use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use pwent::linear_entropy;
use pwent::state::subset_label;
use pwent_cli::checks::{self, Suite};
use pwent_cli::figures::{self, FigureId};
use pwent_cli::measure::{self, EgArg, HArg, MeasureId, MeasureRequest};
use pwent_cli::report::{fmt_sig, ReportRow};
use pwent_cli::source::{self, Family, FamilyArgs};
use pwent_cli::statefile::StateFile;

/// Partitewise entanglement measures, extensibility and reproduction checks.
#[derive(Parser)]
#[command(name = "pwent", version)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "PWENT_SEED", default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build, inspect and round-trip state files.
    #[command(subcommand)]
    State(StateCmd),
    /// Evaluate one measure on a state.
    Measure {
        /// State file or name (bell, ame5, ghz3, ghz3d3, w3, fig1:<p>,<t>, fig2a:<p>, fig2b:<p>).
        #[arg(long)]
        state: String,
        #[arg(long, value_enum)]
        id: MeasureId,
        /// Designated parties, e.g. `A,B` or `0,2`. Defaults to the first two.
        #[arg(long)]
        designated: Option<String>,
        /// Reduced function; default depends on the measure.
        #[arg(long, value_enum)]
        h: Option<HArg>,
        /// Genuine-measure form; default depends on the measure.
        #[arg(long, value_enum)]
        eg: Option<EgArg>,
        /// Compare against an expected value (exit code 1 on mismatch).
        #[arg(long)]
        expect: Option<f64>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Emit a figure series as CSV.
    Figure {
        #[arg(value_enum)]
        id: FigureId,
        /// Grid points per axis.
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run a check suite; exit code 1 if any row fails.
    Check {
        #[arg(value_enum)]
        suite: Suite,
    },
}

#[derive(Subcommand)]
enum StateCmd {
    /// Construct a named state and write it as a state file.
    Make {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        parties: Option<usize>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Print spectrum, purity and single-party marginals.
    Show { state: String },
    /// Re-save a state (file or name) in canonical form.
    Save {
        state: String,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Validate a state file and print it in canonical form.
    Load { file: PathBuf },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn show(state: &StateFile) {
    let rho = state.density();
    println!("kind: {}", state.kind());
    println!("dims: {:?}", state.shape().dims());
    let spectrum: Vec<String> = rho.eigenvalues().iter().map(|&x| fmt_sig(x)).collect();
    println!("spectrum: {}", spectrum.join(" "));
    println!("rank: {}", rho.rank());
    println!("S_L: {}", fmt_sig(linear_entropy(&rho)));
    let n = state.shape().n_parties();
    if n > 1 {
        for p in 0..n {
            let m = rho.partial_trace(&[p]).expect("valid party");
            let spec: Vec<String> = m.eigenvalues().iter().map(|&x| fmt_sig(x)).collect();
            println!("marginal {}: S_L {} spectrum {}", subset_label(&[p]), fmt_sig(linear_entropy(&m)), spec.join(" "));
        }
    }
}

/// Ok(true) when every check passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::State(cmd) => match cmd {
            StateCmd::Make { family, parties, dim, p, t, out } => {
                let state = source::make(family, &FamilyArgs { parties, dim, p, t })?;
                emit(&state.to_text(), out.as_ref())?;
            }
            StateCmd::Show { state } => show(&source::resolve(&state)?),
            StateCmd::Save { state, out } => emit(&source::resolve(&state)?.to_text(), Some(&out))?,
            StateCmd::Load { file } => {
                let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
                let state = StateFile::parse(&text).with_context(|| format!("in {}", file.display()))?;
                print!("{}", state.to_text());
            }
        },
        Command::Measure { state, id, designated, h, eg, expect, tol } => {
            let state = source::resolve(&state)?;
            let designated = match designated {
                Some(text) => source::parse_parties(&text, state.shape().n_parties())?,
                None => vec![0, 1],
            };
            let req = MeasureRequest { id, designated, h: h.map(Into::into), eg: eg.map(Into::into), seed: cli.seed };
            measure::check_designated(&state, &req)?;
            let mut row: ReportRow = measure::run(&state, &req)?;
            if let Some(e) = expect {
                row = row.expect(e, tol);
            }
            println!("{row}");
            return Ok(row.pass());
        }
        Command::Figure { id, points, out } => {
            let csv = figures::csv(id, points)?;
            eprintln!("# {}", figures::provenance(id));
            emit(&csv, out.as_ref())?;
        }
        Command::Check { suite } => {
            let rows = checks::run(suite, cli.seed)?;
            let passed = rows.iter().filter(|r| r.pass()).count();
            for row in &rows {
                println!("{row}");
            }
            println!("{passed}/{} passed", rows.len());
            return Ok(passed == rows.len());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
