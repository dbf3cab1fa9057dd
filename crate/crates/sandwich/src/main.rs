use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sandwich::cli::{self, parse_cli_rat, Command, ProblemSpec, RunOptions, LAMBDA_CAP_ENV};
use sandwich::Rat;

/// Exact insertion, envelopes, extensions, and lattice approximation on
/// desk-scale models.
#[derive(Parser)]
#[command(name = "sandwich", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Problem document (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Gap parameter, as p/q.
    #[arg(long, value_parser = parse_cli_rat)]
    epsilon: Option<Rat>,
    /// Dyadic tolerance 1/2^n, as p/q.
    #[arg(long, value_parser = parse_cli_rat)]
    tol: Option<Rat>,
    /// Upper level for obstruction checks, as p/q.
    #[arg(long, value_parser = parse_cli_rat)]
    eta: Option<Rat>,
    /// Lower level / Lipschitz constant, as p/q.
    #[arg(long, value_parser = parse_cli_rat)]
    lambda: Option<Rat>,
    /// Directory for report/certificate/CSV/SVG artifacts.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG plot (implies --out).
    #[arg(long)]
    svg: bool,
    /// Also write CSV samples at this resolution (implies --out).
    #[arg(long)]
    csv: Option<u32>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Report semicontinuity, norms, and order of the problem functions.
    Check(Common),
    /// Usc/lsc envelopes, Lipschitz regularizations, and meet witnesses.
    Envelope(Common),
    /// Extract finite subfamilies witnessing meet(S) <= join(T).
    Extract(Common),
    /// Insert a continuous function into a verified gap f + eps <= g.
    Insert(Common),
    /// Run the certified dyadic iteration for f <= g.
    Kt(Common),
    /// Extend functions from the punctured space to its compactification.
    Extend(Common),
    /// Check one (eta, lambda) level pair for an extension obstruction.
    Obstruct(Common),
    /// Extend, order-check, insert, and restrict in one run.
    Pipeline(Common),
    /// Build a lattice expression realizing a finite target exactly.
    Sw(Common),
    /// Sample functions to CSV.
    Sample(Common),
    /// Plot functions to SVG.
    Plot(Common),
    /// Re-verify a certificate document.
    VerifyCert {
        /// Certificate file produced by insert/kt/pipeline/extract.
        #[arg(long)]
        input: PathBuf,
    },
}

fn load_problem(path: &PathBuf) -> Result<ProblemSpec, cli::CliError> {
    let text = std::fs::read_to_string(path)?;
    cli::parse_problem(&text)
}

fn lambda_cap_from_env() -> Option<Rat> {
    let raw = std::env::var(LAMBDA_CAP_ENV).ok()?;
    match raw.parse::<Rat>() {
        Ok(cap) => Some(cap),
        Err(e) => {
            eprintln!("warning: ignoring {LAMBDA_CAP_ENV}: {e}");
            None
        }
    }
}

fn dispatch(cmd: Command, common: &Common) -> Result<i32, cli::CliError> {
    let problem = load_problem(&common.input)?;
    let opts = RunOptions {
        epsilon: common.epsilon.clone(),
        tol: common.tol.clone(),
        eta: common.eta.clone(),
        lambda: common.lambda.clone(),
        out_dir: common.out.clone(),
        svg: common.svg,
        csv: common.csv,
        lambda_cap: lambda_cap_from_env(),
    };
    let output = cli::run(cmd, &problem, &opts)?;
    print!("{}", output.report);
    let written = cli::write_artifacts(cmd, &output, &opts)?;
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(output.exit_code)
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let result = match &args.command {
        Cmd::Check(c) => dispatch(Command::Check, c),
        Cmd::Envelope(c) => dispatch(Command::Envelope, c),
        Cmd::Extract(c) => dispatch(Command::Extract, c),
        Cmd::Insert(c) => dispatch(Command::Insert, c),
        Cmd::Kt(c) => dispatch(Command::Kt, c),
        Cmd::Extend(c) => dispatch(Command::Extend, c),
        Cmd::Obstruct(c) => dispatch(Command::Obstruct, c),
        Cmd::Pipeline(c) => dispatch(Command::Pipeline, c),
        Cmd::Sw(c) => dispatch(Command::Sw, c),
        Cmd::Sample(c) => dispatch(Command::Sample, c),
        Cmd::Plot(c) => dispatch(Command::Plot, c),
        Cmd::VerifyCert { input } => cli::verify_certificate_file(input).map(|report| {
            println!("{report}");
            0
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
