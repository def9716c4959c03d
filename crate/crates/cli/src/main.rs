//! `entropion` command-line front end.
//!
//! Exit codes: 0 success, 1 usage / IO / input error, 2 at least one suite failed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use entropion::entropy::{
    bures_distance, relative_entropy, relative_entropy_integral_uniform, von_neumann_entropy,
};
use entropion::holevo::chi;
use entropion::inequalities::report::{json_float, reports_to_csv, reports_to_json};
use entropion::inequalities::{run_suites, suite_names, SuiteConfig};
use entropion::{ComplexMatrix, Ensemble, HermitianMatrix};

/// PSD inputs may carry this much negative eigenvalue from rounding in the file.
const INPUT_PSD_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(name = "entropion", version, about = "Numerical checks of quantum entropy inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and write a report.
    Verify(VerifyArgs),
    /// Compute one quantity from JSON input files.
    Compute {
        #[arg(value_enum)]
        quantity: Quantity,
        /// Matrix files (entropy: 1, relent/bures: 2) or one ensemble file (chi).
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Quadrature error against the spectral route as the panel count doubles.
    Convergence {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long, default_value_t = 64)]
        max_panels: usize,
    },
    /// List the available suites.
    List,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Suite names, comma separated or repeated; `all` selects every suite.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    suites: Vec<String>,
    /// Dimensions cycled over the trials; each suite's defaults when omitted.
    #[arg(long, value_delimiter = ',')]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, env = "ENTROPION_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    Entropy,
    Relent,
    Chi,
    Bures,
}

impl Quantity {
    fn name(self) -> &'static str {
        match self {
            Quantity::Entropy => "entropy",
            Quantity::Relent => "relent",
            Quantity::Chi => "chi",
            Quantity::Bures => "bures",
        }
    }

    fn arity(self) -> usize {
        match self {
            Quantity::Entropy | Quantity::Chi => 1,
            Quantity::Relent | Quantity::Bures => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Compute { quantity, files } => cmd_compute(quantity, &files),
        Command::Convergence { p, q, max_panels } => cmd_convergence(&p, &q, max_panels),
        Command::List => {
            for name in suite_names() {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(1)
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let cfg = SuiteConfig {
        suites: args.suites,
        dims: args.dims,
        trials: args.trials,
        seed: args.seed,
        tol: args.tol,
    };
    let reports = run_suites(&cfg)?;
    let text = match args.format {
        Format::Json => reports_to_json(&reports) + "\n",
        Format::Csv => reports_to_csv(&reports),
    };
    write_output(args.out.as_deref(), &text)?;
    for r in reports.iter().filter(|r| !r.pass) {
        eprintln!("{}: {} failing trial(s), worst margin {:e}", r.suite, r.failures.len(), r.worst_margin);
    }
    Ok(if reports.iter().all(|r| r.pass) { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn cmd_compute(quantity: Quantity, files: &[PathBuf]) -> Result<ExitCode> {
    if files.len() != quantity.arity() {
        bail!("{} takes {} input file(s), got {}", quantity.name(), quantity.arity(), files.len());
    }
    let value = match quantity {
        Quantity::Entropy => von_neumann_entropy(&read_psd(&files[0])?)?,
        Quantity::Relent => relative_entropy(&read_psd(&files[0])?, &read_psd(&files[1])?)?.to_f64(),
        Quantity::Bures => bures_distance(&read_psd(&files[0])?, &read_psd(&files[1])?)?,
        Quantity::Chi => chi(&Ensemble::from_json_str(&read(&files[0])?)?)?,
    };
    println!("{{\"quantity\": \"{}\", \"value\": {}}}", quantity.name(), json_float(value));
    Ok(ExitCode::SUCCESS)
}

fn cmd_convergence(p: &Path, q: &Path, max_panels: usize) -> Result<ExitCode> {
    if max_panels == 0 {
        bail!("--max-panels must be at least 1");
    }
    let (p, q) = (read_psd(p)?, read_psd(q)?);
    let Some(exact) = relative_entropy(&p, &q)?.finite() else {
        bail!("P has support outside the support of Q; the relative entropy is infinite");
    };
    let mut out = String::from("panels,abs_error\n");
    let mut panels = 1;
    while panels <= max_panels {
        let approx = relative_entropy_integral_uniform(&p, &q, panels)?;
        out.push_str(&format!("{panels},{:.16e}\n", (approx - exact).abs()));
        panels *= 2;
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_psd(path: &Path) -> Result<HermitianMatrix> {
    let m = ComplexMatrix::from_json_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    let h = HermitianMatrix::new(m).with_context(|| format!("{} is not Hermitian", path.display()))?;
    h.check_psd(INPUT_PSD_TOL)
        .with_context(|| format!("{} is not positive semidefinite", path.display()))?;
    Ok(h)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).context("writing stdout")
        }
    }
}
