mod job;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use job::{exit_code_for, run, run_suite, JobSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

/// Exact construction, verification, and enumeration of G-closure data for
/// rank-n algebras over commutative rings.
#[derive(Parser, Debug)]
#[command(name = "gclosure", version, about)]
struct Cli {
    /// Base ring descriptor, e.g. Z, Q, Z/9, GF(7), Z[a,b], Z[u]/(u^2-5)
    #[arg(long, global = true)]
    ring: Option<String>,

    /// Monic defining polynomial of a monogenic algebra, e.g. x^3+a*x+b
    #[arg(long, global = true)]
    poly: Option<String>,

    /// Use the split algebra R^n instead of a polynomial
    #[arg(long, global = true)]
    trivial: Option<usize>,

    /// JSON algebra document (structure constants or poly form)
    #[arg(long, global = true)]
    algebra_file: Option<PathBuf>,

    /// Permutation group: S4, A3, D4, S2xS2, 1, or cycles [(1,3),(1,2,3,4)]
    #[arg(long, global = true)]
    group: Option<String>,

    /// Root of the relevant resolvent (An: discriminant quadratic, D4: cubic)
    #[arg(long, global = true)]
    from_root: Option<String>,

    /// Semicolon-separated monic factors, e.g. "x^2-3*x+2;x^2-2*x+2"
    #[arg(long, global = true)]
    factors: Option<String>,

    /// Comma-separated block sizes for factor extraction, e.g. "2,2"
    #[arg(long, global = true)]
    extract: Option<String>,

    /// JSON closure-datum document to consume
    #[arg(long, global = true)]
    datum_file: Option<PathBuf>,

    /// Ring element (for the primoid test)
    #[arg(long, global = true)]
    elem: Option<String>,

    /// Search bound for quadratic-order primoid tests
    #[arg(long, global = true)]
    bound: Option<u64>,

    /// Override the closure-algebra rank guard (ambient dimension n^n)
    #[arg(long, global = true)]
    guard_n: Option<usize>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for suite runs
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate the canonical symmetric-invariant homomorphism
    Ferrand,
    /// The rank-2 discriminant algebra and its quadratic
    DiscAlgebra,
    /// The cubic resolvent of a monic quartic
    Resolvent,
    /// Enumerate all G-closure data (brute-force oracle)
    Enumerate,
    /// Verify a closure datum (from a document or a resolvent root)
    Verify,
    /// Present the closure algebra of a datum
    ClosureAlgebra,
    /// Build a closure datum from a resolvent root and emit its document
    FromRoot,
    /// Build the closure datum of a factorization (or extract factors back)
    FactorDatum,
    /// Decide whether an element is primoid
    Primoid,
    /// The root↔√disc correspondence (needs 2 primoid and a non-zerodivisor)
    SqrtDisc,
    /// Run a corpus of jobs and compare against embedded expectations
    Suite { corpus: PathBuf },
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Ferrand => "ferrand",
        Command::DiscAlgebra => "disc-algebra",
        Command::Resolvent => "resolvent",
        Command::Enumerate => "enumerate",
        Command::Verify => "verify",
        Command::ClosureAlgebra => "closure-algebra",
        Command::FromRoot => "from-root",
        Command::FactorDatum => "factor-datum",
        Command::Primoid => "primoid",
        Command::SqrtDisc => "sqrt-disc",
        Command::Suite { .. } => "suite",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Command::Suite { corpus } = &cli.command {
        let text = match std::fs::read_to_string(corpus) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("cannot read corpus {}: {e}", corpus.display());
                return ExitCode::from(2);
            }
        };
        let jobs: Vec<JobSpec> = match serde_json::from_str(&text) {
            Ok(j) => j,
            Err(e) => {
                eprintln!("cannot parse corpus: {e}");
                return ExitCode::from(2);
            }
        };
        let suite = run_suite(&jobs, cli.jobs);
        match cli.format {
            Format::Machine => {
                println!("{}", serde_json::to_string_pretty(&suite).unwrap());
            }
            Format::Text => {
                for r in &suite.reports {
                    let id = r
                        .inputs
                        .get("id")
                        .and_then(|v| v.as_str())
                        .unwrap_or("<unnamed>");
                    println!("[{}] {}: {}", id, r.command, r.status);
                }
                println!("suite: {}/{} passed", suite.passed, suite.total);
                for f in &suite.failures {
                    println!(
                        "MISMATCH {} · {}: expected {}, got {}",
                        f.id, f.key, f.expected, f.actual
                    );
                }
            }
        }
        return if suite.failed == 0 {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(5)
        };
    }

    let mut job = JobSpec {
        id: None,
        command: command_name(&cli.command).to_string(),
        ring: cli.ring.clone(),
        poly: cli.poly.clone(),
        trivial: cli.trivial,
        algebra: None,
        group: cli.group.clone(),
        from_root: cli.from_root.clone(),
        factors: cli.factors.clone(),
        extract: cli.extract.clone(),
        datum: None,
        elem: cli.elem.clone(),
        bound: cli.bound,
        guard_n: cli.guard_n,
        expect: None,
    };
    if let Some(path) = &cli.algebra_file {
        match std::fs::read_to_string(path)
            .map_err(|e| e.to_string())
            .and_then(|t| serde_json::from_str(&t).map_err(|e| e.to_string()))
        {
            Ok(doc) => job.algebra = Some(doc),
            Err(e) => {
                eprintln!("cannot read algebra document {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
    }
    if let Some(path) = &cli.datum_file {
        match std::fs::read_to_string(path)
            .map_err(|e| e.to_string())
            .and_then(|t| serde_json::from_str(&t).map_err(|e| e.to_string()))
        {
            Ok(doc) => job.datum = Some(doc),
            Err(e) => {
                eprintln!("cannot read datum document {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
    }

    match run(&job) {
        Ok(report) => {
            match cli.format {
                Format::Machine => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
                Format::Text => print!("{}", report.to_text()),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
