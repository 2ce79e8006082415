use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use fillcurve::affine::classify_affine;
use fillcurve::atlas::{affine_atlas, projective_atlas};
use fillcurve::gf::{DEFAULT_MAX_Q, HARD_MAX_Q};
use fillcurve::verify::suites::{run_suite, Suite, SWEEP_MAX_Q};
use fillcurve::verify::{affine_report, decomposition_report};
use fillcurve::{Field, Matrix23, Matrix3};

/// Plane-filling curves over finite fields.
#[derive(Parser)]
#[command(name = "fillcurve", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one matrix and compare its predicted components with the oracle.
    Classify {
        #[arg(long)]
        q: u64,
        /// Comma-separated entries, row-major, in the integer encoding of GF(q).
        #[arg(long)]
        matrix: String,
        /// Read a 2×3 matrix of the affine family.
        #[arg(long)]
        affine: bool,
    },
    /// One JSON line per equivalence class.
    Atlas {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run a verification suite; exits 1 when any check fails.
    Verify {
        #[arg(long)]
        q: u64,
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Projective,
    Affine,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite {s:?}; expected one of {}", names.join(", "))
    })
}

/// Failures split by exit code.
enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn max_q() -> Result<u32, Failure> {
    match std::env::var("FILLCURVE_MAX_Q") {
        Err(_) => Ok(DEFAULT_MAX_Q),
        Ok(v) => {
            let n: u32 = v
                .trim()
                .parse()
                .map_err(|_| usage(anyhow!("FILLCURVE_MAX_Q must be an integer, got {v:?}")))?;
            if n > HARD_MAX_Q {
                return Err(usage(anyhow!("FILLCURVE_MAX_Q may not exceed {HARD_MAX_Q}")));
            }
            Ok(n)
        }
    }
}

fn field(q: u64) -> Result<Field, Failure> {
    Field::from_order_with_bound(q, max_q()?).map_err(usage)
}

fn parse_entries(field: &Field, text: &str, expected: usize) -> Result<Vec<u32>, Failure> {
    let entries = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| anyhow!("matrix entry {:?} is not a non-negative integer", s.trim()))
        })
        .collect::<anyhow::Result<Vec<u32>>>()
        .map_err(usage)?;
    if entries.len() != expected {
        return Err(usage(anyhow!("expected {expected} matrix entries, got {}", entries.len())));
    }
    if let Some(e) = entries.iter().find(|&&e| e >= field.q()) {
        return Err(usage(anyhow!("matrix entry {e} is not below q = {}", field.q())));
    }
    Ok(entries)
}

fn with_jobs<T: Send>(jobs: Option<usize>, work: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        None => Ok(work()),
        Some(0) => Err(usage(anyhow!("--jobs must be at least 1"))),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .context("building the worker pool")?;
            Ok(pool.install(work))
        }
    }
}

fn print_json(value: &impl serde::Serialize) -> anyhow::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn classify(q: u64, matrix: &str, affine: bool) -> Result<bool, Failure> {
    let f = field(q)?;
    if affine {
        let entries = parse_entries(&f, matrix, 6)?;
        let m = Matrix23::from_ints(&f, &entries).map_err(usage)?;
        let label = classify_affine(&f, &m).map_err(usage)?;
        let report = affine_report(&f, &m).map_err(|e| Failure::Runtime(e.into()))?;
        print_json(&json!({
            "q": f.q(),
            "matrix": m,
            "label": label.tag,
            "canonical": label.canonical,
            "witness": label.witness,
            "report": report,
        }))?;
        Ok(report.matches)
    } else {
        let entries = parse_entries(&f, matrix, 9)?;
        let a = Matrix3::from_ints(&f, &entries).map_err(usage)?;
        let report = decomposition_report(&f, &a);
        print_json(&report)?;
        Ok(report.matches)
    }
}

fn atlas(q: u64, family: Family, out: Option<PathBuf>, jobs: Option<usize>) -> Result<bool, Failure> {
    let f = field(q)?;
    if f.q() > SWEEP_MAX_Q {
        return Err(usage(anyhow!("atlas enumeration is limited to q <= {SWEEP_MAX_Q}")));
    }
    let lines: Vec<(String, bool)> = with_jobs(jobs, || -> anyhow::Result<Vec<(String, bool)>> {
        match family {
            Family::Projective => projective_atlas(&f)
                .iter()
                .map(|e| Ok((serde_json::to_string(e)?, e.report_match)))
                .collect(),
            Family::Affine => affine_atlas(&f)?
                .iter()
                .map(|e| Ok((serde_json::to_string(e)?, e.report_match)))
                .collect(),
        }
    })??;
    let mut sink: Box<dyn Write> = match &out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    for (line, _) in &lines {
        writeln!(sink, "{line}")?;
    }
    sink.flush()?;
    let all_match = lines.iter().all(|(_, ok)| *ok);
    if out.is_some() {
        eprintln!("{} entries written", lines.len());
    }
    Ok(all_match)
}

fn verify(q: u64, suite: Suite, jobs: Option<usize>) -> Result<bool, Failure> {
    let f = field(q)?;
    if suite != Suite::MissingPoints && f.q() > SWEEP_MAX_Q {
        return Err(usage(anyhow!("suite {} is limited to q <= {SWEEP_MAX_Q}", suite.name())));
    }
    let summary = with_jobs(jobs, || run_suite(&f, suite))?.map_err(|e| Failure::Runtime(e.into()))?;
    print_json(&summary)?;
    Ok(summary.passed)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Classify { q, matrix, affine } => classify(q, &matrix, affine),
        Command::Atlas { q, family, out, jobs } => atlas(q, family, out, jobs),
        Command::Verify { q, suite, jobs } => verify(q, suite, jobs),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
