use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hk4_core::blowup::{self, Convention};
use hk4_core::sample;
use hk4_core::suites::{self, SuiteConfig};
use hk4_core::{bb, Error};

mod query;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Exact verification harness for the degree-4 lattice model of K3^[2]-type fourfolds.
#[derive(Parser)]
#[command(name = "hk4", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite.
    Verify {
        #[arg(value_parser = suite_names())]
        suite: String,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Number of random samples per sampled check.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_enum, default_value_t = ConventionArg::Quadratic)]
        convention: ConventionArg,
    },
    /// Answer a single query given as a JSON payload (use `-` to read stdin).
    Query {
        #[arg(value_parser = ["membership", "divisibility", "vlambda", "minimal-search"])]
        kind: String,
        payload: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print validated random samples.
    Sample {
        #[arg(value_enum)]
        kind: SampleKind,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive searches.
    Search {
        #[command(subcommand)]
        what: SearchKind,
    },
}

#[derive(Subcommand)]
enum SearchKind {
    /// Integer combinations Σ c_i² e_i = 1 of correspondence multipliers.
    JacobianCombos {
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        multipliers: Vec<i64>,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(i64).range(1..))]
        bound: i64,
        #[arg(long, value_enum, default_value_t = ConventionArg::Quadratic)]
        convention: ConventionArg,
        /// Append the residue multiplier built from `e0,e`.
        #[arg(long, value_delimiter = ',')]
        residue: Option<Vec<i64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Human-readable table instead of JSON.
    #[arg(long)]
    text: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Quadratic,
    Paper,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Quadratic => Convention::Quadratic,
            ConventionArg::Paper => Convention::PaperLiteral,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleKind {
    Exceptional,
    PolarizationOdd,
    PolarizationEven,
}

fn suite_names() -> Vec<&'static str> {
    let mut v = suites::SUITES.to_vec();
    v.push("all");
    v
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), u8> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| {
            eprintln!("error: writing {}: {e}", p.display());
            EXIT_FAIL
        }),
        None => {
            let mut so = std::io::stdout().lock();
            match writeln!(so, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: writing stdout: {e}");
                    Err(EXIT_FAIL)
                }
                _ => Ok(()),
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

fn run(cli: Cli) -> Result<(), u8> {
    match cli.command {
        Command::Verify {
            suite,
            out,
            seed,
            trials,
            convention,
        } => {
            let cfg = SuiteConfig {
                seed,
                trials,
                convention: convention.into(),
            };
            let report = suites::run_suite(&suite, &cfg).map_err(|e| {
                eprintln!("error: {e}");
                match e {
                    Error::Parse(_) => EXIT_USAGE,
                    _ => EXIT_FAIL,
                }
            })?;
            let text = if out.text {
                report.to_string()
            } else {
                serde_json::to_string_pretty(&report).expect("report serializes")
            };
            emit(&text, out.out.as_ref())?;
            if report.passed() {
                Ok(())
            } else {
                for c in report.failures() {
                    eprintln!("FAIL {}: expected {}, got {}", c.name, c.expected, c.actual);
                }
                Err(EXIT_FAIL)
            }
        }
        Command::Query { kind, payload, out } => {
            let payload = if payload == "-" {
                std::io::read_to_string(std::io::stdin()).map_err(|e| {
                    eprintln!("error: reading stdin: {e}");
                    EXIT_USAGE
                })?
            } else {
                payload
            };
            match query::run(&kind, &payload) {
                Ok(v) => emit(&pretty(&v), out.as_ref()),
                Err(query::QueryError::Parse(m)) => {
                    eprintln!("error: {m}");
                    Err(EXIT_USAGE)
                }
                Err(query::QueryError::Compute(m)) => {
                    eprintln!("error: {m}");
                    Err(EXIT_FAIL)
                }
            }
        }
        Command::Sample {
            kind,
            count,
            seed,
            out,
        } => {
            let mut rng = sample::rng(seed);
            let mut items = Vec::new();
            for _ in 0..count {
                let (class, valid) = match kind {
                    SampleKind::Exceptional => {
                        let d = sample::random_exceptional(&mut rng);
                        let ok = bb::is_exceptional(d.class());
                        (d.class().clone(), ok)
                    }
                    SampleKind::PolarizationOdd => {
                        let l = sample::random_odd_polarization(&mut rng);
                        let ok = l.square() > 0
                            && bb::is_odd(&l).unwrap_or(false)
                            && bb::is_primitive(&l).unwrap_or(false);
                        (l, ok)
                    }
                    SampleKind::PolarizationEven => {
                        let l = sample::random_even_polarization(&mut rng, None);
                        let ok = l.square() > 0
                            && bb::is_even(&l).unwrap_or(false)
                            && bb::is_primitive(&l).unwrap_or(false);
                        (l, ok)
                    }
                };
                if !valid {
                    eprintln!("error: sample {class:?} failed validation");
                    return Err(EXIT_FAIL);
                }
                items.push(json!({ "class": class, "square": class.square() }));
            }
            let text = serde_json::to_string(&Value::Array(items)).expect("samples serialize");
            emit(&text, out.as_ref())
        }
        Command::Search {
            what:
                SearchKind::JacobianCombos {
                    mut multipliers,
                    bound,
                    convention,
                    residue,
                    out,
                },
        } => {
            let convention: Convention = convention.into();
            if let Some(r) = residue {
                if r.len() != 2 {
                    eprintln!("error: --residue takes exactly two values e0,e");
                    return Err(EXIT_USAGE);
                }
                let m = blowup::residue_transform(r[0], r[1], convention).map_err(|e| {
                    eprintln!("error: {e}");
                    EXIT_USAGE
                })?;
                multipliers.push(m);
            }
            let r = blowup::potential_jacobian_search(&multipliers, bound).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_USAGE
            })?;
            let v = json!({ "convention": convention.to_string(), "search": r });
            emit(&pretty(&v), out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
