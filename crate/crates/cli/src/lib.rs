//! Command-line front end for `fqgamma`: configuration, JSON-lines output and
//! the acceptance self-test.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub mod commands;
pub mod config;
pub mod cycle;
pub mod selftest;

use config::{Config, Overrides};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Domain(#[from] fqgamma::Error),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Domain(fqgamma::Error::Parse { .. }) => EXIT_USAGE,
            CliError::Domain(_) | CliError::Io(_) => EXIT_DOMAIN,
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fqgamma", version, about = "Carlitz module values, geometric gamma values and their relations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Size of the constant field.
    #[arg(long, global = true)]
    pub q: Option<u32>,
    /// u-adic precision of results [default: 128(q-1)].
    #[arg(long, global = true)]
    pub prec: Option<i64>,
    /// Truncation degree in t for series.
    #[arg(long = "trunc-t", global = true)]
    pub trunc_t: Option<usize>,
    /// Largest allowed deg f.
    #[arg(long = "deg-cap", global = true)]
    pub deg_f_cap: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// File of key=value lines; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Accepted for compatibility; output is always JSON lines.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FeKind {
    Translation,
    Reflection,
    ReflectionClosed,
    Gauss,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The Carlitz period.
    Period,
    /// Omega evaluated at t = x.
    OmegaAt {
        #[arg(long)]
        x: String,
    },
    /// The Carlitz exponential at x.
    Exp {
        #[arg(long)]
        x: String,
    },
    /// e(x) = exp(period * x).
    E {
        #[arg(long)]
        x: String,
    },
    /// e*(x), the adjoint torsion value.
    Estar {
        #[arg(long)]
        x: String,
    },
    /// The division polynomial C_a(t, z).
    Divpoly {
        #[arg(long)]
        a: String,
    },
    /// The adjoint division polynomial of f.
    Adjpoly {
        #[arg(long)]
        f: String,
    },
    /// The cyclotomic polynomial C_f*(t, z).
    Cyclo {
        #[arg(long)]
        f: String,
    },
    /// Psi_N, optionally evaluated at x.
    Psi {
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        x: Option<String>,
    },
    /// Pi(x).
    Pi {
        #[arg(long)]
        x: String,
    },
    /// Gamma(x).
    Gamma {
        #[arg(long)]
        x: String,
    },
    /// Residual of a functional equation of Pi.
    VerifyFe {
        #[arg(long, value_enum)]
        kind: FeKind,
        #[arg(long)]
        x: Option<String>,
        /// Translation amount.
        #[arg(long)]
        a: Option<String>,
        /// Multiplier of the Gauss formula.
        #[arg(long)]
        f: Option<String>,
    },
    /// <x>, or <x>_N when N is given.
    Bracket {
        #[arg(long)]
        x: String,
        #[arg(long = "N")]
        n: Option<u32>,
    },
    /// (<u * a>) over units u mod f.
    BracketVec {
        #[arg(long)]
        f: String,
        cycle: String,
    },
    /// a ~_f b by brackets and by lattice membership.
    Equiv {
        #[arg(long)]
        f: String,
        a: String,
        b: String,
    },
    /// Rank of A_f / R~_f against the closed formula.
    Rank {
        #[arg(long)]
        f: String,
    },
    /// Groups a family of cycles into ~_f classes.
    Decide {
        #[arg(long)]
        f: String,
        #[arg(required = true)]
        cycles: Vec<String>,
    },
    /// The basis B_f for f a prime power.
    Basis {
        #[arg(long)]
        f: String,
    },
    /// Coleman interpolation and zero residuals for g_x.
    ColemanVerify {
        #[arg(long)]
        f: String,
        #[arg(long)]
        x: String,
        /// Largest twist index.
        #[arg(long = "N", default_value_t = 5)]
        n: usize,
    },
    /// Functional equation and specialization of Psi_a.
    MotiveVerify {
        #[arg(long)]
        f: String,
        cycle: String,
    },
    /// Runs the acceptance criteria.
    Selftest {
        /// Criterion numbers; all when omitted.
        #[arg(long)]
        only: Vec<u8>,
    },
}

/// One output line.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub op: String,
    pub inputs: Value,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Result(Value),
    /// A residual valuation to be compared against a tolerance.
    Residual { residual: i64, tolerance: i64 },
    /// A verdict that must hold, with its supporting data.
    Check { passed: bool, detail: Value },
}

impl Record {
    pub fn result(op: &str, inputs: Value, result: Value) -> Record {
        Record { op: op.into(), inputs, outcome: Outcome::Result(result) }
    }

    pub fn residual(op: &str, inputs: Value, residual: i64, tolerance: i64) -> Record {
        Record { op: op.into(), inputs, outcome: Outcome::Residual { residual, tolerance } }
    }

    pub fn check(op: &str, inputs: Value, passed: bool, detail: Value) -> Record {
        Record { op: op.into(), inputs, outcome: Outcome::Check { passed, detail } }
    }

    pub fn failed(&self) -> bool {
        match self.outcome {
            Outcome::Result(_) => false,
            Outcome::Residual { residual, tolerance } => residual < tolerance,
            Outcome::Check { passed, .. } => !passed,
        }
    }

    pub fn to_json(&self, cfg: &Config) -> Value {
        let mut v = json!({ "op": self.op, "inputs": self.inputs, "q": cfg.q, "prec": cfg.prec });
        let m = v.as_object_mut().expect("object literal");
        match &self.outcome {
            Outcome::Result(r) => {
                m.insert("result".into(), r.clone());
            }
            Outcome::Residual { residual, tolerance } => {
                m.insert("residual".into(), json!(residual));
                m.insert("tolerance".into(), json!(tolerance));
            }
            Outcome::Check { passed, detail } => {
                let mut r = match detail {
                    Value::Object(o) => o.clone(),
                    other => [("detail".to_string(), other.clone())].into_iter().collect(),
                };
                r.insert("passed".into(), json!(passed));
                m.insert("result".into(), Value::Object(r));
            }
        }
        v
    }
}

/// Resolves the configuration from flags and the optional config file.
pub fn resolve_config(g: &GlobalArgs) -> Result<Config, CliError> {
    let flags = Overrides { q: g.q, prec: g.prec, trunc_t: g.trunc_t, deg_f_cap: g.deg_f_cap, seed: g.seed };
    let file = match &g.config {
        Some(p) => Overrides::load(p)?,
        None => Overrides::default(),
    };
    Config::resolve(&flags.over(file))
}

/// Parses `argv`, runs one subcommand and writes JSON lines to `out` and a
/// summary to `err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let cfg = match resolve_config(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    match commands::execute(&cli.command, &cfg, err) {
        Ok(records) => {
            let mut failed = 0;
            for r in &records {
                if writeln!(out, "{}", r.to_json(&cfg)).is_err() {
                    return EXIT_DOMAIN;
                }
                failed += usize::from(r.failed());
            }
            let _ = writeln!(err, "{} record(s), {failed} failing", records.len());
            if failed > 0 {
                EXIT_VERIFY
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
