//! `carlitz`: compute Carlitz-module constants and run the verification suites.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use carlitz_core::laurent::parse_lattice;
use carlitz_core::{Error, Field};

#[derive(Parser, Debug)]
#[command(name = "carlitz", version, about = "Exact arithmetic for the Carlitz module over Tate algebras")]
struct Cli {
    #[command(flatten)]
    config: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Characteristic.
    #[arg(long, global = true, env = "CARLITZ_P")]
    p: Option<u32>,
    /// Degree of F_q over F_p.
    #[arg(long, global = true, env = "CARLITZ_E")]
    e: Option<u32>,
    /// Field size q = p^e; alternative to --p/--e.
    #[arg(long, global = true, env = "CARLITZ_Q")]
    q: Option<u32>,
    /// Precision N: results are exact modulo θ^(-N). Fractions like 25/2 are allowed.
    #[arg(long, global = true, env = "CARLITZ_PREC")]
    prec: Option<String>,
    /// Number of t-variables.
    #[arg(long, global = true, env = "CARLITZ_S")]
    s: Option<usize>,
    /// Maximum number of monic polynomials a zeta sum may enumerate.
    #[arg(long, global = true, env = "CARLITZ_BUDGET", default_value_t = 2_000_000)]
    budget: u64,
    #[arg(long, global = true, env = "CARLITZ_FORMAT", value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for sampled inputs.
    #[arg(long, global = true, env = "CARLITZ_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a named constant.
    Compute(ComputeArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Time a kernel across a precision sweep.
    Bench(BenchArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Constant {
    Pi,
    Omega,
    Zeta,
    Dn,
    Torsion,
    DigitDemo,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    #[arg(value_enum)]
    name: Constant,
    /// Exponent n of zeta, or index of d_n.
    #[arg(long)]
    n: Option<u32>,
    /// Evaluate zeta at t_i = θ^(q^k_i), e.g. --eval 0,1.
    #[arg(long, value_delimiter = ',')]
    eval: Option<Vec<u32>>,
    /// Polynomial a for torsion points.
    #[arg(long, default_value = "θ")]
    a: String,
    /// Index j of the torsion point exp(π θ^j / a).
    #[arg(long, default_value_t = 0)]
    j: u32,
    /// Digit indices for digit-demo.
    #[arg(long, value_delimiter = ',', default_values_t = [2u64, 2])]
    digits: Vec<u64>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite name or `all`.
    suite: String,
    /// Index range for digit-ring.
    #[arg(long)]
    range: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kernel {
    Mul,
    Exp,
    Zeta,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(value_enum)]
    kernel: Kernel,
    /// Zeta exponent.
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Sweep such as 8..20 (inclusive); overrides --prec.
    #[arg(long)]
    sweep: Option<String>,
}

/// Resolved configuration shared by every command.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub field: &'static Field,
    /// Lattice precision.
    pub precision: i64,
    pub prec_given: bool,
    pub s: Option<usize>,
    pub budget: u64,
    pub format: Format,
    pub seed: u64,
}

pub enum Failure {
    Usage(String),
    Budget(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            Error::InvalidField(_)
            | Error::Parse(_)
            | Error::InvalidParameter(_)
            | Error::NotMonic
            | Error::IndexOutOfRange { .. }
            | Error::TooManyVariables { .. }
            | Error::VariableOutOfRange(_) => Failure::Usage(e.to_string()),
            other => Failure::Other(other.to_string()),
        }
    }
}

fn resolve(g: &GlobalArgs) -> Result<RunConfig, Failure> {
    let field = match (g.q, g.p, g.e) {
        (Some(q), None, None) => Field::for_q(q)?,
        (None, p, e) => Field::get(p.unwrap_or(3), e.unwrap_or(1))?,
        (Some(q), p, e) => {
            let f = Field::for_q(q)?;
            if p.is_some_and(|p| p != f.p()) || e.is_some_and(|e| e != f.e()) {
                return Err(Failure::Usage(format!("--q {q} disagrees with --p/--e")));
            }
            f
        }
    };
    let den = field.lattice_den();
    let prec_given = g.prec.is_some();
    let precision = match &g.prec {
        Some(text) => parse_lattice(text, den)?.ok_or_else(|| Failure::Usage("precision must be finite".into()))?,
        None => 16 * den,
    };
    if precision <= 0 {
        return Err(Failure::Usage("precision must be positive".into()));
    }
    if g.s.is_some_and(|s| s > carlitz_core::poly::MAX_T_VARS) {
        return Err(Failure::Usage(format!("at most {} t-variables", carlitz_core::poly::MAX_T_VARS)));
    }
    Ok(RunConfig { field, precision, prec_given, s: g.s, budget: g.budget, format: g.format, seed: g.seed })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = resolve(&cli.config).and_then(|cfg| match &cli.command {
        Command::Compute(a) => commands::compute(&cfg, a),
        Command::Verify(a) => commands::verify(&cfg, a),
        Command::Bench(a) => commands::bench(&cfg, a),
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
