//! The `frobgen` command line.
//!
//! [`run`] parses arguments, executes one subcommand, writes results to `out`
//! and diagnostics to `err`, and returns the process exit code:
//! 0 success, 1 verification failure, 2 usage or input error, 3 resource
//! limit, 4 internal invariant breach.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use frobgen_core::diffop::DiffOp;
use frobgen_core::frobdecomp::decompose;
use frobgen_core::generation::{
    apply_to_localization, example_quadric_witness, frobenius_descent, generator_witness,
    power_witness, verify_certificate, CertOperator, GenerationCertificate, LocalizationElement,
    Operator,
};
use frobgen_core::ideal_chain::{stabilization, Limits};
use frobgen_core::json::{
    self, CertOperatorJson, CertificateJson, ChainJson, CheckJson, DecompositionJson,
    LocalizationJson, OperatorJson, QuadricJson,
};
use frobgen_core::poly::{MonomialOrder, Polynomial, Ring};
use frobgen_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "frobgen",
    version,
    about = "Differential operators over F_p sending 1/f to 1/f^p, with checkable certificates"
)]
pub struct Cli {
    /// Characteristic of the coefficient field.
    #[arg(long, global = true)]
    pub prime: Option<u64>,
    /// Number of variables x1..xd.
    #[arg(long, global = true)]
    pub vars: Option<usize>,
    /// Monomial order used for Gröbner bases and term output.
    #[arg(long, global = true, default_value = "grevlex")]
    pub order: MonomialOrder,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(flatten)]
    pub limits: LimitArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Give up if the chain has not stabilized by this level.
    #[arg(long, global = true, default_value_t = 5)]
    pub max_level: u32,
    /// Largest allowed p^n · deg f.
    #[arg(long, global = true, default_value_t = 4096)]
    pub exponent_cap: u64,
    /// Largest allowed number of terms in an intermediate power.
    #[arg(long, global = true, default_value_t = 5_000_000)]
    pub term_cap: usize,
}

impl LimitArgs {
    fn limits(&self) -> Result<Limits, CliError> {
        if self.max_level < 2 {
            return Err(CliError::usage("E_USAGE", "--max-level must be at least 2"));
        }
        Ok(Limits {
            max_level: self.max_level,
            exponent_cap: self.exponent_cap,
            term_cap: self.term_cap,
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split f into p^n-th power parts.
    Decompose {
        #[arg(short = 'f', long = "poly")]
        f: String,
        #[arg(short = 'n', long)]
        n: u32,
    },
    /// Compute the descending chain I_n(f^(p^n-1)) until it stabilizes.
    Chain {
        #[arg(short = 'f', long = "poly")]
        f: String,
    },
    /// Build and verify an operator Q with Q(1/f) = 1/f^p.
    Witness {
        #[arg(short = 'f', long = "poly")]
        f: String,
        /// Store the operator in right normal form instead of factored form.
        #[arg(long)]
        expand: bool,
        /// Also write the certificate JSON to this file.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Operator sending 1/f to 1/f^(p^e).
    PowerWitness {
        #[arg(short = 'f', long = "poly")]
        f: String,
        #[arg(short = 'e', long)]
        e: u32,
    },
    /// Operator sending 1/f to 1/f^k.
    GenWitness {
        #[arg(short = 'f', long = "poly")]
        f: String,
        #[arg(short = 'k', long)]
        k: u64,
    },
    /// Re-check a certificate from its contents.
    Verify {
        #[arg(short = 'c', long = "cert")]
        cert: PathBuf,
    },
    /// Apply an operator to num / f^(p^t).
    Apply {
        /// Operator JSON, or a certificate whose operator is used.
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        num: String,
        #[arg(long)]
        denom_level: u32,
        #[arg(short = 'f', long = "poly")]
        f: String,
    },
    /// The closed-form operator for x1^2 + x2^2 + x3^2 + x4^2.
    ExampleQuadric,
}

#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub exit: i32,
    pub message: String,
}

impl CliError {
    fn usage(code: &'static str, message: impl Into<String>) -> Self {
        CliError {
            code,
            exit: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, exit) = match &e {
            Error::NotPrime(_) | Error::PrimeTooLarge(_) => ("E_PRIME", EXIT_USAGE),
            Error::Parse { .. } => ("E_PARSE", EXIT_USAGE),
            Error::ContextMismatch(_) => ("E_CONTEXT", EXIT_USAGE),
            Error::Json(_) => ("E_JSON", EXIT_USAGE),
            Error::ZeroInput(_) => ("E_ZERO", EXIT_USAGE),
            Error::ConstantInput(_) => ("E_CONSTANT", EXIT_USAGE),
            Error::UnsupportedPrime(_) => ("E_UNSUPPORTED", EXIT_USAGE),
            Error::InvalidInput(_) | Error::NotAPnPower { .. } | Error::DegreeBoundViolation { .. } => {
                ("E_INPUT", EXIT_USAGE)
            }
            Error::ResourceLimit(_) => ("E_RESOURCE", EXIT_RESOURCE),
            Error::LevelExceeded { .. } => ("E_LEVEL", EXIT_RESOURCE),
            Error::DivisionByZero(_) | Error::InternalError(_) => ("E_INTERNAL", EXIT_INTERNAL),
        };
        CliError {
            code,
            exit,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let text = e.to_string();
                    let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
                    let _ = writeln!(err, "error[E_USAGE]: {first}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {}", e.code, e.message);
            e.exit
        }
    }
}

fn ring(cli: &Cli) -> CliResult<Ring> {
    let p = cli
        .prime
        .ok_or_else(|| CliError::usage("E_USAGE", "--prime is required"))?;
    let d = cli
        .vars
        .ok_or_else(|| CliError::usage("E_USAGE", "--vars is required"))?;
    if d == 0 {
        return Err(CliError::usage("E_USAGE", "--vars must be at least 1"));
    }
    Ok(Ring::with_order(p, d, cli.order)?)
}

fn check_context(cli: &Cli, p: u32, d: usize) -> CliResult<()> {
    if cli.prime.is_some_and(|q| q != p as u64) || cli.vars.is_some_and(|v| v != d) {
        return Err(CliError {
            code: "E_CONTEXT",
            exit: EXIT_USAGE,
            message: format!("input is over F_{p} in {d} variables, which contradicts --prime/--vars"),
        });
    }
    Ok(())
}

fn read(path: &PathBuf) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::usage("E_IO", format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult<()> {
    let text = json::to_string(value)?;
    writeln!(out, "{text}").map_err(io_error)
}

fn io_error(e: std::io::Error) -> CliError {
    CliError {
        code: "E_IO",
        exit: EXIT_USAGE,
        message: e.to_string(),
    }
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(io_error)?
    };
}

#[derive(Serialize)]
struct WitnessOutput {
    p: u32,
    d: usize,
    f: String,
    target: String,
    operator: OperatorJson,
    verified: bool,
}

#[derive(Serialize)]
struct VerifyOutput {
    verified: bool,
    transcript: Vec<CheckJson>,
}

fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult<i32> {
    let limits = cli.limits.limits()?;
    match &cli.command {
        Command::Decompose { f, n } => {
            let r = ring(cli)?;
            let dec = decompose(&r.parse(f)?, *n)?;
            if cli.json {
                emit(out, &DecompositionJson::from_decomposition(&dec))?;
            } else {
                say!(out, "p^n-decomposition with p = {}, n = {}:", r.p(), n);
                for (alpha, root) in dec.parts() {
                    say!(out, "  {alpha}: {root}");
                }
            }
        }
        Command::Chain { f } => {
            let r = ring(cli)?;
            let chain = stabilization(&r.parse(f)?, &limits)?;
            if cli.json {
                emit(out, &ChainJson::from_chain(&chain))?;
            } else {
                say!(out, "f = {}", chain.f);
                for level in &chain.levels {
                    say!(out, "n = {}  we_dim = {}  I_n = {}", level.n, level.we_dim, level.ideal);
                    say!(out, "       basis = [{}]", join(level.basis.basis()));
                }
                say!(out, "s = {}", chain.s);
                say!(out, "stable ideal = {}", chain.stable_ideal);
            }
        }
        Command::Witness { f, expand, output } => {
            let r = ring(cli)?;
            let mut cert = frobenius_descent(&r.parse(f)?, &limits)?;
            if *expand {
                cert = cert.expanded(&limits)?;
            }
            let j = CertificateJson::from_certificate(&cert);
            if let Some(path) = output {
                let text = json::to_string(&j)?;
                fs::write(path, text + "\n").map_err(io_error)?;
            }
            if cli.json {
                emit(out, &j)?;
            } else {
                print_certificate(out, &cert)?;
            }
        }
        Command::PowerWitness { f, e } => {
            let r = ring(cli)?;
            let f = r.parse(f)?;
            let op = power_witness(&f, *e, &limits)?;
            let target = format!("1/f^{}", r.prime_power(*e)?);
            print_operator(cli, out, &f, &op, &target)?;
        }
        Command::GenWitness { f, k } => {
            let r = ring(cli)?;
            let f = r.parse(f)?;
            let op = generator_witness(&f, *k, &limits)?;
            print_operator(cli, out, &f, &op, &format!("1/f^{k}"))?;
        }
        Command::Verify { cert } => {
            let text = read(cert)?;
            let j: CertificateJson = json::from_str(&text)?;
            check_context(cli, j.p, j.d)?;
            let cert = j.to_certificate()?;
            let checks = verify_certificate(&cert, &limits)?;
            let ok = !checks.is_empty() && checks.iter().all(|c| c.ok);
            if cli.json {
                emit(
                    out,
                    &VerifyOutput {
                        verified: ok,
                        transcript: checks
                            .iter()
                            .map(|c| CheckJson {
                                check: c.name.clone(),
                                ok: c.ok,
                            })
                            .collect(),
                    },
                )?;
            } else {
                for c in &checks {
                    say!(out, "{:<28}{}", c.name, if c.ok { "ok" } else { "FAILED" });
                }
                say!(out, "verified: {ok}");
            }
            if !ok {
                return Err(CliError {
                    code: "E_VERIFY",
                    exit: EXIT_VERIFY,
                    message: "certificate does not verify".into(),
                });
            }
        }
        Command::Apply {
            op,
            num,
            denom_level,
            f,
        } => {
            let text = read(op)?;
            let operator = load_operator(cli, &text)?;
            let r = Operator::ring(&operator).clone();
            let u = LocalizationElement::new(&r.parse(f)?, &r.parse(num)?, *denom_level)?;
            let image = apply_to_localization(&operator, &u, &limits)?;
            if cli.json {
                emit(out, &LocalizationJson::from_element(&image))?;
            } else {
                say!(out, "{image}");
            }
        }
        Command::ExampleQuadric => {
            let p = cli
                .prime
                .ok_or_else(|| CliError::usage("E_USAGE", "--prime is required"))?;
            if cli.vars.is_some_and(|d| d != 4) {
                return Err(CliError::usage("E_CONTEXT", "the quadric lives in 4 variables"));
            }
            let ex = example_quadric_witness(p)?;
            if cli.json {
                emit(out, &QuadricJson::from_example(&ex))?;
            } else {
                say!(out, "f     = x1^2 + x2^2 + x3^2 + x4^2 over F_{p}");
                say!(out, "alpha = {}", ex.alpha);
                say!(out, "a     = {}", ex.a);
                say!(out, "Q     = {}", ex.q);
                say!(out, "Q(f^(p-1)) = 1 and Q(1/f) = 1/f^p: verified");
            }
        }
    }
    Ok(EXIT_OK)
}

/// Accepts a certificate, a factored operator, or an operator in normal form.
fn load_operator(cli: &Cli, text: &str) -> CliResult<CertOperator> {
    if let Ok(cert) = json::from_str::<CertificateJson>(text) {
        check_context(cli, cert.p, cert.d)?;
        return Ok(cert.to_certificate()?.operator);
    }
    let j: CertOperatorJson = json::from_str(text)?;
    let (p, d) = j.context();
    check_context(cli, p, d)?;
    Ok(j.to_operator(&Ring::with_order(p as u64, d, cli.order)?)?)
}

fn join(ps: &[Polynomial]) -> String {
    ps.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", ")
}

fn print_certificate(out: &mut dyn Write, cert: &GenerationCertificate) -> CliResult<()> {
    say!(out, "f = {}  over F_{}", cert.f, cert.p());
    say!(out, "s = {}", cert.s);
    say!(out, "stable ideal = ({})", join(&cert.stable_ideal));
    say!(out, "cofactors:");
    for (alpha, h) in &cert.cofactors {
        say!(out, "  {alpha}: {h}");
    }
    match &cert.operator {
        CertOperator::Factored(op) => {
            say!(out, "Q = sum of h_alpha * Q_alpha:");
            for s in op.summands() {
                say!(out, "  Q_{} = {}", s.alpha, s.q);
            }
        }
        CertOperator::Expanded(op) => say!(out, "Q = {op}"),
    }
    say!(out, "level(Q) = {}", cert.operator.level());
    for c in &cert.transcript {
        say!(out, "check {:<28}{}", c.name, if c.ok { "ok" } else { "FAILED" });
    }
    say!(out, "verified: {}", cert.verified);
    Ok(())
}

fn print_operator(
    cli: &Cli,
    out: &mut dyn Write,
    f: &Polynomial,
    op: &DiffOp,
    target: &str,
) -> CliResult<()> {
    if cli.json {
        emit(
            out,
            &WitnessOutput {
                p: f.ring().p(),
                d: f.ring().nvars(),
                f: f.to_string(),
                target: target.to_string(),
                operator: OperatorJson::from_op(op),
                verified: true,
            },
        )
    } else {
        say!(out, "P = {op}");
        say!(out, "level(P) = {}", op.level());
        say!(out, "verified: P(1/f) = {target} for f = {f}");
        Ok(())
    }
}
