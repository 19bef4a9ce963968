use clap::{Args, Parser, Subcommand};
use qproj::checks::{self, CheckResult, Context, Engine, RunOptions, Suite};
use qproj::dump;
use qproj::rep::Rep;
use qproj::scalar::{parse_rational, Coeff, Param, Scalar, Q};
use std::io::Write;
use std::process::ExitCode;

/// Exact verification of the identity catalog for quantum projective space.
#[derive(Parser)]
#[command(name = "qproj", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run identity suites and report one result per catalog entry.
    Verify(VerifyArgs),
    /// Print an operator or an element as JSON.
    #[command(subcommand)]
    Dump(DumpCommand),
}

#[derive(Args)]
struct VerifyArgs {
    /// Dimension N of the defining representation.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Rational value of the parameter t, as NUM/DEN. Without this flag or
    /// --symbolic the default samples 1/2, 2/3 and 3 are used, with a symbolic
    /// pass of the operator suite.
    #[arg(long, conflicts_with = "symbolic")]
    t: Option<String>,
    /// Work over rational functions in t.
    #[arg(long)]
    symbolic: bool,
    /// Comma-separated suites, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Equality backend: oracle, rewrite or cross.
    #[arg(long, default_value = "cross")]
    engine: String,
    /// Truncation in letters of the overcalculus.
    #[arg(long)]
    max_degree: Option<usize>,
    /// Worker threads.
    #[arg(long, env = "QPROJ_JOBS", default_value_t = 1)]
    jobs: usize,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<std::path::PathBuf>,
    /// Record elapsed milliseconds in the report. Off by default so reports are reproducible.
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum DumpCommand {
    /// Matrix entries of a named operator.
    Operator {
        name: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Rational t; symbolic when absent.
        #[arg(long)]
        t: Option<String>,
    },
    /// Normal form of an expression such as `p dp` or `v[1] f[1]`.
    Element {
        expr: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Rational t; symbolic when absent.
        #[arg(long)]
        t: Option<String>,
    },
}

/// Failure to set up a run, mapped to exit code 2.
struct ConfigError(String);

impl<E: std::fmt::Display> From<E> for ConfigError {
    fn from(e: E) -> Self {
        ConfigError(e.to_string())
    }
}

fn parse_t(s: &str) -> Result<Q, ConfigError> {
    let t = parse_rational(s).ok_or_else(|| ConfigError(format!("invalid rational `{s}`")))?;
    if Coeff::is_zero(&t) {
        return Err(ConfigError("t must be nonzero".into()));
    }
    Ok(t)
}

fn parse_suites(s: &str) -> Result<Vec<Suite>, ConfigError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        if part == "all" {
            out.extend(Suite::SELECTABLE);
        } else {
            out.push(
                Suite::parse(part)
                    .filter(|s| *s != Suite::Guards)
                    .ok_or_else(|| ConfigError(format!("unknown suite `{part}`")))?,
            );
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn run_one<F: Coeff>(
    param: Param<F>,
    label: &str,
    engine: Engine,
    degree: usize,
    opts: &RunOptions,
) -> Result<Vec<CheckResult>, ConfigError> {
    let ctx = Context::new(param, engine, degree).map_err(|e| ConfigError(e.to_string()))?;
    Ok(checks::run(&ctx, label, opts))
}

fn verify(args: VerifyArgs) -> Result<bool, ConfigError> {
    if args.dim < 2 {
        return Err(ConfigError("--dim must be at least 2".into()));
    }
    let engine = Engine::parse(&args.engine).ok_or_else(|| ConfigError(format!("unknown engine `{}`", args.engine)))?;
    let suites = parse_suites(&args.suite)?;
    let degree = args.max_degree.unwrap_or_else(|| checks::default_max_degree(args.dim));
    let opts = RunOptions { suites: suites.clone(), jobs: args.jobs, timings: args.timings };
    let n = args.dim;
    let mut results = Vec::new();
    if args.symbolic {
        results.extend(run_one(Param::<Scalar>::symbolic(n), "symbolic", engine, degree, &opts)?);
    } else if let Some(t) = &args.t {
        let t0 = parse_t(t)?;
        results.extend(run_one(Param::rational(n, t0.clone()), &t0.to_string(), engine, degree, &opts)?);
    } else {
        for t in ["1/2", "2/3", "3"] {
            results.extend(run_one(Param::rational(n, parse_t(t)?), t, engine, degree, &opts)?);
        }
        if suites.contains(&Suite::Operators) {
            let symbolic = RunOptions { suites: vec![Suite::Operators], ..opts.clone() };
            results.extend(run_one(Param::<Scalar>::symbolic(n), "symbolic", engine, degree, &symbolic)?);
        }
    }
    let json = serde_json::to_string_pretty(&results)?;
    match &args.report {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => emit(&json),
    }
    for r in &results {
        eprintln!(
            "{:<22} {:<8} {:<48} residual {}",
            format!("{:?}", r.status).to_lowercase(),
            r.t,
            r.id,
            r.residual_terms
        );
    }
    Ok(checks::all_as_expected(&results))
}

fn dump_with<F: Coeff>(param: Param<F>, cmd: &DumpCommand) -> Result<String, ConfigError> {
    match cmd {
        DumpCommand::Operator { name, .. } => {
            let rep = Rep::build(param)?;
            let op = rep.named(name).ok_or_else(|| {
                ConfigError(format!("unknown operator `{name}`; known: {}", Rep::<F>::OPERATOR_NAMES.join(", ")))
            })?;
            Ok(serde_json::to_string(&dump::operator(op))?)
        }
        DumpCommand::Element { expr, .. } => {
            let ctx = Context::new(param, Engine::Rewrite, 0).map_err(|e| ConfigError(e.to_string()))?;
            let calc = ctx.calc().map_err(|e| ConfigError(e.to_string()))?;
            let x = dump::parse(expr, &calc)?;
            Ok(serde_json::to_string(&dump::element(&x, &calc.model)?)?)
        }
    }
}

fn dump(cmd: DumpCommand) -> Result<(), ConfigError> {
    let (dim, t) = match &cmd {
        DumpCommand::Operator { dim, t, .. } | DumpCommand::Element { dim, t, .. } => (*dim, t.clone()),
    };
    if dim < 2 {
        return Err(ConfigError("--dim must be at least 2".into()));
    }
    let out = match t {
        Some(t) => dump_with(Param::rational(dim, parse_t(&t)?), &cmd)?,
        None => dump_with(Param::<Scalar>::symbolic(dim), &cmd)?,
    };
    emit(&out);
    Ok(())
}

/// Writes a line to standard output, ignoring a closed pipe.
fn emit(s: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{s}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Dump(cmd) => dump(cmd).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(ConfigError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
