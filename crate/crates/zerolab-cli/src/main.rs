//! `zerolab`: eigenangle statistics for the classical compact groups and
//! one-level densities of L-function zeros, from one binary.
//!
//! Every run is deterministic: random ensembles are keyed by `--seed` and
//! reduced in draw-index order, so repeated invocations (with any worker
//! count) produce byte-identical reports.

mod report;
mod runners;

use clap::error::ErrorKind;
use clap::parser::ValueSource;
use clap::{Arg, ArgMatches, Command};
use report::Format;
use std::collections::HashMap;
use std::process::ExitCode;

/// Input errors (bad flags, files, specs) exit 1; numeric failures
/// (structure residuals, failed verifications) exit 2.
pub enum CliError {
    Input(String),
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numeric(m) => m,
        }
    }
}

/// Resolved argument context for one subcommand invocation.
///
/// Lookup order per key: explicit command-line flag, then the config file,
/// then the flag's built-in default.
pub struct Ctx<'a> {
    matches: &'a ArgMatches,
    config: HashMap<String, String>,
}

impl Ctx<'_> {
    fn raw(&self, key: &str) -> Option<String> {
        if self.matches.value_source(key) == Some(ValueSource::CommandLine) {
            return self.matches.get_one::<String>(key).cloned();
        }
        if let Some(v) = self.config.get(key) {
            return Some(v.clone());
        }
        self.matches.get_one::<String>(key).cloned()
    }

    pub fn require(&self, key: &str) -> Result<String, CliError> {
        self.raw(key).ok_or_else(|| {
            CliError::Input(format!(
                "missing --{key}: pass it on the command line or set `{key} = ...` in the config file"
            ))
        })
    }

    pub fn parse<T>(&self, key: &str) -> Result<T, CliError>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        let raw = self.require(key)?;
        raw.parse()
            .map_err(|e| CliError::Input(format!("invalid --{key} value {raw:?}: {e}")))
    }
}

fn load_config(path: &str) -> Result<HashMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read config {path}: {e}")))?;
    let mut map = HashMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Input(format!(
                "{path}: line {}: expected `key = value`, got {line:?}",
                idx + 1
            ))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn arg(id: &'static str, help: &'static str) -> Arg {
    Arg::new(id).long(id).value_name("VALUE").help(help)
}

fn arg_default(id: &'static str, default: &'static str, help: &'static str) -> Arg {
    arg(id, help).default_value(default)
}

fn with_common(cmd: Command) -> Command {
    cmd.arg(arg(
        "config",
        "Config file of `key = value` lines supplying defaults for any flag of this subcommand",
    ))
    .arg(arg_default(
        "out",
        "csv",
        "Report format: csv or json",
    ))
    .arg(arg(
        "output",
        "Write the report to this file instead of stdout",
    ))
}

fn test_fn_arg() -> Arg {
    arg_default(
        "test-fn",
        "fejer:0.8",
        "Test function spec fejer:R (Fejer pair with Fourier support radius R; R is a decimal or a fraction like 4/5)",
    )
}

fn build_command() -> Command {
    let rmt_common = |c: Command, default_stat: &'static str| {
        c.arg(arg_default("group", "U", "Matrix group: U, SOeven, SOodd, or USp"))
            .arg(arg_default("dim", "10", "Dimension parameter of the group family"))
            .arg(arg_default("draws", "1000", "Number of independent Haar draws"))
            .arg(arg_default("seed", "1", "Base seed; draw i uses RNG stream i"))
            .arg(arg_default("stat", default_stat, "Statistic: one_level or pair_corr"))
            .arg(test_fn_arg())
            .after_help("CSV columns: group,n,draws,statistic,mean,stderr,target,abs_dev")
    };
    Command::new("zerolab")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Eigenangle statistics of classical compact groups and one-level densities of L-function zeros")
        .long_about(
            "Numerical laboratory for the Katz-Sarnak density philosophy: Monte Carlo \
             eigenangle statistics for Haar-random classical matrices, closed-form symmetry \
             kernels, explicit-formula densities for individual L-functions, and exact \
             rational nonvanishing bounds.\n\n\
             Every flag of every subcommand may also be supplied by a `--config` file of \
             `key = value` lines; explicit flags win over the file, the file wins over \
             built-in defaults. Runs are deterministic for a fixed seed regardless of \
             thread count; set ZEROLAB_THREADS to pin the rayon pool size.",
        )
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(with_common(rmt_common(
            Command::new("rmt-density").about(
                "Monte Carlo one-level density of Haar-random eigenangles vs. the Katz-Sarnak kernel prediction",
            ),
            "one_level",
        )))
        .subcommand(with_common(rmt_common(
            Command::new("rmt-paircorr").about(
                "Monte Carlo pair correlation of Haar-random eigenangles vs. Montgomery's sine-kernel prediction",
            ),
            "pair_corr",
        )))
        .subcommand(with_common(
            Command::new("kernel-pair")
                .about("Closed-form pairing of a test function against the symmetry-type density kernels")
                .arg(arg_default(
                    "class",
                    "all",
                    "Symmetry class: U, Sp, SOeven, SOodd, O, or all",
                ))
                .arg(test_fn_arg())
                .after_help("CSV columns: class,support,pairing"),
        ))
        .subcommand(with_common(
            Command::new("indist-check")
                .about(
                    "Check whether the three orthogonal-flavor pairings coincide for a test \
                     function with Fourier support inside (-1, 1)",
                )
                .arg(test_fn_arg())
                .arg(arg_default(
                    "tol",
                    "1e-10",
                    "Maximum allowed spread among the orthogonal pairings when support < 1",
                ))
                .after_help(
                    "CSV columns: support,below_one,orthogonal,orthogonal_even,orthogonal_odd,\
                     max_spread,symplectic,unitary",
                ),
        ))
        .subcommand(with_common(
            Command::new("ef-density")
                .about("One-level density of a single L-function via the explicit formula")
                .arg(arg(
                    "coefficients",
                    "Coefficient file: conductor/root-number header plus `p theta` lines",
                ))
                .arg(arg_default(
                    "nu-max",
                    "3",
                    "Highest prime-power order summed explicitly (>= 2); higher orders go to the tail bound",
                ))
                .arg(test_fn_arg())
                .after_help("CSV columns: conductor,support,nu_max,value,tail_bound"),
        ))
        .subcommand(with_common(
            Command::new("density-from-zeros")
                .about("One-level density evaluated directly from normalized zero ordinates")
                .arg(arg(
                    "zeros",
                    "Zeros file: a conductor header plus one ordinate per line",
                ))
                .arg(test_fn_arg())
                .after_help("CSV columns: conductor,ordinates,value"),
        ))
        .subcommand(with_common(
            Command::new("second-moment")
                .about(
                    "Weighted prime sum over squares that separates symplectic from orthogonal \
                     symmetry; converges to phi(0)/2 as the conductor grows",
                )
                .arg(arg_default(
                    "log-conductor",
                    "30",
                    "Logarithm of the conductor scale; primes run up to its exponential",
                ))
                .arg(test_fn_arg())
                .after_help("CSV columns: log_conductor,support,sum,target,deviation"),
        ))
        .subcommand(with_common(
            Command::new("sieve-check")
                .about("Round-trip the exact integer inversion on divisor lattices over random vectors")
                .arg(arg_default("q-max", "1000", "Check every modulus up to this bound"))
                .arg(arg_default("vectors", "10", "Random vectors per modulus"))
                .arg(arg_default("seed", "1", "Seed for the random vectors"))
                .after_help("CSV columns: q_max,vectors_per_q,checked,status"),
        ))
        .subcommand(with_common(
            Command::new("nonvanish")
                .about(
                    "Exact rational nonvanishing bounds from the one-level density: average \
                     central-zero multiplicity and the nonvanishing proportion lower bound",
                )
                .arg(arg(
                    "support",
                    "Fourier support radius as an exact rational: a/b, an integer, or a finite decimal",
                ))
                .after_help("CSV columns: support,multiplicity_bound,p0_lower,nontrivial"),
        ))
        .subcommand(with_common(
            Command::new("primes")
                .about("Sieve of Eratosthenes summary: prime count and largest prime up to the limit")
                .arg(arg_default("limit", "1000", "Upper bound of the sieve"))
                .after_help("CSV columns: limit,count,largest"),
        ))
        .subcommand(with_common(
            Command::new("verify-testfn")
                .about(
                    "Verify a test-function spec: evenness, compact Fourier support, \
                     transform consistency, and mass normalizations",
                )
                .arg(test_fn_arg())
                .arg(arg_default(
                    "tol",
                    "1e-8",
                    "Tolerance for each verification residual",
                ))
                .after_help(
                    "CSV columns: support,evenness_dev,support_dev,transform_dev,mass_dev,\
                     hat_mass_dev,tolerance,pass",
                ),
        ))
}

fn init_threads() {
    let Ok(raw) = std::env::var("ZEROLAB_THREADS") else {
        return;
    };
    match raw.parse::<usize>() {
        Ok(n) if n >= 1 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => eprintln!("zerolab: ignoring ZEROLAB_THREADS={raw:?} (want a positive integer)"),
    }
}

fn dispatch(name: &str, ctx: &Ctx) -> Result<report::Report, CliError> {
    match name {
        "rmt-density" => runners::rmt_density(ctx),
        "rmt-paircorr" => runners::rmt_paircorr(ctx),
        "kernel-pair" => runners::kernel_pair(ctx),
        "indist-check" => runners::indist_check(ctx),
        "ef-density" => runners::ef_density(ctx),
        "density-from-zeros" => runners::density_from_zeros_cmd(ctx),
        "second-moment" => runners::second_moment(ctx),
        "sieve-check" => runners::sieve_check(ctx),
        "nonvanish" => runners::nonvanish(ctx),
        "primes" => runners::primes(ctx),
        "verify-testfn" => runners::verify_testfn(ctx),
        other => Err(CliError::Input(format!("unknown subcommand {other:?}"))),
    }
}

fn run(matches: &ArgMatches) -> Result<Option<String>, CliError> {
    let (name, sub) = matches
        .subcommand()
        .expect("subcommand_required is set on the top-level command");
    let config = match sub.get_one::<String>("config") {
        Some(path) => load_config(path)?,
        None => HashMap::new(),
    };
    let ctx = Ctx {
        matches: sub,
        config,
    };
    let format: Format = ctx.parse("out")?;
    let report = dispatch(name, &ctx)?;
    let rendered = report.render(format);
    match ctx.raw("output") {
        Some(path) => std::fs::write(&path, &rendered)
            .map_err(|e| CliError::Input(format!("cannot write {path}: {e}")))?,
        None => print!("{rendered}"),
    }
    Ok(report.failure)
}

fn main() -> ExitCode {
    init_threads();
    let matches = match build_command().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&matches) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(failure)) => {
            eprintln!("zerolab: {failure}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("zerolab: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}
