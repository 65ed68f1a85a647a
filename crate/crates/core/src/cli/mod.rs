//! `bsk`: evaluate the kernel, check conditions, scan parameter grids, locate
//! critical orders, and run the verification suites.
//!
//! Exit codes: 0 success (condition holds), 1 condition fails or a
//! verification check fails, 2 usage or parameter error, 3 inconclusive.

pub mod config;
pub mod scan;

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::criteria::{critical_nu, ClassParams, Condition, ConditionForm, DixitPalParams, MARGIN_TOL, NU_TOL};
use crate::error::Error;
use crate::operators::{coefficient_sum_l, coefficient_sum_t, NormalizedSeries, Outcome};
use crate::series::{eval_normalized, eval_phi, moments, CoefficientSequence, KernelOrder, DEFAULT_TOL};
use crate::verifier::suites::{self, Suite, SuiteConfig};
use config::Config;
use scan::{fmt_f64, write_scan, GridRange, ScanSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

const DEFAULT_STEPS: usize = 11;

#[derive(Debug, Parser)]
#[command(name = "bsk", version, about = "Bessel-Struve kernel and class-membership criteria")]
struct Cli {
    /// TOML file with default settings (tol, margin_tol, nu_tol, radius, num_points, nu_steps, alpha_steps, lambda_steps, seed)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate S_nu(z), z S_nu(z), Phi(z) and the kernel derivatives at 1
    Eval(EvalArgs),
    /// Check one membership condition and exit 0 (holds), 1 (fails) or 3 (inconclusive)
    Check(CheckArgs),
    /// Evaluate a condition over a (nu, lambda, alpha) grid and write CSV
    Scan(ScanArgs),
    /// Bisect for the order at which a condition's margin crosses zero
    Critical(CriticalArgs),
    /// Run the verification suites
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConditionArg {
    T,
    L,
    Starlike,
    Convex,
    Jnu,
    Qnu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormArg {
    Proof,
    Stated,
}

impl From<FormArg> for ConditionForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Proof => ConditionForm::ProofForm,
            FormArg::Stated => ConditionForm::StatedForm,
        }
    }
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long, allow_hyphen_values = true)]
    nu: f64,
    /// Complex argument, e.g. `0.5`, `0.3+0.4i`
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    z: String,
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<f64>,
}

#[derive(Debug, Args)]
struct ConditionArgs {
    /// Which form of condition `t` to evaluate (`stated` drops the 2 lambda s1 term)
    #[arg(long, value_enum, default_value = "proof")]
    form: FormArg,
    /// A of the class R^tau(A, B) (condition `jnu`)
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// B of the class R^tau(A, B) (condition `jnu`)
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// |tau| of the class R^tau(A, B) (condition `jnu`)
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<f64>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[arg(value_enum)]
    condition: ConditionArg,
    /// Kernel order (not used with --series-file)
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
    #[command(flatten)]
    cond: ConditionArgs,
    /// Check the coefficient condition for a series read from this file instead of z S_nu
    #[arg(long, value_name = "PATH")]
    series_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(value_enum)]
    condition: ConditionArg,
    /// Order grid: `v`, `lo,hi` or `lo,hi,steps`
    #[arg(long, allow_hyphen_values = true)]
    nu: String,
    /// Lambda grid: `v`, `lo,hi` or `lo,hi,steps`
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    lambda: String,
    /// Alpha grid: `v`, `lo,hi` or `lo,hi,steps`
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    alpha: String,
    #[command(flatten)]
    cond: ConditionArgs,
    /// Output CSV path
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct CriticalArgs {
    #[arg(value_enum)]
    condition: ConditionArg,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
    #[command(flatten)]
    cond: ConditionArgs,
    /// Bracket `lo,hi` with negative margin at lo and positive at hi
    #[arg(long, default_value = "0.6,20", allow_hyphen_values = true)]
    bracket: String,
    #[arg(long, allow_hyphen_values = true)]
    margin_tol: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    nu_tol: Option<f64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// all, closed-form, moments, ode, oracle, sufficiency, necessity, bisection
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long)]
    seed: Option<u64>,
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let config = match &cli.config {
        Some(path) => match Config::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: config {e}");
                return EXIT_USAGE;
            }
        },
        None => Config::default(),
    };
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(a, &config),
        Command::Check(a) => cmd_check(a),
        Command::Scan(a) => cmd_scan(a, &config),
        Command::Critical(a) => cmd_critical(a, &config),
        Command::Verify(a) => cmd_verify(a, &config),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Inconclusive { .. } => EXIT_INCONCLUSIVE,
                _ => EXIT_USAGE,
            }
        }
    }
}

type CmdResult = Result<i32, Error>;

fn fmt_complex(z: Complex64) -> String {
    format!("{} {}", fmt_f64(z.re), fmt_f64(z.im))
}

fn cmd_eval(args: EvalArgs, config: &Config) -> CmdResult {
    let tol = args.tol.or(config.tol).unwrap_or(DEFAULT_TOL);
    let nu = KernelOrder::new(args.nu)?;
    let z = Complex64::from_str(args.z.trim()).map_err(|_| Error::param(format!("cannot parse z = `{}`", args.z)))?;
    let seq = CoefficientSequence::with_weighted_tail(nu, tol, 0, z.norm())?;
    let m = moments(nu, tol)?;
    println!("nu         = {}", fmt_f64(nu.value()));
    println!("z          = {}", fmt_complex(z));
    println!("S          = {}", fmt_complex(seq.eval(z)));
    println!("zS         = {}", fmt_complex(eval_normalized(nu, z, tol)?));
    println!("Phi        = {}", fmt_complex(eval_phi(nu, z, tol)?));
    println!("S(1)       = {}", fmt_f64(m.s0));
    println!("S'(1)      = {}", fmt_f64(m.s1));
    println!("S''(1)     = {}", fmt_f64(m.s2));
    println!("S'''(1)    = {}", fmt_f64(m.s3));
    println!("terms      = {}", seq.truncation() + 1);
    println!("tail_bound = {}", fmt_f64(seq.weighted_tail(0, z.norm())));
    println!("operator_valid = {}", nu.operator_valid());
    Ok(EXIT_OK)
}

fn build_condition(cond: ConditionArg, args: &ConditionArgs) -> Result<Condition, Error> {
    if args.form == FormArg::Stated && cond != ConditionArg::T {
        return Err(Error::param("--form stated applies only to condition t"));
    }
    Ok(match cond {
        ConditionArg::T => Condition::T(args.form.into()),
        ConditionArg::L => Condition::L,
        ConditionArg::Starlike => Condition::Starlike,
        ConditionArg::Convex => Condition::Convex,
        ConditionArg::Qnu => Condition::Qnu,
        ConditionArg::Jnu => match (args.a, args.b, args.tau) {
            (Some(a), Some(b), Some(tau)) => Condition::Jnu(DixitPalParams::new(a, b, tau)?),
            _ => return Err(Error::param("condition jnu needs --a, --b and --tau")),
        },
    })
}

fn class_params(condition: &Condition, lambda: f64, alpha: f64) -> Result<ClassParams, Error> {
    if matches!(condition, Condition::Starlike | Condition::Convex) && lambda != 0.0 {
        return Err(Error::param(format!("{} fixes lambda = 0", condition.name())));
    }
    ClassParams::new(lambda, alpha)
}

fn cmd_check(args: CheckArgs) -> CmdResult {
    let condition = build_condition(args.condition, &args.cond)?;
    let p = class_params(&condition, args.lambda, args.alpha)?;
    if let Some(path) = &args.series_file {
        return check_series(path, &condition, p);
    }
    let nu = args
        .nu
        .ok_or_else(|| Error::param("--nu is required unless --series-file is given"))?;
    let nu = KernelOrder::new(nu)?;
    let v = condition.verdict(nu, p)?;
    println!("condition = {}", condition.name());
    println!("form = {}", v.condition_form);
    println!("nu = {}", fmt_f64(nu.value()));
    println!("lambda = {}", fmt_f64(p.lambda()));
    println!("alpha = {}", fmt_f64(p.alpha()));
    println!("lhs = {}", fmt_f64(v.lhs));
    println!("rhs = {}", fmt_f64(v.rhs));
    println!("margin = {}", fmt_f64(v.margin));
    println!("holds = {}", v.holds);
    Ok(if v.holds { EXIT_OK } else { EXIT_FAILS })
}

fn check_series(path: &std::path::Path, condition: &Condition, p: ClassParams) -> CmdResult {
    let text = std::fs::read_to_string(path).map_err(|e| Error::param(format!("{}: {e}", path.display())))?;
    let f = NormalizedSeries::from_text(&text)?;
    let sum = match condition {
        Condition::T(ConditionForm::ProofForm) | Condition::Starlike => coefficient_sum_t(&f, p),
        Condition::L | Condition::Convex => coefficient_sum_l(&f, p),
        _ => {
            return Err(Error::param(format!(
                "--series-file supports conditions t (proof form), l, starlike and convex, not {}",
                condition.name()
            )))
        }
    };
    let outcome = sum.outcome();
    println!("condition = {}", condition.name());
    println!("series = {}", path.display());
    println!("lambda = {}", fmt_f64(p.lambda()));
    println!("alpha = {}", fmt_f64(p.alpha()));
    println!("partial_sum = {}", fmt_f64(sum.partial));
    println!("tail_bound = {}", fmt_f64(sum.tail));
    println!("threshold = {}", fmt_f64(sum.threshold));
    println!(
        "outcome = {}",
        match outcome {
            Outcome::Holds => "holds",
            Outcome::Fails => "fails",
            Outcome::Inconclusive => "inconclusive",
        }
    );
    if f.sign_convention() == crate::operators::SignConvention::NegativeCoefficients {
        println!("note = negative coefficients: the coefficient condition is also necessary");
    }
    Ok(match outcome {
        Outcome::Holds => EXIT_OK,
        Outcome::Fails => EXIT_FAILS,
        Outcome::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn cmd_scan(args: ScanArgs, config: &Config) -> CmdResult {
    let condition = build_condition(args.condition, &args.cond)?;
    let spec = ScanSpec {
        condition,
        nu: GridRange::parse(&args.nu, config.nu_steps.unwrap_or(DEFAULT_STEPS))?,
        lambda: GridRange::parse(&args.lambda, config.lambda_steps.unwrap_or(DEFAULT_STEPS))?,
        alpha: GridRange::parse(&args.alpha, config.alpha_steps.unwrap_or(DEFAULT_STEPS))?,
    };
    let rows = write_scan(&spec, &args.output).map_err(Error::Parameter)?;
    eprintln!("wrote {rows} rows to {}", args.output.display());
    Ok(EXIT_OK)
}

fn cmd_critical(args: CriticalArgs, config: &Config) -> CmdResult {
    let condition = build_condition(args.condition, &args.cond)?;
    let p = class_params(&condition, args.lambda, args.alpha)?;
    let bracket = match GridRange::parse(&args.bracket, 2)? {
        GridRange { lo, hi, steps: 2 } => (lo, hi),
        _ => return Err(Error::param(format!("bracket `{}` must be `lo,hi`", args.bracket))),
    };
    let margin_tol = args.margin_tol.or(config.margin_tol).unwrap_or(MARGIN_TOL);
    let nu_tol = args.nu_tol.or(config.nu_tol).unwrap_or(NU_TOL);
    let b = critical_nu(condition, p, bracket, margin_tol, nu_tol)?;
    println!("condition = {}", condition.name());
    println!("lambda = {}", fmt_f64(p.lambda()));
    println!("alpha = {}", fmt_f64(p.alpha()));
    println!("nu_star = {}", fmt_f64(b.nu));
    println!("margin = {}", fmt_f64(b.margin));
    println!("iterations = {}", b.iterations);
    Ok(EXIT_OK)
}

fn cmd_verify(args: VerifyArgs, config: &Config) -> CmdResult {
    let suite = Suite::parse(&args.suite).ok_or_else(|| Error::param(format!("unknown suite `{}`", args.suite)))?;
    let defaults = SuiteConfig::default();
    let cfg = SuiteConfig {
        seed: args.seed.or(config.seed).unwrap_or(defaults.seed),
        radius: config.radius.unwrap_or(defaults.radius),
        num_points: config.num_points.unwrap_or(defaults.num_points),
        tol: config.tol.unwrap_or(defaults.tol),
        ..defaults
    };
    // Reject bad sampling settings up front rather than as failed checks.
    crate::verifier::DiskSampling::with_defaults(cfg.radius, cfg.num_points)?;
    println!("suite = {}, seed = {}", args.suite, cfg.seed);
    let results = suites::run(suite, &cfg);
    let mut all = true;
    for r in &results {
        println!("{r}");
        all &= r.passed;
    }
    println!("{}", if all { "all checks passed" } else { "some checks FAILED" });
    Ok(if all { EXIT_OK } else { EXIT_FAILS })
}
