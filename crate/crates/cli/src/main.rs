//! `spf-lab`: command-line access to the spf-core toolkit.
//!
//! Every subcommand prints JSON on stdout (or writes it to `--out` together
//! with a `<out>.manifest.json` sidecar). Exit codes: 0 success, 1 invalid
//! input or usage, 2 numerical failure. Errors are reported on stderr as a
//! single JSON object.

mod commands;
mod failure;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use failure::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "spf-lab",
    version,
    about = "Simple partial fractions: norms, bounds and extremal searches"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an SPF or one of its derivatives at a complex point.
    Eval(EvalArgs),
    /// Sup- or L^p-norm on the real line.
    Norm(NormArgs),
    /// Gorin or Gelfond functional.
    Functional(FunctionalArgs),
    /// Blaschke product machinery on a symmetric configuration.
    Blaschke(BlaschkeArgs),
    /// Run the symmetrization pipeline around one pole.
    Symmetrize(SymmetrizeArgs),
    /// Run a bound checker.
    Check(CheckArgs),
    /// Multistart search for small functional values.
    Search(SearchArgs),
    /// Search over a list of orders.
    Scan(ScanArgs),
    /// Series and closed-form minorants.
    Series(SeriesArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// SPF JSON file (`-` for stdin).
    #[arg(long)]
    pub input: PathBuf,
    /// Evaluation point as `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub at: (f64, f64),
    /// Derivative order.
    #[arg(long, default_value_t = 0)]
    pub derivative: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormKind {
    Sup,
    Lp,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = NormKind::Sup)]
    pub kind: NormKind,
    /// Exponent for `--kind lp`.
    #[arg(long, value_parser = parse_exponent)]
    pub p: Option<f64>,
    /// Norm of the derivative instead.
    #[arg(long)]
    pub derivative: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FunctionalArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// `gorin` or `gelfond`.
    #[arg(long, default_value = "gorin")]
    pub kind: spf_core::FunctionalKind,
    /// Exponent in (1, inf].
    #[arg(long, value_parser = parse_exponent, default_value = "inf")]
    pub p: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BlaschkeCheck {
    /// B(z) at `--at`.
    Eval,
    /// Phase density μ(x) at `--x`.
    Mu,
    /// Continuous phase Θ(x), Θ(0) = 0, at `--x`.
    Phase,
    /// Real solutions of B = −1.
    Roots,
    /// Partial fraction identity for (1−B)/(1+B) at `--samples` random points.
    Decomposition,
    /// Θ(r_k)/2 against π(2k−1)/2 for `--k`.
    PhaseIntegral,
    /// Extrema of μ on [0, `--r`].
    MuRange,
    /// |μ(x1) − μ(x2)| ≤ 3 ln(1 + |x1−x2|/(2 y1)) on `--pairs` random pairs.
    Continuity,
}

#[derive(Debug, Args)]
pub struct BlaschkeArgs {
    /// Configuration JSON (`{"upper_poles":[...]}`), or an SPF.
    #[arg(long, alias = "config")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub check: BlaschkeCheck,
    /// Treat the input as an arbitrary SPF and run the symmetrization
    /// pipeline around `--pole-index` first.
    #[arg(long)]
    pub symmetrize_input: bool,
    #[arg(long, default_value_t = 0)]
    pub pole_index: usize,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub at: Option<(f64, f64)>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub r: Option<f64>,
    /// Continuity height; defaults to the tracked pole height with
    /// `--symmetrize-input`.
    #[arg(long)]
    pub y1: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub pairs: usize,
    /// Continuity pairs are drawn from [−span, span]; defaults to 10·y1.
    #[arg(long)]
    pub span: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SymmetrizeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// 0-based index of the target pole in the pole list sorted by (re, im).
    #[arg(long, alias = "target", default_value_t = 0)]
    pub pole_index: usize,
    /// Include every intermediate fraction.
    #[arg(long)]
    pub emit_stages: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Theorem1,
    Theorem2,
    Lemma1,
    Lemma3,
    BetaP,
    MuSup,
    Historical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    Divide,
    Rescale,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub which: CheckKind,
    /// SPF JSON, or a configuration for lemma1 and mu-sup.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Exponent for beta-p.
    #[arg(long, value_parser = parse_exponent)]
    pub p: Option<f64>,
    /// Pole height for lemma1.
    #[arg(long)]
    pub y1: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    /// Order for the historical table.
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, value_enum, default_value_t = NormalizationArg::Divide)]
    pub normalization: NormalizationArg,
    /// Also write the reports as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchOptions {
    #[arg(long, default_value = "gorin")]
    pub functional: spf_core::FunctionalKind,
    #[arg(long, value_parser = parse_exponent, default_value = "inf")]
    pub p: f64,
    /// ones, single-heavy or balanced.
    #[arg(long, default_value = "ones")]
    pub pattern: spf_core::Pattern,
    /// Explicit multiplicities (search only); overrides --pattern and --n.
    #[arg(long, value_delimiter = ',')]
    pub multiplicities: Option<Vec<u32>>,
    /// Keep every pole in the upper half-plane.
    #[arg(long)]
    pub upper_half: bool,
    #[arg(long, default_value_t = spf_core::search::DEFAULT_MULTISTARTS)]
    pub multistarts: u32,
    /// Evaluations per start.
    #[arg(long, default_value_t = spf_core::search::DEFAULT_EVAL_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exit with code 2 when a winning start ran out of budget.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: Option<u32>,
    #[command(flatten)]
    pub options: SearchOptions,
    /// Also write the certificate of the result here.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_list: Vec<u32>,
    #[command(flatten)]
    pub options: SearchOptions,
    /// Run certificate() on every winner and include it in the JSON.
    #[arg(long)]
    pub certify: bool,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub op: SeriesOp,
}

#[derive(Debug, Subcommand)]
pub enum SeriesOp {
    /// tanh(a) from its partial fraction series.
    Tanh {
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Full and simplified minorants for a pole of multiplicity nk.
    Theorem1Minorant {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        nk: u32,
    },
    Lemma2Minorant {
        #[arg(long)]
        mu2: f64,
        #[arg(long, default_value_t = 1)]
        n1: u32,
    },
    /// δ(θ, n1).
    Delta {
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 1)]
        n1: u32,
    },
    /// θ solving μ2·δ(θ, n1) = 1.
    Theta {
        #[arg(long)]
        mu2: f64,
        #[arg(long, default_value_t = 1)]
        n1: u32,
    },
}

fn parse_complex(s: &str) -> Result<(f64, f64), String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected 're,im', got '{s}'"))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad number '{t}': {e}"))
    };
    Ok((parse(re)?, parse(im)?))
}

fn parse_exponent(s: &str) -> Result<f64, String> {
    spf_core::io::exponent::parse(s)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("SPFLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::validation(
            "environment",
            format!("SPFLAB_THREADS must be a positive integer, got '{raw}'"),
        )
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::validation("environment", e.to_string()))
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("{}", f.to_json());
    ExitCode::from(f.code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let kind = match e.kind() {
                ErrorKind::InvalidSubcommand => "unknown_subcommand",
                _ => "usage",
            };
            let _ = e.print();
            return fail(&Failure::validation(kind, e.kind().to_string()));
        }
    };
    if let Err(f) = configure_threads() {
        return fail(&f);
    }
    match commands::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => fail(&f),
    }
}
