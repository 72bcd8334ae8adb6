use std::fs;
use std::io::Read;
use std::path::Path;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use spf_core::io::{exponent, ConfigurationRecord, SpfRecord};
use spf_core::search::{certificate, optimize, scan_orders, Certificate, ScanEntry};
use spf_core::{
    bounds, functional_with, lp_norm_real, sup_norm_real, BoundReport, FunctionalKind, NormOptions,
    SearchConfig, Spf64, SymmetricConfiguration64,
};

use crate::failure::Failure;
use crate::output::{emit, fmt_complex, fmt_f64, write_csv, RunContext};
use crate::{
    BlaschkeArgs, BlaschkeCheck, CheckArgs, CheckKind, Command, EvalArgs, FunctionalArgs, NormArgs,
    NormKind, NormalizationArg, ScanArgs, SearchArgs, SearchOptions, SeriesArgs, SeriesOp,
    SymmetrizeArgs,
};

pub fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Eval(a) => eval(a),
        Command::Norm(a) => norm(a),
        Command::Functional(a) => functional(a),
        Command::Blaschke(a) => blaschke(a),
        Command::Symmetrize(a) => symmetrize(a),
        Command::Check(a) => check(a),
        Command::Search(a) => search(a),
        Command::Scan(a) => scan(a),
        Command::Series(a) => series(a),
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        fs::read(path).map_err(|e| Failure::validation("io", format!("{}: {e}", path.display())))
    }
}

fn read_spf(path: &Path) -> Result<(Spf64, Vec<u8>), Failure> {
    let bytes = read_bytes(path)?;
    let record: SpfRecord = serde_json::from_slice(&bytes)?;
    Ok((record.to_spf()?, bytes))
}

/// Accepts either a configuration or a symmetric SPF.
fn read_configuration(path: &Path) -> Result<(SymmetricConfiguration64, Vec<u8>), Failure> {
    let bytes = read_bytes(path)?;
    let value: serde_json::Value = serde_json::from_slice(&bytes)?;
    let conf = if value.get("upper_poles").is_some() {
        serde_json::from_value::<ConfigurationRecord>(value)?.to_configuration()?
    } else {
        let spf = serde_json::from_value::<SpfRecord>(value)?.to_spf()?;
        SymmetricConfiguration64::from_spf(&spf)?
    };
    Ok((conf, bytes))
}

fn require<V>(value: Option<V>, flag: &str) -> Result<V, Failure> {
    value.ok_or_else(|| Failure::validation("usage", format!("missing required flag --{flag}")))
}

#[derive(Serialize)]
struct Point {
    re: f64,
    im: f64,
}

impl From<Complex<f64>> for Point {
    fn from(z: Complex<f64>) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
struct ComplexValue {
    value: String,
    re: f64,
    im: f64,
}

impl From<Complex<f64>> for ComplexValue {
    fn from(z: Complex<f64>) -> Self {
        Self {
            value: fmt_complex(z.re, z.im),
            re: z.re,
            im: z.im,
        }
    }
}

#[derive(Serialize)]
struct EvalOut {
    at: Point,
    derivative: u32,
    #[serde(flatten)]
    value: ComplexValue,
}

fn eval(a: EvalArgs) -> Result<(), Failure> {
    let (spf, bytes) = read_spf(&a.input)?;
    let z = Complex::new(a.at.0, a.at.1);
    let w = spf.eval_nth_derivative(z, a.derivative)?;
    let out = EvalOut {
        at: z.into(),
        derivative: a.derivative,
        value: w.into(),
    };
    emit(&out, a.out.as_deref(), &RunContext::new(&bytes, 0))
}

#[derive(Serialize)]
struct NormOut {
    kind: &'static str,
    #[serde(with = "exponent")]
    p: f64,
    derivative: bool,
    value: f64,
    witness: f64,
    certified_error: f64,
}

fn norm(a: NormArgs) -> Result<(), Failure> {
    let (spf, bytes) = read_spf(&a.input)?;
    let (kind, p, result) = match a.kind {
        NormKind::Sup => ("sup", f64::INFINITY, sup_norm_real(&spf, a.derivative)),
        NormKind::Lp => {
            let p = require(a.p, "p")?;
            if p.is_infinite() {
                ("sup", p, sup_norm_real(&spf, a.derivative))
            } else {
                ("lp", p, lp_norm_real(&spf, p, a.derivative)?)
            }
        }
    };
    let out = NormOut {
        kind,
        p,
        derivative: a.derivative,
        value: result.value,
        witness: result.witness,
        certified_error: result.certified_error,
    };
    emit(&out, a.out.as_deref(), &RunContext::new(&bytes, 0))
}

#[derive(Serialize)]
struct FunctionalOut {
    kind: FunctionalKind,
    #[serde(with = "exponent")]
    p: f64,
    value: f64,
    min_abs_imag: f64,
    norm: f64,
    norm_certified_error: f64,
}

fn functional(a: FunctionalArgs) -> Result<(), Failure> {
    let (spf, bytes) = read_spf(&a.input)?;
    let v = functional_with(a.kind, &spf, a.p, &NormOptions::default())?;
    let out = FunctionalOut {
        kind: v.kind,
        p: v.p,
        value: v.value,
        min_abs_imag: v.min_abs_imag,
        norm: v.norm.value,
        norm_certified_error: v.norm.certified_error,
    };
    emit(&out, a.out.as_deref(), &RunContext::new(&bytes, 0))
}

#[derive(Serialize)]
struct MuOut {
    x: f64,
    mu: f64,
}

#[derive(Serialize)]
struct PhaseOut {
    x: f64,
    phase: f64,
}

#[derive(Serialize)]
struct RootsOut<'a> {
    eta: u32,
    roots: &'a [f64],
    positive_roots: &'a [f64],
}

#[derive(Serialize)]
struct MuRangeOut {
    r: f64,
    mu1: f64,
    mu2: f64,
}

fn blaschke(a: BlaschkeArgs) -> Result<(), Failure> {
    let (conf, bytes, tracked) = if a.symmetrize_input {
        let (spf, bytes) = read_spf(&a.input)?;
        let out = spf_core::run_pipeline(&spf, a.pole_index)?;
        let height = out.continuity_height();
        (out.result, bytes, Some(height))
    } else {
        let (conf, bytes) = read_configuration(&a.input)?;
        (conf, bytes, None)
    };
    let value = match a.check {
        BlaschkeCheck::Eval => {
            let at = require(a.at, "at")?;
            let z = Complex::new(at.0, at.1);
            serde_json::to_value(ComplexValue::from(conf.blaschke_eval(z)?))?
        }
        BlaschkeCheck::Mu => {
            let x = require(a.x, "x")?;
            serde_json::to_value(MuOut { x, mu: conf.mu(x) })?
        }
        BlaschkeCheck::Phase => {
            let x = require(a.x, "x")?;
            serde_json::to_value(PhaseOut {
                x,
                phase: conf.phase(x),
            })?
        }
        BlaschkeCheck::Roots => {
            let roots = conf.minus_one_roots()?;
            serde_json::to_value(RootsOut {
                eta: conf.eta(),
                roots: roots.roots(),
                positive_roots: roots.positive_roots(),
            })?
        }
        BlaschkeCheck::Decomposition => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let upper = conf.upper_spf();
            let scale = upper.max_abs_real() + upper.min_abs_imag().max(1.0);
            let points: Vec<Complex<f64>> = (0..a.samples)
                .map(|_| {
                    let re = rng.gen_range(-2.0..2.0) * scale;
                    let im = rng.gen_range(0.05..2.0) * scale;
                    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    Complex::new(re, sign * im)
                })
                .collect();
            serde_json::to_value(conf.decomposition_check(&points)?)?
        }
        BlaschkeCheck::PhaseIntegral => {
            serde_json::to_value(conf.phase_integral_check(require(a.k, "k")?)?)?
        }
        BlaschkeCheck::MuRange => {
            let r = require(a.r, "r")?;
            let (mu1, mu2) = conf.mu_range(r)?;
            serde_json::to_value(MuRangeOut { r, mu1, mu2 })?
        }
        BlaschkeCheck::Continuity => {
            let y1 = require(a.y1.or(tracked), "y1")?;
            let span = a.span.unwrap_or(10.0 * y1);
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let pairs: Vec<(f64, f64)> = (0..a.pairs)
                .map(|_| (rng.gen_range(-span..=span), rng.gen_range(-span..=span)))
                .collect();
            serde_json::to_value(conf.mu_continuity_check(y1, &pairs)?)?
        }
    };
    emit(&value, a.out.as_deref(), &RunContext::new(&bytes, a.seed))
}

#[derive(Serialize)]
struct StageNormsOut {
    input: Option<f64>,
    sigma0: f64,
    lifted: f64,
    result: f64,
}

#[derive(Serialize)]
struct StagesOut {
    input: Option<SpfRecord>,
    s1: Option<SpfRecord>,
    sigma0: SpfRecord,
    sigma: SpfRecord,
    lifted: SpfRecord,
    result: SpfRecord,
}

#[derive(Serialize)]
struct SymmetrizeOut {
    pole_index: usize,
    tracked_pole: Point,
    tracked_residue: u32,
    lift: f64,
    continuity_height: f64,
    norm_factor: Option<f64>,
    norms: StageNormsOut,
    configuration: ConfigurationRecord,
    result_spf: SpfRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    stages: Option<StagesOut>,
}

fn symmetrize(a: SymmetrizeArgs) -> Result<(), Failure> {
    let (spf, bytes) = read_spf(&a.input)?;
    let out = spf_core::run_pipeline(&spf, a.pole_index)?;
    let st = &out.stages;
    let stages = a.emit_stages.then(|| StagesOut {
        input: st.input.as_ref().map(SpfRecord::from_spf),
        s1: st.s1.as_ref().map(SpfRecord::from_spf),
        sigma0: SpfRecord::from_spf(&st.sigma0),
        sigma: SpfRecord::from_spf(&st.sigma),
        lifted: SpfRecord::from_spf(&st.lifted),
        result: SpfRecord::from_spf(&st.result),
    });
    let report = SymmetrizeOut {
        pole_index: a.pole_index,
        tracked_pole: out.tracked_pole.into(),
        tracked_residue: out.tracked_residue,
        lift: out.lift,
        continuity_height: out.continuity_height(),
        norm_factor: out.norm_factor,
        norms: StageNormsOut {
            input: out.norms.input,
            sigma0: out.norms.sigma0,
            lifted: out.norms.lifted,
            result: out.norms.result,
        },
        configuration: ConfigurationRecord::from_configuration(&out.result),
        result_spf: SpfRecord::from_spf(&out.stages.result),
        stages,
    };
    emit(&report, a.out.as_deref(), &RunContext::new(&bytes, 0))
}

const REPORT_HEADER: [&str; 7] = [
    "name",
    "n",
    "lhs",
    "rhs_without_constant",
    "ratio",
    "pass",
    "context",
];

fn report_row(r: &BoundReport) -> Vec<String> {
    vec![
        r.name.clone(),
        r.n.map(|n| n.to_string()).unwrap_or_default(),
        fmt_f64(r.lhs),
        fmt_f64(r.rhs_without_constant),
        fmt_f64(r.ratio),
        r.pass.to_string(),
        serde_json::to_string(&r.context).unwrap_or_default(),
    ]
}

fn check(a: CheckArgs) -> Result<(), Failure> {
    if a.which == CheckKind::Historical {
        let n = require(a.n, "n")?;
        let table = bounds::historical_bounds(n)?;
        return emit(
            &table,
            a.out.as_deref(),
            &RunContext::new(n.to_string().as_bytes(), 0),
        );
    }
    let input = require(a.input.as_deref(), "input")?;
    let (reports, bytes) = match a.which {
        CheckKind::Lemma1 | CheckKind::MuSup => {
            let (conf, bytes) = read_configuration(input)?;
            let reports = if a.which == CheckKind::Lemma1 {
                let y1 = require(a.y1, "y1")?;
                let theta = require(a.theta, "theta")?;
                let r = require(a.r, "r")?;
                vec![bounds::lemma1_check(&conf, y1, theta, r)?]
            } else {
                vec![bounds::mu_sup_ratio(&conf)]
            };
            (reports, bytes)
        }
        _ => {
            let (spf, bytes) = read_spf(input)?;
            let reports = match a.which {
                CheckKind::Theorem1 => bounds::theorem1_check(&spf)?,
                CheckKind::Theorem2 => vec![bounds::theorem2_check(&spf)?],
                CheckKind::Lemma3 => {
                    let mode = match a.normalization {
                        NormalizationArg::Divide => bounds::Lemma3Normalization::Divide,
                        NormalizationArg::Rescale => bounds::Lemma3Normalization::Rescale,
                    };
                    vec![bounds::lemma3_check_with(&spf, mode)?]
                }
                CheckKind::BetaP => vec![spf_core::beta_p_check(&spf, require(a.p, "p")?)?],
                _ => unreachable!("handled above"),
            };
            (reports, bytes)
        }
    };
    let ctx = RunContext::new(&bytes, 0);
    if let Some(path) = a.csv.as_deref() {
        write_csv(path, &REPORT_HEADER, reports.iter().map(report_row), &ctx)?;
    }
    emit(&reports, a.out.as_deref(), &ctx)
}

fn build_config(n: Option<u32>, o: &SearchOptions) -> Result<SearchConfig, Failure> {
    let config = match &o.multiplicities {
        Some(list) => SearchConfig::custom(list.clone(), o.functional, o.p)?,
        None => SearchConfig::new(require(n, "n")?, o.pattern, o.functional, o.p)?,
    };
    let config = config
        .with_budget(o.multistarts, o.budget)
        .with_seed(o.seed)
        .with_upper_half(o.upper_half);
    config.validate()?;
    Ok(config)
}

fn budget_failure(n: u32) -> Failure {
    Failure::numerical(
        "budget_exhausted",
        format!("order {n}: the winning start ran out of evaluations before converging"),
    )
}

fn search(a: SearchArgs) -> Result<(), Failure> {
    let config = build_config(a.n, &a.options)?;
    let config_json = serde_json::to_vec(&config)?;
    let ctx = RunContext::new(&config_json, config.seed);
    let record = optimize(&config)?;
    if let Some(path) = a.certificate.as_deref() {
        emit(&certificate(&record), Some(path), &ctx)?;
    }
    emit(&record, a.out.as_deref(), &ctx)?;
    if a.options.strict && record.budget_exhausted {
        return Err(budget_failure(config.order_n));
    }
    Ok(())
}

#[derive(Serialize)]
struct ScanOut {
    entries: Vec<ScanEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificates: Option<Vec<Certificate>>,
}

fn scan(a: ScanArgs) -> Result<(), Failure> {
    if a.options.multiplicities.is_some() {
        return Err(Failure::validation(
            "usage",
            "scan takes --pattern, not --multiplicities",
        ));
    }
    let first = *a
        .n_list
        .first()
        .ok_or_else(|| Failure::validation("usage", "empty --n-list"))?;
    let template = build_config(Some(first.max(2)), &a.options)?;
    let mut hashed = serde_json::to_vec(&template)?;
    hashed.extend_from_slice(format!("{:?}", a.n_list).as_bytes());
    let ctx = RunContext::new(&hashed, template.seed);
    let entries = scan_orders(&a.n_list, &template)?;
    if let Some(path) = a.csv.as_deref() {
        let header = [
            "n",
            "pattern",
            "best_value",
            "reference_rate",
            "ratio",
            "seed",
            "evals",
        ];
        let rows = entries.iter().map(|e| {
            let r = &e.row;
            vec![
                r.n.to_string(),
                r.pattern.to_string(),
                fmt_f64(r.best_value),
                r.reference_rate.map(fmt_f64).unwrap_or_default(),
                r.ratio.map(fmt_f64).unwrap_or_default(),
                r.seed.to_string(),
                r.evals.to_string(),
            ]
        });
        write_csv(path, &header, rows, &ctx)?;
    }
    let certificates = a
        .certify
        .then(|| entries.iter().map(|e| certificate(&e.record)).collect());
    let exhausted = entries
        .iter()
        .find(|e| e.record.budget_exhausted)
        .map(|e| e.row.n);
    emit(
        &ScanOut {
            entries,
            certificates,
        },
        a.out.as_deref(),
        &ctx,
    )?;
    match exhausted {
        Some(n) if a.options.strict => Err(budget_failure(n)),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct TanhOut {
    a: f64,
    tol: f64,
    value: f64,
    closed_form: f64,
}

#[derive(Serialize)]
struct MinorantOut {
    n: u64,
    nk: u32,
    full: f64,
    simplified: f64,
}

#[derive(Serialize)]
struct ScalarOut {
    name: &'static str,
    value: f64,
}

fn series(a: SeriesArgs) -> Result<(), Failure> {
    let (value, key) = match a.op {
        SeriesOp::Tanh { a, tol } => {
            let value = bounds::tanh_series(a, tol)?;
            (
                serde_json::to_value(TanhOut {
                    a,
                    tol,
                    value,
                    closed_form: a.tanh(),
                })?,
                format!("tanh {a} {tol}"),
            )
        }
        SeriesOp::Theorem1Minorant { n, nk } => {
            let (full, simplified) = bounds::theorem1_minorant::<f64>(n, nk)?;
            (
                serde_json::to_value(MinorantOut {
                    n,
                    nk,
                    full,
                    simplified,
                })?,
                format!("theorem1 {n} {nk}"),
            )
        }
        SeriesOp::Lemma2Minorant { mu2, n1 } => (
            serde_json::to_value(ScalarOut {
                name: "lemma2_minorant",
                value: bounds::lemma2_minorant(mu2, n1)?,
            })?,
            format!("lemma2 {mu2} {n1}"),
        ),
        SeriesOp::Delta { theta, n1 } => (
            serde_json::to_value(ScalarOut {
                name: "delta",
                value: bounds::delta_of_theta(theta, n1)?,
            })?,
            format!("delta {theta} {n1}"),
        ),
        SeriesOp::Theta { mu2, n1 } => (
            serde_json::to_value(ScalarOut {
                name: "theta",
                value: bounds::theta_of_mu2(mu2, n1)?,
            })?,
            format!("theta {mu2} {n1}"),
        ),
    };
    emit(
        &value,
        a.out.as_deref(),
        &RunContext::new(key.as_bytes(), 0),
    )
}
