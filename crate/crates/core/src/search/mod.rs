//! Multistart derivative-free minimization of the Gorin and Gelfond
//! functionals over pole configurations of a fixed multiplicity pattern, and
//! scans over the order `n`.
//!
//! Each pole slot `k` is parametrized by `(x_k, ln y_k)` with the sign of
//! `Im ξ_k` fixed per start. The functionals are invariant under
//! `ρ ↦ cρ(c·)`, so after every simplex run the point is renormalized to
//! `min y_k = 1`.

mod nelder_mead;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{theorem1_check, theorem2_check};
use crate::error::{Error, Result};
use crate::io::exponent;
use crate::norms::{functional_with, FunctionalKind, NormOptions};
use crate::report::BoundReport;
use crate::spf::Spf;

use nelder_mead::{minimize, Tolerances, Tracker};

pub const DEFAULT_MULTISTARTS: u32 = 32;
pub const DEFAULT_EVAL_BUDGET: u64 = 20_000;
/// Relative sup-norm accuracy used inside the optimizer.
pub const SEARCH_SUP_REL_TOL: f64 = 1e-7;

/// How the order `n` is split into pole multiplicities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pattern {
    /// `n` simple poles.
    Ones,
    /// One pole of multiplicity `⌈n/2⌉`, the rest simple.
    SingleHeavy,
    /// `⌈√n⌉` poles with multiplicities as equal as possible.
    Balanced,
    /// An explicit list.
    Custom,
}

impl Pattern {
    /// The multiplicities for order `n`, in non-increasing order. `None` for
    /// `Custom`.
    pub fn multiplicities(self, n: u32) -> Option<Vec<u32>> {
        match self {
            Pattern::Ones => Some(vec![1; n as usize]),
            Pattern::SingleHeavy => {
                let heavy = n.div_ceil(2);
                let mut v = vec![heavy];
                v.extend(std::iter::repeat(1).take((n - heavy) as usize));
                Some(v)
            }
            Pattern::Balanced => {
                let slots = ((n as f64).sqrt().ceil() as u32).clamp(1, n);
                let (q, r) = (n / slots, n % slots);
                Some((0..slots).map(|i| if i < r { q + 1 } else { q }).collect())
            }
            Pattern::Custom => None,
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pattern::Ones => "ones",
            Pattern::SingleHeavy => "single-heavy",
            Pattern::Balanced => "balanced",
            Pattern::Custom => "custom",
        })
    }
}

impl FromStr for Pattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ones" | "all-ones" => Ok(Pattern::Ones),
            "single-heavy" | "heavy" => Ok(Pattern::SingleHeavy),
            "balanced" => Ok(Pattern::Balanced),
            "custom" => Ok(Pattern::Custom),
            other => Err(Error::Parse(format!("unknown pattern '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub order_n: u32,
    pub pattern: Pattern,
    pub multiplicity_pattern: Vec<u32>,
    pub functional: FunctionalKind,
    #[serde(with = "exponent")]
    pub p: f64,
    pub restrict_upper_half: bool,
    pub multistarts: u32,
    /// Evaluations per start.
    pub eval_budget: u64,
    pub seed: u64,
}

impl SearchConfig {
    /// Default budget, seed 0, poles in both half-planes.
    pub fn new(order_n: u32, pattern: Pattern, functional: FunctionalKind, p: f64) -> Result<Self> {
        let multiplicity_pattern = pattern.multiplicities(order_n).ok_or_else(|| {
            Error::InvalidSearchConfig("custom patterns need an explicit list".into())
        })?;
        let config = Self {
            order_n,
            pattern,
            multiplicity_pattern,
            functional,
            p,
            restrict_upper_half: false,
            multistarts: DEFAULT_MULTISTARTS,
            eval_budget: DEFAULT_EVAL_BUDGET,
            seed: 0,
        };
        config.validate()?;
        Ok(config)
    }

    /// A custom multiplicity list; the order is its sum.
    pub fn custom(multiplicities: Vec<u32>, functional: FunctionalKind, p: f64) -> Result<Self> {
        let mut multiplicity_pattern = multiplicities;
        multiplicity_pattern.sort_unstable_by(|a, b| b.cmp(a));
        let config = Self {
            order_n: multiplicity_pattern.iter().sum(),
            pattern: Pattern::Custom,
            multiplicity_pattern,
            functional,
            p,
            restrict_upper_half: false,
            multistarts: DEFAULT_MULTISTARTS,
            eval_budget: DEFAULT_EVAL_BUDGET,
            seed: 0,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_budget(mut self, multistarts: u32, eval_budget: u64) -> Self {
        self.multistarts = multistarts;
        self.eval_budget = eval_budget;
        self
    }

    pub fn with_upper_half(mut self, restrict: bool) -> Self {
        self.restrict_upper_half = restrict;
        self
    }

    /// The same settings at another order (the pattern is regenerated).
    pub fn at_order(&self, n: u32) -> Result<Self> {
        let mut next = Self::new(n, self.pattern, self.functional, self.p)?;
        next.restrict_upper_half = self.restrict_upper_half;
        next.multistarts = self.multistarts;
        next.eval_budget = self.eval_budget;
        next.seed = self.seed;
        Ok(next)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSearchConfig(m.to_string()));
        if self.order_n == 0 {
            return bad("order must be positive");
        }
        if self.multiplicity_pattern.is_empty() || self.multiplicity_pattern.contains(&0) {
            return bad("multiplicities must be positive");
        }
        if self.multiplicity_pattern.iter().sum::<u32>() != self.order_n {
            return bad("multiplicities must sum to the order");
        }
        if let Some(expected) = self.pattern.multiplicities(self.order_n) {
            if expected != self.multiplicity_pattern {
                return bad("multiplicity list does not match the named pattern");
            }
        }
        if !(self.p > 1.0) || self.p.is_nan() {
            return bad("need 1 < p <= inf");
        }
        if self.multistarts == 0 {
            return bad("need at least one start");
        }
        if self.eval_budget < 2 * self.multiplicity_pattern.len() as u64 + 2 {
            return bad("budget too small for one simplex");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub best_spf: Spf<f64>,
    /// The functional of `best_spf` at default accuracy.
    pub best_value: f64,
    /// `(evaluation, value)` improvements of the winning start.
    pub history: Vec<(u64, f64)>,
    pub config: SearchConfig,
    /// Evaluations over all starts.
    pub wall_evals: u64,
    pub winning_start: u32,
    /// The winning start ran out of budget before its simplex converged.
    pub budget_exhausted: bool,
}

/// Per-slot data that stays fixed during a start.
#[derive(Debug, Clone)]
struct Layout {
    mults: Vec<u32>,
    signs: Vec<f64>,
}

impl Layout {
    fn spf(&self, params: &[f64]) -> Option<Spf<f64>> {
        let poles = self.mults.iter().enumerate().map(|(k, &m)| {
            let x = params[2 * k];
            let y = self.signs[k] * params[2 * k + 1].exp();
            (Complex::new(x, y), m)
        });
        let spf = Spf::merged(poles).ok()?;
        spf.poles()
            .iter()
            .all(|p| p.location.re.is_finite() && p.location.im.is_finite() && p.location.im != 0.0)
            .then_some(spf)
    }
}

/// Scale gauge: rescale so the lowest pole has height one.
fn gauge(params: &mut [f64]) {
    let m = params
        .iter()
        .skip(1)
        .step_by(2)
        .fold(f64::INFINITY, |a, &b| a.min(b));
    if !m.is_finite() {
        return;
    }
    let s = (-m).exp();
    for k in 0..params.len() / 2 {
        params[2 * k] *= s;
        params[2 * k + 1] -= m;
    }
}

/// `0, 2, −2, 6, −6, 14, −14, ...`
fn grid_point(j: usize) -> f64 {
    if j == 0 {
        return 0.0;
    }
    let k = j.div_ceil(2) as i32;
    let v = 2.0 * (2f64.powi(k) - 1.0);
    if j % 2 == 1 {
        v
    } else {
        -v
    }
}

/// Conjugate pairs on a geometric grid (all poles at height one above the
/// grid when restricted to the upper half-plane).
fn canonical_start(config: &SearchConfig) -> (Layout, Vec<f64>) {
    let mults = config.multiplicity_pattern.clone();
    let slots = mults.len();
    let mut signs = Vec::with_capacity(slots);
    let mut params = Vec::with_capacity(2 * slots);
    for k in 0..slots {
        let (x, sign) = if config.restrict_upper_half {
            (grid_point(k), 1.0)
        } else {
            (grid_point(k / 2), if k % 2 == 0 { 1.0 } else { -1.0 })
        };
        signs.push(sign);
        params.push(x);
        params.push(0.0);
    }
    (Layout { mults, signs }, params)
}

/// The canonical SPF for a configuration: the start every search begins
/// from, and an upper estimate of the optimum.
pub fn canonical_seed(config: &SearchConfig) -> Result<Spf<f64>> {
    config.validate()?;
    let (layout, params) = canonical_start(config);
    layout
        .spf(&params)
        .ok_or_else(|| Error::InvalidSearchConfig("canonical seed is degenerate".into()))
}

fn random_start(config: &SearchConfig, rng: &mut ChaCha8Rng) -> (Layout, Vec<f64>) {
    let (mut layout, mut params) = canonical_start(config);
    let squeeze = rng.gen_range(0.05..1.0);
    for k in 0..layout.mults.len() {
        let x = params[2 * k] * squeeze;
        params[2 * k] = x + rng.gen_range(-1.0..1.0) * (1.0 + 0.3 * x.abs());
        params[2 * k + 1] = rng.gen_range(-0.7..0.7);
        if !config.restrict_upper_half && rng.gen_bool(0.15) {
            layout.signs[k] = -layout.signs[k];
        }
    }
    gauge(&mut params);
    (layout, params)
}

/// Matches the poles of `spf` to the slots of `config`'s pattern.
fn start_from_spf(config: &SearchConfig, spf: &Spf<f64>) -> Option<(Layout, Vec<f64>)> {
    let mut poles: Vec<_> = spf.poles().to_vec();
    poles.sort_by(|a, b| b.multiplicity.cmp(&a.multiplicity));
    let mults: Vec<u32> = poles.iter().map(|p| p.multiplicity).collect();
    if mults != config.multiplicity_pattern {
        return None;
    }
    if config.restrict_upper_half && poles.iter().any(|p| p.location.im < 0.0) {
        return None;
    }
    let signs = poles.iter().map(|p| p.location.im.signum()).collect();
    let mut params: Vec<f64> = poles
        .iter()
        .flat_map(|p| [p.location.re, p.location.im.abs().ln()])
        .collect();
    gauge(&mut params);
    Some((Layout { mults, signs }, params))
}

/// Extends `spf` to the pattern of `config` by adding poles far above the
/// real line; returns `None` if the multiplicities of `spf` are not a
/// sub-multiset of the pattern.
pub fn pad_to_pattern(spf: &Spf<f64>, config: &SearchConfig) -> Option<Spf<f64>> {
    let mut remaining = config.multiplicity_pattern.clone();
    for p in spf.poles() {
        let i = remaining.iter().position(|&m| m == p.multiplicity)?;
        remaining.remove(i);
    }
    let base = spf.min_abs_imag();
    let scale = base * 1e3 + spf.max_abs_real();
    let mut poles: Vec<(Complex<f64>, u32)> = spf
        .poles()
        .iter()
        .map(|p| (p.location, p.multiplicity))
        .collect();
    let mut level = 0;
    let mut i = 0;
    while i < remaining.len() {
        let height = scale * 2f64.powi(level);
        level += 1;
        let m = remaining[i];
        let paired = !config.restrict_upper_half && remaining.get(i + 1) == Some(&m);
        poles.push((Complex::new(0.0, height), m));
        if paired {
            poles.push((Complex::new(0.0, -height), m));
            i += 2;
        } else {
            i += 1;
        }
    }
    Spf::new(poles).ok()
}

struct StartResult {
    index: u32,
    best_f: f64,
    best_x: Vec<f64>,
    layout: Layout,
    history: Vec<(u64, f64)>,
    evals: u64,
    converged: bool,
}

fn run_start(config: &SearchConfig, layout: Layout, x0: Vec<f64>, index: u32) -> StartResult {
    let opts = NormOptions::<f64>::default().with_sup_rel_tol(SEARCH_SUP_REL_TOL);
    let kind = config.functional;
    let p = config.p;
    let slots = layout.clone();
    let objective = move |x: &[f64]| match slots.spf(x) {
        Some(spf) => functional_with(kind, &spf, p, &opts)
            .map(|v| v.value)
            .unwrap_or(f64::INFINITY),
        None => f64::INFINITY,
    };
    let dim = x0.len();
    let mut tracker = Tracker::new(objective, config.eval_budget, dim);
    let tol = Tolerances {
        f_rel: 1e-10,
        x_abs: 1e-7,
    };
    let mut x = x0;
    let mut stalls = 0u32;
    let mut previous = f64::INFINITY;
    let mut converged = false;
    loop {
        let scale = 0.5 * 0.3f64.powi(stalls as i32);
        let steps: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                if i % 2 == 0 {
                    scale * (1.0 + 0.1 * v.abs())
                } else {
                    scale
                }
            })
            .collect();
        let Some(out) = minimize(&mut tracker, &x, &steps, &tol) else {
            break;
        };
        if tracker.exhausted() {
            break;
        }
        if out.f < previous * (1.0 - 1e-9) {
            stalls = 0;
        } else {
            stalls += 1;
        }
        previous = previous.min(out.f);
        if stalls >= 3 {
            converged = true;
            break;
        }
        x = tracker.best_x.clone();
        gauge(&mut x);
    }
    StartResult {
        index,
        best_f: tracker.best_f,
        best_x: tracker.best_x,
        layout,
        history: tracker.history,
        evals: tracker.evals,
        converged,
    }
}

/// Minimum over starts, ties to the lower start index.
fn reduce(results: Vec<StartResult>) -> Option<StartResult> {
    results.into_iter().min_by(|a, b| {
        a.best_f
            .total_cmp(&b.best_f)
            .then_with(|| a.index.cmp(&b.index))
    })
}

/// Multistart search. Start 0 is the canonical seed; `extra_starts` (when
/// compatible with the pattern) come next; the rest are random
/// perturbations drawn from the stream `(seed, start index)`.
pub fn optimize_from(config: &SearchConfig, extra_starts: &[Spf<f64>]) -> Result<SearchRecord> {
    config.validate()?;
    let mut starts: Vec<(Layout, Vec<f64>)> = vec![canonical_start(config)];
    starts.extend(
        extra_starts
            .iter()
            .filter_map(|s| start_from_spf(config, s)),
    );
    let fixed = starts.len() as u32;
    let total = config.multistarts.max(fixed);
    let results: Vec<StartResult> = (0..total)
        .into_par_iter()
        .map(|index| {
            let (layout, x0) = if index < fixed {
                starts[index as usize].clone()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(index as u64);
                random_start(config, &mut rng)
            };
            run_start(config, layout, x0, index)
        })
        .collect();
    let wall_evals = results.iter().map(|r| r.evals).sum();
    let best = reduce(results).expect("at least one start");
    let best_spf = best
        .layout
        .spf(&best.best_x)
        .ok_or_else(|| Error::ConvergenceFailure("no finite objective value".into()))?;
    let best_value = functional_with(
        config.functional,
        &best_spf,
        config.p,
        &NormOptions::default(),
    )?
    .value;
    Ok(SearchRecord {
        best_spf,
        best_value,
        history: best.history,
        config: config.clone(),
        wall_evals,
        winning_start: best.index,
        budget_exhausted: !best.converged,
    })
}

pub fn optimize(config: &SearchConfig) -> Result<SearchRecord> {
    optimize_from(config, &[])
}

/// One row of an order scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: u32,
    pub pattern: Pattern,
    pub best_value: f64,
    /// `ln ln n / ln n` for Gorin (from `n = 4`), `ln n / √n` for Gelfond.
    pub reference_rate: Option<f64>,
    pub ratio: Option<f64>,
    pub seed: u64,
    pub evals: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub row: ScanRow,
    pub record: SearchRecord,
}

pub fn reference_rate(kind: FunctionalKind, n: u32) -> Option<f64> {
    let nf = n as f64;
    match kind {
        FunctionalKind::Gorin if n >= 4 => Some(nf.ln().ln() / nf.ln()),
        FunctionalKind::Gorin => None,
        FunctionalKind::Gelfond if n >= 2 => Some(nf.ln() / nf.sqrt()),
        FunctionalKind::Gelfond => None,
    }
}

/// Searches each order of `n_list` in turn, warm-starting every order from
/// the previous winner padded with far poles.
pub fn scan_orders(n_list: &[u32], template: &SearchConfig) -> Result<Vec<ScanEntry>> {
    let mut out: Vec<ScanEntry> = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if n < 2 {
            return Err(Error::InvalidSearchConfig(format!(
                "scan orders must be >= 2, got {n}"
            )));
        }
        let config = template.at_order(n)?;
        let warm: Vec<Spf<f64>> = out
            .last()
            .and_then(|prev| pad_to_pattern(&prev.record.best_spf, &config))
            .into_iter()
            .collect();
        let record = optimize_from(&config, &warm)?;
        let rate = reference_rate(config.functional, n);
        let row = ScanRow {
            n,
            pattern: config.pattern,
            best_value: record.best_value,
            reference_rate: rate,
            ratio: rate.map(|r| record.best_value / r),
            seed: config.seed,
            evals: record.wall_evals,
        };
        out.push(ScanEntry { row, record });
    }
    Ok(out)
}

/// Cross-check of a search record against an independent evaluation and the
/// proved lower bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub reported_value: f64,
    pub recomputed_value: f64,
    pub relative_deviation: f64,
    pub reports: Vec<BoundReport>,
    pub anomalies: Vec<String>,
    pub pass: bool,
}

/// Relative disagreement above which a record is flagged.
pub const CERTIFICATE_VALUE_TOL: f64 = 1e-6;
/// Theorem ratios below this signal a norm bug rather than a good optimum.
pub const CERTIFICATE_MIN_RATIO: f64 = 0.01;

pub fn certificate(record: &SearchRecord) -> Certificate {
    let spf = &record.best_spf;
    let config = &record.config;
    let tight = NormOptions::<f64> {
        sup_rel_tol: 1e-13,
        panel_tol: 1e-14,
        tail_rel_tol: 1e-15,
        ..NormOptions::default()
    };
    let mut anomalies = Vec::new();
    let recomputed = functional_with(config.functional, spf, config.p, &tight).map(|v| v.value);
    let (recomputed_value, relative_deviation) = match recomputed {
        Ok(v) => (v, ((record.best_value - v) / v).abs()),
        Err(e) => {
            anomalies.push(format!("re-evaluation failed: {e}"));
            (f64::NAN, f64::NAN)
        }
    };
    if !(relative_deviation <= CERTIFICATE_VALUE_TOL) {
        anomalies.push(format!(
            "reported value {} disagrees with recomputed {} (relative {:e})",
            record.best_value, recomputed_value, relative_deviation
        ));
    }
    let mut reports = vec![BoundReport::new(
        "functional_recheck",
        record.best_value,
        recomputed_value,
        relative_deviation <= CERTIFICATE_VALUE_TOL,
    )
    .with_order(spf.order())];
    if spf.order() >= 4 {
        match theorem1_check(spf) {
            Ok(r) => reports.extend(r),
            Err(e) => anomalies.push(format!("theorem1 check failed: {e}")),
        }
    }
    if spf.order() >= 2 {
        match theorem2_check(spf) {
            Ok(r) => reports.push(r),
            Err(e) => anomalies.push(format!("theorem2 check failed: {e}")),
        }
    }
    for r in reports.iter().filter(|r| r.name != "functional_recheck") {
        if !(r.ratio >= CERTIFICATE_MIN_RATIO) {
            anomalies.push(format!(
                "{} ratio {} below {}",
                r.name, r.ratio, CERTIFICATE_MIN_RATIO
            ));
        }
    }
    Certificate {
        reported_value: record.best_value,
        recomputed_value,
        relative_deviation,
        reports,
        pass: anomalies.is_empty(),
        anomalies,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gorin(n: u32) -> SearchConfig {
        SearchConfig::new(n, Pattern::Ones, FunctionalKind::Gorin, f64::INFINITY).unwrap()
    }

    #[test]
    fn patterns() {
        assert_eq!(Pattern::Ones.multiplicities(3).unwrap(), vec![1, 1, 1]);
        assert_eq!(
            Pattern::SingleHeavy.multiplicities(5).unwrap(),
            vec![3, 1, 1]
        );
        assert_eq!(
            Pattern::Balanced.multiplicities(10).unwrap(),
            vec![3, 3, 2, 2]
        );
        assert_eq!(Pattern::Balanced.multiplicities(1).unwrap(), vec![1]);
        assert!(Pattern::Custom.multiplicities(4).is_none());
        for n in 1..40 {
            for p in [Pattern::Ones, Pattern::SingleHeavy, Pattern::Balanced] {
                assert_eq!(p.multiplicities(n).unwrap().iter().sum::<u32>(), n);
            }
        }
    }

    #[test]
    fn canonical_seed_for_pair_is_f2() {
        let seed = canonical_seed(&gorin(2)).unwrap();
        assert_eq!(
            seed,
            Spf::new([(Complex::new(0.0, 1.0), 1), (Complex::new(0.0, -1.0), 1)]).unwrap()
        );
    }

    #[test]
    fn config_validation() {
        let mut c = gorin(4);
        c.multiplicity_pattern = vec![2, 1];
        assert!(c.validate().is_err());
        let mut c = gorin(4);
        c.p = 1.0;
        assert!(c.validate().is_err());
        assert!(SearchConfig::custom(vec![1, 3], FunctionalKind::Gorin, 2.0).is_ok());
        let json = serde_json::to_string(&gorin(4)).unwrap();
        assert!(json.contains(r#""p":"inf""#));
        let back: SearchConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, gorin(4));
    }

    #[test]
    fn gauge_fixes_lowest_height() {
        let mut x = vec![3.0, 2.0f64.ln(), -1.0, 4.0f64.ln()];
        gauge(&mut x);
        assert!((x[0] - 1.5).abs() < 1e-15 && x[1].abs() < 1e-15);
        assert!((x[2] + 0.5).abs() < 1e-15 && (x[3] - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn reduction_ignores_start_order() {
        let mk = |index, best_f| StartResult {
            index,
            best_f,
            best_x: vec![],
            layout: Layout {
                mults: vec![],
                signs: vec![],
            },
            history: vec![],
            evals: 0,
            converged: true,
        };
        let a = reduce(vec![mk(0, 2.0), mk(1, 1.0), mk(2, 1.0), mk(3, 3.0)]).unwrap();
        let b = reduce(vec![mk(3, 3.0), mk(2, 1.0), mk(0, 2.0), mk(1, 1.0)]).unwrap();
        assert_eq!(a.index, 1);
        assert_eq!(b.index, 1);
    }

    #[test]
    fn padding_adds_far_poles() {
        let prev = canonical_seed(&gorin(2)).unwrap();
        let c = gorin(5);
        let padded = pad_to_pattern(&prev, &c).unwrap();
        assert_eq!(padded.order(), 5);
        assert!(pad_to_pattern(&padded, &gorin(2)).is_none());
        let before = functional_with(
            FunctionalKind::Gorin,
            &prev,
            f64::INFINITY,
            &NormOptions::default(),
        )
        .unwrap()
        .value;
        let after = functional_with(
            FunctionalKind::Gorin,
            &padded,
            f64::INFINITY,
            &NormOptions::default(),
        )
        .unwrap()
        .value;
        assert!(after <= before * 1.002, "{before} {after}");
    }

    #[test]
    fn small_search_is_deterministic_and_beats_seed() {
        let c = gorin(3).with_budget(4, 600).with_seed(11);
        let a = optimize(&c).unwrap();
        let b = optimize(&c).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let seed_value = functional_with(
            FunctionalKind::Gorin,
            &canonical_seed(&c).unwrap(),
            f64::INFINITY,
            &NormOptions::default(),
        )
        .unwrap()
        .value;
        assert!(a.best_value <= seed_value * (1.0 + 1e-7));
        assert!(a.history.windows(2).all(|w| w[1].1 <= w[0].1));
        let cert = certificate(&a);
        assert!(cert.pass, "{:?}", cert.anomalies);
        assert_eq!(certificate(&a), cert);
        let mut bad = a.clone();
        bad.best_value *= 0.01;
        assert!(!certificate(&bad).pass);
    }
}
