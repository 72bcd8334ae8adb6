//! Acceptance suite: one line per criterion, non-zero exit on any failure.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use spf_core::search::{certificate, optimize, reference_rate, scan_orders};
use spf_core::{
    bounds, gelfond_functional, gorin_functional, lp_norm_real, run_pipeline, sup_norm_real,
    FunctionalKind, Pattern, PipelineOutput64, SearchConfig, Spf64, SymmetricConfiguration64,
};

use common::{grid_sup, l2_norm_squared_by_residues, random_spf, random_spf_of_order, rng};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn f1() -> Spf64 {
    Spf64::new([(c(0.0, 1.0), 1)]).unwrap()
}

fn f2() -> Spf64 {
    Spf64::new([(c(0.0, 1.0), 1), (c(0.0, -1.0), 1)]).unwrap()
}

/// Rescales to unit sup-norm, which keeps it an SPF.
fn unit_normalized(spf: &Spf64) -> Spf64 {
    let m = sup_norm_real(spf, false).value;
    spf.rescale(1.0 / m).unwrap()
}

fn random_pipeline(rng: &mut ChaCha8Rng, max_order: u32) -> (Spf64, usize, PipelineOutput64) {
    let spf = unit_normalized(&random_spf_of_order(rng, max_order));
    let target = rng.gen_range(0..spf.len());
    let out = run_pipeline(&spf, target).unwrap();
    (spf, target, out)
}

fn sample_points(
    rng: &mut ChaCha8Rng,
    conf: &SymmetricConfiguration64,
    count: usize,
) -> Vec<Complex<f64>> {
    let upper = conf.upper_spf();
    let scale = upper.max_abs_real() + upper.min_abs_imag();
    (0..count)
        .map(|_| {
            let re = rng.gen_range(-2.0..2.0) * scale;
            let im = rng.gen_range(0.02..2.0) * scale * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            c(re, im)
        })
        .collect()
}

fn corpus_1_2() -> Vec<SymmetricConfiguration64> {
    let mut r = rng(1001);
    (0..100)
        .map(|_| random_pipeline(&mut r, 32).2.result)
        .collect()
}

fn criterion_1() -> Outcome {
    let corpus = corpus_1_2();
    let mut r = rng(1002);
    let mut worst: f64 = 0.0;
    let mut max_eta2 = 0;
    for conf in &corpus {
        max_eta2 = max_eta2.max(conf.eta2());
        let pts = sample_points(&mut r, conf, 50);
        let report = conf.decomposition_check(&pts).unwrap();
        worst = worst.max(report.lhs);
    }
    outcome(
        worst <= 1e-9 && max_eta2 <= 64,
        format!("100 configurations, eta2 <= {max_eta2}, worst residual {worst:.2e} (tol 1e-9)"),
    )
}

fn criterion_2() -> Outcome {
    let corpus = corpus_1_2();
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for conf in &corpus {
        for k in 1..=conf.eta() as usize {
            let rep = conf.phase_integral_check(k).unwrap();
            worst = worst.max((rep.lhs - rep.rhs_without_constant).abs());
            checks += 1;
        }
    }
    // F3: conf{(i, 2)} has μ = 2/(1+x²), r_1 = 1, ∫_0^1 μ = π/2
    let f3 = SymmetricConfiguration64::new([(c(0.0, 1.0), 2)]).unwrap();
    let rep = f3.phase_integral_check(1).unwrap();
    let f3_err = (rep.lhs - PI / 2.0).abs();
    outcome(
        worst <= 1e-9 && f3_err <= 1e-12,
        format!(
            "{checks} roots, worst |Θ(r_k)/2 − π(2k−1)/2| = {worst:.2e}; F3 error {f3_err:.1e}"
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    for a in [1e-6f64, 0.1, 1.0, 10.0, 30.0] {
        let v = bounds::tanh_series(a, 1e-10).unwrap();
        let closed = ((2.0 * a).exp() - 1.0) / ((2.0 * a).exp() + 1.0);
        worst = worst.max((v - closed).abs());
    }
    outcome(
        worst <= 1e-10,
        format!("worst deviation {worst:.2e} (tol 1e-10)"),
    )
}

fn criterion_4() -> Outcome {
    let mut r = rng(1004);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let count = r.gen_range(1..=6);
        let spf = random_spf(&mut r, count, 3);
        for p in [f64::INFINITY, 2.0, 3.5] {
            let g0 = gorin_functional(&spf, p).unwrap().value;
            let d0 = gelfond_functional(&spf, p).unwrap().value;
            for scale in [0.1, 1.0, 7.3] {
                let s = spf.rescale(scale).unwrap();
                let g = gorin_functional(&s, p).unwrap().value;
                let d = gelfond_functional(&s, p).unwrap().value;
                worst = worst.max(((g - g0) / g0).abs()).max(((d - d0) / d0).abs());
            }
        }
    }
    outcome(
        worst <= 1e-8,
        format!("50 SPFs × p ∈ {{inf, 2, 3.5}} × c ∈ {{0.1, 1, 7.3}}, worst relative deviation {worst:.2e}"),
    )
}

fn criterion_5() -> Outcome {
    let mut r = rng(1005);
    let mut failures = Vec::new();
    let mut worst_margin = f64::NEG_INFINITY;
    let mut worst_deriv: f64 = 0.0;
    let mut worst_factor: f64 = 0.0;
    for case in 0..200 {
        let (spf, target, out) = random_pipeline(&mut r, 20);
        let pole = spf.poles()[target];
        let y1 = pole.location.im.abs();
        let result_spf = out.result.to_spf().unwrap();
        let revalidated = SymmetricConfiguration64::from_spf(&result_spf);
        if revalidated.as_ref().ok() != Some(&out.result) {
            failures.push(format!("case {case}: output does not validate"));
        }
        if out.tracked_pole != c(0.0, 8.0 * y1) {
            failures.push(format!("case {case}: tracked pole {}", out.tracked_pole));
        }
        if out.tracked_residue < 2 * pole.multiplicity {
            failures.push(format!("case {case}: residue {}", out.tracked_residue));
        }
        let input_norm = out.norms.input.unwrap();
        worst_factor = worst_factor.max(out.norms.sigma0 / input_norm);
        if out.norms.sigma0 > 4.0 * input_norm + 1e-9 {
            failures.push(format!("case {case}: ‖σ0‖ = {}", out.norms.sigma0));
        }
        let h = out.continuity_height();
        let span = out.result.upper_spf().max_abs_real() + 10.0 * h;
        let pairs: Vec<(f64, f64)> = (0..1000)
            .map(|i| {
                let x1 = r.gen_range(-span..span);
                let x2 = if i % 2 == 0 {
                    r.gen_range(-span..span)
                } else {
                    x1 + r.gen_range(-1.0..1.0) * h
                };
                (x1, x2)
            })
            .collect();
        let rep = out.result.mu_continuity_check(h, &pairs).unwrap();
        worst_margin = worst_margin.max(
            rep.context["worst_margin"]
                .as_f64()
                .unwrap_or(f64::INFINITY),
        );
        if !rep.pass {
            failures.push(format!(
                "case {case}: continuity predicate fails, margin {}",
                rep.context["worst_margin"]
            ));
        }
        // |ϱ'(z)| ≤ 1/(y1 + |Im z|) on the closed lower half-plane
        let rho = out.upper_part();
        for _ in 0..20 {
            let z = c(r.gen_range(-span..span), -r.gen_range(0.0..3.0) * h);
            let d = rho.eval_derivative(z).unwrap().norm();
            let ratio = d * (h + z.im.abs());
            worst_deriv = worst_deriv.max(ratio);
            if ratio > 1.0 + 1e-12 {
                failures.push(format!("case {case}: derivative bound ratio {ratio}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "200 pipelines; max ‖σ0‖/‖ρ‖ = {worst_factor:.4}; worst continuity margin {worst_margin:.3e}; max |ϱ'|(y1+|Im z|) = {worst_deriv:.3}{}",
            failures.first().map(|f| format!("; first failure: {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut r = rng(1006);
    let mut lemma1_fail = 0;
    let mut lemma1_trivial = 0;
    for _ in 0..500 {
        let (_, _, out) = random_pipeline(&mut r, 8);
        let y1 = out.continuity_height();
        let theta = r.gen_range(0.05..0.95);
        let radius = y1 * 10f64.powf(r.gen_range(-1.0..2.0));
        let rep = bounds::lemma1_check(&out.result, y1, theta, radius).unwrap();
        if !rep.pass {
            lemma1_fail += 1;
        }
        if rep.rhs_without_constant <= 0.0 {
            lemma1_trivial += 1;
        }
    }
    let mut lemma3_fail = 0;
    let mut worst3: f64 = 0.0;
    for _ in 0..200 {
        let spf = random_spf_of_order(&mut r, 50);
        if spf.order() < 2 {
            continue;
        }
        let rep = bounds::lemma3_check(&spf).unwrap();
        worst3 = worst3.max(rep.ratio);
        if !rep.pass {
            lemma3_fail += 1;
        }
    }
    let fx = bounds::lemma3_check(&f2()).unwrap();
    let fixture_ok = fx.pass
        && fx.lhs <= 0.32 + 1e-9
        && (fx.rhs_without_constant - 5.0 * 2f64.ln()).abs() < 1e-12
        && (fx.context["h"].as_f64().unwrap() - 0.25).abs() < 1e-15;
    outcome(
        lemma1_fail == 0 && lemma3_fail == 0 && fixture_ok,
        format!(
            "lemma1 failures {lemma1_fail}/500 ({lemma1_trivial} with rhs <= 0); lemma3 failures {lemma3_fail}/200 (max ratio {worst3:.3}); F2 lhs {:.6} vs bound {:.4}",
            fx.lhs, fx.rhs_without_constant
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut ns: Vec<u64> = (0..50)
        .map(|i| (4f64 * (1e6f64 / 4.0).powf(i as f64 / 49.0)).round() as u64)
        .collect();
    ns.dedup();
    let mut violations = 0;
    let mut checked = 0;
    for &n in &ns {
        for nk in 1..=64 {
            let (full, simplified) = bounds::theorem1_minorant::<f64>(n, nk).unwrap();
            checked += 1;
            if !(full > simplified) {
                violations += 1;
            }
        }
    }
    outcome(
        violations == 0,
        format!("{checked} grid points, {violations} violations"),
    )
}

fn criterion_8() -> Outcome {
    let closed = [
        (sup_norm_real(&f1(), false).value, 1.0),
        (sup_norm_real(&f2(), false).value, 1.0),
        (lp_norm_real(&f1(), 2.0, false).unwrap().value, PI.sqrt()),
        (
            lp_norm_real(&f2(), 2.0, false).unwrap().value,
            (2.0 * PI).sqrt(),
        ),
    ];
    let fixture_err = closed
        .iter()
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let mut r = rng(1008);
    let mut worst_sup: f64 = 0.0;
    let mut worst_l2: f64 = 0.0;
    for _ in 0..30 {
        let count = r.gen_range(1..=6);
        let spf = random_spf(&mut r, count, 3);
        let adaptive = sup_norm_real(&spf, false).value;
        let brute = grid_sup(&spf, 0, 20_000);
        worst_sup = worst_sup.max(((adaptive - brute) / brute).abs());
        let l2 = lp_norm_real(&spf, 2.0, false).unwrap().value;
        let exact = l2_norm_squared_by_residues(&spf).sqrt();
        worst_l2 = worst_l2.max(((l2 - exact) / exact).abs());
    }
    outcome(
        fixture_err <= 1e-8 && worst_sup <= 1e-6 && worst_l2 <= 1e-6,
        format!(
            "fixtures max error {fixture_err:.1e}; 30 random SPFs: sup vs grid {worst_sup:.1e}, L2 vs residues {worst_l2:.1e}"
        ),
    )
}

fn gorin_config(n: u32) -> SearchConfig {
    SearchConfig::new(n, Pattern::Ones, FunctionalKind::Gorin, f64::INFINITY).unwrap()
}

fn criterion_9() -> Outcome {
    let n2 = optimize(&gorin_config(2).with_seed(9)).unwrap();
    let n2_ok = n2.best_value <= 1.0 + 1e-6;
    let template = gorin_config(4).with_seed(9).with_budget(4, 1500);
    let entries = scan_orders(&[4, 8, 16, 32, 64], &template).unwrap();
    let values: Vec<f64> = entries.iter().map(|e| e.row.best_value).collect();
    let monotone = values.windows(2).all(|w| w[1] <= w[0] * 1.05);
    let mut cert_ok = true;
    let mut min_ratio = f64::INFINITY;
    for e in &entries {
        let cert = certificate(&e.record);
        cert_ok &= cert.pass;
        for rep in cert
            .reports
            .iter()
            .filter(|r| r.name.starts_with("theorem"))
        {
            cert_ok &= rep.ratio > 0.0;
            min_ratio = min_ratio.min(rep.ratio);
        }
    }
    let band: Vec<f64> = entries
        .iter()
        .map(|e| e.row.best_value / reference_rate(FunctionalKind::Gorin, e.row.n).unwrap())
        .collect();
    let lo = band.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = band.iter().cloned().fold(0.0, f64::max);
    outcome(
        n2_ok && monotone && cert_ok,
        format!(
            "n=2 best {:.6}; scan values {:?}; ratio band to lnln n/ln n [{lo:.3}, {hi:.3}]; min theorem ratio {min_ratio:.3}",
            n2.best_value,
            values.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>()
        ),
    )
}

fn criterion_10() -> Outcome {
    let config = gorin_config(4).with_seed(42).with_budget(4, 400);
    let a = serde_json::to_string(&optimize(&config).unwrap()).unwrap();
    let b = serde_json::to_string(&optimize(&config).unwrap()).unwrap();
    let template = gorin_config(4).with_seed(43).with_budget(2, 300);
    let s1 = serde_json::to_string(&scan_orders(&[4, 8], &template).unwrap()).unwrap();
    let s2 = serde_json::to_string(&scan_orders(&[4, 8], &template).unwrap()).unwrap();
    outcome(
        a == b && s1 == s2,
        format!(
            "search JSON {} bytes identical: {}; scan JSON {} bytes identical: {}",
            a.len(),
            a == b,
            s1.len(),
            s1 == s2
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("decomposition identity", criterion_1),
        ("phase-integral identity", criterion_2),
        ("tanh series", criterion_3),
        ("scale invariance of functionals", criterion_4),
        ("symmetrization pipeline", criterion_5),
        ("lemma1 and lemma3 corpora", criterion_6),
        ("theorem1 minorant chain", criterion_7),
        ("norm engine oracles", criterion_8),
        ("search sanity", criterion_9),
        ("determinism", criterion_10),
    ];
    let filter: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.pass {
            failed += 1;
        }
        println!(
            "acceptance {id:>2} {}: {} [{}] ({:.1}s)",
            if result.pass { "PASS" } else { "FAIL" },
            name,
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("acceptance: {failed} criteria failed");
        std::process::exit(1);
    }
}
