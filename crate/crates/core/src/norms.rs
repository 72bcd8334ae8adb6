//! Norms of an SPF and its derivative on the real line, and the
//! scale-invariant Gorin and Gelfond functionals built from them.
//!
//! The sup-norm is certified: `|ρ^{(m)}|²` is maximized by branch and bound
//! with per-panel curvature majorants (see [`crate::certify`]), and the region
//! outside the search window is excluded by the tail bound
//! `|ρ^{(m)}(x)| ≤ m!·n / (|x| − max|Re ξ_k|)^{m+1}`.
//! L^p norms use adaptive 15-point Gauss panels with a closed-form tail.

use serde::{Deserialize, Serialize};

use crate::certify::{certified_max, Settings, SmoothProbe};
use crate::error::{Error, Result};
use crate::quadrature::{adaptive, GaussLegendre, GAUSS_ORDER};
use crate::report::BoundReport;
use crate::scalar::{conjugate_exponent, factorial, Scalar};
use crate::spf::Spf;

/// A norm together with a bound on its error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormResult<T> {
    pub value: T,
    /// Location of the maximum for sup-norms; `0` for L^p norms.
    pub witness: T,
    /// Bound on `|value − true norm|`; never zero.
    pub certified_error: T,
}

/// Accuracy knobs for the norm engine.
#[derive(Debug, Clone, Copy)]
pub struct NormOptions<T> {
    /// Target relative accuracy of sup-norms.
    pub sup_rel_tol: T,
    /// Tolerance per Gauss panel, relative to `(m!·n)^p·Y^{1-(m+1)p}`.
    pub panel_tol: T,
    /// Relative size of the analytic tail allowed in L^p norms.
    pub tail_rel_tol: T,
    pub max_panels: usize,
}

impl<T: Scalar> Default for NormOptions<T> {
    fn default() -> Self {
        Self {
            sup_rel_tol: T::tolerance(2e-10),
            panel_tol: T::tolerance(1e-12),
            tail_rel_tol: T::tolerance(1e-13),
            max_panels: 4_000_000,
        }
    }
}

impl<T: Scalar> NormOptions<T> {
    /// Looser sup-norm tolerance, used inside optimizers.
    pub fn with_sup_rel_tol(mut self, tol: T) -> Self {
        self.sup_rel_tol = tol;
        self
    }
}

/// `f = |ρ^{(m)}|²` on the real line.
struct SquaredModulus<'a, T> {
    spf: &'a Spf<T>,
    m: u32,
    // j! factors for j = m, m+1, m+2
    facts: [T; 3],
}

impl<'a, T: Scalar> SquaredModulus<'a, T> {
    fn new(spf: &'a Spf<T>, m: u32) -> Self {
        Self {
            spf,
            m,
            facts: [factorial(m), factorial(m + 1), factorial(m + 2)],
        }
    }
}

impl<T: Scalar> SmoothProbe<T> for SquaredModulus<'_, T> {
    fn probe(&self, x: T) -> (T, T, T) {
        let [g0, g1, g2] = self.spf.derivative_jet(x, self.m);
        let two = T::lit(2.0);
        let f = g0.norm_sqr();
        let df = two * (g1 * g0.conj()).re;
        let d2f = two * g1.norm_sqr() + two * (g2 * g0.conj()).re;
        (f, df, d2f)
    }

    fn curvature_bound(&self, a: T, b: T) -> T {
        let mut sums = [T::zero(); 3];
        for p in self.spf.poles() {
            let re = p.location.re;
            let dx = if re < a {
                a - re
            } else if re > b {
                re - b
            } else {
                T::zero()
            };
            let inv = T::one() / dx.hypot(p.location.im);
            let mut w = inv.powi(self.m as i32 + 1) * T::count(p.multiplicity as u64);
            for s in sums.iter_mut() {
                *s = *s + w;
                w = w * inv;
            }
        }
        let b0 = sums[0] * self.facts[0];
        let b1 = sums[1] * self.facts[1];
        let b2 = sums[2] * self.facts[2];
        let two = T::lit(2.0);
        (two * b1 * b1 + two * b2 * b0) * (T::one() + T::lit(1e3) * T::epsilon())
    }
}

fn derivative_order(use_derivative: bool) -> u32 {
    u32::from(use_derivative)
}

/// `sup_{x∈ℝ} |ρ(x)|`, or `|ρ'(x)|` with `use_derivative`.
pub fn sup_norm_real<T: Scalar>(spf: &Spf<T>, use_derivative: bool) -> NormResult<T> {
    sup_norm_real_with(spf, use_derivative, &NormOptions::default())
}

pub fn sup_norm_real_with<T: Scalar>(
    spf: &Spf<T>,
    use_derivative: bool,
    opts: &NormOptions<T>,
) -> NormResult<T> {
    let m = derivative_order(use_derivative);
    let probe = SquaredModulus::new(spf, m);
    let a = spf.max_abs_real();
    let max_y = spf
        .poles()
        .iter()
        .map(|p| p.location.im.abs())
        .fold(T::zero(), T::max);

    let mut pts = vec![T::zero()];
    for p in spf.poles() {
        let (re, y) = (p.location.re, p.location.im.abs());
        pts.extend([re, re - y, re + y]);
    }
    let mut floor_sq = pts
        .iter()
        .map(|&x| probe.probe(x).0)
        .fold(T::zero(), T::max);
    if !(floor_sq > T::zero()) {
        floor_sq = T::min_positive_value();
    }
    // beyond ±X the tail bound is at most half of a value already attained
    let n = T::count(spf.order() as u64);
    let reach = (T::lit(2.0) * factorial::<T>(m) * n / floor_sq.sqrt())
        .powf(T::one() / T::count(m as u64 + 1));
    let x_max = a + reach.max(max_y).max(T::one());
    pts.push(-x_max);
    pts.push(x_max);
    let mut pts: Vec<T> = pts.into_iter().map(|x| x.max(-x_max).min(x_max)).collect();
    pts.sort_by(|u, v| u.partial_cmp(v).unwrap());
    pts.dedup();

    let cert = certified_max(
        &probe,
        &pts,
        &Settings {
            rel_tol: opts.sup_rel_tol,
            abs_tol: T::zero(),
            max_panels: opts.max_panels,
        },
    );
    let value = cert.value.sqrt();
    let upper = cert.upper.sqrt();
    let floor = (value * T::lit(4.0) * T::epsilon()).max(T::min_positive_value());
    NormResult {
        value,
        witness: cert.argmax,
        certified_error: (upper - value).max(floor),
    }
}

/// `(∫_ℝ |ρ^{(m)}(x)|^p dx)^{1/p}` for finite `p > 1`.
pub fn lp_norm_real<T: Scalar>(spf: &Spf<T>, p: T, use_derivative: bool) -> Result<NormResult<T>> {
    lp_norm_real_with(spf, p, use_derivative, &NormOptions::default())
}

pub fn lp_norm_real_with<T: Scalar>(
    spf: &Spf<T>,
    p: T,
    use_derivative: bool,
    opts: &NormOptions<T>,
) -> Result<NormResult<T>> {
    if !(p > T::one()) || !p.is_finite() {
        return Err(Error::UnsupportedExponent(p.as_f64()));
    }
    let m = derivative_order(use_derivative);
    let rule = GaussLegendre::new(GAUSS_ORDER);
    let integrand = |x: T| spf.real_nth(x, m).norm().powf(p);

    let a = spf.max_abs_real();
    let max_y = spf
        .poles()
        .iter()
        .map(|q| q.location.im.abs())
        .fold(T::zero(), T::max);
    let core = a + T::lit(16.0) * max_y.max(T::one());
    let mut pts = vec![-core, T::zero(), core];
    pts.extend(spf.poles().iter().map(|q| q.location.re));
    pts.sort_by(|u, v| u.partial_cmp(v).unwrap());
    pts.dedup();
    // closed-form tail: ∫_X^∞ (m!·n/(x−a))^{(m+1)p}... per side
    let n = T::count(spf.order() as u64);
    let decay = T::count(m as u64 + 1) * p - T::one();
    let amp = (factorial::<T>(m) * n).powf(p);
    // panel tolerance scales with the integral under z -> cz
    let panel_tol = opts.panel_tol * amp * spf.min_abs_imag().powf(-decay);
    let inner = adaptive(&rule, &integrand, &pts, panel_tol, 60);
    let tail_at = |x: T| T::lit(2.0) * amp * (x - a).powf(-decay) / decay;
    let target = opts.tail_rel_tol * inner.value.max(T::min_positive_value());

    let mut edges = vec![core];
    let mut x = core;
    for _ in 0..400 {
        if tail_at(x) <= target {
            break;
        }
        x = a + (x - a) * T::lit(2.0);
        edges.push(x);
    }
    let mut outer_value = T::zero();
    let mut outer_error = T::zero();
    if edges.len() > 1 {
        let right = adaptive(&rule, &integrand, &edges, panel_tol, 60);
        let mirrored: Vec<T> = edges.iter().rev().map(|&e| -e).collect();
        let left = adaptive(&rule, &integrand, &mirrored, panel_tol, 60);
        outer_value = left.value + right.value;
        outer_error = left.error + right.error;
    }
    let tail = tail_at(x);
    let integral = inner.value + outer_value;
    let err = inner.error + outer_error;
    let inv_p = T::one() / p;
    let value = integral.powf(inv_p);
    let up = (integral + err + tail).powf(inv_p) - value;
    let down = value - (integral - err).max(T::zero()).powf(inv_p);
    let floor = (value * T::lit(4.0) * T::epsilon()).max(T::min_positive_value());
    Ok(NormResult {
        value,
        witness: T::zero(),
        certified_error: up.max(down).max(floor),
    })
}

/// Which extremal functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionalKind {
    /// `Y(ρ)·‖ρ‖_p^q`
    Gorin,
    /// `Y(ρ)·‖ρ'‖_p^{q/(q+1)}`
    Gelfond,
}

impl std::str::FromStr for FunctionalKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gorin" => Ok(Self::Gorin),
            "gelfond" => Ok(Self::Gelfond),
            other => Err(Error::Parse(format!("unknown functional '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalValue<T> {
    pub kind: FunctionalKind,
    /// Exponent; infinite for the sup-norm.
    pub p: T,
    pub value: T,
    pub min_abs_imag: T,
    pub norm: NormResult<T>,
}

fn check_exponent<T: Scalar>(p: T) -> Result<()> {
    if p > T::one() {
        Ok(())
    } else {
        Err(Error::UnsupportedExponent(p.as_f64()))
    }
}

fn norm_for<T: Scalar>(
    spf: &Spf<T>,
    p: T,
    use_derivative: bool,
    opts: &NormOptions<T>,
) -> Result<NormResult<T>> {
    check_exponent(p)?;
    if p.is_infinite() {
        Ok(sup_norm_real_with(spf, use_derivative, opts))
    } else {
        lp_norm_real_with(spf, p, use_derivative, opts)
    }
}

/// Evaluates either functional with explicit accuracy settings.
pub fn functional_with<T: Scalar>(
    kind: FunctionalKind,
    spf: &Spf<T>,
    p: T,
    opts: &NormOptions<T>,
) -> Result<FunctionalValue<T>> {
    let q = conjugate_exponent(p);
    let y = spf.min_abs_imag();
    let (norm, exponent) = match kind {
        FunctionalKind::Gorin => (norm_for(spf, p, false, opts)?, q),
        FunctionalKind::Gelfond => (norm_for(spf, p, true, opts)?, q / (q + T::one())),
    };
    Ok(FunctionalValue {
        kind,
        p,
        value: y * norm.value.powf(exponent),
        min_abs_imag: y,
        norm,
    })
}

/// `Y(ρ)·‖ρ‖_p^q` with `1/p + 1/q = 1` (`q = 1` at `p = ∞`).
pub fn gorin_functional<T: Scalar>(spf: &Spf<T>, p: T) -> Result<FunctionalValue<T>> {
    functional_with(FunctionalKind::Gorin, spf, p, &NormOptions::default())
}

/// `Y(ρ)·‖ρ'‖_p^{q/(q+1)}`; the exponent is `1/2` at `p = ∞`.
pub fn gelfond_functional<T: Scalar>(spf: &Spf<T>, p: T) -> Result<FunctionalValue<T>> {
    functional_with(FunctionalKind::Gelfond, spf, p, &NormOptions::default())
}

/// Half-plane estimate `max(‖ρ⁺‖_∞, ‖ρ⁻‖_∞) ≤ 2p·sin^{−q}(π/p)·‖ρ‖_p^q`.
///
/// `rhs_without_constant` is `‖ρ‖_p^q`; the constant is in the context and
/// `pass` compares against the full right side.
pub fn beta_p_check<T: Scalar>(spf: &Spf<T>, p: T) -> Result<BoundReport> {
    if !(p > T::one()) || !p.is_finite() {
        return Err(Error::UnsupportedExponent(p.as_f64()));
    }
    let q = conjugate_exponent(p);
    let (upper, lower) = spf.split_half_planes();
    let side = |s: Option<Spf<T>>| s.map_or(T::zero(), |s| sup_norm_real(&s, false).value);
    let (lhs_up, lhs_down) = (side(upper), side(lower));
    let lhs = lhs_up.max(lhs_down);
    let lp = lp_norm_real(spf, p, false)?;
    let scaled = lp.value.powf(q);
    let constant = T::lit(2.0) * p * (T::PI() / p).sin().powf(-q);
    let rhs = constant * scaled;
    let slack = T::tolerance(1e-9) * rhs;
    Ok(
        BoundReport::new("beta-p", lhs.as_f64(), scaled.as_f64(), lhs <= rhs + slack)
            .with_order(spf.order())
            .with_num("p", p.as_f64())
            .with_num("q", q.as_f64())
            .with_num("constant", constant.as_f64())
            .with_num("rhs", rhs.as_f64())
            .with_num("sup_upper", lhs_up.as_f64())
            .with_num("sup_lower", lhs_down.as_f64()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }
    fn f1() -> Spf<f64> {
        Spf::new([(c(0.0, 1.0), 1)]).unwrap()
    }
    fn f2() -> Spf<f64> {
        Spf::new([(c(0.0, 1.0), 1), (c(0.0, -1.0), 1)]).unwrap()
    }

    #[test]
    fn sup_norm_fixtures() {
        let r = sup_norm_real(&f1(), false);
        assert!((r.value - 1.0).abs() <= 1e-12);
        assert!(r.witness.abs() < 1e-5);
        assert!(r.certified_error > 0.0 && r.certified_error <= 1e-9 * r.value);

        let r = sup_norm_real(&f2(), false);
        assert!((r.value - 1.0).abs() <= 1e-12);
        assert!((r.witness.abs() - 1.0).abs() < 1e-5);

        let r = sup_norm_real(&f2(), true);
        assert!((r.value - 2.0).abs() <= 1e-12);
        assert!(r.witness.abs() < 1e-5);
        assert!(r.certified_error <= 1e-9 * r.value);
    }

    #[test]
    fn lp_norm_fixtures() {
        let r = lp_norm_real(&f1(), 2.0, false).unwrap();
        assert!(
            (r.value - PI.sqrt()).abs() < 1e-9,
            "{}",
            r.value - PI.sqrt()
        );
        assert!(r.certified_error <= 1e-8);
        let r = lp_norm_real(&f2(), 2.0, false).unwrap();
        assert!((r.value - (2.0 * PI).sqrt()).abs() < 1e-9);
        assert_eq!(
            lp_norm_real(&f1(), 1.0, false),
            Err(Error::UnsupportedExponent(1.0))
        );
    }

    #[test]
    fn derivative_lp_norm() {
        // |ρ'|² = 1/(1+x²)² for F1, ∫ = π/2
        let r = lp_norm_real(&f1(), 2.0, true).unwrap();
        assert!((r.value - (PI / 2.0).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn functionals() {
        let g = gorin_functional(&f2(), f64::INFINITY).unwrap();
        assert!((g.value - 1.0).abs() < 1e-12);
        let g = gorin_functional(&f1(), 2.0).unwrap();
        assert!((g.value - PI).abs() < 1e-8);
        let g = gelfond_functional(&f2(), f64::INFINITY).unwrap();
        assert!((g.value - 2f64.sqrt()).abs() < 1e-12);
        let g = gelfond_functional(&f1(), f64::INFINITY).unwrap();
        assert!((g.value - 1.0).abs() < 1e-12);
        for c in [0.1, 7.3] {
            let s = f2().rescale(c).unwrap();
            let g = gorin_functional(&s, f64::INFINITY).unwrap();
            assert!((g.value - 1.0).abs() < 1e-9);
            let g = gelfond_functional(&s, f64::INFINITY).unwrap();
            assert!((g.value - 2f64.sqrt()).abs() < 1e-9);
        }
        assert!(gorin_functional(&f1(), 0.5).is_err());
    }

    #[test]
    fn beta_p_fixtures() {
        let r = beta_p_check(&f2(), 2.0).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12);
        let rhs = r.context["rhs"].as_f64().unwrap();
        assert!((rhs - 8.0 * PI).abs() < 1e-7);
        assert!(r.pass);
        let r = beta_p_check(&f1(), 2.0).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-12);
        assert_eq!(r.context["sup_lower"].as_f64().unwrap(), 0.0);
        assert!(r.pass);
        assert!(beta_p_check(&f1(), f64::INFINITY).is_err());
    }

    #[test]
    fn f32_sup_norm() {
        let s =
            Spf::<f32>::new([(Complex::new(0.0, 1.0), 1), (Complex::new(0.0, -1.0), 1)]).unwrap();
        let r = sup_norm_real(&s, false);
        assert!((r.value - 1.0).abs() < 1e-4);
    }
}
