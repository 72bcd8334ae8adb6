//! Blaschke products of configurations symmetric about both coordinate axes.
//!
//! For upper-half-plane poles `z_k = x_k + i y_k` with multiplicities `n_k`,
//! `B(z) = Π ((z − z_k)/(z − conj z_k))^{n_k}` is unimodular on ℝ with phase
//! density `μ(x) = Σ n_k y_k / ((x − x_k)² + y_k²)`. Its unwrapped argument
//! `Θ(x) = 2∫_0^x μ` has a closed form and is strictly increasing, so the
//! solutions of `B(x) = −1` are the preimages of the odd multiples of `π`.

use num_complex::Complex;

use crate::certify::{certified_max, Settings, SmoothProbe};
use crate::error::{Error, Result};
use crate::report::BoundReport;
use crate::scalar::Scalar;
use crate::spf::{Pole, Spf};

/// Above this many factors `B` is evaluated as `exp(Σ log)`.
const LOG_EVAL_THRESHOLD: u32 = 32;

/// Upper-half-plane poles of an SPF symmetric with respect to both axes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricConfiguration<T> {
    upper: Spf<T>,
    eta2: u32,
}

impl<T: Scalar> SymmetricConfiguration<T> {
    /// Validates and builds a configuration from its upper-half-plane poles.
    pub fn new<I>(upper_poles: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Complex<T>, u32)>,
    {
        let upper = Spf::new(upper_poles)?;
        Self::from_upper(upper)
    }

    pub fn from_upper(upper: Spf<T>) -> Result<Self> {
        let poles = upper.poles();
        for (k, p) in poles.iter().enumerate() {
            let z = p.location;
            if !(z.im > T::zero()) {
                return Err(Error::InvalidConfiguration(format!(
                    "pole {k} is not in the upper half-plane"
                )));
            }
            if z.re == T::zero() {
                if p.multiplicity % 2 != 0 {
                    return Err(Error::InvalidConfiguration(format!(
                        "pole {k} on the imaginary axis has odd multiplicity {}",
                        p.multiplicity
                    )));
                }
            } else {
                let mirror = Complex::new(-z.re, z.im);
                match poles.iter().find(|q| q.location == mirror) {
                    Some(q) if q.multiplicity == p.multiplicity => {}
                    Some(_) => {
                        return Err(Error::InvalidConfiguration(format!(
                            "pole {k} and its mirror have different multiplicities"
                        )))
                    }
                    None => {
                        return Err(Error::InvalidConfiguration(format!(
                            "pole {k} has no mirror image across the imaginary axis"
                        )))
                    }
                }
            }
        }
        let eta2 = upper.order();
        debug_assert!(eta2 % 2 == 0);
        Ok(Self { upper, eta2 })
    }

    /// The upper-half-plane part of a symmetric SPF.
    pub fn from_spf(spf: &Spf<T>) -> Result<Self> {
        let (upper, _) = spf.split_half_planes();
        let upper = upper.ok_or_else(|| {
            Error::InvalidConfiguration("no poles in the upper half-plane".into())
        })?;
        let conf = Self::from_upper(upper)?;
        if conf.to_spf()? != *spf {
            return Err(Error::InvalidConfiguration(
                "pole set is not symmetric about the real axis".into(),
            ));
        }
        Ok(conf)
    }

    pub fn upper_poles(&self) -> &[Pole<T>] {
        self.upper.poles()
    }

    /// The upper-half-plane partial fraction `Σ n_k / (z − z_k)`.
    pub fn upper_spf(&self) -> &Spf<T> {
        &self.upper
    }

    /// `2η = Σ n_k`, half the order of the full symmetric SPF.
    pub fn eta2(&self) -> u32 {
        self.eta2
    }

    pub fn eta(&self) -> u32 {
        self.eta2 / 2
    }

    /// The full SPF with the conjugate poles added.
    pub fn to_spf(&self) -> Result<Spf<T>> {
        let conj = self.upper.conjugate();
        Spf::new(
            self.upper
                .poles()
                .iter()
                .chain(conj.poles())
                .map(|p| (p.location, p.multiplicity)),
        )
    }

    /// Multiplicity of the pole at `i·y`, if there is one.
    pub fn imaginary_axis_multiplicity(&self, y: T) -> Option<u32> {
        let z = Complex::new(T::zero(), y);
        self.upper
            .poles()
            .iter()
            .find(|p| p.location == z)
            .map(|p| p.multiplicity)
    }

    /// `B(z)`.
    pub fn blaschke_eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        let poles = self.upper.poles();
        if let Some(index) = poles.iter().position(|p| p.location.conj() == z) {
            return Err(Error::EvalAtConjugatePole { index });
        }
        if self.eta2 > LOG_EVAL_THRESHOLD {
            let mut s = Complex::new(T::zero(), T::zero());
            for p in poles {
                let n = T::count(p.multiplicity as u64);
                s = s + ((z - p.location).ln() - (z - p.location.conj()).ln()) * n;
            }
            Ok(s.exp())
        } else {
            let mut prod = Complex::new(T::one(), T::zero());
            for p in poles {
                prod = prod * ((z - p.location) / (z - p.location.conj())).powu(p.multiplicity);
            }
            Ok(prod)
        }
    }

    /// `μ(x) = Σ n_k y_k / ((x − x_k)² + y_k²)`.
    pub fn mu(&self, x: T) -> T {
        self.upper
            .poles()
            .iter()
            .map(|p| {
                let u = x - p.location.re;
                let y = p.location.im;
                T::count(p.multiplicity as u64) * y / (u * u + y * y)
            })
            .sum()
    }

    /// `(μ, μ', μ'')` at `x`, via `μ = Im Σ n_k/(x − z_k)`.
    fn mu_jet(&self, x: T) -> (T, T, T) {
        let [g0, g1, g2] = self.upper.derivative_jet(x, 0);
        (g0.im, g1.im, g2.im)
    }

    /// Unwrapped argument of `B(x)/B(0)`:
    /// `Θ(x) = 2 Σ n_k [atan((x − x_k)/y_k) + atan(x_k/y_k)]`.
    pub fn phase(&self, x: T) -> T {
        let two = T::lit(2.0);
        self.upper
            .poles()
            .iter()
            .map(|p| {
                let (xk, yk) = (p.location.re, p.location.im);
                T::count(p.multiplicity as u64) * (((x - xk) / yk).atan() + (xk / yk).atan())
            })
            .sum::<T>()
            * two
    }

    /// Solves `Θ(x) = target` for `x > 0`, given `0 < target < π·2η`.
    fn solve_phase(&self, target: T) -> Result<T> {
        let scale = self
            .upper
            .poles()
            .iter()
            .map(|p| p.location.re.abs() + p.location.im)
            .fold(T::zero(), T::max);
        let mut lo = T::zero();
        let mut hi = scale.max(T::min_positive_value());
        let mut steps = 0;
        while self.phase(hi) < target {
            lo = hi;
            hi = hi * T::lit(2.0);
            steps += 1;
            if steps > 2000 || !hi.is_finite() {
                return Err(Error::ConvergenceFailure(
                    "could not bracket a root of B(x) = -1".into(),
                ));
            }
        }
        let two = T::lit(2.0);
        let mut x = (lo + hi) / two;
        for _ in 0..200 {
            let g = self.phase(x) - target;
            if g == T::zero() {
                return Ok(x);
            }
            if g < T::zero() {
                lo = x;
            } else {
                hi = x;
            }
            let newton = x - g / (two * self.mu(x));
            let next = if newton > lo && newton < hi {
                newton
            } else {
                (lo + hi) / two
            };
            if (next - x).abs() <= T::epsilon() * x.abs() || hi - lo <= T::epsilon() * hi {
                return Ok(next);
            }
            x = next;
        }
        Ok(x)
    }

    /// The `2η` real solutions of `B(t) = −1`, i.e. `Θ(t) ∈ {±π, ±3π, …}`.
    pub fn minus_one_roots(&self) -> Result<RootSet<T>> {
        let eta = self.eta() as usize;
        let tol = T::tolerance(1e-10);
        let mut positive = Vec::with_capacity(eta);
        for j in 1..=eta {
            let target = T::PI() * T::count(2 * j as u64 - 1);
            let r = self.solve_phase(target)?;
            assert!(r > T::zero(), "root of B(x) = -1 at the origin");
            let b = self.blaschke_eval(Complex::new(r, T::zero()))?;
            let residual = (b + T::one()).norm();
            if !(residual <= tol) {
                return Err(Error::ConvergenceFailure(format!(
                    "root {j}: |B(t)+1| = {residual} exceeds tolerance"
                )));
            }
            positive.push(r);
        }
        let mut roots: Vec<T> = positive.iter().rev().map(|&r| -r).collect();
        roots.extend_from_slice(&positive);
        Ok(RootSet { roots })
    }

    /// Residual of the partial fraction decomposition
    /// `(1 − B)/(1 + B) = i Σ_k 1/(μ(t_k)(z − t_k))` at the sample points.
    ///
    /// `lhs` is the worst scaled residual `|L − R|/(1 + |L|)`; the check
    /// passes when it is at most `1e−9`.
    pub fn decomposition_check(&self, sample_points: &[Complex<T>]) -> Result<BoundReport> {
        let roots = self.minus_one_roots()?;
        let weights: Vec<T> = roots.roots.iter().map(|&t| T::one() / self.mu(t)).collect();
        let threshold = T::tolerance(1e-9);
        let mut worst = T::zero();
        let mut worst_abs = T::zero();
        for &z in sample_points {
            let b = self.blaschke_eval(z)?;
            let one = Complex::new(T::one(), T::zero());
            let lhs = (one - b) / (one + b);
            let mut rhs = Complex::new(T::zero(), T::zero());
            for (&t, &w) in roots.roots.iter().zip(&weights) {
                rhs = rhs + (z - t).inv() * w;
            }
            rhs = rhs * Complex::new(T::zero(), T::one());
            let diff = (lhs - rhs).norm();
            let scaled = diff / (T::one() + lhs.norm());
            if !(scaled <= worst) {
                worst = if scaled.is_nan() {
                    T::infinity()
                } else {
                    scaled
                };
                worst_abs = diff;
            }
        }
        Ok(BoundReport::new(
            "decomposition",
            worst.as_f64(),
            threshold.as_f64(),
            worst <= threshold,
        )
        .with_order(2 * self.eta2)
        .with("samples", sample_points.len())
        .with_num("max_abs_residual", worst_abs.as_f64())
        .with("eta2", self.eta2))
    }

    /// Compares `Θ(r_k)/2`, i.e. `∫_0^{r_k} μ`, against `π(2k − 1)/2`.
    pub fn phase_integral_check(&self, k: usize) -> Result<BoundReport> {
        let eta = self.eta() as usize;
        if k == 0 || k > eta {
            return Err(Error::IndexOutOfRange { index: k, max: eta });
        }
        let roots = self.minus_one_roots()?;
        let rk = roots.positive_roots()[k - 1];
        let lhs = self.phase(rk) / T::lit(2.0);
        let rhs = T::PI() * T::count(2 * k as u64 - 1) / T::lit(2.0);
        let tol = T::tolerance(1e-9);
        Ok(BoundReport::new(
            "phase-integral",
            lhs.as_f64(),
            rhs.as_f64(),
            (lhs - rhs).abs() <= tol,
        )
        .with_order(2 * self.eta2)
        .with("k", k)
        .with_num("r_k", rk.as_f64())
        .with_num("abs_difference", (lhs - rhs).abs().as_f64()))
    }

    /// `(min, max)` of `μ` on `[0, r]`.
    pub fn mu_range(&self, r: T) -> Result<(T, T)> {
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::DomainError("mu_range needs r > 0".into()));
        }
        let mut pts = vec![T::zero(), r];
        for p in self.upper.poles() {
            let xk = p.location.re;
            if xk > T::zero() && xk < r {
                pts.push(xk);
            }
        }
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        let settings = Settings {
            rel_tol: T::tolerance(1e-10),
            abs_tol: T::zero(),
            max_panels: 2_000_000,
        };
        let hi = certified_max(
            &MuProbe {
                conf: self,
                sign: T::one(),
            },
            &pts,
            &settings,
        );
        let lo = certified_max(
            &MuProbe {
                conf: self,
                sign: -T::one(),
            },
            &pts,
            &settings,
        );
        Ok((-lo.value, hi.value))
    }

    /// `sup_ℝ μ` (attained, since `μ` decays at infinity).
    pub fn mu_sup(&self) -> T {
        let scale = self
            .upper
            .poles()
            .iter()
            .map(|p| p.location.re.abs() + p.location.im)
            .fold(T::zero(), T::max);
        let mut pts = vec![-scale, T::zero(), scale];
        pts.extend(self.upper.poles().iter().map(|p| p.location.re));
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        // μ is even, and every pole lies within [−scale, scale] horizontally,
        // where each term attains its maximum; outside, all terms decrease.
        certified_max(
            &MuProbe {
                conf: self,
                sign: T::one(),
            },
            &pts,
            &Settings {
                rel_tol: T::tolerance(1e-10),
                abs_tol: T::zero(),
                max_panels: 2_000_000,
            },
        )
        .value
    }

    /// Checks `|μ(x1) − μ(x2)| ≤ 3 ln(1 + r/(2 y1))`, `r = |x1 − x2|`, for
    /// every pair. A predicate on the configuration, not a theorem.
    pub fn mu_continuity_check(&self, y1: T, pairs: &[(T, T)]) -> Result<BoundReport> {
        if !(y1 > T::zero()) {
            return Err(Error::DomainError("continuity check needs y1 > 0".into()));
        }
        let slack = T::lit(16.0) * T::epsilon() * self.upper.sup_majorant();
        let mut pass = true;
        let mut worst = (T::zero(), T::zero(), T::neg_infinity());
        for &(x1, x2) in pairs {
            let r = (x1 - x2).abs();
            let lhs = (self.mu(x1) - self.mu(x2)).abs();
            let rhs = T::lit(3.0) * (r / (T::lit(2.0) * y1)).ln_1p();
            if lhs > rhs + slack {
                pass = false;
            }
            if lhs - rhs > worst.2 {
                worst = (lhs, rhs, lhs - rhs);
            }
        }
        Ok(
            BoundReport::new("mu-continuity", worst.0.as_f64(), worst.1.as_f64(), pass)
                .with_order(2 * self.eta2)
                .with_num("y1", y1.as_f64())
                .with("pairs", pairs.len())
                .with_num("worst_margin", worst.2.as_f64()),
        )
    }
}

struct MuProbe<'a, T> {
    conf: &'a SymmetricConfiguration<T>,
    sign: T,
}

impl<T: Scalar> SmoothProbe<T> for MuProbe<'_, T> {
    fn probe(&self, x: T) -> (T, T, T) {
        let (f, d, d2) = self.conf.mu_jet(x);
        (self.sign * f, self.sign * d, self.sign * d2)
    }

    fn curvature_bound(&self, a: T, b: T) -> T {
        // |μ''| ≤ |Σ 2 n_k/(x − z_k)³|
        let s: T = self
            .conf
            .upper
            .poles()
            .iter()
            .map(|p| {
                let re = p.location.re;
                let dx = if re < a {
                    a - re
                } else if re > b {
                    re - b
                } else {
                    T::zero()
                };
                T::count(p.multiplicity as u64) / dx.hypot(p.location.im).powi(3)
            })
            .sum();
        T::lit(2.0) * s * (T::one() + T::lit(1e3) * T::epsilon())
    }
}

/// Sorted real solutions `t_1 < … < t_{2η}` of `B(t) = −1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet<T> {
    roots: Vec<T>,
}

impl<T: Scalar> RootSet<T> {
    pub fn roots(&self) -> &[T] {
        &self.roots
    }

    /// `r_k = t_{η+k}`, `k = 1..η`.
    pub fn positive_roots(&self) -> &[T] {
        &self.roots[self.roots.len() / 2..]
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn f3() -> SymmetricConfiguration<f64> {
        SymmetricConfiguration::new([(c(0.0, 1.0), 2)]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(SymmetricConfiguration::new([(c(0.0, 1.0), 1)]).is_err());
        assert!(SymmetricConfiguration::new([(c(1.0, 1.0), 1)]).is_err());
        assert!(SymmetricConfiguration::new([(c(1.0, 1.0), 1), (c(-1.0, 1.0), 2)]).is_err());
        assert!(SymmetricConfiguration::new([(c(0.0, -1.0), 2)]).is_err());
        let ok = SymmetricConfiguration::new([(c(1.0, 1.0), 3), (c(-1.0, 1.0), 3)]).unwrap();
        assert_eq!(ok.eta2(), 6);
        let spf = ok.to_spf().unwrap();
        assert_eq!(SymmetricConfiguration::from_spf(&spf).unwrap(), ok);
    }

    #[test]
    fn blaschke_fixtures() {
        let b = f3().blaschke_eval(c(0.0, 0.0)).unwrap();
        assert!((b - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(f3().blaschke_eval(c(0.0, 1.0)).unwrap(), c(0.0, 0.0));
        let b = f3().blaschke_eval(c(1.0, 0.0)).unwrap();
        assert!((b - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            f3().blaschke_eval(c(0.0, -1.0)),
            Err(Error::EvalAtConjugatePole { .. })
        ));
    }

    #[test]
    fn mu_and_phase_fixtures() {
        assert_eq!(f3().mu(0.0), 2.0);
        assert_eq!(f3().mu(1.0), 1.0);
        assert_eq!(f3().mu(0.7), f3().mu(-0.7));
        assert!((f3().phase(1.0) - PI).abs() < 1e-15);
        assert_eq!(f3().phase(0.0), 0.0);
        assert_eq!(f3().phase(2.5) + f3().phase(-2.5), 0.0);
    }

    #[test]
    fn root_fixtures() {
        let r = f3().minus_one_roots().unwrap();
        assert_eq!(r.len(), 2);
        assert!((r.roots()[0] + 1.0).abs() < 1e-14);
        assert!((r.roots()[1] - 1.0).abs() < 1e-14);

        let quad = SymmetricConfiguration::new([(c(0.0, 1.0), 4)]).unwrap();
        let r = quad.minus_one_roots().unwrap();
        let expect = [
            -(3.0 * PI / 8.0).tan(),
            -(PI / 8.0).tan(),
            (PI / 8.0).tan(),
            (3.0 * PI / 8.0).tan(),
        ];
        for (a, b) in r.roots().iter().zip(expect) {
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
    }

    #[test]
    fn decomposition_fixtures() {
        let rep = f3()
            .decomposition_check(&[c(0.0, 2.0), c(1.0, 1.0)])
            .unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.context["max_abs_residual"].as_f64().unwrap() < 1e-12);
        // at 2i both sides equal 0.8
        let b = f3().blaschke_eval(c(0.0, 2.0)).unwrap();
        assert!((b - c(1.0 / 9.0, 0.0)).norm() < 1e-15);
        let lhs = (c(1.0, 0.0) - b) / (c(1.0, 0.0) + b);
        assert!((lhs - c(0.8, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn phase_integral_fixtures() {
        let rep = f3().phase_integral_check(1).unwrap();
        assert!(rep.pass);
        assert!((rep.lhs - PI / 2.0).abs() < 1e-14);
        let quad = SymmetricConfiguration::new([(c(0.0, 1.0), 4)]).unwrap();
        let rep = quad.phase_integral_check(2).unwrap();
        assert!(rep.pass);
        assert!((rep.lhs - 1.5 * PI).abs() < 1e-13);
        assert_eq!(
            quad.phase_integral_check(3),
            Err(Error::IndexOutOfRange { index: 3, max: 2 })
        );
    }

    #[test]
    fn mu_range_fixtures() {
        let (lo, hi) = f3().mu_range(1.0).unwrap();
        assert!((lo - 1.0).abs() < 1e-9 && (hi - 2.0).abs() < 1e-9);
        let (lo, hi) = f3().mu_range(2.0).unwrap();
        assert!((lo - 0.4).abs() < 1e-9 && (hi - 2.0).abs() < 1e-9);
        assert!(f3().mu_range(0.0).is_err());
        assert!((f3().mu_sup() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn continuity_predicate() {
        let rep = f3().mu_continuity_check(1.0, &[(0.0, 0.0)]).unwrap();
        assert!(rep.pass);
        let spike = SymmetricConfiguration::new([(c(0.0, 0.01), 2)]).unwrap();
        let rep = spike.mu_continuity_check(1.0, &[(0.0, 1.0)]).unwrap();
        assert!(!rep.pass);
    }

    #[test]
    fn log_evaluation_agrees_with_product() {
        let poles: Vec<_> = (1..=9)
            .flat_map(|k| {
                let x = k as f64 * 0.7;
                [
                    (c(x, 0.5 + 0.1 * k as f64), 2),
                    (c(-x, 0.5 + 0.1 * k as f64), 2),
                ]
            })
            .collect();
        let conf = SymmetricConfiguration::new(poles.clone()).unwrap();
        assert!(conf.eta2() > LOG_EVAL_THRESHOLD);
        let z = c(0.37, 0.2);
        let direct: Complex<f64> = poles
            .iter()
            .map(|(p, m)| ((z - p) / (z - p.conj())).powu(*m))
            .product();
        assert!((conf.blaschke_eval(z).unwrap() - direct).norm() < 1e-12);
    }
}
