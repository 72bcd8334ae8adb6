//! Fixed-order Gauss–Legendre panels with adaptive bisection.

use crate::scalar::Scalar;

/// Panel order used by the L^p engine.
pub const GAUSS_ORDER: usize = 15;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// computed by Newton iteration on `P_n` in the working precision.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> GaussLegendre<T> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nn = T::count(n as u64);
        let half = T::lit(0.5);
        for i in 0..n.div_ceil(2) {
            let guess = (T::PI() * (T::count(i as u64) + T::lit(0.75)) / (nn + half)).cos();
            let mut x = guess;
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x = x - dx;
                if dx.abs() <= T::epsilon() * T::lit(4.0) {
                    let (_, d) = legendre(n, x);
                    dp = d;
                    break;
                }
            }
            let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Self { nodes, weights }
    }

    /// `∫_a^b f` with this rule.
    pub fn integrate<F: Fn(T) -> T>(&self, f: &F, a: T, b: T) -> T {
        let c = (a + b) / T::lit(2.0);
        let h = (b - a) / T::lit(2.0);
        let mut s = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s = s + *w * f(c + h * *x);
        }
        s * h
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre<T: Scalar>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kk = T::count(k as u64);
        let p2 = ((T::lit(2.0) * kk - T::one()) * x * p1 - (kk - T::one()) * p0) / kk;
        p0 = p1;
        p1 = p2;
    }
    let nn = T::count(n as u64);
    let dp = nn * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral<T> {
    pub value: T,
    /// Sum of per-panel discrepancies between one panel and its two halves.
    pub error: T,
    pub panels: usize,
}

/// Adaptive bisection over consecutive breakpoint intervals.
///
/// A panel is accepted once the single-panel and two-half estimates agree to
/// `max(abs_tol, rel_floor·|estimate|)`.
pub fn adaptive<T: Scalar, F: Fn(T) -> T>(
    rule: &GaussLegendre<T>,
    f: &F,
    breakpoints: &[T],
    abs_tol: T,
    max_depth: u32,
) -> Integral<T> {
    let rel_floor = T::lit(64.0) * T::epsilon();
    let mut value = T::zero();
    let mut error = T::zero();
    let mut panels = 0usize;
    // explicit stack keeps the summation order fixed
    for w in breakpoints.windows(2) {
        if !(w[1] > w[0]) {
            continue;
        }
        let mut stack = vec![(w[0], w[1], rule.integrate(f, w[0], w[1]), 0u32)];
        while let Some((a, b, whole, depth)) = stack.pop() {
            let m = (a + b) / T::lit(2.0);
            let left = rule.integrate(f, a, m);
            let right = rule.integrate(f, m, b);
            let halves = left + right;
            let diff = (halves - whole).abs();
            if diff <= abs_tol.max(rel_floor * halves.abs())
                || depth >= max_depth
                || m <= a
                || m >= b
            {
                value = value + halves;
                error = error + diff;
                panels += 2;
            } else {
                stack.push((m, b, right, depth + 1));
                stack.push((a, m, left, depth + 1));
            }
        }
    }
    Integral {
        value,
        error,
        panels,
    }
}
