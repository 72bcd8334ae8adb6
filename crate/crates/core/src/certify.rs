//! Certified maximization of a smooth real function on a bounded interval.
//!
//! Each panel `[a, b]` carries the upper bound `max(f(a), f(b)) + K·(b−a)²/8`
//! where `K ≥ sup |f''|` on the panel: an interior maximum `x*` has
//! `f'(x*) = 0`, so Taylor's theorem around `x*` bounds `f(x*)` by either
//! endpoint value plus `K·dist²/2`. Panels are refined best-first until every
//! surviving upper bound is within tolerance of the best value found.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::scalar::Scalar;

/// A function that can be probed for value, slope and curvature, and that
/// can bound its own curvature on a panel.
pub(crate) trait SmoothProbe<T> {
    /// `(f(x), f'(x), f''(x))`.
    fn probe(&self, x: T) -> (T, T, T);
    /// An upper bound of `|f''|` on `[a, b]`.
    fn curvature_bound(&self, a: T, b: T) -> T;
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct MaxCertificate<T> {
    pub value: T,
    pub argmax: T,
    /// Upper bound of the true maximum.
    pub upper: T,
}

#[derive(Clone, Copy)]
struct Node<T> {
    x: T,
    f: T,
    df: T,
}

struct Panel<T> {
    left: Node<T>,
    right: Node<T>,
    upper: T,
}

impl<T: Scalar> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Scalar> Eq for Panel<T> {}
impl<T: Scalar> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Scalar> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper
            .partial_cmp(&other.upper)
            .unwrap_or(Ordering::Equal)
            .then_with(|| {
                other
                    .left
                    .x
                    .partial_cmp(&self.left.x)
                    .unwrap_or(Ordering::Equal)
            })
    }
}

pub(crate) struct Settings<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_panels: usize,
}

fn panel_upper<T: Scalar, P: SmoothProbe<T>>(p: &P, l: &Node<T>, r: &Node<T>) -> T {
    let h = r.x - l.x;
    l.f.max(r.f) + p.curvature_bound(l.x, r.x) * h * h / T::lit(8.0)
}

/// Safeguarded Newton iteration for a zero of `f'` inside a bracket where
/// `f'` goes from positive to negative.
fn polish<T: Scalar, P: SmoothProbe<T>>(p: &P, l: &Node<T>, r: &Node<T>) -> Node<T> {
    let (mut lo, mut hi) = (l.x, r.x);
    let mut x = (lo + hi) / T::lit(2.0);
    let mut best = if l.f >= r.f { *l } else { *r };
    for _ in 0..60 {
        let (f, df, d2f) = p.probe(x);
        if f > best.f {
            best = Node { x, f, df };
        }
        if df > T::zero() {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= T::epsilon() * (T::one() + x.abs()) {
            break;
        }
        let newton = x - df / d2f;
        x = if d2f < T::zero() && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) / T::lit(2.0)
        };
    }
    best
}

/// Maximizes `f` over `[breakpoints[0], breakpoints[last]]`.
///
/// `breakpoints` must be sorted and contain at least two distinct points.
pub(crate) fn certified_max<T: Scalar, P: SmoothProbe<T>>(
    probe: &P,
    breakpoints: &[T],
    settings: &Settings<T>,
) -> MaxCertificate<T> {
    debug_assert!(breakpoints.len() >= 2);
    let nodes: Vec<Node<T>> = breakpoints
        .iter()
        .map(|&x| {
            let (f, df, _) = probe.probe(x);
            Node { x, f, df }
        })
        .collect();
    let mut best = nodes[0];
    for n in &nodes {
        if n.f > best.f {
            best = *n;
        }
    }

    let mut heap = BinaryHeap::new();
    for w in nodes.windows(2) {
        if w[1].x > w[0].x {
            let upper = panel_upper(probe, &w[0], &w[1]);
            heap.push(Panel {
                left: w[0],
                right: w[1],
                upper,
            });
        }
    }

    let tol = |b: T| settings.rel_tol * b.abs() + settings.abs_tol;
    let mut panels = heap.len();
    let mut exhausted_upper = T::neg_infinity();
    while let Some(panel) = heap.pop() {
        if panel.upper <= best.f + tol(best.f) {
            heap.push(panel);
            break;
        }
        if panels >= settings.max_panels {
            heap.push(panel);
            break;
        }
        let (l, r) = (panel.left, panel.right);
        let mid_x = (l.x + r.x) / T::lit(2.0);
        if mid_x <= l.x || mid_x >= r.x {
            // cannot split further in this precision
            exhausted_upper = exhausted_upper.max(panel.upper);
            continue;
        }
        if l.df > T::zero() && r.df < T::zero() {
            let candidate = polish(probe, &l, &r);
            if candidate.f > best.f {
                best = candidate;
            }
        }
        let (f, df, _) = probe.probe(mid_x);
        let mid = Node { x: mid_x, f, df };
        if mid.f > best.f {
            best = mid;
        }
        for (a, b) in [(l, mid), (mid, r)] {
            let upper = panel_upper(probe, &a, &b);
            panels += 1;
            if upper > best.f + tol(best.f) {
                heap.push(Panel {
                    left: a,
                    right: b,
                    upper,
                });
            }
        }
    }
    let upper = heap
        .iter()
        .map(|p| p.upper)
        .fold(exhausted_upper, T::max)
        .max(best.f);
    MaxCertificate {
        value: best.f,
        argmax: best.x,
        upper,
    }
}
