//! Nelder–Mead simplex minimization with dimension-adapted coefficients and
//! a shared evaluation budget.

/// Wraps an objective, counts evaluations against a budget and remembers
/// every improvement.
pub(crate) struct Tracker<F> {
    objective: F,
    pub evals: u64,
    budget: u64,
    pub best_x: Vec<f64>,
    pub best_f: f64,
    /// `(evaluation index, value)` at each improvement of the running minimum.
    pub history: Vec<(u64, f64)>,
}

impl<F: FnMut(&[f64]) -> f64> Tracker<F> {
    pub fn new(objective: F, budget: u64, dim: usize) -> Self {
        Self {
            objective,
            evals: 0,
            budget,
            best_x: vec![0.0; dim],
            best_f: f64::INFINITY,
            history: Vec::new(),
        }
    }

    pub fn exhausted(&self) -> bool {
        self.evals >= self.budget
    }

    /// `None` once the budget is spent. Non-finite values become `+∞`.
    pub fn eval(&mut self, x: &[f64]) -> Option<f64> {
        if self.exhausted() {
            return None;
        }
        self.evals += 1;
        let mut f = (self.objective)(x);
        if !f.is_finite() {
            f = f64::INFINITY;
        }
        if f < self.best_f {
            self.best_f = f;
            self.best_x.clear();
            self.best_x.extend_from_slice(x);
            self.history.push((self.evals, f));
        }
        Some(f)
    }
}

pub(crate) struct Outcome {
    pub f: f64,
}

pub(crate) struct Tolerances {
    pub f_rel: f64,
    pub x_abs: f64,
}

fn combine(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t (b − a)
    a.iter().zip(b).map(|(&u, &v)| u + t * (v - u)).collect()
}

/// One simplex run from `x0` with initial edge lengths `steps`.
///
/// Stops when the simplex has collapsed or the budget is spent; returns the
/// best vertex value of the final simplex. The overall best point lives in
/// the tracker.
pub(crate) fn minimize<F: FnMut(&[f64]) -> f64>(
    tracker: &mut Tracker<F>,
    x0: &[f64],
    steps: &[f64],
    tol: &Tolerances,
) -> Option<Outcome> {
    let d = x0.len();
    let df = d as f64;
    let (alpha, gamma, rho, sigma) = if d > 1 {
        (1.0, 1.0 + 2.0 / df, 0.75 - 1.0 / (2.0 * df), 1.0 - 1.0 / df)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    let f0 = tracker.eval(x0)?;
    simplex.push((x0.to_vec(), f0));
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += steps[i];
        let f = tracker.eval(&x)?;
        simplex.push((x, f));
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[d].1;
        let spread_f = worst - best;
        let spread_x = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread_x <= tol.x_abs && (spread_f <= tol.f_rel * best.abs() || !worst.is_finite()) {
            break;
        }
        if spread_x <= tol.x_abs * 1e-3 {
            break;
        }

        let mut centroid = vec![0.0; d];
        for (x, _) in &simplex[..d] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / df;
            }
        }
        let xw = simplex[d].0.clone();
        let xr = combine(&centroid, &xw, -alpha);
        let fr = match tracker.eval(&xr) {
            Some(f) => f,
            None => break,
        };
        if fr < best {
            let xe = combine(&centroid, &xw, -gamma);
            let fe = match tracker.eval(&xe) {
                Some(f) => f,
                None => break,
            };
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
            continue;
        }
        let (xc, fc_limit) = if fr < worst {
            (combine(&centroid, &xr, rho), fr)
        } else {
            (combine(&centroid, &xw, rho), worst)
        };
        let fc = match tracker.eval(&xc) {
            Some(f) => f,
            None => break,
        };
        if fc <= fc_limit && fc < worst {
            simplex[d] = (xc, fc);
            continue;
        }
        let x_best = simplex[0].0.clone();
        let mut stopped = false;
        for v in simplex.iter_mut().skip(1) {
            let x = combine(&x_best, &v.0, sigma);
            match tracker.eval(&x) {
                Some(f) => *v = (x, f),
                None => {
                    stopped = true;
                    break;
                }
            }
        }
        if stopped {
            break;
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    Some(Outcome { f: simplex[0].1 })
}
