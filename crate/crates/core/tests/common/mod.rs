//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spf_core::Spf64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random SPF with `poles` distinct poles of multiplicity 1..=max_mult.
pub fn random_spf(rng: &mut ChaCha8Rng, poles: usize, max_mult: u32) -> Spf64 {
    loop {
        let list: Vec<(Complex<f64>, u32)> = (0..poles)
            .map(|_| {
                let re = rng.gen_range(-5.0..5.0);
                let im = rng.gen_range(0.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                (Complex::new(re, im), rng.gen_range(1..=max_mult))
            })
            .collect();
        if let Ok(spf) = Spf64::new(list) {
            return spf;
        }
    }
}

/// A random SPF of order at most `max_order`.
pub fn random_spf_of_order(rng: &mut ChaCha8Rng, max_order: u32) -> Spf64 {
    let target = rng.gen_range(1..=max_order);
    let mut list = Vec::new();
    let mut total = 0;
    while total < target {
        let m = rng.gen_range(1..=3.min(target - total));
        let re = rng.gen_range(-5.0..5.0);
        let im = rng.gen_range(0.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        list.push((Complex::new(re, im), m));
        total += m;
    }
    Spf64::new(list).expect("random coordinates are distinct")
}

/// `ρ^{(m)}(x)` summed term by term in the most direct way.
pub fn direct_derivative(spf: &Spf64, x: f64, m: u32) -> Complex<f64> {
    let fact: f64 = (1..=m).map(|k| k as f64).product();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    spf.poles()
        .iter()
        .map(|p| {
            let d = Complex::new(x, 0.0) - p.location;
            Complex::new(sign * fact * p.multiplicity as f64, 0.0) / d.powu(m + 1)
        })
        .sum()
}

/// `∫_ℝ |ρ|²` by residues: the pair `(j, k)` contributes
/// `n_j n_k ∫ dx / ((x − ξ_j)(x − conj ξ_k))`, which is `2πi/(ξ_j − conj ξ_k)`
/// when `ξ_j` is above and `conj ξ_k` below the axis, the negative of that in
/// the mirrored case, and zero otherwise.
pub fn l2_norm_squared_by_residues(spf: &Spf64) -> f64 {
    let two_pi_i = Complex::new(0.0, 2.0 * std::f64::consts::PI);
    let mut total = Complex::new(0.0, 0.0);
    for a in spf.poles() {
        for b in spf.poles() {
            let c = b.location.conj();
            let w = (a.multiplicity * b.multiplicity) as f64;
            let up_a = a.location.im > 0.0;
            let up_c = c.im > 0.0;
            if up_a && !up_c {
                total += w * two_pi_i / (a.location - c);
            } else if !up_a && up_c {
                total -= w * two_pi_i / (a.location - c);
            }
        }
    }
    total.re
}

/// Largest `|ρ^{(m)}|` by a uniform grid scan covering every pole shadow,
/// with each grid-local maximum refined by golden-section search.
pub fn grid_sup(spf: &Spf64, m: u32, points: usize) -> f64 {
    let tallest = spf
        .poles()
        .iter()
        .map(|p| p.location.im.abs())
        .fold(0.0, f64::max);
    let reach = spf.max_abs_real() + 20.0 * tallest;
    let h = 2.0 * reach / points as f64;
    let f = |x: f64| direct_derivative(spf, x, m).norm();
    let xs: Vec<f64> = (0..=points).map(|i| -reach + i as f64 * h).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut best = vals.iter().cloned().fold(0.0, f64::max);
    for i in 1..points {
        if vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] {
            let (mut a, mut b) = (xs[i - 1], xs[i + 1]);
            let g = (5f64.sqrt() - 1.0) / 2.0;
            for _ in 0..80 {
                let c = b - g * (b - a);
                let d = a + g * (b - a);
                if f(c) > f(d) {
                    b = d;
                } else {
                    a = c;
                }
            }
            best = best.max(f(0.5 * (a + b)));
        }
    }
    best
}
