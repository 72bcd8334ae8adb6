//! Simple partial fractions `ρ(z) = Σ n_k / (z − ξ_k)` with positive integer
//! residues and no poles on the real axis.

use std::cmp::Ordering;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{factorial, Scalar};

/// A point of the complex plane.
pub type ComplexPoint<T> = Complex<T>;

/// One pole `ξ` together with its multiplicity (the residue of the SPF there).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole<T> {
    pub location: Complex<T>,
    pub multiplicity: u32,
}

impl<T: Scalar> Pole<T> {
    pub fn new(location: Complex<T>, multiplicity: u32) -> Self {
        Self {
            location,
            multiplicity,
        }
    }

    fn residue(&self) -> T {
        T::count(self.multiplicity as u64)
    }
}

/// Lexicographic order on `(re, im)`; coordinates are finite so this is total.
pub(crate) fn cmp_location<T: Scalar>(a: &Complex<T>, b: &Complex<T>) -> Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
}

/// A simple partial fraction.
///
/// Poles are kept sorted by `(re, im)` and each location appears once; the
/// order `n` is the sum of multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct Spf<T> {
    poles: Vec<Pole<T>>,
    order: u32,
}

impl<T: Scalar> Spf<T> {
    /// Builds an SPF from `(location, multiplicity)` pairs.
    ///
    /// Duplicate locations are rejected, never merged: merging would change
    /// the order of the fraction behind the caller's back.
    pub fn new<I>(poles: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Complex<T>, u32)>,
    {
        let mut list = Vec::new();
        for (index, (location, multiplicity)) in poles.into_iter().enumerate() {
            if !location.re.is_finite() || !location.im.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if location.im == T::zero() {
                return Err(Error::RealPole { index });
            }
            if multiplicity == 0 {
                return Err(Error::ZeroMultiplicity { index });
            }
            list.push((index, Pole::new(location, multiplicity)));
        }
        if list.is_empty() {
            return Err(Error::EmptyInput);
        }
        list.sort_by(|a, b| cmp_location(&a.1.location, &b.1.location).then(a.0.cmp(&b.0)));
        for w in list.windows(2) {
            if w[0].1.location == w[1].1.location {
                return Err(Error::DuplicatePole {
                    index: w[0].0.max(w[1].0),
                });
            }
        }
        let poles: Vec<Pole<T>> = list.into_iter().map(|(_, p)| p).collect();
        let order = poles.iter().map(|p| p.multiplicity).sum();
        Ok(Self { poles, order })
    }

    /// Builds an SPF, adding the multiplicities of coinciding locations.
    ///
    /// This is the product semantics of the underlying polynomials and is
    /// what the symmetrizations need.
    pub fn merged<I>(poles: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Complex<T>, u32)>,
    {
        let mut list: Vec<(Complex<T>, u32)> = poles.into_iter().collect();
        list.sort_by(|a, b| cmp_location(&a.0, &b.0));
        let mut out: Vec<(Complex<T>, u32)> = Vec::with_capacity(list.len());
        for (z, m) in list {
            match out.last_mut() {
                Some(last) if last.0 == z => last.1 += m,
                _ => out.push((z, m)),
            }
        }
        Self::new(out)
    }

    pub fn poles(&self) -> &[Pole<T>] {
        &self.poles
    }

    /// The order `n = Σ n_k`.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    fn check_not_pole(&self, z: Complex<T>) -> Result<()> {
        match self.poles.iter().position(|p| p.location == z) {
            Some(index) => Err(Error::EvalAtPole { index }),
            None => Ok(()),
        }
    }

    /// `ρ(z) = Σ n_k / (z − ξ_k)`.
    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.check_not_pole(z)?;
        Ok(self
            .poles
            .iter()
            .map(|p| (z - p.location).inv() * p.residue())
            .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b))
    }

    /// `ρ'(z) = −Σ n_k / (z − ξ_k)²`.
    pub fn eval_derivative(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.eval_nth_derivative(z, 1)
    }

    /// `ρ^{(k)}(z) = (−1)^k k! Σ n_k / (z − ξ_k)^{k+1}`.
    pub fn eval_nth_derivative(&self, z: Complex<T>, k: u32) -> Result<Complex<T>> {
        self.check_not_pole(z)?;
        let mut s = Complex::new(T::zero(), T::zero());
        for p in &self.poles {
            let w = (z - p.location).inv();
            s = s + w.powu(k + 1) * p.residue();
        }
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        Ok(s * (sign * factorial::<T>(k)))
    }

    /// `ρ^{(m)}, ρ^{(m+1)}, ρ^{(m+2)}` at a real point in one pass.
    ///
    /// Used by the norm engine; the caller guarantees there are no real poles.
    pub(crate) fn derivative_jet(&self, x: T, m: u32) -> [Complex<T>; 3] {
        let z = Complex::new(x, T::zero());
        let mut s = [Complex::new(T::zero(), T::zero()); 3];
        for p in &self.poles {
            let w = (z - p.location).inv();
            let mut wk = w.powu(m + 1) * p.residue();
            for slot in s.iter_mut() {
                *slot = *slot + wk;
                wk = wk * w;
            }
        }
        let mut out = [Complex::new(T::zero(), T::zero()); 3];
        for (j, slot) in out.iter_mut().enumerate() {
            let k = m + j as u32;
            let sign = if k % 2 == 0 { T::one() } else { -T::one() };
            *slot = s[j] * (sign * factorial::<T>(k));
        }
        out
    }

    /// `ρ^{(m)}(x)` at a real point without the pole check.
    pub(crate) fn real_nth(&self, x: T, m: u32) -> Complex<T> {
        let z = Complex::new(x, T::zero());
        let mut s = Complex::new(T::zero(), T::zero());
        for p in &self.poles {
            s = s + (z - p.location).inv().powu(m + 1) * p.residue();
        }
        let sign = if m % 2 == 0 { T::one() } else { -T::one() };
        s * (sign * factorial::<T>(m))
    }

    /// `Y(ρ) = min_k |Im ξ_k|`.
    pub fn min_abs_imag(&self) -> T {
        self.poles
            .iter()
            .map(|p| p.location.im.abs())
            .fold(T::infinity(), T::min)
    }

    /// Largest `|Re ξ_k|`.
    pub fn max_abs_real(&self) -> T {
        self.poles
            .iter()
            .map(|p| p.location.re.abs())
            .fold(T::zero(), T::max)
    }

    /// Distance from `z` to the nearest pole.
    pub fn min_pole_distance(&self, z: Complex<T>) -> T {
        self.poles
            .iter()
            .map(|p| (z - p.location).norm())
            .fold(T::infinity(), T::min)
    }

    /// Triangle-inequality majorant `Σ n_k / |Im ξ_k|` of the sup-norm on ℝ.
    pub fn sup_majorant(&self) -> T {
        self.poles
            .iter()
            .map(|p| p.residue() / p.location.im.abs())
            .sum()
    }

    /// `ϱ(z) = c·ρ(cz)`: poles `ξ_k / c`, same multiplicities.
    pub fn rescale(&self, c: T) -> Result<Self> {
        if !(c > T::zero()) || !c.is_finite() {
            return Err(Error::NonpositiveScale);
        }
        Self::new(
            self.poles
                .iter()
                .map(|p| (p.location.unscale(c), p.multiplicity)),
        )
    }

    /// Shifts every pole by `w`.
    pub fn translate(&self, w: Complex<T>) -> Result<Self> {
        Self::new(self.poles.iter().map(|p| (p.location + w, p.multiplicity)))
    }

    /// Splits into `(ρ⁺, ρ⁻)`, the partial sums over the upper and lower
    /// half-planes. Either side may be absent.
    pub fn split_half_planes(&self) -> (Option<Self>, Option<Self>) {
        let (upper, lower): (Vec<Pole<T>>, Vec<Pole<T>>) =
            self.poles.iter().partition(|p| p.location.im > T::zero());
        let build = |v: Vec<Pole<T>>| {
            if v.is_empty() {
                None
            } else {
                let order = v.iter().map(|p| p.multiplicity).sum();
                Some(Self { poles: v, order })
            }
        };
        (build(upper), build(lower))
    }

    /// Poles reflected across the real axis: the SPF `conj(ρ(conj z))`.
    pub fn conjugate(&self) -> Self {
        let mut poles: Vec<Pole<T>> = self
            .poles
            .iter()
            .map(|p| Pole::new(p.location.conj(), p.multiplicity))
            .collect();
        poles.sort_by(|a, b| cmp_location(&a.location, &b.location));
        Self {
            poles,
            order: self.order,
        }
    }

    /// Converts the scalar type of every coordinate.
    pub fn cast<U: Scalar>(&self) -> Result<Spf<U>> {
        Spf::new(self.poles.iter().map(|p| {
            (
                Complex::new(
                    U::lit(p.location.re.as_f64()),
                    U::lit(p.location.im.as_f64()),
                ),
                p.multiplicity,
            )
        }))
    }
}
