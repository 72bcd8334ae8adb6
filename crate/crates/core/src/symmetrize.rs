//! Reduction of an arbitrary SPF to a configuration symmetric about both
//! axes, with a tracked pole on the imaginary axis and the poles lifted away
//! from the real line.
//!
//! Stages, for a target pole moved to `i·y1`:
//!
//! 1. `s1(z) = ρ(z) + conj(ρ(conj z))` (real on ℝ),
//! 2. `σ0(z) = s1(z) − conj(s1(−conj z))` (also symmetric about iℝ), order `4n`,
//! 3. `σ` = upper-half part of `σ0`; `ρ̃(z) = σ(z − i y1) + conj(σ(conj z − i y1))`,
//! 4. `R(z) = ρ̃(z/4)/4`, whose upper poles form the output configuration.
//!
//! The tracked pole `i·y1` becomes `8i·y1` with residue at least `2·n1`.

use num_complex::Complex;

use crate::blaschke::SymmetricConfiguration;
use crate::error::{Error, Result};
use crate::norms::sup_norm_real;
use crate::scalar::Scalar;
use crate::spf::Spf;

/// `s1(z) = ρ(z) + conj(ρ(conj z))`: poles `ξ_k` and `conj ξ_k`.
pub fn symmetrize_real<T: Scalar>(spf: &Spf<T>) -> Spf<T> {
    Spf::merged(spf.poles().iter().flat_map(|p| {
        [
            (p.location, p.multiplicity),
            (p.location.conj(), p.multiplicity),
        ]
    }))
    .expect("reflection of a valid SPF is valid")
}

/// `σ0(z) = s1(z) − conj(s1(−conj z))`: poles `ξ_k` and `−conj ξ_k`.
pub fn antisymmetrize_imag<T: Scalar>(s1: &Spf<T>) -> Result<Spf<T>> {
    let out = Spf::merged(s1.poles().iter().flat_map(|p| {
        let z = p.location;
        [
            (z, p.multiplicity),
            (Complex::new(-z.re, z.im), p.multiplicity),
        ]
    }))
    .map_err(|_| Error::DegenerateCancellation)?;
    if out.order() == 0 {
        return Err(Error::DegenerateCancellation);
    }
    Ok(out)
}

/// Sup-norms measured along the pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageNorms<T> {
    pub input: Option<T>,
    pub sigma0: T,
    pub lifted: T,
    pub result: T,
}

/// Intermediate fractions of one pipeline run.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineStages<T> {
    /// The input after the horizontal shift that puts the target pole on iℝ.
    pub input: Option<Spf<T>>,
    pub s1: Option<Spf<T>>,
    pub sigma0: Spf<T>,
    pub sigma: Spf<T>,
    pub lifted: Spf<T>,
    pub result: Spf<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput<T> {
    pub result: SymmetricConfiguration<T>,
    /// `8i·y1`.
    pub tracked_pole: Complex<T>,
    pub tracked_residue: u32,
    /// `y1`, the height of the target pole in the input.
    pub lift: T,
    pub norms: StageNorms<T>,
    /// `‖σ0‖_∞ / ‖input‖_∞` (at most 4); absent when the input is unknown.
    pub norm_factor: Option<T>,
    pub stages: PipelineStages<T>,
}

impl<T: Scalar> PipelineOutput<T> {
    /// The height `y1` for which the output satisfies the continuity bound
    /// `|μ(x1) − μ(x2)| ≤ 3 ln(1 + r/(2 y1))` when `‖input‖_∞ ≤ 1`: the
    /// imaginary part of the tracked pole.
    pub fn continuity_height(&self) -> T {
        self.tracked_pole.im
    }

    /// `ϱ`, the upper-half part of `R`.
    pub fn upper_part(&self) -> &Spf<T> {
        self.result.upper_spf()
    }
}

/// Lifts the poles of `σ0` away from ℝ by `y1` and dilates by 4.
pub fn lift_and_scale<T: Scalar>(sigma0: &Spf<T>, y1: T) -> Result<PipelineOutput<T>> {
    if !(y1 > T::zero()) || !y1.is_finite() {
        return Err(Error::DomainError("lift height must be positive".into()));
    }
    let (sigma, _) = sigma0.split_half_planes();
    let sigma = sigma.ok_or(Error::DegenerateCancellation)?;
    let shift = Complex::new(T::zero(), y1);
    let raised = sigma.translate(shift)?;
    let lifted = Spf::merged(
        raised
            .poles()
            .iter()
            .chain(raised.conjugate().poles())
            .map(|p| (p.location, p.multiplicity)),
    )?;
    let four = T::lit(4.0);
    let upper = Spf::new(
        raised
            .poles()
            .iter()
            .map(|p| (p.location.scale(four), p.multiplicity)),
    )?;
    let result_spf = Spf::new(
        lifted
            .poles()
            .iter()
            .map(|p| (p.location.scale(four), p.multiplicity)),
    )?;
    let result = SymmetricConfiguration::from_upper(upper)?;
    let tracked_pole = Complex::new(T::zero(), (y1 + y1) * four);
    let tracked_residue = result
        .imaginary_axis_multiplicity(tracked_pole.im)
        .ok_or_else(|| Error::DegenerateInput("target pole missing from sigma0".into()))?;
    let norms = StageNorms {
        input: None,
        sigma0: sup_norm_real(sigma0, false).value,
        lifted: sup_norm_real(&lifted, false).value,
        result: sup_norm_real(&result_spf, false).value,
    };
    Ok(PipelineOutput {
        result,
        tracked_pole,
        tracked_residue,
        lift: y1,
        norms,
        norm_factor: None,
        stages: PipelineStages {
            input: None,
            s1: None,
            sigma0: sigma0.clone(),
            sigma,
            lifted,
            result: result_spf,
        },
    })
}

/// Full reduction around pole `target` (0-based index into `spf.poles()`).
///
/// The input is first shifted horizontally so the target pole is purely
/// imaginary; real-line norms and `Y` are unchanged by the shift.
pub fn run_pipeline<T: Scalar>(spf: &Spf<T>, target: usize) -> Result<PipelineOutput<T>> {
    let pole = *spf.poles().get(target).ok_or(Error::IndexOutOfRange {
        index: target,
        max: spf.len().saturating_sub(1),
    })?;
    let shift = Complex::new(-pole.location.re, T::zero());
    let centred = spf.translate(shift)?;
    let y1 = pole.location.im.abs();
    let s1 = symmetrize_real(&centred);
    let sigma0 = antisymmetrize_imag(&s1)?;
    let mut out = lift_and_scale(&sigma0, y1)?;
    let input_norm = sup_norm_real(&centred, false).value;
    out.norms.input = Some(input_norm);
    out.norm_factor = Some(out.norms.sigma0 / input_norm);
    out.stages.input = Some(centred);
    out.stages.s1 = Some(s1);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn symmetrization_fixtures() {
        assert_eq!(symmetrize_real(&f1()), f2());
        assert_eq!(
            symmetrize_real(&f2()),
            Spf::new([(c(0.0, 1.0), 2), (c(0.0, -1.0), 2)]).unwrap()
        );
        assert_eq!(
            antisymmetrize_imag(&f2()).unwrap(),
            Spf::new([(c(0.0, 1.0), 2), (c(0.0, -1.0), 2)]).unwrap()
        );
        let pair = Spf::new([(c(1.0, 1.0), 1), (c(1.0, -1.0), 1)]).unwrap();
        let out = antisymmetrize_imag(&pair).unwrap();
        assert_eq!(out.order(), 4);
        assert_eq!(
            out,
            Spf::new([
                (c(1.0, 1.0), 1),
                (c(1.0, -1.0), 1),
                (c(-1.0, 1.0), 1),
                (c(-1.0, -1.0), 1)
            ])
            .unwrap()
        );
    }

    #[test]
    fn pointwise_identities() {
        let rho = Spf::new([(c(0.3, 0.7), 2), (c(-1.1, -0.4), 1)]).unwrap();
        let s1 = symmetrize_real(&rho);
        let sigma0 = antisymmetrize_imag(&s1).unwrap();
        for z in [c(0.2, 0.1), c(-3.0, 2.0), c(1.5, -0.9)] {
            let lhs = s1.eval(z).unwrap();
            let rhs = rho.eval(z).unwrap() + rho.eval(z.conj()).unwrap().conj();
            assert!((lhs - rhs).norm() < 1e-13 * (1.0 + lhs.norm()));
            let lhs = sigma0.eval(z).unwrap();
            let rhs = s1.eval(z).unwrap() - s1.eval(-z.conj()).unwrap().conj();
            assert!((lhs - rhs).norm() < 1e-13 * (1.0 + lhs.norm()));
        }
        assert_eq!(sigma0.order(), 4 * rho.order());
    }

    #[test]
    fn pipeline_on_f1() {
        let out = run_pipeline(&f1(), 0).unwrap();
        assert_eq!(out.tracked_pole, c(0.0, 8.0));
        assert_eq!(out.tracked_residue, 2);
        assert_eq!(
            out.stages.result,
            Spf::new([(c(0.0, 8.0), 2), (c(0.0, -8.0), 2)]).unwrap()
        );
        assert_eq!(out.result.eta2(), 2);
        let nf = out.norm_factor.unwrap();
        assert!(nf <= 4.0 + 1e-9);
        assert!(out.norms.result <= 1.0 + 1e-9);
    }

    #[test]
    fn pipeline_general_pole() {
        let rho = Spf::new([(c(3.0, 2.0), 1), (c(-1.0, -1.0), 2)]).unwrap();
        let idx = rho
            .poles()
            .iter()
            .position(|p| p.location == c(3.0, 2.0))
            .unwrap();
        let out = run_pipeline(&rho, idx).unwrap();
        assert_eq!(out.tracked_pole, c(0.0, 16.0));
        assert!(out.tracked_residue >= 2);
        assert_eq!(out.result.eta2(), 2 * rho.order());
        assert!(run_pipeline(&rho, 5).is_err());
    }
}
