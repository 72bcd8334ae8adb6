//! Simple partial fractions (logarithmic derivatives of polynomials) on the
//! real line.
//!
//! The numerical core is generic over the scalar type ([`Scalar`], i.e. `f32`
//! or `f64`); the `*64` aliases below are what the command-line tool and the
//! optimizer use.

pub mod blaschke;
pub mod bounds;
mod certify;
pub mod error;
pub mod io;
pub mod norms;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod search;
pub mod spf;
pub mod symmetrize;

pub use blaschke::{RootSet, SymmetricConfiguration};
pub use bounds::{
    delta_of_theta, historical_bounds, lemma1_check, lemma2_minorant, lemma3_check,
    lemma3_check_with, tanh_series, theorem1_check, theorem1_minorant, theorem2_check,
    theta_of_mu2, HistoricalBound, Lemma3Normalization,
};
pub use error::{Error, Result};
pub use norms::{
    beta_p_check, functional_with, gelfond_functional, gorin_functional, lp_norm_real,
    sup_norm_real, FunctionalKind, FunctionalValue, NormOptions, NormResult,
};
pub use report::BoundReport;
pub use scalar::{conjugate_exponent, Scalar};
pub use search::{
    certificate, optimize, optimize_from, scan_orders, Certificate, Pattern, ScanEntry, ScanRow,
    SearchConfig, SearchRecord,
};
pub use spf::{ComplexPoint, Pole, Spf};
pub use symmetrize::{run_pipeline, PipelineOutput};

pub type Spf64 = Spf<f64>;
pub type Spf32 = Spf<f32>;
pub type Pole64 = Pole<f64>;
pub type NormResult64 = NormResult<f64>;
pub type FunctionalValue64 = FunctionalValue<f64>;
pub type SymmetricConfiguration64 = SymmetricConfiguration<f64>;
pub type PipelineOutput64 = PipelineOutput<f64>;
