//! Carathéodory-Fejér and Faber-CF rational approximation.

pub mod cf;
pub mod faber;
pub mod hankel;
pub mod pfd;
pub mod poly;
pub mod series;

pub use cf::{cf_approximate, cf_best_approximation, CfApproximation, CfBestApproximation};
pub use faber::{faber_cf, faber_coefficients, FaberCfOptions, JoukowskiMap};
pub use hankel::{hankel_matrix, singular_triple, singular_values, SingularTriple};
pub use pfd::PartialFractionApproximation;
pub use series::{series_from_circle_samples, ComplexSeries};
