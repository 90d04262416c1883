//! Exponential time stepping for `i B u' = A u`.

pub mod chebyshev;
pub mod oracle;
pub mod rexi;

pub use chebyshev::{chebyshev_coeffs, ChebyshevSeries, ChebyshevStepper};
pub use oracle::{dense_expm_apply, OracleDecomposition, DEFAULT_MAX_N};
pub use rexi::{
    max_step_size, rexi_error_bound, rexi_run, Admissibility, PhaseTimings, RexiStepper, RunReport,
};
