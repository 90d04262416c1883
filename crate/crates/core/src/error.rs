use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite sample at z = {re} + {im}i")]
    NonFiniteSample { re: f64, im: f64 },

    #[error("target is effectively rational of lower degree (sigma = {sigma:e})")]
    DegenerateTarget { sigma: f64 },

    #[error("no root of the denominator lies outside the unit disc")]
    NoOuterRoots,

    #[error("{found} denominator roots outside the unit disc exceed n = {n}")]
    PoleCount { found: usize, n: usize },

    #[error("integrand not finite at z = {re} + {im}i on the contour |z| = {rho}; choose a different contour radius")]
    ContourSingularity { re: f64, im: f64, rho: f64 },

    #[error("ill-conditioned weight system (condition estimate {condition:e} > {threshold:e})")]
    IllConditioned { condition: f64, threshold: f64 },

    #[error("shift {index} at {re} + {im}i is too close to the approximation interval")]
    ShiftOnInterval { index: usize, re: f64, im: f64 },

    #[error("evaluation point coincides with pole {index}")]
    Pole { index: usize },

    #[error("singular matrix at pivot {pivot}")]
    Singular { pivot: usize },

    #[error("shifted system {index} is singular")]
    SingularShift { index: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("wave packet not contained in the domain: |psi| at x = {x} is {ratio:e} of the peak")]
    SupportViolation { x: f64, ratio: f64 },

    #[error("point x = {x} lies outside the mesh [{x0}, {x1}]")]
    OutOfDomain { x: f64, x0: f64, x1: f64 },

    #[error("step size {dt} violates the admissibility bound (max {max_dt})")]
    Inadmissible { dt: f64, max_dt: f64 },

    #[error("system too large for the dense oracle: n = {n} > {max}")]
    TooLarge { n: usize, max: usize },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("serialization: {0}")]
    Serialization(String),
}
