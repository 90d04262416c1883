//! Laurent and Maclaurin coefficients obtained by sampling on a circle.

use std::f64::consts::PI;

use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::C64;

/// Finite slice of a Laurent series `Σ c_j z^j`.
///
/// `coeffs[k]` holds `c_{offset + k}`. `residual` bounds what was dropped:
/// the aliasing estimate of the sampling that produced the series, raised
/// by any later truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSeries {
    offset: i64,
    coeffs: Vec<C64>,
    residual: f64,
}

impl ComplexSeries {
    pub fn new(offset: i64, coeffs: Vec<C64>) -> Self {
        Self {
            offset,
            coeffs,
            residual: 0.0,
        }
    }

    /// Maclaurin series `a_0 + a_1 z + ...`.
    pub fn maclaurin(coeffs: Vec<C64>) -> Self {
        Self::new(0, coeffs)
    }

    pub fn with_residual(mut self, residual: f64) -> Self {
        self.residual = residual;
        self
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Index of the last stored coefficient.
    pub fn max_index(&self) -> i64 {
        self.offset + self.coeffs.len() as i64 - 1
    }

    /// Coefficient of `z^j`, zero outside the stored range.
    pub fn get(&self, j: i64) -> C64 {
        let k = j - self.offset;
        if k < 0 || k as usize >= self.coeffs.len() {
            C64::default()
        } else {
            self.coeffs[k as usize]
        }
    }

    /// `c_0, ..., c_degree`, zero-padded.
    pub fn nonnegative(&self, degree: usize) -> Vec<C64> {
        (0..=degree as i64).map(|j| self.get(j)).collect()
    }

    /// Keeps indices `0..=degree`. Dropped positive-index mass is added to
    /// the residual as `Σ |c_j|`, a bound on the unit circle.
    pub fn truncated(&self, degree: usize) -> Self {
        let dropped: f64 = (degree as i64 + 1..=self.max_index())
            .map(|j| self.get(j).norm())
            .sum();
        Self {
            offset: 0,
            coeffs: self.nonnegative(degree),
            residual: self.residual + dropped,
        }
    }

    /// Evaluates the stored terms at `z`.
    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::default();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(self.offset as i32)
    }
}

/// Laurent coefficients of `f` from `n` equispaced samples on `|z| = rho`.
///
/// The discrete Fourier transform gives `c_j ρ^j`; indices above `n/2` are
/// folded to `j - n`. The returned residual is the largest scaled
/// coefficient within two positions of the fold, which estimates the
/// aliasing level of the sampling.
pub fn series_from_circle_samples<F>(f: F, rho: f64, n: usize) -> Result<ComplexSeries>
where
    F: Fn(C64) -> C64,
{
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "sample count must be a power of two >= 2, got {n}"
        )));
    }
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "radius must be positive, got {rho}"
        )));
    }
    let mut buf = Vec::with_capacity(n);
    for k in 0..n {
        let z = C64::from_polar(rho, 2.0 * PI * k as f64 / n as f64);
        let v = f(z);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFiniteSample { re: z.re, im: z.im });
        }
        buf.push(v);
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let half = (n / 2) as i64;
    let lowest = -(half - 1);
    let mut coeffs = Vec::with_capacity(n);
    let mut fold = 0.0_f64;
    for j in lowest..=half {
        let k = j.rem_euclid(n as i64) as usize;
        let scaled = buf[k] / n as f64;
        if (half - j).abs() <= 2 || (j - lowest).abs() <= 1 {
            fold = fold.max(scaled.norm());
        }
        coeffs.push(scaled / rho.powi(j as i32));
    }
    Ok(ComplexSeries::new(lowest, coeffs).with_residual(fold))
}
