use std::f64::consts::PI;
use std::time::Instant;

use crate::approx::pfd::SUP_ERROR_SAMPLES;
use crate::error::{Error, Result};
use crate::integrate::rexi::{Admissibility, PhaseTimings};
use crate::linalg::{BandLu, BandMatrix};
use crate::spatial::SystemMatrices;
use crate::C64;

/// `p(z) = Σ a_k T_k(-iz/R)`, interpolating `exp` at the Chebyshev points
/// of `i[-R, R]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevSeries {
    coeffs: Vec<C64>,
    r: f64,
    sup_error: f64,
}

pub fn chebyshev_coeffs(r: f64, degree: usize) -> Result<ChebyshevSeries> {
    if degree == 0 {
        return Err(Error::InvalidArgument(
            "Chebyshev degree must be >= 1".into(),
        ));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "interval half-length must be > 0, got {r}"
        )));
    }
    let m = degree + 1;
    let theta: Vec<f64> = (0..m).map(|k| PI * (k as f64 + 0.5) / m as f64).collect();
    let samples: Vec<C64> = theta
        .iter()
        .map(|t| C64::new(0.0, r * t.cos()).exp())
        .collect();
    let coeffs = (0..=degree)
        .map(|j| {
            let s: C64 = samples
                .iter()
                .zip(&theta)
                .map(|(f, t)| f * (j as f64 * t).cos())
                .sum();
            let scale = if j == 0 { 1.0 } else { 2.0 } / m as f64;
            s * scale
        })
        .collect();
    let mut series = ChebyshevSeries {
        coeffs,
        r,
        sup_error: 0.0,
    };
    let n = SUP_ERROR_SAMPLES;
    series.sup_error = (0..n)
        .map(|k| {
            let x = -r + 2.0 * r * k as f64 / (n - 1) as f64;
            let z = C64::new(0.0, x);
            (series.eval(z) - z.exp()).norm()
        })
        .fold(0.0, f64::max);
    Ok(series)
}

impl ChebyshevSeries {
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn sup_error(&self) -> f64 {
        self.sup_error
    }

    /// Clenshaw evaluation at `z`.
    pub fn eval(&self, z: C64) -> C64 {
        let t = C64::new(0.0, -1.0) * z / self.r;
        let (mut b1, mut b2) = (C64::default(), C64::default());
        for &a in self.coeffs[1..].iter().rev() {
            let b0 = a + 2.0 * t * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] + t * b1 - b2
    }
}

/// Chebyshev propagator: `p(τM) u` by the Clenshaw recurrence, where each
/// application of `-iτM/R = -(τ/R) B⁻¹ A` costs one multiply and one solve.
pub struct ChebyshevStepper {
    series: ChebyshevSeries,
    tau: f64,
    a: BandMatrix<f64>,
    b_lu: BandLu<f64>,
    admissibility: Admissibility,
}

impl ChebyshevStepper {
    pub fn prepare(
        sys: &SystemMatrices,
        series: &ChebyshevSeries,
        tau: f64,
        sr_estimate: f64,
    ) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "time step must be > 0, got {tau}"
            )));
        }
        Ok(Self {
            series: series.clone(),
            tau,
            a: sys.a.clone(),
            b_lu: BandLu::factor(&sys.b)?,
            admissibility: Admissibility::new(tau, sr_estimate, series.r()),
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn series(&self) -> &ChebyshevSeries {
        &self.series
    }

    pub fn admissibility(&self) -> Admissibility {
        self.admissibility
    }

    // X v = -(τ/R) B⁻¹ A v; the multiply counts as rhs time, the solve as local
    fn apply(&self, v: &[C64], t: &mut PhaseTimings) -> Result<Vec<C64>> {
        let start = Instant::now();
        let scale = -self.tau / self.series.r();
        let mut w: Vec<C64> = self.a.mul_vec(v).into_iter().map(|x| x * scale).collect();
        t.rhs += start.elapsed();
        let start = Instant::now();
        self.b_lu.solve_in_place(&mut w)?;
        t.local += start.elapsed();
        Ok(w)
    }

    pub fn step_timed(&self, u: &[C64]) -> Result<(Vec<C64>, PhaseTimings)> {
        if u.len() != self.a.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.a.dim(),
                found: u.len(),
            });
        }
        let mut t = PhaseTimings::default();
        let n = u.len();
        let coeffs = self.series.coeffs();
        let mut b1 = vec![C64::default(); n];
        let mut b2 = vec![C64::default(); n];
        for &a in coeffs[1..].iter().rev() {
            let xb = self.apply(&b1, &mut t)?;
            let start = Instant::now();
            for i in 0..n {
                let b0 = a * u[i] + 2.0 * xb[i] - b2[i];
                b2[i] = b1[i];
                b1[i] = b0;
            }
            t.reduce += start.elapsed();
        }
        let xb = self.apply(&b1, &mut t)?;
        let start = Instant::now();
        let out = (0..n).map(|i| coeffs[0] * u[i] + xb[i] - b2[i]).collect();
        t.reduce += start.elapsed();
        Ok((out, t))
    }

    pub fn step(&self, u: &[C64]) -> Result<Vec<C64>> {
        self.step_timed(u).map(|(v, _)| v)
    }

    pub fn run(&self, u0: &[C64], n_steps: usize) -> Result<(Vec<C64>, PhaseTimings)> {
        let mut u = u0.to_vec();
        let mut timings = PhaseTimings::default();
        for _ in 0..n_steps {
            let (next, t) = self.step_timed(&u)?;
            timings.accumulate(&t);
            u = next;
        }
        Ok((u, timings))
    }
}
