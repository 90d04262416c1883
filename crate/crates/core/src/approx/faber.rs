//! Faber-CF approximation of `exp` on the imaginary interval `i[-R1, R1]`.

use nalgebra::{DMatrix, DVector};

use crate::approx::cf::{cf_approximate, CIRCLE_SAMPLES};
use crate::approx::pfd::{PartialFractionApproximation, SUP_ERROR_SAMPLES};
use crate::approx::series::{series_from_circle_samples, ComplexSeries};
use crate::error::{Error, Result};
use crate::C64;

/// Faber coefficients kept for the exp target.
pub const DEFAULT_TRUNCATION: usize = 25;
/// Denominator degree of the default approximation.
pub const DEFAULT_DEGREE: usize = 16;
/// Radius of the sampling contour for all Faber integrals.
pub const DEFAULT_CONTOUR_RHO: f64 = 1.0 + 1e-4;
/// Largest accepted condition estimate of the weight system.
pub const CONDITION_THRESHOLD: f64 = 1e12;
/// Smallest accepted distance, relative to `R1`, between a shift and the
/// approximation interval.
pub const SHIFT_CLEARANCE: f64 = 1e-10;
/// Upper limit on the samples spent on one pole transform.
pub const MAX_POLE_SAMPLES: usize = 1 << 20;

/// `η(z) = (R1/2)(z - 1/z)`, mapping the unit circle onto `i[-R1, R1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JoukowskiMap {
    r1: f64,
}

impl JoukowskiMap {
    pub fn new(r1: f64) -> Result<Self> {
        if !(r1 > 0.0) || !r1.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "R1 must be positive, got {r1}"
            )));
        }
        Ok(Self { r1 })
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        if z == C64::default() {
            return Err(Error::InvalidArgument(
                "the map is undefined at z = 0".into(),
            ));
        }
        Ok(self.apply(z))
    }

    pub fn derivative(&self, z: C64) -> Result<C64> {
        if z == C64::default() {
            return Err(Error::InvalidArgument(
                "the map is undefined at z = 0".into(),
            ));
        }
        Ok(0.5 * self.r1 * (1.0 + 1.0 / (z * z)))
    }

    fn apply(&self, z: C64) -> C64 {
        0.5 * self.r1 * (z - 1.0 / z)
    }
}

/// Faber coefficients `a_0 .. a_L` of `g` with respect to `map`, by the
/// trapezoidal rule on `|z| = rho` with `samples` points.
pub fn faber_coefficients<G>(
    map: &JoukowskiMap,
    g: G,
    truncation: usize,
    rho: f64,
    samples: usize,
) -> Result<ComplexSeries>
where
    G: Fn(C64) -> C64,
{
    if !(rho > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "contour radius must exceed 1, got {rho}"
        )));
    }
    if truncation + 1 > samples / 2 {
        return Err(Error::InvalidArgument(format!(
            "truncation {truncation} needs more than {samples} samples"
        )));
    }
    let series =
        series_from_circle_samples(|z| g(map.apply(z)), rho, samples).map_err(|e| match e {
            Error::NonFiniteSample { re, im } => Error::ContourSingularity { re, im, rho },
            other => other,
        })?;
    Ok(series.truncated(truncation))
}

/// Parameters of [`faber_cf`].
#[derive(Debug, Clone, Copy)]
pub struct FaberCfOptions {
    pub truncation: usize,
    pub degree: usize,
    pub contour_rho: f64,
    pub samples: usize,
}

impl Default for FaberCfOptions {
    fn default() -> Self {
        Self {
            truncation: DEFAULT_TRUNCATION,
            degree: DEFAULT_DEGREE,
            contour_rho: DEFAULT_CONTOUR_RHO,
            samples: CIRCLE_SAMPLES,
        }
    }
}

/// Faber-CF approximation of `exp` on `i[-R1, R1]` in partial fraction form.
pub fn faber_cf(map: &JoukowskiMap, opts: &FaberCfOptions) -> Result<PartialFractionApproximation> {
    if opts.degree == 0 {
        return Err(Error::InvalidArgument("degree must be >= 1".into()));
    }
    let rho = opts.contour_rho;
    let a = faber_coefficients(map, |w| w.exp(), opts.truncation, rho, opts.samples)?;
    let cf = cf_approximate(&a, opts.degree)?;
    let poles = cf.poles_outside();
    let k = poles.len();

    let nearest = poles.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if nearest <= rho {
        return Err(Error::ContourSingularity {
            re: nearest,
            im: 0.0,
            rho,
        });
    }
    let shifts: Vec<C64> = poles.iter().map(|&z| map.apply(z)).collect();
    check_shifts(&shifts, map.r1())?;

    let mut system = DMatrix::<C64>::zeros(k, k);
    for (col, (&s, z)) in shifts.iter().zip(poles).enumerate() {
        let samples = pole_samples(z.norm() / rho, opts.samples);
        let b = faber_coefficients(map, |w| 1.0 / (w - s), k - 1, rho, samples)?;
        for row in 0..k {
            system[(row, col)] = b.get(row as i64);
        }
    }
    let c = DVector::from_vec(cf.maclaurin(k, opts.samples)?);

    let sv = system.singular_values();
    let (smax, smin) = sv.iter().fold((0.0_f64, f64::INFINITY), |(hi, lo), &s| {
        (hi.max(s), lo.min(s))
    });
    let condition = if smin > 0.0 {
        smax / smin
    } else {
        f64::INFINITY
    };
    if condition > CONDITION_THRESHOLD {
        return Err(Error::IllConditioned {
            condition,
            threshold: CONDITION_THRESHOLD,
        });
    }
    let weights = system
        .full_piv_lu()
        .solve(&c)
        .ok_or(Error::IllConditioned {
            condition: f64::INFINITY,
            threshold: CONDITION_THRESHOLD,
        })?;

    PartialFractionApproximation::new(shifts, weights.iter().copied().collect(), map.r1())
        .and_then(|p| p.with_measured_error(SUP_ERROR_SAMPLES))
}

/// Sample count for the Faber transform of a pole at relative distance
/// `ratio = |z_k| / ρ`: aliased terms shrink like `ratio^-N`, so `N` grows
/// until that factor is below `1e-17`.
fn pole_samples(ratio: f64, base: usize) -> usize {
    let needed = (17.0 * std::f64::consts::LN_10 / ratio.ln()).ceil();
    if needed.is_finite() && needed > base as f64 {
        (needed as usize).next_power_of_two().min(MAX_POLE_SAMPLES)
    } else {
        base
    }
}

fn check_shifts(shifts: &[C64], r1: f64) -> Result<()> {
    for (j, s) in shifts.iter().enumerate() {
        let dy = (s.im.abs() - r1).max(0.0);
        let dist = s.re.abs().hypot(dy);
        if dist <= SHIFT_CLEARANCE * r1 {
            return Err(Error::ShiftOnInterval {
                index: j,
                re: s.re,
                im: s.im,
            });
        }
    }
    Ok(())
}
