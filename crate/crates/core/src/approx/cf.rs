//! Carathéodory-Fejér approximation on the unit disc.
//!
//! For a polynomial `h(z) = a_0 + ... + a_L z^L` and the `(n+1)`-st singular
//! triple `(σ, u, v)` of its Hankel matrix, the best approximation `r̃*` from
//! the extended class (numerator may carry poles inside the disc) satisfies
//!
//! ```text
//! h(z) - r̃*(z) = σ z^L p(z) / q(z),
//! p(z) = u_1 + u_2 z + ... + u_{L+1} z^L,
//! q(z) = v_{L+1} + v_L z + ... + v_1 z^L.
//! ```
//!
//! The CF approximation keeps the roots of `q` outside the disc as its
//! denominator `q_out` and the nonnegative Laurent coefficients of
//! `q_out r̃*` up to degree `n - 1` as its numerator.

use crate::approx::hankel::{hankel_matrix, singular_triple, singular_values};
use crate::approx::poly;
use crate::approx::series::{series_from_circle_samples, ComplexSeries};
use crate::error::{Error, Result};
use crate::C64;

/// Roots with `| |z| - 1 | <= CIRCLE_TOL` are treated as lying on the circle.
pub const CIRCLE_TOL: f64 = 1e-8;

/// Samples on the unit circle used for the Laurent and Maclaurin expansions.
pub const CIRCLE_SAMPLES: usize = 4096;

/// `σ_{n+1}` below this multiple of `ε σ_1` is treated as round-off.
const DEGENERATE_FACTOR: f64 = 16.0;

/// The error representation of the best extended-class approximation.
#[derive(Debug, Clone)]
pub struct CfBestApproximation {
    h: Vec<C64>,
    sigma: f64,
    p: Vec<C64>,
    q: Vec<C64>,
    leading_sigma: f64,
}

impl CfBestApproximation {
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Largest Hankel singular value.
    pub fn leading_sigma(&self) -> f64 {
        self.leading_sigma
    }

    pub fn degree(&self) -> usize {
        self.h.len() - 1
    }

    pub fn numerator_p(&self) -> &[C64] {
        &self.p
    }

    pub fn denominator_q(&self) -> &[C64] {
        &self.q
    }

    /// `h(z) - r̃*(z)`.
    pub fn error(&self, z: C64) -> C64 {
        let l = self.degree() as i32;
        z.powi(l) * poly::horner(&self.p, z) / poly::horner(&self.q, z) * self.sigma
    }

    /// `r̃*(z)`.
    pub fn eval(&self, z: C64) -> C64 {
        poly::horner(&self.h, z) - self.error(z)
    }

    pub fn target(&self, z: C64) -> C64 {
        poly::horner(&self.h, z)
    }
}

/// Best approximation from the extended class for the polynomial with
/// coefficients `a` and denominator degree `n` (numerator degree `n - 1`).
pub fn cf_best_approximation(a: &[C64], n: usize) -> Result<CfBestApproximation> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "denominator degree must be >= 1".into(),
        ));
    }
    if a.len() < n + 1 {
        return Err(Error::InvalidArgument(format!(
            "need at least {} coefficients for n = {n}, got {}",
            n + 1,
            a.len()
        )));
    }
    let hankel = hankel_matrix(a, n - 1, n)?;
    let triple = singular_triple(&hankel, n)?;
    let leading_sigma = singular_values(&hankel)[0];
    let l = a.len() - 1;
    let p: Vec<C64> = triple.u.iter().copied().collect();
    let q: Vec<C64> = (0..=l).map(|i| triple.v[l - i]).collect();
    Ok(CfBestApproximation {
        h: a.to_vec(),
        sigma: triple.sigma,
        p,
        q,
        leading_sigma,
    })
}

/// Rational CF approximation `(d_0 + ... + d_{n-1} z^{n-1}) / q_out(z)`.
#[derive(Debug, Clone)]
pub struct CfApproximation {
    numerator: Vec<C64>,
    poles_outside: Vec<C64>,
    denominator: Vec<C64>,
    sigma: f64,
    n: usize,
    near_circle_roots: usize,
}

impl CfApproximation {
    pub fn numerator_coeffs(&self) -> &[C64] {
        &self.numerator
    }

    pub fn poles_outside(&self) -> &[C64] {
        &self.poles_outside
    }

    /// Monic `q_out`, ascending.
    pub fn denominator_coeffs(&self) -> &[C64] {
        &self.denominator
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `(m, n)` with `m = n - 1`.
    pub fn degrees(&self) -> (usize, usize) {
        (self.n - 1, self.n)
    }

    /// Number of denominator roots found within [`CIRCLE_TOL`] of the unit
    /// circle; these are dropped, which is why `K` may fall below `n`.
    pub fn near_circle_roots(&self) -> usize {
        self.near_circle_roots
    }

    pub fn eval(&self, z: C64) -> C64 {
        poly::horner(&self.numerator, z) / poly::horner(&self.denominator, z)
    }

    /// Maclaurin coefficients `c_0 .. c_{count-1}` by sampling the unit circle.
    pub fn maclaurin(&self, count: usize, samples: usize) -> Result<Vec<C64>> {
        let s = series_from_circle_samples(|z| self.eval(z), 1.0, samples)?;
        Ok((0..count as i64).map(|j| s.get(j)).collect())
    }
}

/// Carathéodory-Fejér approximation of the truncated series `a` with
/// denominator degree `n`.
pub fn cf_approximate(a: &ComplexSeries, n: usize) -> Result<CfApproximation> {
    let l = a.max_index().max(0) as usize;
    if n == 0 || l < n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= n <= L, got n = {n}, L = {l}"
        )));
    }
    let best = cf_best_approximation(&a.nonnegative(l), n)?;
    if best.sigma <= DEGENERATE_FACTOR * f64::EPSILON * best.leading_sigma {
        return Err(Error::DegenerateTarget { sigma: best.sigma });
    }

    let roots = poly::roots(&best.q)?;
    let mut poles_outside = Vec::new();
    let mut near_circle_roots = 0;
    for z in roots {
        let r = z.norm();
        if r > 1.0 + CIRCLE_TOL {
            poles_outside.push(z);
        } else if r >= 1.0 - CIRCLE_TOL {
            near_circle_roots += 1;
        }
    }
    if poles_outside.is_empty() {
        return Err(Error::NoOuterRoots);
    }
    if poles_outside.len() > n {
        return Err(Error::PoleCount {
            found: poles_outside.len(),
            n,
        });
    }
    poles_outside.sort_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap());
    let denominator = poly::from_roots(&poles_outside);

    let product = series_from_circle_samples(
        |z| poly::horner(&denominator, z) * best.eval(z),
        1.0,
        CIRCLE_SAMPLES,
    )?;
    let numerator = (0..n as i64).map(|j| product.get(j)).collect();

    Ok(CfApproximation {
        numerator,
        poles_outside,
        denominator,
        sigma: best.sigma,
        n,
        near_circle_roots,
    })
}
