use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::linalg::BandLu;
use crate::spatial::assemble::SystemMatrices;

/// Margin applied to the estimate before it enters step-size selection.
pub const SAFETY_FACTOR: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEstimate {
    /// Rayleigh quotient of the last iterate, a lower bound for `sr(M)`.
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl SpectralEstimate {
    /// `value * SAFETY_FACTOR`.
    pub fn for_step_selection(&self) -> f64 {
        self.value * SAFETY_FACTOR
    }
}

/// Power iteration on `B⁻¹ A`, whose eigenvalues have the magnitudes of
/// those of `M = (iB)⁻¹ A`.
pub fn spectral_radius_estimate(
    sys: &SystemMatrices,
    tol: f64,
    max_iters: usize,
) -> Result<SpectralEstimate> {
    let n = sys.n_dof();
    let lu = BandLu::factor(&sys.b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(&mut x, sys);

    let mut previous = f64::NAN;
    let mut value = 0.0;
    for it in 1..=max_iters.max(1) {
        let ax = sys.a.mul_vec(&x);
        let xax: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
        value = xax.abs();
        if (value - previous).abs() <= tol * value {
            return Ok(SpectralEstimate {
                value,
                converged: true,
                iterations: it,
            });
        }
        previous = value;
        x = lu.solve(&ax)?;
        normalize(&mut x, sys);
    }
    Ok(SpectralEstimate {
        value,
        converged: false,
        iterations: max_iters,
    })
}

// scales x to unit B-norm so that xᵀ A x is the Rayleigh quotient
fn normalize(x: &mut [f64], sys: &SystemMatrices) {
    let bx = sys.b.mul_vec(x);
    let norm: f64 = x.iter().zip(&bx).map(|(a, b)| a * b).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}
