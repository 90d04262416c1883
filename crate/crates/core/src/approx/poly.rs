//! Dense complex polynomials in ascending coefficient order.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::C64;

pub fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs
        .iter()
        .rev()
        .fold(C64::default(), |acc, &c| acc * z + c)
}

fn horner_with_derivative(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::default();
    let mut dp = C64::default();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Monic polynomial with the given roots, ascending order.
pub fn from_roots(roots: &[C64]) -> Vec<C64> {
    let mut c = vec![C64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![C64::default(); c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k + 1] += ck;
            next[k] -= r * ck;
        }
        c = next;
    }
    c
}

/// Roots of `Σ coeffs[k] z^k` as eigenvalues of the companion matrix.
///
/// Leading coefficients that vanish relative to the largest one are
/// dropped first; each root gets two Newton corrections against the
/// original polynomial.
pub fn roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.norm()));
    if scale == 0.0 {
        return Err(Error::InvalidArgument(
            "zero polynomial has no roots".into(),
        ));
    }
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].norm() <= f64::EPSILON * 1e-3 * scale {
        deg -= 1;
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    let mut companion = DMatrix::<C64>::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -coeffs[i] / lead;
    }
    let schur = companion
        .try_schur(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Eigen("companion matrix Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    let active = &coeffs[..=deg];
    let out = (0..deg)
        .map(|i| {
            let mut z = t[(i, i)];
            for _ in 0..2 {
                let (p, dp) = horner_with_derivative(active, z);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                let cand = z - step;
                if cand.re.is_finite()
                    && cand.im.is_finite()
                    && horner(active, cand).norm() <= p.norm()
                {
                    z = cand;
                } else {
                    break;
                }
            }
            z
        })
        .collect();
    Ok(out)
}
