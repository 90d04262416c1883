use nalgebra::{Cholesky, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::spatial::SystemMatrices;
use crate::C64;

/// Largest system the dense oracle accepts by default.
pub const DEFAULT_MAX_N: usize = 512;

/// Relative reconstruction residual above which the decomposition is refused.
pub const RESIDUAL_LIMIT: f64 = 1e-8;

/// `M = (iB)⁻¹ A = X diag(ω) X⁻¹`.
///
/// With `B = L Lᵀ` and `L⁻¹ A L⁻ᵀ = Q Λ Qᵀ`, the eigenvectors are
/// `X = L⁻ᵀ Q` (real, B-orthonormal), `X⁻¹ = Xᵀ B` and `ω = -iλ`.
#[derive(Debug, Clone)]
pub struct OracleDecomposition {
    x: DMatrix<f64>,
    x_inv: DMatrix<f64>,
    lambdas: Vec<f64>,
    cond_inf: f64,
    residual: f64,
}

impl OracleDecomposition {
    pub fn new(sys: &SystemMatrices, max_n: usize) -> Result<Self> {
        let n = sys.n_dof();
        if n > max_n {
            return Err(Error::TooLarge { n, max: max_n });
        }
        let a = sys.a.to_dense();
        let b = sys.b.to_dense();
        let chol = Cholesky::new(b.clone())
            .ok_or_else(|| Error::Eigen("mass matrix is not positive definite".into()))?;
        let l = chol.l();
        let l_inv = l
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Eigen("Cholesky factor is singular".into()))?;
        let mut c = &l_inv * &a * l_inv.transpose();
        c = (&c + c.transpose()) * 0.5;
        let eig = SymmetricEigen::new(c);
        let x = l_inv.transpose() * &eig.eigenvectors;
        let x_inv = x.transpose() * &b;
        let lambdas: Vec<f64> = eig.eigenvalues.iter().copied().collect();

        let lam = DMatrix::from_diagonal(&eig.eigenvalues);
        let res = (&a * &x - &b * &x * &lam).norm();
        let scale = a.norm() * x.norm() + b.norm() * x.norm() * lam.norm();
        let residual = if scale > 0.0 { res / scale } else { 0.0 };
        if !(residual <= RESIDUAL_LIMIT) {
            return Err(Error::Eigen(format!(
                "reconstruction residual {residual:e} exceeds {RESIDUAL_LIMIT:e}"
            )));
        }
        let cond_inf = norm_inf(&x) * norm_inf(&x_inv);
        Ok(Self {
            x,
            x_inv,
            lambdas,
            cond_inf,
            residual,
        })
    }

    /// Eigenvalues `ω_j = -iλ_j` of `M`.
    pub fn omegas(&self) -> Vec<C64> {
        self.lambdas.iter().map(|&l| C64::new(0.0, -l)).collect()
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.x
    }

    /// `‖X‖∞ ‖X⁻¹‖∞`.
    pub fn cond_inf(&self) -> f64 {
        self.cond_inf
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// `max |ω_j|`.
    pub fn spectral_radius(&self) -> f64 {
        self.lambdas.iter().fold(0.0, |m, l| m.max(l.abs()))
    }

    /// `X diag(f(τω)) X⁻¹ u`.
    pub fn apply_fn<F>(&self, tau: f64, u: &[C64], f: F) -> Result<Vec<C64>>
    where
        F: Fn(C64) -> C64,
    {
        let n = self.x.nrows();
        if u.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: u.len(),
            });
        }
        let mut y: Vec<C64> = (0..n)
            .map(|i| (0..n).map(|k| u[k] * self.x_inv[(i, k)]).sum())
            .collect();
        for (yi, &l) in y.iter_mut().zip(&self.lambdas) {
            *yi *= f(C64::new(0.0, -tau * l));
        }
        Ok((0..n)
            .map(|i| (0..n).map(|k| y[k] * self.x[(i, k)]).sum())
            .collect())
    }

    /// `exp(τM) u`.
    pub fn apply(&self, tau: f64, u: &[C64]) -> Result<Vec<C64>> {
        self.apply_fn(tau, u, |z| z.exp())
    }
}

/// `exp(τM) u` by dense diagonalization, with `cond∞(X)`.
pub fn dense_expm_apply(
    sys: &SystemMatrices,
    tau: f64,
    u: &[C64],
    max_n: usize,
) -> Result<(Vec<C64>, f64)> {
    let d = OracleDecomposition::new(sys, max_n)?;
    Ok((d.apply(tau, u)?, d.cond_inf()))
}

fn norm_inf(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    fn diag_system(omegas: &[f64]) -> SystemMatrices {
        let a = DMatrix::from_diagonal(&DVector::from_vec(omegas.to_vec()));
        SystemMatrices::from_dense(&a, &DMatrix::identity(omegas.len(), omegas.len())).unwrap()
    }

    #[test]
    fn zero_time_is_identity() {
        let s = diag_system(&[1.0, -2.0, 3.5]);
        let u = vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.0), C64::new(0.0, 1.0)];
        let (v, cond) = dense_expm_apply(&s, 0.0, &u, 16).unwrap();
        for (a, b) in u.iter().zip(&v) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!((cond - 1.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_phase_rotation() {
        let w = [1.0, -2.0, 3.5];
        let s = diag_system(&w);
        let u = vec![C64::new(1.0, 0.0); 3];
        let (v, _) = dense_expm_apply(&s, 0.3, &u, 16).unwrap();
        for (k, &wk) in w.iter().enumerate() {
            assert!((v[k] - C64::new(0.0, -0.3 * wk).exp()).norm() < 1e-15);
        }
    }

    #[test]
    fn size_limit() {
        let s = diag_system(&[1.0; 5]);
        assert!(matches!(
            OracleDecomposition::new(&s, 4),
            Err(Error::TooLarge { n: 5, max: 4 })
        ));
    }
}
