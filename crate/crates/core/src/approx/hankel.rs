//! Hankel matrices of Maclaurin coefficients and their singular triples.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};

use crate::error::{Error, Result};
use crate::C64;

/// `H[i][j] = a_{m-n+i+j-1}` (1-based), square of order `L + n - m`.
///
/// Subscripts below zero or above `L` read as zero. Only the diagonal
/// case `n = m + 1` is supported, where the first entry is `a_0`.
pub fn hankel_matrix(a: &[C64], m: usize, n: usize) -> Result<DMatrix<C64>> {
    if a.is_empty() {
        return Err(Error::InvalidArgument("empty coefficient list".into()));
    }
    if n != m + 1 {
        return Err(Error::InvalidArgument(format!(
            "only n = m + 1 is supported, got m = {m}, n = {n}"
        )));
    }
    let l = a.len() - 1;
    let dim = l + n - m;
    let shift = m as i64 - n as i64 + 1;
    Ok(DMatrix::from_fn(dim, dim, |i, j| {
        let k = shift + (i + j) as i64;
        if k < 0 || k as usize > l {
            C64::default()
        } else {
            a[k as usize]
        }
    }))
}

/// Singular value with its left and right singular vectors, `H v = σ u`.
#[derive(Debug, Clone)]
pub struct SingularTriple {
    pub sigma: f64,
    pub u: DVector<C64>,
    pub v: DVector<C64>,
}

/// All singular values, descending.
pub fn singular_values(h: &DMatrix<C64>) -> Vec<f64> {
    if let Some(real) = as_real(h) {
        let mut s: Vec<f64> = SymmetricEigen::new(real)
            .eigenvalues
            .iter()
            .map(|l| l.abs())
            .collect();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        s
    } else {
        let mut s: Vec<f64> = h.singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        s
    }
}

/// The `index`-th (0-based) singular triple of a square Hankel matrix.
///
/// Real Hankel matrices are symmetric, so the triple comes from the
/// symmetric eigendecomposition `H = Q Λ Qᵀ` with `v = q`,
/// `u = sign(λ) q`. This keeps `u` and `v` tied to the same vector even
/// when σ sits in a cluster of round-off level values, which a general
/// SVD does not guarantee. Complex data falls back to the SVD.
pub fn singular_triple(h: &DMatrix<C64>, index: usize) -> Result<SingularTriple> {
    let dim = h.nrows();
    if index >= dim {
        return Err(Error::InvalidArgument(format!(
            "singular value {} requested from a {dim}x{dim} matrix",
            index + 1
        )));
    }
    if let Some(real) = as_real(h) {
        let eig = SymmetricEigen::new(real);
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[b]
                .abs()
                .partial_cmp(&eig.eigenvalues[a].abs())
                .unwrap()
        });
        let k = order[index];
        let lambda = eig.eigenvalues[k];
        let q = eig.eigenvectors.column(k);
        let sign = if lambda < 0.0 { -1.0 } else { 1.0 };
        Ok(SingularTriple {
            sigma: lambda.abs(),
            u: q.map(|x| C64::new(sign * x, 0.0)),
            v: q.map(|x| C64::new(x, 0.0)),
        })
    } else {
        let svd = SVD::try_new(h.clone(), true, true, f64::EPSILON, 10_000)
            .ok_or_else(|| Error::Eigen("Hankel SVD did not converge".into()))?;
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| {
            svd.singular_values[b]
                .partial_cmp(&svd.singular_values[a])
                .unwrap()
        });
        let k = order[index];
        let u = svd.u.as_ref().expect("requested U").column(k).into_owned();
        let v = svd
            .v_t
            .as_ref()
            .expect("requested V^H")
            .row(k)
            .transpose()
            .map(|x| x.conj());
        Ok(SingularTriple {
            sigma: svd.singular_values[k],
            u,
            v,
        })
    }
}

fn as_real(h: &DMatrix<C64>) -> Option<DMatrix<f64>> {
    if h.iter().all(|c| c.im == 0.0) {
        Some(h.map(|c| c.re))
    } else {
        None
    }
}
