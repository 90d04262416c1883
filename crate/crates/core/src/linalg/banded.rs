//! Banded storage and an LU factorization with partial pivoting.
//!
//! The 1D quadratic element matrices couple each degree of freedom with at
//! most two neighbours on either side, so every operator the integrators
//! touch is banded with `kl = ku = 2`. The factorization follows the LAPACK
//! `gbtrf` scheme: row interchanges widen the upper band to `ku + kl`, and
//! multipliers of earlier columns are never permuted by later pivots.

use std::ops::{Mul, SubAssign};

use nalgebra::{ComplexField, DMatrix};

use crate::error::{Error, Result};
use crate::C64;

/// Square matrix with `kl` sub- and `ku` super-diagonals, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix<T> {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<T>,
}

impl<T> BandMatrix<T>
where
    T: ComplexField + Copy,
{
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            data: vec![T::zero(); n * (kl + ku + 1)],
        }
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), 0, 0);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Copies a dense matrix, keeping the smallest band that holds every
    /// nonzero entry.
    pub fn from_dense(a: &DMatrix<T>) -> Self {
        assert!(a.is_square(), "band matrices are square");
        let n = a.nrows();
        let (mut kl, mut ku) = (0, 0);
        for i in 0..n {
            for j in 0..n {
                if a[(i, j)] != T::zero() {
                    if i > j {
                        kl = kl.max(i - j);
                    } else {
                        ku = ku.max(j - i);
                    }
                }
            }
        }
        let mut m = Self::zeros(n, kl, ku);
        for i in 0..n {
            for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
                m.set(i, j, a[(i, j)]);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    #[inline]
    fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        i * (self.kl + self.ku + 1) + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if self.in_band(i, j) {
            self.data[self.index(i, j)]
        } else {
            T::zero()
        }
    }

    /// Panics when `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let k = self.index(i, j);
        self.data[k] = value;
    }

    pub fn add(&mut self, i: usize, j: usize, value: T) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let k = self.index(i, j);
        self.data[k] += value;
    }

    /// Nonzero column range of row `i`.
    #[inline]
    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.kl)..(i + self.ku + 1).min(self.n)
    }

    pub fn is_symmetric(&self, tol: T::RealField) -> bool {
        (0..self.n).all(|i| {
            self.row_range(i)
                .all(|j| (self.get(i, j) - self.get(j, i)).modulus() <= tol.clone())
        })
    }

    pub fn to_dense(&self) -> DMatrix<T> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// `y = self * x` for any vector scalar that can absorb a matrix entry.
    pub fn mul_vec<U>(&self, x: &[U]) -> Vec<U>
    where
        U: Copy + Default + std::ops::AddAssign + Mul<T, Output = U>,
    {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = U::default();
                for j in self.row_range(i) {
                    acc += x[j] * self.data[self.index(i, j)];
                }
                acc
            })
            .collect()
    }

    pub fn map<S, F>(&self, f: F) -> BandMatrix<S>
    where
        F: Fn(T) -> S,
    {
        BandMatrix {
            n: self.n,
            kl: self.kl,
            ku: self.ku,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Copy with at least the requested bandwidths.
    pub fn widened(&self, kl: usize, ku: usize) -> Self {
        let mut out = Self::zeros(self.n, kl.max(self.kl), ku.max(self.ku));
        for i in 0..self.n {
            for j in self.row_range(i) {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }
}

impl BandMatrix<f64> {
    /// `alpha * a + beta * b` in complex arithmetic; the result carries the
    /// union of both bands.
    pub fn combine(
        alpha: C64,
        a: &BandMatrix<f64>,
        beta: C64,
        b: &BandMatrix<f64>,
    ) -> BandMatrix<C64> {
        assert_eq!(a.n, b.n);
        let kl = a.kl.max(b.kl);
        let ku = a.ku.max(b.ku);
        let mut out = BandMatrix::<C64>::zeros(a.n, kl, ku);
        for i in 0..a.n {
            for j in a.row_range(i) {
                out.add(i, j, alpha * a.get(i, j));
            }
            for j in b.row_range(i) {
                out.add(i, j, beta * b.get(i, j));
            }
        }
        out
    }
}

/// LU factors of a band matrix with row interchanges.
#[derive(Debug, Clone)]
pub struct BandLu<T> {
    n: usize,
    kl: usize,
    // upper bandwidth of U, ku + kl
    ku: usize,
    width: usize,
    data: Vec<T>,
    pivots: Vec<usize>,
}

impl<T> BandLu<T>
where
    T: ComplexField<RealField = f64> + Copy,
{
    pub fn factor(a: &BandMatrix<T>) -> Result<Self> {
        let n = a.n;
        let kl = a.kl;
        let ku = a.ku + a.kl;
        let width = 2 * kl + a.ku + 1;
        let mut data = vec![T::zero(); n * width];
        // row i stores columns [i - kl, i + ku]
        let idx = |i: usize, j: usize| i * width + (j + kl - i);
        for i in 0..n {
            for j in a.row_range(i) {
                data[idx(i, j)] = a.get(i, j);
            }
        }
        let scale = a.data.iter().fold(0.0_f64, |m, v| m.max(v.modulus()));
        let tiny = f64::EPSILON * scale;
        let mut pivots = vec![0; n];

        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = data[idx(k, k)].modulus();
            for i in k + 1..=last {
                let v = data[idx(i, k)].modulus();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > tiny) {
                return Err(Error::Singular { pivot: k });
            }
            pivots[k] = p;
            let col_end = (k + ku).min(n - 1);
            if p != k {
                for j in k..=col_end {
                    data.swap(idx(k, j), idx(p, j));
                }
            }
            let pivot = data[idx(k, k)];
            for i in k + 1..=last {
                let l = data[idx(i, k)] / pivot;
                data[idx(i, k)] = l;
                if l == T::zero() {
                    continue;
                }
                for j in k + 1..=col_end {
                    let ukj = data[idx(k, j)];
                    data[idx(i, j)] -= l * ukj;
                }
            }
        }

        Ok(Self {
            n,
            kl,
            ku,
            width,
            data,
            pivots,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> T {
        self.data[i * self.width + (j + self.kl - i)]
    }

    /// Overwrites `b` with `A⁻¹ b`.
    pub fn solve_in_place<U>(&self, b: &mut [U]) -> Result<()>
    where
        U: Copy + SubAssign + Mul<T, Output = U> + std::ops::Div<T, Output = U>,
    {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: b.len(),
            });
        }
        let n = self.n;
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            for i in k + 1..=(k + self.kl).min(n.saturating_sub(1)) {
                b[i] -= bk * self.at(i, k);
            }
        }
        for k in (0..n).rev() {
            let mut v = b[k];
            for j in k + 1..=(k + self.ku).min(n - 1) {
                v -= b[j] * self.at(k, j);
            }
            b[k] = v / self.at(k, k);
        }
        Ok(())
    }

    pub fn solve<U>(&self, b: &[U]) -> Result<Vec<U>>
    where
        U: Copy + SubAssign + Mul<T, Output = U> + std::ops::Div<T, Output = U>,
    {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tridiag(n: usize) -> BandMatrix<f64> {
        let mut m = BandMatrix::zeros(n, 1, 1);
        for i in 0..n {
            m.set(i, i, 2.0);
            if i + 1 < n {
                m.set(i, i + 1, -1.0);
                m.set(i + 1, i, -1.0);
            }
        }
        m
    }

    #[test]
    fn matvec_matches_dense() {
        let a = tridiag(6);
        let x: Vec<f64> = (0..6).map(|i| i as f64 + 0.5).collect();
        let y = a.mul_vec(&x);
        let yd = a.to_dense() * nalgebra::DVector::from_vec(x);
        for i in 0..6 {
            assert!((y[i] - yd[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn lu_needs_pivoting() {
        // zero leading entry forces a row interchange
        let dense = DMatrix::from_row_slice(
            4,
            4,
            &[
                0.0, 1.0, 0.0, 0.0, 2.0, 1.0, 3.0, 0.0, 0.0, 4.0, 1.0, 1.0, 0.0, 0.0, 5.0, 2.0,
            ],
        );
        let a = BandMatrix::from_dense(&dense);
        let lu = BandLu::factor(&a).unwrap();
        let b = vec![1.0, 2.0, 3.0, 4.0];
        let x = lu.solve(&b).unwrap();
        let r = a.mul_vec(&x);
        for i in 0..4 {
            assert!((r[i] - b[i]).abs() < 1e-13, "{r:?}");
        }
    }

    #[test]
    fn complex_shifted_solve() {
        let a = tridiag(50);
        let b = BandMatrix::from_diagonal(&vec![1.0; 50]);
        let m = BandMatrix::combine(C64::new(0.3, 0.0), &a, C64::new(0.0, -2.0), &b);
        let lu = BandLu::factor(&m).unwrap();
        let rhs: Vec<C64> = (0..50).map(|i| C64::new(i as f64, 1.0)).collect();
        let x = lu.solve(&rhs).unwrap();
        let r = m.mul_vec(&x);
        let err = r
            .iter()
            .zip(&rhs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12);
    }

    #[test]
    fn real_factor_complex_rhs() {
        let a = tridiag(10);
        let lu = BandLu::factor(&a).unwrap();
        let rhs: Vec<C64> = (0..10).map(|i| C64::new(1.0, -(i as f64))).collect();
        let x = lu.solve(&rhs).unwrap();
        let r = a.mul_vec(&x);
        for (ri, bi) in r.iter().zip(&rhs) {
            assert!((ri - bi).norm() < 1e-12);
        }
    }

    #[test]
    fn singular_detected() {
        let a = BandMatrix::from_diagonal(&[1.0, 0.0, 2.0]);
        assert!(matches!(
            BandLu::factor(&a),
            Err(Error::Singular { pivot: 1 })
        ));
    }
}
