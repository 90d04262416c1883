//! Small linear algebra kernels shared by the spatial and time modules.

pub mod banded;

pub use banded::{BandLu, BandMatrix};

use crate::C64;

/// Compensated accumulator for complex vectors.
#[derive(Debug, Clone)]
pub struct KahanSum {
    sum: Vec<C64>,
    comp: Vec<C64>,
}

impl KahanSum {
    pub fn new(n: usize) -> Self {
        Self {
            sum: vec![C64::default(); n],
            comp: vec![C64::default(); n],
        }
    }

    /// Adds `scale * x`.
    pub fn add_scaled(&mut self, scale: C64, x: &[C64]) {
        for ((s, c), &xi) in self.sum.iter_mut().zip(self.comp.iter_mut()).zip(x) {
            let y = scale * xi - *c;
            let t = *s + y;
            *c = (t - *s) - y;
            *s = t;
        }
    }

    pub fn finish(self) -> Vec<C64> {
        self.sum
    }
}

pub fn norm_inf(x: &[C64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.norm()))
}

pub fn sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
