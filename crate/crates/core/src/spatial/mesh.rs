use crate::error::{Error, Result};

/// Uniform mesh of quadratic elements on `[x0, x1]`.
///
/// Nodes alternate between element endpoints (even indices) and element
/// midpoints (odd indices); element `e` owns nodes `2e, 2e + 1, 2e + 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    x0: f64,
    x1: f64,
    n_elems: usize,
    nodes: Vec<f64>,
}

pub fn build_mesh(x0: f64, x1: f64, n_elems: usize) -> Result<Mesh1D> {
    if !(x0.is_finite() && x1.is_finite() && x0 < x1) {
        return Err(Error::InvalidArgument(format!(
            "invalid domain [{x0}, {x1}]"
        )));
    }
    if n_elems == 0 {
        return Err(Error::InvalidArgument(
            "mesh needs at least one element".into(),
        ));
    }
    let total = 2 * n_elems;
    let nodes = (0..=total)
        .map(|k| {
            if k == total {
                x1
            } else {
                x0 + (x1 - x0) * k as f64 / total as f64
            }
        })
        .collect();
    Ok(Mesh1D {
        x0,
        x1,
        n_elems,
        nodes,
    })
}

impl Mesh1D {
    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn x1(&self) -> f64 {
        self.x1
    }

    pub fn n_elems(&self) -> usize {
        self.n_elems
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn element_length(&self) -> f64 {
        (self.x1 - self.x0) / self.n_elems as f64
    }

    /// All nodes including the two boundary nodes.
    pub fn total_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Interior nodes left after the Dirichlet nodes are removed.
    pub fn n_dof(&self) -> usize {
        self.nodes.len() - 2
    }

    pub fn element_bounds(&self, e: usize) -> (f64, f64) {
        (self.nodes[2 * e], self.nodes[2 * e + 2])
    }

    /// Element containing `x` and the reference coordinate `ξ ∈ [0, 1]`.
    pub fn locate(&self, x: f64) -> Result<(usize, f64)> {
        if !(x >= self.x0 && x <= self.x1) {
            return Err(Error::OutOfDomain {
                x,
                x0: self.x0,
                x1: self.x1,
            });
        }
        let h = self.element_length();
        let e = (((x - self.x0) / h).floor() as usize).min(self.n_elems - 1);
        let (a, b) = self.element_bounds(e);
        Ok((e, ((x - a) / (b - a)).clamp(0.0, 1.0)))
    }
}
