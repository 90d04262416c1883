use nalgebra::{Cholesky, DMatrix};

use crate::error::{Error, Result};
use crate::linalg::BandMatrix;
use crate::spatial::mesh::Mesh1D;

/// Potential energy `V(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialSpec {
    Zero,
    /// `v_max` on `|x| <= c_barr / 2`, zero elsewhere.
    StepBarrier {
        v_max: f64,
        c_barr: f64,
    },
}

impl PotentialSpec {
    pub fn step_barrier(v_max: f64, c_barr: f64) -> Result<Self> {
        if !(v_max >= 0.0) || !v_max.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "v_max must be >= 0, got {v_max}"
            )));
        }
        if !(c_barr > 0.0) || !c_barr.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "c_barr must be > 0, got {c_barr}"
            )));
        }
        Ok(Self::StepBarrier { v_max, c_barr })
    }

    pub fn value(&self, x: f64) -> f64 {
        match *self {
            Self::Zero => 0.0,
            Self::StepBarrier { v_max, c_barr } => {
                if x.abs() <= 0.5 * c_barr {
                    v_max
                } else {
                    0.0
                }
            }
        }
    }

    /// Points where `V` jumps.
    pub fn jumps(&self) -> Vec<f64> {
        match *self {
            Self::Zero => Vec::new(),
            Self::StepBarrier { c_barr, .. } => vec![-0.5 * c_barr, 0.5 * c_barr],
        }
    }
}

/// `ħ` and the particle mass; Hartree atomic units by default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

impl PhysicalConstants {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar > 0.0 && mass > 0.0) || !hbar.is_finite() || !mass.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "hbar and mass must be positive, got {hbar} and {mass}"
            )));
        }
        Ok(Self { hbar, mass })
    }
}

/// Stiffness-plus-potential matrix `A` and scaled mass matrix `B` on the
/// interior degrees of freedom, so that `i B u' = A u`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemMatrices {
    pub a: BandMatrix<f64>,
    pub b: BandMatrix<f64>,
}

impl SystemMatrices {
    /// Checks that both matrices are symmetric with the same dimension and
    /// that `B` admits a Cholesky factorization.
    pub fn new(a: BandMatrix<f64>, b: BandMatrix<f64>) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        if a.dim() == 0 {
            return Err(Error::InvalidArgument(
                "system has no degrees of freedom".into(),
            ));
        }
        let scale = |m: &BandMatrix<f64>| {
            (0..m.dim())
                .flat_map(|i| m.row_range(i).map(move |j| (i, j)))
                .fold(0.0_f64, |s, (i, j)| s.max(m.get(i, j).abs()))
        };
        if !a.is_symmetric(1e-14 * scale(&a)) || !b.is_symmetric(1e-14 * scale(&b)) {
            return Err(Error::InvalidArgument("A and B must be symmetric".into()));
        }
        if Cholesky::new(b.to_dense()).is_none() {
            return Err(Error::InvalidArgument("B is not positive definite".into()));
        }
        Ok(Self { a, b })
    }

    pub fn from_dense(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Self> {
        Self::new(BandMatrix::from_dense(a), BandMatrix::from_dense(b))
    }

    pub fn n_dof(&self) -> usize {
        self.a.dim()
    }
}

const GAUSS_POINTS: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const GAUSS_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

/// Quadratic Lagrange shape functions on `[0, 1]` at nodes `0, 1/2, 1`.
fn shape(xi: f64) -> [f64; 3] {
    [
        2.0 * (xi - 0.5) * (xi - 1.0),
        4.0 * xi * (1.0 - xi),
        2.0 * xi * (xi - 0.5),
    ]
}

/// Derivatives with respect to `ξ`.
fn shape_derivative(xi: f64) -> [f64; 3] {
    [4.0 * xi - 3.0, 4.0 - 8.0 * xi, 4.0 * xi - 1.0]
}

/// Element blocks `(A_e, B_e)` for the element `[xl, xr]` in
/// (left, mid, right) node order.
pub fn element_matrices(
    xl: f64,
    xr: f64,
    potential: &PotentialSpec,
    consts: &PhysicalConstants,
) -> ([[f64; 3]; 3], [[f64; 3]; 3]) {
    let h = xr - xl;
    let kinetic = consts.hbar * consts.hbar / (2.0 * consts.mass);
    let mut a = [[0.0; 3]; 3];
    let mut b = [[0.0; 3]; 3];

    let mut cuts = vec![xl];
    cuts.extend(potential.jumps().into_iter().filter(|&x| x > xl && x < xr));
    cuts.push(xr);

    for piece in cuts.windows(2) {
        let (pa, pb) = (piece[0], piece[1]);
        let half = 0.5 * (pb - pa);
        let mid = 0.5 * (pa + pb);
        for (&g, &w) in GAUSS_POINTS.iter().zip(&GAUSS_WEIGHTS) {
            let x = mid + half * g;
            let xi = (x - xl) / h;
            let n = shape(xi);
            let dn = shape_derivative(xi);
            let dx = w * half;
            let v = potential.value(x);
            for i in 0..3 {
                for j in 0..3 {
                    let nn = n[i] * n[j] * dx;
                    a[i][j] += kinetic * dn[i] * dn[j] / (h * h) * dx + v * nn;
                    b[i][j] += consts.hbar * nn;
                }
            }
        }
    }
    (a, b)
}

/// `A` and `B` over all nodes, boundary nodes included.
pub fn assemble_full(
    mesh: &Mesh1D,
    potential: &PotentialSpec,
    consts: &PhysicalConstants,
) -> (BandMatrix<f64>, BandMatrix<f64>) {
    let n = mesh.total_nodes();
    let mut a = BandMatrix::zeros(n, 2, 2);
    let mut b = BandMatrix::zeros(n, 2, 2);
    for e in 0..mesh.n_elems() {
        let (xl, xr) = mesh.element_bounds(e);
        let (ae, be) = element_matrices(xl, xr, potential, consts);
        for i in 0..3 {
            for j in 0..3 {
                a.add(2 * e + i, 2 * e + j, ae[i][j]);
                b.add(2 * e + i, 2 * e + j, be[i][j]);
            }
        }
    }
    (a, b)
}

/// Assembles `A` and `B` and removes the two Dirichlet boundary nodes.
pub fn assemble_system(
    mesh: &Mesh1D,
    potential: &PotentialSpec,
    consts: &PhysicalConstants,
) -> SystemMatrices {
    let (af, bf) = assemble_full(mesh, potential, consts);
    let n = mesh.n_dof();
    let mut a = BandMatrix::zeros(n, 2, 2);
    let mut b = BandMatrix::zeros(n, 2, 2);
    for i in 0..n {
        for j in i.saturating_sub(2)..(i + 3).min(n) {
            a.set(i, j, af.get(i + 1, j + 1));
            b.set(i, j, bf.get(i + 1, j + 1));
        }
    }
    SystemMatrices { a, b }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spatial::mesh::build_mesh;

    #[test]
    fn zero_potential_blocks() {
        let c = PhysicalConstants::default();
        let h = 0.3;
        let (a, b) = element_matrices(1.0, 1.0 + h, &PotentialSpec::Zero, &c);
        let mass = [[4.0, 2.0, -1.0], [2.0, 16.0, 2.0], [-1.0, 2.0, 4.0]];
        let stiff = [[7.0, -8.0, 1.0], [-8.0, 16.0, -8.0], [1.0, -8.0, 7.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((b[i][j] - h / 30.0 * mass[i][j]).abs() < 1e-15);
                assert!((a[i][j] - 0.5 / (3.0 * h) * stiff[i][j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn barrier_inside_element() {
        let c = PhysicalConstants::default();
        let v = PotentialSpec::step_barrier(15.0, 0.005).unwrap();
        let (a, _) = element_matrices(-0.1, 0.1, &v, &c);
        let (a0, _) = element_matrices(-0.1, 0.1, &PotentialSpec::Zero, &c);
        // potential block ≈ V C (midpoint shape ≈ 1 over the thin barrier)
        let dmid = a[1][1] - a0[1][1];
        assert!((dmid - 15.0 * 0.005).abs() < 1e-3 * 15.0 * 0.005);
        let dend = a[0][0] - a0[0][0];
        assert!(dend > 0.0 && dend < 1e-5);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(PotentialSpec::step_barrier(-1.0, 0.1).is_err());
        assert!(PotentialSpec::step_barrier(1.0, 0.0).is_err());
        assert!(PhysicalConstants::new(0.0, 1.0).is_err());
    }

    #[test]
    fn system_shape() {
        let m = build_mesh(-1.0, 1.0, 5).unwrap();
        let s = assemble_system(&m, &PotentialSpec::Zero, &PhysicalConstants::default());
        assert_eq!(s.n_dof(), 9);
        assert!(s.a.is_symmetric(1e-14));
        assert!(s.b.is_symmetric(1e-14));
        assert!(SystemMatrices::new(s.a.clone(), s.b.clone()).is_ok());
    }

    #[test]
    fn system_checks() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        let b = DMatrix::identity(2, 2);
        assert!(SystemMatrices::from_dense(&a, &b).is_err());
        let bad_b = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(SystemMatrices::from_dense(&b, &bad_b).is_err());
    }
}
