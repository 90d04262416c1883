use std::ops::Deref;

use crate::error::{Error, Result};
use crate::linalg::BandMatrix;
use crate::spatial::assemble::PhysicalConstants;
use crate::spatial::mesh::Mesh1D;
use crate::C64;

/// Endpoint-to-peak ratio above which a packet counts as cut off.
pub const SUPPORT_TOL: f64 = 1e-8;

/// Gaussian packet with mean position `r_bar`, mean momentum `p_bar` and
/// width parameter `sigma` (the variance of `|ψ|` is `sigma`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePacketParams {
    pub r_bar: f64,
    pub p_bar: f64,
    pub sigma: f64,
}

impl WavePacketParams {
    pub fn new(r_bar: f64, p_bar: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "sigma must be > 0, got {sigma}"
            )));
        }
        if !r_bar.is_finite() || !p_bar.is_finite() {
            return Err(Error::InvalidArgument(
                "packet centre and momentum must be finite".into(),
            ));
        }
        Ok(Self {
            r_bar,
            p_bar,
            sigma,
        })
    }
}

/// `exp(-(r - r̄)² / (2σ)) exp(i p̄ (r - r̄) / ħ)`, unnormalized.
pub fn wave_packet_eval(params: &WavePacketParams, consts: &PhysicalConstants, r: f64) -> C64 {
    let d = r - params.r_bar;
    let envelope = (-d * d / (2.0 * params.sigma)).exp();
    C64::from_polar(envelope, params.p_bar * d / consts.hbar)
}

/// Interior nodal coefficients of a wave function.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Vec<C64>);

impl StateVector {
    pub fn new(u: Vec<C64>) -> Result<Self> {
        if let Some(i) = u
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::InvalidArgument(format!(
                "state entry {i} is not finite"
            )));
        }
        Ok(Self(u))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![C64::default(); n])
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.0
    }
}

impl Deref for StateVector {
    type Target = [C64];

    fn deref(&self) -> &[C64] {
        &self.0
    }
}

/// `sqrt(uᴴ B u)`.
pub fn b_norm(u: &[C64], b: &BandMatrix<f64>) -> Result<f64> {
    if u.len() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            found: u.len(),
        });
    }
    let bu = b.mul_vec(u);
    let q: C64 = u.iter().zip(&bu).map(|(x, y)| x.conj() * y).sum();
    debug_assert!(q.im.abs() <= 1e-12 * q.norm().max(f64::MIN_POSITIVE));
    Ok(q.re.max(0.0).sqrt())
}

/// Nodal interpolant of the packet, scaled so that `uᴴ B u = ħ`.
pub fn project_initial(
    mesh: &Mesh1D,
    params: &WavePacketParams,
    consts: &PhysicalConstants,
    b: &BandMatrix<f64>,
) -> Result<StateVector> {
    if b.dim() != mesh.n_dof() {
        return Err(Error::DimensionMismatch {
            expected: mesh.n_dof(),
            found: b.dim(),
        });
    }
    let peak = wave_packet_eval(params, consts, params.r_bar).norm();
    for x in [mesh.x0(), mesh.x1()] {
        let ratio = wave_packet_eval(params, consts, x).norm() / peak;
        if !(ratio < SUPPORT_TOL) {
            return Err(Error::SupportViolation { x, ratio });
        }
    }
    let nodes = mesh.nodes();
    let mut u: Vec<C64> = nodes[1..nodes.len() - 1]
        .iter()
        .map(|&x| wave_packet_eval(params, consts, x))
        .collect();
    let norm = b_norm(&u, b)?;
    if !(norm > 0.0) {
        return Err(Error::InvalidArgument(
            "packet vanishes on every interior node".into(),
        ));
    }
    let scale = consts.hbar.sqrt() / norm;
    for v in &mut u {
        *v *= scale;
    }
    StateVector::new(u)
}

/// Values of the quadratic interpolant of `u` at `xs`; zero at both ends.
pub fn evaluate_wavefunction(u: &[C64], mesh: &Mesh1D, xs: &[f64]) -> Result<Vec<C64>> {
    if u.len() != mesh.n_dof() {
        return Err(Error::DimensionMismatch {
            expected: mesh.n_dof(),
            found: u.len(),
        });
    }
    let node = |g: usize| {
        if g == 0 || g == mesh.total_nodes() - 1 {
            C64::default()
        } else {
            u[g - 1]
        }
    };
    xs.iter()
        .map(|&x| {
            let (e, xi) = mesh.locate(x)?;
            let n = [
                2.0 * (xi - 0.5) * (xi - 1.0),
                4.0 * xi * (1.0 - xi),
                2.0 * xi * (xi - 0.5),
            ];
            Ok((0..3).map(|k| node(2 * e + k) * n[k]).sum())
        })
        .collect()
}

/// `|ψ(x)|²` of the interpolant; integrates to one for a state with
/// `uᴴ B u = ħ`.
pub fn probability_density(u: &[C64], mesh: &Mesh1D, xs: &[f64]) -> Result<Vec<f64>> {
    Ok(evaluate_wavefunction(u, mesh, xs)?
        .iter()
        .map(|p| p.norm_sqr())
        .collect())
}
