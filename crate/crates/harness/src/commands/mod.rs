//! Subcommand implementations. Each writes its summary to `out` so the
//! binary and the tests share one code path.

pub mod approx;
pub mod compare;
pub mod eig;
pub mod stability;
pub mod tunnel;

use std::path::Path;

use rexi_core::approx::{faber_cf, FaberCfOptions, JoukowskiMap, PartialFractionApproximation};
use rexi_core::spatial::{
    assemble_system, build_mesh, project_initial, spectral_radius_estimate, Mesh1D,
    SpectralEstimate, StateVector, SystemMatrices,
};

use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};

/// Relative tolerance of the spectral radius power iteration.
pub const SR_TOL: f64 = 1e-6;
pub const SR_MAX_ITERS: usize = 200_000;
/// Interval half-length of the approximation built when no file is given.
pub const DEFAULT_R1: f64 = 10.0;

pub fn read_approximation(path: &Path) -> Result<PartialFractionApproximation> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    Ok(PartialFractionApproximation::from_json(&text)?)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}

/// Approximation named by the config, or the default `R1 = 10`, degree 16
/// construction, stabilized when requested.
pub fn load_approximation(cfg: &ExperimentConfig) -> Result<PartialFractionApproximation> {
    let approx = match &cfg.approx_path {
        Some(p) => read_approximation(p)?,
        None => faber_cf(&JoukowskiMap::new(DEFAULT_R1)?, &FaberCfOptions::default())?,
    };
    Ok(match cfg.stabilize_eps {
        Some(eps) => approx.stabilize(eps)?,
        None => approx,
    })
}

/// Discretized problem of a config file.
pub struct Experiment {
    pub config: ExperimentConfig,
    pub mesh: Mesh1D,
    pub sys: SystemMatrices,
    pub u0: StateVector,
    pub sr: SpectralEstimate,
}

impl Experiment {
    pub fn setup(config: ExperimentConfig) -> Result<Self> {
        let mesh = build_mesh(config.x0, config.x1, config.n_elems)?;
        let sys = assemble_system(&mesh, &config.potential, &config.consts);
        let u0 = project_initial(&mesh, &config.packet, &config.consts, &sys.b)?;
        let sr = spectral_radius_estimate(&sys, SR_TOL, SR_MAX_ITERS)?;
        Ok(Self {
            config,
            mesh,
            sys,
            u0,
            sr,
        })
    }
}
