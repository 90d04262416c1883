use std::io::Write;
use std::path::Path;

use rexi_core::integrate::max_step_size;
use rexi_core::spatial::{assemble_system, build_mesh, spectral_radius_estimate, SpectralEstimate};

use crate::commands::{read_approximation, DEFAULT_R1, SR_MAX_ITERS, SR_TOL};
use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigReport {
    pub estimate: SpectralEstimate,
    pub r1: f64,
    /// `R1 / (sr · SAFETY_FACTOR)`.
    pub max_dt: f64,
}

/// Prints exactly `sr_estimate=<value>` and `max_dt=<value>` on stdout; the
/// convergence flag goes to stderr.
pub fn cmd_eig(config: &Path, out: &mut dyn Write) -> Result<EigReport> {
    let cfg = ExperimentConfig::load(config)?;
    let r1 = match &cfg.approx_path {
        Some(p) => read_approximation(p)?.r1(),
        None => DEFAULT_R1,
    };
    let mesh = build_mesh(cfg.x0, cfg.x1, cfg.n_elems)?;
    let sys = assemble_system(&mesh, &cfg.potential, &cfg.consts);
    let estimate = spectral_radius_estimate(&sys, SR_TOL, SR_MAX_ITERS)?;
    let max_dt = max_step_size(r1, estimate.for_step_selection())?;
    writeln!(
        out,
        "sr_estimate={:.9e}\nmax_dt={:.9e}",
        estimate.value, max_dt
    )
    .map_err(|e| HarnessError::io("<stdout>", e))?;
    eprintln!(
        "converged={} iterations={} r1={r1}",
        estimate.converged, estimate.iterations
    );
    Ok(EigReport {
        estimate,
        r1,
        max_dt,
    })
}
