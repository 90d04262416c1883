use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rexi_core::approx::PartialFractionApproximation;
use rexi_core::integrate::{rexi_run, RexiStepper, RunReport};
use rexi_core::spatial::{b_norm, evaluate_wavefunction};
use rexi_core::C64;
use serde_json::json;

use crate::commands::{load_approximation, write_file, Experiment};
use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};

/// Summary written to `metadata.json`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMetadata {
    pub n_dof: usize,
    pub n_nodes: usize,
    pub sr_estimate: f64,
    pub sr_converged: bool,
    pub dt: f64,
    pub r1: f64,
    pub admissibility_ratio: f64,
    pub admissibility_overridden: bool,
    pub n_steps: usize,
    pub workers: usize,
    pub wall_time_s: f64,
    pub bnorm_drift_rel: f64,
}

impl RunMetadata {
    pub fn to_json(&self) -> String {
        let v = json!({
            "n_dof": self.n_dof,
            "n_nodes": self.n_nodes,
            "sr_estimate": self.sr_estimate,
            "sr_converged": self.sr_converged,
            "dt": self.dt,
            "r1": self.r1,
            "admissibility_ratio": self.admissibility_ratio,
            "admissibility_overridden": self.admissibility_overridden,
            "n_steps": self.n_steps,
            "workers": self.workers,
            "wall_time_s": self.wall_time_s,
            "bnorm_drift_rel": self.bnorm_drift_rel,
        });
        serde_json::to_string_pretty(&v).expect("metadata serializes") + "\n"
    }
}

pub struct Simulation {
    pub report: RunReport,
    pub metadata: RunMetadata,
}

/// Runs REXI over the configured horizon. `observer` receives the initial
/// state and every state whose step index is a multiple of
/// `snapshot_every`, plus the final one.
pub fn simulate<F>(
    exp: &Experiment,
    approx: &PartialFractionApproximation,
    workers: Option<usize>,
    mut observer: F,
) -> Result<Simulation>
where
    F: FnMut(usize, f64, &[C64]) -> Result<()>,
{
    let cfg = &exp.config;
    let n_steps = cfg.n_steps();
    let stepper = RexiStepper::prepare(
        &exp.sys,
        approx,
        cfg.dt,
        exp.sr.value,
        workers.or(cfg.workers),
    )?;

    let mut observer_error = None;
    let start = Instant::now();
    let report = rexi_run(
        &stepper,
        &exp.u0,
        n_steps,
        cfg.override_admissibility,
        |k, t, u| {
            if observer_error.is_none() && (k % cfg.snapshot_every == 0 || k == n_steps) {
                if let Err(e) = observer(k, t, u) {
                    observer_error = Some(e);
                }
            }
        },
    )?;
    let wall = start.elapsed().as_secs_f64();
    if let Some(e) = observer_error {
        return Err(e);
    }

    let n0 = b_norm(&exp.u0, &exp.sys.b)?;
    let n1 = b_norm(&report.state, &exp.sys.b)?;
    let metadata = RunMetadata {
        n_dof: exp.mesh.n_dof(),
        n_nodes: exp.mesh.total_nodes(),
        sr_estimate: exp.sr.value,
        sr_converged: exp.sr.converged,
        dt: cfg.dt,
        r1: approx.r1(),
        admissibility_ratio: stepper.admissibility().ratio,
        admissibility_overridden: report.admissibility_overridden,
        n_steps,
        workers: stepper.workers(),
        wall_time_s: wall,
        bnorm_drift_rel: (n1 - n0) / n0,
    };
    Ok(Simulation { report, metadata })
}

pub fn snapshot_csv(exp: &Experiment, u: &[C64]) -> Result<String> {
    let cfg = &exp.config;
    let n = cfg.snapshot_samples;
    let xs: Vec<f64> = (0..n)
        .map(|k| {
            if k == n - 1 {
                cfg.x1
            } else {
                cfg.x0 + (cfg.x1 - cfg.x0) * k as f64 / (n - 1) as f64
            }
        })
        .collect();
    let psi = evaluate_wavefunction(u, &exp.mesh, &xs)?;
    let mut s = String::from("x,re_psi,im_psi,density\n");
    for (x, p) in xs.iter().zip(&psi) {
        let _ = writeln!(
            s,
            "{x:.11e},{:.11e},{:.11e},{:.11e}",
            p.re,
            p.im,
            p.norm_sqr()
        );
    }
    Ok(s)
}

pub fn cmd_tunnel(
    config: &Path,
    out_dir: &Path,
    workers: Option<usize>,
    out: &mut dyn Write,
) -> Result<RunMetadata> {
    let cfg = ExperimentConfig::load(config)?;
    let approx = load_approximation(&cfg)?;
    let exp = Experiment::setup(cfg)?;
    std::fs::create_dir_all(out_dir).map_err(|e| HarnessError::io(out_dir, e))?;

    let mut written: Vec<PathBuf> = Vec::new();
    let sim = simulate(&exp, &approx, workers, |k, _, u| {
        let path = out_dir.join(format!("snapshot_{k:06}.csv"));
        write_file(&path, &snapshot_csv(&exp, u)?)?;
        written.push(path);
        Ok(())
    })?;
    write_file(&out_dir.join("metadata.json"), &sim.metadata.to_json())?;
    let m = &sim.metadata;
    writeln!(
        out,
        "n_dof={} sr_estimate={:.6e} admissibility_ratio={:.4} steps={} wall_time_s={:.3} bnorm_drift_rel={:.3e} snapshots={}",
        m.n_dof,
        m.sr_estimate,
        m.admissibility_ratio,
        m.n_steps,
        m.wall_time_s,
        m.bnorm_drift_rel,
        written.len()
    )
    .map_err(|e| HarnessError::io("<stdout>", e))?;
    Ok(sim.metadata)
}
