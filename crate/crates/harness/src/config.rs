//! Flat `key = value` experiment files.
//!
//! ```text
//! # tunneling through a thin barrier
//! x0 = -30
//! x1 = 30
//! n_elems = 500
//! potential = step_barrier
//! v_max = 15
//! c_barr = 0.005
//! r_bar = -3
//! p_bar = 5
//! sigma = 4
//! dt = 2e-4
//! t_end = 0.02
//! snapshot_every = 50
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rexi_core::spatial::{PhysicalConstants, PotentialSpec, WavePacketParams};

use crate::error::{HarnessError, Result};

const KEYS: &[&str] = &[
    "x0",
    "x1",
    "n_elems",
    "potential",
    "v_max",
    "c_barr",
    "r_bar",
    "p_bar",
    "sigma",
    "dt",
    "t_end",
    "snapshot_every",
    "approx_path",
    "workers",
    "stabilize_eps",
    "override_admissibility",
    "hbar",
    "mass",
    "snapshot_samples",
    "chebyshev_degree",
];

pub const DEFAULT_SNAPSHOT_SAMPLES: usize = 1201;
pub const DEFAULT_CHEBYSHEV_DEGREE: usize = 26;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub x0: f64,
    pub x1: f64,
    pub n_elems: usize,
    pub potential: PotentialSpec,
    pub packet: WavePacketParams,
    pub consts: PhysicalConstants,
    pub dt: f64,
    pub t_end: f64,
    pub snapshot_every: usize,
    /// Relative paths are resolved against the config file's directory.
    pub approx_path: Option<PathBuf>,
    /// `None` runs one worker per shift.
    pub workers: Option<usize>,
    pub stabilize_eps: Option<f64>,
    pub override_admissibility: bool,
    pub snapshot_samples: usize,
    pub chebyshev_degree: usize,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let mut cfg = Self::parse(&text)?;
        if let Some(p) = &cfg.approx_path {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    cfg.approx_path = Some(dir.join(p));
                }
            }
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::ConfigSyntax {
                    line: idx + 1,
                    msg: format!("expected key = value, got \"{line}\""),
                })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(HarnessError::config(key, "unknown key"));
            }
            if map
                .insert(key.to_string(), value.trim().to_string())
                .is_some()
            {
                return Err(HarnessError::config(key, "given more than once"));
            }
        }
        let fields = Fields(map);

        let x0: f64 = fields.required("x0")?;
        let x1: f64 = fields.required("x1")?;
        if !(x0 < x1) {
            return Err(HarnessError::config("x1", format!("must exceed x0 = {x0}")));
        }
        let n_elems: usize = fields.required("n_elems")?;
        if n_elems == 0 {
            return Err(HarnessError::config("n_elems", "must be >= 1"));
        }

        let kind: String = fields
            .optional("potential")?
            .unwrap_or_else(|| "step_barrier".into());
        let potential = match kind.as_str() {
            "zero" => PotentialSpec::Zero,
            "step_barrier" => {
                let v_max: f64 = fields.required("v_max")?;
                let c_barr: f64 = fields.required("c_barr")?;
                if !(v_max >= 0.0) {
                    return Err(HarnessError::config("v_max", "must be >= 0"));
                }
                if !(c_barr > 0.0) {
                    return Err(HarnessError::config("c_barr", "must be > 0"));
                }
                PotentialSpec::StepBarrier { v_max, c_barr }
            }
            other => {
                return Err(HarnessError::config(
                    "potential",
                    format!("expected zero or step_barrier, got \"{other}\""),
                ))
            }
        };

        let r_bar: f64 = fields.required("r_bar")?;
        let p_bar: f64 = fields.required("p_bar")?;
        let sigma: f64 = fields.required("sigma")?;
        if !(sigma > 0.0) {
            return Err(HarnessError::config("sigma", "must be > 0"));
        }
        let packet = WavePacketParams {
            r_bar,
            p_bar,
            sigma,
        };

        let hbar: f64 = fields.optional("hbar")?.unwrap_or(1.0);
        let mass: f64 = fields.optional("mass")?.unwrap_or(1.0);
        if !(hbar > 0.0) {
            return Err(HarnessError::config("hbar", "must be > 0"));
        }
        if !(mass > 0.0) {
            return Err(HarnessError::config("mass", "must be > 0"));
        }

        let dt: f64 = fields.required("dt")?;
        if !(dt > 0.0) {
            return Err(HarnessError::config("dt", "must be > 0"));
        }
        let t_end: f64 = fields.required("t_end")?;
        if !(t_end >= dt) {
            return Err(HarnessError::config(
                "t_end",
                format!("must be >= dt = {dt}"),
            ));
        }
        let steps = t_end / dt;
        if (steps - steps.round()).abs() > 1e-9 * steps {
            return Err(HarnessError::config(
                "t_end",
                format!("must be a whole number of steps of dt = {dt}"),
            ));
        }
        let snapshot_every: usize = fields.required("snapshot_every")?;
        if snapshot_every == 0 {
            return Err(HarnessError::config("snapshot_every", "must be >= 1"));
        }

        let workers: Option<usize> = fields.optional("workers")?;
        if workers == Some(0) {
            return Err(HarnessError::config("workers", "must be >= 1"));
        }
        let stabilize_eps: Option<f64> = fields.optional("stabilize_eps")?;
        if let Some(e) = stabilize_eps {
            if !(e > 0.0 && e < 1.0) {
                return Err(HarnessError::config("stabilize_eps", "must lie in (0, 1)"));
            }
        }
        let override_admissibility: bool =
            fields.optional("override_admissibility")?.unwrap_or(false);
        let snapshot_samples: usize = fields
            .optional("snapshot_samples")?
            .unwrap_or(DEFAULT_SNAPSHOT_SAMPLES);
        if snapshot_samples < 2 {
            return Err(HarnessError::config("snapshot_samples", "must be >= 2"));
        }
        let chebyshev_degree: usize = fields
            .optional("chebyshev_degree")?
            .unwrap_or(DEFAULT_CHEBYSHEV_DEGREE);
        if chebyshev_degree == 0 {
            return Err(HarnessError::config("chebyshev_degree", "must be >= 1"));
        }

        Ok(Self {
            x0,
            x1,
            n_elems,
            potential,
            packet,
            consts: PhysicalConstants { hbar, mass },
            dt,
            t_end,
            snapshot_every,
            approx_path: fields.optional::<String>("approx_path")?.map(PathBuf::from),
            workers,
            stabilize_eps,
            override_admissibility,
            snapshot_samples,
            chebyshev_degree,
        })
    }

    pub fn n_steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

struct Fields(BTreeMap<String, String>);

impl Fields {
    fn optional<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| HarnessError::config(key, format!("cannot parse \"{raw}\""))),
        }
    }

    fn required<T: FromStr>(&self, key: &str) -> Result<T> {
        self.optional(key)?
            .ok_or_else(|| HarnessError::config(key, "missing"))
    }
}
