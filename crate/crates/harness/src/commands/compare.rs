use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rexi_core::approx::PartialFractionApproximation;
use rexi_core::integrate::{
    chebyshev_coeffs, rexi_run, ChebyshevStepper, OracleDecomposition, PhaseTimings, RexiStepper,
    DEFAULT_MAX_N,
};
use rexi_core::linalg::{norm_inf, sub};
use rexi_core::spatial::b_norm;
use rexi_core::C64;

use crate::commands::{load_approximation, write_file, Experiment};
use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};

/// Sub-steps per step of the fine Chebyshev reference.
pub const FINE_SUBSTEPS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Rexi,
    Chebyshev,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Rexi => "rexi",
            Self::Chebyshev => "chebyshev",
        }
    }
}

pub fn parse_methods(s: &str) -> Result<Vec<Method>> {
    let out: Vec<Method> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "rexi" => Ok(Method::Rexi),
            "chebyshev" => Ok(Method::Chebyshev),
            other => Err(HarnessError::Usage(format!(
                "unknown method \"{other}\" (expected rexi or chebyshev)"
            ))),
        })
        .collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(HarnessError::Usage("--methods is empty".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    /// Dense eigendecomposition of `M`, exact up to `cond∞(X)`.
    Dense,
    /// Chebyshev of twice the degree on `dt / substeps`.
    Fine(usize),
}

impl FromStr for Reference {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Self::Dense),
            "fine" => Ok(Self::Fine(FINE_SUBSTEPS)),
            other => Err(HarnessError::Usage(format!(
                "unknown reference \"{other}\" (expected dense or fine)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub method: Method,
    pub dt: f64,
    pub error_inf: f64,
    pub error_b: f64,
    pub time_total_s: f64,
    pub timings: PhaseTimings,
    /// Per-step certificate of the propagator on `i[-R, R]`.
    pub sup_error: f64,
    pub final_state: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rows: Vec<CompareRow>,
    /// `cond∞(X)` when the dense reference was used.
    pub cond_inf: Option<f64>,
}

pub fn reference_state(
    exp: &Experiment,
    r: f64,
    reference: Reference,
) -> Result<(Vec<C64>, Option<f64>)> {
    let cfg = &exp.config;
    match reference {
        Reference::Dense => {
            if exp.sys.n_dof() > DEFAULT_MAX_N {
                return Err(HarnessError::Usage(format!(
                    "dense reference needs n_dof <= {DEFAULT_MAX_N}, got {}",
                    exp.sys.n_dof()
                )));
            }
            let d = OracleDecomposition::new(&exp.sys, DEFAULT_MAX_N)?;
            Ok((d.apply(cfg.t_end, &exp.u0)?, Some(d.cond_inf())))
        }
        Reference::Fine(substeps) => {
            if substeps == 0 {
                return Err(HarnessError::Usage(
                    "fine reference needs at least one substep".into(),
                ));
            }
            let series = chebyshev_coeffs(r, 2 * cfg.chebyshev_degree)?;
            let tau = cfg.dt / substeps as f64;
            let st = ChebyshevStepper::prepare(&exp.sys, &series, tau, exp.sr.value)?;
            Ok((st.run(&exp.u0, cfg.n_steps() * substeps)?.0, None))
        }
    }
}

pub fn compare(
    exp: &Experiment,
    approx: &PartialFractionApproximation,
    methods: &[Method],
    reference: Reference,
    workers: Option<usize>,
) -> Result<Comparison> {
    let cfg = &exp.config;
    let (reference_u, cond_inf) = reference_state(exp, approx.r1(), reference)?;
    let mut rows = Vec::new();
    for &method in methods {
        let start = Instant::now();
        let (state, timings, sup_error) = match method {
            Method::Rexi => {
                let st = RexiStepper::prepare(
                    &exp.sys,
                    approx,
                    cfg.dt,
                    exp.sr.value,
                    workers.or(cfg.workers),
                )?;
                let rep = rexi_run(
                    &st,
                    &exp.u0,
                    cfg.n_steps(),
                    cfg.override_admissibility,
                    |_, _, _| {},
                )?;
                (rep.state, rep.timings, approx.sup_error())
            }
            Method::Chebyshev => {
                let series = chebyshev_coeffs(approx.r1(), cfg.chebyshev_degree)?;
                let st = ChebyshevStepper::prepare(&exp.sys, &series, cfg.dt, exp.sr.value)?;
                let adm = st.admissibility();
                if !adm.is_admissible() && !cfg.override_admissibility {
                    return Err(rexi_core::Error::Inadmissible {
                        dt: cfg.dt,
                        max_dt: adm.max_dt(cfg.dt),
                    }
                    .into());
                }
                let (u, t) = st.run(&exp.u0, cfg.n_steps())?;
                (u, t, series.sup_error())
            }
        };
        let time_total_s = start.elapsed().as_secs_f64();
        let diff = sub(&state, &reference_u);
        rows.push(CompareRow {
            method,
            dt: cfg.dt,
            error_inf: norm_inf(&diff),
            error_b: b_norm(&diff, &exp.sys.b)?,
            time_total_s,
            timings,
            sup_error,
            final_state: state,
        });
    }
    Ok(Comparison { rows, cond_inf })
}

pub fn comparison_csv(rows: &[CompareRow]) -> String {
    let mut s = String::from(
        "method,dt,error_inf,error_b,time_total_s,time_rhs_s,time_local_s,time_reduce_s\n",
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{},{:e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e}",
            r.method.name(),
            r.dt,
            r.error_inf,
            r.error_b,
            r.time_total_s,
            r.timings.rhs.as_secs_f64(),
            r.timings.local.as_secs_f64(),
            r.timings.reduce.as_secs_f64()
        );
    }
    s
}

pub fn cmd_compare(
    config: &Path,
    methods: &str,
    reference: &str,
    out_path: &Path,
    workers: Option<usize>,
    out: &mut dyn Write,
) -> Result<Comparison> {
    let methods = parse_methods(methods)?;
    let reference: Reference = reference.parse()?;
    let cfg = ExperimentConfig::load(config)?;
    let approx = load_approximation(&cfg)?;
    let exp = Experiment::setup(cfg)?;
    let cmp = compare(&exp, &approx, &methods, reference, workers)?;
    write_file(out_path, &comparison_csv(&cmp.rows))?;

    let io = |e| HarnessError::io("<stdout>", e);
    writeln!(
        out,
        "n_dof={} steps={} reference={}",
        exp.sys.n_dof(),
        exp.config.n_steps(),
        match reference {
            Reference::Dense => "dense",
            Reference::Fine(_) => "fine",
        }
    )
    .map_err(io)?;
    for r in &cmp.rows {
        write!(
            out,
            "{} error_inf={:.3e} error_b={:.3e} time_s={:.3}",
            r.method.name(),
            r.error_inf,
            r.error_b,
            r.time_total_s
        )
        .map_err(io)?;
        if let Some(c) = cmp.cond_inf {
            let bound = exp.config.n_steps() as f64 * r.sup_error * c * norm_inf(&exp.u0);
            write!(out, " certified_bound={bound:.3e}").map_err(io)?;
        }
        writeln!(out).map_err(io)?;
    }
    writeln!(
        out,
        "note: time_reduce_s is an in-process sum over shifts, not a cross-node reduction"
    )
    .map_err(io)?;
    Ok(cmp)
}
