use std::io::Write;
use std::path::PathBuf;

use rexi_core::approx::faber::{DEFAULT_CONTOUR_RHO, DEFAULT_DEGREE, DEFAULT_TRUNCATION};
use rexi_core::approx::{faber_cf, FaberCfOptions, JoukowskiMap, PartialFractionApproximation};

use crate::commands::write_file;
use crate::error::{HarnessError, Result};

#[derive(Debug, Clone)]
pub struct ApproxArgs {
    pub r1: f64,
    pub degree: usize,
    pub out: PathBuf,
    pub stabilize: Option<f64>,
    pub contour_rho: f64,
    pub truncation: usize,
}

impl ApproxArgs {
    pub fn new(r1: f64, out: PathBuf) -> Self {
        Self {
            r1,
            degree: DEFAULT_DEGREE,
            out,
            stabilize: None,
            contour_rho: DEFAULT_CONTOUR_RHO,
            truncation: DEFAULT_TRUNCATION,
        }
    }
}

pub fn cmd_approx(args: &ApproxArgs, out: &mut dyn Write) -> Result<PartialFractionApproximation> {
    let map = JoukowskiMap::new(args.r1)?;
    let opts = FaberCfOptions {
        truncation: args.truncation,
        degree: args.degree,
        contour_rho: args.contour_rho,
        ..FaberCfOptions::default()
    };
    let mut approx = faber_cf(&map, &opts)?;
    if let Some(eps) = args.stabilize {
        approx = approx.stabilize(eps)?;
    }
    write_file(&args.out, &approx.to_json())?;
    let line = format!(
        "K={} R1={} sup_error={:.6e} stabilized={}",
        approx.len(),
        approx.r1(),
        approx.sup_error(),
        approx.is_stabilized()
    );
    writeln!(out, "{line}").map_err(|e| HarnessError::io("<stdout>", e))?;
    Ok(approx)
}
