use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use rexi_core::C64;

use crate::commands::{read_approximation, write_file};
use crate::error::{HarnessError, Result};

/// Rectangle `[re_lo, re_hi] x [im_lo, im_hi]` sampled on `n_re x n_im`
/// points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
    pub n_re: usize,
    pub n_im: usize,
}

impl std::str::FromStr for Grid {
    type Err = HarnessError;

    /// `"reLo,reHi,imLo,imHi,nRe,nIm"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(HarnessError::Usage(format!(
                "--grid expects reLo,reHi,imLo,imHi,nRe,nIm, got \"{s}\""
            )));
        }
        let real = |k: usize| {
            parts[k]
                .parse::<f64>()
                .map_err(|_| HarnessError::Usage(format!("--grid: bad number \"{}\"", parts[k])))
        };
        let count = |k: usize| {
            parts[k]
                .parse::<usize>()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| HarnessError::Usage(format!("--grid: bad count \"{}\"", parts[k])))
        };
        Ok(Self {
            re_lo: real(0)?,
            re_hi: real(1)?,
            im_lo: real(2)?,
            im_hi: real(3)?,
            n_re: count(4)?,
            n_im: count(5)?,
        })
    }
}

fn axis(lo: f64, hi: f64, n: usize, k: usize) -> f64 {
    if n == 1 {
        lo
    } else {
        lo + (hi - lo) * k as f64 / (n - 1) as f64
    }
}

#[derive(Debug, Clone)]
pub struct StabilityArgs {
    pub approx: PathBuf,
    pub grid: Grid,
    pub axis_samples: usize,
    pub out_prefix: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilitySummary {
    /// Max of `|r(ix)| - 1` over `x ∈ [-R1, R1]`.
    pub max_deviation: f64,
    pub skipped_poles: usize,
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Writes `<prefix>_grid.csv` (`re,im,indicator`) and `<prefix>_axis.csv`
/// (`im,deviation` on `[-1.5 R1, 1.5 R1]`). Grid points that hit a pole
/// are left out and counted.
pub fn cmd_stability(args: &StabilityArgs, out: &mut dyn Write) -> Result<StabilitySummary> {
    if args.axis_samples < 2 {
        return Err(HarnessError::Usage("--axis-samples must be >= 2".into()));
    }
    let approx = read_approximation(&args.approx)?;
    let g = args.grid;

    let mut grid = String::from("re,im,indicator\n");
    let mut skipped = 0;
    for i in 0..g.n_im {
        let im = axis(g.im_lo, g.im_hi, g.n_im, i);
        for k in 0..g.n_re {
            let re = axis(g.re_lo, g.re_hi, g.n_re, k);
            match approx.stability_indicator(C64::new(re, im)) {
                Ok(v) => {
                    let _ = writeln!(grid, "{re:.11e},{im:.11e},{v:.11e}");
                }
                Err(rexi_core::Error::Pole { .. }) => skipped += 1,
                Err(e) => return Err(e.into()),
            }
        }
    }

    let r1 = approx.r1();
    let half = 1.5 * r1;
    let mut line = String::from("im,deviation\n");
    let mut max_dev = f64::NEG_INFINITY;
    for k in 0..args.axis_samples {
        let x = axis(-half, half, args.axis_samples, k);
        let dev = approx.stability_indicator(C64::new(0.0, x))?;
        if x.abs() <= r1 {
            max_dev = max_dev.max(dev);
        }
        let _ = writeln!(line, "{x:.11e},{dev:.11e}");
    }

    let grid_path = with_suffix(&args.out_prefix, "_grid.csv");
    let axis_path = with_suffix(&args.out_prefix, "_axis.csv");
    write_file(&grid_path, &grid)?;
    write_file(&axis_path, &line)?;
    writeln!(
        out,
        "max_deviation_on_interval={max_dev:.6e} skipped_poles={skipped}\ngrid={}\naxis={}",
        grid_path.display(),
        axis_path.display()
    )
    .map_err(|e| HarnessError::io("<stdout>", e))?;
    if skipped > 0 {
        eprintln!("warning: {skipped} grid points coincide with a shift and were skipped");
    }
    Ok(StabilitySummary {
        max_deviation: max_dev,
        skipped_poles: skipped,
    })
}
