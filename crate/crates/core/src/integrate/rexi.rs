use std::time::{Duration, Instant};

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::approx::PartialFractionApproximation;
use crate::error::{Error, Result};
use crate::linalg::{BandLu, BandMatrix, KahanSum};
use crate::spatial::{SystemMatrices, SAFETY_FACTOR};
use crate::C64;

/// Largest admissible step `R1 / sr(M)`.
pub fn max_step_size(r1: f64, sr: f64) -> Result<f64> {
    if !(sr > 0.0) || !sr.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "spectral radius must be > 0, got {sr}"
        )));
    }
    Ok(r1 / sr)
}

/// Bound `ε cond∞(X)` on `‖exp(τM) - r(τM)‖∞` for `τM = X Ω X⁻¹`.
pub fn rexi_error_bound(sup_error: f64, cond_inf: f64) -> f64 {
    sup_error * cond_inf
}

/// Wall time spent in the three phases of a step.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimings {
    pub rhs: Duration,
    pub local: Duration,
    pub reduce: Duration,
}

impl PhaseTimings {
    pub fn total(&self) -> Duration {
        self.rhs + self.local + self.reduce
    }

    pub fn accumulate(&mut self, other: &PhaseTimings) {
        self.rhs += other.rhs;
        self.local += other.local;
        self.reduce += other.reduce;
    }
}

/// Step-size check `τ · sr(M) · SAFETY_FACTOR <= R1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    pub sr_estimate: f64,
    /// `τ · sr · SAFETY_FACTOR / R1`; admissible when at most one.
    pub ratio: f64,
}

impl Admissibility {
    pub fn new(tau: f64, sr_estimate: f64, r1: f64) -> Self {
        Self {
            sr_estimate,
            ratio: tau * sr_estimate * SAFETY_FACTOR / r1,
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.ratio <= 1.0
    }

    /// `R1 / (sr · SAFETY_FACTOR)`.
    pub fn max_dt(&self, tau: f64) -> f64 {
        tau / self.ratio
    }
}

/// REXI propagator `u ← Σ β_j (τA - σ_j iB)⁻¹ iB u` with the `K` shifted
/// matrices factored once.
pub struct RexiStepper {
    approx: PartialFractionApproximation,
    tau: f64,
    b: BandMatrix<f64>,
    factors: Vec<BandLu<C64>>,
    pool: ThreadPool,
    workers: usize,
    admissibility: Admissibility,
}

impl std::fmt::Debug for RexiStepper {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RexiStepper")
            .field("tau", &self.tau)
            .field("shifts", &self.approx.len())
            .field("workers", &self.workers)
            .field("admissibility", &self.admissibility)
            .finish()
    }
}

impl RexiStepper {
    /// Factors `τA - σ_j iB` for every shift on a pool of `workers`
    /// threads (`None` uses one per shift).
    pub fn prepare(
        sys: &SystemMatrices,
        approx: &PartialFractionApproximation,
        tau: f64,
        sr_estimate: f64,
        workers: Option<usize>,
    ) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "time step must be > 0, got {tau}"
            )));
        }
        let workers = workers.unwrap_or(approx.len());
        if workers == 0 {
            return Err(Error::InvalidArgument("workers must be >= 1".into()));
        }
        let pool = ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
        let i = C64::i();
        let factors = pool.install(|| {
            approx
                .shifts()
                .par_iter()
                .enumerate()
                .map(|(j, &s)| {
                    let m = BandMatrix::combine(C64::new(tau, 0.0), &sys.a, -s * i, &sys.b);
                    BandLu::factor(&m).map_err(|_| Error::SingularShift { index: j })
                })
                .collect::<Result<Vec<_>>>()
        })?;
        Ok(Self {
            approx: approx.clone(),
            tau,
            b: sys.b.clone(),
            factors,
            pool,
            workers,
            admissibility: Admissibility::new(tau, sr_estimate, approx.r1()),
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn approximation(&self) -> &PartialFractionApproximation {
        &self.approx
    }

    pub fn admissibility(&self) -> Admissibility {
        self.admissibility
    }

    pub fn n_dof(&self) -> usize {
        self.b.dim()
    }

    /// One step; the weighted sum runs over `j` in ascending order no
    /// matter which worker finished first.
    pub fn step_timed(&self, u: &[C64]) -> Result<(Vec<C64>, PhaseTimings)> {
        if u.len() != self.n_dof() {
            return Err(Error::DimensionMismatch {
                expected: self.n_dof(),
                found: u.len(),
            });
        }
        let mut t = PhaseTimings::default();

        let start = Instant::now();
        let i = C64::i();
        let rhs: Vec<C64> = self.b.mul_vec(u).into_iter().map(|v| v * i).collect();
        t.rhs = start.elapsed();

        let start = Instant::now();
        let solutions = self.pool.install(|| {
            self.factors
                .par_iter()
                .enumerate()
                .map(|(j, lu)| {
                    lu.solve(&rhs)
                        .map_err(|_| Error::SingularShift { index: j })
                })
                .collect::<Result<Vec<_>>>()
        })?;
        t.local = start.elapsed();

        let start = Instant::now();
        let mut acc = KahanSum::new(u.len());
        for (x, &beta) in solutions.iter().zip(self.approx.weights()) {
            acc.add_scaled(beta, x);
        }
        let out = acc.finish();
        t.reduce = start.elapsed();
        Ok((out, t))
    }

    pub fn step(&self, u: &[C64]) -> Result<Vec<C64>> {
        self.step_timed(u).map(|(v, _)| v)
    }
}

/// Result of a multi-step run.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub state: Vec<C64>,
    pub timings: PhaseTimings,
    pub steps: usize,
    /// True when the run went ahead on an inadmissible step size.
    pub admissibility_overridden: bool,
}

/// Applies `n_steps` REXI steps. `observer(k, t, u)` sees the initial state
/// with `k = 0` and the state after every step.
pub fn rexi_run<F>(
    stepper: &RexiStepper,
    u0: &[C64],
    n_steps: usize,
    allow_inadmissible: bool,
    mut observer: F,
) -> Result<RunReport>
where
    F: FnMut(usize, f64, &[C64]),
{
    let adm = stepper.admissibility();
    if !adm.is_admissible() && !allow_inadmissible {
        return Err(Error::Inadmissible {
            dt: stepper.tau(),
            max_dt: adm.max_dt(stepper.tau()),
        });
    }
    let mut u = u0.to_vec();
    let mut timings = PhaseTimings::default();
    observer(0, 0.0, &u);
    for k in 1..=n_steps {
        let (next, t) = stepper.step_timed(&u)?;
        timings.accumulate(&t);
        u = next;
        observer(k, k as f64 * stepper.tau(), &u);
    }
    Ok(RunReport {
        state: u,
        timings,
        steps: n_steps,
        admissibility_overridden: !adm.is_admissible(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn scalar(omega: f64) -> SystemMatrices {
        SystemMatrices::from_dense(
            &DMatrix::from_element(1, 1, omega),
            &DMatrix::from_element(1, 1, 1.0),
        )
        .unwrap()
    }

    fn one_pole() -> PartialFractionApproximation {
        PartialFractionApproximation::new(vec![C64::new(-1.0, 0.0)], vec![C64::new(1.0, 0.0)], 1.0)
            .unwrap()
    }

    #[test]
    fn step_size_helpers() {
        assert!((max_step_size(10.0, 1e5).unwrap() - 1e-4).abs() < 1e-20);
        assert_eq!(max_step_size(10.0, 10.0).unwrap(), 1.0);
        assert!(max_step_size(10.0, 0.0).is_err());
        assert_eq!(rexi_error_bound(2.38e-9, 1.0), 2.38e-9);
        assert_eq!(rexi_error_bound(0.0, 7.0), 0.0);
    }

    #[test]
    fn scalar_single_pole() {
        // r(z) = 1/(z + 1) at z = τM = -iτω
        let s = scalar(2.0);
        let st = RexiStepper::prepare(&s, &one_pole(), 0.25, 2.0, Some(1)).unwrap();
        let out = st.step(&[C64::new(1.0, 0.0)]).unwrap();
        let z = C64::new(0.0, -0.5);
        assert!((out[0] - 1.0 / (z + 1.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_in_zero_out() {
        let s = scalar(1.0);
        let st = RexiStepper::prepare(&s, &one_pole(), 1.0, 1.0, None).unwrap();
        assert_eq!(st.step(&[C64::default()]).unwrap()[0], C64::default());
        assert!(st.step(&[]).is_err());
    }

    #[test]
    fn run_checks_admissibility() {
        let s = scalar(1.0);
        let st = RexiStepper::prepare(&s, &one_pole(), 1.0, 1.0, None).unwrap();
        assert!(!st.admissibility().is_admissible());
        let u0 = [C64::new(1.0, 0.0)];
        assert!(matches!(
            rexi_run(&st, &u0, 3, false, |_, _, _| {}),
            Err(Error::Inadmissible { .. })
        ));
        let mut seen = Vec::new();
        let rep = rexi_run(&st, &u0, 3, true, |k, t, _| seen.push((k, t))).unwrap();
        assert!(rep.admissibility_overridden);
        assert_eq!(seen, vec![(0, 0.0), (1, 1.0), (2, 2.0), (3, 3.0)]);
        let none = rexi_run(&st, &u0, 0, true, |_, _, _| {}).unwrap();
        assert_eq!(none.state, u0.to_vec());
    }

    #[test]
    fn singular_shift_named() {
        // τA - σ iB = 0 when σ = -iτω
        let s = scalar(2.0);
        let p = PartialFractionApproximation::new(
            vec![C64::new(-1.0, 0.0), C64::new(0.0, -2.0)],
            vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)],
            1.0,
        )
        .unwrap();
        let err = RexiStepper::prepare(&s, &p, 1.0, 2.0, None).unwrap_err();
        assert!(matches!(err, Error::SingularShift { index: 1 }), "{err:?}");
    }
}
