//! Rational functions in partial fraction form `r(z) = Σ β_j / (z - σ_j)`.

use std::fmt::Write as _;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::C64;

/// Equispaced samples on `[-R1, R1]` used for the stored error certificate.
pub const SUP_ERROR_SAMPLES: usize = 100_000;

/// Relative distance to a shift below which evaluation reports a pole.
const POLE_TOL: f64 = 4.0 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractionApproximation {
    shifts: Vec<C64>,
    weights: Vec<C64>,
    r1: f64,
    sup_error: f64,
    stabilize_factor: Option<f64>,
}

impl PartialFractionApproximation {
    /// Builds an approximation with `sup_error` unset (zero); see
    /// [`with_measured_error`](Self::with_measured_error).
    pub fn new(shifts: Vec<C64>, weights: Vec<C64>, r1: f64) -> Result<Self> {
        Self::from_parts(shifts, weights, r1, 0.0, None)
    }

    /// Builds from stored values, validating the invariants.
    pub fn from_parts(
        shifts: Vec<C64>,
        weights: Vec<C64>,
        r1: f64,
        sup_error: f64,
        stabilize_factor: Option<f64>,
    ) -> Result<Self> {
        if shifts.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one shift is required".into(),
            ));
        }
        if shifts.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: shifts.len(),
                found: weights.len(),
            });
        }
        if !(r1 > 0.0) || !r1.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "R1 must be positive, got {r1}"
            )));
        }
        if !(sup_error >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sup_error must be >= 0, got {sup_error}"
            )));
        }
        let finite = |c: &C64| c.re.is_finite() && c.im.is_finite();
        if !shifts.iter().chain(&weights).all(finite) {
            return Err(Error::InvalidArgument(
                "shifts and weights must be finite".into(),
            ));
        }
        for i in 0..shifts.len() {
            for j in 0..i {
                if shifts[i] == shifts[j] {
                    return Err(Error::InvalidArgument(format!(
                        "shifts {j} and {i} coincide"
                    )));
                }
            }
            let s = shifts[i];
            if s.re == 0.0 && s.im.abs() <= r1 {
                return Err(Error::ShiftOnInterval {
                    index: i,
                    re: s.re,
                    im: s.im,
                });
            }
        }
        if let Some(f) = stabilize_factor {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "stabilize factor must lie in (0, 1), got {f}"
                )));
            }
        }
        Ok(Self {
            shifts,
            weights,
            r1,
            sup_error,
            stabilize_factor,
        })
    }

    /// Replaces the stored certificate by `max |exp(ix) - r(ix)|` on
    /// `samples` equispaced points of `[-R1, R1]`.
    pub fn with_measured_error(mut self, samples: usize) -> Result<Self> {
        self.sup_error = self.sup_error_on_interval(|z| z.exp(), samples)?;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn shifts(&self) -> &[C64] {
        &self.shifts
    }

    pub fn weights(&self) -> &[C64] {
        &self.weights
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn sup_error(&self) -> f64 {
        self.sup_error
    }

    pub fn is_stabilized(&self) -> bool {
        self.stabilize_factor.is_some()
    }

    /// Product of all `(1 - ε)` factors applied so far.
    pub fn stabilize_factor(&self) -> Option<f64> {
        self.stabilize_factor
    }

    pub fn evaluate(&self, z: C64) -> Result<C64> {
        let mut acc = C64::default();
        for (j, (&s, &b)) in self.shifts.iter().zip(&self.weights).enumerate() {
            let d = z - s;
            if d.norm() <= POLE_TOL * s.norm().max(1.0) {
                return Err(Error::Pole { index: j });
            }
            acc += b / d;
        }
        Ok(acc)
    }

    /// `max |f(ix) - r(ix)|` over `samples` equispaced `x` in `[-R1, R1]`.
    pub fn sup_error_on_interval<F>(&self, f: F, samples: usize) -> Result<f64>
    where
        F: Fn(C64) -> C64,
    {
        self.max_on_interval(self.r1, samples, |z, r| (f(z) - r).norm())
    }

    /// `max (|r(ix)| - 1)` over `samples` equispaced `x` in `[-half, half]`.
    pub fn max_deviation_on_interval(&self, half: f64, samples: usize) -> Result<f64> {
        self.max_on_interval(half, samples, |_, r| r.norm() - 1.0)
    }

    fn max_on_interval<F>(&self, half: f64, samples: usize, measure: F) -> Result<f64>
    where
        F: Fn(C64, C64) -> f64,
    {
        if samples < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 samples, got {samples}"
            )));
        }
        let mut worst = f64::NEG_INFINITY;
        for k in 0..samples {
            let x = -half + 2.0 * half * k as f64 / (samples - 1) as f64;
            let z = C64::new(0.0, x);
            worst = worst.max(measure(z, self.evaluate(z)?));
        }
        Ok(worst)
    }

    /// Copy with every weight scaled by `1 - eps` and the certificate
    /// re-measured.
    pub fn stabilize(&self, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "stabilization epsilon must lie in (0, 1), got {eps}"
            )));
        }
        let scale = 1.0 - eps;
        let out = Self {
            shifts: self.shifts.clone(),
            weights: self.weights.iter().map(|b| b * scale).collect(),
            r1: self.r1,
            sup_error: self.sup_error,
            stabilize_factor: Some(self.stabilize_factor.unwrap_or(1.0) * scale),
        };
        out.with_measured_error(SUP_ERROR_SAMPLES)
    }

    /// `|r(z)| - 1`; negative inside the stability domain.
    pub fn stability_indicator(&self, z: C64) -> Result<f64> {
        Ok(self.evaluate(z)?.norm() - 1.0)
    }

    /// JSON with keys in the fixed order `K, R1, shifts, weights, sup_error,
    /// stabilized, stabilize_factor`, numbers with 17 significant digits.
    pub fn to_json(&self) -> String {
        let num = |x: f64| format!("{x:.16e}");
        let pairs = |v: &[C64]| {
            let items: Vec<String> = v
                .iter()
                .map(|c| format!("[{}, {}]", num(c.re), num(c.im)))
                .collect();
            format!("[\n    {}\n  ]", items.join(",\n    "))
        };
        let mut s = String::new();
        s.push_str("{\n");
        let _ = writeln!(s, "  \"K\": {},", self.len());
        let _ = writeln!(s, "  \"R1\": {},", num(self.r1));
        let _ = writeln!(s, "  \"shifts\": {},", pairs(&self.shifts));
        let _ = writeln!(s, "  \"weights\": {},", pairs(&self.weights));
        let _ = writeln!(s, "  \"sup_error\": {},", num(self.sup_error));
        let _ = writeln!(s, "  \"stabilized\": {},", self.is_stabilized());
        let factor = self.stabilize_factor.map_or("null".to_string(), num);
        let _ = writeln!(s, "  \"stabilize_factor\": {factor}");
        s.push_str("}\n");
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        let field = |key: &str| {
            v.get(key)
                .ok_or_else(|| ser(format!("missing key \"{key}\"")))
        };
        let number = |key: &str| {
            field(key)?
                .as_f64()
                .ok_or_else(|| ser(format!("\"{key}\" is not a number")))
        };
        let k = field("K")?
            .as_u64()
            .ok_or_else(|| ser("\"K\" is not a nonnegative integer".into()))?
            as usize;
        let r1 = number("R1")?;
        let shifts = complex_list(field("shifts")?, "shifts")?;
        let weights = complex_list(field("weights")?, "weights")?;
        if shifts.len() != k {
            return Err(ser(format!("K = {k} but {} shifts", shifts.len())));
        }
        let sup_error = number("sup_error")?;
        let stabilized = field("stabilized")?
            .as_bool()
            .ok_or_else(|| ser("\"stabilized\" is not a boolean".into()))?;
        let factor = match field("stabilize_factor")? {
            Value::Null => None,
            other => Some(
                other
                    .as_f64()
                    .ok_or_else(|| ser("\"stabilize_factor\" is not a number".into()))?,
            ),
        };
        if stabilized != factor.is_some() {
            return Err(ser(
                "\"stabilized\" disagrees with \"stabilize_factor\"".into()
            ));
        }
        Self::from_parts(shifts, weights, r1, sup_error, factor)
    }
}

fn ser(msg: String) -> Error {
    Error::Serialization(msg)
}

fn complex_list(v: &Value, key: &str) -> Result<Vec<C64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| ser(format!("\"{key}\" is not an array")))?;
    arr.iter()
        .enumerate()
        .map(|(i, item)| {
            let pair = item.as_array().filter(|p| p.len() == 2);
            match pair.map(|p| (p[0].as_f64(), p[1].as_f64())) {
                Some((Some(re), Some(im))) => Ok(C64::new(re, im)),
                _ => Err(ser(format!("\"{key}\"[{i}] is not a [re, im] pair"))),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sample() -> PartialFractionApproximation {
        PartialFractionApproximation::from_parts(
            vec![c(-1.0, 0.5), c(-2.0, -3.0)],
            vec![c(0.25, -0.1), c(1.5, 2.0)],
            2.0,
            1.25e-3,
            None,
        )
        .unwrap()
    }

    #[test]
    fn single_term() {
        let p =
            PartialFractionApproximation::new(vec![c(-1.0, 0.0)], vec![c(1.0, 0.0)], 1.0).unwrap();
        assert!((p.evaluate(C64::default()).unwrap() - 1.0).norm() < 1e-16);
    }

    #[test]
    fn pole_reported() {
        let p = sample();
        assert!(matches!(
            p.evaluate(c(-2.0, -3.0)),
            Err(Error::Pole { index: 1 })
        ));
        assert!(p.stability_indicator(c(-1.0, 0.5)).is_err());
    }

    #[test]
    fn invariants_enforced() {
        let bad = PartialFractionApproximation::new(vec![c(-1.0, 0.0)], vec![], 1.0);
        assert!(matches!(bad, Err(Error::DimensionMismatch { .. })));
        let on = PartialFractionApproximation::new(vec![c(0.0, 0.5)], vec![c(1.0, 0.0)], 1.0);
        assert!(matches!(on, Err(Error::ShiftOnInterval { .. })));
        let dup = PartialFractionApproximation::new(
            vec![c(-1.0, 0.0), c(-1.0, 0.0)],
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            1.0,
        );
        assert!(dup.is_err());
    }

    #[test]
    fn self_comparison_is_zero() {
        let p = sample();
        let e = p
            .sup_error_on_interval(|z| p.evaluate(z).unwrap(), 101)
            .unwrap();
        assert_eq!(e, 0.0);
    }

    #[test]
    fn stabilize_scales_weights_only() {
        let p = sample();
        let s = p.stabilize(0.25).unwrap();
        assert_eq!(s.shifts(), p.shifts());
        assert_eq!(s.stabilize_factor(), Some(0.75));
        let z = c(0.3, 0.7);
        let ratio = s.evaluate(z).unwrap() / p.evaluate(z).unwrap();
        assert!((ratio - 0.75).norm() < 1e-15);
        assert!(p.stabilize(0.0).is_err());
        assert!(p.stabilize(1.0).is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let p = sample().stabilize(1e-3).unwrap();
        let text = p.to_json();
        let keys = [
            "\"K\"",
            "\"R1\"",
            "\"shifts\"",
            "\"weights\"",
            "\"sup_error\"",
            "\"stabilized\"",
            "\"stabilize_factor\"",
        ];
        let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        let back = PartialFractionApproximation::from_json(&text).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn json_errors_name_the_field() {
        let text = sample().to_json().replace("\"R1\"", "\"R2\"");
        let err = PartialFractionApproximation::from_json(&text).unwrap_err();
        assert!(err.to_string().contains("R1"), "{err}");
        assert!(PartialFractionApproximation::from_json("{").is_err());
    }
}
