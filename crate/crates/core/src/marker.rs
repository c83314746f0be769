//! Logistic behavioral-marker model.
//!
//! A behavioral marker is a scalar in (0, 1) quantifying how much
//! (un)ethical disposition an individual has accumulated by a given age.
//! The curve is a logistic in age: saturated near zero before a threshold
//! age, rising around the midpoint age, and saturating near one once
//! development ceases.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MarkerError {
    #[error("age must be finite and non-negative, got {0}")]
    InvalidAge(f64),
    #[error("midpoint age must be finite and non-negative, got {0}")]
    InvalidMidpoint(f64),
    #[error("{name} must be finite and > 0, got {value}")]
    NonPositiveFactor { name: &'static str, value: f64 },
    #[error("age range requires start < end, got [{start}, {end}]")]
    EmptyRange { start: f64, end: f64 },
    #[error("curve needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
}

/// Shape parameters of the marker curve.
///
/// `tf` (transition factor) sets the age at which the marker starts to
/// rise; `cf` (circumstantial factor) controls how gradual the rise is.
/// Larger `cf` means a smoother transition. The two only ever enter the
/// model through their product, but both are kept because they quantify
/// different influences on an individual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkerParams {
    a0: f64,
    tf: f64,
    cf: f64,
}

impl MarkerParams {
    pub fn new(a0: f64, tf: f64, cf: f64) -> Result<Self, MarkerError> {
        if !a0.is_finite() || a0 < 0.0 {
            return Err(MarkerError::InvalidMidpoint(a0));
        }
        if !tf.is_finite() || tf <= 0.0 {
            return Err(MarkerError::NonPositiveFactor {
                name: "transition factor",
                value: tf,
            });
        }
        if !cf.is_finite() || cf <= 0.0 {
            return Err(MarkerError::NonPositiveFactor {
                name: "circumstantial factor",
                value: cf,
            });
        }
        Ok(Self { a0, tf, cf })
    }

    pub fn midpoint_age(&self) -> f64 {
        self.a0
    }

    pub fn transition_factor(&self) -> f64 {
        self.tf
    }

    pub fn circumstantial_factor(&self) -> f64 {
        self.cf
    }
}

/// A sampled marker curve: `values[i]` is the marker at `ages[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkerCurve {
    pub ages: Vec<f64>,
    pub values: Vec<f64>,
}

impl MarkerCurve {
    /// Largest forward-difference slope over the sampled grid.
    pub fn max_slope(&self) -> f64 {
        self.ages
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(a, v)| (v[1] - v[0]) / (a[1] - a[0]))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Marker value at one age: `1 / (1 + exp((a0 - age) / (tf * cf)))`.
///
/// The exponent is formed before exponentiation. When it is large enough
/// to overflow `exp`, the result saturates cleanly at the corresponding
/// bound (0 for large positive exponents, 1 for large negative ones).
pub fn marker_value(age: f64, p: &MarkerParams) -> Result<f64, MarkerError> {
    if !age.is_finite() || age < 0.0 {
        return Err(MarkerError::InvalidAge(age));
    }
    let exponent = (p.a0 - age) / (p.tf * p.cf);
    // exp(+inf) -> inf and 1/(1+inf) -> 0, so saturation needs no clamp.
    Ok(1.0 / (1.0 + exponent.exp()))
}

/// Uniformly sampled marker curve over `[age_start, age_end]`, inclusive
/// of both endpoints.
pub fn marker_curve(
    age_start: f64,
    age_end: f64,
    n_samples: usize,
    p: &MarkerParams,
) -> Result<MarkerCurve, MarkerError> {
    if n_samples < 2 {
        return Err(MarkerError::TooFewSamples(n_samples));
    }
    if !(age_start < age_end) {
        return Err(MarkerError::EmptyRange {
            start: age_start,
            end: age_end,
        });
    }
    let step = (age_end - age_start) / (n_samples - 1) as f64;
    let mut ages = Vec::with_capacity(n_samples);
    let mut values = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        // Force the last sample onto the endpoint exactly.
        let age = if i + 1 == n_samples {
            age_end
        } else {
            age_start + i as f64 * step
        };
        ages.push(age);
        values.push(marker_value(age, p)?);
    }
    Ok(MarkerCurve { ages, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent exponential oracle: plain Taylor summation of exp(x).
    /// All terms are positive for x >= 0, so the sum is well conditioned;
    /// negative arguments go through 1/exp(-x).
    fn taylor_exp(x: f64) -> f64 {
        if x < 0.0 {
            return 1.0 / taylor_exp(-x);
        }
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut n = 1.0;
        while term > sum * 1e-20 {
            term *= x / n;
            sum += term;
            n += 1.0;
        }
        sum
    }

    fn params(a0: f64, tf: f64, cf: f64) -> MarkerParams {
        MarkerParams::new(a0, tf, cf).unwrap()
    }

    #[test]
    fn midpoint_is_exactly_half() {
        let p = params(50.0, 0.1, 70.0);
        assert_eq!(marker_value(50.0, &p).unwrap(), 0.5);
    }

    #[test]
    fn value_matches_exponential_oracle() {
        // age=57, a0=50, tf=0.1, cf=70 -> exponent -1 -> 1/(1+e^-1)
        let p = params(50.0, 0.1, 70.0);
        let expected = 1.0 / (1.0 + taylor_exp(-1.0));
        assert!((expected - 0.731059).abs() < 1e-6);
        let got = marker_value(57.0, &p).unwrap();
        assert!((got - expected).abs() < 1e-12, "got {got}, want {expected}");
    }

    #[test]
    fn deep_saturation_at_zero() {
        // age=0, a0=50, tf=0.1, cf=10 -> exponent 50 -> 1/(1+e^50)
        let p = params(50.0, 0.1, 10.0);
        let expected = 1.0 / (1.0 + taylor_exp(50.0));
        let got = marker_value(0.0, &p).unwrap();
        assert!(got < 1e-12, "saturated regime, got {got}");
        assert!((got - expected).abs() <= 1e-10 * expected.abs().max(1e-300));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(MarkerParams::new(50.0, 0.0, 70.0).is_err());
        assert!(MarkerParams::new(50.0, 0.1, -1.0).is_err());
        assert!(MarkerParams::new(-1.0, 0.1, 70.0).is_err());
        assert!(MarkerParams::new(f64::NAN, 0.1, 70.0).is_err());
        let p = params(50.0, 0.1, 70.0);
        assert_eq!(
            marker_value(f64::INFINITY, &p),
            Err(MarkerError::InvalidAge(f64::INFINITY))
        );
        assert!(marker_value(-3.0, &p).is_err());
    }

    #[test]
    fn curve_three_samples_hits_midpoint() {
        let p = params(50.0, 0.1, 70.0);
        let c = marker_curve(0.0, 100.0, 3, &p).unwrap();
        assert_eq!(c.ages, vec![0.0, 50.0, 100.0]);
        assert_eq!(c.values[1], 0.5);
        assert_eq!(c.values.len(), 3);
    }

    #[test]
    fn curve_rejects_bad_arguments() {
        let p = params(50.0, 0.1, 70.0);
        assert_eq!(
            marker_curve(0.0, 100.0, 1, &p),
            Err(MarkerError::TooFewSamples(1))
        );
        assert!(marker_curve(80.0, 20.0, 10, &p).is_err());
    }

    #[test]
    fn smaller_cf_crosses_high_threshold_earlier() {
        // Sharper transition (cf=20) reaches 0.9 at a smaller age than the
        // smoother cf=70 curve.
        let sharp = marker_curve(0.0, 100.0, 101, &params(50.0, 0.1, 20.0)).unwrap();
        let smooth = marker_curve(0.0, 100.0, 101, &params(50.0, 0.1, 70.0)).unwrap();
        let first_above = |c: &MarkerCurve| {
            c.values
                .iter()
                .position(|&v| v > 0.9)
                .map(|i| c.ages[i])
                .unwrap()
        };
        assert!(first_above(&sharp) < first_above(&smooth));
    }

    #[test]
    fn smaller_tf_delays_onset() {
        // tf=0.02 keeps the marker below 0.01 until a larger age than tf=0.1.
        let late = marker_curve(0.0, 100.0, 101, &params(50.0, 0.02, 50.0)).unwrap();
        let early = marker_curve(0.0, 100.0, 101, &params(50.0, 0.1, 50.0)).unwrap();
        let onset = |c: &MarkerCurve| {
            c.values
                .iter()
                .position(|&v| v > 0.01)
                .map(|i| c.ages[i])
                .unwrap()
        };
        assert!(onset(&late) > onset(&early));
    }
}
