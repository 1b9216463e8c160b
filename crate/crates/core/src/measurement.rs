//! Synthetic `P` matrix series.
//!
//! For a rigid body with body angular velocity `w̄` and acceleration `w̄′`, the
//! matrix recovered from an accelerometer array is
//! `P = (∗w̄)² + ∗(w̄′)`: its symmetric part is the square of the angular
//! velocity matrix and its skew part carries the angular acceleration. Here `P`
//! is synthesised directly from a [`MotionProfile`] and corrupted with i.i.d.
//! Gaussian noise on every entry.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{ast, fmt_f64, Matrix, Vector3};
use crate::motion::MotionProfile;

/// Default sampling rate, samples per unit time.
pub const DEFAULT_SAMPLE_RATE: f64 = 1600.0;

pub const SERIES_HEADER: [&str; 13] = [
    "tau", "p11", "p12", "p13", "p21", "p22", "p23", "p31", "p32", "p33", "w1", "w2", "w3",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    pub sigma: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSeries {
    pub times: Vec<f64>,
    pub p_tilde: Vec<Matrix>,
    /// Ground-truth body angular velocity; absent for series read without it.
    pub truth_w: Option<Vec<Vector3>>,
    /// Noise parameters the series was generated with, when known.
    pub noise: Option<NoiseModel>,
}

/// `0, 1/rate, 2/rate, …` up to `round(duration·rate)/rate`.
pub fn uniform_grid(duration: f64, rate: f64) -> Result<Vec<f64>> {
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::InvalidGrid(format!("duration must be positive, got {duration}")));
    }
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::InvalidGrid(format!("sample rate must be positive, got {rate}")));
    }
    let steps = (duration * rate).round() as usize;
    Ok((0..=steps).map(|i| i as f64 / rate).collect())
}

fn validate_grid(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidGrid("no instants".into()));
    }
    if let Some(i) = times.iter().position(|t| !t.is_finite()) {
        return Err(Error::InvalidGrid(format!("non-finite time at index {i}")));
    }
    if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!(
            "times must be strictly increasing (index {} → {})",
            i,
            i + 1
        )));
    }
    Ok(())
}

/// Noise-free `P(τ) = (∗w̄)² + ∗(w̄′)`.
pub fn exact_p(profile: &MotionProfile, tau: f64) -> Matrix {
    let w = ast(&profile.body_angular_velocity(tau));
    let acc = ast(&profile.body_angular_accel(tau));
    &(&w * &w) + &acc
}

/// Synthesises a series on `times` with entrywise noise of standard deviation
/// `noise_sigma`.
///
/// The noise at instant `i` is drawn from its own ChaCha stream `i` under
/// `seed`, so any instant can be regenerated independently of the others.
pub fn generate(profile: &MotionProfile, times: &[f64], noise_sigma: f64, seed: u64) -> Result<MeasurementSeries> {
    validate_grid(times)?;
    if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise sigma must be non-negative, got {noise_sigma}"
        )));
    }
    let mut p_tilde = Vec::with_capacity(times.len());
    let mut truth_w = Vec::with_capacity(times.len());
    for (i, &tau) in times.iter().enumerate() {
        let mut p = exact_p(profile, tau);
        if noise_sigma > 0.0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            for r in 0..3 {
                for c in 0..3 {
                    let e: f64 = StandardNormal.sample(&mut rng);
                    p[(r, c)] += noise_sigma * e;
                }
            }
        }
        p_tilde.push(p);
        truth_w.push(profile.body_angular_velocity(tau));
    }
    Ok(MeasurementSeries {
        times: times.to_vec(),
        p_tilde,
        truth_w: Some(truth_w),
        noise: Some(NoiseModel {
            sigma: noise_sigma,
            seed,
        }),
    })
}

impl MeasurementSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Series CSV: header then one row per instant. Truth columns are written
    /// only when present.
    pub fn to_csv_string(&self) -> String {
        let cols = if self.truth_w.is_some() { 13 } else { 10 };
        let mut out = SERIES_HEADER[..cols].join(",");
        out.push('\n');
        for (i, tau) in self.times.iter().enumerate() {
            out.push_str(&fmt_f64(*tau));
            for x in self.p_tilde[i].as_slice() {
                let _ = write!(out, ",{}", fmt_f64(*x));
            }
            if let Some(truth) = &self.truth_w {
                for x in truth[i].0 {
                    let _ = write!(out, ",{}", fmt_f64(x));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty series file"))?;
        let fields: Vec<&str> = header.split(',').map(str::trim).collect();
        let with_truth = match fields.len() {
            13 if fields == SERIES_HEADER => true,
            10 if fields == SERIES_HEADER[..10] => false,
            _ => {
                return Err(Error::parse(
                    1,
                    format!("expected header `{}`", SERIES_HEADER.join(",")),
                ))
            }
        };
        let width = fields.len();

        let mut times = Vec::new();
        let mut p_tilde = Vec::new();
        let mut truth = Vec::new();
        for (lineno, line) in lines {
            let values = line
                .split(',')
                .map(|f| {
                    let f = f.trim();
                    f.parse::<f64>()
                        .map_err(|e| Error::parse(lineno + 1, format!("`{f}`: {e}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            if values.len() != width {
                return Err(Error::parse(
                    lineno + 1,
                    format!("expected {width} fields, got {}", values.len()),
                ));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::parse(lineno + 1, "non-finite value"));
            }
            times.push(values[0]);
            p_tilde.push(Matrix::from_fn(3, |r, c| values[1 + 3 * r + c]));
            if with_truth {
                truth.push(Vector3::new(values[10], values[11], values[12]));
            }
        }
        validate_grid(&times)?;
        Ok(MeasurementSeries {
            times,
            p_tilde,
            truth_w: with_truth.then_some(truth),
            noise: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_norm, skew_part, star, sym_part};
    use crate::motion::ProfileKind;
    use crate::skew_square::is_member;
    use crate::spectral::eig_symmetric;

    #[test]
    fn constant_profile_about_e3() {
        let p = MotionProfile::new(ProfileKind::Constant, 2.0, 1.0, Vector3::new(0.0, 0.0, 1.0)).unwrap();
        let s = generate(&p, &[0.0, 0.5, 1.0], 0.0, 0).unwrap();
        for m in &s.p_tilde {
            assert_eq!(*m, Matrix::from_diagonal(&[-4.0, -4.0, 0.0]));
        }
    }

    #[test]
    fn noiseless_structure() {
        for kind in [ProfileKind::Punctuated, ProfileKind::Constant, ProfileKind::Oscillatory] {
            let p = MotionProfile::reference(kind);
            let times = uniform_grid(p.tau1(), 50.0).unwrap();
            let s = generate(&p, &times, 0.0, 0).unwrap();
            for (i, tau) in times.iter().enumerate() {
                let b = sym_part(&s.p_tilde[i]);
                assert!(is_member(&b, 1e-9));
                let acc = star(&skew_part(&s.p_tilde[i])).unwrap();
                assert!((acc - p.body_angular_accel(*tau)).norm() <= 1e-9);
                let rate2 = p.theta_dot(*tau).powi(2);
                let lambda = eig_symmetric(&b).unwrap().lambda;
                for (g, w) in lambda.iter().zip([0.0, -rate2, -rate2]) {
                    assert!((g - w).abs() <= 1e-8 * (1.0 + rate2), "{kind:?} τ={tau}: {lambda:?}");
                }
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let p = MotionProfile::reference(ProfileKind::Punctuated);
        let times = uniform_grid(1.0, 100.0).unwrap();
        let a = generate(&p, &times, 0.5, 42).unwrap();
        let b = generate(&p, &times, 0.5, 42).unwrap();
        let c = generate(&p, &times, 0.5, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.p_tilde, c.p_tilde);
        // A shorter grid reproduces the same per-instant draws.
        let short = generate(&p, &times[..10], 0.5, 42).unwrap();
        assert_eq!(short.p_tilde[..], a.p_tilde[..10]);
    }

    #[test]
    fn noise_energy() {
        let p = MotionProfile::reference(ProfileKind::Oscillatory);
        let times = uniform_grid(10.0, 1600.0).unwrap();
        let sigma = 0.3;
        let clean = generate(&p, &times, 0.0, 0).unwrap();
        let noisy = generate(&p, &times, sigma, 9).unwrap();
        let mean: f64 = clean
            .p_tilde
            .iter()
            .zip(&noisy.p_tilde)
            .map(|(a, b)| frobenius_norm(&(b - a)).powi(2))
            .sum::<f64>()
            / times.len() as f64;
        let want = 9.0 * sigma * sigma;
        assert!((mean - want).abs() <= 0.2 * want, "{mean} vs {want}");
    }

    #[test]
    fn invalid_inputs() {
        let p = MotionProfile::reference(ProfileKind::Constant);
        assert!(matches!(generate(&p, &[0.0, 0.0], 0.0, 0), Err(Error::InvalidGrid(_))));
        assert!(matches!(generate(&p, &[1.0, 0.5], 0.0, 0), Err(Error::InvalidGrid(_))));
        assert!(matches!(generate(&p, &[], 0.0, 0), Err(Error::InvalidGrid(_))));
        assert!(generate(&p, &[0.0, f64::NAN], 0.0, 0).is_err());
        assert!(matches!(generate(&p, &[0.0], -1.0, 0), Err(Error::InvalidParameter(_))));
        assert!(uniform_grid(0.0, 10.0).is_err());
        assert!(uniform_grid(1.0, 0.0).is_err());
        assert_eq!(uniform_grid(1.0, 4.0).unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn csv_round_trip() {
        let p = MotionProfile::reference(ProfileKind::Punctuated);
        let times = uniform_grid(0.05, 1600.0).unwrap();
        let s = generate(&p, &times, 0.1, 3).unwrap();
        let back = MeasurementSeries::from_csv_str(&s.to_csv_string()).unwrap();
        assert_eq!(back.times, s.times);
        assert_eq!(back.p_tilde, s.p_tilde);
        assert_eq!(back.truth_w, s.truth_w);
        assert!(back.noise.is_none());

        let mut bare = s.clone();
        bare.truth_w = None;
        let text = bare.to_csv_string();
        assert!(text.starts_with("tau,p11,p12,p13,p21,p22,p23,p31,p32,p33\n"));
        let back = MeasurementSeries::from_csv_str(&text).unwrap();
        assert!(back.truth_w.is_none());
        assert_eq!(back.p_tilde, s.p_tilde);
    }

    #[test]
    fn csv_errors() {
        assert!(MeasurementSeries::from_csv_str("").is_err());
        assert!(MeasurementSeries::from_csv_str("a,b\n1,2\n").is_err());
        let hdr = SERIES_HEADER[..10].join(",");
        assert!(MeasurementSeries::from_csv_str(&format!("{hdr}\n0,1,2\n")).is_err());
        assert!(MeasurementSeries::from_csv_str(&format!("{hdr}\n0,1,2,3,4,5,6,7,8,x\n")).is_err());
        let two = format!("{hdr}\n1,0,0,0,0,0,0,0,0,0\n0,0,0,0,0,0,0,0,0,0\n");
        assert!(matches!(
            MeasurementSeries::from_csv_str(&two),
            Err(Error::InvalidGrid(_))
        ));
    }
}
