//! Fixed-axis rotation profiles and their exact body kinematics.
//!
//! The body rotates about a fixed unit axis `n` by angle `θ(τ)`, with
//! `R(τ) = n⊗n + (I − n⊗n) cos θ + (∗n) sin θ` and no translation. The body
//! angular velocity is then `θ′ n` and the body angular acceleration `θ″ n`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{ast, Matrix, Vector3};

/// Odd harmonics kept in the truncated Fourier profiles.
const HARMONICS: [f64; 3] = [1.0, 3.0, 5.0];

const UNIT_AXIS_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileKind {
    /// Rate is a three-harmonic triangle wave between 0 and `ω_m`.
    Punctuated,
    /// Rate is `ω_m` throughout.
    Constant,
    /// Angle is a three-harmonic triangle-like oscillation, rate changes sign.
    Oscillatory,
}

impl ProfileKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProfileKind::Punctuated => "punctuated",
            ProfileKind::Constant => "constant",
            ProfileKind::Oscillatory => "oscillatory",
        }
    }

    /// Period used in the reference trials: 5.81 punctuated, 11.62 oscillatory.
    pub fn default_tau1(&self) -> f64 {
        match self {
            ProfileKind::Oscillatory => 11.62,
            _ => 5.81,
        }
    }
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProfileKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "punctuated" => Ok(ProfileKind::Punctuated),
            "constant" => Ok(ProfileKind::Constant),
            "oscillatory" => Ok(ProfileKind::Oscillatory),
            other => Err(Error::InvalidParameter(format!("unknown profile `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MotionProfile {
    kind: ProfileKind,
    omega_m: f64,
    tau1: f64,
    axis: Vector3,
}

/// Peak rate of the reference trials.
pub const DEFAULT_OMEGA_M: f64 = 31.41;
/// Rotation axis of the reference punctuated trial, as printed (not unit length).
pub const DEFAULT_AXIS: Vector3 = Vector3::new(-0.27, -0.28, -0.92);

impl MotionProfile {
    /// Builds a profile; the axis is normalised to unit length here.
    pub fn new(kind: ProfileKind, omega_m: f64, tau1: f64, axis: Vector3) -> Result<Self> {
        if !(omega_m > 0.0 && omega_m.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "omega_m must be positive, got {omega_m}"
            )));
        }
        if !(tau1 > 0.0 && tau1.is_finite()) {
            return Err(Error::InvalidParameter(format!("tau1 must be positive, got {tau1}")));
        }
        let axis = axis.normalized().ok_or(Error::DegenerateAxis)?;
        Ok(MotionProfile {
            kind,
            omega_m,
            tau1,
            axis,
        })
    }

    /// Reference-trial parameters for `kind`.
    pub fn reference(kind: ProfileKind) -> Self {
        MotionProfile::new(kind, DEFAULT_OMEGA_M, kind.default_tau1(), DEFAULT_AXIS)
            .expect("reference parameters are valid")
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn omega_m(&self) -> f64 {
        self.omega_m
    }

    pub fn tau1(&self) -> f64 {
        self.tau1
    }

    pub fn axis(&self) -> Vector3 {
        self.axis
    }

    pub fn theta(&self, tau: f64) -> f64 {
        let (w, t1) = (self.omega_m, self.tau1);
        match self.kind {
            ProfileKind::Punctuated => {
                let sum: f64 = HARMONICS
                    .iter()
                    .map(|n| (2.0 * n * PI * tau / t1).sin() / n.powi(3))
                    .sum();
                0.5 * w * tau - 2.0 * w * t1 / PI.powi(3) * sum
            }
            ProfileKind::Constant => w * tau,
            ProfileKind::Oscillatory => {
                let sum: f64 = HARMONICS
                    .iter()
                    .map(|n| oscillatory_sign(*n) * (2.0 * n * PI * tau / t1).cos() / n.powi(3))
                    .sum();
                w * t1 / 8.0 + 4.0 * w * t1 / PI.powi(3) * sum
            }
        }
    }

    pub fn theta_dot(&self, tau: f64) -> f64 {
        let (w, t1) = (self.omega_m, self.tau1);
        match self.kind {
            ProfileKind::Punctuated => {
                let sum: f64 = HARMONICS
                    .iter()
                    .map(|n| (2.0 * n * PI * tau / t1).cos() / (n * n))
                    .sum();
                0.5 * w - 4.0 * w / (PI * PI) * sum
            }
            ProfileKind::Constant => w,
            ProfileKind::Oscillatory => {
                let sum: f64 = HARMONICS
                    .iter()
                    .map(|n| oscillatory_sign(*n) * (2.0 * n * PI * tau / t1).sin() / (n * n))
                    .sum();
                -8.0 * w / (PI * PI) * sum
            }
        }
    }

    pub fn theta_ddot(&self, tau: f64) -> f64 {
        let (w, t1) = (self.omega_m, self.tau1);
        match self.kind {
            ProfileKind::Punctuated => {
                let sum: f64 = HARMONICS.iter().map(|n| (2.0 * n * PI * tau / t1).sin() / n).sum();
                8.0 * w / (PI * t1) * sum
            }
            ProfileKind::Constant => 0.0,
            ProfileKind::Oscillatory => {
                let sum: f64 = HARMONICS
                    .iter()
                    .map(|n| oscillatory_sign(*n) * (2.0 * n * PI * tau / t1).cos() / n)
                    .sum();
                -16.0 * w / (PI * t1) * sum
            }
        }
    }

    pub fn rotation(&self, tau: f64) -> Matrix {
        rodrigues(&self.axis, self.theta(tau)).expect("profile axis is unit length")
    }

    /// `w̄(τ) = θ′(τ) n`.
    pub fn body_angular_velocity(&self, tau: f64) -> Vector3 {
        self.axis.scale(self.theta_dot(tau))
    }

    /// `w̄′(τ) = θ″(τ) n`.
    pub fn body_angular_accel(&self, tau: f64) -> Vector3 {
        self.axis.scale(self.theta_ddot(tau))
    }
}

/// `(−1)^((n+1)/2)` for odd `n`.
fn oscillatory_sign(n: f64) -> f64 {
    if ((n as i64 + 1) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Rotation by `theta` about a unit `axis`.
pub fn rodrigues(axis: &Vector3, theta: f64) -> Result<Matrix> {
    let norm = axis.norm();
    if !((norm - 1.0).abs() <= UNIT_AXIS_TOL) {
        return Err(Error::NotUnitAxis { norm });
    }
    let (s, c) = theta.sin_cos();
    let k = ast(axis);
    Ok(Matrix::from_fn(3, |i, j| {
        let nn = axis[i] * axis[j];
        let id = if i == j { 1.0 } else { 0.0 };
        nn + (id - nn) * c + k[(i, j)] * s
    }))
}
