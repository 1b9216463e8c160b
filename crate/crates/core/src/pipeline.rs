//! Angular-velocity estimators working on a [`MeasurementSeries`].
//!
//! The square-root estimator treats each instant on its own: project the
//! symmetric part `B̃` of `P̃` onto the skew squares, take the skew square root
//! of the projection, and pick the sign of the root that agrees with a running
//! sign reference. Errors therefore stay bounded in time.
//!
//! The integration baseline instead integrates the angular acceleration read
//! off the skew part of `P̃`, so measurement noise accumulates as a random walk.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{ast, fmt_f64, frobenius_inner, frobenius_norm, skew_part, star, sym_part, Matrix, Vector3};
use crate::measurement::MeasurementSeries;
use crate::skew_square::{approximate, skew_square_root};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    SqrtAo,
    AoIntegration,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::SqrtAo => "sqrt_ao",
            Method::AoIntegration => "ao",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqrt_ao" | "sqrt-ao" => Ok(Method::SqrtAo),
            "ao" | "ao_integration" => Ok(Method::AoIntegration),
            other => Err(Error::InvalidParameter(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateSeries {
    pub times: Vec<f64>,
    pub w_est: Vec<Vector3>,
    pub method: Method,
}

impl EstimateSeries {
    /// CSV with header `tau,w1,w2,w3,method`.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("tau,w1,w2,w3,method\n");
        for (tau, w) in self.times.iter().zip(&self.w_est) {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                fmt_f64(*tau),
                fmt_f64(w[0]),
                fmt_f64(w[1]),
                fmt_f64(w[2]),
                self.method
            );
        }
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim() == "tau,w1,w2,w3,method" => {}
            _ => return Err(Error::parse(1, "expected header `tau,w1,w2,w3,method`")),
        }
        let mut times = Vec::new();
        let mut w_est = Vec::new();
        let mut method = None;
        for (lineno, line) in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 5 {
                return Err(Error::parse(
                    lineno + 1,
                    format!("expected 5 fields, got {}", fields.len()),
                ));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::parse(lineno + 1, format!("`{s}`: {e}")))
            };
            times.push(num(fields[0])?);
            w_est.push(Vector3::new(num(fields[1])?, num(fields[2])?, num(fields[3])?));
            let m: Method = fields[4]
                .parse()
                .map_err(|e: Error| Error::parse(lineno + 1, e.to_string()))?;
            if method.is_some_and(|prev| prev != m) {
                return Err(Error::parse(lineno + 1, "mixed methods in one file"));
            }
            method = Some(m);
        }
        let method = method.ok_or_else(|| Error::parse(2, "no rows"))?;
        Ok(EstimateSeries { times, w_est, method })
    }
}

/// Projection of one `B̃` onto the 3×3 skew squares.
#[derive(Clone, Debug)]
pub struct Projection {
    /// `B̂ = N diag(0, μ*, μ*) Nᵀ`.
    pub b_hat: Matrix,
    /// Eigenvectors of `B̃`; columns 2 and 3 belong to the two smallest eigenvalues.
    pub n_factor: Matrix,
    pub mu_star: f64,
}

/// Nearest skew square to a 3×3 `B̃` (its symmetric part, if it is not symmetric).
pub fn project_b(b_tilde: &Matrix) -> Result<Projection> {
    if b_tilde.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            actual: b_tilde.dim(),
        });
    }
    let r = approximate(b_tilde)?;
    Ok(Projection {
        b_hat: r.u_star,
        n_factor: r.n_factor,
        mu_star: r.mu_star[0],
    })
}

/// Angular velocity matrix from a projection:
/// `±N [[0,0,0],[0,0,−√−μ*],[0,√−μ*,0]] Nᵀ`.
///
/// The `+` branch is taken unless it has negative Frobenius inner product with
/// `prev`. `μ* = 0` gives the zero matrix.
pub fn extract_w(n_factor: &Matrix, mu_star: f64, prev: Option<&Matrix>) -> Matrix {
    let r = (-mu_star).max(0.0).sqrt();
    if r == 0.0 {
        return Matrix::zeros(3);
    }
    let mut block = Matrix::zeros(3);
    block[(1, 2)] = -r;
    block[(2, 1)] = r;
    let w = block.conjugate_by(n_factor);
    // Exact skew symmetry; the conjugation leaves round-off on the diagonal.
    let w = skew_part(&w);
    match prev {
        Some(p) if frobenius_inner(&w, p).expect("both 3×3") < 0.0 => -&w,
        _ => w,
    }
}

/// Tuning for [`run_sqrt_ao_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqrtAoOptions {
    /// A root re-anchors the sign reference only if `−μ* ≥ anchor_ratio · floor`,
    /// where `floor` is the median projection residual `‖B̃ − B̂‖` of the series.
    pub anchor_ratio: f64,
}

impl Default for SqrtAoOptions {
    fn default() -> Self {
        SqrtAoOptions { anchor_ratio: 10.0 }
    }
}

/// Runs the square-root estimator over `series` with default options.
pub fn run_sqrt_ao(series: &MeasurementSeries, w0: Vector3) -> Result<EstimateSeries> {
    run_sqrt_ao_with(series, w0, &SqrtAoOptions::default())
}

/// Runs the square-root estimator over `series`.
///
/// The magnitude and axis at each instant come from that instant alone; only
/// the sign of the root needs history. The sign reference starts at `ast(w0)`
/// and is carried between instants by integrating the skew part of `P̃`
/// (trapezoidal rule), so it survives passages through zero rate. Whenever a
/// root is well above the noise floor the reference is reset to it, which keeps
/// the integration drift from ever accumulating.
pub fn run_sqrt_ao_with(series: &MeasurementSeries, w0: Vector3, opts: &SqrtAoOptions) -> Result<EstimateSeries> {
    if !(opts.anchor_ratio >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "anchor ratio must be >= 0, got {}",
            opts.anchor_ratio
        )));
    }
    let mut projections = Vec::with_capacity(series.len());
    let mut residuals = Vec::with_capacity(series.len());
    for p in &series.p_tilde {
        let b = sym_part(p);
        let proj = project_b(&b)?;
        residuals.push(frobenius_norm(&(&b - &proj.b_hat)));
        projections.push(proj);
    }
    residuals.sort_by(f64::total_cmp);
    let floor = residuals.get(residuals.len() / 2).copied().unwrap_or(0.0);
    let threshold = opts.anchor_ratio * floor;

    let mut reference = ast(&w0);
    let mut prev_accel: Option<Matrix> = None;
    let mut w_est = Vec::with_capacity(series.len());
    for (i, (p, proj)) in series.p_tilde.iter().zip(&projections).enumerate() {
        let accel = skew_part(p);
        if let Some(prev) = &prev_accel {
            let dt = series.times[i] - series.times[i - 1];
            reference = &reference + &(prev + &accel).scale(0.5 * dt);
        }
        prev_accel = Some(accel);

        let w = extract_w(&proj.n_factor, proj.mu_star, Some(&reference));
        if proj.mu_star < 0.0 && -proj.mu_star >= threshold {
            reference = w.clone();
        }
        w_est.push(star(&w)?);
    }
    Ok(EstimateSeries {
        times: series.times.clone(),
        w_est,
        method: Method::SqrtAo,
    })
}

/// Integrates `⋆(skew part of P̃)` from `w0` with the trapezoidal rule.
pub fn run_ao_baseline(series: &MeasurementSeries, w0: Vector3) -> Result<EstimateSeries> {
    if series.len() < 2 {
        return Err(Error::TooFewInstants {
            required: 2,
            actual: series.len(),
        });
    }
    let accel = series
        .p_tilde
        .iter()
        .map(|p| star(&skew_part(p)))
        .collect::<Result<Vec<_>>>()?;
    let mut w_est = Vec::with_capacity(series.len());
    let mut w = w0;
    w_est.push(w);
    for i in 1..series.len() {
        let dt = series.times[i] - series.times[i - 1];
        w = w + (accel[i - 1] + accel[i]).scale(0.5 * dt);
        w_est.push(w);
    }
    Ok(EstimateSeries {
        times: series.times.clone(),
        w_est,
        method: Method::AoIntegration,
    })
}

fn trapezoid(times: &[f64], values: impl Fn(usize) -> f64) -> f64 {
    (1..times.len())
        .map(|i| 0.5 * (times[i] - times[i - 1]) * (values(i - 1) + values(i)))
        .sum()
}

/// `‖est − truth‖_{L²} / ‖truth‖_{L²}` on a shared time grid, trapezoidal rule.
pub fn relative_l2(times: &[f64], est: &[Vector3], truth: &[Vector3]) -> Result<f64> {
    if est.len() != times.len() {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            actual: est.len(),
        });
    }
    if truth.len() != times.len() {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            actual: truth.len(),
        });
    }
    let den = trapezoid(times, |i| truth[i].dot(&truth[i]));
    if !(den > 0.0) {
        return Err(Error::ZeroDenominator);
    }
    let num = trapezoid(times, |i| {
        let e = est[i] - truth[i];
        e.dot(&e)
    });
    Ok((num / den).sqrt())
}

pub fn relative_l2_error(est: &EstimateSeries, truth: &[Vector3]) -> Result<f64> {
    relative_l2(&est.times, &est.w_est, truth)
}

/// Outcome of one inequality check.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundCheck {
    NotApplicable(&'static str),
    Checked { lhs: f64, rhs: f64, holds: bool },
}

impl BoundCheck {
    fn compare(lhs: f64, rhs: f64) -> Self {
        BoundCheck::Checked {
            lhs,
            rhs,
            holds: lhs <= rhs,
        }
    }

    /// `Some(holds)` when the check was applicable.
    pub fn holds(&self) -> Option<bool> {
        match self {
            BoundCheck::Checked { holds, .. } => Some(*holds),
            BoundCheck::NotApplicable(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorBoundReport {
    /// `‖W − W̃‖_F⁴ ≤ C_n ‖B − B̂‖_F²`.
    pub velocity: BoundCheck,
    /// `‖B − B̂‖_F ≤ 2 ‖B − B̃‖_F`, when `B̃` is supplied.
    pub approximation: Option<BoundCheck>,
}

/// Constant in the per-instant velocity bound: 2 for `n = 2`, 8 for `n = 3`.
pub fn velocity_bound_constant(n: usize) -> Option<f64> {
    match n {
        2 => Some(2.0),
        3 => Some(8.0),
        _ => None,
    }
}

/// Checks the per-instant error bounds relating the true and estimated angular
/// velocity matrices to the true and projected `B`.
///
/// The velocity bound applies only for `n ∈ {2, 3}` and when
/// `⟨W, W̃⟩_F > 0`; otherwise it is reported as not applicable.
pub fn check_error_bounds(
    w_true: &Matrix,
    w_est: &Matrix,
    b: &Matrix,
    b_hat: &Matrix,
    b_tilde: Option<&Matrix>,
) -> Result<ErrorBoundReport> {
    let n = w_true.dim();
    for m in [w_est, b, b_hat].into_iter().chain(b_tilde) {
        if m.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: m.dim(),
            });
        }
    }
    let b_gap = frobenius_norm(&(b - b_hat));
    let velocity = match velocity_bound_constant(n) {
        None => BoundCheck::NotApplicable("no bound constant exists for n > 3"),
        Some(_) if frobenius_inner(w_true, w_est)? <= 0.0 => BoundCheck::NotApplicable("requires ⟨W, W̃⟩_F > 0"),
        Some(c) => {
            let dw = frobenius_norm(&(w_true - w_est));
            BoundCheck::compare(dw.powi(4), c * b_gap * b_gap)
        }
    };
    let approximation = b_tilde.map(|bt| BoundCheck::compare(b_gap, 2.0 * frobenius_norm(&(b - bt))));
    Ok(ErrorBoundReport {
        velocity,
        approximation,
    })
}

/// Skew root of `b_hat` whose sign agrees with `reference`; any dimension.
pub fn signed_root(b_hat: &Matrix, reference: &Matrix) -> Result<Matrix> {
    let k = skew_square_root(b_hat)?;
    Ok(if frobenius_inner(&k, reference)? < 0.0 { -&k } else { k })
}
