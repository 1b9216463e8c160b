//! The `skewsq` command-line front end.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error (I/O, parsing, invalid
//! input), 4 numerical failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{fmt_f64, Matrix, Vector3};
use crate::measurement::{generate, uniform_grid, MeasurementSeries, DEFAULT_SAMPLE_RATE};
use crate::motion::{MotionProfile, ProfileKind, DEFAULT_AXIS, DEFAULT_OMEGA_M};
use crate::pipeline::{relative_l2_error, run_ao_baseline, run_sqrt_ao, EstimateSeries, Method};
use crate::skew_square::approximate;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DATA: u8 = 3;
pub const EXIT_NUMERICAL: u8 = 4;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SKEWSQ_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "skewsq",
    version,
    about = "Nearest skew-symmetric squares and accelerometer-only angular velocity"
)]
pub struct Cli {
    /// Directory for outputs whose path is not given explicitly.
    #[arg(long, global = true, env = OUT_DIR_ENV, default_value = ".")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Best approximation of a matrix CSV by the square of a skew-symmetric matrix.
    Approx {
        /// Input matrix CSV (n lines of n comma-separated values).
        input: PathBuf,
        /// Where to write U* as matrix CSV; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write U*, eigenvalues, D*, μ* and the residual as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Synthesise a noisy P-matrix series from a rotation profile.
    Simulate {
        #[command(flatten)]
        config: RunConfig,
        /// Series CSV path; defaults to <out-dir>/series.csv.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run an estimator on a series CSV.
    Estimate {
        /// Series CSV.
        input: PathBuf,
        #[arg(long, default_value = "sqrt_ao")]
        method: Method,
        /// Initial angular velocity "x,y,z"; defaults to the series' first truth row.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
        w0: Option<Vector3>,
        /// Estimate CSV path; defaults to <out-dir>/estimate_<method>.csv.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Simulate, run both estimators, and write plot-ready comparison output.
    Compare {
        #[command(flatten)]
        config: RunConfig,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    #[arg(long, default_value = "punctuated")]
    pub profile: ProfileKind,
    /// Peak rotation rate.
    #[arg(long, default_value_t = DEFAULT_OMEGA_M)]
    pub omega_m: f64,
    /// Profile period; 5.81 (punctuated/constant) or 11.62 (oscillatory) by default.
    #[arg(long)]
    pub tau1: Option<f64>,
    /// Rotation axis "x,y,z"; normalised before use.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector, default_value = "-0.27,-0.28,-0.92")]
    pub axis: Vector3,
    /// Experiment duration; 3·tau1 by default.
    #[arg(long)]
    pub duration: Option<f64>,
    /// Samples per unit time.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_RATE)]
    pub sample_rate: f64,
    /// Standard deviation of the entrywise Gaussian noise on P.
    #[arg(long, default_value_t = 0.0)]
    pub noise_sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            profile: ProfileKind::Punctuated,
            omega_m: DEFAULT_OMEGA_M,
            tau1: None,
            axis: DEFAULT_AXIS,
            duration: None,
            sample_rate: DEFAULT_SAMPLE_RATE,
            noise_sigma: 0.0,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn profile(&self) -> Result<MotionProfile> {
        let tau1 = self.tau1.unwrap_or_else(|| self.profile.default_tau1());
        MotionProfile::new(self.profile, self.omega_m, tau1, self.axis)
    }

    pub fn duration(&self) -> f64 {
        self.duration
            .unwrap_or_else(|| 3.0 * self.tau1.unwrap_or_else(|| self.profile.default_tau1()))
    }

    pub fn simulate(&self) -> Result<MeasurementSeries> {
        let profile = self.profile()?;
        let times = uniform_grid(self.duration(), self.sample_rate)?;
        generate(&profile, &times, self.noise_sigma, self.seed)
    }
}

fn parse_vector(s: &str) -> std::result::Result<Vector3, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    match parts[..] {
        [x, y, z] if parts.iter().all(|v| v.is_finite()) => Ok(Vector3::new(x, y, z)),
        _ => Err(format!("expected three finite comma-separated numbers, got `{s}`")),
    }
}

#[derive(Debug, Serialize)]
pub struct ApproxSummary {
    pub n: usize,
    pub u_star: Vec<Vec<f64>>,
    pub lambda: Vec<f64>,
    pub d_star: Vec<f64>,
    pub mu_star: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Serialize)]
pub struct CompareSummary {
    pub profile: String,
    pub omega_m: f64,
    pub tau1: f64,
    pub axis: [f64; 3],
    pub duration: f64,
    pub sample_rate: f64,
    pub noise_sigma: f64,
    pub seed: u64,
    pub instants: usize,
    pub sqrt_ao_error: f64,
    pub ao_error: f64,
}

/// Everything `compare` produces, before it is written out.
pub struct Comparison {
    pub series: MeasurementSeries,
    pub sqrt_ao: EstimateSeries,
    pub ao: EstimateSeries,
    pub summary: CompareSummary,
}

pub fn compare(config: &RunConfig) -> Result<Comparison> {
    let profile = config.profile()?;
    let series = config.simulate()?;
    let truth = series.truth_w.clone().expect("simulated series carries truth");
    let sqrt_ao = run_sqrt_ao(&series, truth[0])?;
    let ao = run_ao_baseline(&series, truth[0])?;
    let summary = CompareSummary {
        profile: profile.kind().to_string(),
        omega_m: profile.omega_m(),
        tau1: profile.tau1(),
        axis: profile.axis().0,
        duration: config.duration(),
        sample_rate: config.sample_rate,
        noise_sigma: config.noise_sigma,
        seed: config.seed,
        instants: series.len(),
        sqrt_ao_error: relative_l2_error(&sqrt_ao, &truth)?,
        ao_error: relative_l2_error(&ao, &truth)?,
    };
    Ok(Comparison {
        series,
        sqrt_ao,
        ao,
        summary,
    })
}

impl Comparison {
    /// One row per instant: truth, square-root estimate and integration
    /// estimate, each as three components plus magnitude.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from(
            "tau,truth_w1,truth_w2,truth_w3,truth_norm,\
             sqrt_ao_w1,sqrt_ao_w2,sqrt_ao_w3,sqrt_ao_norm,\
             ao_w1,ao_w2,ao_w3,ao_norm\n",
        );
        let truth = self.series.truth_w.as_ref().expect("simulated series carries truth");
        for (i, tau) in self.series.times.iter().enumerate() {
            let mut row = vec![fmt_f64(*tau)];
            for w in [truth[i], self.sqrt_ao.w_est[i], self.ao.w_est[i]] {
                row.extend(w.0.iter().map(|x| fmt_f64(*x)));
                row.push(fmt_f64(w.norm()));
            }
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, contents).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

pub fn run(cli: Cli) -> Result<()> {
    let out_dir = cli.out_dir;
    match cli.command {
        Command::Approx { input, output, json } => {
            let a = Matrix::from_csv_str(&read(&input)?)?;
            let r = approximate(&a)?;
            let csv = r.u_star.to_csv_string();
            match output {
                Some(path) => write(&path, &csv)?,
                None => std::io::stdout().write_all(csv.as_bytes())?,
            }
            let summary = ApproxSummary {
                n: a.dim(),
                u_star: r.u_star.rows(),
                lambda: r.lambda,
                d_star: r.d_star,
                mu_star: r.mu_star,
                residual: r.residual,
            };
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&summary).expect("plain data serialises");
                write(&path, &text)?;
            }
            eprintln!("d_star = {:?}", summary.d_star);
            eprintln!("residual = {}", fmt_f64(summary.residual));
        }
        Command::Simulate { config, output } => {
            let series = config.simulate()?;
            let path = output.unwrap_or_else(|| out_dir.join("series.csv"));
            write(&path, &series.to_csv_string())?;
            eprintln!("wrote {} instants to {}", series.len(), path.display());
        }
        Command::Estimate {
            input,
            method,
            w0,
            output,
        } => {
            let series = MeasurementSeries::from_csv_str(&read(&input)?)?;
            let w0 = match (w0, &series.truth_w) {
                (Some(w), _) => w,
                (None, Some(truth)) => truth[0],
                (None, None) => {
                    return Err(Error::InvalidParameter(
                        "--w0 is required when the series has no truth columns".into(),
                    ))
                }
            };
            let est = match method {
                Method::SqrtAo => run_sqrt_ao(&series, w0)?,
                Method::AoIntegration => run_ao_baseline(&series, w0)?,
            };
            let path = output.unwrap_or_else(|| out_dir.join(format!("estimate_{method}.csv")));
            write(&path, &est.to_csv_string())?;
            if let Some(truth) = &series.truth_w {
                let err = relative_l2_error(&est, truth)?;
                eprintln!("{method} relative L2 error = {}", fmt_f64(err));
            }
        }
        Command::Compare { config } => {
            let cmp = compare(&config)?;
            write(&out_dir.join("compare.csv"), &cmp.to_csv_string())?;
            let text = serde_json::to_string_pretty(&cmp.summary).expect("plain data serialises");
            write(&out_dir.join("summary.json"), &text)?;
            println!("{text}");
        }
    }
    Ok(())
}

pub fn exit_code(err: &Error) -> u8 {
    if err.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_DATA
    }
}

/// Parses `args` and runs; usage errors exit through clap with status 2.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_parsing() {
        assert_eq!(parse_vector("-0.27,-0.28,-0.92").unwrap(), DEFAULT_AXIS);
        assert_eq!(parse_vector(" 1, 2 ,3").unwrap(), Vector3::new(1.0, 2.0, 3.0));
        assert!(parse_vector("1,2").is_err());
        assert!(parse_vector("1,2,x").is_err());
        assert!(parse_vector("1,2,inf").is_err());
    }

    #[test]
    fn defaults_are_the_reference_punctuated_trial() {
        let cli = Cli::try_parse_from(["skewsq", "compare"]).unwrap();
        let Command::Compare { config } = cli.command else {
            panic!()
        };
        let p = config.profile().unwrap();
        assert_eq!(p, MotionProfile::reference(ProfileKind::Punctuated));
        assert_eq!(config.duration(), 3.0 * 5.81);
        assert_eq!(config.sample_rate, 1600.0);
        assert_eq!(config.noise_sigma, 0.0);
        assert_eq!(config.seed, 0);

        let cli = Cli::try_parse_from(["skewsq", "simulate", "--profile", "oscillatory"]).unwrap();
        let Command::Simulate { config, .. } = cli.command else {
            panic!()
        };
        assert_eq!(config.profile().unwrap().tau1(), 11.62);
        assert_eq!(config.duration(), 3.0 * 11.62);
    }

    #[test]
    fn hyphenated_vectors_parse() {
        let cli = Cli::try_parse_from(["skewsq", "simulate", "--axis", "-1,0,0"]).unwrap();
        let Command::Simulate { config, .. } = cli.command else {
            panic!()
        };
        assert_eq!(config.axis, Vector3::new(-1.0, 0.0, 0.0));
    }

    #[test]
    fn constant_noiseless_compare() {
        let config = RunConfig {
            profile: ProfileKind::Constant,
            duration: Some(1.0),
            ..RunConfig::default()
        };
        let cmp = compare(&config).unwrap();
        assert!(cmp.summary.sqrt_ao_error <= 1e-6);
        assert!(cmp.summary.ao_error <= 1e-12);
        let csv = cmp.to_csv_string();
        assert_eq!(csv.lines().count(), cmp.series.len() + 1);
        assert_eq!(csv.lines().next().unwrap().split(',').count(), 13);
    }

    #[test]
    fn error_classes() {
        assert_eq!(
            exit_code(&Error::NoConvergence { sweeps: 100, off: 1.0 }),
            EXIT_NUMERICAL
        );
        assert_eq!(exit_code(&Error::NotMember), EXIT_DATA);
        assert_eq!(exit_code(&Error::parse(1, "x")), EXIT_DATA);
    }
}
