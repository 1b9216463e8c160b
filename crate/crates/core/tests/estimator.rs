use skewsq::measurement::{generate, uniform_grid};
use skewsq::motion::{MotionProfile, ProfileKind};
use skewsq::pipeline::{relative_l2, run_ao_baseline, run_sqrt_ao};
use skewsq::Vector3;

/// Least-squares slope of `ys` against `xs`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn pointwise_error(est: &[Vector3], truth: &[Vector3]) -> Vec<f64> {
    est.iter().zip(truth).map(|(a, b)| (*a - *b).norm()).collect()
}

#[test]
fn sqrt_ao_error_has_no_trend() {
    // Whole periods, so the periodic error pattern cannot masquerade as a trend.
    for kind in [ProfileKind::Punctuated, ProfileKind::Constant, ProfileKind::Oscillatory] {
        let p = MotionProfile::reference(kind);
        let times = uniform_grid(6.0 * p.tau1(), 400.0).unwrap();
        let s = generate(&p, &times, 6.0, 21).unwrap();
        let truth = s.truth_w.clone().unwrap();
        let est = run_sqrt_ao(&s, truth[0]).unwrap();
        let err = pointwise_error(&est.w_est, &truth);
        let mean = err.iter().sum::<f64>() / err.len() as f64;
        let drift = slope(&times, &err) * times.last().unwrap();
        // Change across the whole window implied by the fitted line, against the mean level.
        assert!(drift.abs() < 0.05 * mean, "{kind}: drift {drift}, mean {mean}");
    }
}

#[test]
fn ao_error_grows_with_horizon_for_most_seeds() {
    let p = MotionProfile::reference(ProfileKind::Punctuated);
    let t = 3.0 * p.tau1();
    let times = uniform_grid(2.0 * t, 400.0).unwrap();
    let half = times.iter().position(|&x| x > t).unwrap();
    let mut grew = 0;
    for seed in 0..20 {
        let s = generate(&p, &times, 6.0, seed).unwrap();
        let truth = s.truth_w.clone().unwrap();
        let ao = run_ao_baseline(&s, truth[0]).unwrap();
        let short = relative_l2(&times[..half], &ao.w_est[..half], &truth[..half]).unwrap();
        let long = relative_l2(&times, &ao.w_est, &truth).unwrap();
        grew += usize::from(long > short);
    }
    assert!(grew > 10, "AO error grew in only {grew}/20 runs");
}

#[test]
fn sign_reference_holds_through_rest_instants() {
    // Punctuated motion slows to a few percent of the peak rate each period; with
    // noise comparable to the slow rate the sign must still be carried through.
    let p = MotionProfile::reference(ProfileKind::Punctuated);
    let times = uniform_grid(3.0 * p.tau1(), 1600.0).unwrap();
    for seed in 0..5 {
        let s = generate(&p, &times, 1.0, seed).unwrap();
        let truth = s.truth_w.clone().unwrap();
        let est = run_sqrt_ao(&s, truth[0]).unwrap();
        let flipped = est
            .w_est
            .iter()
            .zip(&truth)
            .filter(|(e, t)| t.norm() > 10.0 && e.dot(t) < 0.0)
            .count();
        assert_eq!(flipped, 0, "seed {seed}");
    }
}
