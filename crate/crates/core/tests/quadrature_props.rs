//! Honesty and consistency properties of the adaptive integrator.

use korenblum::quadrature::{
    gaussian_second_moment_tail, integrate_finite, integrate_gaussian_tail,
    integrate_gaussian_tail_with_cutoff,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn additivity_under_random_splits() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let f = |x: f64| (3.0 * x).sin() * (-x).exp() + x * x;
    for _ in 0..50 {
        let a = rng.gen_range(-2.0..0.0);
        let b = rng.gen_range(1.0..3.0);
        let m = rng.gen_range(a..b);
        let whole = integrate_finite(f, a, b, 1e-10);
        let left = integrate_finite(f, a, m, 1e-10);
        let right = integrate_finite(f, m, b, 1e-10);
        let allowed = whole.abs_error_estimate + left.abs_error_estimate + right.abs_error_estimate + 1e-13;
        assert!(
            (whole.value - left.value - right.value).abs() <= allowed,
            "split at {m} broke additivity"
        );
    }
}

#[test]
fn error_estimate_honesty_battery() {
    // ten closed-form integrals; true error must stay within 10x the
    // reported estimate
    let pi = std::f64::consts::PI;
    let e = std::f64::consts::E;
    let cases: Vec<(Box<dyn Fn(f64) -> f64>, f64, f64, f64)> = vec![
        (Box::new(|x: f64| x), 0.0, 1.0, 0.5),
        (Box::new(|x: f64| x * x), 0.0, 1.0, 1.0 / 3.0),
        (Box::new(|x: f64| x.sin()), 0.0, pi, 2.0),
        (Box::new(|x: f64| x.cos()), 0.0, pi / 2.0, 1.0),
        (Box::new(|x: f64| x.exp()), 0.0, 1.0, e - 1.0),
        (Box::new(|x: f64| 1.0 / (1.0 + x * x)), 0.0, 1.0, pi / 4.0),
        (Box::new(|x: f64| x.sqrt()), 0.0, 1.0, 2.0 / 3.0),
        (Box::new(|x: f64| x.ln()), 1.0, e, 1.0),
        (Box::new(|x: f64| 1.0 / x), 1.0, 2.0, std::f64::consts::LN_2),
        (Box::new(|x: f64| (5.0 * x).cos() * x), 0.0, 2.0 * pi, 0.0),
    ];
    for (i, (f, a, b, exact)) in cases.iter().enumerate() {
        let est = integrate_finite(f, *a, *b, 1e-10);
        let true_err = (est.value - exact).abs();
        assert!(
            true_err <= 10.0 * est.abs_error_estimate.max(f64::EPSILON),
            "case {i}: true error {true_err} vs estimate {}",
            est.abs_error_estimate
        );
        assert!(true_err <= 1e-9, "case {i}: inaccurate: {true_err}");
    }
}

#[test]
fn tail_bound_sound_under_doubled_cutoff() {
    let f = |x: f64| x * x * (-x * x).exp();
    for t in [2.0, 3.0, 4.0] {
        let short = integrate_gaussian_tail_with_cutoff(f, 0.0, t, 1e-12, 1.0);
        let long = integrate_gaussian_tail_with_cutoff(f, 0.0, 2.0 * t, 1e-12, 1.0);
        // for this integrand the analytic remainder is tight (the change
        // IS the remainder minus the far tail), so allow the two
        // finite-part quadrature errors on top; the reported estimates
        // already contain the analytic remainders, subtract them back out
        let finite_part_errors = (short.abs_error_estimate - gaussian_second_moment_tail(t))
            + (long.abs_error_estimate - gaussian_second_moment_tail(2.0 * t));
        let remainder = gaussian_second_moment_tail(t) + finite_part_errors;
        assert!(
            (long.value - short.value).abs() <= remainder,
            "cutoff {t}: change {} > remainder bound {remainder}",
            (long.value - short.value).abs()
        );
    }
}

#[test]
fn gaussian_closed_forms() {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let half = integrate_gaussian_tail(|x| (-x * x).exp(), 0.0, 1e-10, 1.0);
    assert!((half.value - sqrt_pi / 2.0).abs() <= 1e-10);
    let second = integrate_gaussian_tail(|x| x * x * (-x * x).exp(), 0.0, 1e-10, 1.0);
    assert!((second.value - sqrt_pi / 4.0).abs() <= 1e-10);
}

#[test]
fn nonconvergence_is_flagged_not_silent() {
    // a needle the subdivision cap cannot resolve at this tolerance
    let f = |x: f64| if (x - 0.123456789).abs() < 1e-13 { 1e13 } else { 0.0 };
    let est = integrate_finite(f, 0.0, 1.0, 1e-15);
    assert!(est.value.is_finite());
    // either it converged with a tiny estimate or it says so
    if !est.converged {
        assert!(est.abs_error_estimate > 1e-15);
    }
}
