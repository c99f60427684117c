//! The two headline criteria and their certificates.
//!
//! Bergman: `c^2 / int_c^1 rho sqrt(1 - F^2) / F d rho`, where the
//! integrand is clamped to 0 wherever `F(rho, c) >= 1`. The clamp is a
//! sound under-estimate of the integral, which only ever needs a lower
//! bound; the `clamped_fraction` field makes the information loss
//! visible.
//!
//! Fock: `2 c (1 - e^{-c^2}) / int_c^inf e^{-rho^2} (rho^2 - c^2) d rho`,
//! with the denominator cross-checked against its closed form through the
//! complementary error function.
//!
//! A constant `c` is certified numerically when
//! `criterion + error_budget < 1`. The budgets are estimate-based, not a
//! mathematical proof.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annulus::TruncationPolicy;
use crate::bounds::f_bound;
use crate::quadrature::{integrate_finite, integrate_gaussian_tail, QuadratureEstimate};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertificationError {
    #[error("c = {0} outside the admissible range")]
    InvalidConstant(f64),
    #[error("rho = {rho} outside ({lo}, {hi})")]
    Domain { rho: f64, lo: f64, hi: f64 },
    #[error("denominator integral {value} is degenerate (<= {tol}); certification impossible at this c")]
    DegenerateDenominator { value: f64, tol: f64 },
    #[error("quadrature denominator {quadrature} disagrees with the closed form {closed_form} beyond 1e-8")]
    InconsistentDenominator { quadrature: f64, closed_form: f64 },
    #[error("bounds error: {0}")]
    Bounds(#[from] crate::bounds::BoundsError),
    #[error("bracket [{lo}, {hi}] invalid: certification must pass at lo and fail at hi")]
    InvalidBracket { lo: f64, hi: f64 },
    #[error("pass/fail is not monotone across [{lo}, {hi}]: pass observed at {pass_at} above a failure at {fail_at}")]
    NonMonotone {
        lo: f64,
        hi: f64,
        fail_at: f64,
        pass_at: f64,
    },
}

/// Which norm the certificate concerns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Bergman,
    Fock,
}

impl std::fmt::Display for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Space::Bergman => write!(f, "bergman"),
            Space::Fock => write!(f, "fock"),
        }
    }
}

/// One criterion evaluation. `pass` holds exactly when
/// `criterion + error_budget < 1`, and `criterion` equals
/// `numerator / denominator.value`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub space: Space,
    pub c: f64,
    pub numerator: f64,
    pub denominator: QuadratureEstimate,
    pub criterion: f64,
    pub error_budget: f64,
    pub pass: bool,
    pub truncation_policy: TruncationPolicy,
    /// Fraction of the integration range where `F >= 1` (Bergman only).
    pub clamped_fraction: f64,
}

/// Bisection outcome for the largest certifiable constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub space: Space,
    pub c_max: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub certificates_at_endpoints: (Certificate, Certificate),
}

/// `sqrt(1 - F^2) / F`, the weight the bound `F` induces on the inverse
/// extremal quotient.
pub fn criterion_weight(f: f64) -> f64 {
    (1.0 - f * f).sqrt() / f
}

/// Integrand `rho sqrt(1 - F^2(rho, c)) / F(rho, c)`, clamped to 0
/// wherever `F >= 1`.
pub fn bergman_integrand(
    rho: f64,
    c: f64,
    _trunc: &TruncationPolicy,
) -> Result<f64, CertificationError> {
    if !(c > 0.0 && c < 1.0) {
        return Err(CertificationError::InvalidConstant(c));
    }
    if !(rho > c && rho < 1.0) {
        return Err(CertificationError::Domain {
            rho,
            lo: c,
            hi: 1.0,
        });
    }
    let f = f_bound(rho, c)?;
    if f >= 1.0 {
        Ok(0.0)
    } else {
        Ok(rho * criterion_weight(f))
    }
}

const BOUNDARY_SCAN_POINTS: usize = 1000;

/// Scans (c, 1) for crossings of `F = 1` so the adaptive rule never
/// straddles the clamp kink; also reports the clamped fraction.
fn locate_clamp_splits(c: f64) -> (Vec<f64>, f64) {
    let mut splits = Vec::new();
    let mut clamped = 0usize;
    let mut prev_below: Option<bool> = None;
    let mut prev_rho = c;
    for i in 0..BOUNDARY_SCAN_POINTS {
        let rho = c + (1.0 - c) * (i as f64 + 0.5) / BOUNDARY_SCAN_POINTS as f64;
        let below = f_bound(rho, c).map(|f| f < 1.0).unwrap_or(false);
        if !below {
            clamped += 1;
        }
        if let Some(p) = prev_below {
            if p != below {
                splits.push(0.5 * (prev_rho + rho));
            }
        }
        prev_below = Some(below);
        prev_rho = rho;
    }
    (splits, clamped as f64 / BOUNDARY_SCAN_POINTS as f64)
}

fn bergman_denominator(
    c: f64,
    tol: f64,
    trunc: &TruncationPolicy,
) -> Result<(QuadratureEstimate, f64), CertificationError> {
    let (splits, clamped_fraction) = locate_clamp_splits(c);
    let mut edges = vec![c];
    edges.extend(splits);
    edges.push(1.0);
    let segment_tol = tol / edges.len() as f64;
    let trunc = *trunc;
    let mut total = QuadratureEstimate {
        value: 0.0,
        abs_error_estimate: 0.0,
        evaluations: 0,
        converged: true,
    };
    for w in edges.windows(2) {
        let est = integrate_finite(
            |rho| bergman_integrand(rho, c, &trunc).unwrap_or(0.0),
            w[0],
            w[1],
            segment_tol,
        );
        total.value += est.value;
        total.abs_error_estimate += est.abs_error_estimate;
        total.evaluations += est.evaluations;
        total.converged &= est.converged;
    }
    Ok((total, clamped_fraction))
}

/// Bergman criterion `c^2 / int_c^1 rho sqrt(1 - F^2) / F d rho`.
pub fn bergman_criterion(
    c: f64,
    tol: f64,
    trunc: &TruncationPolicy,
) -> Result<Certificate, CertificationError> {
    if !(c > 0.0 && c < 1.0) {
        return Err(CertificationError::InvalidConstant(c));
    }
    let (denominator, clamped_fraction) = bergman_denominator(c, tol, trunc)?;
    let d = denominator.value;
    let e = denominator.abs_error_estimate;
    if d <= tol || d <= e {
        return Err(CertificationError::DegenerateDenominator { value: d, tol });
    }
    let numerator = c * c;
    let criterion = numerator / d;
    let propagated = numerator * e / (d * (d - e));

    // truncation sensitivity: recompute at a ten-times-tighter policy
    let tighter = TruncationPolicy {
        epsilon: trunc.epsilon / 10.0,
        max_terms: trunc.max_terms,
    };
    let (denom2, _) = bergman_denominator(c, tol, &tighter)?;
    let sensitivity = if denom2.value > 0.0 {
        (criterion - numerator / denom2.value).abs()
    } else {
        0.0
    };

    let error_budget = propagated + sensitivity;
    Ok(Certificate {
        space: Space::Bergman,
        c,
        numerator,
        denominator,
        criterion,
        error_budget,
        pass: criterion + error_budget < 1.0,
        truncation_policy: *trunc,
        clamped_fraction,
    })
}

/// Schwarz-Pick bound `2 c rho / (rho^2 - c^2)` on the extremal quotient
/// in the Fock setting. Vacuous (above 1) near the inner circle.
pub fn fock_gamma_upper(rho: f64, c: f64) -> Result<f64, CertificationError> {
    if !(c > 0.0) {
        return Err(CertificationError::InvalidConstant(c));
    }
    if !(rho > c) {
        return Err(CertificationError::Domain {
            rho,
            lo: c,
            hi: f64::INFINITY,
        });
    }
    Ok(2.0 * c * rho / (rho * rho - c * c))
}

/// Closed form of `int_c^inf e^{-rho^2} (rho^2 - c^2) d rho` via the
/// complementary error function.
pub fn fock_denominator_closed_form(c: f64) -> f64 {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    0.5 * c * (-c * c).exp() + 0.25 * sqrt_pi * (1.0 - 2.0 * c * c) * libm::erfc(c)
}

/// Fock criterion `2 c (1 - e^{-c^2}) / int_c^inf e^{-rho^2} (rho^2 - c^2) d rho`.
pub fn fock_criterion(c: f64, tol: f64) -> Result<Certificate, CertificationError> {
    if !(c > 0.0) {
        return Err(CertificationError::InvalidConstant(c));
    }
    let numerator = 2.0 * c * (1.0 - (-c * c).exp());
    let denominator = integrate_gaussian_tail(
        move |rho| (-rho * rho).exp() * (rho * rho - c * c),
        c,
        tol,
        1.0,
    );
    let closed = fock_denominator_closed_form(c);
    let discrepancy = (denominator.value - closed).abs();
    if discrepancy > 1e-8 {
        return Err(CertificationError::InconsistentDenominator {
            quadrature: denominator.value,
            closed_form: closed,
        });
    }
    let d = denominator.value;
    let e = denominator.abs_error_estimate;
    if d <= tol || d <= e {
        return Err(CertificationError::DegenerateDenominator { value: d, tol });
    }
    let criterion = numerator / d;
    let error_budget = numerator * e / (d * (d - e)) + numerator * discrepancy / (d * d);
    Ok(Certificate {
        space: Space::Fock,
        c,
        numerator,
        denominator,
        criterion,
        error_budget,
        pass: criterion + error_budget < 1.0,
        truncation_policy: TruncationPolicy::default(),
        clamped_fraction: 0.0,
    })
}

/// Dispatch to the space-specific criterion.
pub fn certify(
    space: Space,
    c: f64,
    tol: f64,
    trunc: &TruncationPolicy,
) -> Result<Certificate, CertificationError> {
    match space {
        Space::Bergman => bergman_criterion(c, tol, trunc),
        Space::Fock => fock_criterion(c, tol),
    }
}

/// A constant passes when the certificate exists and its criterion plus
/// budget stays below 1; a degenerate denominator counts as failure.
fn certifiable(space: Space, c: f64, tol: f64, trunc: &TruncationPolicy) -> bool {
    matches!(certify(space, c, tol, trunc), Ok(cert) if cert.pass)
}

const MONOTONICITY_SCAN_POINTS: usize = 17;

/// Bisection for the largest certifiable constant over [lo, hi].
///
/// Monotonicity of pass/fail in c is validated by a coarse scan rather
/// than assumed; a non-monotone scan aborts with a diagnostic. If the
/// given bracket is invalid, the same scan is used to locate a valid one.
pub fn search_max_constant(
    space: Space,
    lo: f64,
    hi: f64,
    width_tol: f64,
    quad_tol: f64,
    trunc: &TruncationPolicy,
) -> Result<SearchResult, CertificationError> {
    if !(lo < hi) {
        return Err(CertificationError::InvalidBracket { lo, hi });
    }
    let scan: Vec<(f64, bool)> = (0..MONOTONICITY_SCAN_POINTS)
        .map(|i| {
            let c = lo + (hi - lo) * i as f64 / (MONOTONICITY_SCAN_POINTS - 1) as f64;
            (c, certifiable(space, c, quad_tol, trunc))
        })
        .collect();

    if let Some(first_fail) = scan.iter().position(|&(_, p)| !p) {
        if let Some(&(pass_at, _)) = scan[first_fail..].iter().find(|&&(_, p)| p) {
            return Err(CertificationError::NonMonotone {
                lo,
                hi,
                fail_at: scan[first_fail].0,
                pass_at,
            });
        }
    }

    // tighten the bracket to the scan's pass/fail boundary
    let (mut lo_b, mut hi_b) = (None, None);
    for w in scan.windows(2) {
        if w[0].1 && !w[1].1 {
            lo_b = Some(w[0].0);
            hi_b = Some(w[1].0);
        }
    }
    let (mut lo_b, mut hi_b) = match (lo_b, hi_b) {
        (Some(l), Some(h)) => (l, h),
        _ => return Err(CertificationError::InvalidBracket { lo, hi }),
    };

    let mut iterations = 0usize;
    while hi_b - lo_b > width_tol {
        let mid = 0.5 * (lo_b + hi_b);
        if certifiable(space, mid, quad_tol, trunc) {
            lo_b = mid;
        } else {
            hi_b = mid;
        }
        iterations += 1;
        if iterations > 200 {
            break;
        }
    }

    let cert_lo = certify(space, lo_b, quad_tol, trunc)?;
    let cert_hi = certify(space, hi_b, quad_tol, trunc)?;
    Ok(SearchResult {
        space,
        c_max: lo_b,
        bracket: (lo_b, hi_b),
        iterations,
        certificates_at_endpoints: (cert_lo, cert_hi),
    })
}
