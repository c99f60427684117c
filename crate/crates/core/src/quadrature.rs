//! Adaptive numerical integration with error estimates.
//!
//! A 7/15-point Gauss-Kronrod pair supplies the local value and a
//! nested-rule error estimate; intervals are bisected worst-first until
//! the summed estimate meets the tolerance or the subdivision cap is
//! reached. Integration is deterministic: ties in the worst-first order
//! break on insertion sequence.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Integral value with an absolute-error estimate and evaluation count.
/// `converged` implies the estimate met the requested tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Subdivision cap for a single adaptive integration.
pub const MAX_INTERVALS: usize = 10_000;

// 15-point Kronrod abscissae (positive half) and weights, with the
// embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// QUADPACK-style rescaling of the raw |K15 - G7| difference into a
/// conservative error estimate with a rounding floor.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let min_err = 50.0 * f64::EPSILON * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

/// One Gauss-Kronrod pass over [a, b]; returns (value, error estimate).
fn kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];
    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();

    for j in 0..7 {
        let abscissa = half * XGK[j];
        let f1 = f(center - abscissa);
        let f2 = f(center + abscissa);
        fv1[j] = f1;
        fv2[j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    let err = rescale_error((res_kronrod - res_gauss) * half, res_abs * half.abs(), res_asc * half.abs());
    (value, err)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    seq: usize,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.seq == other.seq
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // worst error first; older segment on ties
        self.error
            .total_cmp(&other.error)
            .then(other.seq.cmp(&self.seq))
    }
}

/// Adaptive integration of `f` over the finite interval [a, b] to an
/// absolute tolerance. Nonconvergence after the subdivision cap is
/// reported through `converged = false` with the best estimate, never
/// silently.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> QuadratureEstimate {
    if a == b {
        return QuadratureEstimate {
            value: 0.0,
            abs_error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    if a > b {
        let mut est = integrate_finite(f, b, a, tol);
        est.value = -est.value;
        return est;
    }

    let mut heap = BinaryHeap::new();
    // intervals at floating-point resolution keep their error but leave
    // the refinement queue
    let mut finished: Vec<Segment> = Vec::new();
    let mut finished_error = 0.0;
    let mut seq = 0usize;
    let mut evaluations = 0usize;
    let (v0, e0) = kronrod_15(&f, a, b);
    evaluations += 15;
    heap.push(Segment {
        a,
        b,
        value: v0,
        error: e0,
        seq,
    });
    let mut active_error = e0;

    let converged = loop {
        if active_error + finished_error <= tol {
            break true;
        }
        if heap.len() + finished.len() >= MAX_INTERVALS || heap.is_empty() {
            break false;
        }
        let worst = heap.pop().expect("heap nonempty");
        active_error -= worst.error;
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            finished_error += worst.error;
            finished.push(worst);
            continue;
        }
        let (vl, el) = kronrod_15(&f, worst.a, mid);
        let (vr, er) = kronrod_15(&f, mid, worst.b);
        evaluations += 30;
        seq += 1;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: vl,
            error: el,
            seq,
        });
        seq += 1;
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: vr,
            error: er,
            seq,
        });
        active_error += el + er;
    };

    // sum in insertion order for reproducibility
    let mut segments: Vec<Segment> = heap.into_vec();
    segments.extend(finished);
    segments.sort_by_key(|s| s.seq);
    let value = segments.iter().map(|s| s.value).sum();
    let abs_error_estimate = segments.iter().map(|s| s.error).sum();

    QuadratureEstimate {
        value,
        abs_error_estimate,
        evaluations,
        converged: converged && abs_error_estimate <= tol,
    }
}

/// Analytic bound for `int_t^inf rho^2 e^{-rho^2} d rho`.
pub fn gaussian_second_moment_tail(t: f64) -> f64 {
    let sqrt_pi = std::f64::consts::PI.sqrt();
    0.5 * t * (-t * t).exp() + 0.25 * sqrt_pi * libm::erfc(t)
}

/// Integration over `[a, inf)` for integrands eventually dominated by
/// `decay_scale * rho^2 e^{-rho^2}`: the finite part runs over `[a, t]`
/// and the remainder is bounded analytically and folded into the error
/// estimate.
pub fn integrate_gaussian_tail_with_cutoff<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    t: f64,
    tol: f64,
    decay_scale: f64,
) -> QuadratureEstimate {
    let cutoff = t.max(a);
    let mut est = integrate_finite(f, a, cutoff, tol);
    let remainder = decay_scale * gaussian_second_moment_tail(cutoff);
    est.abs_error_estimate += remainder;
    est
}

/// [`integrate_gaussian_tail_with_cutoff`] with the default cutoff
/// `max(a, 8)`, beyond which the Gaussian remainder is below 1e-26.
pub fn integrate_gaussian_tail<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    tol: f64,
    decay_scale: f64,
) -> QuadratureEstimate {
    integrate_gaussian_tail_with_cutoff(f, a, a.max(8.0), tol, decay_scale)
}
