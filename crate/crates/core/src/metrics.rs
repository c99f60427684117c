//! The pseudohyperbolic distance on the unit disk and the elementary
//! identities and inequalities underlying the certification argument.
//!
//! All operations are pure functions; residual operations return the raw
//! residual so that tolerance policy lives in the test configuration.

use num_complex::Complex64;
use thiserror::Error;

/// Universal scalar for analytic-function evaluation.
pub type Complex = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("point must lie strictly inside the unit disk (modulus {0})")]
    OutsideDisk(f64),
    #[error("complex value must be finite")]
    NonFinite,
    #[error("quotient requires g != 0 and |f| < |g| (|f| = {f_abs}, |g| = {g_abs})")]
    InvalidQuotient { f_abs: f64, g_abs: f64 },
}

/// A point of the open unit disk, modulus strictly below 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(Complex);

impl DiskPoint {
    pub fn new(value: Complex) -> Result<Self, MetricsError> {
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(MetricsError::NonFinite);
        }
        let m = value.norm();
        if m >= 1.0 {
            return Err(MetricsError::OutsideDisk(m));
        }
        Ok(DiskPoint(value))
    }

    pub fn from_re(re: f64) -> Result<Self, MetricsError> {
        Self::new(Complex::new(re, 0.0))
    }

    pub fn value(self) -> Complex {
        self.0
    }
}

/// Pseudohyperbolic distance `d(alpha, beta) = |alpha - beta| / |1 - conj(alpha) beta|`.
///
/// Symmetric in its arguments, valued in `[0, 1)`, zero iff the points
/// coincide.
pub fn pseudo_distance(alpha: DiskPoint, beta: DiskPoint) -> f64 {
    let a = alpha.value();
    let b = beta.value();
    (a - b).norm() / (Complex::new(1.0, 0.0) - a.conj() * b).norm()
}

/// Residual of the identity
/// `|a - b| / (1 - |a|^2) = d / sqrt(1 - d^2) * sqrt(1 - |b|^2) / sqrt(1 - |a|^2)`
/// with `d = pseudo_distance(a, b)`.
pub fn ratio_identity_residual(alpha: DiskPoint, beta: DiskPoint) -> f64 {
    let a = alpha.value();
    let b = beta.value();
    let lhs = (a - b).norm() / (1.0 - a.norm_sqr());
    let d = pseudo_distance(alpha, beta);
    // 1 - d^2 computed through |1 - conj(a) b|^2 - |a - b|^2 =
    // (1 - |a|^2)(1 - |b|^2): the direct form loses ~5 digits to
    // cancellation as d -> 1 (both moduli near 0.99), drowning the
    // residual in rounding noise
    let one_minus_d_sq =
        (1.0 - a.norm_sqr()) * (1.0 - b.norm_sqr()) / (Complex::new(1.0, 0.0) - a.conj() * b).norm_sqr();
    let rhs =
        d / one_minus_d_sq.sqrt() * (1.0 - b.norm_sqr()).sqrt() / (1.0 - a.norm_sqr()).sqrt();
    (lhs - rhs).abs()
}

/// `2 |alpha^2 - alpha beta| - (|alpha|^2 - |beta|^2)`.
///
/// Nonnegativity of the result for all inputs is the claimed inequality;
/// the verifier suites assert it.
pub fn square_difference_gap(alpha: Complex, beta: Complex) -> f64 {
    2.0 * (alpha * alpha - alpha * beta).norm() - (alpha.norm_sqr() - beta.norm_sqr())
}

/// Residual of `|f^2 - w_r f g| = |w| |w - w_r| / (1 - |w|^2) * (|g|^2 - |f|^2)`
/// with `w = f / g`.
pub fn quotient_identity_residual(
    f: Complex,
    g: Complex,
    omega_rho: DiskPoint,
) -> Result<f64, MetricsError> {
    let f_abs = f.norm();
    let g_abs = g.norm();
    if g_abs == 0.0 || f_abs >= g_abs {
        return Err(MetricsError::InvalidQuotient { f_abs, g_abs });
    }
    let w = f / g;
    let wr = omega_rho.value();
    let lhs = (f * f - wr * f * g).norm();
    let rhs = w.norm() * (w - wr).norm() / (1.0 - w.norm_sqr()) * (g.norm_sqr() - f.norm_sqr());
    Ok((lhs - rhs).abs())
}
