//! Möbius pseudodistance of a circular annulus via the explicit infinite
//! product, with controlled truncation.
//!
//! Two coordinate systems are supported: the symmetric annulus
//! `A(1/R, R)` where the product formula is stated, and `A(c, 1)` reached
//! through the scaling `z -> z / sqrt(c)`. The same-circle specialization
//! `cstar_circle` is a second, independent code path built from the
//! factor functions of [`crate::bounds`]; the two paths cross-check each
//! other in the test suites.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{f_n_raw, g_n_raw};
use crate::metrics::Complex;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnnulusError {
    #[error("symmetric annulus requires R > 1 (got {0})")]
    InvalidRadius(f64),
    #[error("annulus A(c,1) requires 0 < c < 1 (got {0})")]
    InvalidInnerRadius(f64),
    #[error("truncation policy requires epsilon > 0 and max_terms >= 1")]
    InvalidPolicy,
    #[error("argument {name} = {value} outside the annulus ({lo}, {hi})")]
    OutsideAnnulus {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("z must be nonzero")]
    ZeroArgument,
    #[error("product did not reach epsilon = {epsilon} within {max_terms} terms")]
    NonConvergence { epsilon: f64, max_terms: usize },
}

/// The annulus `{ 1/R < |z| < R }`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricAnnulus {
    outer: f64,
}

impl SymmetricAnnulus {
    pub fn new(outer: f64) -> Result<Self, AnnulusError> {
        if !(outer > 1.0) || !outer.is_finite() {
            return Err(AnnulusError::InvalidRadius(outer));
        }
        Ok(SymmetricAnnulus { outer })
    }

    pub fn outer(&self) -> f64 {
        self.outer
    }

    pub fn inner(&self) -> f64 {
        1.0 / self.outer
    }
}

/// The annulus `A(c, 1) = { c < |z| < 1 }`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusDomain {
    inner: f64,
}

impl AnnulusDomain {
    pub fn new(inner: f64) -> Result<Self, AnnulusError> {
        if !(inner > 0.0 && inner < 1.0) {
            return Err(AnnulusError::InvalidInnerRadius(inner));
        }
        Ok(AnnulusDomain { inner })
    }

    pub fn inner(&self) -> f64 {
        self.inner
    }
}

/// Target relative truncation error and term cap for product evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub epsilon: f64,
    pub max_terms: usize,
}

impl TruncationPolicy {
    pub fn new(epsilon: f64, max_terms: usize) -> Result<Self, AnnulusError> {
        if !(epsilon > 0.0) || max_terms == 0 {
            return Err(AnnulusError::InvalidPolicy);
        }
        Ok(TruncationPolicy { epsilon, max_terms })
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            epsilon: 1e-12,
            max_terms: 64,
        }
    }
}

/// Value of a truncated infinite product together with a relative
/// truncation-error bound and the number of terms consumed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductEvaluation {
    pub value: Complex,
    /// Relative bound on the discarded tail of the product.
    pub truncation_bound: f64,
    pub terms_used: usize,
}

/// A pseudodistance value with its absolute truncation bound.
///
/// Values marginally above 1 produced by rounding are clamped to 1 and
/// flagged; the pseudodistance is at most 1 analytically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CstarValue {
    pub value: f64,
    pub truncation_bound: f64,
    pub clamped: bool,
}

/// The product
/// `f(a, z) = (1 - z/a) prod_{n>=1} (1 - (z/a) R^{-4n}) (1 - (a/z) R^{-4n})
///            / ((1 - a z R^{2-4n}) (1 - R^{2-4n} / (a z)))`
/// truncated once the current factor and a geometric tail bound are both
/// below the policy's target.
pub fn product_f(
    a: f64,
    z: Complex,
    ann: &SymmetricAnnulus,
    policy: &TruncationPolicy,
) -> Result<ProductEvaluation, AnnulusError> {
    let r = ann.outer();
    if !(a > ann.inner() && a < r) {
        return Err(AnnulusError::OutsideAnnulus {
            name: "a",
            value: a,
            lo: ann.inner(),
            hi: r,
        });
    }
    if z.norm() == 0.0 {
        return Err(AnnulusError::ZeroArgument);
    }

    let za = z / a;
    let az = z * a;
    let q4 = r.powi(-4);
    let mut scale = 1.0; // R^{-4n}
    let mut value = Complex::new(1.0, 0.0) - za;
    let one = Complex::new(1.0, 0.0);

    for n in 1..=policy.max_terms {
        scale *= q4;
        let p = r * r * scale; // R^{2-4n}
        let t1 = za * scale;
        let t2 = scale / za;
        let t3 = az * p;
        let t4 = p / az;
        value *= (one - t1) * (one - t2) / ((one - t3) * (one - t4));

        // The subtracted terms all scale by exactly R^{-4} per step, so the
        // discarded log-tail is geometric with ratio q4.
        let m = t1.norm() + t2.norm() + t3.norm() + t4.norm();
        if m <= 0.5 {
            let current_log = 2.0 * m;
            let tail_log = 2.0 * m * q4 / (1.0 - q4);
            let tail_rel = tail_log * tail_log.exp();
            if current_log < policy.epsilon / 4.0 && tail_rel < policy.epsilon / 2.0 {
                return Ok(ProductEvaluation {
                    value,
                    truncation_bound: tail_rel,
                    terms_used: n,
                });
            }
        }
    }
    Err(AnnulusError::NonConvergence {
        epsilon: policy.epsilon,
        max_terms: policy.max_terms,
    })
}

/// Möbius pseudodistance of the symmetric annulus,
/// `c*(a, z) = f(1/a, -|z|) / (R |z|) * |f(a, z)|`, for real positive base
/// points `a`. General base points reduce to this case by rotating both
/// arguments.
pub fn cstar_symmetric(
    a: f64,
    z: Complex,
    ann: &SymmetricAnnulus,
    policy: &TruncationPolicy,
) -> Result<CstarValue, AnnulusError> {
    let z_abs = z.norm();
    if !(z_abs > ann.inner() && z_abs < ann.outer()) {
        return Err(AnnulusError::OutsideAnnulus {
            name: "|z|",
            value: z_abs,
            lo: ann.inner(),
            hi: ann.outer(),
        });
    }
    let p1 = product_f(1.0 / a, Complex::new(-z_abs, 0.0), ann, policy)?;
    let p2 = product_f(a, z, ann, policy)?;
    let raw = p1.value.re / (ann.outer() * z_abs) * p2.value.norm();
    let rel = p1.truncation_bound + p2.truncation_bound + p1.truncation_bound * p2.truncation_bound;
    let truncation_bound = raw.abs() * rel;
    let clamped = raw > 1.0;
    Ok(CstarValue {
        value: if clamped { 1.0 } else { raw.max(0.0) },
        truncation_bound,
        clamped,
    })
}

/// Möbius pseudodistance of `A(c, 1)` at a real base point `rho`, computed
/// by scaling to the symmetric annulus `A(sqrt(c), 1/sqrt(c))`.
pub fn cstar_annulus(
    rho: f64,
    z: Complex,
    dom: &AnnulusDomain,
    policy: &TruncationPolicy,
) -> Result<CstarValue, AnnulusError> {
    let c = dom.inner();
    if !(rho > c && rho < 1.0) {
        return Err(AnnulusError::OutsideAnnulus {
            name: "rho",
            value: rho,
            lo: c,
            hi: 1.0,
        });
    }
    let z_abs = z.norm();
    if !(z_abs > c && z_abs < 1.0) {
        return Err(AnnulusError::OutsideAnnulus {
            name: "|z|",
            value: z_abs,
            lo: c,
            hi: 1.0,
        });
    }
    let sc = c.sqrt();
    let ann = SymmetricAnnulus::new(1.0 / sc)?;
    cstar_symmetric(rho / sc, z / sc, &ann, policy)
}

/// Same-circle pseudodistance `c*(rho, rho e^{i theta})` of `A(c, 1)` via
/// the factorized product `(c/rho)(1 + rho^2/c) sqrt(2(1 - cos theta))
/// prod f_n g_n`. Independent of [`cstar_annulus`]'s code path.
pub fn cstar_circle(
    rho: f64,
    theta: f64,
    dom: &AnnulusDomain,
    policy: &TruncationPolicy,
) -> Result<CstarValue, AnnulusError> {
    let c = dom.inner();
    if !(rho > c && rho < 1.0) {
        return Err(AnnulusError::OutsideAnnulus {
            name: "rho",
            value: rho,
            lo: c,
            hi: 1.0,
        });
    }
    // sqrt(2 (1 - cos theta)) = 2 |sin(theta / 2)|
    let chord = 2.0 * (theta / 2.0).sin().abs();
    let pref = (c / rho) * (1.0 + rho * rho / c) * chord;
    if pref == 0.0 {
        return Ok(CstarValue {
            value: 0.0,
            truncation_bound: 0.0,
            clamped: false,
        });
    }
    let c2 = c * c;
    let mut prod = 1.0;
    for n in 1..=policy.max_terms as u32 {
        let factor = f_n_raw(rho, c, n) * g_n_raw(rho, c, theta, n);
        prod *= factor;
        let current_log = factor.ln().abs();
        // Factor deviations from 1 shrink by roughly c^2 per term; the
        // leading factor 2 absorbs the slack in that ratio.
        let tail_log = 2.0 * current_log * c2 / (1.0 - c2);
        let tail_rel = tail_log * tail_log.exp();
        if current_log < policy.epsilon / 4.0 && tail_rel < policy.epsilon / 2.0 {
            let raw = pref * prod;
            let clamped = raw > 1.0;
            return Ok(CstarValue {
                value: if clamped { 1.0 } else { raw.max(0.0) },
                truncation_bound: raw.abs() * tail_rel,
                clamped,
            });
        }
    }
    Err(AnnulusError::NonConvergence {
        epsilon: policy.epsilon,
        max_terms: policy.max_terms,
    })
}
