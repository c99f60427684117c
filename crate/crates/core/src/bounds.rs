//! Factor functions `f_n`, `g_n`, the closed-form bound `F(rho, c)` on
//! the same-circle pseudodistance, the induced upper bound on the
//! extremal quotient `gamma(rho)`, and grid verifiers for each inequality
//! in the bound chain.
//!
//! The claims are verified numerically on dense grids; grid densities are
//! configurable and the defaults keep each verifier under a minute.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("requires 0 < c < rho < 1 (c = {c}, rho = {rho})")]
    Domain { rho: f64, c: f64 },
    #[error("n must be a positive integer")]
    InvalidIndex,
    #[error("denominator factor under a square root is not positive")]
    SingularDenominator,
}

/// `(1 - x)^2 + 4 x sin^2(theta/2)`, the stable form of
/// `1 - 2 x cos(theta) + x^2`. Exact at `theta = 0`, which keeps the
/// theta-maximization scans free of cancellation noise near the boundary.
fn quad_factor(x: f64, theta: f64) -> f64 {
    let s = (theta / 2.0).sin();
    (1.0 - x) * (1.0 - x) + 4.0 * x * s * s
}

/// `f_n(rho, c) = (1 + rho^2 c^{2n-1}) (1 + rho^{-2} c^{2n+1}) / (1 + c^{2n-1})^2`,
/// without argument validation.
pub fn f_n_raw(rho: f64, c: f64, n: u32) -> f64 {
    let n = n as i32;
    let a = c.powi(2 * n - 1);
    let rho2 = rho * rho;
    (1.0 + rho2 * a) * (1.0 + a * c * c / rho2) / ((1.0 + a) * (1.0 + a))
}

/// `g_n(rho, c, theta)`, without argument validation.
pub fn g_n_raw(rho: f64, c: f64, theta: f64, n: u32) -> f64 {
    let n = n as i32;
    let rho2 = rho * rho;
    let num = quad_factor(c.powi(2 * n), theta);
    let d1 = quad_factor(rho2 * c.powi(2 * n - 2), theta);
    let d2 = quad_factor(c.powi(2 * n) / rho2, theta);
    num / (d1.sqrt() * d2.sqrt())
}

/// `g_n(rho, c, pi) = (1 + c^{2n})^2 / ((1 + rho^2 c^{2n-2}) (1 + rho^{-2} c^{2n}))`.
pub fn g_n_at_pi(rho: f64, c: f64, n: u32) -> f64 {
    let n = n as i32;
    let rho2 = rho * rho;
    let a = c.powi(2 * n);
    (1.0 + a) * (1.0 + a) / ((1.0 + rho2 * c.powi(2 * n - 2)) * (1.0 + a / rho2))
}

fn check_domain(rho: f64, c: f64) -> Result<(), BoundsError> {
    if !(c > 0.0 && c < rho && rho < 1.0) {
        return Err(BoundsError::Domain { rho, c });
    }
    Ok(())
}

pub fn f_n_factor(rho: f64, c: f64, n: u32) -> Result<f64, BoundsError> {
    check_domain(rho, c)?;
    if n == 0 {
        return Err(BoundsError::InvalidIndex);
    }
    Ok(f_n_raw(rho, c, n))
}

pub fn g_n_factor(rho: f64, c: f64, theta: f64, n: u32) -> Result<f64, BoundsError> {
    check_domain(rho, c)?;
    if n == 0 {
        return Err(BoundsError::InvalidIndex);
    }
    let n_i = n as i32;
    let rho2 = rho * rho;
    if quad_factor(rho2 * c.powi(2 * n_i - 2), theta) <= 0.0
        || quad_factor(c.powi(2 * n_i) / rho2, theta) <= 0.0
    {
        return Err(BoundsError::SingularDenominator);
    }
    Ok(g_n_raw(rho, c, theta, n))
}

/// Closed-form upper bound `F(rho, c)` for the same-circle pseudodistance:
/// `2 (c/rho)(1 + rho^2/c) (1 - c^12)/(1 - c^10) prod_{n=1}^{5} f_n(rho,c) g_n(rho,c,pi)`.
///
/// May exceed 1; callers must handle that case (see
/// [`crate::certification::bergman_integrand`]).
pub fn f_bound(rho: f64, c: f64) -> Result<f64, BoundsError> {
    check_domain(rho, c)?;
    let mut prod = 1.0;
    for n in 1..=5 {
        prod *= f_n_raw(rho, c, n) * g_n_at_pi(rho, c, n);
    }
    let tail = (1.0 - c.powi(12)) / (1.0 - c.powi(10));
    Ok(2.0 * (c / rho) * (1.0 + rho * rho / c) * tail * prod)
}

/// Upper bound on the extremal quotient, `F / sqrt(1 - F^2)` when
/// `F(rho, c) < 1`. `Unbounded` is a legitimate value, not an error: the
/// bound is vacuous wherever `F >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GammaBound {
    Finite(f64),
    Unbounded,
}

pub fn gamma_upper(rho: f64, c: f64) -> Result<GammaBound, BoundsError> {
    let f = f_bound(rho, c)?;
    if f < 1.0 {
        Ok(GammaBound::Finite(f / (1.0 - f * f).sqrt()))
    } else {
        Ok(GammaBound::Unbounded)
    }
}

/// Point of the `A(c, 1)` annulus at which an inequality is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationPoint {
    pub rho: f64,
    pub theta: f64,
}

/// Grid over which an inequality is scanned. `n_min > n_max` denotes an
/// empty factor-index range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub c_values: Vec<f64>,
    pub rho_steps: usize,
    pub theta_steps: usize,
    pub n_min: u32,
    pub n_max: u32,
}

impl GridSpec {
    /// Default grid for the factor-bound claims: c in {0.05, 0.15, 0.21, 0.24},
    /// 100 interior rho points, n up to 10.
    pub fn default_claims() -> Self {
        GridSpec {
            c_values: vec![0.05, 0.15, 0.21, 0.24],
            rho_steps: 100,
            theta_steps: 90,
            n_min: 1,
            n_max: 10,
        }
    }

    /// Default grid for the closed-form product-chain claim, sampling c
    /// across (0, 0.25).
    pub fn default_product_chain() -> Self {
        GridSpec {
            c_values: (1..=49).map(|i| i as f64 / 200.0).collect(),
            rho_steps: 1,
            theta_steps: 1,
            n_min: 1,
            n_max: 64,
        }
    }

    /// Default dense grid for the least-documented claim: 400 rho x 720
    /// theta per c value.
    pub fn default_chord_product() -> Self {
        GridSpec {
            c_values: vec![0.1, 0.21, 0.24],
            rho_steps: 400,
            theta_steps: 720,
            n_min: 1,
            n_max: 5,
        }
    }

    /// Interior rho samples of (c, 1), endpoints excluded.
    fn rho_grid(&self, c: f64) -> Vec<f64> {
        (1..=self.rho_steps)
            .map(|i| c + (1.0 - c) * i as f64 / (self.rho_steps + 1) as f64)
            .collect()
    }

    /// Theta samples of [0, pi], inclusive. The theta-dependence of every
    /// claim enters only through cos(theta), so [0, pi] covers the circle.
    fn theta_grid(&self) -> Vec<f64> {
        if self.theta_steps <= 1 {
            return vec![0.0];
        }
        (0..self.theta_steps)
            .map(|j| std::f64::consts::PI * j as f64 / (self.theta_steps - 1) as f64)
            .collect()
    }

    fn n_range(&self) -> std::ops::RangeInclusive<u32> {
        self.n_min..=self.n_max
    }
}

/// Worst grid point found by a verifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorstPoint {
    pub rho: f64,
    pub theta: f64,
    pub c: f64,
    pub n: u32,
}

/// Outcome of scanning one inequality over a grid. `pass` holds exactly
/// when `max_violation <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim_id: String,
    pub grid: GridSpec,
    pub max_violation: f64,
    pub worst_point: Option<WorstPoint>,
    pub tolerance: f64,
    pub pass: bool,
}

fn make_report(
    claim_id: &str,
    grid: &GridSpec,
    tolerance: f64,
    worst: Option<(f64, WorstPoint)>,
) -> ClaimReport {
    match worst {
        None => ClaimReport {
            claim_id: claim_id.to_string(),
            grid: grid.clone(),
            max_violation: 0.0,
            worst_point: None,
            tolerance,
            pass: true,
        },
        Some((v, p)) => ClaimReport {
            claim_id: claim_id.to_string(),
            grid: grid.clone(),
            max_violation: v,
            worst_point: Some(p),
            tolerance,
            pass: v <= tolerance,
        },
    }
}

fn fold_max(a: Option<(f64, WorstPoint)>, b: Option<(f64, WorstPoint)>) -> Option<(f64, WorstPoint)> {
    match (a, b) {
        (None, x) => x,
        (x, None) => x,
        (Some(x), Some(y)) => Some(if y.0 > x.0 { y } else { x }),
    }
}

/// Checks `f_n(rho, c) <= (1 + c^{2n+1}) / (1 + c^{2n-1})` over the grid.
pub fn verify_fn_bound(grid: &GridSpec) -> ClaimReport {
    let tol = 1e-12;
    let mut worst: Option<(f64, WorstPoint)> = None;
    for &c in &grid.c_values {
        for rho in grid.rho_grid(c) {
            for n in grid.n_range() {
                let bound = (1.0 + c.powi(2 * n as i32 + 1)) / (1.0 + c.powi(2 * n as i32 - 1));
                let v = f_n_raw(rho, c, n) - bound;
                worst = fold_max(worst, Some((v, WorstPoint { rho, theta: 0.0, c, n })));
            }
        }
    }
    make_report("fn-bound", grid, tol, worst)
}

/// Checks both `g_n(rho, c, theta) <= g_n(rho, c, 0)` and, for `n >= 2`,
/// `g_n(rho, c, 0) <= (1 - c^{2n}) / (1 - c^{2n-2})`. The closed bound is
/// vacuous at `n = 1` where its denominator vanishes.
pub fn verify_gn_theta_max(grid: &GridSpec) -> ClaimReport {
    let tol = 1e-12;
    let thetas = grid.theta_grid();
    let mut worst: Option<(f64, WorstPoint)> = None;
    for &c in &grid.c_values {
        let per_rho: Vec<_> = grid
            .rho_grid(c)
            .into_par_iter()
            .map(|rho| {
                let mut local: Option<(f64, WorstPoint)> = None;
                for n in grid.n_range() {
                    let g0 = g_n_raw(rho, c, 0.0, n);
                    for &theta in &thetas {
                        let v = g_n_raw(rho, c, theta, n) - g0;
                        local = fold_max(local, Some((v, WorstPoint { rho, theta, c, n })));
                    }
                    if n >= 2 {
                        let bound =
                            (1.0 - c.powi(2 * n as i32)) / (1.0 - c.powi(2 * n as i32 - 2));
                        let v = g0 - bound;
                        local = fold_max(local, Some((v, WorstPoint { rho, theta: 0.0, c, n })));
                    }
                }
                local
            })
            .collect();
        worst = per_rho.into_iter().fold(worst, fold_max);
    }
    make_report("gn-theta-max", grid, tol, worst)
}

/// Checks the closed-form product-chain ratio
/// `(1 + c^{2n+1}) (1 - c^{2n+2}) / ((1 + c^{2n-1}) (1 - c^{2n})) <= 1`
/// over the c grid. The ratio bounds `f_n g_{n+1}` and is what makes the
/// product tail collapse; it holds comfortably for c < 1/4 and first
/// fails near c = 0.566.
pub fn verify_fg_product_bound(grid: &GridSpec) -> ClaimReport {
    let tol = 1e-14;
    let mut worst: Option<(f64, WorstPoint)> = None;
    for &c in &grid.c_values {
        for n in grid.n_range() {
            let n_i = n as i32;
            let ratio = (1.0 + c.powi(2 * n_i + 1)) * (1.0 - c.powi(2 * n_i + 2))
                / ((1.0 + c.powi(2 * n_i - 1)) * (1.0 - c.powi(2 * n_i)));
            let v = ratio - 1.0;
            worst = fold_max(worst, Some((v, WorstPoint { rho: 0.0, theta: 0.0, c, n })));
        }
    }
    make_report("fg-product", grid, tol, worst)
}

/// Checks the truncated tail product `prod_{n=6}^{69} f_n g_n(theta=0)`
/// against the closed bound `(1 - c^12) / (1 - c^10)`.
pub fn verify_tail_bound(grid: &GridSpec) -> ClaimReport {
    let tol = 1e-12;
    let mut worst: Option<(f64, WorstPoint)> = None;
    for &c in &grid.c_values {
        let bound = (1.0 - c.powi(12)) / (1.0 - c.powi(10));
        for rho in grid.rho_grid(c) {
            let mut tail = 1.0;
            for n in 6..6 + 64 {
                tail *= f_n_raw(rho, c, n) * g_n_raw(rho, c, 0.0, n);
            }
            let v = tail - bound;
            worst = fold_max(worst, Some((v, WorstPoint { rho, theta: 0.0, c, n: 6 })));
        }
    }
    make_report("tail-bound", grid, tol, worst)
}

/// Checks the chord-weighted head product
/// `sqrt(2 (1 - cos theta)) prod_{n=1}^{5} g_n(rho, c, theta)
///  <= 2 prod_{n=1}^{5} g_n(rho, c, pi)`
/// on a dense (rho, theta) grid per c value.
pub fn verify_tedious_bound(grid: &GridSpec) -> ClaimReport {
    let tol = 1e-10;
    let thetas = grid.theta_grid();
    let mut worst: Option<(f64, WorstPoint)> = None;
    for &c in &grid.c_values {
        let per_rho: Vec<_> = grid
            .rho_grid(c)
            .into_par_iter()
            .map(|rho| {
                let mut rhs = 2.0;
                for n in 1..=5 {
                    rhs *= g_n_at_pi(rho, c, n);
                }
                let mut local: Option<(f64, WorstPoint)> = None;
                for &theta in &thetas {
                    let mut lhs = 2.0 * (theta / 2.0).sin().abs();
                    for n in 1..=5 {
                        lhs *= g_n_raw(rho, c, theta, n);
                    }
                    let v = lhs - rhs;
                    local = fold_max(local, Some((v, WorstPoint { rho, theta, c, n: 1 })));
                }
                local
            })
            .collect();
        worst = per_rho.into_iter().fold(worst, fold_max);
    }
    make_report("tedious-bound", grid, tol, worst)
}

/// Runs every verifier on its default grid.
pub fn run_all_claims() -> Vec<ClaimReport> {
    vec![
        verify_fn_bound(&GridSpec::default_claims()),
        verify_gn_theta_max(&GridSpec::default_claims()),
        verify_fg_product_bound(&GridSpec::default_product_chain()),
        verify_tail_bound(&GridSpec::default_claims()),
        verify_tedious_bound(&GridSpec::default_chord_product()),
    ]
}
