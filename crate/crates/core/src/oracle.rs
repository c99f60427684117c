//! Independent ground truth: closed-form Bergman/Fock norms for
//! polynomials, an end-to-end maximum-principle pair checker, and a
//! brute-force lower-bound optimizer for the annulus pseudodistance.
//!
//! Everything here deliberately avoids the product formula of
//! [`crate::annulus`], so agreement between the two is evidence rather
//! than tautology.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annulus::AnnulusDomain;
use crate::certification::Space;
use crate::metrics::Complex;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("evaluation at z = 0 with negative powers")]
    EvalAtZero,
    #[error("norm closed forms require a polynomial (min_degree = {0} < 0)")]
    NegativePowers(i32),
    #[error("degree {0} exceeds the factorial overflow guard (150)")]
    DegreeOverflow(i32),
    #[error("coefficient list must be nonempty")]
    EmptyCoefficients,
    #[error("coefficients must be finite")]
    NonFinite,
    #[error("optimizer requires degree >= 1 (got {0})")]
    InvalidDegree(i64),
    #[error("annulus error: {0}")]
    Annulus(#[from] crate::annulus::AnnulusError),
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    min_degree: i32,
    coeffs: Vec<[f64; 2]>,
}

impl From<LaurentFunction> for LaurentRepr {
    fn from(f: LaurentFunction) -> Self {
        LaurentRepr {
            min_degree: f.min_degree,
            coeffs: f.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl TryFrom<LaurentRepr> for LaurentFunction {
    type Error = OracleError;
    fn try_from(r: LaurentRepr) -> Result<Self, OracleError> {
        LaurentFunction::new(
            r.min_degree,
            r.coeffs.iter().map(|&[re, im]| Complex::new(re, im)).collect(),
        )
    }
}

/// A Laurent polynomial: `coeffs[k]` multiplies `z^{min_degree + k}`.
///
/// Normalized so leading and trailing coefficients are nonzero; the zero
/// function is canonically `min_degree = 0, coeffs = [0]`. JSON form:
/// `{"min_degree": int, "coeffs": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LaurentRepr", into = "LaurentRepr")]
pub struct LaurentFunction {
    min_degree: i32,
    coeffs: Vec<Complex>,
}

impl LaurentFunction {
    pub fn new(min_degree: i32, mut coeffs: Vec<Complex>) -> Result<Self, OracleError> {
        if coeffs.is_empty() {
            return Err(OracleError::EmptyCoefficients);
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(OracleError::NonFinite);
        }
        let mut min_degree = min_degree;
        // trim trailing zeros
        while coeffs.len() > 1 && coeffs.last() == Some(&Complex::new(0.0, 0.0)) {
            coeffs.pop();
        }
        // trim leading zeros, shifting the minimum degree up
        while coeffs.len() > 1 && coeffs[0] == Complex::new(0.0, 0.0) {
            coeffs.remove(0);
            min_degree += 1;
        }
        if coeffs.len() == 1 && coeffs[0] == Complex::new(0.0, 0.0) {
            min_degree = 0;
        }
        Ok(LaurentFunction { min_degree, coeffs })
    }

    /// Constant polynomial.
    pub fn constant(v: Complex) -> Self {
        LaurentFunction::new(0, vec![v]).expect("constant is valid")
    }

    /// The monomial `z^k`.
    pub fn monomial(k: i32) -> Self {
        LaurentFunction::new(k, vec![Complex::new(1.0, 0.0)]).expect("monomial is valid")
    }

    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.coeffs.len() as i32 - 1
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex::new(0.0, 0.0)
    }

    fn leading_coeff(&self) -> Complex {
        *self.coeffs.last().expect("nonempty by invariant")
    }
}

/// Horner-style evaluation; `z = 0` is rejected when negative powers are
/// present.
pub fn evaluate(f: &LaurentFunction, z: Complex) -> Result<Complex, OracleError> {
    if f.min_degree < 0 && z.norm() == 0.0 {
        return Err(OracleError::EvalAtZero);
    }
    let mut acc = Complex::new(0.0, 0.0);
    for &c in f.coeffs.iter().rev() {
        acc = acc * z + c;
    }
    Ok(acc * z.powi(f.min_degree))
}

fn require_polynomial(p: &LaurentFunction) -> Result<(), OracleError> {
    if p.min_degree < 0 {
        return Err(OracleError::NegativePowers(p.min_degree));
    }
    Ok(())
}

/// Bergman norm squared against normalized area measure:
/// `|| sum a_k z^k ||^2 = sum |a_k|^2 / (k + 1)`.
pub fn bergman_norm_sq(p: &LaurentFunction) -> Result<f64, OracleError> {
    require_polynomial(p)?;
    Ok(p.coeffs
        .iter()
        .enumerate()
        .map(|(i, a)| a.norm_sqr() / (p.min_degree as f64 + i as f64 + 1.0))
        .sum())
}

/// Fock norm squared against the Gaussian weight:
/// `|| sum a_k z^k ||^2 = pi * sum |a_k|^2 * k!`.
pub fn fock_norm_sq(p: &LaurentFunction) -> Result<f64, OracleError> {
    require_polynomial(p)?;
    let max_deg = p.max_degree();
    if max_deg > 150 {
        return Err(OracleError::DegreeOverflow(max_deg));
    }
    let mut factorial = 1.0;
    let mut factorials = vec![1.0f64];
    for k in 1..=max_deg {
        factorial *= k as f64;
        factorials.push(factorial);
    }
    Ok(std::f64::consts::PI
        * p.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * factorials[p.min_degree as usize + i])
            .sum::<f64>())
}

/// Outcome of a maximum-principle check on a concrete pair. The report
/// does not judge: `hypothesis_margin < 0` means the hypothesis itself
/// fails and downstream callers decide what that implies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub space: Space,
    pub c: f64,
    /// Minimum of `|g(z)| - |f(z)|` over the sample grid (Fock: folded
    /// with the exact degree/leading-coefficient check at infinity).
    pub hypothesis_margin: f64,
    pub norm_f_sq: f64,
    pub norm_g_sq: f64,
    pub conclusion_holds: bool,
    pub samples: usize,
}

/// Radius beyond which `|g| - |f|` is controlled by the leading terms for
/// polynomial data: the lower-order terms of both are dominated once
/// `|z| >= 2 (1 + sum of coefficient moduli)`.
fn fock_outer_radius(f: &LaurentFunction, g: &LaurentFunction, c: f64) -> f64 {
    let mass: f64 = f
        .coeffs
        .iter()
        .chain(g.coeffs.iter())
        .map(|a| a.norm())
        .sum();
    (2.0 * (1.0 + mass)).max(2.0 * c).max(2.0)
}

/// Samples `|g| - |f|` on concentric circles and reports the
/// maximum-principle verdict through the closed-form norms.
pub fn check_pair(
    f: &LaurentFunction,
    g: &LaurentFunction,
    c: f64,
    space: Space,
    grid_density: usize,
) -> Result<PairReport, OracleError> {
    require_polynomial(f)?;
    require_polynomial(g)?;
    let density = grid_density.max(2);
    let outer = match space {
        Space::Bergman => 1.0,
        Space::Fock => fock_outer_radius(f, g, c),
    };

    let mut margin = f64::INFINITY;
    let mut samples = 0usize;
    for i in 0..density {
        // both boundary circles included
        let r = c + (outer - c) * i as f64 / (density - 1) as f64;
        for j in 0..density {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / density as f64;
            let z = Complex::from_polar(r, theta);
            let fv = evaluate(f, z)?;
            let gv = evaluate(g, z)?;
            margin = margin.min(gv.norm() - fv.norm());
            samples += 1;
        }
    }

    if space == Space::Fock {
        // exact |z| -> infinity behavior for polynomials
        let (df, dg) = (f.max_degree(), g.max_degree());
        if !f.is_zero() {
            if g.is_zero() || df > dg {
                margin = margin.min(-1.0);
            } else if df == dg {
                margin = margin.min(g.leading_coeff().norm() - f.leading_coeff().norm());
            }
        }
    }

    let (norm_f_sq, norm_g_sq) = match space {
        Space::Bergman => (bergman_norm_sq(f)?, bergman_norm_sq(g)?),
        Space::Fock => (fock_norm_sq(f)?, fock_norm_sq(g)?),
    };
    Ok(PairReport {
        space,
        c,
        hypothesis_margin: margin,
        norm_f_sq,
        norm_g_sq,
        conclusion_holds: norm_f_sq <= norm_g_sq,
        samples,
    })
}

const BOUNDARY_SAMPLES: usize = 512;
const BOUNDARY_HEADROOM: f64 = 1e-6;

/// Boundary sample points of both circles of `A(c, 1)`, computed once per
/// optimizer run: the trigonometry dominates the objective cost otherwise.
fn boundary_samples(c: f64) -> Vec<Complex> {
    let mut points = Vec::with_capacity(2 * BOUNDARY_SAMPLES);
    for k in 0..BOUNDARY_SAMPLES {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / BOUNDARY_SAMPLES as f64;
        points.push(Complex::from_polar(c, theta));
        points.push(Complex::from_polar(1.0, theta));
    }
    points
}

/// Scales a candidate map so its sampled boundary maximum is
/// `1 - BOUNDARY_HEADROOM`, then returns the pseudohyperbolic distance of
/// the images of the two interior points. Candidates that degenerate
/// (zero boundary maximum) score 0.
fn candidate_objective(
    omega: &[Complex],
    min_degree: i32,
    a: Complex,
    z: Complex,
    boundary: &[Complex],
) -> f64 {
    let eval = |w: Complex| -> Complex {
        let mut acc = Complex::new(0.0, 0.0);
        for &co in omega.iter().rev() {
            acc = acc * w + co;
        }
        acc * w.powi(min_degree)
    };
    let mut boundary_max = 0.0f64;
    for &w in boundary {
        boundary_max = boundary_max.max(eval(w).norm_sqr());
    }
    let boundary_max = boundary_max.sqrt();
    if boundary_max <= 0.0 || !boundary_max.is_finite() {
        return 0.0;
    }
    let scale = (1.0 - BOUNDARY_HEADROOM) / boundary_max;
    let wa = eval(a) * scale;
    let wz = eval(z) * scale;
    let denom = (Complex::new(1.0, 0.0) - wa.conj() * wz).norm();
    if denom == 0.0 {
        return 0.0;
    }
    let d = (wa - wz).norm() / denom;
    if d.is_finite() {
        d.min(1.0 - f64::EPSILON)
    } else {
        0.0
    }
}

/// Coordinate-wise local search on the real and imaginary parts of each
/// coefficient, with a halving step schedule.
fn coordinate_search(
    coeffs: &mut Vec<Complex>,
    min_degree: i32,
    a: Complex,
    z: Complex,
    boundary: &[Complex],
) -> f64 {
    let mut best = candidate_objective(coeffs, min_degree, a, z, boundary);
    let mut step = 0.5;
    let mut sweeps = 0;
    // the sweep cap trades a little optimality for a bounded runtime;
    // every returned value remains a valid lower bound
    while step > 1e-3 && sweeps < 80 {
        sweeps += 1;
        let mut improved = false;
        for i in 0..coeffs.len() {
            for (dre, dim) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
                let saved = coeffs[i];
                coeffs[i] += Complex::new(dre, dim);
                let v = candidate_objective(coeffs, min_degree, a, z, boundary);
                if v > best {
                    best = v;
                    improved = true;
                } else {
                    coeffs[i] = saved;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best
}

/// Brute-force lower bound for `c*_{A(c,1)}(a, z)` over Laurent
/// polynomials of degrees `[-degree, degree]`, rescaled to map (sampled)
/// boundary circles into the unit disk, maximized by random restarts plus
/// coordinate-wise local search.
///
/// Staged by degree: the best candidate at each degree seeds the next, so
/// the result is nondecreasing in `degree` and, for a fixed seed
/// sequence, nondecreasing in `restarts`.
pub fn cstar_lower_bound(
    a: f64,
    z: Complex,
    dom: &AnnulusDomain,
    degree: i64,
    restarts: usize,
    seed: u64,
) -> Result<f64, OracleError> {
    if degree < 1 {
        return Err(OracleError::InvalidDegree(degree));
    }
    let c = dom.inner();
    for (name, value) in [("a", a), ("|z|", z.norm())] {
        if !(value > c && value < 1.0) {
            return Err(OracleError::Annulus(
                crate::annulus::AnnulusError::OutsideAnnulus {
                    name: if name == "a" { "a" } else { "|z|" },
                    value,
                    lo: c,
                    hi: 1.0,
                },
            ));
        }
    }
    let a_pt = Complex::new(a, 0.0);
    let boundary = boundary_samples(c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    let mut best_coeffs: Vec<Complex> = Vec::new();

    for d in 1..=degree as usize {
        let len = 2 * d + 1;
        let min_degree = -(d as i32);
        let mut starts: Vec<Vec<Complex>> = Vec::new();
        if !best_coeffs.is_empty() {
            // pad the previous degree's winner with zeros on both ends
            let mut padded = vec![Complex::new(0.0, 0.0); len];
            let offset = (len - best_coeffs.len()) / 2;
            padded[offset..offset + best_coeffs.len()].copy_from_slice(&best_coeffs);
            starts.push(padded);
        } else {
            // identity-like seed: omega(z) = z
            let mut id = vec![Complex::new(0.0, 0.0); len];
            id[d + 1] = Complex::new(1.0, 0.0);
            starts.push(id);
        }
        for _ in 0..restarts {
            starts.push(
                (0..len)
                    .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
            );
        }
        for mut coeffs in starts {
            let v = coordinate_search(&mut coeffs, min_degree, a_pt, z, &boundary);
            if v > best {
                best = v;
                best_coeffs = coeffs;
            }
        }
    }
    Ok(best)
}
