//! Numerical certification of the Bergman and Fock space maximum
//! principles.
//!
//! The library evaluates the Möbius pseudodistance of a circular annulus
//! through its explicit infinite product, builds the closed-form bound
//! `F(rho, c)` on the extremal quotient `gamma(rho)`, and integrates the
//! resulting criteria to certify, in floating point with explicit
//! truncation and quadrature error budgets, that the maximum principle
//! holds for `c = 0.21` (Bergman) and `c = 0.54` (Fock).
//!
//! Modules:
//! - [`metrics`]: the pseudohyperbolic distance and the elementary
//!   identities the argument rests on.
//! - [`annulus`]: truncated infinite-product evaluation of the
//!   pseudodistance in symmetric and `A(c,1)` coordinates.
//! - [`bounds`]: the factor functions `f_n`, `g_n`, the bound `F`, and
//!   grid verifiers for every asserted inequality.
//! - [`quadrature`]: adaptive Gauss-Kronrod integration with error
//!   estimates, including Gaussian-decay tails.
//! - [`certification`]: the two headline criteria, certificates, and
//!   bisection search for the largest certifiable constant.
//! - [`oracle`]: independent ground truth (closed-form norms, the
//!   function-pair checker, a brute-force pseudodistance lower bound).
//! - [`cli`]: the command-line front end.

pub mod annulus;
pub mod bounds;
pub mod certification;
pub mod cli;
pub mod metrics;
pub mod oracle;
pub mod quadrature;

pub use metrics::{Complex, DiskPoint};
