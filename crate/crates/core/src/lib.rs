//! Bounds engine and validation harness for independent sets in sparse
//! random multigraphs.
//!
//! The crate evaluates the closed-form machinery behind a weighted
//! second-moment analysis of maximum independent sets in the `G̃(n, m)`
//! model (n vertices, m ordered vertex pairs drawn uniformly with
//! replacement, loops and repeats allowed):
//!
//! * [`analytic`] — cancellation-safe evaluation of the scalar functions:
//!   entropy, the per-edge moment factors `w1`/`w2`, the exponential rates
//!   `f1`/`f2`, the overlap rate `phi`, its upper envelope `psi`, and the
//!   first two `psi` derivatives, at the tuned edge weight `mu_star`.
//! * [`stationary`] — stationary-point structure of `psi` (the two
//!   inflections and the interior second maximum), numerical certification
//!   that `phi` is globally maximized at the independent-pair overlap
//!   `alpha^2`, and scaling diagnostics for the inflection offsets.
//! * [`bounds`] — threshold bounds: the first-moment upper bound on the
//!   critical average degree, the matching lower bound with its `x/sqrt(alpha)`
//!   window, the Lambert-W inversion giving critical-density bounds in the
//!   average degree, and an asymptotic expansion of `W(e*c/2)`.
//! * [`graph`] — the `G̃(n, m)` sampler and the combinatorial side:
//!   independence tests, the weight `w(S) = mu^(edges fully outside S)`,
//!   Karp–Sipser and randomized greedy heuristics, an exact
//!   branch-and-bound maximum-independent-set solver, and seeded trial
//!   running.
//! * [`moments`] — exact finite-n first and second moments of the weighted
//!   independent-set count, brute-force and Monte Carlo cross-checks, and
//!   the per-overlap contribution profile that links finite-n data to the
//!   rate function `phi`.
//! * [`roots`] — safeguarded bracketing root finders shared by the modules
//!   above.
//!
//! All floating-point work is binary64. Functions document their domains;
//! pure evaluators return NaN outside them, while constructors, solvers,
//! and samplers return [`error::EngineError`].

#![forbid(unsafe_code)]
// `!(x > 0.0)` and friends deliberately treat NaN as out-of-domain.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Frozen reference values keep their full 17-significant-digit print.
#![allow(clippy::excessive_precision)]

pub mod analytic;
pub mod bounds;
pub mod error;
pub mod graph;
pub mod moments;
pub mod roots;
pub mod stationary;

pub use analytic::{ModelParams, OverlapPoint, OverlapProfile};
pub use error::{EngineError, Result};
pub use graph::{Algorithm, MultiGraph, SimResult, VertexSet};
pub use moments::MomentReport;
pub use stationary::{MaxCertificate, StationaryReport, Verdict};
