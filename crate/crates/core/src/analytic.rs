//! Cancellation-safe evaluation of the scalar functions behind the
//! weighted second-moment analysis.
//!
//! All quantities are densities: a candidate set occupies a fraction
//! `alpha` of the vertices, the average degree is `c` (so a graph on `n`
//! vertices has `m = c*n/2` edge draws), each edge drawn with both
//! endpoints outside the set contributes a factor `mu` to the set's
//! weight, and `zeta` is the overlap fraction of a pair of candidate
//! sets. The central objects are
//!
//! * `w1(alpha, mu)   = (1-alpha)^2 mu + 2 alpha (1-alpha)` — the per-edge
//!   factor of the first moment,
//! * `w2(alpha, zeta, mu)` — the per-edge factor of the second moment at
//!   overlap `zeta`,
//! * `phi(zeta)` — the exponential rate of the overlap-`zeta` contribution
//!   to `E[X^2] / E[X]^2` at the tuned weight `mu_star`,
//! * `psi(zeta)` — the concave-log-free upper envelope of `phi` obtained
//!   from `ln(1+s) <= s`, together with its first two derivatives.
//!
//! The tuned weight `mu_star(alpha) = (1-2 alpha)/(1-alpha)` makes
//! `zeta = alpha^2` a stationary point of `phi`; both `phi` and `psi`
//! are implemented to return exactly `0.0` there, so downstream argmax
//! logic has a clean reference value.
//!
//! Pure evaluators return NaN on domain violations; the [`ModelParams`]
//! constructors are the checked entry point.

use crate::error::{EngineError, Result};
use serde::Serialize;

/// Binary entropy in nats: `-a ln a - (1-a) ln(1-a)` with `0 ln 0 = 0`.
///
/// Domain `[0, 1]`; returns NaN outside. The result lies in `[0, ln 2]`.
pub fn entropy(a: f64) -> f64 {
    if !(0.0..=1.0).contains(&a) {
        return f64::NAN;
    }
    if a == 0.0 || a == 1.0 {
        return 0.0;
    }
    // Evaluate in terms of the smaller coordinate so the `ln_1p` argument
    // is the one with headroom; `1 - a` is exact for a in [1/2, 1].
    let b = if a > 0.5 { 1.0 - a } else { a };
    -b * b.ln() - (1.0 - b) * (-b).ln_1p()
}

/// The tuned edge weight `(1 - 2 alpha)/(1 - alpha)`, strictly in `(0, 1)`
/// for `alpha` in `(0, 1/2)`; NaN outside that open interval.
pub fn mu_star(alpha: f64) -> f64 {
    if !(alpha > 0.0 && alpha < 0.5) {
        return f64::NAN;
    }
    (1.0 - 2.0 * alpha) / (1.0 - alpha)
}

/// First-moment per-edge factor `(1-alpha)^2 mu + 2 alpha (1-alpha)`,
/// evaluated without any domain restriction beyond finiteness.
///
/// This raw form exists because the exact finite-n moment formulas need it
/// for densities `alpha = k/n` all the way up to 1, outside the
/// [`ModelParams`] invariant `alpha < 1/2`.
pub fn w1_at(alpha: f64, mu: f64) -> f64 {
    let q = 1.0 - alpha;
    q * q * mu + 2.0 * alpha * q
}

/// Second-moment per-edge factor at overlap `zeta`:
///
/// `(1-2a+z)^2 mu^2 + 4(a-z)(1-2a+z) mu + 2(a-z)^2 + 2z(1-2a+z)`.
///
/// Raw form, no domain checks (see [`w1_at`]); callers must keep
/// `max(0, 2 alpha - 1) <= zeta <= alpha` for the value to be meaningful.
/// At `zeta = alpha^2` it equals `w1_at(alpha, mu)^2` for every `mu`.
pub fn w2_at(alpha: f64, zeta: f64, mu: f64) -> f64 {
    let q = 1.0 - 2.0 * alpha + zeta;
    let d = alpha - zeta;
    q * q * mu * mu + 4.0 * d * q * mu + 2.0 * d * d + 2.0 * zeta * q
}

/// Validated scalar parameters `(alpha, c, mu)`.
///
/// Invariants: `0 < alpha < 1/2`, `c > 0`, `0 <= mu <= 1`, all finite.
/// [`ModelParams::new`] tunes `mu` to [`mu_star`]; the overlap-rate
/// functions `phi`, `psi`, `psi_d1`, `psi_d2` are only defined at the
/// tuned weight and return NaN on untuned parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    alpha: f64,
    c: f64,
    mu: f64,
    tuned: bool,
}

impl ModelParams {
    /// Parameters with the tuned weight `mu = mu_star(alpha)`.
    pub fn new(alpha: f64, c: f64) -> Result<Self> {
        let p = Self::with_mu(alpha, c, mu_star(alpha))?;
        debug_assert!(p.tuned);
        Ok(p)
    }

    /// Parameters with an explicit edge weight `mu` in `[0, 1]`.
    pub fn with_mu(alpha: f64, c: f64, mu: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 0.5) || !alpha.is_finite() {
            return Err(EngineError::InvalidParameter {
                name: "alpha",
                value: alpha,
                message: "density must lie strictly inside (0, 1/2)",
            });
        }
        if !(c > 0.0) || !c.is_finite() {
            return Err(EngineError::InvalidParameter {
                name: "c",
                value: c,
                message: "average degree must be positive and finite",
            });
        }
        if !(0.0..=1.0).contains(&mu) {
            return Err(EngineError::InvalidParameter {
                name: "mu",
                value: mu,
                message: "edge weight must lie in [0, 1]",
            });
        }
        Ok(ModelParams {
            alpha,
            c,
            mu,
            tuned: mu == mu_star(alpha),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// True when `mu` equals `mu_star(alpha)` exactly.
    pub fn is_tuned(&self) -> bool {
        self.tuned
    }

    /// First-moment per-edge factor; equals `1 - alpha` at the tuned weight.
    pub fn w1(&self) -> f64 {
        w1_at(self.alpha, self.mu)
    }

    /// Second-moment per-edge factor at overlap `zeta` in `[0, alpha]`
    /// (NaN outside). At the tuned weight it also equals
    /// `(1-alpha)^2 + (zeta-alpha^2)^2/(1-alpha)^2`.
    pub fn w2(&self, zeta: f64) -> f64 {
        if !(0.0..=self.alpha).contains(&zeta) {
            return f64::NAN;
        }
        w2_at(self.alpha, zeta, self.mu)
    }

    /// First-moment exponential rate `h(alpha) + (c/2) ln w1`.
    pub fn f1(&self) -> f64 {
        entropy(self.alpha) + 0.5 * self.c * self.w1().ln()
    }

    /// Second-moment exponential rate at overlap `zeta`:
    /// `h(a) + a h(z/a) + (1-a) h((a-z)/(1-a)) + (c/2) ln w2`.
    pub fn f2(&self, zeta: f64) -> f64 {
        if !(0.0..=self.alpha).contains(&zeta) {
            return f64::NAN;
        }
        let a = self.alpha;
        entropy(a)
            + a * entropy(zeta / a)
            + (1.0 - a) * entropy((a - zeta) / (1.0 - a))
            + 0.5 * self.c * self.w2(zeta).ln()
    }

    /// Overlap rate of `E[X^2]/E[X]^2` at the tuned weight:
    ///
    /// `a h(z/a) + (1-a) h((a-z)/(1-a)) - h(a)
    ///  + (c/2) ln(1 + (z-a^2)^2/(1-a)^4)`,
    ///
    /// identically `f2(zeta) - 2 f1()`. Domain `0 <= zeta <= alpha` at the
    /// tuned weight (NaN otherwise); exactly `0.0` at `zeta = alpha^2`.
    pub fn phi(&self, zeta: f64) -> f64 {
        match self.overlap_core(zeta) {
            OverlapCore::OutOfDomain => f64::NAN,
            OverlapCore::AtAlphaSquared => 0.0,
            OverlapCore::Interior { gap, s } => gap + 0.5 * self.c * s.ln_1p(),
        }
    }

    /// Upper envelope of [`ModelParams::phi`] from `ln(1+s) <= s`:
    /// the same entropy combination plus `(c/2) (z-a^2)^2/(1-a)^4`.
    ///
    /// Shares every intermediate with `phi`, so `psi(z) >= phi(z)` holds
    /// bit-for-bit at every point of the common domain, with exact `0.0`
    /// at `zeta = alpha^2`.
    pub fn psi(&self, zeta: f64) -> f64 {
        match self.overlap_core(zeta) {
            OverlapCore::OutOfDomain => f64::NAN,
            OverlapCore::AtAlphaSquared => 0.0,
            OverlapCore::Interior { gap, s } => gap + 0.5 * self.c * s,
        }
    }

    /// First derivative of `psi`:
    /// `c (z-a^2)/(1-a)^4 + 2 ln(a-z) - ln z - ln(1-2a+z)`.
    ///
    /// Domain is the open interval `0 < zeta < alpha` (log poles at both
    /// endpoints); NaN outside or at an untuned weight.
    pub fn psi_d1(&self, zeta: f64) -> f64 {
        if !self.tuned || !(zeta > 0.0 && zeta < self.alpha) {
            return f64::NAN;
        }
        let a = self.alpha;
        let q = 1.0 - a;
        let q4 = (q * q) * (q * q);
        self.c * (zeta - a * a) / q4 + 2.0 * (a - zeta).ln()
            - zeta.ln()
            - (1.0 - 2.0 * a + zeta).ln()
    }

    /// Second derivative of `psi`:
    /// `c/(1-a)^4 - 2/(a-z) - 1/z - 1/(1-2a+z)`, same domain as
    /// [`ModelParams::psi_d1`].
    pub fn psi_d2(&self, zeta: f64) -> f64 {
        if !self.tuned || !(zeta > 0.0 && zeta < self.alpha) {
            return f64::NAN;
        }
        let a = self.alpha;
        let q = 1.0 - a;
        let q4 = (q * q) * (q * q);
        self.c / q4 - 2.0 / (a - zeta) - 1.0 / zeta - 1.0 / (1.0 - 2.0 * a + zeta)
    }

    /// Third derivative of `psi` (used for Newton refinement of the
    /// inflection roots): `-2/(a-z)^2 + 1/z^2 + 1/(1-2a+z)^2`.
    pub(crate) fn psi_d3(&self, zeta: f64) -> f64 {
        let a = self.alpha;
        let d = a - zeta;
        let q = 1.0 - 2.0 * a + zeta;
        -2.0 / (d * d) + 1.0 / (zeta * zeta) + 1.0 / (q * q)
    }

    /// Shared core of `phi`/`psi`: the entropy gap
    /// `a h(z/a) + (1-a) h((a-z)/(1-a)) - h(a)` and the squared scaled
    /// offset `s = ((z - a^2)/(1-a)^2)^2`. Both vanish identically at
    /// `zeta = alpha^2`, which is short-circuited so the stationary value
    /// is exactly zero.
    fn overlap_core(&self, zeta: f64) -> OverlapCore {
        if !self.tuned || !(0.0..=self.alpha).contains(&zeta) {
            return OverlapCore::OutOfDomain;
        }
        let a = self.alpha;
        if zeta == a * a {
            return OverlapCore::AtAlphaSquared;
        }
        let gap = a * entropy(zeta / a) + (1.0 - a) * entropy((a - zeta) / (1.0 - a)) - entropy(a);
        let q2 = (1.0 - a) * (1.0 - a);
        let r = (zeta - a * a) / q2;
        OverlapCore::Interior { gap, s: r * r }
    }

    /// Samples `phi` and `psi` on a uniform `points`-value grid over
    /// `[0, alpha]` (endpoints included) with `zeta = alpha^2` inserted in
    /// order as one extra row, for `points + 1` rows total.
    pub fn scan_profile(&self, points: usize) -> Result<OverlapProfile> {
        if !self.tuned {
            return Err(EngineError::InvalidParameter {
                name: "mu",
                value: self.mu,
                message: "overlap profile requires the tuned weight mu_star(alpha)",
            });
        }
        if points < 2 {
            return Err(EngineError::InvalidParameter {
                name: "points",
                value: points as f64,
                message: "a profile needs at least 2 grid points",
            });
        }
        let a = self.alpha;
        let a2 = a * a;
        let step = a / (points - 1) as f64;
        let mut rows = Vec::with_capacity(points + 1);
        let mut inserted = false;
        for i in 0..points {
            let zeta = if i + 1 == points { a } else { i as f64 * step };
            if !inserted && zeta > a2 {
                rows.push(self.overlap_point(a2));
                inserted = true;
            }
            rows.push(self.overlap_point(zeta));
        }
        if !inserted {
            rows.push(self.overlap_point(a2));
        }
        let (mut argmax_zeta, mut max_phi) = (rows[0].zeta, rows[0].phi);
        for p in &rows {
            if p.phi > max_phi {
                max_phi = p.phi;
                argmax_zeta = p.zeta;
            }
        }
        Ok(OverlapProfile {
            alpha: a,
            c: self.c,
            points: rows,
            argmax_zeta,
            max_phi,
        })
    }

    fn overlap_point(&self, zeta: f64) -> OverlapPoint {
        OverlapPoint {
            zeta,
            phi: self.phi(zeta),
            psi: self.psi(zeta),
        }
    }
}

enum OverlapCore {
    OutOfDomain,
    AtAlphaSquared,
    Interior { gap: f64, s: f64 },
}

/// One sampled overlap value with both rate functions.
///
/// Invariant: `psi >= phi` (the envelope inequality holds bit-for-bit by
/// construction), both finite on `(0, alpha)` and at the endpoints via the
/// `0 ln 0 = 0` convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapPoint {
    pub zeta: f64,
    pub phi: f64,
    pub psi: f64,
}

/// Sampled curve of `phi` and `psi` over `[0, alpha]` with argmax metadata.
#[derive(Debug, Clone, Serialize)]
pub struct OverlapProfile {
    pub alpha: f64,
    pub c: f64,
    pub points: Vec<OverlapPoint>,
    pub argmax_zeta: f64,
    pub max_phi: f64,
}
