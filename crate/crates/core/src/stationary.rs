//! Stationary-point structure of the envelope `psi` and numerical
//! certification that the overlap rate `phi` attains its global maximum on
//! `[0, alpha]` at the independent-pair overlap `zeta = alpha^2`.
//!
//! On `(0, alpha)` the second derivative `psi''` changes sign like
//! `- / + / -` when the average degree is high enough: the two sign
//! changes are the inflection overlaps `zeta1 < zeta2`, and beyond
//! `zeta2` the function is concave with at most one more stationary
//! point, the interior local maximum `zeta3` (the root of `psi'` in
//! `[zeta2, alpha)`). The certification step scans a uniform overlap
//! grid, augments it with the refined stationary points and `alpha^2`,
//! and uses `psi` as a cheap upper envelope, falling back to `phi` only
//! where the envelope cannot already certify a point.
//!
//! The relative offsets of the inflection and maximum from `alpha`,
//! `delta2 = 1 - zeta2/alpha` and `delta3 = 1 - zeta3/alpha`, obey
//! scaling laws under the coupling schedules of [`LemmaSchedule`]:
//! `delta2 * ln(1/alpha) -> 1` and `delta3 * e / sqrt(alpha) -> 1` as
//! `alpha -> 0`. [`lemma_diagnostics`] tabulates those ratios.

use crate::analytic::ModelParams;
use crate::error::{EngineError, Result};
use crate::roots::{bisect, newton_bisect, Bracket};
use serde::Serialize;

/// Relative tolerance (in the overlap variable) to which stationary points
/// are refined.
pub const REFINEMENT_TOLERANCE: f64 = 1e-12;

/// Bisection narrows a bracket to this fraction of `alpha` before Newton
/// polishing takes over.
const BISECT_WIDTH_FACTOR: f64 = 1e-3;

/// Stationary searches stay inside `[alpha * MARGIN, alpha * (1 - MARGIN)]`
/// to avoid the derivative poles at the overlap endpoints.
const ENDPOINT_MARGIN: f64 = 1e-9;

/// Outcome of the inflection search: either the two sign changes of
/// `psi''` in `(0, alpha)`, or the certificate that `psi''` stays negative
/// so `psi` is concave with its single maximum at `alpha^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Inflections {
    Two { zeta1: f64, zeta2: f64 },
    NoSecondMax,
}

/// Outcome of the interior-maximum search on `[zeta2, alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Zeta3Outcome {
    Root(f64),
    /// `psi'` has no sign change right of `zeta2`: `psi` is monotone
    /// decreasing there and no interior second maximum exists.
    NoInteriorRoot,
}

/// Certification verdict for the global maximum of `phi` on `[0, alpha]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Every evaluated point is below the margin and no point outside the
    /// grid cell of `alpha^2` comes within the margin of the peak value 0.
    MaxAtAlphaSquared,
    /// Some point exceeds the margin, or ties the peak within the margin
    /// away from `alpha^2` (ties are conservatively treated as failure).
    MaxElsewhere,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::MaxAtAlphaSquared => write!(f, "MaxAtAlphaSquared"),
            Verdict::MaxElsewhere => write!(f, "MaxElsewhere"),
        }
    }
}

/// Stationary-point locations and their scaling diagnostics at one
/// parameter point. Fields that require a structure that does not exist
/// at these parameters are `None` (serialized as null / empty).
#[derive(Debug, Clone, Serialize)]
pub struct StationaryReport {
    pub alpha: f64,
    pub c: f64,
    /// True when the full structure `0 < zeta1 < zeta2 < zeta3 < alpha`
    /// exists.
    pub exists_second_max: bool,
    pub zeta1: Option<f64>,
    pub zeta2: Option<f64>,
    pub zeta3: Option<f64>,
    /// `1 - zeta2/alpha`, in `(0, 1)` when present.
    pub delta2: Option<f64>,
    /// `1 - zeta3/alpha`, in `(0, 1)` when present.
    pub delta3: Option<f64>,
    /// `psi(zeta3)`: the envelope value at the interior maximum; its sign
    /// decides whether the second peak can beat the peak at `alpha^2`.
    pub psi_at_zeta3: Option<f64>,
    /// `delta2 * ln(1/alpha)` — approaches 1 from above as `alpha -> 0`
    /// under the [`LemmaSchedule::Lemma2`] coupling.
    pub lemma2_ratio: Option<f64>,
    /// `delta3 * e / sqrt(alpha)` — approaches 1 as `alpha -> 0` under the
    /// [`LemmaSchedule::Lemma3`] and [`LemmaSchedule::Lemma4`] couplings.
    pub lemma3_ratio: Option<f64>,
}

/// Certificate produced by [`certify_global_max_with`].
#[derive(Debug, Clone, Serialize)]
pub struct MaxCertificate {
    /// Overlap where the certified maximum is attained; `alpha^2` when the
    /// verdict is [`Verdict::MaxAtAlphaSquared`], otherwise the worst
    /// offending point.
    pub argmax_zeta: f64,
    /// Largest certified value of `phi` over the evaluation set (the peak
    /// itself contributes exactly 0).
    pub phi_max: f64,
    /// Value certified at the interior maximum `zeta3` (the `psi` envelope
    /// bound where that suffices, the exact `phi` otherwise); negative
    /// infinity when no interior maximum exists.
    pub second_peak_value: f64,
    pub verdict: Verdict,
    /// Number of uniform grid points evaluated (stationary points and
    /// `alpha^2` are added on top).
    pub grid_points: usize,
    /// Relative tolerance to which the added stationary points were refined.
    pub refinement_tolerance: f64,
    /// Certification margin separating numerical noise from genuine
    /// positivity.
    pub margin: f64,
}

/// Options for [`certify_global_max_with`].
#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    /// Uniform grid size over `[0, alpha]`, endpoints included.
    pub grid_points: usize,
    /// A point certifies as "below the peak" when its value is at most
    /// `-margin`; values above `+margin` are genuine violations; values in
    /// between count as ties unless they sit in the grid cell of `alpha^2`.
    pub margin: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            grid_points: 4096,
            margin: 1e-10,
        }
    }
}

/// A margin adapted to the density scale: `min(1e-10, 0.01 * alpha^(3/2))`.
///
/// Genuine interior peaks shrink like `alpha^(3/2)` as the density drops,
/// so a sweep across decades must shrink its margin along with them; the
/// evaluation noise of `psi` (~1e-19 absolute at `alpha = 1e-6`) stays far
/// below this choice throughout the supported range.
pub fn suggested_margin(alpha: f64) -> f64 {
    (1e-10_f64).min(0.01 * alpha.powf(1.5))
}

fn require_tuned(params: &ModelParams) -> Result<()> {
    if !params.is_tuned() {
        return Err(EngineError::InvalidParameter {
            name: "mu",
            value: params.mu(),
            message: "stationary analysis requires the tuned weight mu_star(alpha)",
        });
    }
    Ok(())
}

/// Locates the two roots of `psi'' = 0` in `(0, alpha)`, or reports that
/// none exist.
///
/// Clearing denominators turns `psi'' = 0` into the cubic
///
/// `c z (a-z) (1-2a+z) - (1-a)^4 (a(1-2a) + z) = 0`,
///
/// which has the same sign as `psi''` on `(0, alpha)` and is negative at
/// both ends. Its critical points come from a quadratic in closed form:
/// two roots in `(0, alpha)` exist exactly when the larger critical point
/// `q_hi` lies inside the interval with a positive cubic value, which
/// yields guaranteed brackets `(lo, q_hi)` and `(q_hi, alpha)` for
/// safeguarded bisection + Newton refinement on `psi''` itself.
pub fn find_inflections(params: &ModelParams) -> Result<Inflections> {
    require_tuned(params)?;
    let a = params.alpha();
    let c = params.c();
    let q2 = (1.0 - a) * (1.0 - a);
    let k4 = q2 * q2;

    // Cubic F(z) = c z (a-z) (1-2a+z) - k4 (a(1-2a) + z), same sign as psi''.
    let cubic = |z: f64| c * z * (a - z) * (1.0 - 2.0 * a + z) - k4 * (a * (1.0 - 2.0 * a) + z);
    // F'(z) = -3c z^2 + 2c(3a-1) z + c a(1-2a) - k4.
    let qa = -3.0 * c;
    let qb = 2.0 * c * (3.0 * a - 1.0);
    let qc = c * a * (1.0 - 2.0 * a) - k4;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc <= 0.0 {
        // F is monotone decreasing: stays below F(0) < 0, no roots.
        return Ok(Inflections::NoSecondMax);
    }
    let q = -0.5 * (qb + disc.sqrt().copysign(qb));
    let (r1, r2) = (q / qa, qc / q);
    let (q_lo, q_hi) = (r1.min(r2), r1.max(r2));
    if !(q_hi > 0.0 && q_hi < a) || cubic(q_hi) <= 0.0 {
        return Ok(Inflections::NoSecondMax);
    }

    let z_min = a * ENDPOINT_MARGIN;
    let z_max = a * (1.0 - ENDPOINT_MARGIN);
    let lo1 = if q_lo > z_min { q_lo } else { z_min };
    let zeta1 = refine_psi_d2_root(params, lo1, q_hi)?;
    let zeta2 = refine_psi_d2_root(params, q_hi, z_max)?;
    if !(zeta1 < zeta2) {
        return Err(EngineError::RootSearch(format!(
            "inflection roots out of order: {zeta1:e} vs {zeta2:e}"
        )));
    }
    Ok(Inflections::Two { zeta1, zeta2 })
}

fn refine_psi_d2_root(params: &ModelParams, lo: f64, hi: f64) -> Result<f64> {
    let f = |z: f64| params.psi_d2(z);
    let b = Bracket::new(lo, hi, f(lo), f(hi))?;
    let b = bisect(f, b, BISECT_WIDTH_FACTOR * params.alpha());
    Ok(newton_bisect(
        f,
        |z| params.psi_d3(z),
        b,
        REFINEMENT_TOLERANCE,
    ))
}

/// Finds the root of `psi'` in `[zeta2, alpha)` — the interior second
/// maximum `zeta3` — or reports that `psi'` never changes sign there.
///
/// Right of `zeta2` the function `psi` is concave, so `psi'` is
/// decreasing: if `psi'(zeta2) <= 0` there is no interior root, and
/// otherwise the root is unique, with `psi' -> -inf` as the overlap
/// approaches `alpha` guaranteeing a bracket.
pub fn find_zeta3(params: &ModelParams, zeta2: f64) -> Result<Zeta3Outcome> {
    require_tuned(params)?;
    let a = params.alpha();
    if !(zeta2 > 0.0 && zeta2 < a) {
        return Err(EngineError::InvalidParameter {
            name: "zeta2",
            value: zeta2,
            message: "inflection must lie strictly inside (0, alpha)",
        });
    }
    let f = |z: f64| params.psi_d1(z);
    let f2 = f(zeta2);
    if f2 == 0.0 {
        return Ok(Zeta3Outcome::Root(zeta2));
    }
    if f2 < 0.0 {
        return Ok(Zeta3Outcome::NoInteriorRoot);
    }
    // Walk toward alpha, halving the remaining gap, until psi' goes
    // negative (the 2 ln(a - z) pole guarantees it does).
    let (mut lo, mut f_lo) = (zeta2, f2);
    let mut hi = None;
    let gap = a - zeta2;
    for k in 1..=70 {
        let z = a - gap * 0.5f64.powi(k);
        if a - z < a * ENDPOINT_MARGIN * 1e-3 {
            break;
        }
        let fz = f(z);
        if fz == 0.0 {
            return Ok(Zeta3Outcome::Root(z));
        }
        if fz < 0.0 {
            hi = Some((z, fz));
            break;
        }
        lo = z;
        f_lo = fz;
    }
    let Some((hi, f_hi)) = hi else {
        return Err(EngineError::RootSearch(format!(
            "psi' stayed positive on [{zeta2:e}, {a:e})"
        )));
    };
    let b = Bracket::new(lo, hi, f_lo, f_hi)?;
    let b = bisect(f, b, BISECT_WIDTH_FACTOR * a);
    let root = newton_bisect(f, |z| params.psi_d2(z), b, REFINEMENT_TOLERANCE);
    Ok(Zeta3Outcome::Root(root))
}

/// Runs the full stationary analysis at one parameter point.
pub fn stationary_report(params: &ModelParams) -> Result<StationaryReport> {
    let a = params.alpha();
    let log_inv_a = -a.ln();
    let mut report = StationaryReport {
        alpha: a,
        c: params.c(),
        exists_second_max: false,
        zeta1: None,
        zeta2: None,
        zeta3: None,
        delta2: None,
        delta3: None,
        psi_at_zeta3: None,
        lemma2_ratio: None,
        lemma3_ratio: None,
    };
    let (zeta1, zeta2) = match find_inflections(params)? {
        Inflections::NoSecondMax => return Ok(report),
        Inflections::Two { zeta1, zeta2 } => (zeta1, zeta2),
    };
    report.zeta1 = Some(zeta1);
    report.zeta2 = Some(zeta2);
    let delta2 = 1.0 - zeta2 / a;
    report.delta2 = Some(delta2);
    report.lemma2_ratio = Some(delta2 * log_inv_a);
    match find_zeta3(params, zeta2)? {
        Zeta3Outcome::NoInteriorRoot => Ok(report),
        Zeta3Outcome::Root(zeta3) => {
            let delta3 = 1.0 - zeta3 / a;
            report.zeta3 = Some(zeta3);
            report.delta3 = Some(delta3);
            report.psi_at_zeta3 = Some(params.psi(zeta3));
            report.lemma3_ratio = Some(delta3 * std::f64::consts::E / a.sqrt());
            report.exists_second_max = true;
            Ok(report)
        }
    }
}

/// Certifies with default options (4096 grid points, margin 1e-10).
pub fn certify_global_max(params: &ModelParams) -> Result<MaxCertificate> {
    certify_global_max_with(params, CertifyOptions::default())
}

/// Certifies whether `phi` attains its global maximum on `[0, alpha]` at
/// `zeta = alpha^2`.
///
/// Evaluation set: a uniform grid over `[0, alpha]` (endpoints included),
/// the refined stationary points when they exist, and `alpha^2` itself.
/// Each point is first tested against the cheap envelope `psi >= phi`;
/// only points the envelope cannot push below `-margin` get the exact
/// `phi` evaluation.
///
/// Verdict rules, in order:
/// * any point with certified value above `+margin` is a violation;
/// * any point with certified value within `margin` of the peak value 0
///   that lies more than one grid step from `alpha^2` is a tie, and ties
///   are conservatively failures (the genuine peak's own grid cell is
///   exempt — the curvature cap around `alpha^2` is part of the peak, not
///   a competitor);
/// * otherwise the maximum is certified at `alpha^2`.
pub fn certify_global_max_with(
    params: &ModelParams,
    options: CertifyOptions,
) -> Result<MaxCertificate> {
    require_tuned(params)?;
    if options.grid_points < 16 {
        return Err(EngineError::InvalidParameter {
            name: "grid_points",
            value: options.grid_points as f64,
            message: "certification grid needs at least 16 points",
        });
    }
    if !(options.margin > 0.0) || !options.margin.is_finite() {
        return Err(EngineError::InvalidParameter {
            name: "margin",
            value: options.margin,
            message: "certification margin must be positive and finite",
        });
    }
    let a = params.alpha();
    let a2 = a * a;
    let margin = options.margin;
    let n = options.grid_points;
    let step = a / (n - 1) as f64;

    let mut zeta3 = None;
    let mut extra = vec![a2];
    if let Inflections::Two { zeta1, zeta2 } = find_inflections(params)? {
        extra.push(zeta1);
        extra.push(zeta2);
        if let Zeta3Outcome::Root(z3) = find_zeta3(params, zeta2)? {
            extra.push(z3);
            zeta3 = Some(z3);
        }
    }

    // Envelope-first certified upper bound on phi at one overlap.
    let bound_at = |zeta: f64| -> f64 {
        let psi = params.psi(zeta);
        if psi <= -margin {
            psi
        } else {
            params.phi(zeta)
        }
    };

    let mut phi_max = f64::NEG_INFINITY;
    let mut argmax = a2;
    let mut worst_violation: Option<(f64, f64)> = None;
    let mut worst_tie: Option<(f64, f64)> = None;
    let mut visit = |zeta: f64| {
        let ub = bound_at(zeta);
        if ub > phi_max {
            phi_max = ub;
            argmax = zeta;
        }
        if ub > margin {
            if worst_violation.map_or(true, |(_, v)| ub > v) {
                worst_violation = Some((zeta, ub));
            }
        } else if ub >= -margin
            && (zeta - a2).abs() > step
            && worst_tie.map_or(true, |(_, v)| ub > v)
        {
            worst_tie = Some((zeta, ub));
        }
    };
    for i in 0..n {
        let zeta = if i + 1 == n { a } else { i as f64 * step };
        visit(zeta);
    }
    for &zeta in &extra {
        visit(zeta);
    }

    let (verdict, argmax_zeta) = match (worst_violation, worst_tie) {
        (Some((z, _)), _) => (Verdict::MaxElsewhere, z),
        (None, Some((z, _))) => (Verdict::MaxElsewhere, z),
        (None, None) => (Verdict::MaxAtAlphaSquared, argmax),
    };
    Ok(MaxCertificate {
        argmax_zeta,
        phi_max,
        second_peak_value: zeta3.map_or(f64::NEG_INFINITY, bound_at),
        verdict,
        grid_points: n,
        refinement_tolerance: REFINEMENT_TOLERANCE,
        margin,
    })
}

/// Average-degree schedules under which the stationary offsets obey their
/// limiting scaling laws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LemmaSchedule {
    /// `c = 2 ln(1/alpha) / alpha`: isolates the inner inflection scale
    /// (the `delta2 * ln(1/alpha) -> 1` law).
    Lemma2,
    /// `c = (2 ln(1/alpha) + 2) / alpha`: the simple first-moment
    /// threshold, where `delta3 * e / sqrt(alpha) -> 1`.
    Lemma3,
    /// `c = (2 ln(1/alpha) + 2 - x sqrt(alpha)) / alpha`: the threshold
    /// lowered by the `x sqrt(alpha)` window; the interior peak value
    /// `psi(zeta3)` turns negative for small `alpha` once `x > 4/e`.
    Lemma4 { x: f64 },
}

/// The average degree prescribed by a schedule at the given density.
pub fn schedule_c(schedule: LemmaSchedule, alpha: f64) -> f64 {
    let log_inv = -alpha.ln();
    match schedule {
        LemmaSchedule::Lemma2 => 2.0 * log_inv / alpha,
        LemmaSchedule::Lemma3 => (2.0 * log_inv + 2.0) / alpha,
        LemmaSchedule::Lemma4 { x } => (2.0 * log_inv + 2.0 - x * alpha.sqrt()) / alpha,
    }
}

/// Runs [`stationary_report`] across a density sweep with the average
/// degree set per-density by the schedule. Densities must lie in
/// `(0, 1e-2]`, the regime where the scaling diagnostics are meaningful.
pub fn lemma_diagnostics(
    alphas: &[f64],
    schedule: LemmaSchedule,
) -> Result<Vec<StationaryReport>> {
    let mut out = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        if !(alpha > 0.0 && alpha <= 1e-2) {
            return Err(EngineError::InvalidParameter {
                name: "alpha",
                value: alpha,
                message: "scaling diagnostics require densities in (0, 1e-2]",
            });
        }
        let params = ModelParams::new(alpha, schedule_c(schedule, alpha))?;
        out.push(stationary_report(&params)?);
    }
    Ok(out)
}
