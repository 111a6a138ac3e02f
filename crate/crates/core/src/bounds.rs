//! Closed-form and asymptotic bounds linking the independent-set density
//! `alpha` and the average degree `c`.
//!
//! Fixing a density, [`c_upper`] gives the degree above which sets of that
//! density stop appearing (the exact first-moment solution and its simple
//! logarithmic upper bound); [`c_lower`] subtracts the `x sqrt(alpha)`
//! window inside which the weighted second moment certifies existence.
//! Fixing a degree instead, [`alpha_bounds`] inverts those statements via
//! the Lambert W function: densities above `alpha_upper` vanish, densities
//! below `alpha_lower` are achieved. [`w_expansion`] is the iterated-log
//! series for the same W value, and [`first_moment_alpha`] solves the
//! exact first-moment equation `h(alpha) + (c/2) ln(1 - alpha^2) = 0`
//! without any asymptotic approximation.

use crate::analytic::entropy;
use crate::error::{EngineError, Result};
use crate::roots::{bisect, newton_bisect, Bracket};
use serde::Serialize;
use std::f64::consts::{E, LN_2, SQRT_2};

/// Smallest admissible window coefficient for [`c_lower`]: `4/e`.
pub const X_THRESHOLD: f64 = 4.0 / E;

/// Smallest admissible window coefficient for the density lower bound:
/// `4 sqrt(2) / e`.
pub const Y_THRESHOLD: f64 = 4.0 * SQRT_2 / E;

/// Default window coefficient for [`c_lower`] (comfortably above
/// [`X_THRESHOLD`], small enough to keep the window tight).
pub const DEFAULT_X: f64 = 1.6;

/// Default window coefficient for the density lower bound.
pub const DEFAULT_Y: f64 = 2.2;

/// Principal branch of the Lambert W function on `z > 0`: the unique
/// `w > 0` with `w e^w = z`. Returns NaN for `z <= 0`, NaN, or infinity.
///
/// Halley iteration from a logarithmic starter; the converged value
/// satisfies `|w e^w - z| <= 1e-13 * z` across the positive axis.
pub fn lambert_w(z: f64) -> f64 {
    if !(z > 0.0) || !z.is_finite() {
        return f64::NAN;
    }
    let mut w = if z > E {
        let l = z.ln();
        l - l.ln()
    } else {
        z.ln_1p()
    };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - z;
        if f.abs() <= 1e-15 * z {
            break;
        }
        // Halley step: f / (f' - f f'' / (2 f')) for f(w) = w e^w - z.
        let step = f / (ew * (w + 1.0) - f * (w + 2.0) / (2.0 * w + 2.0));
        let next = w - step;
        if !next.is_finite() {
            break;
        }
        let done = (next - w).abs() <= 1e-16 * next.abs();
        w = next;
        if done {
            break;
        }
    }
    w
}

/// Degree thresholds above which density-`alpha` independent sets die out:
/// `(exact, simple)` with
///
/// * exact:  `2 h(alpha) / (-ln(1 - alpha^2))` — the root in `c` of the
///   first-moment rate, and
/// * simple: `2 (ln(1/alpha) + 1) / alpha` — its elementary upper bound.
///
/// Domain `0 < alpha < 1`; `(NaN, NaN)` outside. Always `exact <= simple`.
pub fn c_upper(alpha: f64) -> (f64, f64) {
    if !(alpha > 0.0 && alpha < 1.0) {
        return (f64::NAN, f64::NAN);
    }
    let exact = 2.0 * entropy(alpha) / -(-alpha * alpha).ln_1p();
    let simple = 2.0 * (-alpha.ln() + 1.0) / alpha;
    (exact, simple)
}

/// Degree down to which the weighted second moment certifies
/// density-`alpha` independent sets:
/// `2 (ln(1/alpha) + 1) / alpha - x / sqrt(alpha)`.
///
/// The window coefficient must satisfy `x > 4/e` ([`X_THRESHOLD`]) for the
/// certification to go through; smaller values are rejected with
/// [`EngineError::BelowThreshold`]. Use [`c_lower_unchecked`] to explore
/// the sub-threshold regime anyway.
pub fn c_lower(alpha: f64, x: f64) -> Result<f64> {
    if x <= X_THRESHOLD || !x.is_finite() {
        return Err(EngineError::BelowThreshold {
            name: "x",
            value: x,
            threshold: X_THRESHOLD,
        });
    }
    let v = c_lower_unchecked(alpha, x);
    if v.is_nan() {
        return Err(EngineError::InvalidParameter {
            name: "alpha",
            value: alpha,
            message: "density must lie strictly inside (0, 1)",
        });
    }
    Ok(v)
}

/// [`c_lower`] without the window-coefficient threshold check; NaN for
/// `alpha` outside `(0, 1)`.
pub fn c_lower_unchecked(alpha: f64, x: f64) -> f64 {
    if !(alpha > 0.0 && alpha < 1.0) {
        return f64::NAN;
    }
    let (_, simple) = c_upper(alpha);
    simple - x / alpha.sqrt()
}

/// Density above which independent sets vanish at average degree `c`:
/// `(2/c) W(e c / 2)`. Requires `c >= 2`.
pub fn alpha_upper(c: f64) -> Result<f64> {
    if !(c >= 2.0) || !c.is_finite() {
        return Err(EngineError::BelowThreshold {
            name: "c",
            value: c,
            threshold: 2.0,
        });
    }
    let z = E * c / 2.0;
    let w = lambert_w(z);
    let residual = (w * w.exp() - z).abs();
    if !(residual <= 1e-10 * z) {
        return Err(EngineError::RootSearch(format!(
            "Lambert W residual {residual:e} too large at z = {z:e}"
        )));
    }
    Ok(2.0 * w / c)
}

/// Density pair `(alpha_upper, alpha_lower)` at average degree `c`:
/// sets denser than the first vanish, sets sparser than the second exist,
/// with `alpha_lower = alpha_upper - y sqrt(ln c) / c^(3/2)`.
///
/// Requires `c >= 2` and `y > 4 sqrt(2)/e` ([`Y_THRESHOLD`]).
pub fn alpha_bounds(c: f64, y: f64) -> Result<(f64, f64)> {
    if y <= Y_THRESHOLD || !y.is_finite() {
        return Err(EngineError::BelowThreshold {
            name: "y",
            value: y,
            threshold: Y_THRESHOLD,
        });
    }
    let upper = alpha_upper(c)?;
    Ok((upper, upper - y * c.ln().sqrt() / c.powf(1.5)))
}

/// The density pair without the window-coefficient threshold check
/// (still requires `c >= 2` for the W inversion to make sense).
pub fn alpha_bounds_unchecked(c: f64, y: f64) -> Result<(f64, f64)> {
    let upper = alpha_upper(c)?;
    Ok((upper, upper - y * c.ln().sqrt() / c.powf(1.5)))
}

/// Iterated-logarithm expansion of `W(e c / 2)` in `L = ln c` and
/// `B = ln ln c`, up to nine terms:
///
/// `L - B + 1 - ln 2 + B/L - (1-ln2)/L + B^2/(2L^2) - (2-ln2) B/L^2
///  + (3 + ln2^2 - 4 ln2)/(2L^2)`.
///
/// Returns the partial sum of the first `order` terms together with the
/// individual terms. Requires `c > e` (so both logs are positive) and
/// `1 <= order <= 9`.
pub fn w_expansion(c: f64, order: usize) -> Result<(f64, Vec<f64>)> {
    if !(c > E) || !c.is_finite() {
        return Err(EngineError::InvalidParameter {
            name: "c",
            value: c,
            message: "the iterated-log expansion needs c > e",
        });
    }
    if !(1..=9).contains(&order) {
        return Err(EngineError::InvalidParameter {
            name: "order",
            value: order as f64,
            message: "expansion order must lie in 1..=9",
        });
    }
    let l = c.ln();
    let b = l.ln();
    let all = [
        l,
        -b,
        1.0,
        -LN_2,
        b / l,
        -(1.0 - LN_2) / l,
        b * b / (2.0 * l * l),
        -(2.0 - LN_2) * b / (l * l),
        (3.0 + LN_2 * LN_2 - 4.0 * LN_2) / (2.0 * l * l),
    ];
    let terms: Vec<f64> = all[..order].to_vec();
    Ok((terms.iter().sum(), terms))
}

/// Exact positive root of the first-moment rate
/// `h(alpha) + (c/2) ln(1 - alpha^2) = 0` in `(0, 1)`.
///
/// This is the non-asymptotic counterpart of [`alpha_upper`]: densities
/// above it make the expected count of independent sets vanish. The root
/// is bracketed in `[1e-12, 1 - 1e-12]` (degrees so large that the root
/// falls below `1e-12` are rejected as a search failure).
pub fn first_moment_alpha(c: f64) -> Result<f64> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(EngineError::InvalidParameter {
            name: "c",
            value: c,
            message: "average degree must be positive and finite",
        });
    }
    let f = |a: f64| entropy(a) + 0.5 * c * (-a * a).ln_1p();
    let df = |a: f64| ((1.0 - a) / a).ln() - c * a / (1.0 - a * a);
    let (lo, hi) = (1e-12, 1.0 - 1e-12);
    let b = Bracket::new(lo, hi, f(lo), f(hi))?;
    let b = bisect(f, b, 1e-3);
    let root = newton_bisect(f, df, b, 1e-12);
    let scale = entropy(root).abs().max(1e-300);
    if !(f(root).abs() <= 1e-10 * scale) {
        return Err(EngineError::RootSearch(format!(
            "first-moment residual {:e} too large at alpha = {root:e}",
            f(root)
        )));
    }
    Ok(root)
}

/// Bundle of every bound relevant to one query, with `None` for the sides
/// that were not asked for (serialized as null).
#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub alpha: Option<f64>,
    pub c: Option<f64>,
    pub c_upper_exact: Option<f64>,
    pub c_upper_simple: Option<f64>,
    pub c_lower: Option<f64>,
    pub x: Option<f64>,
    pub alpha_upper: Option<f64>,
    pub alpha_lower: Option<f64>,
    pub y: Option<f64>,
    /// The Lambert W value `W(e c / 2)` behind the density bounds.
    pub w_value: Option<f64>,
    /// Terms of the order-9 iterated-log expansion of `w_value`
    /// (present when `c > e`).
    pub expansion_terms: Option<Vec<f64>>,
    pub first_moment_alpha: Option<f64>,
}

fn empty_report() -> BoundsReport {
    BoundsReport {
        alpha: None,
        c: None,
        c_upper_exact: None,
        c_upper_simple: None,
        c_lower: None,
        x: None,
        alpha_upper: None,
        alpha_lower: None,
        y: None,
        w_value: None,
        expansion_terms: None,
        first_moment_alpha: None,
    }
}

/// Degree-side report for a fixed density: both degree thresholds and the
/// window lower bound at coefficient `x`.
pub fn bounds_report_for_alpha(alpha: f64, x: f64) -> Result<BoundsReport> {
    let (exact, simple) = c_upper(alpha);
    if exact.is_nan() {
        return Err(EngineError::InvalidParameter {
            name: "alpha",
            value: alpha,
            message: "density must lie strictly inside (0, 1)",
        });
    }
    let lower = c_lower(alpha, x)?;
    Ok(BoundsReport {
        alpha: Some(alpha),
        x: Some(x),
        c_upper_exact: Some(exact),
        c_upper_simple: Some(simple),
        c_lower: Some(lower),
        ..empty_report()
    })
}

/// Density-side report for a fixed degree: the Lambert-W density bounds at
/// coefficient `y`, the W value itself, its expansion when `c > e`, and
/// the exact first-moment root.
pub fn bounds_report_for_c(c: f64, y: f64) -> Result<BoundsReport> {
    let (upper, lower) = alpha_bounds(c, y)?;
    let expansion = if c > E {
        Some(w_expansion(c, 9)?.1)
    } else {
        None
    };
    Ok(BoundsReport {
        c: Some(c),
        y: Some(y),
        alpha_upper: Some(upper),
        alpha_lower: Some(lower),
        w_value: Some(lambert_w(E * c / 2.0)),
        expansion_terms: expansion,
        first_moment_alpha: Some(first_moment_alpha(c)?),
        ..empty_report()
    })
}
