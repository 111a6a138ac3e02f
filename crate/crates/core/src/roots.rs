//! Safeguarded scalar root finding: bisection on a sign-changing bracket,
//! optionally polished by Newton steps that fall back to bisection whenever
//! an iterate leaves the bracket.
//!
//! Every solver in this crate goes through these helpers so the contract is
//! uniform: a returned root always lies inside a bracket whose endpoints
//! straddle a sign change of the target function.

use crate::error::{EngineError, Result};

/// A sign-changing interval: `f(lo)` and `f(hi)` have opposite signs
/// (or one of them is exactly zero).
#[derive(Debug, Clone, Copy)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    /// Validates the sign change and orders the endpoints.
    pub fn new(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        if !(lo <= hi) || !f_lo.is_finite() || !f_hi.is_finite() {
            return Err(EngineError::RootSearch(format!(
                "bad bracket [{lo:e}, {hi:e}] with f = [{f_lo:e}, {f_hi:e}]"
            )));
        }
        if f_lo != 0.0 && f_hi != 0.0 && (f_lo > 0.0) == (f_hi > 0.0) {
            return Err(EngineError::RootSearch(format!(
                "no sign change on [{lo:e}, {hi:e}]: f = [{f_lo:e}, {f_hi:e}]"
            )));
        }
        Ok(Bracket { lo, hi, f_lo, f_hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Shrinks a bracket by plain bisection until its width is at most
/// `target_width` (or the midpoint stops being distinct from the
/// endpoints). The sign-change invariant is preserved.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut b: Bracket, target_width: f64) -> Bracket {
    if b.f_lo == 0.0 {
        return Bracket { hi: b.lo, f_hi: b.f_lo, ..b };
    }
    for _ in 0..200 {
        if b.width() <= target_width {
            break;
        }
        let mid = b.midpoint();
        if mid <= b.lo || mid >= b.hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Bracket { lo: mid, hi: mid, f_lo: fm, f_hi: fm };
        }
        if (fm > 0.0) == (b.f_lo > 0.0) {
            b.lo = mid;
            b.f_lo = fm;
        } else {
            b.hi = mid;
            b.f_hi = fm;
        }
    }
    b
}

/// Newton iteration started from the bracket midpoint, safeguarded by the
/// bracket: any step that is non-finite or leaves the interval is replaced
/// by a bisection step, and the bracket keeps shrinking either way.
/// Terminates when successive iterates agree to `rel_tol` relatively (with
/// the bracket width as a fallback criterion).
pub fn newton_bisect<F, D>(mut f: F, mut df: D, mut b: Bracket, rel_tol: f64) -> f64
where
    F: FnMut(f64) -> f64,
    D: FnMut(f64) -> f64,
{
    if b.f_lo == 0.0 {
        return b.lo;
    }
    if b.f_hi == 0.0 {
        return b.hi;
    }
    let mut x = b.midpoint();
    for _ in 0..100 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if (fx > 0.0) == (b.f_lo > 0.0) {
            b.lo = x;
            b.f_lo = fx;
        } else {
            b.hi = x;
            b.f_hi = fx;
        }
        let d = df(x);
        let mut next = x - fx / d;
        if !next.is_finite() || next <= b.lo || next >= b.hi {
            next = b.midpoint();
        }
        let scale = x.abs().max(f64::MIN_POSITIVE);
        if (next - x).abs() <= rel_tol * scale || b.width() <= rel_tol * scale {
            return next;
        }
        x = next;
    }
    x
}
