//! Density/degree bound consistency: Lambert inversion quality across
//! twelve orders of magnitude, orderings among the simple, exact, and
//! windowed degree thresholds, the iterated-logarithm expansion against
//! its error bound, and agreement of the first-moment root with an
//! independent bisection.

// Reference constants are written with every digit of the source
// computation, even where a shorter literal parses to the same float.
#![allow(clippy::excessive_precision)]
use indset_core::bounds::{
    alpha_bounds, alpha_upper, c_lower, c_upper, first_moment_alpha, lambert_w, w_expansion,
    X_THRESHOLD, Y_THRESHOLD,
};
use indset_core::analytic::entropy;
use indset_core::EngineError;
use proptest::prelude::*;

fn assert_rel(actual: f64, expected: f64, tol: f64) {
    let scale = expected.abs().max(1e-300);
    assert!(
        (actual - expected).abs() <= tol * scale,
        "actual {actual:.17e} vs expected {expected:.17e} (rel tol {tol:e})"
    );
}

/// `W(z) e^{W(z)} = z` to near machine precision over a twelve-decade
/// logarithmic grid.
#[test]
fn lambert_inverts_across_the_grid() {
    let (lo, hi) = (1e-3_f64, 1e12_f64);
    let steps = 301;
    for i in 0..steps {
        let t = i as f64 / (steps - 1) as f64;
        let z = lo * (hi / lo).powf(t);
        let w = lambert_w(z);
        let residual = (w * w.exp() - z).abs();
        assert!(
            residual <= 1e-13 * z,
            "residual {residual:e} at z = {z:e} (w = {w:e})"
        );
    }
    assert_rel(lambert_w(std::f64::consts::E), 1.0, 1e-14);
    assert_rel(lambert_w(2.0 * (2.0_f64).exp()), 2.0, 1e-14);
    assert_rel(lambert_w(50.0 * std::f64::consts::E), 3.6243484666213233, 1e-14);
    assert!(lambert_w(0.0).is_nan());
    assert!(lambert_w(-1.0).is_nan());
    assert!(lambert_w(f64::INFINITY).is_nan());
}

/// The closed-form density cap inverts the simple degree threshold:
/// reconstructing `c = 2 (1 - ln a) / a` from `alpha_upper(c)` returns the
/// original degree.
#[test]
fn density_cap_inverts_simple_threshold() {
    for &c in &[2.0, 10.0, 100.0, 1e3, 1e4, 1e6, 1e9] {
        let au = alpha_upper(c).unwrap();
        let reconstructed = 2.0 * (1.0 - au.ln()) / au;
        assert_rel(reconstructed, c, 1e-10);
    }
    // At the domain edge the cap is vacuous (density 1), below it the
    // inversion is rejected.
    assert_rel(alpha_upper(2.0).unwrap(), 1.0, 1e-12);
    assert!(matches!(
        alpha_upper(1.999),
        Err(EngineError::BelowThreshold { .. })
    ));
    assert_rel(alpha_upper(100.0).unwrap(), 0.072486969332426465, 1e-13);
}

/// Ordering of the three degree thresholds at fixed density: the windowed
/// lower threshold sits strictly below the exact one, which sits strictly
/// below the simple one.
#[test]
fn threshold_orderings_hold_across_densities() {
    let alphas = [
        1e-6, 1e-4, 0.001, 0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.45, 0.49, 0.499,
    ];
    for &alpha in &alphas {
        let (exact, simple) = c_upper(alpha);
        assert!(
            exact < simple,
            "exact {exact:e} !< simple {simple:e} at alpha = {alpha}"
        );
        for &x in &[1.48, 1.6, 2.2] {
            let lower = c_lower(alpha, x).unwrap();
            assert!(
                lower < exact,
                "lower {lower:e} !< exact {exact:e} at alpha = {alpha}, x = {x}"
            );
            assert_rel(simple - lower, x / alpha.sqrt(), 1e-9);
        }
    }
    // The window coefficient must clear its threshold.
    assert!(c_lower(0.01, X_THRESHOLD).is_err());
    assert!(c_lower(0.01, X_THRESHOLD + 1e-6).is_ok());
}

proptest! {
    /// Randomized version of the exact-below-simple ordering.
    #[test]
    fn exact_threshold_below_simple(alpha in 1e-9..0.4999f64) {
        let (exact, simple) = c_upper(alpha);
        prop_assert!(exact.is_finite() && simple.is_finite());
        prop_assert!(exact > 0.0);
        prop_assert!(exact < simple);
    }
}

/// Nine-term iterated-log expansion: matches the true inversion within
/// the stated `5 (ln ln c)^3 / (ln c)^3` error bound, with the error and
/// the bound both shrinking as the degree grows.
#[test]
fn expansion_error_within_bound() {
    // (degree, W(e c / 2), error bound, frozen error of the 9-term sum)
    let table = [
        (1e6, 11.665709638899241, 0.034328127, 6.4969498e-4),
        (1e9, 18.132417308541725, 0.015648175, 2.080609e-4),
        (1e12, 24.729862417245594, 0.0086651692, 7.9922598e-5),
    ];
    let mut prev_err = f64::INFINITY;
    for &(c, w_true, bound, frozen_err) in &table {
        let (sum, terms) = w_expansion(c, 9).unwrap();
        assert_eq!(terms.len(), 9);
        assert_rel(terms.iter().sum::<f64>(), sum, 1e-15);
        let err = (sum - w_true).abs();
        assert_rel(err, frozen_err, 1e-5);
        assert!(err <= bound, "error {err:e} above bound {bound:e} at c = {c:e}");
        assert!(err < prev_err, "expansion error must shrink with degree");
        prev_err = err;
    }
    // Partial sums must be prefixes of the full series.
    let (full, all_terms) = w_expansion(1e6, 9).unwrap();
    let (partial, head) = w_expansion(1e6, 4).unwrap();
    assert_eq!(&all_terms[..4], &head[..]);
    assert!((head.iter().sum::<f64>() - partial).abs() <= 1e-15 * partial.abs());
    assert!(partial != full);
    // Domain: both logs must be positive, order must be sane.
    assert!(w_expansion(2.0, 9).is_err());
    assert!(w_expansion(1e6, 0).is_err());
    assert!(w_expansion(1e6, 10).is_err());
}

/// The exact first-moment root: frozen spot value, inversion round trips
/// against the exact threshold, and convergence to the asymptotic cap
/// from below as the degree grows.
#[test]
fn first_moment_root_checks() {
    assert_rel(
        first_moment_alpha(2.0 * std::f64::consts::E).unwrap(),
        0.4740191878946361,
        1e-13,
    );
    // Round trip: the exact threshold at density a has first-moment root a.
    for &alpha in &[0.05, 0.1, 0.2, 0.3, 0.4, 0.45] {
        let (exact, _) = c_upper(alpha);
        assert_rel(first_moment_alpha(exact).unwrap(), alpha, 1e-10);
    }
    // Ratio to the asymptotic cap tends to 1 from below.
    let table = [
        (10.0, 0.89543522259),
        (100.0, 0.9900534881),
        (1e3, 0.99910012785),
        (1e4, 0.99991073315),
    ];
    let mut prev = 0.0;
    for &(c, frozen) in &table {
        let fm = first_moment_alpha(c).unwrap();
        let au = alpha_upper(c).unwrap();
        let ratio = fm / au;
        assert_rel(ratio, frozen, 1e-8);
        assert!(fm < au, "exact root must sit below the asymptotic cap");
        assert!(ratio > prev, "ratio must increase toward 1");
        prev = ratio;
    }
}

/// The Newton-refined first-moment root agrees with a pure-bisection
/// oracle run on the same rate function.
#[test]
fn first_moment_root_matches_bisection_oracle() {
    for &c in &[0.5, 3.0, 10.0, 2.0 * std::f64::consts::E, 100.0, 1e4] {
        let f = |a: f64| entropy(a) + 0.5 * c * (-a * a).ln_1p();
        let (mut lo, mut hi) = (1e-12_f64, 1.0 - 1e-12);
        assert!(f(lo) > 0.0 && f(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        assert_rel(first_moment_alpha(c).unwrap(), oracle, 1e-12);
    }
}

/// Two-sided density bounds: ordered, and the gap matches the windowed
/// correction exactly.
#[test]
fn density_bounds_are_ordered() {
    for &c in &[2.0, 10.0, 100.0, 1e4, 1e8] {
        let (upper, lower) = alpha_bounds(c, 2.2).unwrap();
        assert!(lower < upper);
        // The recovered gap carries the rounding of `upper`, not its own.
        let gap = upper - lower;
        let expected = 2.2 * c.ln().sqrt() / c.powf(1.5);
        assert!(
            (gap - expected).abs() <= 4.0 * f64::EPSILON * upper,
            "gap {gap:.17e} vs correction {expected:.17e} at c = {c:e}"
        );
    }
    assert!(matches!(
        alpha_bounds(100.0, Y_THRESHOLD),
        Err(EngineError::BelowThreshold { .. })
    ));
    assert!(alpha_bounds(100.0, Y_THRESHOLD + 1e-9).is_ok());
    assert!(alpha_bounds(1.5, 2.2).is_err(), "degree below 2 has no cap");
}
