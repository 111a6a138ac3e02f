//! Parser for the sweep-grid mini-language used by `--alpha-grid`.
//!
//! A grid is either a single positive number (`1e-6`) or a range of the
//! form `start:end:log[:count]` / `start:end:lin[:count]`:
//!
//! * `log` places `count` points geometrically between `start` and `end`
//!   (inclusive); when `count` is omitted it defaults to one point per
//!   decade, so `1e-4:1e-8:log` yields `1e-4, 1e-5, ..., 1e-8`.
//! * `lin` places `count` equally spaced points (default 11).
//!
//! Descending ranges are allowed. Endpoints are reproduced exactly rather
//! than recomputed through logarithms.

/// A parsed grid of sweep values, in the order they will be evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec(pub Vec<f64>);

const MAX_POINTS: usize = 100_000;

fn parse_positive(field: &str, what: &str) -> Result<f64, String> {
    let v: f64 = field
        .parse()
        .map_err(|_| format!("{what} {field:?} is not a number"))?;
    if !v.is_finite() || v <= 0.0 {
        return Err(format!("{what} must be positive and finite, got {field}"));
    }
    Ok(v)
}

/// Parses the grid mini-language; the error string is surfaced verbatim as
/// a usage error.
pub fn parse_grid(spec: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [single] => Ok(GridSpec(vec![parse_positive(single, "grid value")?])),
        [start, end, scale] | [start, end, scale, _] => {
            let start = parse_positive(start, "grid start")?;
            let end = parse_positive(end, "grid end")?;
            let count = match parts.get(3) {
                Some(raw) => {
                    let c: usize = raw
                        .parse()
                        .map_err(|_| format!("grid count {raw:?} is not a positive integer"))?;
                    if c == 0 {
                        return Err("grid count must be at least 1".to_string());
                    }
                    if c > MAX_POINTS {
                        return Err(format!("grid count {c} exceeds the cap of {MAX_POINTS}"));
                    }
                    c
                }
                None => match *scale {
                    "log" => {
                        let decades = (end.log10() - start.log10()).abs();
                        (decades.round() as usize).max(1) + 1
                    }
                    _ => 11,
                },
            };
            let values = match *scale {
                "log" => fill(start.ln(), end.ln(), count, f64::exp),
                "lin" => fill(start, end, count, |v| v),
                other => {
                    return Err(format!(
                        "grid scale must be \"log\" or \"lin\", got {other:?}"
                    ))
                }
            };
            let mut values = values;
            // Pin the endpoints to the exact inputs; interior points keep
            // the interpolated values.
            if let Some(first) = values.first_mut() {
                *first = start;
            }
            if count > 1 {
                if let Some(last) = values.last_mut() {
                    *last = end;
                }
            }
            Ok(GridSpec(values))
        }
        _ => Err(format!(
            "malformed grid {spec:?}: expected VALUE or start:end:{{log|lin}}[:count]"
        )),
    }
}

fn fill(from: f64, to: f64, count: usize, map: impl Fn(f64) -> f64) -> Vec<f64> {
    if count == 1 {
        return vec![map(from)];
    }
    let step = (to - from) / (count - 1) as f64;
    (0..count).map(|i| map(from + step * i as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid_defaults_to_one_point_per_decade() {
        let g = parse_grid("1e-4:1e-8:log").unwrap().0;
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 1e-4);
        assert_eq!(g[4], 1e-8);
        for (i, v) in g.iter().enumerate() {
            let expected = 10f64.powi(-(4 + i as i32));
            assert!((v - expected).abs() <= 1e-12 * expected, "{v} vs {expected}");
        }
    }

    #[test]
    fn explicit_count_and_linear_scale() {
        let g = parse_grid("0.1:0.3:lin:3").unwrap().0;
        assert_eq!(g, vec![0.1, 0.2, 0.3]);
        let g = parse_grid("0.1:0.3:lin").unwrap().0;
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[10], 0.3);
        let g = parse_grid("1e-2:1e-6:log:9").unwrap().0;
        assert_eq!(g.len(), 9);
        assert_eq!(g[0], 1e-2);
        assert_eq!(g[8], 1e-6);
    }

    #[test]
    fn single_value_and_degenerate_ranges() {
        assert_eq!(parse_grid("1e-6").unwrap().0, vec![1e-6]);
        assert_eq!(parse_grid("0.2:0.2:log").unwrap().0.len(), 2);
        assert_eq!(parse_grid("0.3:0.1:lin:2").unwrap().0, vec![0.3, 0.1]);
    }

    #[test]
    fn malformed_specs_are_rejected() {
        for bad in [
            "",
            "abc",
            "-1e-4",
            "0",
            "1e-4:1e-8",
            "1e-4:1e-8:geom",
            "1e-4:1e-8:log:0",
            "1e-4:1e-8:log:x",
            "1e-4:0:log",
            "1e-4:1e-8:log:3:extra",
            "inf:1:lin",
        ] {
            assert!(parse_grid(bad).is_err(), "{bad:?} should be rejected");
        }
    }
}
