//! Finite-size moments of the weighted independent-set count, exactly and
//! by enumeration or sampling.
//!
//! For a graph of `m` uniform ordered pairs on `n` vertices let `X` be the
//! sum of `mu^(edges fully outside S)` over the independent sets `S` of
//! size `k`. Averaging each edge independently gives closed forms:
//!
//! * `E[X]   = C(n,k) * w1(k/n, mu)^m`
//! * `E[X^2] = sum_z C(n,k) C(k,z) C(n-k,k-z) * w2(k/n, z/n, mu)^m`,
//!   the overlap `z` of the two sets ranging over `max(0, 2k-n) ..= k`.
//!
//! Small instances (`n <= 60`) are computed with exact integer
//! multiplicities; larger ones switch to log-space with a compensated
//! log-sum-exp. [`brute_moments`] re-derives both moments by enumerating
//! every one of the `(n^2)^m` graphs, [`mc_moments`] estimates them from
//! sampled graphs, and [`ratio_profile`] splits `E[X^2] / E[X]^2` into its
//! per-overlap contributions to show which overlap dominates.

use crate::analytic::{w1_at, w2_at};
use crate::error::{EngineError, Result};
use crate::graph::MultiGraph;
use serde::Serialize;

/// Running table of `ln k!` for `k <= n`, built with compensated
/// accumulation so late entries stay accurate to a few ulps.
pub struct LnFactorials {
    table: Vec<f64>,
}

impl LnFactorials {
    pub fn up_to(n: usize) -> Self {
        let mut table = Vec::with_capacity(n + 1);
        table.push(0.0);
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for i in 1..=n {
            let x = (i as f64).ln();
            let t = sum + x;
            comp += if sum.abs() >= x.abs() {
                (sum - t) + x
            } else {
                (x - t) + sum
            };
            sum = t;
            table.push(sum + comp);
        }
        LnFactorials { table }
    }

    /// `ln C(n, k)`; panics if the table is too short.
    pub fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        assert!(k <= n && n < self.table.len(), "ln_binomial({n}, {k})");
        self.table[n] - self.table[k] - self.table[n - k]
    }
}

/// Exact binomial coefficient (callers keep `n <= 64` so products of three
/// of these stay inside u128).
fn binom_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 1..=k {
        r = r * (n - k + i) as u128 / i as u128;
    }
    r
}

fn binom_f64(n: usize, k: usize) -> f64 {
    if n <= 64 {
        binom_u128(n, k) as f64
    } else {
        let lf = LnFactorials::up_to(n);
        lf.ln_binomial(n, k).exp()
    }
}

fn validate(n: usize, m: usize, k: usize, mu: f64) -> Result<()> {
    if n == 0 {
        return Err(EngineError::InvalidParameter {
            name: "n",
            value: 0.0,
            message: "vertex count must be positive",
        });
    }
    if m > i32::MAX as usize {
        return Err(EngineError::InvalidParameter {
            name: "m",
            value: m as f64,
            message: "edge count out of supported range",
        });
    }
    if k > n {
        return Err(EngineError::InvalidParameter {
            name: "k",
            value: k as f64,
            message: "set size cannot exceed the vertex count",
        });
    }
    if !(0.0..=1.0).contains(&mu) {
        return Err(EngineError::InvalidParameter {
            name: "mu",
            value: mu,
            message: "edge weight must lie in [0, 1]",
        });
    }
    Ok(())
}

/// Compensated log-sum-exp; negative infinity for an all-degenerate input.
fn logsumexp(xs: &[f64]) -> f64 {
    let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &x in xs {
        let e = (x - max).exp();
        let t = sum + e;
        comp += if sum.abs() >= e.abs() {
            (sum - t) + e
        } else {
            (e - t) + sum
        };
        sum = t;
    }
    max + (sum + comp).ln()
}

/// `E[X]` in closed form: exact multiplicities for `n <= 60`, log-space
/// beyond that.
pub fn expected_x_formula(n: usize, m: usize, k: usize, mu: f64) -> Result<f64> {
    validate(n, m, k, mu)?;
    let w1 = w1_at(k as f64 / n as f64, mu);
    if n <= 60 {
        Ok(binom_u128(n, k) as f64 * w1.powi(m as i32))
    } else {
        Ok(expected_x_ln(n, m, k, mu)?.exp())
    }
}

/// `ln E[X] = ln C(n,k) + m ln w1(k/n, mu)` (negative infinity when the
/// per-edge factor vanishes and `m > 0`).
pub fn expected_x_ln(n: usize, m: usize, k: usize, mu: f64) -> Result<f64> {
    validate(n, m, k, mu)?;
    let lf = LnFactorials::up_to(n);
    let w1 = w1_at(k as f64 / n as f64, mu);
    let edge_part = if m == 0 { 0.0 } else { m as f64 * w1.ln() };
    Ok(lf.ln_binomial(n, k) + edge_part)
}

fn x2_z_range(n: usize, k: usize) -> std::ops::RangeInclusive<usize> {
    (2 * k).saturating_sub(n)..=k
}

/// Log of each overlap term of `E[X^2]`, `z` ascending over
/// [`x2_z_range`]. Shared verbatim by [`expected_x2_ln`] and
/// [`ratio_profile`] so their totals agree bit-for-bit.
fn x2_term_lns(n: usize, m: usize, k: usize, mu: f64, lf: &LnFactorials) -> Vec<f64> {
    let alpha = k as f64 / n as f64;
    let base = lf.ln_binomial(n, k);
    x2_z_range(n, k)
        .map(|z| {
            let w2 = w2_at(alpha, z as f64 / n as f64, mu);
            let edge_part = if m == 0 { 0.0 } else { m as f64 * w2.ln() };
            base + lf.ln_binomial(k, z) + lf.ln_binomial(n - k, k - z) + edge_part
        })
        .collect()
}

/// `E[X^2]` in closed form (exact multiplicities for `n <= 60`, log-space
/// beyond that).
pub fn expected_x2_formula(n: usize, m: usize, k: usize, mu: f64) -> Result<f64> {
    validate(n, m, k, mu)?;
    if n <= 60 {
        let alpha = k as f64 / n as f64;
        let mut sum = 0.0;
        for z in x2_z_range(n, k) {
            let mult = binom_u128(n, k) * binom_u128(k, z) * binom_u128(n - k, k - z);
            let w2 = w2_at(alpha, z as f64 / n as f64, mu);
            sum += mult as f64 * w2.powi(m as i32);
        }
        Ok(sum)
    } else {
        Ok(expected_x2_ln(n, m, k, mu)?.exp())
    }
}

/// `ln E[X^2]` by compensated log-sum-exp over the overlap terms.
pub fn expected_x2_ln(n: usize, m: usize, k: usize, mu: f64) -> Result<f64> {
    validate(n, m, k, mu)?;
    let lf = LnFactorials::up_to(n);
    Ok(logsumexp(&x2_term_lns(n, m, k, mu, &lf)))
}

fn env_budget(var: &str, default: f64) -> f64 {
    std::env::var(var)
        .ok()
        .and_then(|s| s.parse::<f64>().ok())
        .filter(|b| *b > 0.0)
        .unwrap_or(default)
}

/// All `k`-subsets of `0..n` as bit masks in increasing numeric order
/// (Gosper's hack).
fn gosper_masks(n: usize, k: usize) -> Vec<u64> {
    debug_assert!(k <= n && n <= 64);
    if k == 0 {
        return vec![0];
    }
    let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut mask = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut out = Vec::new();
    while mask <= limit {
        out.push(mask);
        let c = mask & mask.wrapping_neg();
        let r = mask.wrapping_add(c);
        if r < mask {
            break;
        }
        let next = (((r ^ mask) >> 2) / c) | r;
        if next <= mask {
            break;
        }
        mask = next;
    }
    out
}

/// Weight of the subset given by `mask`: 0 if any edge has both endpoints
/// inside, otherwise `mu` per edge with both endpoints outside.
fn subset_weight(edges: &[(u32, u32)], mask: u64, mu: f64) -> f64 {
    let mut w = 1.0;
    for &(u, v) in edges {
        let iu = mask >> u & 1 == 1;
        let iv = mask >> v & 1 == 1;
        if iu && iv {
            return 0.0;
        }
        if !iu && !iv {
            w *= mu;
        }
    }
    w
}

/// `(E[X], E[X^2])` by full enumeration of all `(n^2)^m` graphs, with the
/// default budget (`INDSET_BRUTE_BUDGET` environment override, else 1e8
/// subset evaluations).
pub fn brute_moments(n: usize, m: usize, k: usize, mu: f64) -> Result<(f64, f64)> {
    brute_moments_with_budget(n, m, k, mu, env_budget("INDSET_BRUTE_BUDGET", 1e8))
}

/// Budgeted brute force: refuses when `(n^2)^m * C(n,k)` exceeds `budget`.
pub fn brute_moments_with_budget(
    n: usize,
    m: usize,
    k: usize,
    mu: f64,
    budget: f64,
) -> Result<(f64, f64)> {
    validate(n, m, k, mu)?;
    if n > 64 {
        return Err(EngineError::InvalidParameter {
            name: "n",
            value: n as f64,
            message: "brute force uses 64-bit subset masks",
        });
    }
    let graphs = (n as f64 * n as f64).powi(m as i32);
    let cost = graphs * binom_f64(n, k);
    if cost > budget {
        return Err(EngineError::BudgetExceeded {
            what: "brute-force graph enumeration",
            required: cost,
            budget,
        });
    }
    let subsets = gosper_masks(n, k);
    let n2 = n * n;
    let mut counter = vec![0usize; m];
    let mut edges = vec![(0u32, 0u32); m];
    let (mut sum_x, mut sum_x2) = (0.0f64, 0.0f64);
    let mut done = false;
    while !done {
        for (slot, &choice) in edges.iter_mut().zip(&counter) {
            *slot = ((choice / n) as u32, (choice % n) as u32);
        }
        let x: f64 = subsets
            .iter()
            .map(|&mask| subset_weight(&edges, mask, mu))
            .sum();
        sum_x += x;
        sum_x2 += x * x;
        done = true;
        for c in counter.iter_mut() {
            *c += 1;
            if *c < n2 {
                done = false;
                break;
            }
            *c = 0;
        }
    }
    Ok((sum_x / graphs, sum_x2 / graphs))
}

/// Monte Carlo estimates of both moments with their standard errors.
#[derive(Debug, Clone, Serialize)]
pub struct McMoments {
    pub trials: u64,
    pub e_x: f64,
    /// Standard error of `e_x` (sample std over sqrt(trials)); `None` for
    /// fewer than two trials.
    pub se_x: Option<f64>,
    pub e_x2: f64,
    pub se_x2: Option<f64>,
}

/// Monte Carlo moments with the default budget (`INDSET_MC_BUDGET`
/// environment override, else 1e8 subset evaluations).
pub fn mc_moments(
    n: usize,
    m: usize,
    k: usize,
    mu: f64,
    trials: u64,
    seed: u64,
) -> Result<McMoments> {
    mc_moments_with_budget(n, m, k, mu, trials, seed, env_budget("INDSET_MC_BUDGET", 1e8))
}

/// Budgeted Monte Carlo: samples `trials` graphs (graph `t` from seed
/// `seed + t`) and evaluates `X` on each by subset enumeration; refuses
/// when `C(n,k) * trials` exceeds `budget`.
pub fn mc_moments_with_budget(
    n: usize,
    m: usize,
    k: usize,
    mu: f64,
    trials: u64,
    seed: u64,
    budget: f64,
) -> Result<McMoments> {
    validate(n, m, k, mu)?;
    if n > 64 {
        return Err(EngineError::InvalidParameter {
            name: "n",
            value: n as f64,
            message: "Monte Carlo subset enumeration uses 64-bit masks",
        });
    }
    if trials == 0 {
        return Err(EngineError::InvalidParameter {
            name: "trials",
            value: 0.0,
            message: "at least one trial is required",
        });
    }
    let cost = binom_f64(n, k) * trials as f64;
    if cost > budget {
        return Err(EngineError::BudgetExceeded {
            what: "Monte Carlo subset evaluations",
            required: cost,
            budget,
        });
    }
    let subsets = gosper_masks(n, k);
    let mut xs = Vec::with_capacity(trials as usize);
    for t in 0..trials {
        let g = MultiGraph::sample(n, m, seed.wrapping_add(t))?;
        let x: f64 = subsets
            .iter()
            .map(|&mask| subset_weight(g.edges(), mask, mu))
            .sum();
        xs.push(x);
    }
    let t = trials as f64;
    let mean = xs.iter().sum::<f64>() / t;
    let mean2 = xs.iter().map(|x| x * x).sum::<f64>() / t;
    let se = |values: &[f64], center: f64| {
        if values.len() < 2 {
            return None;
        }
        let var = values.iter().map(|v| (v - center).powi(2)).sum::<f64>() / (t - 1.0);
        Some((var / t).sqrt())
    };
    let squares: Vec<f64> = xs.iter().map(|x| x * x).collect();
    Ok(McMoments {
        trials,
        e_x: mean,
        se_x: se(&xs, mean),
        e_x2: mean2,
        se_x2: se(&squares, mean2),
    })
}

/// One overlap's share of the second moment.
#[derive(Debug, Clone, Serialize)]
pub struct RatioPoint {
    /// Overlap size (shared vertices of the two sets).
    pub z: usize,
    /// Overlap density `z / n`.
    pub zeta: f64,
    /// Log of the raw overlap-`z` term of `E[X^2]`.
    pub contribution_ln: f64,
    /// The same term normalized by `E[X]^2`.
    pub contribution: f64,
}

/// Decomposition of `E[X^2] / E[X]^2` over the overlap sizes.
#[derive(Debug, Clone, Serialize)]
pub struct RatioProfile {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub mu: f64,
    pub rows: Vec<RatioPoint>,
    /// Overlap size with the largest contribution.
    pub argmax_z: usize,
    /// Overlap size `round(k^2 / n)` where independent k-sets would overlap.
    pub predicted_z: usize,
    /// `2 ln E[X]` — the normalizer applied to each contribution.
    pub normalizer_ln: f64,
    /// `ln E[X^2]`, summed with exactly the same arithmetic as
    /// [`expected_x2_ln`] (bit-for-bit equal).
    pub total_x2_ln: f64,
    /// `E[X^2] / E[X]^2 = exp(total_x2_ln - normalizer_ln)`.
    pub sum_normalized: f64,
}

/// Splits the second-moment ratio into per-overlap contributions.
pub fn ratio_profile(n: usize, m: usize, k: usize, mu: f64) -> Result<RatioProfile> {
    validate(n, m, k, mu)?;
    let lf = LnFactorials::up_to(n);
    let terms = x2_term_lns(n, m, k, mu, &lf);
    let normalizer_ln = 2.0 * expected_x_ln(n, m, k, mu)?;
    let z_lo = *x2_z_range(n, k).start();
    let rows: Vec<RatioPoint> = terms
        .iter()
        .enumerate()
        .map(|(i, &t)| RatioPoint {
            z: z_lo + i,
            zeta: (z_lo + i) as f64 / n as f64,
            contribution_ln: t,
            contribution: (t - normalizer_ln).exp(),
        })
        .collect();
    let argmax_z = rows
        .iter()
        .max_by(|a, b| a.contribution_ln.total_cmp(&b.contribution_ln))
        .map(|r| r.z)
        .unwrap_or(z_lo);
    let total_x2_ln = logsumexp(&terms);
    Ok(RatioProfile {
        n,
        m,
        k,
        mu,
        rows,
        argmax_z,
        predicted_z: ((k * k) as f64 / n as f64).round() as usize,
        normalizer_ln,
        total_x2_ln,
        sum_normalized: (total_x2_ln - normalizer_ln).exp(),
    })
}

/// Side-by-side moment values from every requested method.
#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub mu: f64,
    pub e_x_formula: f64,
    pub e_x2_formula: f64,
    pub e_x_brute: Option<f64>,
    pub e_x2_brute: Option<f64>,
    pub e_x_mc: Option<f64>,
    pub se_x: Option<f64>,
    pub e_x2_mc: Option<f64>,
    pub se_x2: Option<f64>,
    /// Largest absolute formula-vs-brute discrepancy (None without brute).
    pub max_abs_discrepancy: Option<f64>,
}

/// Computes the closed forms and, on request, the brute-force and Monte
/// Carlo cross-checks.
pub fn moment_report(
    n: usize,
    m: usize,
    k: usize,
    mu: f64,
    with_brute: bool,
    mc_trials: Option<u64>,
    seed: u64,
) -> Result<MomentReport> {
    let e_x_formula = expected_x_formula(n, m, k, mu)?;
    let e_x2_formula = expected_x2_formula(n, m, k, mu)?;
    let mut report = MomentReport {
        n,
        m,
        k,
        mu,
        e_x_formula,
        e_x2_formula,
        e_x_brute: None,
        e_x2_brute: None,
        e_x_mc: None,
        se_x: None,
        e_x2_mc: None,
        se_x2: None,
        max_abs_discrepancy: None,
    };
    if with_brute {
        let (bx, bx2) = brute_moments(n, m, k, mu)?;
        report.e_x_brute = Some(bx);
        report.e_x2_brute = Some(bx2);
        report.max_abs_discrepancy =
            Some((e_x_formula - bx).abs().max((e_x2_formula - bx2).abs()));
    }
    if let Some(trials) = mc_trials {
        let mc = mc_moments(n, m, k, mu, trials, seed)?;
        report.e_x_mc = Some(mc.e_x);
        report.se_x = mc.se_x;
        report.e_x2_mc = Some(mc.e_x2);
        report.se_x2 = mc.se_x2;
    }
    Ok(report)
}
