//! Sampling-model invariants (degree sums, loop statistics, endpoint
//! uniformity), bit-level agreement of the two weight routes, an
//! independent subset-DP oracle for the exact solver, correctness and
//! determinism of the heuristics, and the text round trip.

use indset_core::graph::{
    exact_mis, greedy_random, karp_sipser, run_trials, solve_one, splitmix64, summarize,
};
use indset_core::{Algorithm, EngineError, MultiGraph, VertexSet};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Deterministic light-weight generator for test-local random choices,
/// independent of the crate's sampling RNG.
struct Mix(u64);

impl Mix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        splitmix64(self.0)
    }

    fn below(&mut self, bound: u64) -> u64 {
        self.next() % bound
    }
}

/// Degrees count loops twice, so they always sum to exactly `2m`, and the
/// per-graph loop count averages `m/n` across seeds.
#[test]
fn degree_sum_and_loop_rate() {
    let (n, m, seeds) = (10_000usize, 15_000usize, 2_000u64);
    let mut total_loops = 0u64;
    for seed in 0..seeds {
        let g = MultiGraph::sample(n, m, seed).unwrap();
        assert_eq!(g.degree().iter().sum::<u64>(), 2 * m as u64);
        total_loops += g.edges().iter().filter(|&&(u, v)| u == v).count() as u64;
    }
    let mean_loops = total_loops as f64 / seeds as f64;
    // Expected m/n = 1.5 per graph; 2000 seeds put the sample mean well
    // inside +-0.1 (about 4 standard errors).
    assert!(
        (1.4..=1.6).contains(&mean_loops),
        "mean loop count {mean_loops} outside [1.4, 1.6]"
    );
}

/// Every ordered endpoint pair is equally likely: chi-square over the 400
/// cells of a 20-vertex graph with a million edges.
#[test]
fn endpoint_pairs_are_uniform() {
    let (n, m) = (20usize, 1_000_000usize);
    let g = MultiGraph::sample(n, m, 20_250_819).unwrap();
    let mut counts = vec![0u64; n * n];
    for &(u, v) in g.edges() {
        counts[u as usize * n + v as usize] += 1;
    }
    let expected = m as f64 / (n * n) as f64;
    let chi2: f64 = counts
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum();
    let df = (n * n - 1) as f64;
    let p = ChiSquared::new(df).unwrap().cdf(chi2);
    assert!(
        (0.001..=0.999).contains(&p),
        "chi-square CDF {p} outside plausibility window (chi2 = {chi2})"
    );
}

/// The subset-count route and the edge-product route compute the same
/// weight bit for bit, and for independent sets the surviving edge count
/// equals `m - sum of member degrees` exactly.
#[test]
fn weight_routes_agree_bitwise() {
    let mut rng = Mix(7);
    let mut independent_seen = 0u32;
    for graph_seed in 0..100u64 {
        let g = MultiGraph::sample(30, 45, graph_seed).unwrap();
        for _ in 0..1_000 {
            // Small random subsets: large ones are almost never
            // independent at this edge density, and both branches of the
            // weight need real coverage.
            let k = rng.below(7) as usize;
            let members: Vec<usize> = (0..k).map(|_| rng.below(30) as usize).collect();
            let set = VertexSet::from_indices(30, &members);
            let mu = (rng.below(1_000) as f64 + 0.5) / 1_000.0;
            let by_count = g.weight(&set, mu);
            let by_product = g.weight_by_edge_product(&set, mu);
            assert!(
                by_count == by_product,
                "weight routes differ: {by_count:.17e} vs {by_product:.17e}"
            );
            if g.is_independent(&set) {
                independent_seen += 1;
                let outside = g
                    .edges()
                    .iter()
                    .filter(|&&(u, v)| !set.contains(u as usize) && !set.contains(v as usize))
                    .count() as i64;
                let degree_sum: i64 = set.iter().map(|v| g.degree()[v] as i64).sum();
                assert_eq!(outside, 45 - degree_sum);
            } else {
                assert_eq!(by_count, 0.0);
            }
        }
    }
    assert!(
        independent_seen > 1_000,
        "need real coverage of the independent branch, saw {independent_seen}"
    );
}

/// Maximum independent set size over the non-loop vertices by dynamic
/// programming over subsets — an oracle fully independent of the solver's
/// branch-and-bound.
fn mis_size_by_subset_dp(g: &MultiGraph) -> usize {
    let n = g.n();
    assert!(n <= 20, "oracle is exponential; keep it small");
    let mut closed = vec![0u32; n]; // closed neighborhoods over simple projection
    let mut looped = vec![false; n];
    for &(u, v) in g.edges() {
        let (u, v) = (u as usize, v as usize);
        if u == v {
            looped[u] = true;
        } else {
            closed[u] |= 1 << v;
            closed[v] |= 1 << u;
        }
    }
    let mut universe = 0u32;
    for v in 0..n {
        closed[v] |= 1 << v;
        if !looped[v] {
            universe |= 1 << v;
        }
    }
    // Restrict masks to the allowed universe by always branching on its
    // lowest bit: mis(S) = max(mis(S\v), 1 + mis(S \ N[v])).
    let full = 1usize << n;
    let mut mis = vec![0u8; full];
    for mask in 1..full {
        let restricted = mask as u32 & universe;
        if restricted == 0 {
            continue;
        }
        let v = restricted.trailing_zeros() as usize;
        let without = mask & !(1usize << v);
        let with = mask & !(closed[v] as usize);
        mis[mask] = mis[without].max(1 + mis[with]);
    }
    mis[full - 1] as usize
}

/// The branch-and-bound solver matches the subset-DP oracle on hundreds
/// of random multigraphs, including loop-heavy and dense ones.
#[test]
fn exact_solver_matches_subset_dp() {
    let mut rng = Mix(99);
    for trial in 0..500u64 {
        let n = 2 + (rng.below(15)) as usize; // 2..=16
        let m = (rng.below(2 * n as u64 + 1)) as usize;
        let g = MultiGraph::sample(n, m, 10_000 + trial).unwrap();
        let found = exact_mis(&g).unwrap();
        assert!(g.is_independent(&found));
        assert_eq!(
            found.size(),
            mis_size_by_subset_dp(&g),
            "solver disagrees with DP oracle on n={n}, m={m}, trial={trial}"
        );
    }
    for trial in 0..50u64 {
        let n = 17 + (rng.below(4)) as usize; // 17..=20
        let m = n + (rng.below(n as u64)) as usize;
        let g = MultiGraph::sample(n, m, 90_000 + trial).unwrap();
        assert_eq!(exact_mis(&g).unwrap().size(), mis_size_by_subset_dp(&g));
    }
}

/// Oversized instances are refused rather than silently truncated.
#[test]
fn exact_solver_rejects_oversized_instances() {
    let g = MultiGraph::sample(100, 50, 1).unwrap();
    assert!(matches!(
        exact_mis(&g),
        Err(EngineError::BudgetExceeded { .. })
    ));
}

/// Both heuristics always return maximal independent sets that exclude
/// looped vertices, never beat the exact optimum, and are reproducible
/// from their seed.
#[test]
fn heuristics_return_maximal_independent_sets() {
    for graph_seed in 0..50u64 {
        let g = MultiGraph::sample(40, 80, graph_seed).unwrap();
        let optimum = exact_mis(&g).unwrap().size();
        let looped: Vec<usize> = (0..40)
            .filter(|&v| g.edges().iter().any(|&(u, w)| u == w && u as usize == v))
            .collect();
        for algo_seed in [3u64, 4u64] {
            let ks = karp_sipser(&g, algo_seed);
            let gr = greedy_random(&g, algo_seed);
            for (name, set) in [("karp-sipser", &ks), ("greedy-random", &gr)] {
                assert!(g.is_independent(set), "{name} output not independent");
                assert!(g.is_maximal(set), "{name} output not maximal");
                assert!(set.size() <= optimum, "{name} beat the exact solver");
                for &v in &looped {
                    assert!(!set.contains(v), "{name} kept looped vertex {v}");
                }
            }
        }
        let again = karp_sipser(&g, 3);
        let first = karp_sipser(&g, 3);
        assert_eq!(
            first.iter().collect::<Vec<_>>(),
            again.iter().collect::<Vec<_>>()
        );
    }
}

/// On pendant-heavy structures the degree-1 peeling rule is exactly
/// optimal, so the heuristic must match the exact solver there.
#[test]
fn pendant_peeling_is_optimal_on_trees() {
    let mut rng = Mix(2024);
    for trial in 0..50u64 {
        // Random tree on 24 vertices: parent links into earlier vertices.
        let n = 24u32;
        let mut edges = Vec::new();
        for v in 1..n {
            edges.push((rng.below(v as u64) as u32, v));
        }
        let g = MultiGraph::from_edges(n as usize, edges).unwrap();
        let optimum = exact_mis(&g).unwrap().size();
        let ks = karp_sipser(&g, trial);
        assert_eq!(ks.size(), optimum, "peeling suboptimal on a tree");
    }
}

/// Simulation batches: per-trial seeds are the base seed plus the index,
/// results are bit-reproducible, and the summary respects order statistics.
#[test]
fn trial_batches_are_reproducible_and_summarized() {
    let results = run_trials(400, 2.0, 24, Algorithm::KarpSipser, 77).unwrap();
    assert_eq!(results.len(), 24);
    for (i, r) in results.iter().enumerate() {
        assert_eq!(r.seed, 77 + i as u64);
        assert_eq!(r.n, 400);
        assert_eq!(r.m, 400); // round(c n / 2)
        assert!(r.size > 0 && r.size <= 400);
        assert_eq!(r.ratio, r.size as f64 / 400.0);
    }
    // A fresh run serializes to the same bytes (wall time is excluded).
    let again = run_trials(400, 2.0, 24, Algorithm::KarpSipser, 77).unwrap();
    assert_eq!(
        serde_json::to_string(&results).unwrap(),
        serde_json::to_string(&again).unwrap()
    );
    // Each trial reproduces independently from its own derived seeds.
    let g = MultiGraph::sample(400, 400, 80).unwrap();
    let solo = solve_one(&g, Algorithm::KarpSipser, splitmix64(80)).unwrap();
    assert_eq!(results[3].size, solo.size());

    let summary = summarize(&results).unwrap();
    assert_eq!(summary.trials, 24);
    assert!(summary.min_size <= summary.q25_size);
    assert!(summary.q25_size <= summary.median_size);
    assert!(summary.median_size <= summary.q75_size);
    assert!(summary.q75_size <= summary.max_size);
    assert!((summary.mean_ratio - summary.mean_size / 400.0).abs() <= 1e-15);
    assert!(summary.std_size >= 0.0);

    assert!(run_trials(100, 2.0, 0, Algorithm::GreedyRandom, 1)
        .unwrap()
        .is_empty());
    assert!(summarize(&[]).is_none());
    assert!(run_trials(100, f64::NAN, 5, Algorithm::GreedyRandom, 1).is_err());
    assert!(run_trials(100, -1.0, 5, Algorithm::GreedyRandom, 1).is_err());
}

/// Algorithm names round-trip between display and parsing.
#[test]
fn algorithm_names_round_trip() {
    for algo in [
        Algorithm::Exact,
        Algorithm::KarpSipser,
        Algorithm::GreedyRandom,
    ] {
        let parsed: Algorithm = algo.to_string().parse().unwrap();
        assert_eq!(parsed, algo);
    }
    assert!("clever-guess".parse::<Algorithm>().is_err());
}

/// Text serialization round-trips through an actual file, and malformed
/// files are rejected with a structured error.
#[test]
fn text_files_round_trip() {
    let g = MultiGraph::sample(50, 120, 5).unwrap();
    let dir = std::env::temp_dir();
    let path = dir.join(format!("indset-graph-test-{}.txt", std::process::id()));
    g.save(&path).unwrap();
    let back = MultiGraph::load(&path).unwrap();
    assert_eq!(g, back);
    std::fs::remove_file(&path).unwrap();

    assert!(matches!(
        MultiGraph::load(dir.join("indset-no-such-file.txt")),
        Err(EngineError::Io(_))
    ));

    let bad = dir.join(format!("indset-graph-bad-{}.txt", std::process::id()));
    std::fs::write(&bad, "not a header\n0 1\n").unwrap();
    assert!(matches!(
        MultiGraph::load(&bad),
        Err(EngineError::MalformedGraph(_))
    ));
    std::fs::remove_file(&bad).unwrap();
}
