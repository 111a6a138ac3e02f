//! Random multigraphs, independent-set algorithms, and simulation trials.
//!
//! A graph on `n` vertices is `m` ordered pairs drawn uniformly from the
//! `n^2` possibilities, so self-loops and repeated edges occur with their
//! natural frequencies (a loop contributes 2 to its endpoint's degree, and
//! the degree total is always `2m`). A vertex carrying a loop can never
//! join an independent set.
//!
//! Three solvers are provided: exact branch-and-bound for up to 64
//! vertices, the degree-guided greedy that processes pendant and isolated
//! vertices first ([`karp_sipser`]), and plain randomized greedy
//! ([`greedy_random`]). [`run_trials`] wires them to the sampler with a
//! deterministic seeding discipline: trial `i` samples its graph from
//! `seed + i` and hands the algorithm an independent stream derived from
//! that same value by [`splitmix64`], so graph and algorithm randomness
//! never alias.

use crate::error::{EngineError, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::io::{BufRead, Write};
use std::path::Path;
use std::time::Instant;

/// Dense bit-set over the vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    blocks: Vec<u64>,
    n: usize,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet {
            blocks: vec![0; n.div_ceil(64)],
            n,
        }
    }

    pub fn from_indices(n: usize, indices: &[usize]) -> Self {
        let mut s = Self::new(n);
        for &v in indices {
            s.insert(v);
        }
        s
    }

    /// Number of vertices of the underlying graph (not the set size).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "vertex {v} out of range 0..{}", self.n);
        self.blocks[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        assert!(v < self.n, "vertex {v} out of range 0..{}", self.n);
        self.blocks[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.blocks[v / 64] >> (v % 64) & 1 == 1
    }

    /// Cardinality of the set.
    pub fn size(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&v| self.contains(v))
    }
}

/// Multigraph given by an ordered list of (possibly repeated, possibly
/// self-looping) edges over vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
    degree: Vec<u64>,
}

impl MultiGraph {
    /// Builds a multigraph, validating that every endpoint is in range.
    pub fn from_edges(n: usize, edges: Vec<(u32, u32)>) -> Result<Self> {
        if n == 0 || n > u32::MAX as usize {
            return Err(EngineError::MalformedGraph(format!(
                "vertex count {n} out of supported range"
            )));
        }
        let mut degree = vec![0u64; n];
        for &(u, v) in &edges {
            if u as usize >= n || v as usize >= n {
                return Err(EngineError::MalformedGraph(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        Ok(MultiGraph { n, edges, degree })
    }

    /// Samples `m` ordered pairs uniformly from the `n^2` possibilities.
    pub fn sample(n: usize, m: usize, seed: u64) -> Result<Self> {
        if n == 0 || n > u32::MAX as usize {
            return Err(EngineError::InvalidParameter {
                name: "n",
                value: n as f64,
                message: "vertex count must be in 1..=u32::MAX",
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let u = rng.gen_range(0..n as u32);
            let v = rng.gen_range(0..n as u32);
            edges.push((u, v));
        }
        Self::from_edges(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Degrees with loops counting twice; sums to `2m`.
    pub fn degree(&self) -> &[u64] {
        &self.degree
    }

    /// True when no edge (loops included) has both endpoints in the set.
    pub fn is_independent(&self, set: &VertexSet) -> bool {
        self.edges
            .iter()
            .all(|&(u, v)| !(set.contains(u as usize) && set.contains(v as usize)))
    }

    /// True when the independent set cannot be extended: every outside
    /// vertex either carries a loop or has a neighbor in the set.
    pub fn is_maximal(&self, set: &VertexSet) -> bool {
        if !self.is_independent(set) {
            return false;
        }
        let (adj, has_loop) = self.simple_adjacency();
        (0..self.n).all(|v| {
            set.contains(v) || has_loop[v] || adj[v].iter().any(|&u| set.contains(u as usize))
        })
    }

    /// Weight of a set: `mu` to the power of the number of edges with both
    /// endpoints outside the set if the set is independent, else 0.
    ///
    /// The power is accumulated by sequential multiplication so the result
    /// is bit-identical to [`MultiGraph::weight_by_edge_product`].
    pub fn weight(&self, set: &VertexSet, mu: f64) -> f64 {
        if !self.is_independent(set) {
            return 0.0;
        }
        let outside = self
            .edges
            .iter()
            .filter(|&&(u, v)| !set.contains(u as usize) && !set.contains(v as usize))
            .count();
        let mut w = 1.0;
        for _ in 0..outside {
            w *= mu;
        }
        w
    }

    /// The same weight accumulated edge-by-edge in input order: factor
    /// `mu` when both endpoints are outside, 1 when exactly one endpoint
    /// is inside, and an immediate 0 when the set fails independence.
    pub fn weight_by_edge_product(&self, set: &VertexSet, mu: f64) -> f64 {
        let mut w = 1.0;
        for &(u, v) in &self.edges {
            match (set.contains(u as usize), set.contains(v as usize)) {
                (true, true) => return 0.0,
                (false, false) => w *= mu,
                _ => {}
            }
        }
        w
    }

    /// Deduplicated loop-free adjacency lists (ascending) plus the loop
    /// indicator per vertex.
    fn simple_adjacency(&self) -> (Vec<Vec<u32>>, Vec<bool>) {
        let mut has_loop = vec![false; self.n];
        let mut pairs = Vec::with_capacity(self.edges.len());
        for &(u, v) in &self.edges {
            if u == v {
                has_loop[u as usize] = true;
            } else {
                pairs.push((u.min(v), u.max(v)));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut adj = vec![Vec::new(); self.n];
        for (u, v) in pairs {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        (adj, has_loop)
    }

    /// Writes the text form: a `"n m"` header line, then one `"u v"` line
    /// per edge in order.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {}", self.n, self.edges.len())?;
        for &(u, v) in &self.edges {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    /// Parses the text form written by [`MultiGraph::write_text`]. Blank
    /// lines are ignored; anything else that deviates from the format is a
    /// [`EngineError::MalformedGraph`].
    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = loop {
            match lines.next() {
                None => {
                    return Err(EngineError::MalformedGraph(
                        "missing header line".to_string(),
                    ))
                }
                Some(line) => {
                    let line = line?;
                    if !line.trim().is_empty() {
                        break line;
                    }
                }
            }
        };
        let mut it = header.split_whitespace();
        let (n, m) = match (it.next(), it.next(), it.next()) {
            (Some(a), Some(b), None) => {
                let n: usize = a.parse().map_err(|_| {
                    EngineError::MalformedGraph(format!("bad vertex count {a:?}"))
                })?;
                let m: usize = b.parse().map_err(|_| {
                    EngineError::MalformedGraph(format!("bad edge count {b:?}"))
                })?;
                (n, m)
            }
            _ => {
                return Err(EngineError::MalformedGraph(format!(
                    "header must be \"n m\", got {header:?}"
                )))
            }
        };
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let mut it = t.split_whitespace();
            match (it.next(), it.next(), it.next()) {
                (Some(a), Some(b), None) => {
                    let u: u32 = a.parse().map_err(|_| {
                        EngineError::MalformedGraph(format!("bad endpoint {a:?}"))
                    })?;
                    let v: u32 = b.parse().map_err(|_| {
                        EngineError::MalformedGraph(format!("bad endpoint {b:?}"))
                    })?;
                    edges.push((u, v));
                }
                _ => {
                    return Err(EngineError::MalformedGraph(format!(
                        "edge line must be \"u v\", got {t:?}"
                    )))
                }
            }
        }
        if edges.len() != m {
            return Err(EngineError::MalformedGraph(format!(
                "header promises {m} edges, file has {}",
                edges.len()
            )));
        }
        Self::from_edges(n, edges)
    }

    pub fn save<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_text(std::io::BufWriter::new(f))
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_text(std::io::BufReader::new(f))
    }
}

/// SplitMix64 output function: mixes a seed into a decorrelated 64-bit
/// value (the standard additive-constant-then-xorshift-multiply mix).
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn exact_cap() -> usize {
    std::env::var("INDSET_EXACT_CAP")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .map(|v| v.min(64))
        .unwrap_or(64)
}

/// Exact maximum independent set by branch-and-bound over bit masks.
///
/// Branches on the highest-degree remaining vertex and prunes with a
/// greedy clique-cover bound. Limited to 64 vertices (or the lower
/// `INDSET_EXACT_CAP` environment override).
pub fn exact_mis(g: &MultiGraph) -> Result<VertexSet> {
    let cap = exact_cap();
    if g.n > cap {
        return Err(EngineError::BudgetExceeded {
            what: "exact solver vertex count",
            required: g.n as f64,
            budget: cap as f64,
        });
    }
    let (adj_lists, has_loop) = g.simple_adjacency();
    let mut adj = vec![0u64; g.n];
    for (v, nbrs) in adj_lists.iter().enumerate() {
        for &u in nbrs {
            adj[v] |= 1 << u;
        }
    }
    let mut universe = 0u64;
    for (v, &looped) in has_loop.iter().enumerate() {
        if !looped {
            universe |= 1 << v;
        }
    }
    let mut best = 0u32;
    let mut best_mask = 0u64;
    branch(universe, 0, 0, &adj, &mut best, &mut best_mask);
    let mut set = VertexSet::new(g.n);
    for v in 0..g.n {
        if best_mask >> v & 1 == 1 {
            set.insert(v);
        }
    }
    Ok(set)
}

fn branch(cand: u64, cur: u32, cur_mask: u64, adj: &[u64], best: &mut u32, best_mask: &mut u64) {
    if cur + cand.count_ones() <= *best {
        return;
    }
    // Pick the candidate with the most candidate neighbors.
    let (mut pivot, mut pivot_deg) = (usize::MAX, 0u32);
    let mut rest = cand;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (adj[v] & cand).count_ones();
        if pivot == usize::MAX || d > pivot_deg {
            (pivot, pivot_deg) = (v, d);
        }
    }
    if pivot == usize::MAX || pivot_deg == 0 {
        // Remaining candidates are pairwise non-adjacent: take them all.
        let size = cur + cand.count_ones();
        if size > *best {
            *best = size;
            *best_mask = cur_mask | cand;
        }
        return;
    }
    if cur + clique_cover_bound(cand, adj) <= *best {
        return;
    }
    branch(
        cand & !adj[pivot] & !(1 << pivot),
        cur + 1,
        cur_mask | 1 << pivot,
        adj,
        best,
        best_mask,
    );
    branch(cand & !(1 << pivot), cur, cur_mask, adj, best, best_mask);
}

/// Upper bound on the independent-set size within `cand`: a greedy
/// partition into cliques (each clique can contribute at most one vertex).
fn clique_cover_bound(cand: u64, adj: &[u64]) -> u32 {
    let mut classes: Vec<u64> = Vec::new();
    let mut rest = cand;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let av = adj[v];
        match classes.iter_mut().find(|c| **c & !av == 0) {
            Some(c) => *c |= 1 << v,
            None => classes.push(1 << v),
        }
    }
    classes.len() as u32
}

/// Degree-guided greedy on the loop-free simple projection.
///
/// Loop vertices are removed up front (they can never be chosen). While
/// any remaining vertex has degree at most 1 the algorithm includes one
/// such vertex chosen uniformly at random (these moves never hurt);
/// otherwise it includes a uniformly random remaining vertex. Including a
/// vertex deletes its closed neighborhood.
pub fn karp_sipser(g: &MultiGraph, seed: u64) -> VertexSet {
    let (adj, has_loop) = g.simple_adjacency();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.n;
    let mut state = Peeler::new(n, adj);
    for (v, &looped) in has_loop.iter().enumerate() {
        if looped {
            state.delete(v);
        }
    }
    let mut pending: Vec<u32> = (0..n as u32)
        .filter(|&v| state.alive[v as usize] && state.deg[v as usize] <= 1)
        .collect();
    let mut set = VertexSet::new(n);
    while !state.alive_vec.is_empty() {
        while !pending.is_empty() {
            let idx = rng.gen_range(0..pending.len());
            let v = pending.swap_remove(idx) as usize;
            if state.alive[v] && state.deg[v] <= 1 {
                set.insert(v);
                state.include(v, &mut pending);
            }
        }
        if !state.alive_vec.is_empty() {
            let idx = rng.gen_range(0..state.alive_vec.len());
            let v = state.alive_vec[idx] as usize;
            set.insert(v);
            state.include(v, &mut pending);
        }
    }
    set
}

/// Mutable peeling state shared by the include/delete moves of
/// [`karp_sipser`].
struct Peeler {
    adj: Vec<Vec<u32>>,
    alive: Vec<bool>,
    deg: Vec<usize>,
    alive_vec: Vec<u32>,
    pos: Vec<usize>,
}

impl Peeler {
    fn new(n: usize, adj: Vec<Vec<u32>>) -> Self {
        let deg = adj.iter().map(Vec::len).collect();
        Peeler {
            adj,
            alive: vec![true; n],
            deg,
            alive_vec: (0..n as u32).collect(),
            pos: (0..n).collect(),
        }
    }

    fn delete(&mut self, v: usize) {
        if !self.alive[v] {
            return;
        }
        self.alive[v] = false;
        let i = self.pos[v];
        self.alive_vec.swap_remove(i);
        if i < self.alive_vec.len() {
            self.pos[self.alive_vec[i] as usize] = i;
        }
        self.pos[v] = usize::MAX;
        for j in 0..self.adj[v].len() {
            let u = self.adj[v][j] as usize;
            if self.alive[u] {
                self.deg[u] -= 1;
            }
        }
    }

    fn delete_tracking(&mut self, v: usize, pending: &mut Vec<u32>) {
        if !self.alive[v] {
            return;
        }
        self.alive[v] = false;
        let i = self.pos[v];
        self.alive_vec.swap_remove(i);
        if i < self.alive_vec.len() {
            self.pos[self.alive_vec[i] as usize] = i;
        }
        self.pos[v] = usize::MAX;
        for j in 0..self.adj[v].len() {
            let u = self.adj[v][j] as usize;
            if self.alive[u] {
                self.deg[u] -= 1;
                if self.deg[u] <= 1 {
                    pending.push(u as u32);
                }
            }
        }
    }

    /// Deletes the closed neighborhood of an included vertex.
    fn include(&mut self, v: usize, pending: &mut Vec<u32>) {
        let nbrs: Vec<u32> = self.adj[v]
            .iter()
            .copied()
            .filter(|&u| self.alive[u as usize])
            .collect();
        self.delete_tracking(v, pending);
        for u in nbrs {
            self.delete_tracking(u as usize, pending);
        }
    }
}

/// Randomized greedy: scan the vertices in a uniformly random order and
/// include each one whose neighborhood is still untouched (loop vertices
/// are never included).
pub fn greedy_random(g: &MultiGraph, seed: u64) -> VertexSet {
    let (adj, has_loop) = g.simple_adjacency();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u32> = (0..g.n as u32).collect();
    order.shuffle(&mut rng);
    let mut set = VertexSet::new(g.n);
    for &v in &order {
        let v = v as usize;
        if !has_loop[v] && adj[v].iter().all(|&u| !set.contains(u as usize)) {
            set.insert(v);
        }
    }
    set
}

/// Independent-set solver selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Exact,
    KarpSipser,
    GreedyRandom,
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Algorithm::Exact),
            "karp-sipser" => Ok(Algorithm::KarpSipser),
            "greedy-random" => Ok(Algorithm::GreedyRandom),
            other => Err(format!(
                "unknown algorithm {other:?} (expected exact, karp-sipser, or greedy-random)"
            )),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Exact => write!(f, "exact"),
            Algorithm::KarpSipser => write!(f, "karp-sipser"),
            Algorithm::GreedyRandom => write!(f, "greedy-random"),
        }
    }
}

/// One solved trial. The wall time is informational only and is excluded
/// from serialization so that emitted records are byte-for-byte
/// reproducible.
#[derive(Debug, Clone, Serialize)]
pub struct SimResult {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub algorithm: Algorithm,
    pub size: usize,
    pub ratio: f64,
    #[serde(skip)]
    pub wall_time_s: f64,
}

/// Runs the chosen solver on one already-sampled graph.
pub fn solve_one(g: &MultiGraph, algorithm: Algorithm, algo_seed: u64) -> Result<VertexSet> {
    match algorithm {
        Algorithm::Exact => exact_mis(g),
        Algorithm::KarpSipser => Ok(karp_sipser(g, algo_seed)),
        Algorithm::GreedyRandom => Ok(greedy_random(g, algo_seed)),
    }
}

/// Samples `trials` graphs at average degree `c` (so `m = round(c n / 2)`)
/// and solves each one. Trial `i` uses graph seed `seed + i` and algorithm
/// seed `splitmix64(seed + i)`.
pub fn run_trials(
    n: usize,
    c: f64,
    trials: u64,
    algorithm: Algorithm,
    seed: u64,
) -> Result<Vec<SimResult>> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(EngineError::InvalidParameter {
            name: "c",
            value: c,
            message: "average degree must be finite and non-negative",
        });
    }
    let m = (c * n as f64 / 2.0).round() as usize;
    let mut out = Vec::with_capacity(trials as usize);
    for i in 0..trials {
        let graph_seed = seed.wrapping_add(i);
        let g = MultiGraph::sample(n, m, graph_seed)?;
        let t0 = Instant::now();
        let set = solve_one(&g, algorithm, splitmix64(graph_seed))?;
        let size = set.size();
        out.push(SimResult {
            seed: graph_seed,
            n,
            m,
            algorithm,
            size,
            ratio: size as f64 / n as f64,
            wall_time_s: t0.elapsed().as_secs_f64(),
        });
    }
    Ok(out)
}

/// Aggregate statistics over a batch of trials on identical parameters.
///
/// Quantiles use the nearest-rank convention on the sorted sizes; the
/// standard deviation is the sample one (0 for fewer than two trials).
#[derive(Debug, Clone, Serialize)]
pub struct TrialSummary {
    pub trials: usize,
    pub n: usize,
    pub m: usize,
    pub algorithm: Algorithm,
    pub mean_size: f64,
    pub std_size: f64,
    pub min_size: usize,
    pub q25_size: usize,
    pub median_size: usize,
    pub q75_size: usize,
    pub max_size: usize,
    pub mean_ratio: f64,
}

/// Summarizes a non-empty batch of [`SimResult`]s (None when empty).
pub fn summarize(results: &[SimResult]) -> Option<TrialSummary> {
    let first = results.first()?;
    let mut sizes: Vec<usize> = results.iter().map(|r| r.size).collect();
    sizes.sort_unstable();
    let len = sizes.len();
    let q = |p: f64| sizes[((len - 1) as f64 * p).round() as usize];
    let mean = sizes.iter().sum::<usize>() as f64 / len as f64;
    let var = if len >= 2 {
        sizes
            .iter()
            .map(|&s| (s as f64 - mean).powi(2))
            .sum::<f64>()
            / (len - 1) as f64
    } else {
        0.0
    };
    Some(TrialSummary {
        trials: len,
        n: first.n,
        m: first.m,
        algorithm: first.algorithm,
        mean_size: mean,
        std_size: var.sqrt(),
        min_size: sizes[0],
        q25_size: q(0.25),
        median_size: q(0.5),
        q75_size: q(0.75),
        max_size: sizes[len - 1],
        mean_ratio: mean / first.n as f64,
    })
}
