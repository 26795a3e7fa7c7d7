//! `r(l)`: the fewest edges induced by any `l` vertices.
//!
//! Exact methods walk `l`-subsets of the vertex indices in colex order
//! (largest element first). Work is split by the largest element across
//! rayon workers. Ties resolve to the colex-first minimizer whatever the
//! scheduling.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::bitset::BitSet;
use crate::combinatorics::{binomial, GraphParams};
use crate::error::{Error, Result};
use crate::graph::{InducedGraph, VertexSet, DEFAULT_MATERIALIZE_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalMethod {
    Exhaustive,
    BranchBound,
    LocalSearch,
}

impl ExtremalMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExtremalMethod::Exhaustive => "exhaustive",
            ExtremalMethod::BranchBound => "branch_bound",
            ExtremalMethod::LocalSearch => "local_search",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "exhaustive" => Some(ExtremalMethod::Exhaustive),
            "branch_bound" | "branch-bound" => Some(ExtremalMethod::BranchBound),
            "local_search" | "local-search" => Some(ExtremalMethod::LocalSearch),
            _ => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        !matches!(self, ExtremalMethod::LocalSearch)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest `C(C(n,r), l)` that exhaustive search accepts.
    pub exhaustive_budget: u128,
    /// Largest vertex count that branch and bound accepts.
    pub branch_bound_cap: usize,
    /// Largest vertex count that any search materializes.
    pub materialize_cap: u128,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            exhaustive_budget: 100_000_000,
            branch_bound_cap: 40,
            materialize_cap: DEFAULT_MATERIALIZE_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSearchConfig {
    pub seed: u64,
    pub restarts: usize,
    /// Iteration budget per restart.
    pub iterations: u64,
    /// A restart also ends after this many iterations without improving
    /// its best value.
    pub patience: u64,
}

impl Default for LocalSearchConfig {
    fn default() -> Self {
        LocalSearchConfig {
            seed: 0,
            restarts: 20,
            iterations: 10_000,
            patience: 2_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalResult {
    pub l: u64,
    pub value: u64,
    pub witness: VertexSet,
    /// True when `value` is proven minimal.
    pub certified: bool,
    pub method: ExtremalMethod,
    pub nodes_explored: u64,
    #[serde(serialize_with = "as_seconds")]
    pub wall_time: Duration,
}

fn as_seconds<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

fn whole_graph(p: &GraphParams, l: u64, limits: &SearchLimits) -> Result<InducedGraph> {
    let count = p.vertex_count();
    if l as u128 > count {
        return Err(Error::domain(format!(
            "l = {l} exceeds the {count} vertices of {p}"
        )));
    }
    if count > limits.materialize_cap {
        return Err(Error::sizing(format!("vertex count of {p}"), count, limits.materialize_cap));
    }
    Ok(InducedGraph::new(&VertexSet::all(*p)))
}

/// Certified `r(l)` by exhaustive enumeration or branch and bound.
pub fn r_of_l_exact(
    p: &GraphParams,
    l: u64,
    method: ExtremalMethod,
    limits: &SearchLimits,
) -> Result<ExtremalResult> {
    let start = Instant::now();
    let prune = match method {
        ExtremalMethod::Exhaustive => false,
        ExtremalMethod::BranchBound => true,
        ExtremalMethod::LocalSearch => {
            return Err(Error::domain("local search does not certify r(l)"));
        }
    };
    let count = p.vertex_count();
    if l as u128 > count {
        return Err(Error::domain(format!(
            "l = {l} exceeds the {count} vertices of {p}"
        )));
    }
    if prune && count > limits.branch_bound_cap as u128 {
        return Err(Error::sizing(
            format!("vertex count of {p} for branch and bound"),
            count,
            limits.branch_bound_cap,
        ));
    }
    if !prune {
        let subsets = binomial(count as u64, l).ok();
        if subsets.is_none_or(|c| c > limits.exhaustive_budget) {
            let estimate = subsets.map_or(format!("C({count},{l}) > 2^128"), |c| c.to_string());
            return Err(Error::sizing(
                format!("number of {l}-subsets of {p}"),
                estimate,
                limits.exhaustive_budget,
            ));
        }
    }
    let graph = whole_graph(p, l, limits)?;
    let search = SubsetSearch::new(&graph, l as usize, prune);
    let (value, witness, nodes) = search.run();
    Ok(ExtremalResult {
        l,
        value,
        witness: graph.subset(witness),
        certified: true,
        method,
        nodes_explored: nodes,
        wall_time: start.elapsed(),
    })
}

struct SubsetSearch<'g> {
    graph: &'g InducedGraph,
    l: usize,
    prune: bool,
    incumbent: AtomicU64,
}

struct Partial {
    value: u64,
    witness: Vec<usize>,
    nodes: u64,
}

impl<'g> SubsetSearch<'g> {
    fn new(graph: &'g InducedGraph, l: usize, prune: bool) -> Self {
        SubsetSearch {
            graph,
            l,
            prune,
            incumbent: AtomicU64::new(u64::MAX),
        }
    }

    fn run(&self) -> (u64, Vec<usize>, u64) {
        if self.l == 0 {
            return (0, Vec::new(), 1);
        }
        let parts: Vec<Partial> = (self.l - 1..self.graph.len())
            .into_par_iter()
            .map(|top| self.search_below(top))
            .collect();
        let nodes = parts.iter().map(|p| p.nodes).sum();
        // Partitions are in colex order of their largest element, so the
        // first partition attaining the minimum holds the colex-first witness.
        let best = parts
            .into_iter()
            .fold(None::<Partial>, |acc, p| match acc {
                Some(a) if a.value <= p.value => Some(a),
                _ => Some(p),
            })
            .expect("l <= vertex count gives at least one partition");
        let mut witness = best.witness;
        witness.sort_unstable();
        (best.value, witness, nodes)
    }

    fn search_below(&self, top: usize) -> Partial {
        let mut part = Partial {
            value: u64::MAX,
            witness: Vec::new(),
            nodes: 0,
        };
        let mut mask = BitSet::new(self.graph.len());
        mask.insert(top);
        let mut chosen = vec![top];
        self.descend(self.l - 1, top, &mut chosen, &mut mask, 0, &mut part);
        part
    }

    /// Sum of the `k` smallest edge counts from candidates `0..upper` into
    /// the current set; a lower bound on the edges the completion adds.
    fn completion_bound(&self, k: usize, upper: usize, mask: &BitSet) -> u64 {
        let mut links: Vec<u64> = (0..upper)
            .map(|c| self.graph.neighbors(c).intersection_count(mask) as u64)
            .collect();
        if k < links.len() {
            links.select_nth_unstable(k);
        }
        links[..k].iter().sum()
    }

    fn descend(
        &self,
        remaining: usize,
        upper: usize,
        chosen: &mut Vec<usize>,
        mask: &mut BitSet,
        edges: u64,
        part: &mut Partial,
    ) {
        part.nodes += 1;
        if remaining == 0 {
            if edges < part.value {
                part.value = edges;
                part.witness = chosen.clone();
                if self.prune {
                    self.incumbent.fetch_min(edges, Ordering::Relaxed);
                }
            }
            return;
        }
        if self.prune {
            let floor = edges + self.completion_bound(remaining, upper, mask);
            // Ties with another partition's incumbent must survive so the
            // colex-first witness is still found here.
            if floor >= part.value || floor > self.incumbent.load(Ordering::Relaxed) {
                return;
            }
        }
        for next in remaining - 1..upper {
            let added = self.graph.neighbors(next).intersection_count(mask) as u64;
            mask.insert(next);
            chosen.push(next);
            self.descend(remaining - 1, next, chosen, mask, edges + added, part);
            chosen.pop();
            mask.remove(next);
        }
    }
}

/// Heuristic upper bound on `r(l)` by swap-based local search with random
/// restarts.
///
/// A move swaps one chosen vertex for an unchosen one and is accepted when
/// the edge count does not increase. Restarts run in parallel with seeds
/// derived from `cfg.seed`; the result depends only on `cfg`.
pub fn r_of_l_local_search(
    p: &GraphParams,
    l: u64,
    cfg: &LocalSearchConfig,
    limits: &SearchLimits,
) -> Result<ExtremalResult> {
    let start = Instant::now();
    let graph = whole_graph(p, l, limits)?;
    let size = l as usize;
    let (value, witness, nodes) = if size == 0 || size == graph.len() {
        let all: Vec<usize> = (0..size).collect();
        let value = graph.edges_within(&all.iter().copied().collect::<BitSet>());
        (value, all, 0)
    } else {
        let runs: Vec<(u64, Vec<usize>, u64)> = (0..cfg.restarts.max(1))
            .into_par_iter()
            .map(|k| {
                let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(cfg.seed, k as u64));
                climb(&graph, size, cfg, &mut rng)
            })
            .collect();
        let nodes = runs.iter().map(|r| r.2).sum();
        let (value, witness, _) = runs
            .into_iter()
            .min_by_key(|r| r.0)
            .expect("at least one restart");
        (value, witness, nodes)
    };
    Ok(ExtremalResult {
        l,
        value,
        witness: graph.subset(witness),
        certified: false,
        method: ExtremalMethod::LocalSearch,
        nodes_explored: nodes,
        wall_time: start.elapsed(),
    })
}

fn restart_seed(master: u64, k: u64) -> u64 {
    // splitmix64 step
    let mut z = master.wrapping_add((k + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform choice among the indices minimizing `key`.
fn argmin_random<R: Rng>(items: &[usize], key: impl Fn(usize) -> i64, rng: &mut R) -> usize {
    let mut best = i64::MAX;
    let mut pick = 0;
    let mut ties = 0u32;
    for (pos, &v) in items.iter().enumerate() {
        let k = key(v);
        if k < best {
            best = k;
            pick = pos;
            ties = 1;
        } else if k == best {
            ties += 1;
            if rng.gen_range(0..ties) == 0 {
                pick = pos;
            }
        }
    }
    pick
}

fn climb<R: Rng>(
    graph: &InducedGraph,
    size: usize,
    cfg: &LocalSearchConfig,
    rng: &mut R,
) -> (u64, Vec<usize>, u64) {
    let total = graph.len();
    let mut inside: Vec<usize> = index::sample(rng, total, size).into_vec();
    let mut member = vec![false; total];
    for &v in &inside {
        member[v] = true;
    }
    let mut outside: Vec<usize> = (0..total).filter(|&v| !member[v]).collect();
    // links[v]: neighbours of v among the chosen vertices.
    let mut links = vec![0i64; total];
    for &u in &inside {
        for v in graph.neighbors(u).iter() {
            links[v] += 1;
        }
    }
    let mut edges: i64 = inside.iter().map(|&u| links[u]).sum::<i64>() / 2;
    let mut best = (edges, inside.clone());
    let mut stall = 0u64;
    let mut iterations = 0u64;

    while iterations < cfg.iterations && best.0 > 0 && stall < cfg.patience {
        iterations += 1;
        let out_pos = if rng.gen_bool(0.5) {
            rng.gen_range(0..inside.len())
        } else {
            argmin_random(&inside, |v| -links[v], rng)
        };
        let u = inside[out_pos];
        let in_pos = if rng.gen_bool(0.5) {
            rng.gen_range(0..outside.len())
        } else {
            argmin_random(&outside, |v| links[v] - graph.adjacent(u, v) as i64, rng)
        };
        let v = outside[in_pos];
        let delta = links[v] - graph.adjacent(u, v) as i64 - links[u];
        if delta <= 0 {
            for x in graph.neighbors(u).iter() {
                links[x] -= 1;
            }
            for x in graph.neighbors(v).iter() {
                links[x] += 1;
            }
            inside[out_pos] = v;
            outside[in_pos] = u;
            edges += delta;
        }
        if edges < best.0 {
            best = (edges, inside.clone());
            stall = 0;
        } else {
            stall += 1;
        }
    }
    let mut witness = best.1;
    witness.sort_unstable();
    (best.0 as u64, witness, iterations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::induced_edge_count;
    use crate::independence::alpha_exact;

    fn params(n: u32, r: u32, s: u32) -> GraphParams {
        GraphParams::new(n, r, s).unwrap()
    }

    /// Independent oracle: every l-subset via bit masks, minimum edge count
    /// with the colex-first witness (smallest mask).
    fn brute_rl(p: &GraphParams, l: u32) -> (u64, VertexSet) {
        let all = VertexSet::all(*p);
        let m = all.len() as u32;
        let mut best: Option<(u64, u64)> = None;
        for mask in 0u64..(1u64 << m) {
            if mask.count_ones() != l {
                continue;
            }
            let members: Vec<_> = (0..m)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| all.as_slice()[i as usize])
                .collect();
            let e = induced_edge_count(&VertexSet::new(*p, members).unwrap()).0;
            if best.is_none_or(|(b, _)| e < b) {
                best = Some((e, mask));
            }
        }
        let (value, mask) = best.unwrap();
        let members = (0..m)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| all.as_slice()[i as usize])
            .collect();
        (value, VertexSet::new(*p, members).unwrap())
    }

    #[test]
    fn exact_methods_match_bitmask_oracle() {
        let limits = SearchLimits::default();
        for p in [params(5, 2, 0), params(5, 3, 1), params(4, 2, 1), params(6, 2, 1)] {
            let n_vertices = p.vertex_count() as u32;
            for l in 0..=n_vertices {
                let (value, witness) = brute_rl(&p, l);
                for method in [ExtremalMethod::Exhaustive, ExtremalMethod::BranchBound] {
                    let res = r_of_l_exact(&p, l as u64, method, &limits).unwrap();
                    assert_eq!(res.value, value, "{p} l={l} {method:?}");
                    assert_eq!(res.witness, witness, "{p} l={l} {method:?}");
                    assert!(res.certified);
                    assert_eq!(induced_edge_count(&res.witness).0, res.value);
                }
            }
        }
    }

    #[test]
    fn petersen_five_vertices_have_two_edges() {
        // Every maximum independent 4-set of the Petersen graph sends exactly
        // two edges to each outside vertex, and a 5-set with a single edge
        // would contain an independent 4-set.
        let p = params(5, 2, 0);
        let res = r_of_l_exact(&p, 5, ExtremalMethod::Exhaustive, &SearchLimits::default())
            .unwrap();
        assert_eq!(res.value, 2);
        assert!(res.nodes_explored >= 252);
    }

    #[test]
    fn below_alpha_is_zero_and_edgeless_graphs_are_zero() {
        let limits = SearchLimits::default();
        let p = params(6, 3, 1);
        let alpha = alpha_exact(&p, 40).unwrap().cardinality as u64;
        for l in 0..=alpha {
            let res = r_of_l_exact(&p, l, ExtremalMethod::BranchBound, &limits).unwrap();
            assert_eq!(res.value, 0);
        }
        let res = r_of_l_exact(&p, alpha + 1, ExtremalMethod::BranchBound, &limits).unwrap();
        assert!(res.value > 0);
        let q = params(4, 3, 1);
        for l in 0..=4 {
            let res = r_of_l_exact(&q, l, ExtremalMethod::Exhaustive, &limits).unwrap();
            assert_eq!(res.value, 0);
        }
    }

    #[test]
    fn limits_are_enforced() {
        let limits = SearchLimits::default();
        let p = params(9, 3, 1);
        let err = r_of_l_exact(&p, 40, ExtremalMethod::Exhaustive, &limits).unwrap_err();
        assert!(matches!(err, Error::Sizing { .. }), "{err}");
        assert!(err.to_string().contains("100000000"));
        let err = r_of_l_exact(&p, 5, ExtremalMethod::BranchBound, &limits).unwrap_err();
        assert!(matches!(err, Error::Sizing { .. }));
        assert!(r_of_l_exact(&params(5, 3, 1), 11, ExtremalMethod::Exhaustive, &limits).is_err());
        assert!(
            r_of_l_exact(&params(5, 3, 1), 3, ExtremalMethod::LocalSearch, &limits).is_err()
        );
    }

    #[test]
    fn local_search_is_deterministic_and_sound() {
        let limits = SearchLimits::default();
        let p = params(7, 3, 1);
        let cfg = LocalSearchConfig {
            seed: 11,
            ..LocalSearchConfig::default()
        };
        let a = r_of_l_local_search(&p, 12, &cfg, &limits).unwrap();
        let b = r_of_l_local_search(&p, 12, &cfg, &limits).unwrap();
        assert_eq!((a.value, &a.witness), (b.value, &b.witness));
        assert!(!a.certified);
        assert_eq!(a.witness.len(), 12);
        assert_eq!(induced_edge_count(&a.witness).0, a.value);
        let exact = r_of_l_exact(&p, 12, ExtremalMethod::BranchBound, &limits).unwrap();
        assert!(a.value >= exact.value);
    }

    #[test]
    fn local_search_matches_exact_on_small_graphs() {
        let limits = SearchLimits::default();
        for p in [params(5, 2, 0), params(5, 3, 1), params(6, 3, 1)] {
            for l in 0..=p.vertex_count() as u64 {
                let exact = r_of_l_exact(&p, l, ExtremalMethod::BranchBound, &limits).unwrap();
                let heur =
                    r_of_l_local_search(&p, l, &LocalSearchConfig::default(), &limits).unwrap();
                assert_eq!(heur.value, exact.value, "{p} l={l}");
            }
        }
    }
}
