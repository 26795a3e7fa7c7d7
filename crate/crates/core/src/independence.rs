//! Maximum and maximal independent sets of induced subgraphs, and
//! independence-number estimates.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::combinatorics::GraphParams;
use crate::error::{Error, Result};
use crate::graph::{InducedGraph, VertexSet};
use crate::{lift, Scalar};

/// Default vertex cap for the exact solver.
pub const DEFAULT_EXACT_CAP: usize = 40;

/// An independent set together with how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceResult {
    pub cardinality: usize,
    /// `true` when the witness is proven maximum, `false` when only maximal.
    pub exact: bool,
    pub witness: VertexSet,
}

impl IndependenceResult {
    fn new(witness: VertexSet, exact: bool) -> Self {
        IndependenceResult {
            cardinality: witness.len(),
            exact,
            witness,
        }
    }
}

/// Branch and bound for maximum independent sets on an induced subgraph.
///
/// Upper bounds come from a greedy clique cover of the candidate set: an
/// independent set uses at most one vertex of each clique. Candidates are
/// branched on in reverse cover order, so the vertices with the largest
/// cover index go first.
pub(crate) struct MisSolver<'g> {
    graph: &'g InducedGraph,
    non_adjacent: Vec<BitSet>,
}

impl<'g> MisSolver<'g> {
    pub(crate) fn new(graph: &'g InducedGraph) -> Self {
        let non_adjacent = (0..graph.len())
            .map(|i| {
                let mut row = graph.neighbors(i).complement();
                row.remove(i);
                row
            })
            .collect();
        MisSolver {
            graph,
            non_adjacent,
        }
    }

    fn clique_cover(&self, cands: &BitSet) -> (Vec<usize>, Vec<usize>) {
        let mut uncovered = cands.clone();
        let mut order = Vec::with_capacity(cands.count());
        let mut bounds = Vec::with_capacity(order.capacity());
        let mut cliques = 0;
        while !uncovered.is_empty() {
            cliques += 1;
            let mut open = uncovered.clone();
            while let Some(v) = open.first() {
                uncovered.remove(v);
                open.remove(v);
                open.intersect_with(self.graph.neighbors(v));
                order.push(v);
                bounds.push(cliques);
            }
        }
        (order, bounds)
    }

    /// Returns true once an independent set of size `goal` is found.
    fn expand(&self, mut cands: BitSet, size: usize, best: &mut usize, goal: usize) -> bool {
        let (order, bounds) = self.clique_cover(&cands);
        for idx in (0..order.len()).rev() {
            if size + bounds[idx] <= *best {
                return false;
            }
            let v = order[idx];
            let next = cands.intersection(&self.non_adjacent[v]);
            if next.is_empty() {
                if size + 1 > *best {
                    *best = size + 1;
                    if *best >= goal {
                        return true;
                    }
                }
            } else if self.expand(next, size + 1, best, goal) {
                return true;
            }
            cands.remove(v);
        }
        false
    }

    /// Size of a maximum independent set within `cands`, given a known
    /// lower bound.
    pub(crate) fn max_size(&self, cands: &BitSet, lower: usize) -> usize {
        let mut best = lower;
        self.expand(cands.clone(), 0, &mut best, usize::MAX);
        best
    }

    /// Whether `cands` contains an independent set of size `target`.
    pub(crate) fn exists(&self, cands: &BitSet, target: usize) -> bool {
        if target == 0 {
            return true;
        }
        if cands.count() < target {
            return false;
        }
        let mut best = target - 1;
        self.expand(cands.clone(), 0, &mut best, target)
    }

    /// The maximum independent set within `cands` whose sorted index
    /// sequence is lexicographically least.
    pub(crate) fn lex_least(&self, cands: &BitSet) -> Vec<usize> {
        let lower = greedy_in(self.graph, cands, &order_by_degree(self.graph, cands, 0)).len();
        let alpha = self.max_size(cands, lower);
        let mut chosen = Vec::with_capacity(alpha);
        let mut open = cands.clone();
        while chosen.len() < alpha {
            let v = open.first().expect("an optimum extends the current prefix");
            let mut after = open.intersection(&self.non_adjacent[v]);
            // Only vertices after v may follow it in a sorted sequence.
            after.difference_with(&BitSet::prefix(after.capacity(), v + 1));
            if self.exists(&after, alpha - chosen.len() - 1) {
                chosen.push(v);
                open = after;
            } else {
                open.remove(v);
            }
        }
        chosen
    }
}

pub(crate) fn order_by_degree(graph: &InducedGraph, cands: &BitSet, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = cands.iter().collect();
    if seed != 0 {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    order.sort_by_key(|&v| graph.neighbors(v).intersection_count(cands));
    order
}

/// First-fit independent set following `order`.
pub(crate) fn greedy_in(graph: &InducedGraph, cands: &BitSet, order: &[usize]) -> Vec<usize> {
    let mut blocked = cands.complement();
    let mut chosen = Vec::new();
    for &v in order {
        if !blocked.contains(v) {
            chosen.push(v);
            blocked.insert(v);
            blocked.union_with(graph.neighbors(v));
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Exact maximum independent set of the subgraph induced by `w`.
///
/// Among all maximum sets the one with the lexicographically least sorted
/// rank sequence is returned. Inputs above `cap` vertices are refused.
pub fn max_independent_set(w: &VertexSet, cap: usize) -> Result<IndependenceResult> {
    if w.len() > cap {
        return Err(
            Error::sizing("vertex count for the exact independent-set solver", w.len(), cap)
                .with_hint("raise the cap or use greedy mode"),
        );
    }
    let graph = InducedGraph::new(w);
    Ok(max_independent_in(&graph, &graph.all_indices()))
}

pub(crate) fn max_independent_in(graph: &InducedGraph, cands: &BitSet) -> IndependenceResult {
    let chosen = MisSolver::new(graph).lex_least(cands);
    IndependenceResult::new(graph.subset(chosen), true)
}

/// Greedy maximal independent set of the subgraph induced by `w`.
///
/// Vertices are scanned by increasing degree; `seed` permutes vertices of
/// equal degree (seed 0 keeps rank order).
pub fn greedy_maximal_independent_set(w: &VertexSet, seed: u64) -> IndependenceResult {
    let graph = InducedGraph::new(w);
    greedy_independent_in(&graph, &graph.all_indices(), seed)
}

pub(crate) fn greedy_independent_in(
    graph: &InducedGraph,
    cands: &BitSet,
    seed: u64,
) -> IndependenceResult {
    let chosen = greedy_in(graph, cands, &order_by_degree(graph, cands, seed));
    IndependenceResult::new(graph.subset(chosen), false)
}

/// The literature range for `α(G(n, 3, 1))`, `{n − 2, n − 1, n}`.
pub fn known_alpha_range(p: &GraphParams) -> Option<RangeInclusive<u64>> {
    (p.r() == 3 && p.s() == 1).then(|| {
        let n = p.n() as u64;
        n - 2..=n
    })
}

/// Exact independence number of the whole graph `G(n, r, s)`.
pub fn alpha_exact(p: &GraphParams, cap: usize) -> Result<IndependenceResult> {
    let count = p.vertex_count();
    if count > cap as u128 {
        return Err(
            Error::sizing(format!("vertex count of {p}"), count, cap)
                .with_hint("raise the exact-solver cap"),
        );
    }
    let result = max_independent_set(&VertexSet::all(*p), cap)?;
    if let Some(range) = known_alpha_range(p) {
        if !range.contains(&(result.cardinality as u64)) {
            return Err(Error::Internal(format!(
                "alpha({p}) = {} outside {range:?}",
                result.cardinality
            )));
        }
    }
    Ok(result)
}

/// Leading term `n^s (2r−2s−1)! / (r! (r−s−1)!)` of the independence number
/// asymptotics.
#[derive(Clone, Debug, PartialEq)]
pub struct FranklEstimate<T> {
    pub value: T,
    /// False when `(r, s)` lies outside the regime `r = 2s + 1`, `r − s` a
    /// prime power, where the asymptotics are known to hold.
    pub regime_satisfied: bool,
}

pub fn frankl_asymptotic<T: Scalar>(p: &GraphParams) -> Result<FranklEstimate<T>> {
    let (n, r, s) = (p.n() as u128, p.r() as u128, p.s() as u128);
    // (2r−2s−1)! / (r−s−1)! is the product of r−s, ..., 2r−2s−1; interleave
    // with the division by r! to keep floats in range.
    let numer: Vec<u128> = (r - s..=2 * r - 2 * s - 1).collect();
    let mut value = T::one();
    for i in 0..r as usize {
        if let Some(&a) = numer.get(i) {
            value = value * lift::<T>(a)?;
        }
        value = value / lift::<T>(i as u128 + 1)?;
    }
    let base = lift::<T>(n)?;
    for _ in 0..s {
        value = value * base.clone();
    }
    Ok(FranklEstimate {
        value,
        regime_satisfied: p.prime_power_regime(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::adjacent;
    use crate::Rational;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn params(n: u32, r: u32, s: u32) -> GraphParams {
        GraphParams::new(n, r, s).unwrap()
    }

    fn is_independent(w: &VertexSet) -> bool {
        let p = *w.params();
        w.iter()
            .all(|u| w.iter().all(|v| !adjacent(u, v, &p).unwrap()))
    }

    /// Exhaustive oracle: enumerates every independent subset in
    /// lexicographic order of sorted local indices and keeps the first one
    /// of maximum size.
    fn brute_mis(w: &VertexSet) -> (usize, Vec<usize>) {
        fn walk(g: &InducedGraph, from: usize, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
            if cur.len() > best.len() {
                *best = cur.clone();
            }
            for v in from..g.len() {
                if cur.iter().all(|&u| !g.adjacent(u, v)) {
                    cur.push(v);
                    walk(g, v + 1, cur, best);
                    cur.pop();
                }
            }
        }
        let g = InducedGraph::new(w);
        let mut best = Vec::new();
        walk(&g, 0, &mut Vec::new(), &mut best);
        (best.len(), best)
    }

    #[test]
    fn independent_input_returns_itself() {
        let p = params(4, 3, 1);
        let w = VertexSet::all(p);
        let res = max_independent_set(&w, 40).unwrap();
        assert_eq!(res.cardinality, 4);
        assert!(res.exact);
    }

    #[test]
    fn small_graph_alphas_match_exhaustive() {
        for (n, r, s, expect) in [(5, 2, 0, 4), (5, 3, 1, 4)] {
            let p = params(n, r, s);
            let w = VertexSet::all(p);
            let (oracle, _) = brute_mis(&w);
            assert_eq!(oracle, expect);
            let res = alpha_exact(&p, 40).unwrap();
            assert_eq!(res.cardinality, expect);
            assert!(is_independent(&res.witness));
        }
    }

    #[test]
    fn alpha_g631_in_known_range() {
        let p = params(6, 3, 1);
        let res = alpha_exact(&p, 40).unwrap();
        assert!((4..=6).contains(&res.cardinality));
        let (oracle, _) = brute_mis(&VertexSet::all(p));
        assert_eq!(res.cardinality, oracle);
    }

    #[test]
    fn degree_zero_graph_is_fully_independent() {
        let p = params(4, 3, 0);
        assert_eq!(alpha_exact(&p, 40).unwrap().cardinality, 4);
        let p = params(7, 4, 0);
        assert_eq!(alpha_exact(&p, 40).unwrap().cardinality, 35);
    }

    #[test]
    fn cap_is_enforced() {
        let p = params(7, 3, 1);
        let err = alpha_exact(&p, 20).unwrap_err();
        assert!(matches!(err, Error::Sizing { .. }));
        assert!(err.to_string().contains("20"));
        let w = VertexSet::random(p, 30, 1).unwrap();
        assert!(max_independent_set(&w, 29).is_err());
    }

    #[test]
    fn greedy_examples() {
        let p = params(4, 3, 1);
        let w = VertexSet::all(p);
        assert_eq!(greedy_maximal_independent_set(&w, 0).cardinality, 4);

        let p = params(5, 3, 1);
        let pair = VertexSet::from_elements(p, &[vec![1, 2, 3], vec![1, 4, 5]]).unwrap();
        let res = greedy_maximal_independent_set(&pair, 0);
        assert_eq!(res.cardinality, 1);
        assert!(!res.exact);
    }

    #[test]
    fn frankl_examples() {
        let big = |x: i64| Rational::from_integer(BigInt::from(x));
        for n in 3..20 {
            let p = params(n, 3, 1);
            let est: FranklEstimate<Rational> = frankl_asymptotic(&p).unwrap();
            assert_eq!(est.value, big(n as i64));
            assert!(est.regime_satisfied);
        }
        let p = params(9, 5, 2);
        let est: FranklEstimate<Rational> = frankl_asymptotic(&p).unwrap();
        assert_eq!(est.value, Rational::new(BigInt::from(81), BigInt::from(2)));
        let est: FranklEstimate<f64> = frankl_asymptotic(&params(5, 3, 1)).unwrap();
        assert_eq!(est.value, 5.0);
        let off: FranklEstimate<f64> = frankl_asymptotic(&params(6, 2, 0)).unwrap();
        assert!(!off.regime_satisfied);
        // n^0 * 3!/(2!*1!) = 3
        assert_eq!(off.value, 3.0);
    }

    #[test]
    fn frankl_stays_finite_at_full_width() {
        let est: FranklEstimate<f64> = frankl_asymptotic(&params(128, 127, 63)).unwrap();
        assert!(est.value.is_finite());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn exact_matches_exhaustive_and_beats_greedy(
            seed in any::<u64>(),
            size in 0usize..=20,
            which in 0usize..3,
        ) {
            let p = [params(7, 3, 1), params(6, 2, 0), params(9, 5, 2)][which];
            let size = size.min(p.vertex_count() as usize);
            let w = VertexSet::random(p, size, seed).unwrap();
            let exact = max_independent_set(&w, 40).unwrap();
            let (oracle, oracle_witness) = brute_mis(&w);
            prop_assert_eq!(exact.cardinality, oracle);
            let g = InducedGraph::new(&w);
            prop_assert_eq!(exact.witness.clone(), g.subset(oracle_witness));
            prop_assert!(is_independent(&exact.witness));

            let greedy = greedy_maximal_independent_set(&w, seed);
            prop_assert!(is_independent(&greedy.witness));
            prop_assert!(greedy.cardinality <= exact.cardinality);
            // Maximality: every excluded vertex has a neighbour in the set.
            for v in w.iter().filter(|v| !greedy.witness.contains(v)) {
                prop_assert!(greedy.witness.iter().any(|u| adjacent(u, v, &p).unwrap()));
            }
        }
    }
}
