//! Census of a vertex set `W` against an independent set `Γ ⊆ W`.
//!
//! For `w ∈ W∖Γ`, `n(Γ, w)` counts the neighbours of `w` inside `Γ`. `U1`
//! and `U2` collect the vertices with exactly one and exactly two such
//! neighbours. A checkmark is a triple `(u1, u2, w)` with `u1, u2 ∈ Γ` and
//! `w ∈ U2` adjacent to both.
//!
//! When `Γ` is a maximum independent set of `W`, two exchange properties
//! hold: no anchor `u` has two non-adjacent vertices in `U1,u`, and no side
//! pair has three pairwise non-adjacent checkmark centers. Otherwise
//! swapping them into `Γ` would give a larger independent set.
//! [`exchange_audit`] checks both and reports the swap when either fails.

use num_bigint::BigInt;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::combinatorics::Vertex;
use crate::error::{Error, Result};
use crate::graph::{InducedGraph, VertexSet};
use crate::independence::IndependenceResult;
use crate::serde_util;
use crate::Rational;

/// `n(Γ, w)`: neighbours of `w` inside `gamma`.
pub fn neighbor_count_in(gamma: &VertexSet, w: &Vertex) -> Result<usize> {
    let p = gamma.params();
    p.check(w)?;
    if gamma.contains(w) {
        return Err(Error::domain(format!("{w} belongs to the independent set")));
    }
    Ok(gamma.iter().filter(|u| u.meet(w) == p.s()).count())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CheckmarkCase {
    /// The center meets the union of the side supports in more than `s`
    /// elements.
    Case1,
    /// The center meets the union of the side supports in exactly `s`
    /// elements.
    Case2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Checkmark {
    pub side1: Vertex,
    pub side2: Vertex,
    pub center: Vertex,
    pub case_tag: CheckmarkCase,
    /// `|(supp(side1) ∪ supp(side2)) ∩ supp(center)|`.
    pub overlap: u32,
}

impl Checkmark {
    fn new(side1: Vertex, side2: Vertex, center: Vertex, s: u32) -> Self {
        let overlap = ((side1.bits() | side2.bits()) & center.bits()).count_ones();
        let case_tag = if overlap == s {
            CheckmarkCase::Case2
        } else {
            CheckmarkCase::Case1
        };
        Checkmark {
            side1,
            side2,
            center,
            case_tag,
            overlap,
        }
    }
}

/// Whether the census invariants were computed against a proven maximum
/// independent set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusMode {
    Exact,
    /// The independent set is only maximal; numbers are informational.
    Diagnostic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnchorCount {
    pub anchor: Vertex,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub mode: CensusMode,
    pub w_size: usize,
    pub gamma_size: usize,
    pub u1_size: usize,
    pub u2_size: usize,
    /// Vertices of `W∖Γ` with three or more neighbours in `Γ`.
    pub heavy_size: usize,
    /// Vertices of `W∖Γ` without neighbours in `Γ`; zero when `Γ` is maximal.
    pub unattached_size: usize,
    /// `|U1,u|` for each `u ∈ Γ`, in rank order of `u`.
    pub per_anchor: Vec<AnchorCount>,
    pub checkmarks_case1: usize,
    pub checkmarks_case2: usize,
    /// `|U1 ∪ U2| / n^(2s)`.
    #[serde(with = "serde_util::rational")]
    pub envelope_ratio: Rational,
    pub u1: Vec<Vertex>,
    pub u2: Vec<Vertex>,
}

impl CensusReport {
    pub fn envelope_ratio_f64(&self) -> f64 {
        serde_util::rational_to_f64(&self.envelope_ratio)
    }
}

/// Neighbour structure of every `w ∈ W∖Γ` with respect to `Γ`.
struct Scan {
    graph: InducedGraph,
    gamma: Vec<usize>,
    /// For each non-Γ local index: `n(Γ, w)` and its first two Γ-neighbours.
    outside: Vec<(usize, usize, [usize; 2])>,
}

impl Scan {
    fn new(w: &VertexSet, gamma: &IndependenceResult) -> Result<Self> {
        if gamma.witness.params() != w.params() {
            return Err(Error::domain(format!(
                "independent set over {} used with vertex set over {}",
                gamma.witness.params(),
                w.params()
            )));
        }
        let graph = InducedGraph::new(w);
        let mut in_gamma = BitSet::new(graph.len());
        let mut members = Vec::with_capacity(gamma.witness.len());
        for v in &gamma.witness {
            let i = graph
                .index_of(v)
                .ok_or_else(|| Error::domain(format!("independent-set vertex {v} not in W")))?;
            in_gamma.insert(i);
            members.push(i);
        }
        members.sort_unstable();
        let outside = (0..graph.len())
            .filter(|i| !in_gamma.contains(*i))
            .map(|i| {
                let hits = graph.neighbors(i).intersection(&in_gamma);
                let mut first = [usize::MAX; 2];
                for (slot, u) in first.iter_mut().zip(hits.iter()) {
                    *slot = u;
                }
                (i, hits.count(), first)
            })
            .collect();
        Ok(Scan {
            graph,
            gamma: members,
            outside,
        })
    }

    fn with_count(&self, k: usize) -> impl Iterator<Item = &(usize, usize, [usize; 2])> {
        self.outside.iter().filter(move |(_, c, _)| *c == k)
    }

    fn checkmarks(&self) -> Vec<Checkmark> {
        let s = self.graph.params().s();
        self.with_count(2)
            .map(|&(w, _, [a, b])| {
                Checkmark::new(
                    self.graph.vertex(a),
                    self.graph.vertex(b),
                    self.graph.vertex(w),
                    s,
                )
            })
            .collect()
    }
}

/// Computes `U1`, `U2`, the per-anchor split of `U1` and the checkmark case
/// counts directly from their definitions.
pub fn census(w: &VertexSet, gamma: &IndependenceResult) -> Result<CensusReport> {
    let scan = Scan::new(w, gamma)?;
    let g = &scan.graph;
    let u1: Vec<Vertex> = scan.with_count(1).map(|e| g.vertex(e.0)).collect();
    let u2: Vec<Vertex> = scan.with_count(2).map(|e| g.vertex(e.0)).collect();
    let per_anchor = scan
        .gamma
        .iter()
        .map(|&u| AnchorCount {
            anchor: g.vertex(u),
            count: scan.with_count(1).filter(|e| e.2[0] == u).count(),
        })
        .collect();
    let checkmarks = scan.checkmarks();
    let case2 = checkmarks
        .iter()
        .filter(|c| c.case_tag == CheckmarkCase::Case2)
        .count();

    let p = g.params();
    let scale = BigInt::from(p.n()).pow(2 * p.s());
    let envelope_ratio = Rational::new(BigInt::from(u1.len() + u2.len()), scale);

    Ok(CensusReport {
        mode: if gamma.exact {
            CensusMode::Exact
        } else {
            CensusMode::Diagnostic
        },
        w_size: g.len(),
        gamma_size: scan.gamma.len(),
        u1_size: u1.len(),
        u2_size: u2.len(),
        heavy_size: scan.outside.iter().filter(|e| e.1 >= 3).count(),
        unattached_size: scan.with_count(0).count(),
        per_anchor,
        checkmarks_case1: checkmarks.len() - case2,
        checkmarks_case2: case2,
        envelope_ratio,
        u1,
        u2,
    })
}

/// Every checkmark, one per `U2` vertex, sides ordered by rank.
pub fn enumerate_checkmarks(w: &VertexSet, gamma: &IndependenceResult) -> Result<Vec<Checkmark>> {
    Ok(Scan::new(w, gamma)?.checkmarks())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// Two non-adjacent vertices share the single Γ-neighbour `anchor`.
    AnchorPair,
    /// Three pairwise non-adjacent checkmark centers share a side pair.
    CenterTriple,
}

/// A concrete exchange that enlarges the independent set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub remove: Vec<Vertex>,
    pub add: Vec<Vertex>,
}

impl Violation {
    /// `(Γ ∖ remove) ∪ add`.
    pub fn apply(&self, gamma: &VertexSet) -> Result<VertexSet> {
        let mut members: Vec<Vertex> = gamma
            .iter()
            .filter(|v| !self.remove.contains(v))
            .copied()
            .collect();
        members.extend(self.add.iter().copied());
        members.sort();
        VertexSet::new(*gamma.params(), members)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub passed: bool,
    pub anchors_checked: usize,
    pub side_pairs_checked: usize,
    pub violations: Vec<Violation>,
}

/// Verifies both exchange properties for a proven maximum independent set.
///
/// A violation means `gamma` was not maximum, i.e. the solver that produced
/// it is wrong. At most one violation is reported per anchor or side pair.
pub fn exchange_audit(w: &VertexSet, gamma: &IndependenceResult) -> Result<AuditReport> {
    if !gamma.exact {
        return Err(Error::domain(
            "exchange audit needs a proven maximum independent set, got a greedy one",
        ));
    }
    let scan = Scan::new(w, gamma)?;
    let g = &scan.graph;
    let mut violations = Vec::new();

    for &u in &scan.gamma {
        let single: Vec<usize> = scan
            .with_count(1)
            .filter(|e| e.2[0] == u)
            .map(|e| e.0)
            .collect();
        'pairs: for (i, &a) in single.iter().enumerate() {
            for &b in &single[i + 1..] {
                if !g.adjacent(a, b) {
                    violations.push(Violation {
                        kind: ViolationKind::AnchorPair,
                        remove: vec![g.vertex(u)],
                        add: vec![g.vertex(a), g.vertex(b)],
                    });
                    break 'pairs;
                }
            }
        }
    }

    let mut by_pair: std::collections::BTreeMap<(usize, usize), Vec<usize>> = Default::default();
    for &(w, _, [a, b]) in scan.with_count(2) {
        by_pair.entry((a, b)).or_default().push(w);
    }
    for (&(a, b), centers) in &by_pair {
        if let Some([x, y, z]) = independent_triple(g, centers) {
            violations.push(Violation {
                kind: ViolationKind::CenterTriple,
                remove: vec![g.vertex(a), g.vertex(b)],
                add: vec![g.vertex(x), g.vertex(y), g.vertex(z)],
            });
        }
    }

    Ok(AuditReport {
        passed: violations.is_empty(),
        anchors_checked: scan.gamma.len(),
        side_pairs_checked: by_pair.len(),
        violations,
    })
}

fn independent_triple(g: &InducedGraph, items: &[usize]) -> Option<[usize; 3]> {
    for (i, &x) in items.iter().enumerate() {
        for (j, &y) in items.iter().enumerate().skip(i + 1) {
            if g.adjacent(x, y) {
                continue;
            }
            for &z in &items[j + 1..] {
                if !g.adjacent(x, z) && !g.adjacent(y, z) {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::GraphParams;
    use crate::graph::adjacent;
    use crate::independence::{greedy_maximal_independent_set, max_independent_set};

    fn params(n: u32, r: u32, s: u32) -> GraphParams {
        GraphParams::new(n, r, s).unwrap()
    }

    fn claim(witness: VertexSet, exact: bool) -> IndependenceResult {
        IndependenceResult {
            cardinality: witness.len(),
            exact,
            witness,
        }
    }

    #[test]
    fn neighbor_count_examples() {
        let p = params(5, 3, 1);
        let w = p.vertex(&[1, 2, 3]).unwrap();
        assert_eq!(neighbor_count_in(&VertexSet::empty(p), &w).unwrap(), 0);
        let u = VertexSet::from_elements(p, &[vec![1, 4, 5]]).unwrap();
        assert_eq!(neighbor_count_in(&u, &w).unwrap(), 1);
        let far = VertexSet::from_elements(p, &[vec![1, 2, 4]]).unwrap();
        assert_eq!(neighbor_count_in(&far, &w).unwrap(), 0);
        assert!(neighbor_count_in(&u, &p.vertex(&[1, 4, 5]).unwrap()).is_err());
    }

    #[test]
    fn independent_w_has_empty_census() {
        let p = params(4, 3, 1);
        let w = VertexSet::all(p);
        let gamma = max_independent_set(&w, 40).unwrap();
        let rep = census(&w, &gamma).unwrap();
        assert_eq!((rep.u1_size, rep.u2_size), (0, 0));
        assert_eq!(rep.checkmarks_case1 + rep.checkmarks_case2, 0);
        let audit = exchange_audit(&w, &gamma).unwrap();
        assert!(audit.passed);
    }

    #[test]
    fn single_attached_vertex_lands_in_u1() {
        let p = params(7, 3, 1);
        let w = VertexSet::from_elements(p, &[vec![1, 2, 3], vec![1, 2, 4], vec![1, 5, 6]])
            .unwrap();
        let gamma = claim(
            VertexSet::from_elements(p, &[vec![1, 2, 3], vec![1, 2, 4]]).unwrap(),
            true,
        );
        let rep = census(&w, &gamma).unwrap();
        assert_eq!(rep.u1_size, 0);
        // {1,5,6} meets both {1,2,3} and {1,2,4} in one element.
        assert_eq!(rep.u2_size, 1);

        let gamma = claim(
            VertexSet::from_elements(p, &[vec![1, 2, 3]]).unwrap(),
            true,
        );
        let w = VertexSet::from_elements(p, &[vec![1, 2, 3], vec![1, 5, 6]]).unwrap();
        let rep = census(&w, &gamma).unwrap();
        assert_eq!((rep.u1_size, rep.u2_size), (1, 0));
        assert_eq!(rep.per_anchor[0].count, 1);
        assert_eq!(rep.envelope_ratio, Rational::new(1.into(), 49.into()));
    }

    #[test]
    fn witness_outside_w_is_rejected() {
        let p = params(5, 3, 1);
        let w = VertexSet::from_elements(p, &[vec![1, 2, 3]]).unwrap();
        let gamma = claim(VertexSet::from_elements(p, &[vec![3, 4, 5]]).unwrap(), true);
        assert!(census(&w, &gamma).is_err());
        assert!(enumerate_checkmarks(&w, &gamma).is_err());
    }

    #[test]
    fn audit_refuses_greedy_input() {
        let p = params(7, 3, 1);
        let w = VertexSet::random(p, 15, 4).unwrap();
        let gamma = greedy_maximal_independent_set(&w, 0);
        assert!(exchange_audit(&w, &gamma).is_err());
        assert_eq!(census(&w, &gamma).unwrap().mode, CensusMode::Diagnostic);
    }

    #[test]
    fn shrunk_gamma_fails_audit_with_swap() {
        // {1,2,3} is adjacent to both {1,4,5} and {2,6,7}, which meet each
        // other in no element: Γ = {{1,2,3}} is maximal but not maximum.
        let p = params(7, 3, 1);
        let w = VertexSet::from_elements(p, &[vec![1, 2, 3], vec![1, 4, 5], vec![2, 6, 7]])
            .unwrap();
        let fake = claim(VertexSet::from_elements(p, &[vec![1, 2, 3]]).unwrap(), true);
        let audit = exchange_audit(&w, &fake).unwrap();
        assert!(!audit.passed);
        let v = &audit.violations[0];
        assert_eq!(v.kind, ViolationKind::AnchorPair);
        let swapped = v.apply(&fake.witness).unwrap();
        assert_eq!(swapped.len(), 2);
        assert!(swapped
            .iter()
            .all(|a| swapped.iter().all(|b| !adjacent(a, b, &p).unwrap())));

        let real = max_independent_set(&w, 40).unwrap();
        assert!(exchange_audit(&w, &real).unwrap().passed);
    }

    #[test]
    fn center_triple_is_detected() {
        // Sides {1,2,3},{1,2,4} share two elements. Each center {3,4,x}
        // meets each side in one element and the other centers in two.
        let p = params(12, 3, 1);
        let sides = [vec![1, 2, 3], vec![1, 2, 4]];
        let centers = [vec![3, 4, 5], vec![3, 4, 6], vec![3, 4, 7]];
        let mut lists: Vec<Vec<u32>> = sides.to_vec();
        lists.extend(centers.iter().cloned());
        let w = VertexSet::from_elements(p, &lists).unwrap();
        let fake = claim(VertexSet::from_elements(p, &sides).unwrap(), true);
        let marks = enumerate_checkmarks(&w, &fake).unwrap();
        assert_eq!(marks.len(), 3);
        for m in &marks {
            assert_eq!(m.overlap, 2);
            assert_eq!(m.case_tag, CheckmarkCase::Case1);
        }
        let audit = exchange_audit(&w, &fake).unwrap();
        assert!(!audit.passed);
        let v = audit
            .violations
            .iter()
            .find(|v| v.kind == ViolationKind::CenterTriple)
            .unwrap();
        assert_eq!(v.apply(&fake.witness).unwrap().len(), 3);
    }

    #[test]
    fn census_matches_definition_scan() {
        for seed in 0..20 {
            let p = params(7, 3, 1);
            let w = VertexSet::random(p, 30, seed).unwrap();
            let gamma = max_independent_set(&w, 40).unwrap();
            let rep = census(&w, &gamma).unwrap();
            // Oracle: O(|W|·|Γ|) scan straight from the definition.
            let (mut ones, mut twos) = (0, 0);
            for v in w.iter().filter(|v| !gamma.witness.contains(v)) {
                let c = gamma
                    .witness
                    .iter()
                    .filter(|u| adjacent(u, v, &p).unwrap())
                    .count();
                ones += (c == 1) as usize;
                twos += (c == 2) as usize;
            }
            assert_eq!((rep.u1_size, rep.u2_size), (ones, twos));
            assert_eq!(rep.per_anchor.iter().map(|a| a.count).sum::<usize>(), ones);
            assert_eq!(rep.unattached_size, 0);
            let marks = enumerate_checkmarks(&w, &gamma).unwrap();
            assert_eq!(marks.len(), rep.u2_size);
            for m in &marks {
                assert!(m.side1 < m.side2);
                assert!(!adjacent(&m.side1, &m.side2, &p).unwrap());
                assert!(adjacent(&m.side1, &m.center, &p).unwrap());
                assert!(adjacent(&m.side2, &m.center, &p).unwrap());
                assert!((1..=2).contains(&m.overlap));
                if m.case_tag == CheckmarkCase::Case2 {
                    assert_eq!(m.side1.meet(&m.side2), 2);
                }
            }
            assert!(exchange_audit(&w, &gamma).unwrap().passed);
        }
    }
}
