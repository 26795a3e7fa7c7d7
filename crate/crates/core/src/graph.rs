//! The Johnson graph `G(n, r, s)`: adjacency, neighbourhoods, induced edge
//! counts and closed-form totals.

use std::collections::HashSet;
use std::fmt;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bitset::BitSet;
use crate::combinatorics::{rank, subset_masks, unrank, GraphParams, Vertex};
use crate::error::{Error, Result};

/// Default cap on `C(n, r)` for materializing the full adjacency structure.
pub const DEFAULT_MATERIALIZE_CAP: u128 = 5_000;

/// Above this many members, pairwise edge counting is split across workers.
const PARALLEL_PAIRS_THRESHOLD: usize = 512;

/// Whether `u` and `v` are adjacent in `G(n, r, s)`.
pub fn adjacent(u: &Vertex, v: &Vertex, p: &GraphParams) -> Result<bool> {
    p.check(u)?;
    p.check(v)?;
    Ok(u != v && u.meet(v) == p.s())
}

/// All neighbours of `u`, in rank order.
///
/// Built directly: keep `s` elements of the support and add `r - s` elements
/// of the complement.
pub fn neighbors(u: &Vertex, p: &GraphParams) -> Result<VertexSet> {
    p.check(u)?;
    let inside = u.elements();
    let outside: Vec<u32> = (1..=p.n()).filter(|e| !inside.contains(e)).collect();
    let mut members = Vec::new();
    for keep in subset_masks(p.r(), p.s()) {
        let kept = pick(&inside, keep);
        for add in subset_masks(outside.len() as u32, p.r() - p.s()) {
            let mut elems = kept.clone();
            elems.extend(pick(&outside, add));
            members.push(Vertex::from_elements(p.n(), &elems)?);
        }
    }
    members.sort();
    Ok(VertexSet {
        params: *p,
        members,
    })
}

fn pick(items: &[u32], mask: u128) -> Vec<u32> {
    items
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &e)| e)
        .collect()
}

/// Number of unordered edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct EdgeCount(pub u64);

impl fmt::Display for EdgeCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Closed-form global counts of `G(n, r, s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TotalCounts {
    pub vertices: u128,
    pub degree: u128,
    pub edges: u128,
}

/// `(C(n,r), C(r,s)·C(n−r,r−s), C(n,r)·degree/2)`.
pub fn total_counts(p: &GraphParams) -> Result<TotalCounts> {
    let vertices = p.vertex_count();
    let degree = p.degree()?;
    // One of the two factors is even, so halve it first to stay in range.
    let edges = if vertices.is_multiple_of(2) {
        (vertices / 2).checked_mul(degree)
    } else {
        vertices.checked_mul(degree / 2)
    }
    .ok_or_else(|| Error::Overflow(format!("edge count of {p} exceeds 128 bits")))?;
    Ok(TotalCounts {
        vertices,
        degree,
        edges,
    })
}

/// An ordered collection of distinct vertices of one graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    params: GraphParams,
    members: Vec<Vertex>,
}

impl VertexSet {
    pub fn new(params: GraphParams, members: Vec<Vertex>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(members.len());
        for v in &members {
            params.check(v)?;
            if !seen.insert(*v) {
                return Err(Error::domain(format!("vertex {v} listed twice")));
            }
        }
        Ok(VertexSet { params, members })
    }

    pub fn empty(params: GraphParams) -> Self {
        VertexSet {
            params,
            members: Vec::new(),
        }
    }

    /// Every vertex of the graph in rank order.
    pub fn all(params: GraphParams) -> Self {
        VertexSet {
            params,
            members: params.vertices().collect(),
        }
    }

    /// Builds a set from 1-based element lists.
    pub fn from_elements(params: GraphParams, lists: &[Vec<u32>]) -> Result<Self> {
        let members = lists
            .iter()
            .map(|l| params.vertex(l))
            .collect::<Result<Vec<_>>>()?;
        VertexSet::new(params, members)
    }

    /// Parses the JSON form `[[1,2,3],[1,4,5]]`.
    pub fn from_json(params: GraphParams, text: &str) -> Result<Self> {
        let lists: Vec<Vec<u32>> = serde_json::from_str(text)
            .map_err(|e| Error::domain(format!("malformed vertex-set JSON: {e}")))?;
        VertexSet::from_elements(params, &lists)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("vertex lists always serialize")
    }

    /// `size` distinct vertices drawn uniformly, returned in rank order.
    pub fn random(params: GraphParams, size: usize, seed: u64) -> Result<Self> {
        let total = params.vertex_count();
        if size as u128 > total {
            return Err(Error::domain(format!(
                "cannot draw {size} distinct vertices from {params} with {total} vertices"
            )));
        }
        let total = usize::try_from(total).map_err(|_| {
            Error::sizing("vertex count for random sampling", total, usize::MAX)
        })?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut members = index::sample(&mut rng, total, size)
            .into_iter()
            .map(|k| unrank(k as u128, &params))
            .collect::<Result<Vec<_>>>()?;
        members.sort();
        Ok(VertexSet { params, members })
    }

    pub fn params(&self) -> &GraphParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vertex> {
        self.members.iter()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.members
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.members.contains(v)
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.members
    }

    /// Same members in rank order.
    pub fn sorted(&self) -> VertexSet {
        let mut members = self.members.clone();
        members.sort();
        VertexSet {
            params: self.params,
            members,
        }
    }

    pub fn to_element_lists(&self) -> Vec<Vec<u32>> {
        self.members.iter().map(Vertex::elements).collect()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a Vertex;
    type IntoIter = std::slice::Iter<'a, Vertex>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.serialize(serializer)
    }
}

/// `r(W)`: unordered edges with both ends in `w`.
pub fn induced_edge_count(w: &VertexSet) -> EdgeCount {
    let s = w.params.s();
    let m = &w.members;
    let row = |i: usize| -> u64 {
        let u = &m[i];
        m[i + 1..].iter().filter(|v| u.meet(v) == s).count() as u64
    };
    let total = if m.len() >= PARALLEL_PAIRS_THRESHOLD {
        (0..m.len()).into_par_iter().map(row).sum()
    } else {
        (0..m.len()).map(row).sum()
    };
    EdgeCount(total)
}

/// Adjacency structure of a subgraph induced by a vertex set.
///
/// Local indices follow rank order of the vertices, so iterating indices
/// ascending visits vertices in colex order.
#[derive(Clone, Debug)]
pub struct InducedGraph {
    params: GraphParams,
    vertices: Vec<Vertex>,
    adjacency: Vec<BitSet>,
}

impl InducedGraph {
    pub fn new(w: &VertexSet) -> Self {
        let mut vertices = w.members.clone();
        vertices.sort();
        let m = vertices.len();
        let s = w.params.s();
        let mut adjacency = vec![BitSet::new(m); m];
        for i in 0..m {
            for j in i + 1..m {
                if vertices[i].meet(&vertices[j]) == s {
                    adjacency[i].insert(j);
                    adjacency[j].insert(i);
                }
            }
        }
        InducedGraph {
            params: w.params,
            vertices,
            adjacency,
        }
    }

    pub fn params(&self) -> &GraphParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Vertex {
        self.vertices[i]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    #[inline]
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &BitSet {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].count()
    }

    /// Edges with both ends in `set`.
    pub fn edges_within(&self, set: &BitSet) -> u64 {
        let twice: usize = set
            .iter()
            .map(|i| self.adjacency[i].intersection_count(set))
            .sum();
        (twice / 2) as u64
    }

    /// Converts local indices back into a vertex set.
    pub fn subset(&self, indices: impl IntoIterator<Item = usize>) -> VertexSet {
        let mut members: Vec<Vertex> = indices.into_iter().map(|i| self.vertices[i]).collect();
        members.sort();
        VertexSet {
            params: self.params,
            members,
        }
    }

    pub fn all_indices(&self) -> BitSet {
        BitSet::full(self.len())
    }
}

/// The full graph with bitset adjacency rows, indexed by rank.
#[derive(Clone, Debug)]
pub struct JohnsonGraph {
    inner: InducedGraph,
}

impl JohnsonGraph {
    /// Materializes all `C(n, r)` vertices, refusing when that exceeds `cap`.
    pub fn materialize(params: GraphParams, cap: u128) -> Result<Self> {
        let count = params.vertex_count();
        if count > cap {
            return Err(Error::sizing(format!("vertex count of {params}"), count, cap));
        }
        Ok(JohnsonGraph {
            inner: InducedGraph::new(&VertexSet::all(params)),
        })
    }

    pub fn params(&self) -> &GraphParams {
        self.inner.params()
    }

    pub fn as_induced(&self) -> &InducedGraph {
        &self.inner
    }

    pub fn vertex_count(&self) -> usize {
        self.inner.len()
    }

    pub fn degree_of(&self, v: &Vertex) -> usize {
        self.inner.degree(rank(v) as usize)
    }

    pub fn edge_count(&self) -> u64 {
        self.inner.edges_within(&self.inner.all_indices())
    }

    /// Fast-path `r(W)` through the rank-indexed adjacency rows.
    pub fn induced_edge_count(&self, w: &VertexSet) -> Result<EdgeCount> {
        if w.params != *self.params() {
            return Err(Error::domain(format!(
                "vertex set over {} used with {}",
                w.params,
                self.params()
            )));
        }
        let mut mask = BitSet::new(self.inner.len());
        for v in w {
            mask.insert(rank(v) as usize);
        }
        Ok(EdgeCount(self.inner.edges_within(&mask)))
    }
}
