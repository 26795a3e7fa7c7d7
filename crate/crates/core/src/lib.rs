//! Johnson graphs `G(n, r, s)` and lower bounds on the number of edges
//! of their induced subgraphs.
//!
//! Vertices are the `r`-element subsets of `{1, ..., n}`; two vertices are
//! adjacent when their supports meet in exactly `s` elements. The crate
//! provides:
//!
//! * [`combinatorics`]: subset encoding, colex ranking and exact binomials,
//! * [`graph`]: adjacency, neighbourhoods, induced edge counts `r(W)`,
//! * [`independence`]: exact and greedy independent sets, independence-number
//!   estimates,
//! * [`census`]: the `U1`/`U2` census of a vertex set against an independent
//!   set, checkmark enumeration and the exchange audit,
//! * [`bounds`]: closed-form edge bounds and the certified peeling procedure,
//! * [`extremal`]: `r(l)` by exhaustive search, branch and bound, or local
//!   search,
//! * [`sweep`]: batch evaluation over a range of `l` with CSV/JSON output.
//!
//! The closed-form bound formulas are generic over a [`Scalar`]; use
//! [`Rational`] for exact values and `f64` for quick numeric work.

pub mod bitset;
pub mod bounds;
pub mod census;
pub mod combinatorics;
pub mod error;
pub mod extremal;
pub mod graph;
pub mod independence;
mod serde_util;
pub mod sweep;

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num};

pub use bounds::{
    distance_bound_leading, peel_certify, peeling_sum, t4_bound_leading, turan_bound,
    turan_ceiling, AlphaSource, BoundReport, PeelAccounting, PeelMode, PeelOptions, PeelingSum,
    PeelingTrace, TuranBound,
};
pub use census::{
    census, enumerate_checkmarks, exchange_audit, neighbor_count_in, AuditReport, CensusReport,
    Checkmark, CheckmarkCase,
};
pub use combinatorics::{binomial, intersection_size, rank, unrank, GraphParams, Vertex};
pub use error::{Error, Result};
pub use extremal::{
    r_of_l_exact, r_of_l_local_search, ExtremalMethod, ExtremalResult, LocalSearchConfig,
    SearchLimits,
};
pub use graph::{
    adjacent, induced_edge_count, neighbors, total_counts, EdgeCount, InducedGraph, JohnsonGraph,
    TotalCounts, VertexSet,
};
pub use independence::{
    alpha_exact, frankl_asymptotic, greedy_maximal_independent_set, max_independent_set,
    FranklEstimate, IndependenceResult, DEFAULT_EXACT_CAP,
};
pub use sweep::{
    bound_row, merge_reports, read_reports, row_key, sweep, sweep_missing, write_reports, CsvRow,
    ResultsFormat, SweepMethod, SweepOptions,
};

/// Number type accepted by the closed-form bound formulas.
///
/// Anything with field-like arithmetic and a conversion from machine
/// integers qualifies: `f32`, `f64`, `Ratio<i64>`, [`Rational`].
pub trait Scalar: Num + Clone + PartialOrd + FromPrimitive + Debug {}

impl<T> Scalar for T where T: Num + Clone + PartialOrd + FromPrimitive + Debug {}

/// Arbitrary-precision rational; the exact scalar used in reports.
pub type Rational = num_rational::BigRational;

/// Turan bound evaluated exactly.
pub type ExactTuranBound = TuranBound<Rational>;
/// Turan bound evaluated in double precision.
pub type FloatTuranBound = TuranBound<f64>;
/// Finite peeling sum evaluated exactly.
pub type ExactPeelingSum = PeelingSum<Rational>;
/// Finite peeling sum evaluated in double precision.
pub type FloatPeelingSum = PeelingSum<f64>;
/// Asymptotic independence-number estimate, exact.
pub type ExactFranklEstimate = FranklEstimate<Rational>;
/// Asymptotic independence-number estimate, double precision.
pub type FloatFranklEstimate = FranklEstimate<f64>;

/// Converts an integer into any [`Scalar`], failing if the target type
/// cannot represent it.
pub fn lift<T: Scalar>(x: u128) -> Result<T> {
    T::from_u128(x).ok_or_else(|| Error::Overflow(format!("{x} is not representable")))
}
