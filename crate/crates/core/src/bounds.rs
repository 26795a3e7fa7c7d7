//! Lower bounds on `r(l)`.
//!
//! Closed forms, all generic over [`Scalar`]:
//!
//! | function                   | value                          | status        |
//! |----------------------------|--------------------------------|---------------|
//! | [`turan_bound`]            | `l²/(2α) − l/2` for `l > α`    | certified     |
//! | [`distance_bound_leading`] | `l²/α`                         | leading term  |
//! | [`t4_bound_leading`]       | `3l²/(2α)`                     | leading term  |
//! | [`peeling_sum`]            | `Σ (3(l − iα) − 2·c1·n^(2s))`  | leading shape |
//!
//! "Leading term" values drop unquantified `(1 + o(1))` factors and are not
//! bounds on any finite instance. [`peel_certify`] runs the peeling argument
//! on a concrete vertex set and yields a certified lower bound on its edge
//! count.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::combinatorics::GraphParams;
use crate::error::{Error, Result};
use crate::extremal::ExtremalMethod;
use crate::graph::{InducedGraph, VertexSet};
use crate::independence::{
    alpha_exact, frankl_asymptotic, greedy_in, known_alpha_range, order_by_degree, FranklEstimate,
    MisSolver, DEFAULT_EXACT_CAP,
};
use crate::serde_util;
use crate::{lift, Rational, Scalar};

fn positive_alpha(alpha: u64) -> Result<()> {
    if alpha == 0 {
        Err(Error::domain("independence number must be positive"))
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TuranBound<T> {
    /// `l²/(2α) − l/2`, or zero when `l <= α`.
    pub value: T,
    /// Whether `l > α`, the hypothesis under which the bound holds.
    pub hypothesis_met: bool,
}

/// Turan's bound `r(l) >= l²/(2α) − l/2` for `l > α`.
pub fn turan_bound<T: Scalar>(l: u64, alpha: u64) -> Result<TuranBound<T>> {
    positive_alpha(alpha)?;
    if l <= alpha {
        return Ok(TuranBound {
            value: T::zero(),
            hypothesis_met: false,
        });
    }
    let l_t: T = lift(l as u128)?;
    let two: T = lift(2)?;
    let value = l_t.clone() * l_t.clone() / (two.clone() * lift(alpha as u128)?) - l_t / two;
    Ok(TuranBound {
        value,
        hypothesis_met: true,
    })
}

/// `⌈l²/(2α) − l/2⌉`, the integer form of [`turan_bound`]; zero when
/// `l <= α`.
pub fn turan_ceiling(l: u64, alpha: u64) -> Result<u64> {
    positive_alpha(alpha)?;
    if l <= alpha {
        return Ok(0);
    }
    let (l, a) = (l as u128, alpha as u128);
    let num = l * (l - a);
    Ok(num.div_ceil(2 * a) as u64)
}

/// Leading term `l²/α` of the bound for distance graphs.
pub fn distance_bound_leading<T: Scalar>(l: u64, alpha: u64) -> Result<T> {
    positive_alpha(alpha)?;
    let l_t: T = lift(l as u128)?;
    Ok(l_t.clone() * l_t / lift(alpha as u128)?)
}

/// Leading term `3l²/(2α)` of the bound for `G(n, 2s+1, s)`.
pub fn t4_bound_leading<T: Scalar>(l: u64, alpha: u64) -> Result<T> {
    positive_alpha(alpha)?;
    let l_t: T = lift(l as u128)?;
    Ok(lift::<T>(3)? * l_t.clone() * l_t / (lift::<T>(2)? * lift(alpha as u128)?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeelingSum<T> {
    /// Sum with every term clamped at zero.
    pub clamped: T,
    /// Sum of the raw terms, possibly negative.
    pub unclamped: T,
    /// Number of terms, `⌊l/α⌋`.
    pub terms: u64,
}

/// `Σ_{i=1}^{⌊l/α⌋} (3(l − iα) − 2·c1·n^(2s))`, with and without clamping each
/// term at zero.
pub fn peeling_sum<T: Scalar>(l: u64, alpha: u64, n: u32, s: u32, c1: T) -> Result<PeelingSum<T>> {
    positive_alpha(alpha)?;
    if c1 < T::zero() {
        return Err(Error::domain("c1 must be non-negative"));
    }
    let terms = l / alpha;
    let base: T = lift(n as u128)?;
    let mut penalty = lift::<T>(2)? * c1;
    for _ in 0..2 * s {
        penalty = penalty * base.clone();
    }
    let three: T = lift(3)?;
    let l_t: T = lift(l as u128)?;
    let mut clamped = T::zero();
    let mut unclamped = T::zero();
    for i in 1..=terms {
        let shift: T = lift(i as u128 * alpha as u128)?;
        let term = three.clone() * (l_t.clone() - shift) - penalty.clone();
        if term > T::zero() {
            clamped = clamped + term.clone();
        }
        unclamped = unclamped + term;
    }
    Ok(PeelingSum {
        clamped,
        unclamped,
        terms,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeelMode {
    /// A maximum independent set in every round.
    #[default]
    Exact,
    /// A greedy maximal independent set in every round.
    Greedy,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeelAccounting {
    /// Vertices with one or two neighbours in the round's independent set
    /// count 1, vertices with three or more count 3.
    #[default]
    Coarse,
    /// Every residual vertex counts `min(n(Γ, v), 3)`.
    Tight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeelOptions {
    pub mode: PeelMode,
    pub accounting: PeelAccounting,
    /// Vertex cap for the exact solver.
    pub exact_cap: usize,
    /// Ordering key for greedy rounds.
    pub greedy_seed: u64,
}

impl Default for PeelOptions {
    fn default() -> Self {
        PeelOptions {
            mode: PeelMode::Exact,
            accounting: PeelAccounting::Coarse,
            exact_cap: DEFAULT_EXACT_CAP,
            greedy_seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeelRound {
    /// 1-based round number.
    pub index: usize,
    /// Size of the residual set at the start of the round.
    pub residual_size: usize,
    /// `βᵢ = |Γᵢ|`.
    pub beta: usize,
    /// `fᵢ`: residual vertices with one or two neighbours in `Γᵢ`.
    pub f: usize,
    /// Residual vertices with at least three neighbours in `Γᵢ`.
    pub heavy: usize,
    pub edges_counted: u64,
    pub gamma: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeelingTrace {
    pub mode: PeelMode,
    pub accounting: PeelAccounting,
    pub rounds: Vec<PeelRound>,
    pub total_certified: u64,
}

/// Repeatedly removes an independent set from `w`, counting edges between
/// it and the remaining vertices.
///
/// Each counted edge joins a removed vertex to a vertex still present, so no
/// edge is counted in two rounds and the total never exceeds `r(W)`.
pub fn peel_certify(w: &VertexSet, opts: &PeelOptions) -> Result<PeelingTrace> {
    if opts.mode == PeelMode::Exact && w.len() > opts.exact_cap {
        return Err(
            Error::sizing("vertex count for exact peeling", w.len(), opts.exact_cap)
                .with_hint("use greedy mode"),
        );
    }
    let graph = InducedGraph::new(w);
    let solver = MisSolver::new(&graph);
    let mut residual = graph.all_indices();
    let mut rounds = Vec::new();
    let mut total = 0u64;

    while !residual.is_empty() {
        let chosen = match opts.mode {
            PeelMode::Exact => solver.lex_least(&residual),
            PeelMode::Greedy => {
                let order = order_by_degree(&graph, &residual, opts.greedy_seed);
                greedy_in(&graph, &residual, &order)
            }
        };
        let mut gamma_mask = BitSet::new(graph.len());
        for &v in &chosen {
            gamma_mask.insert(v);
        }
        let residual_size = residual.count();
        residual.difference_with(&gamma_mask);

        let (mut f, mut heavy, mut edges) = (0usize, 0usize, 0u64);
        for v in residual.iter() {
            let hits = graph.neighbors(v).intersection_count(&gamma_mask);
            match hits {
                0 => {}
                1 | 2 => f += 1,
                _ => heavy += 1,
            }
            edges += match opts.accounting {
                PeelAccounting::Coarse if hits >= 3 => 3,
                PeelAccounting::Coarse if hits >= 1 => 1,
                PeelAccounting::Coarse => 0,
                PeelAccounting::Tight => hits.min(3) as u64,
            };
        }
        total += edges;
        rounds.push(PeelRound {
            index: rounds.len() + 1,
            residual_size,
            beta: chosen.len(),
            f,
            heavy,
            edges_counted: edges,
            gamma: graph.subset(chosen),
        });
    }

    Ok(PeelingTrace {
        mode: opts.mode,
        accounting: opts.accounting,
        rounds,
        total_certified: total,
    })
}

/// Where the independence number in a [`BoundReport`] came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaSource {
    /// Exact solver on the whole graph.
    #[default]
    Exact,
    /// `n − 1`, the middle of `{n−2, n−1, n}`; only for `r = 3, s = 1`.
    RangeMidpoint,
    /// Asymptotic estimate rounded to the nearest integer (at least 1).
    Frankl,
}

impl AlphaSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            AlphaSource::Exact => "exact",
            AlphaSource::RangeMidpoint => "range_midpoint",
            AlphaSource::Frankl => "frankl",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "exact" => Some(AlphaSource::Exact),
            "range_midpoint" | "midpoint" => Some(AlphaSource::RangeMidpoint),
            "frankl" => Some(AlphaSource::Frankl),
            _ => None,
        }
    }

    /// Independence number of `p` according to this source.
    pub fn resolve(&self, p: &GraphParams, exact_cap: usize) -> Result<u64> {
        match self {
            AlphaSource::Exact => Ok(alpha_exact(p, exact_cap)?.cardinality as u64),
            AlphaSource::RangeMidpoint => known_alpha_range(p)
                .map(|range| range.start() + 1)
                .ok_or_else(|| {
                    Error::domain(format!("no known independence range for {p}"))
                }),
            AlphaSource::Frankl => {
                let est: FranklEstimate<Rational> = frankl_asymptotic(p)?;
                let rounded = est.value.round().to_integer();
                let value: u64 = rounded
                    .try_into()
                    .map_err(|_| Error::Overflow(format!("asymptotic alpha of {p}")))?;
                Ok(value.max(1))
            }
        }
    }
}

/// One instance `(G(n,r,s), l)` with every available bound next to the
/// exact value when known.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u32,
    pub r: u32,
    pub s: u32,
    pub l: u64,
    pub alpha: u64,
    pub alpha_source: AlphaSource,
    /// `l²/(2α) − l/2` (zero when `l <= α`).
    #[serde(with = "serde_util::rational")]
    pub turan: Rational,
    pub turan_hypothesis_met: bool,
    /// `l²/α`, leading term only.
    #[serde(with = "serde_util::rational")]
    pub distance_asym: Rational,
    /// `3l²/(2α)`, leading term only.
    #[serde(with = "serde_util::rational")]
    pub t4_asym: Rational,
    /// Whether `(r, s)` satisfies `r = 2s + 1` with `r − s` a prime power.
    pub prime_power_regime: bool,
    /// Certified edge count from peeling the extremal witness.
    pub peeling_certified: Option<u64>,
    /// Proven `r(l)`.
    pub exact_rl: Option<u64>,
    /// Method that produced the `r(l)` estimate.
    pub method: Option<ExtremalMethod>,
    /// Heuristic upper bound on `r(l)` when no certified value exists.
    pub rl_upper: Option<u64>,
    /// Error text for rows whose `r(l)` computation failed.
    pub note: Option<String>,
}

impl BoundReport {
    /// Evaluates the closed forms; `r(l)` fields start empty.
    pub fn new(p: &GraphParams, l: u64, alpha: u64, alpha_source: AlphaSource) -> Result<Self> {
        let turan: TuranBound<Rational> = turan_bound(l, alpha)?;
        Ok(BoundReport {
            n: p.n(),
            r: p.r(),
            s: p.s(),
            l,
            alpha,
            alpha_source,
            turan: turan.value,
            turan_hypothesis_met: turan.hypothesis_met,
            distance_asym: distance_bound_leading(l, alpha)?,
            t4_asym: t4_bound_leading(l, alpha)?,
            prime_power_regime: p.prime_power_regime(),
            peeling_certified: None,
            exact_rl: None,
            method: None,
            rl_upper: None,
            note: None,
        })
    }

    pub fn params(&self) -> Result<GraphParams> {
        GraphParams::new(self.n, self.r, self.s)
    }

    /// `⌈turan⌉`.
    pub fn turan_ceiling(&self) -> u64 {
        self.turan.ceil().to_integer().try_into().unwrap_or(u64::MAX)
    }

    /// Checks every certified bound against the exact value, if present.
    pub fn check(&self) -> std::result::Result<(), String> {
        let Some(exact) = self.exact_rl else {
            return Ok(());
        };
        if let Some(peel) = self.peeling_certified {
            if peel > exact {
                return Err(format!("peeling bound {peel} exceeds r({}) = {exact}", self.l));
            }
        }
        if self.alpha_source == AlphaSource::Exact
            && self.turan_hypothesis_met
            && self.turan_ceiling() > exact
        {
            return Err(format!(
                "Turan bound {} exceeds r({}) = {exact}",
                self.turan, self.l
            ));
        }
        Ok(())
    }
}
