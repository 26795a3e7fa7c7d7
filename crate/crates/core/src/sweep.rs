//! Batch evaluation of every bound over a range of `l`, with CSV or JSON
//! Lines results files that can be resumed.

use std::io::{BufRead, BufReader, Read, Write};
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::bounds::{peel_certify, AlphaSource, BoundReport, PeelMode, PeelOptions};
use crate::combinatorics::{binomial, GraphParams};
use crate::error::{Error, Result};
use crate::extremal::{
    r_of_l_exact, r_of_l_local_search, ExtremalMethod, LocalSearchConfig, SearchLimits,
};
use crate::independence::DEFAULT_EXACT_CAP;
use crate::serde_util::{rational_from_str, rational_to_string};

/// How `r(l)` is estimated for each row.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMethod {
    /// Branch and bound when the graph is small enough, otherwise exhaustive
    /// search within budget, otherwise local search.
    #[default]
    Auto,
    Exhaustive,
    BranchBound,
    LocalSearch,
    /// Closed forms only.
    None,
}

impl SweepMethod {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "auto" => Some(SweepMethod::Auto),
            "none" => Some(SweepMethod::None),
            other => ExtremalMethod::parse(other).map(SweepMethod::from),
        }
    }

    /// The concrete method used for `l` on `p`.
    pub fn resolve(&self, p: &GraphParams, l: u64, limits: &SearchLimits) -> Option<ExtremalMethod> {
        match self {
            SweepMethod::Auto => {
                let count = p.vertex_count();
                if count <= limits.branch_bound_cap as u128 {
                    Some(ExtremalMethod::BranchBound)
                } else if count <= u64::MAX as u128
                    && binomial(count as u64, l).is_ok_and(|c| c <= limits.exhaustive_budget)
                {
                    Some(ExtremalMethod::Exhaustive)
                } else {
                    Some(ExtremalMethod::LocalSearch)
                }
            }
            SweepMethod::Exhaustive => Some(ExtremalMethod::Exhaustive),
            SweepMethod::BranchBound => Some(ExtremalMethod::BranchBound),
            SweepMethod::LocalSearch => Some(ExtremalMethod::LocalSearch),
            SweepMethod::None => None,
        }
    }
}

impl From<ExtremalMethod> for SweepMethod {
    fn from(m: ExtremalMethod) -> Self {
        match m {
            ExtremalMethod::Exhaustive => SweepMethod::Exhaustive,
            ExtremalMethod::BranchBound => SweepMethod::BranchBound,
            ExtremalMethod::LocalSearch => SweepMethod::LocalSearch,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    pub alpha_source: AlphaSource,
    pub method: SweepMethod,
    pub limits: SearchLimits,
    pub local: LocalSearchConfig,
    /// Vertex cap for the exact independent-set solver.
    pub exact_cap: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            alpha_source: AlphaSource::Exact,
            method: SweepMethod::Auto,
            limits: SearchLimits::default(),
            local: LocalSearchConfig::default(),
            exact_cap: DEFAULT_EXACT_CAP,
        }
    }
}

/// One fully evaluated row: closed forms, `r(l)` by the chosen method, and
/// the certified peeling count of the extremal witness.
///
/// Failures of the `r(l)` computation are recorded in `note`. A row whose
/// certified values contradict each other is an error.
pub fn bound_row(p: &GraphParams, l: u64, alpha: u64, opts: &SweepOptions) -> Result<BoundReport> {
    let mut report = BoundReport::new(p, l, alpha, opts.alpha_source)?;
    let Some(method) = opts.method.resolve(p, l, &opts.limits) else {
        return Ok(report);
    };
    report.method = Some(method);
    let outcome = match method {
        ExtremalMethod::LocalSearch => r_of_l_local_search(p, l, &opts.local, &opts.limits),
        exact => r_of_l_exact(p, l, exact, &opts.limits),
    };
    match outcome {
        Ok(res) => {
            if res.certified {
                report.exact_rl = Some(res.value);
            } else {
                report.rl_upper = Some(res.value);
            }
            let peel = PeelOptions {
                mode: if res.witness.len() <= opts.exact_cap {
                    PeelMode::Exact
                } else {
                    PeelMode::Greedy
                },
                exact_cap: opts.exact_cap,
                ..PeelOptions::default()
            };
            report.peeling_certified = Some(peel_certify(&res.witness, &peel)?.total_certified);
        }
        Err(e) => report.note = Some(e.to_string()),
    }
    report.check().map_err(Error::Internal)?;
    Ok(report)
}

/// Evaluates every `l` in `range`, passing rows to `sink` in order.
pub fn sweep(
    p: &GraphParams,
    range: RangeInclusive<u64>,
    opts: &SweepOptions,
    mut sink: impl FnMut(BoundReport) -> Result<()>,
) -> Result<()> {
    if range.is_empty() {
        return Ok(());
    }
    let alpha = opts.alpha_source.resolve(p, opts.exact_cap)?;
    for l in range {
        sink(bound_row(p, l, alpha, opts)?)?;
    }
    Ok(())
}

/// Like [`sweep`], skipping rows whose key already appears in `existing`.
pub fn sweep_missing(
    p: &GraphParams,
    range: RangeInclusive<u64>,
    opts: &SweepOptions,
    existing: &[BoundReport],
) -> Result<Vec<BoundReport>> {
    let todo: Vec<u64> = range
        .filter(|&l| {
            let key = (p.n(), p.r(), p.s(), l, opts.method.resolve(p, l, &opts.limits));
            !existing.iter().any(|rep| row_key(rep) == key)
        })
        .collect();
    let mut out = Vec::with_capacity(todo.len());
    if todo.is_empty() {
        return Ok(out);
    }
    let alpha = opts.alpha_source.resolve(p, opts.exact_cap)?;
    for l in todo {
        out.push(bound_row(p, l, alpha, opts)?);
    }
    Ok(out)
}

/// Resume key `(n, r, s, l, method)`.
pub fn row_key(rep: &BoundReport) -> (u32, u32, u32, u64, Option<ExtremalMethod>) {
    (rep.n, rep.r, rep.s, rep.l, rep.method)
}

/// Union of two row lists keyed by [`row_key`] (earlier rows win), sorted by
/// key so that any sequence of resumed runs yields the same file.
pub fn merge_reports(existing: Vec<BoundReport>, fresh: Vec<BoundReport>) -> Vec<BoundReport> {
    let mut rows: Vec<BoundReport> = Vec::with_capacity(existing.len() + fresh.len());
    for rep in existing.into_iter().chain(fresh) {
        if !rows.iter().any(|r| row_key(r) == row_key(&rep)) {
            rows.push(rep);
        }
    }
    rows.sort_by_key(row_key);
    rows
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResultsFormat {
    Csv,
    /// One JSON object per line.
    Json,
}

/// CSV record; the first eleven columns are fixed, the trailing three carry
/// the method, heuristic value and error text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRow {
    pub n: u32,
    pub r: u32,
    pub s: u32,
    pub l: u64,
    pub alpha: u64,
    pub alpha_source: String,
    pub turan: String,
    pub distance: String,
    pub t4: String,
    pub peeling: Option<u64>,
    pub exact_rl: Option<u64>,
    pub method: Option<String>,
    pub rl_upper: Option<u64>,
    pub note: Option<String>,
}

pub const CSV_HEADER: [&str; 14] = [
    "n",
    "r",
    "s",
    "l",
    "alpha",
    "alpha_source",
    "turan",
    "distance",
    "t4",
    "peeling",
    "exact_rl",
    "method",
    "rl_upper",
    "note",
];

impl From<&BoundReport> for CsvRow {
    fn from(rep: &BoundReport) -> Self {
        CsvRow {
            n: rep.n,
            r: rep.r,
            s: rep.s,
            l: rep.l,
            alpha: rep.alpha,
            alpha_source: rep.alpha_source.as_str().to_string(),
            turan: rational_to_string(&rep.turan),
            distance: rational_to_string(&rep.distance_asym),
            t4: rational_to_string(&rep.t4_asym),
            peeling: rep.peeling_certified,
            exact_rl: rep.exact_rl,
            method: rep.method.map(|m| m.as_str().to_string()),
            rl_upper: rep.rl_upper,
            note: rep.note.clone(),
        }
    }
}

impl TryFrom<CsvRow> for BoundReport {
    type Error = Error;

    fn try_from(row: CsvRow) -> Result<Self> {
        let p = GraphParams::new(row.n, row.r, row.s)?;
        let rational = |text: &str| {
            rational_from_str(text).ok_or_else(|| Error::Format(format!("bad rational {text:?}")))
        };
        let method = match row.method.as_deref() {
            None | Some("") => None,
            Some(m) => Some(
                ExtremalMethod::parse(m)
                    .ok_or_else(|| Error::Format(format!("unknown method {m:?}")))?,
            ),
        };
        Ok(BoundReport {
            n: row.n,
            r: row.r,
            s: row.s,
            l: row.l,
            alpha: row.alpha,
            alpha_source: AlphaSource::parse(&row.alpha_source).ok_or_else(|| {
                Error::Format(format!("unknown alpha source {:?}", row.alpha_source))
            })?,
            turan: rational(&row.turan)?,
            turan_hypothesis_met: row.l > row.alpha,
            distance_asym: rational(&row.distance)?,
            t4_asym: rational(&row.t4)?,
            prime_power_regime: p.prime_power_regime(),
            peeling_certified: row.peeling,
            exact_rl: row.exact_rl,
            method,
            rl_upper: row.rl_upper,
            note: row.note.filter(|n| !n.is_empty()),
        })
    }
}

pub fn write_reports<W: Write>(out: W, format: ResultsFormat, rows: &[BoundReport]) -> Result<()> {
    match format {
        ResultsFormat::Csv => {
            let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            writer.write_record(CSV_HEADER)?;
            for rep in rows {
                writer.serialize(CsvRow::from(rep))?;
            }
            writer.flush()?;
        }
        ResultsFormat::Json => {
            let mut out = out;
            for rep in rows {
                serde_json::to_writer(&mut out, rep)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

pub fn read_reports<R: Read>(input: R, format: ResultsFormat) -> Result<Vec<BoundReport>> {
    match format {
        ResultsFormat::Csv => {
            let mut reader = csv::Reader::from_reader(input);
            let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
            if header != CSV_HEADER {
                return Err(Error::Format(format!("unexpected CSV header {header:?}")));
            }
            reader
                .deserialize::<CsvRow>()
                .map(|row| BoundReport::try_from(row?))
                .collect()
        }
        ResultsFormat::Json => BufReader::new(input)
            .lines()
            .filter(|line| line.as_ref().map_or(true, |l| !l.trim().is_empty()))
            .map(|line| Ok(serde_json::from_str(&line?)?))
            .collect(),
    }
}
