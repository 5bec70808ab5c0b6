//! Prefix-based analyzers: letter frequencies and their oscillation,
//! balance, weak-abelian-periodicity witness search over rational lines,
//! and abelian-period search.
//!
//! These are semi-decisions on a finite budget: a reported witness really
//! sits on its line (each hit satisfies `D_n = C` exactly), while an empty
//! result only means "none found within the stated budget". Every report
//! carries its budget for that reason.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graphic::{farey_sequence, DiscrepancyProfile, Rational};
use crate::words::{FiniteWord, Letter, ParikhVector, WordStream};

// ---------------------------------------------------------------------------
// Frequencies
// ---------------------------------------------------------------------------

/// Exact letter counts and ratios at a prefix, with optional checkpoints.
#[derive(Clone, Debug)]
pub struct FrequencyReport {
    /// Letters actually scanned (less than requested on a finite source).
    pub n: u64,
    pub counts: Vec<u64>,
    pub ratios: Vec<Rational>,
    pub checkpoints: Vec<(u64, Vec<u64>)>,
}

/// Counts letters over the first `n` of the stream; `checkpoints` asks for
/// intermediate counts at the given prefix lengths.
pub fn prefix_frequency(
    w: &mut WordStream,
    n: u64,
    checkpoints: &[u64],
) -> Result<FrequencyReport> {
    if n < 1 {
        return Err(Error::Input("prefix length must be at least 1".into()));
    }
    let sigma = w.alphabet_size() as usize;
    let mut counts = vec![0u64; sigma];
    let mut marks: Vec<u64> = checkpoints.to_vec();
    marks.sort_unstable();
    let mut out_marks = Vec::with_capacity(marks.len());
    let mut next_mark = 0usize;
    let mut scanned = 0u64;
    while scanned < n {
        match w.next_letter() {
            Some(c) => {
                counts[c as usize] += 1;
                scanned += 1;
                while next_mark < marks.len() && marks[next_mark] == scanned {
                    out_marks.push((scanned, counts.clone()));
                    next_mark += 1;
                }
            }
            None => break,
        }
    }
    if scanned == 0 {
        return Err(Error::Budget("stream produced no letters".into()));
    }
    let ratios = counts.iter().map(|&c| Rational::from_counts(c, scanned)).collect();
    Ok(FrequencyReport { n: scanned, counts, ratios, checkpoints: out_marks })
}

/// Exact per-letter extremes of the prefix ratio over the tail window
/// `[n/2, n]`; the window suppresses transients so the pair estimates the
/// lower and upper partial limits of the frequency.
#[derive(Clone, Debug)]
pub struct OscillationReport {
    pub n: u64,
    /// Per letter: (smallest, largest) prefix ratio seen in the window.
    pub range: Vec<(Rational, Rational)>,
}

pub fn frequency_oscillation(w: &mut WordStream, n: u64) -> Result<OscillationReport> {
    if n < 2 {
        return Err(Error::Input("oscillation needs a prefix of at least 2".into()));
    }
    let sigma = w.alphabet_size() as usize;
    let lo = (n / 2).max(1);
    let mut counts = vec![0u64; sigma];
    // Extremes kept as exact (count, length) pairs; length 0 means unset.
    let mut min: Vec<(u64, u64)> = vec![(0, 0); sigma];
    let mut max: Vec<(u64, u64)> = vec![(0, 0); sigma];
    let mut scanned = 0u64;
    while scanned < n {
        match w.next_letter() {
            Some(c) => {
                counts[c as usize] += 1;
                scanned += 1;
                if scanned >= lo {
                    for a in 0..sigma {
                        let cur = (counts[a], scanned);
                        if min[a].1 == 0
                            || crate::graphic::cmp_fractions(cur.0, cur.1, min[a].0, min[a].1)
                                .is_lt()
                        {
                            min[a] = cur;
                        }
                        if max[a].1 == 0
                            || crate::graphic::cmp_fractions(cur.0, cur.1, max[a].0, max[a].1)
                                .is_gt()
                        {
                            max[a] = cur;
                        }
                    }
                }
            }
            None => break,
        }
    }
    if scanned < lo {
        return Err(Error::Budget(format!(
            "stream ended at {scanned} letters, before the window start {lo}"
        )));
    }
    let range = (0..sigma)
        .map(|a| {
            (
                Rational::from_counts(min[a].0, min[a].1),
                Rational::from_counts(max[a].0, max[a].1),
            )
        })
        .collect();
    Ok(OscillationReport { n: scanned, range })
}

// ---------------------------------------------------------------------------
// Balance
// ---------------------------------------------------------------------------

/// Sliding-window extremes of per-letter counts for a set of window
/// lengths.
#[derive(Clone, Debug)]
pub struct BalanceReport {
    pub n: u64,
    /// `(length, per-letter (min, max) window counts)`, by ascending length.
    pub windows: Vec<(usize, Vec<(u64, u64)>)>,
}

impl BalanceReport {
    /// The balance constant over the measured lengths: the largest
    /// `max - min` of any letter count at any single window length.
    pub fn c_bal(&self) -> u64 {
        self.windows
            .iter()
            .flat_map(|(_, per)| per.iter().map(|&(min, max)| max - min))
            .max()
            .unwrap_or(0)
    }
}

/// Exact (min, max) of `|window|_letter` over all windows of `length` in
/// `u`, in one linear pass.
pub fn window_extremes(u: &FiniteWord, length: usize, letter: Letter) -> (u64, u64) {
    assert!(length >= 1 && length <= u.len());
    let letters = u.letters();
    let mut count = letters[..length].iter().filter(|&&c| c == letter).count() as u64;
    let (mut min, mut max) = (count, count);
    for i in length..letters.len() {
        count += (letters[i] == letter) as u64;
        count -= (letters[i - length] == letter) as u64;
        min = min.min(count);
        max = max.max(count);
    }
    (min, max)
}

/// Window statistics for every length `1..=max_len` over the prefix.
pub fn balance_profile(u: &FiniteWord, max_len: usize) -> Result<BalanceReport> {
    if max_len > u.len() || max_len == 0 {
        return Err(Error::Input(format!(
            "window length bound {max_len} must be in 1..={}",
            u.len()
        )));
    }
    let sigma = u.alphabet_size();
    let mut windows = Vec::with_capacity(max_len);
    for len in 1..=max_len {
        let per = (0..sigma).map(|a| window_extremes(u, len, a)).collect();
        windows.push((len, per));
    }
    Ok(BalanceReport { n: u.len() as u64, windows })
}

// ---------------------------------------------------------------------------
// Witness search
// ---------------------------------------------------------------------------

/// How a reported line qualified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessTag {
    /// Enough hits, but gaps above the bound.
    Witness,
    /// Enough hits with every gap at most the bound.
    BoundedWitness,
}

/// A line `(slope, level)` the word keeps returning to.
#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub slope: Rational,
    pub level: i64,
    pub hits: u64,
    pub first: u64,
    pub last: u64,
    pub max_gap: u64,
    pub tag: WitnessTag,
}

/// Budgets and thresholds of a witness search.
#[derive(Clone, Copy, Debug)]
pub struct SearchParams {
    /// Slopes are every reduced `p/q` in `[0,1]` with `q <=` this.
    pub max_denominator: u64,
    /// Candidates need at least this many hits.
    pub min_hits: u64,
    /// Gap bound for the bounded tag; `None` means `10 * q` per slope.
    pub max_gap: Option<u64>,
    /// When set, a candidate must hit both the first and the final quarter
    /// of the prefix. Lines that a word visits in one stretch and then
    /// abandons - or only discovers late - are filtered out; persistent
    /// lines survive. A heuristic, not a proof.
    pub recency: bool,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams { max_denominator: 8, min_hits: 50, max_gap: None, recency: true }
    }
}

/// Outcome of a witness search; `candidates` is empty when nothing
/// qualified within the budget.
#[derive(Clone, Debug)]
pub struct WitnessSearch {
    pub n: u64,
    pub params: SearchParams,
    pub letter: Letter,
    pub candidates: Vec<WitnessReport>,
}

impl WitnessSearch {
    pub fn found(&self) -> bool {
        !self.candidates.is_empty()
    }

    pub fn best(&self) -> Option<&WitnessReport> {
        self.candidates.first()
    }
}

struct LevelAgg {
    hits: u64,
    first: u64,
    last: u64,
    max_gap: u64,
}

/// Scans every Farey slope of the budget and every integer level the
/// profile visits, reporting lines with at least `min_hits` hits (and, when
/// the recency filter is on, hits in both the first and final quarter).
///
/// Candidates are ordered by descending hit count, then by
/// `(q, p, |level|, level)` for determinism.
pub fn wap_witness_search(u: &FiniteWord, params: &SearchParams) -> Result<WitnessSearch> {
    wap_witness_search_for_letter(u, 0, params)
}

/// Letter-indicator variant for non-binary words: the slope applies to
/// occurrences of `letter` against everything else.
pub fn wap_witness_search_for_letter(
    u: &FiniteWord,
    letter: Letter,
    params: &SearchParams,
) -> Result<WitnessSearch> {
    if params.max_denominator < 1 {
        return Err(Error::Input("slope denominator budget must be at least 1".into()));
    }
    if params.min_hits < 2 {
        return Err(Error::Input("witnesses need at least 2 hits".into()));
    }
    let n = u.len() as u64;
    let mut candidates = Vec::new();
    for slope in farey_sequence(params.max_denominator) {
        let gap_bound = params.max_gap.unwrap_or(10 * slope.denominator() as u64);
        let mut levels: HashMap<i64, LevelAgg> = HashMap::new();
        let d = DiscrepancyProfile::from_word_for_letter(u, letter, slope)?;
        for (pos, &v) in d.values().iter().enumerate().skip(1) {
            let pos = pos as u64;
            levels
                .entry(v)
                .and_modify(|agg| {
                    agg.hits += 1;
                    agg.max_gap = agg.max_gap.max(pos - agg.last);
                    agg.last = pos;
                })
                .or_insert(LevelAgg { hits: 1, first: pos, last: pos, max_gap: 0 });
        }
        for (level, agg) in levels {
            if agg.hits < params.min_hits.max(2) {
                continue;
            }
            if params.recency && !(agg.first * 4 <= n && agg.last * 4 > 3 * n) {
                continue;
            }
            let tag = if agg.max_gap <= gap_bound {
                WitnessTag::BoundedWitness
            } else {
                WitnessTag::Witness
            };
            candidates.push(WitnessReport {
                slope,
                level,
                hits: agg.hits,
                first: agg.first,
                last: agg.last,
                max_gap: agg.max_gap,
                tag,
            });
        }
    }
    candidates.sort_by(|a, b| {
        b.hits
            .cmp(&a.hits)
            .then(a.slope.denominator().cmp(&b.slope.denominator()))
            .then(a.slope.numerator().cmp(&b.slope.numerator()))
            .then(a.level.abs().cmp(&b.level.abs()))
            .then(a.level.cmp(&b.level))
    });
    Ok(WitnessSearch { n, params: *params, letter, candidates })
}

/// The level of the profile with the most hits, with its hit count.
/// This is the raw pigeonhole quantity, free of any witness thresholds.
pub fn max_level_hits(d: &DiscrepancyProfile) -> (i64, u64) {
    let mut counts: HashMap<i64, u64> = HashMap::new();
    for &v in d.values().iter().skip(1) {
        *counts.entry(v).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .max_by_key(|&(level, hits)| (hits, std::cmp::Reverse(level.abs()), level))
        .unwrap_or((0, 0))
}

// ---------------------------------------------------------------------------
// Abelian periods
// ---------------------------------------------------------------------------

/// A verified abelian period: all complete blocks
/// `u[s + i*p + 1 ..= s + (i+1)*p]` of the prefix share one Parikh vector.
#[derive(Clone, Debug)]
pub struct AbelianPeriodReport {
    pub period: u64,
    pub offset: u64,
    pub blocks: u64,
    pub parikh: ParikhVector,
}

/// Smallest `(period, offset)` in lexicographic order such that every
/// complete block of the prefix is abelian equivalent to the first, or
/// `None` when no pair within `max_period`/`max_offset` works.
pub fn abelian_period_search(
    u: &FiniteWord,
    max_period: u64,
    max_offset: u64,
) -> Result<Option<AbelianPeriodReport>> {
    let n = u.len() as u64;
    if max_period < 1 {
        return Err(Error::Input("period budget must be at least 1".into()));
    }
    if max_offset + 2 * max_period > n {
        return Err(Error::Input(format!(
            "budget needs offset + 2*period <= prefix length, got {max_offset} + 2*{max_period} > {n}"
        )));
    }
    let sigma = u.alphabet_size() as usize;
    // cum[i][a] = occurrences of a in the first i letters.
    let mut cum = vec![vec![0u32; sigma]];
    let mut cur = vec![0u32; sigma];
    for &c in u.letters() {
        cur[c as usize] += 1;
        cum.push(cur.clone());
    }
    let block = |start: u64, len: u64| -> Vec<u32> {
        let (s, e) = (start as usize, (start + len) as usize);
        (0..sigma).map(|a| cum[e][a] - cum[s][a]).collect()
    };
    for p in 1..=max_period {
        for s in 0..=max_offset {
            let blocks = (n - s) / p;
            if blocks < 2 {
                continue;
            }
            let head = block(s, p);
            let ok = (1..blocks).all(|i| block(s + i * p, p) == head);
            if ok {
                return Ok(Some(AbelianPeriodReport {
                    period: p,
                    offset: s,
                    blocks,
                    parikh: ParikhVector(head.into_iter().map(u64::from).collect()),
                }));
            }
        }
    }
    Ok(None)
}
