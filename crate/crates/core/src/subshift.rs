//! Shift-orbit tooling: factor occurrences, return-word factorizations,
//! windowed frequency bounds, and the construction of a weak abelian
//! periodic point inside a shift orbit closure.
//!
//! The construction grows a chain of nested factors `u1, u2, ...` of the
//! source word, each a concatenation of returns to the previous one,
//! steering the exact letter-0 frequency alternately to either side of a
//! rational target. The limit of such a chain lies in the orbit closure,
//! and the alternation forces its path to keep crossing the target-slope
//! line; with a uniformly recurrent source of uniform rational frequency
//! equal to the target, a qualifying return always exists, so only the
//! budget limits the depth.

use crate::analysis::window_extremes;
use crate::error::{Error, Result};
use crate::graphic::{DiscrepancyProfile, Rational};
use crate::words::{FiniteWord, Letter, ParikhVector, WordStream};

// ---------------------------------------------------------------------------
// Occurrences and returns
// ---------------------------------------------------------------------------

/// Ascending start positions (1-based) of a factor inside a prefix.
#[derive(Clone, Debug)]
pub struct OccurrenceIndex {
    pub factor: FiniteWord,
    pub positions: Vec<u64>,
}

impl OccurrenceIndex {
    pub fn count(&self) -> usize {
        self.positions.len()
    }
}

/// All occurrences of `factor` in `prefix`, by a linear-time scan.
pub fn occurrences(prefix: &FiniteWord, factor: &FiniteWord) -> Result<OccurrenceIndex> {
    if factor.is_empty() {
        return Err(Error::Input("occurrence search needs a non-empty factor".into()));
    }
    let positions = kmp_positions(prefix.letters(), factor.letters())
        .into_iter()
        .map(|p| p as u64 + 1)
        .collect();
    Ok(OccurrenceIndex { factor: factor.clone(), positions })
}

/// Knuth-Morris-Pratt scan; returns 0-based match starts.
fn kmp_positions(haystack: &[Letter], needle: &[Letter]) -> Vec<usize> {
    let m = needle.len();
    let mut fail = vec![0usize; m];
    let mut k = 0;
    for i in 1..m {
        while k > 0 && needle[i] != needle[k] {
            k = fail[k - 1];
        }
        if needle[i] == needle[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let mut out = Vec::new();
    let mut k = 0;
    for (i, &c) in haystack.iter().enumerate() {
        while k > 0 && c != needle[k] {
            k = fail[k - 1];
        }
        if c == needle[k] {
            k += 1;
        }
        if k == m {
            out.push(i + 1 - m);
            k = fail[k - 1];
        }
    }
    out
}

/// The factorization of a prefix into returns of a factor: the segment
/// between consecutive occurrence starts is one return word.
#[derive(Clone, Debug)]
pub struct ReturnFactorization {
    pub factor: FiniteWord,
    /// Everything before the first occurrence.
    pub leading: FiniteWord,
    /// `returns[i]` runs from occurrence `i+1` to just before occurrence
    /// `i+2`.
    pub returns: Vec<FiniteWord>,
    /// From the last occurrence start to the end of the scanned prefix
    /// (an unfinished return).
    pub tail: FiniteWord,
    pub positions: Vec<u64>,
}

/// Splits `prefix` at the occurrences of `factor`. Fewer than two
/// occurrences leave nothing to factorize and report a budget error.
pub fn return_factorization(prefix: &FiniteWord, factor: &FiniteWord) -> Result<ReturnFactorization> {
    let occ = occurrences(prefix, factor)?;
    if occ.count() < 2 {
        return Err(Error::Budget(format!(
            "factor {factor} occurs {} time(s) in the scanned prefix; returns need at least 2",
            occ.count()
        )));
    }
    let pos = &occ.positions;
    let leading = if pos[0] > 1 {
        prefix.factor(1, pos[0] as usize - 1)
    } else {
        FiniteWord::empty(prefix.alphabet_size())
    };
    let returns = pos
        .windows(2)
        .map(|w| prefix.factor(w[0] as usize, w[1] as usize - 1))
        .collect();
    let tail = prefix.factor(*pos.last().unwrap() as usize, prefix.len());
    Ok(ReturnFactorization {
        factor: factor.clone(),
        leading,
        returns,
        tail,
        positions: occ.positions,
    })
}

// ---------------------------------------------------------------------------
// Uniform frequency bounds
// ---------------------------------------------------------------------------

/// Windowed per-letter frequency envelope: for each measured window length,
/// the exact extremes of the letter count over all factors of that length.
#[derive(Clone, Debug)]
pub struct FrequencyBounds {
    pub n: u64,
    /// `(length, per-letter (min, max) counts)`, ascending lengths.
    pub per_length: Vec<(usize, Vec<(u64, u64)>)>,
}

impl FrequencyBounds {
    /// Frequency estimates at the longest measured window: the interval
    /// `[min/L, max/L]` per letter. A shrinking interval as `L` grows is
    /// the uniform-frequency signature.
    pub fn estimates(&self) -> Vec<(Rational, Rational)> {
        let (len, per) = self.per_length.last().expect("at least one length");
        per.iter()
            .map(|&(min, max)| {
                (
                    Rational::from_counts(min, *len as u64),
                    Rational::from_counts(max, *len as u64),
                )
            })
            .collect()
    }
}

/// Sliding-window count extremes for every length `1..=max_len` over the
/// first `n` letters of the stream.
pub fn uniform_frequency_bounds(
    w: &mut WordStream,
    n: usize,
    max_len: usize,
) -> Result<FrequencyBounds> {
    let prefix = w.prefix(n);
    if max_len == 0 || max_len > prefix.len() {
        return Err(Error::Input(format!(
            "window bound {max_len} must be in 1..={}",
            prefix.len()
        )));
    }
    let sigma = prefix.alphabet_size();
    let per_length = (1..=max_len)
        .map(|len| {
            let per = (0..sigma).map(|a| window_extremes(&prefix, len, a)).collect();
            (len, per)
        })
        .collect();
    Ok(FrequencyBounds { n: prefix.len() as u64, per_length })
}

// ---------------------------------------------------------------------------
// Orbit-point construction
// ---------------------------------------------------------------------------

/// Which side of the target the letter-0 frequency of a chain word is on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepDirection {
    AtLeast,
    AtMost,
}

impl StepDirection {
    fn flipped(self) -> Self {
        match self {
            StepDirection::AtLeast => StepDirection::AtMost,
            StepDirection::AtMost => StepDirection::AtLeast,
        }
    }
}

/// One chain element of the construction.
#[derive(Clone, Debug)]
pub struct OrbitLevel {
    pub length: u64,
    pub parikh: ParikhVector,
    /// Exact letter-0 frequency of the chain word.
    pub frequency: Rational,
    pub direction: StepDirection,
}

/// Whether the requested depth was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitStatus {
    Complete,
    /// No qualifying return existed within the scanned prefix when
    /// extending to this depth; the result carries the deepest chain found.
    BudgetExhausted { failed_depth: u64 },
}

/// Result of the orbit-point construction.
#[derive(Clone, Debug)]
pub struct OrbitResult {
    pub target: Rational,
    pub requested_depth: u64,
    pub depth_reached: u64,
    pub budget: u64,
    pub status: OrbitStatus,
    pub levels: Vec<OrbitLevel>,
    /// The deepest chain word; every earlier chain word is a prefix of it.
    pub word: FiniteWord,
    /// The most-hit integer level of the chain word's discrepancy at the
    /// target slope, with all its hit positions.
    pub witness_level: i64,
    pub witness_hits: Vec<u64>,
}

/// Builds a nested chain `u1, u2, ..., u_depth` of factors of the stream's
/// prefix, alternating the exact letter-0 frequency around `target`.
///
/// `u1` is a single letter. Each later `u_{j+1}` extends `u_j` through
/// returns: among the occurrences of `u_j` in the scanned prefix, take the
/// earliest occurrence after the first, and the earliest stretch of whole
/// returns from there that at least doubles the length and puts the
/// frequency on the required side of the target. Frequencies of `u_2, u_4,
/// ...` land at or above the target and `u_3, u_5, ...` at or below (the
/// roles swap when the word's own frequency starts below the target).
///
/// When no qualifying stretch exists at some depth the deepest chain found
/// is returned with an exhausted status, never an error: existence is only
/// guaranteed for uniformly recurrent sources whose uniform frequency is
/// the target, and that hypothesis is not checked here.
pub fn build_wap_orbit_point(
    w: &mut WordStream,
    target: Rational,
    depth: u64,
    budget: u64,
) -> Result<OrbitResult> {
    if !(target > Rational::ZERO && target < Rational::ONE) {
        return Err(Error::Input(format!("target frequency {target} must lie strictly in (0,1)")));
    }
    if depth < 1 {
        return Err(Error::Input("depth must be at least 1".into()));
    }
    let prefix = w.prefix(budget as usize);
    if prefix.is_empty() {
        return Err(Error::Budget("stream produced no letters".into()));
    }
    build_from_prefix(&prefix, target, depth, budget)
}

fn build_from_prefix(
    prefix: &FiniteWord,
    target: Rational,
    depth: u64,
    budget: u64,
) -> Result<OrbitResult> {
    let n = prefix.len();
    let (p, q) = (target.numerator(), target.denominator());

    // D[x] = p*x - q*#0(pref_x); frequency of a segment (s, e] is at least
    // the target exactly when D[e] - D[s] <= 0.
    let mut d = Vec::with_capacity(n + 1);
    d.push(0i64);
    let mut acc = 0i64;
    for &c in prefix.letters() {
        acc += if c == 0 { p - q } else { p };
        d.push(acc);
    }

    // u1: the letter whose all-one-letter frequency already sits on the
    // "at least" side when possible.
    let zeros = prefix.count(0);
    let word_freq_at_least =
        (zeros as i128) * (q as i128) >= (p as i128) * (n as i128);
    let (first_letter, mut dir) = if word_freq_at_least {
        (0u8, StepDirection::AtLeast)
    } else {
        (1u8, StepDirection::AtMost)
    };
    let u1 = FiniteWord::new(vec![first_letter], prefix.alphabet_size())?;
    let mut levels = vec![OrbitLevel {
        length: 1,
        parikh: u1.parikh(),
        frequency: u1_freq(first_letter),
        direction: dir,
    }];
    let mut chain = u1;
    let mut status = OrbitStatus::Complete;

    for j in 2..=depth {
        // u_{2i} keeps the direction of u1; odd indices flip it.
        let want = if j % 2 == 0 { dir } else { dir.flipped() };
        match extend_chain(prefix, &d, &chain, want) {
            Some(next) => {
                debug_assert!(next.letters().starts_with(chain.letters()));
                let freq = Rational::from_counts(next.count(0), next.len() as u64);
                levels.push(OrbitLevel {
                    length: next.len() as u64,
                    parikh: next.parikh(),
                    frequency: freq,
                    direction: want,
                });
                chain = next;
            }
            None => {
                status = OrbitStatus::BudgetExhausted { failed_depth: j };
                break;
            }
        }
        let _ = &mut dir;
    }

    let depth_reached = levels.len() as u64;
    let profile = DiscrepancyProfile::from_word(&chain, target)?;
    let (witness_level, _) = crate::analysis::max_level_hits(&profile);
    let witness_hits = crate::graphic::line_hits(&profile, witness_level).positions;
    Ok(OrbitResult {
        target,
        requested_depth: depth,
        depth_reached,
        budget,
        status,
        levels,
        word: chain,
        witness_level,
        witness_hits,
    })
}

fn u1_freq(letter: Letter) -> Rational {
    if letter == 0 {
        Rational::ONE
    } else {
        Rational::ZERO
    }
}

/// Earliest (anchor, end) extension of `chain` through whole returns:
/// anchor at the second or later occurrence, length at least doubled, and
/// the segment frequency on the `want` side of the target. `None` when the
/// scanned prefix offers no such stretch.
fn extend_chain(
    prefix: &FiniteWord,
    d: &[i64],
    chain: &FiniteWord,
    want: StepDirection,
) -> Option<FiniteWord> {
    let occ = kmp_positions(prefix.letters(), chain.letters());
    if occ.len() < 3 {
        return None;
    }
    // Candidate end positions: one before each occurrence after the first.
    // ends[t] pairs with anchors at occurrences 1..=t (0-based).
    let ends: Vec<i64> = occ[1..].iter().map(|&s| d[s]).collect();
    let tree = SegTree::build(&ends);
    let min_len = 2 * chain.len();

    for (ai, &astart) in occ.iter().enumerate().skip(1) {
        let anchor_pos = astart; // 0-based start; D index of "before" is astart
        let anchor_val = d[anchor_pos];
        // Need end occurrence occ[t+1] with occ[t+1] - astart >= min_len
        // and t >= ai.
        let lo_pos = astart + min_len;
        let lo_t = match occ[1..].binary_search(&lo_pos) {
            Ok(t) | Err(t) => t,
        };
        let lo_t = lo_t.max(ai);
        if lo_t >= ends.len() {
            continue;
        }
        let found = match want {
            // frequency >= target <=> D[end] - D[anchor] <= 0
            StepDirection::AtLeast => tree.first_at_most(lo_t, anchor_val),
            StepDirection::AtMost => tree.first_at_least(lo_t, anchor_val),
        };
        if let Some(t) = found {
            let end_excl = occ[t + 1]; // 0-based exclusive end
            return Some(prefix.factor(astart + 1, end_excl));
        }
    }
    None
}

/// Segment tree over i64 values answering "first index >= from with value
/// at least / at most x".
struct SegTree {
    size: usize,
    min: Vec<i64>,
    max: Vec<i64>,
}

impl SegTree {
    fn build(values: &[i64]) -> Self {
        let size = values.len();
        let mut t = SegTree { size, min: vec![i64::MAX; 4 * size.max(1)], max: vec![i64::MIN; 4 * size.max(1)] };
        if size > 0 {
            t.fill(1, 0, size - 1, values);
        }
        t
    }

    fn fill(&mut self, node: usize, l: usize, r: usize, values: &[i64]) {
        if l == r {
            self.min[node] = values[l];
            self.max[node] = values[l];
            return;
        }
        let mid = (l + r) / 2;
        self.fill(2 * node, l, mid, values);
        self.fill(2 * node + 1, mid + 1, r, values);
        self.min[node] = self.min[2 * node].min(self.min[2 * node + 1]);
        self.max[node] = self.max[2 * node].max(self.max[2 * node + 1]);
    }

    fn first_at_least(&self, from: usize, x: i64) -> Option<usize> {
        self.descend(1, 0, self.size.checked_sub(1)?, from, &|node| self.max[node] >= x)
    }

    fn first_at_most(&self, from: usize, x: i64) -> Option<usize> {
        self.descend(1, 0, self.size.checked_sub(1)?, from, &|node| self.min[node] <= x)
    }

    fn descend(
        &self,
        node: usize,
        l: usize,
        r: usize,
        from: usize,
        good: &dyn Fn(usize) -> bool,
    ) -> Option<usize> {
        if r < from || !good(node) {
            return None;
        }
        if l == r {
            return Some(l);
        }
        let mid = (l + r) / 2;
        self.descend(2 * node, l, mid, from, good)
            .or_else(|| self.descend(2 * node + 1, mid + 1, r, from, good))
    }
}
