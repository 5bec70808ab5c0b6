//! Exact decision procedures for fixed points of binary uniform morphisms:
//! weak abelian periodicity of the fixed point, bounded weak abelian
//! periodicity (equivalently, abelian periodicity), and an exhaustive
//! census over all morphisms of a given image length.
//!
//! Everything here is pure integer arithmetic on the morphism matrix
//! `(a, b; c, d)` with `a = |phi(0)|_0`, `b = |phi(0)|_1`, `c = |phi(1)|_0`,
//! `d = |phi(1)|_1` and `a + b = c + d = k`. Paths are taken with the
//! canonical step vectors `v0 = (1,-b)`, `v1 = (1,c)`, under which the
//! letter frequencies of the fixed point make horizontal lines the only
//! candidates for weak abelian periodicity.

use std::fmt;

use crate::analysis::max_level_hits;
use crate::error::{Error, Result};
use crate::graphic::{DiscrepancyProfile, Rational};
use crate::words::{fixed_point_stream, FiniteWord, Letter, Morphism};

// ---------------------------------------------------------------------------
// Morphism matrix
// ---------------------------------------------------------------------------

/// Letter counts of the images of a binary uniform morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MorphismMatrix {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub k: u64,
}

impl MorphismMatrix {
    pub fn of(m: &Morphism) -> Result<Self> {
        if m.alphabet_size() != 2 {
            return Err(Error::Precondition("decider needs a binary morphism".into()));
        }
        let k = m
            .uniform_length()
            .ok_or_else(|| Error::Precondition("decider needs a uniform morphism".into()))?
            as u64;
        if k < 2 {
            return Err(Error::Precondition("decider needs image length at least 2".into()));
        }
        let (img0, img1) = (m.image(0), m.image(1));
        Ok(MorphismMatrix {
            a: img0.count(0),
            b: img0.count(1),
            c: img1.count(0),
            d: img1.count(1),
            k,
        })
    }

    /// Frequency of letter 0 in the fixed point from 0: `c/(b+c)` whenever
    /// that makes sense; with `b = c = 0` the fixed point is `000...` and
    /// the frequency is 1.
    pub fn zero_frequency(&self) -> Rational {
        if self.b + self.c == 0 {
            Rational::ONE
        } else {
            Rational::new(self.c as i64, (self.b + self.c) as i64).expect("b+c > 0")
        }
    }

    /// Whether some power of the morphism maps every letter onto both
    /// letters; for an image pair with `phi(0)` starting in 0 this is
    /// exactly `b >= 1 && c >= 1`.
    pub fn primitive(&self) -> bool {
        self.b >= 1 && self.c >= 1
    }
}

// ---------------------------------------------------------------------------
// WAP decision
// ---------------------------------------------------------------------------

/// Verdict on weak abelian periodicity of a fixed point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WapVerdict {
    Wap,
    NotWap,
}

impl WapVerdict {
    pub fn is_wap(self) -> bool {
        self == WapVerdict::Wap
    }
}

impl fmt::Display for WapVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WapVerdict::Wap => "yes",
            WapVerdict::NotWap => "no",
        })
    }
}

/// Which of the three ordered conditions decided the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WapCondition {
    /// The path of `phi(0)` has a zero in `(0, k]`, exactly at an integer
    /// abscissa or by a sign change between consecutive ones.
    ZeroCrossing,
    /// The path of `phi(0)` ends at `-b` or higher.
    Endpoint,
    /// Neither fired; the verdict is the sign of
    /// `Delta*(A-c)/(-b) + t - A`, evaluated in integers as
    /// `(a-c)*(A-c) + t >= A`.
    Formula,
}

impl fmt::Display for WapCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WapCondition::ZeroCrossing => "zero-crossing",
            WapCondition::Endpoint => "endpoint",
            WapCondition::Formula => "formula",
        })
    }
}

/// The decision trace: which condition fired and the exact quantities it
/// used. For a start letter of 1 the certificate describes the
/// letter-swapped conjugate morphism, whose fixed point from 0 is the
/// letter-swap of the requested one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem1Certificate {
    pub condition: WapCondition,
    /// The path value of `phi(0)` at `k`; always `-b*(a-c)`.
    pub delta: i64,
    /// Largest path value of `phi(0)` at positions carrying letter 1.
    pub a_max: Option<i64>,
    /// Largest path value of `phi(1)` at positions carrying letter 1.
    pub t: Option<i64>,
    /// The first position inside `phi(1)` realizing `t` (1-based).
    pub t_pos: Option<u64>,
    /// `(a-c)*(A-c) + t`, the integer form of the formula's left side.
    pub lhs: Option<i64>,
    /// A horizontal line the fixed point provably returns to, when one
    /// condition pins it down (level 0 for an integer zero, `-b` for the
    /// endpoint case).
    pub witness_level: Option<i64>,
    pub verdict: WapVerdict,
}

/// Path values `g(1..=k)` of `word` with steps `-b` per 0 and `+c` per 1.
fn image_path(word: &FiniteWord, b: u64, c: u64) -> Vec<i64> {
    let mut g = Vec::with_capacity(word.len());
    let mut y = 0i64;
    for &letter in word.letters() {
        y += if letter == 0 { -(b as i64) } else { c as i64 };
        g.push(y);
    }
    g
}

fn max_at_ones(word: &FiniteWord, path: &[i64]) -> Option<(i64, u64)> {
    let mut best: Option<(i64, u64)> = None;
    for (i, &letter) in word.letters().iter().enumerate() {
        if letter == 1 {
            let v = path[i];
            if best.map_or(true, |(bv, _)| v > bv) {
                best = Some((v, i as u64 + 1));
            }
        }
    }
    best
}

/// Decides weak abelian periodicity of the fixed point of a binary uniform
/// morphism, with the exact decision trace.
///
/// The conditions are tried in order: a zero of the `phi(0)` path in
/// `(0, k]`, then the endpoint bound `g(k) >= -b`, and otherwise the
/// integer formula. A start letter of 1 is handled by deciding the
/// letter-swapped conjugate from 0.
pub fn decide_wap(m: &Morphism, start: Letter) -> Result<(WapVerdict, Theorem1Certificate)> {
    if start > 1 {
        return Err(Error::Precondition(format!("start letter {start} is not binary")));
    }
    MorphismMatrix::of(m)?;
    if !m.is_prolongeable(start) {
        return Err(Error::Precondition(format!("morphism is not prolongeable on {start}")));
    }
    if start == 1 {
        return decide_wap(&m.swap_letters()?, 0);
    }

    let mm = MorphismMatrix::of(m)?;
    let (a, b, c) = (mm.a as i64, mm.b, mm.c);
    let g0 = image_path(m.image(0), mm.b, mm.c);
    let delta = *g0.last().unwrap();
    debug_assert_eq!(delta, -(mm.b as i64) * (a - mm.c as i64));

    let a_max = max_at_ones(m.image(0), &g0).map(|(v, _)| v);
    let g1 = image_path(m.image(1), mm.b, mm.c);
    let t_entry = max_at_ones(m.image(1), &g1);

    // Condition 1: a zero in (0, k].
    let integer_zero = g0.iter().any(|&v| v == 0);
    let sign_change = g0.windows(2).any(|w| (w[0] < 0) != (w[1] < 0) && w[0] != 0 && w[1] != 0);
    if integer_zero || sign_change {
        return Ok((
            WapVerdict::Wap,
            Theorem1Certificate {
                condition: WapCondition::ZeroCrossing,
                delta,
                a_max,
                t: t_entry.map(|(v, _)| v),
                t_pos: t_entry.map(|(_, j)| j),
                lhs: None,
                witness_level: integer_zero.then_some(0),
                verdict: WapVerdict::Wap,
            },
        ));
    }

    // Condition 2: endpoint no lower than -b. With condition 1 ruled out
    // the endpoint is negative, which forces g(k) = -b exactly.
    if delta >= -(b as i64) {
        debug_assert_eq!(delta, -(b as i64));
        return Ok((
            WapVerdict::Wap,
            Theorem1Certificate {
                condition: WapCondition::Endpoint,
                delta,
                a_max,
                t: t_entry.map(|(v, _)| v),
                t_pos: t_entry.map(|(_, j)| j),
                lhs: None,
                witness_level: Some(-(b as i64)),
                verdict: WapVerdict::Wap,
            },
        ));
    }

    // Condition 3. Reaching it forces a - c >= 2 and b >= 1, so A and t
    // exist and Delta/(-b) = a - c is exact.
    let a_val = a_max.expect("b >= 1 when the formula is reached");
    let (t_val, t_pos) = t_entry.expect("d >= 1 when the formula is reached");
    let lhs = (a - c as i64) * (a_val - c as i64) + t_val;
    let verdict = if lhs >= a_val { WapVerdict::Wap } else { WapVerdict::NotWap };
    Ok((
        verdict,
        Theorem1Certificate {
            condition: WapCondition::Formula,
            delta,
            a_max,
            t: Some(t_val),
            t_pos: Some(t_pos),
            lhs: Some(lhs),
            witness_level: None,
            verdict,
        },
    ))
}

// ---------------------------------------------------------------------------
// Bounded WAP / abelian periodicity
// ---------------------------------------------------------------------------

/// Why a fixed point is (or is not) bounded weak abelian periodic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundedWapReason {
    /// The two images are abelian equivalent.
    AbelianEquivalentImages,
    /// Odd `k` with `phi(0) = (01)^((k-1)/2) 0`, `phi(1) = (10)^((k-1)/2) 1`.
    AlternatingForm,
    No,
}

impl fmt::Display for BoundedWapReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundedWapReason::AbelianEquivalentImages => "abelian-equivalent-images",
            BoundedWapReason::AlternatingForm => "alternating-form",
            BoundedWapReason::No => "no",
        })
    }
}

/// Decides bounded weak abelian periodicity of the fixed points of a
/// binary uniform morphism. A positive answer can be read three equivalent
/// ways: the fixed point is bounded WAP, it is abelian periodic, and the
/// morphism has abelian-equivalent images or the odd alternating form.
pub fn decide_bounded_wap(m: &Morphism) -> Result<(bool, BoundedWapReason)> {
    let mm = MorphismMatrix::of(m)?;
    if !m.is_prolongeable(0) && !m.is_prolongeable(1) {
        return Err(Error::Precondition(
            "morphism has no fixed point: prolongeable on neither letter".into(),
        ));
    }
    if mm.a == mm.c {
        return Ok((true, BoundedWapReason::AbelianEquivalentImages));
    }
    if mm.k % 2 == 1 {
        let alt0: Vec<u8> = (0..mm.k as usize).map(|i| (i % 2) as u8).collect();
        let alt1: Vec<u8> = (0..mm.k as usize).map(|i| ((i + 1) % 2) as u8).collect();
        if m.image(0).letters() == alt0 && m.image(1).letters() == alt1 {
            return Ok((true, BoundedWapReason::AlternatingForm));
        }
    }
    Ok((false, BoundedWapReason::No))
}

// ---------------------------------------------------------------------------
// Empirical cross-checks
// ---------------------------------------------------------------------------

/// Most-hit horizontal level of the fixed point from `start` at its
/// letter-0 frequency slope, over a prefix of `n` letters.
pub fn empirical_witness_hits(m: &Morphism, start: Letter, n: usize) -> Result<(i64, u64)> {
    let mm = if start == 0 {
        MorphismMatrix::of(m)?
    } else {
        // The conjugate's matrix describes the fixed point from 1 with the
        // letters swapped; its 0-frequency is the 1-frequency here.
        MorphismMatrix::of(&m.swap_letters()?)?
    };
    let freq0_of_stream = if start == 0 {
        mm.zero_frequency()
    } else {
        let f = mm.zero_frequency();
        Rational::new(f.denominator() - f.numerator(), f.denominator())?
    };
    let mut w = fixed_point_stream(m, start)?;
    let d = DiscrepancyProfile::from_stream(&mut w, freq0_of_stream, n)?;
    Ok(max_level_hits(&d))
}

/// For a NotWAP verdict, checks the decay of the path maxima: over every
/// window `(k^j, k^(j+1)]`, `j >= 1`, that fits in the first `n` letters
/// (the last window possibly truncated), the canonical path of the fixed
/// point from 0 stays at or below `A - j`.
pub fn decay_check(m: &Morphism, cert: &Theorem1Certificate, n: u64) -> Result<bool> {
    debug_assert_eq!(cert.verdict, WapVerdict::NotWap);
    let mm = MorphismMatrix::of(m)?;
    let a_val = cert
        .a_max
        .ok_or_else(|| Error::Precondition("certificate carries no maximum A".into()))?;
    let mut w = fixed_point_stream(m, 0)?;
    let (b, c) = (mm.b as i64, mm.c as i64);
    let mut g = 0i64;
    let mut pos = 0u64;
    let mut window_end = mm.k; // positions <= k form the base window j = 0
    let mut j = 0u64;
    let mut window_max = i64::MIN;
    while pos < n {
        let Some(letter) = w.next_letter() else { break };
        pos += 1;
        g += if letter == 0 { -b } else { c };
        if pos > window_end {
            if j >= 1 && window_max > a_val - j as i64 {
                return Ok(false);
            }
            j += 1;
            window_end = window_end.saturating_mul(mm.k);
            window_max = i64::MIN;
        }
        window_max = window_max.max(g);
    }
    Ok(!(j >= 1 && window_max > a_val - j as i64))
}

// ---------------------------------------------------------------------------
// Census
// ---------------------------------------------------------------------------

/// One classified image pair of the census.
#[derive(Clone, Debug)]
pub struct CensusRow {
    pub phi0: String,
    pub phi1: String,
    pub matrix: MorphismMatrix,
    pub wap_from0: WapVerdict,
    pub condition0: WapCondition,
    /// `None` when the morphism is not prolongeable on 1.
    pub wap_from1: Option<WapVerdict>,
    pub condition1: Option<WapCondition>,
    pub bounded_wap: bool,
    pub reason: BoundedWapReason,
    pub empirical_hits: Option<u64>,
    pub agree: Option<bool>,
}

impl CensusRow {
    pub fn morphism(&self) -> Morphism {
        Morphism::from_images(&[&self.phi0, &self.phi1]).expect("row images are valid")
    }
}

/// Budgets for the optional empirical cross-check of census verdicts.
#[derive(Clone, Copy, Debug)]
pub struct CensusEmpirics {
    /// Prefix length for witness counting on WAP rows.
    pub witness_prefix: usize,
    /// Hits required for a WAP row to count as confirmed.
    pub witness_min_hits: u64,
    /// Prefix length for the decay check on NotWAP rows.
    pub decay_prefix: u64,
}

impl Default for CensusEmpirics {
    fn default() -> Self {
        CensusEmpirics { witness_prefix: 100_000, witness_min_hits: 50, decay_prefix: 1_000_000 }
    }
}

/// All image pairs `(phi(0), phi(1))` of length `k` with `phi(0)` starting
/// in 0, classified by both deciders, in lexicographic image order.
///
/// With `empirics`, each row's from-0 verdict is cross-checked on the
/// actual fixed point: WAP rows must reach the hit threshold on some
/// horizontal level at the frequency slope, NotWAP rows must pass the
/// decay check.
pub fn enumerate_census(k: u64, empirics: Option<&CensusEmpirics>) -> Result<Vec<CensusRow>> {
    if !(2..=6).contains(&k) {
        return Err(Error::Size(format!(
            "census supports image lengths 2..=6, got {k} (the candidate space doubles per letter)"
        )));
    }
    let k = k as usize;
    let word_of = |bits: u64| -> String {
        (0..k)
            .rev()
            .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    };
    let mut rows = Vec::new();
    for half in 0..(1u64 << (k - 1)) {
        let phi0 = word_of(half); // leading bit zero
        for bits1 in 0..(1u64 << k) {
            let phi1 = word_of(bits1);
            let m = Morphism::from_images(&[&phi0, &phi1])?;
            let matrix = MorphismMatrix::of(&m)?;
            let (wap0, cert0) = decide_wap(&m, 0)?;
            let from1 = if m.is_prolongeable(1) { Some(decide_wap(&m, 1)?) } else { None };
            let (bounded, reason) = decide_bounded_wap(&m)?;

            let (empirical_hits, agree) = match empirics {
                None => (None, None),
                Some(e) => {
                    if wap0.is_wap() {
                        let (_, hits) = empirical_witness_hits(&m, 0, e.witness_prefix)?;
                        (Some(hits), Some(hits >= e.witness_min_hits))
                    } else {
                        let ok = decay_check(&m, &cert0, e.decay_prefix)?;
                        (None, Some(ok))
                    }
                }
            };

            rows.push(CensusRow {
                phi0: phi0.clone(),
                phi1,
                matrix,
                wap_from0: wap0,
                condition0: cert0.condition,
                wap_from1: from1.as_ref().map(|(v, _)| *v),
                condition1: from1.as_ref().map(|(_, c)| c.condition),
                bounded_wap: bounded,
                reason,
                empirical_hits,
                agree,
            });
        }
    }
    Ok(rows)
}

/// Renders census rows as CSV with the fixed column set.
pub fn census_csv(rows: &[CensusRow]) -> String {
    let mut out = String::from(
        "phi0,phi1,a,b,c,d,wap_from0,condition0,wap_from1,condition1,bounded_wap,reason,empirical_hits,agree\n",
    );
    for r in rows {
        let opt_verdict = r.wap_from1.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
        let opt_cond = r.condition1.map(|c| c.to_string()).unwrap_or_else(|| "-".into());
        let hits = r.empirical_hits.map(|h| h.to_string()).unwrap_or_else(|| "-".into());
        let agree = r
            .agree
            .map(|a| if a { "yes".into() } else { "no".to_string() })
            .unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.phi0,
            r.phi1,
            r.matrix.a,
            r.matrix.b,
            r.matrix.c,
            r.matrix.d,
            r.wap_from0,
            r.condition0,
            opt_verdict,
            opt_cond,
            if r.bounded_wap { "yes" } else { "no" },
            r.reason,
            hits,
            agree,
        ));
    }
    out
}
