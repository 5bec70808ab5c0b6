//! Command-line front end: generate words, analyze and decide, run the
//! census and orbit construction, and render path plots.
//!
//! Exit codes: 0 success, 2 invalid input, 3 budget exhausted or a
//! requested certainty unmet, 1 internal error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::analysis::{balance_profile, wap_witness_search_for_letter, SearchParams, WitnessTag};
use crate::deciders::{
    census_csv, decide_bounded_wap, decide_wap, enumerate_census, CensusEmpirics, MorphismMatrix,
    Theorem1Certificate,
};
use crate::error::{Error, Result};
use crate::graphic::{graphic_points, path_to_csv, GraphicPath, Rational, StepVectors};
use crate::subshift::{build_wap_orbit_point, OrbitStatus, StepDirection};
use crate::words::{
    fixed_point_stream, named_word, periodic_stream, toeplitz_stream, FiniteWord, Letter,
    Morphism, ToeplitzPattern, WordStream,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

const SCHEMA_VERSION: u32 = 1;

// ---------------------------------------------------------------------------
// Word specs
// ---------------------------------------------------------------------------

/// A textual stream specification:
/// `morphic:<img0>/<img1>[/<img2>]@<start>` | `toeplitz:<pattern>` |
/// `named:<name>` | `periodic:<word>` | `file:<path>`.
#[derive(Clone, Debug)]
pub struct WordSpec {
    raw: String,
    kind: SpecKind,
}

#[derive(Clone, Debug)]
enum SpecKind {
    Morphic { morphism: Morphism, start: Letter },
    Toeplitz(ToeplitzPattern),
    Named(String),
    Periodic(FiniteWord),
    File(PathBuf),
}

impl WordSpec {
    pub fn parse(raw: &str) -> Result<Self> {
        let (head, rest) = raw
            .split_once(':')
            .ok_or_else(|| Error::Input(format!("spec {raw:?} has no '<kind>:' prefix")))?;
        let kind = match head {
            "morphic" => {
                let (imgs, start) = rest.split_once('@').ok_or_else(|| {
                    Error::Input(format!("morphic spec {raw:?} needs '@<start>'"))
                })?;
                let images: Vec<&str> = imgs.split('/').collect();
                if !(2..=3).contains(&images.len()) {
                    return Err(Error::Input(format!(
                        "morphic spec needs 2 or 3 images, got {}",
                        images.len()
                    )));
                }
                let morphism = Morphism::from_images(&images)?;
                let start: Letter = start
                    .parse::<u8>()
                    .ok()
                    .filter(|&s| (s as usize) < images.len())
                    .ok_or_else(|| Error::Input(format!("bad start letter {start:?}")))?;
                SpecKind::Morphic { morphism, start }
            }
            "toeplitz" => SpecKind::Toeplitz(ToeplitzPattern::parse(rest)?),
            "named" => {
                named_word(rest)?; // validate the name
                SpecKind::Named(rest.to_string())
            }
            "periodic" => SpecKind::Periodic(FiniteWord::from_digits(rest)?),
            "file" => SpecKind::File(PathBuf::from(rest)),
            other => {
                return Err(Error::Input(format!(
                    "unknown spec kind {other:?}; expected morphic, toeplitz, named, periodic or file"
                )))
            }
        };
        Ok(WordSpec { raw: raw.to_string(), kind })
    }

    /// A fresh stream; `file:` specs re-read the file.
    pub fn stream(&self) -> Result<WordStream> {
        match &self.kind {
            SpecKind::Morphic { morphism, start } => fixed_point_stream(morphism, *start),
            SpecKind::Toeplitz(p) => Ok(toeplitz_stream(p)),
            SpecKind::Named(name) => named_word(name),
            SpecKind::Periodic(u) => periodic_stream(u),
            SpecKind::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::Input(format!("cannot read word file {}: {e}", path.display()))
                })?;
                let digits: String = text.chars().filter(|c| !c.is_whitespace()).collect();
                Ok(WordStream::from_word(FiniteWord::from_digits(&digits)?))
            }
        }
    }

    /// The underlying morphism and start letter for `morphic:` specs.
    pub fn morphic_parts(&self) -> Option<(&Morphism, Letter)> {
        match &self.kind {
            SpecKind::Morphic { morphism, start } => Some((morphism, *start)),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &str {
        &self.raw
    }
}

// ---------------------------------------------------------------------------
// Report documents
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct FrequencyEntry {
    letter: u8,
    count: u64,
    ratio: String,
}

#[derive(Serialize)]
struct DiscrepancyBlock {
    slope: String,
    min: i64,
    max: i64,
    #[serde(rename = "final")]
    final_value: i64,
}

#[derive(Serialize)]
struct WitnessEntry {
    letter: u8,
    slope: String,
    level: i64,
    hits: u64,
    first: u64,
    last: u64,
    max_gap: u64,
    tag: String,
    positions: Vec<u64>,
    positions_truncated: bool,
}

#[derive(Serialize)]
struct BalanceBlock {
    max_length: usize,
    c_bal: u64,
}

#[derive(Serialize)]
struct VerdictBlock {
    wap: String,
    condition: String,
    delta: i64,
    a_max: Option<i64>,
    t: Option<i64>,
    t_pos: Option<u64>,
    lhs: Option<i64>,
    witness_level: Option<i64>,
    bounded_wap: String,
    bounded_reason: String,
}

#[derive(Serialize)]
struct BudgetBlock {
    prefix_requested: u64,
    prefix_scanned: u64,
    slope: Option<String>,
    max_denominator: u64,
    min_hits: u64,
    max_gap: Option<u64>,
    recency: bool,
}

#[derive(Serialize)]
struct AnalyzeReport {
    schema_version: u32,
    word_spec: String,
    alphabet_size: u8,
    frequencies: Vec<FrequencyEntry>,
    discrepancy: Option<DiscrepancyBlock>,
    witnesses: Vec<WitnessEntry>,
    balance: Option<BalanceBlock>,
    verdicts: Option<VerdictBlock>,
    budgets: BudgetBlock,
}

#[derive(Serialize)]
struct MatrixBlock {
    a: u64,
    b: u64,
    c: u64,
    d: u64,
    k: u64,
}

#[derive(Serialize)]
struct DecideReport {
    schema_version: u32,
    phi0: String,
    phi1: String,
    start: u8,
    matrix: MatrixBlock,
    verdicts: VerdictBlock,
}

#[derive(Serialize)]
struct OrbitLevelEntry {
    depth: u64,
    length: u64,
    parikh: Vec<u64>,
    frequency: String,
    direction: String,
}

#[derive(Serialize)]
struct OrbitReport {
    schema_version: u32,
    word_spec: String,
    target: String,
    requested_depth: u64,
    depth_reached: u64,
    budget: u64,
    status: String,
    levels: Vec<OrbitLevelEntry>,
    witness_level: i64,
    witness_hits: u64,
    witness_positions: Vec<u64>,
    positions_truncated: bool,
}

const MAX_REPORTED_POSITIONS: usize = 10_000;

fn capped(positions: &[u64]) -> (Vec<u64>, bool) {
    if positions.len() > MAX_REPORTED_POSITIONS {
        (positions[..MAX_REPORTED_POSITIONS].to_vec(), true)
    } else {
        (positions.to_vec(), false)
    }
}

// ---------------------------------------------------------------------------
// Command implementations
// ---------------------------------------------------------------------------

/// Writes the first `n` letters as a digit line.
pub fn run_generate(spec: &WordSpec, n: u64, out: Option<&Path>) -> Result<i32> {
    let prefix = spec.stream()?.prefix(n as usize);
    let mut text = prefix.to_string();
    text.push('\n');
    write_output(out, &text)?;
    // A finite source that ran dry is a budget condition, not a failure.
    Ok(if (prefix.len() as u64) < n { EXIT_BUDGET } else { EXIT_OK })
}

/// Options for [`run_analyze`].
#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub prefix: u64,
    /// Restricts the witness section to this slope's levels (and lowers the
    /// default hit threshold to 2, without the recency filter): line
    /// inspection rather than search.
    pub slope: Option<Rational>,
    pub max_denominator: u64,
    pub min_hits: Option<u64>,
    pub max_gap: Option<u64>,
    pub recency: bool,
    pub balance_window: usize,
    pub require_witness: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            prefix: 10_000,
            slope: None,
            max_denominator: 8,
            min_hits: None,
            max_gap: None,
            recency: true,
            balance_window: 100,
            require_witness: false,
        }
    }
}

/// Runs the full analyzer stack over one spec and renders the report.
pub fn run_analyze(spec: &WordSpec, opts: &AnalyzeOptions, json: bool) -> Result<(String, i32)> {
    let prefix = spec.stream()?.prefix(opts.prefix as usize);
    if prefix.is_empty() {
        return Err(Error::Input("empty word: nothing to analyze".into()));
    }
    let sigma = prefix.alphabet_size();
    let scanned = prefix.len() as u64;

    let frequencies = (0..sigma)
        .map(|a| {
            let count = prefix.count(a);
            FrequencyEntry {
                letter: a,
                count,
                ratio: Rational::from_counts(count, scanned).to_string(),
            }
        })
        .collect();

    let summary_slope = match (opts.slope, sigma) {
        (Some(s), _) => Some(s),
        (None, 2) => Some(Rational::new(1, 2)?),
        _ => None,
    };
    let discrepancy = match summary_slope {
        Some(slope) => {
            let d = crate::graphic::DiscrepancyProfile::from_word(&prefix, slope)?;
            Some(DiscrepancyBlock {
                slope: slope.to_string(),
                min: d.min(),
                max: d.max(),
                final_value: d.value(d.len()),
            })
        }
        None => None,
    };

    let mut witnesses = Vec::new();
    let letters_to_scan: Vec<u8> = if sigma == 2 { vec![0] } else { (0..sigma).collect() };
    for letter in letters_to_scan {
        match opts.slope {
            Some(slope) => {
                // Line inspection of one slope.
                let d = crate::graphic::DiscrepancyProfile::from_word_for_letter(
                    &prefix, letter, slope,
                )?;
                let min_hits = opts.min_hits.unwrap_or(2).max(2);
                let gap_bound = opts.max_gap.unwrap_or(10 * slope.denominator() as u64);
                let mut levels: Vec<i64> = (d.min()..=d.max()).collect();
                levels.sort_by_key(|&c| (c.abs(), c));
                let mut entries = Vec::new();
                for level in levels {
                    let hits = crate::graphic::line_hits(&d, level);
                    if (hits.count() as u64) < min_hits {
                        continue;
                    }
                    let tag = if hits.max_gap <= gap_bound {
                        WitnessTag::BoundedWitness
                    } else {
                        WitnessTag::Witness
                    };
                    let (positions, truncated) = capped(&hits.positions);
                    entries.push(WitnessEntry {
                        letter,
                        slope: slope.to_string(),
                        level,
                        hits: hits.count() as u64,
                        first: hits.first().unwrap(),
                        last: hits.last().unwrap(),
                        max_gap: hits.max_gap,
                        tag: tag_name(tag).to_string(),
                        positions,
                        positions_truncated: truncated,
                    });
                }
                entries.sort_by(|a, b| b.hits.cmp(&a.hits).then(a.level.abs().cmp(&b.level.abs())).then(a.level.cmp(&b.level)));
                witnesses.extend(entries);
            }
            None => {
                let params = SearchParams {
                    max_denominator: opts.max_denominator,
                    min_hits: opts.min_hits.unwrap_or(50),
                    max_gap: opts.max_gap,
                    recency: opts.recency,
                };
                let search = wap_witness_search_for_letter(&prefix, letter, &params)?;
                for w in &search.candidates {
                    witnesses.push(WitnessEntry {
                        letter,
                        slope: w.slope.to_string(),
                        level: w.level,
                        hits: w.hits,
                        first: w.first,
                        last: w.last,
                        max_gap: w.max_gap,
                        tag: tag_name(w.tag).to_string(),
                        positions: Vec::new(),
                        positions_truncated: false,
                    });
                }
            }
        }
    }

    let balance = if opts.balance_window >= 1 && opts.balance_window <= prefix.len() {
        let b = balance_profile(&prefix, opts.balance_window)?;
        Some(BalanceBlock { max_length: opts.balance_window, c_bal: b.c_bal() })
    } else {
        None
    };

    let verdicts = match spec.morphic_parts() {
        Some((m, start)) if m.alphabet_size() == 2 && m.uniform_length().map_or(false, |k| k >= 2) && m.is_prolongeable(start) => {
            let (v, cert) = decide_wap(m, start)?;
            let (bounded, reason) = decide_bounded_wap(m)?;
            Some(verdict_block(v.to_string(), &cert, bounded, reason.to_string()))
        }
        _ => None,
    };

    let found_witness = !witnesses.is_empty();
    let report = AnalyzeReport {
        schema_version: SCHEMA_VERSION,
        word_spec: spec.as_str().to_string(),
        alphabet_size: sigma,
        frequencies,
        discrepancy,
        witnesses,
        balance,
        verdicts,
        budgets: BudgetBlock {
            prefix_requested: opts.prefix,
            prefix_scanned: scanned,
            slope: opts.slope.map(|s| s.to_string()),
            max_denominator: opts.max_denominator,
            min_hits: opts.min_hits.unwrap_or(if opts.slope.is_some() { 2 } else { 50 }),
            max_gap: opts.max_gap,
            recency: opts.recency,
        },
    };

    let rendered = if json { to_json(&report)? } else { render_analyze_text(&report) };
    let code = if opts.require_witness && !found_witness { EXIT_BUDGET } else { EXIT_OK };
    Ok((rendered, code))
}

fn tag_name(tag: WitnessTag) -> &'static str {
    match tag {
        WitnessTag::Witness => "witness",
        WitnessTag::BoundedWitness => "bounded-witness",
    }
}

fn verdict_block(
    wap: String,
    cert: &Theorem1Certificate,
    bounded: bool,
    bounded_reason: String,
) -> VerdictBlock {
    VerdictBlock {
        wap,
        condition: cert.condition.to_string(),
        delta: cert.delta,
        a_max: cert.a_max,
        t: cert.t,
        t_pos: cert.t_pos,
        lhs: cert.lhs,
        witness_level: cert.witness_level,
        bounded_wap: if bounded { "yes".into() } else { "no".into() },
        bounded_reason,
    }
}

/// Decides WAP (both the requested start) and bounded WAP for a binary
/// uniform image pair.
pub fn run_decide(img0: &str, img1: &str, start: u8, json: bool) -> Result<String> {
    let m = Morphism::from_images(&[img0, img1])?;
    let matrix = MorphismMatrix::of(&m)?;
    let (v, cert) = decide_wap(&m, start)?;
    let (bounded, reason) = decide_bounded_wap(&m)?;
    let report = DecideReport {
        schema_version: SCHEMA_VERSION,
        phi0: img0.to_string(),
        phi1: img1.to_string(),
        start,
        matrix: MatrixBlock { a: matrix.a, b: matrix.b, c: matrix.c, d: matrix.d, k: matrix.k },
        verdicts: verdict_block(v.to_string(), &cert, bounded, reason.to_string()),
    };
    if json {
        to_json(&report)
    } else {
        Ok(render_decide_text(&report))
    }
}

/// Enumerates the census for one image length and renders it as CSV.
pub fn run_census(k: u64, empirical_prefix: Option<usize>) -> Result<String> {
    let empirics = empirical_prefix.map(|n| CensusEmpirics {
        witness_prefix: n,
        witness_min_hits: 50,
        decay_prefix: 10 * n as u64,
    });
    let rows = enumerate_census(k, empirics.as_ref())?;
    Ok(census_csv(&rows))
}

/// Runs the orbit-point construction and renders its report.
pub fn run_orbit(
    spec: &WordSpec,
    target: Rational,
    depth: u64,
    budget: u64,
    json: bool,
) -> Result<(String, i32)> {
    let mut w = spec.stream()?;
    let result = build_wap_orbit_point(&mut w, target, depth, budget)?;
    let (positions, truncated) = capped(&result.witness_hits);
    let report = OrbitReport {
        schema_version: SCHEMA_VERSION,
        word_spec: spec.as_str().to_string(),
        target: target.to_string(),
        requested_depth: result.requested_depth,
        depth_reached: result.depth_reached,
        budget: result.budget,
        status: match result.status {
            OrbitStatus::Complete => "complete".into(),
            OrbitStatus::BudgetExhausted { failed_depth } => {
                format!("budget-exhausted-at-depth-{failed_depth}")
            }
        },
        levels: result
            .levels
            .iter()
            .enumerate()
            .map(|(i, l)| OrbitLevelEntry {
                depth: i as u64 + 1,
                length: l.length,
                parikh: l.parikh.counts().to_vec(),
                frequency: l.frequency.to_string(),
                direction: match l.direction {
                    StepDirection::AtLeast => ">=".into(),
                    StepDirection::AtMost => "<=".into(),
                },
            })
            .collect(),
        witness_level: result.witness_level,
        witness_hits: result.witness_hits.len() as u64,
        witness_positions: positions,
        positions_truncated: truncated,
    };
    let code = match result.status {
        OrbitStatus::Complete => EXIT_OK,
        OrbitStatus::BudgetExhausted { .. } => EXIT_BUDGET,
    };
    let rendered = if json { to_json(&report)? } else { render_orbit_text(&report) };
    Ok((rendered, code))
}

/// Renders the path of a prefix as ASCII art, SVG, or CSV points.
pub fn render_plot(
    spec: &WordSpec,
    n: u64,
    vectors: &StepVectors,
    format: PlotFormat,
    viewport: (usize, usize),
) -> Result<String> {
    if matches!(format, PlotFormat::Svg) && n > 1_000_000 {
        return Err(Error::Input("svg plots support prefixes up to 10^6".into()));
    }
    let prefix = spec.stream()?.prefix(n as usize);
    let path = graphic_points(&prefix, vectors)?;
    Ok(match format {
        PlotFormat::Ascii => ascii_plot(&path, viewport),
        PlotFormat::Svg => svg_plot(&path),
        PlotFormat::Csv => path_to_csv(&path),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotFormat {
    Ascii,
    Svg,
    Csv,
}

/// One text row per unit band of y values, `/` and `\` per step, clamped
/// to the viewport with explicit truncation markers.
pub fn ascii_plot(path: &GraphicPath, viewport: (usize, usize)) -> String {
    let points = path.points();
    let steps = points.len() - 1;
    let (cols, rows) = (viewport.0.max(4), viewport.1.max(2));
    let shown_steps = steps.min(cols);
    let (mut band_hi, mut band_lo) = (i64::MIN, i64::MAX);
    for w in points.windows(2).take(shown_steps) {
        let (y0, y1) = (w[0].1, w[1].1);
        band_hi = band_hi.max(y0.max(y1)).max(y0 + i64::from(y0 == y1));
        band_lo = band_lo.min(y0.min(y1) + 1).min(y0 + i64::from(y0 == y1));
    }
    let full_bands = (band_hi - band_lo + 1) as usize;
    let shown_bands = full_bands.min(rows);
    let top = band_hi;
    let bottom = band_hi - shown_bands as i64 + 1;

    let mut grid = vec![vec![b' '; shown_steps]; shown_bands];
    for (i, w) in points.windows(2).take(shown_steps).enumerate() {
        let (y0, y1) = (w[0].1, w[1].1);
        let mut mark = |band: i64, ch: u8| {
            if band <= top && band >= bottom {
                grid[(top - band) as usize][i] = ch;
            }
        };
        use std::cmp::Ordering::*;
        match y1.cmp(&y0) {
            Equal => mark(y0 + 1, b'_'),
            Greater => (y0 + 1..=y1).for_each(|b| mark(b, b'/')),
            Less => (y1 + 1..=y0).for_each(|b| mark(b, b'\\')),
        }
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        "path: {} steps, y in [{}, {}]{}",
        steps,
        path.y_range().0,
        path.y_range().1,
        if shown_steps < steps || shown_bands < full_bands { " (truncated view)" } else { "" },
    );
    for row in grid {
        out.push_str(std::str::from_utf8(&row).expect("ascii"));
        out.push('\n');
    }
    if shown_steps < steps {
        let _ = writeln!(out, "... {} more steps beyond viewport", steps - shown_steps);
    }
    if shown_bands < full_bands {
        let _ = writeln!(out, "... {} more rows beyond viewport", full_bands - shown_bands);
    }
    out
}

/// SVG polyline through the exact lattice points, over a unit grid. The
/// `points` attribute carries the path coordinates verbatim; a y-flip
/// transform puts positive y upward.
pub fn svg_plot(path: &GraphicPath) -> String {
    let points = path.points();
    let (min_y, max_y) = path.y_range();
    let max_x = points.last().map(|p| p.0).unwrap_or(0).max(1);
    let min_x = points.iter().map(|p| p.0).min().unwrap_or(0).min(0);
    let width = max_x - min_x + 2;
    let height = max_y - min_y + 2;
    let coords: Vec<String> = points.iter().map(|(x, y)| format!("{x},{y}")).collect();
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{vx} {vy} {vw} {vh}\">\n",
            "  <defs>\n",
            "    <pattern id=\"grid\" width=\"1\" height=\"1\" patternUnits=\"userSpaceOnUse\">\n",
            "      <path d=\"M 1 0 L 0 0 0 1\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"0.04\"/>\n",
            "    </pattern>\n",
            "  </defs>\n",
            "  <rect x=\"{vx}\" y=\"{vy}\" width=\"{vw}\" height=\"{vh}\" fill=\"url(#grid)\"/>\n",
            "  <g transform=\"scale(1,-1)\">\n",
            "    <polyline fill=\"none\" stroke=\"#1a1a1a\" stroke-width=\"0.12\" points=\"{pts}\"/>\n",
            "  </g>\n",
            "</svg>\n",
        ),
        vx = min_x - 1,
        vy = -(max_y + 1),
        vw = width,
        vh = height,
        pts = coords.join(" "),
    )
}

// ---------------------------------------------------------------------------
// Text renderings
// ---------------------------------------------------------------------------

fn render_analyze_text(r: &AnalyzeReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "word: {}", r.word_spec);
    let _ = writeln!(
        s,
        "prefix: {} of {} requested",
        r.budgets.prefix_scanned, r.budgets.prefix_requested
    );
    for f in &r.frequencies {
        let _ = writeln!(s, "letter {}: count {} ratio {}", f.letter, f.count, f.ratio);
    }
    if let Some(d) = &r.discrepancy {
        let _ = writeln!(
            s,
            "discrepancy slope {}: min {} max {} final {}",
            d.slope, d.min, d.max, d.final_value
        );
    }
    if let Some(b) = &r.balance {
        let _ = writeln!(s, "balance over lengths 1..={}: C = {}", b.max_length, b.c_bal);
    }
    if r.witnesses.is_empty() {
        let _ = writeln!(s, "witnesses: none within budget");
    }
    for w in &r.witnesses {
        let _ = writeln!(
            s,
            "witness letter {} slope {} level {}: {} hits in [{}, {}], max gap {} ({})",
            w.letter, w.slope, w.level, w.hits, w.first, w.last, w.max_gap, w.tag
        );
    }
    if let Some(v) = &r.verdicts {
        s.push_str(&verdict_text(v));
    }
    s
}

fn verdict_text(v: &VerdictBlock) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "wap: {} (condition {})", v.wap, v.condition);
    let _ = write!(s, "  delta {}", v.delta);
    if let (Some(a), Some(t), Some(j)) = (v.a_max, v.t, v.t_pos) {
        let _ = write!(s, ", A {a}, t {t} (at {j})");
    }
    if let Some(lhs) = v.lhs {
        let _ = write!(s, ", lhs {lhs}");
    }
    if let Some(level) = v.witness_level {
        let _ = write!(s, ", witness line y = {level}");
    }
    s.push('\n');
    let _ = writeln!(s, "bounded wap: {} ({})", v.bounded_wap, v.bounded_reason);
    s
}

fn render_decide_text(r: &DecideReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "morphism 0 -> {}, 1 -> {} (a {} b {} c {} d {}), fixed point from {}",
        r.phi0, r.phi1, r.matrix.a, r.matrix.b, r.matrix.c, r.matrix.d, r.start
    );
    s.push_str(&verdict_text(&r.verdicts));
    s
}

fn render_orbit_text(r: &OrbitReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "word: {}", r.word_spec);
    let _ = writeln!(
        s,
        "target {}: depth {} of {} within budget {} ({})",
        r.target, r.depth_reached, r.requested_depth, r.budget, r.status
    );
    for l in &r.levels {
        let _ = writeln!(
            s,
            "  u{}: length {} parikh {:?} frequency {} {} target",
            l.depth, l.length, l.parikh, l.frequency, l.direction
        );
    }
    let _ = writeln!(
        s,
        "witness level {}: {} hits{}",
        r.witness_level,
        r.witness_hits,
        if r.witness_hits > 0 {
            format!(
                " (first {:?}...)",
                &r.witness_positions[..r.witness_positions.len().min(8)]
            )
        } else {
            String::new()
        }
    );
    s
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Input(format!("report serialization failed: {e}")))
}

// ---------------------------------------------------------------------------
// Argument parsing and dispatch
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "wap",
    version,
    about = "Generate infinite words and analyze their weak abelian periodicity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a prefix of a word as a digit line.
    Generate {
        /// morphic:<i0>/<i1>[/<i2>]@<s> | toeplitz:<pat> | named:<name> |
        /// periodic:<word> | file:<path>
        spec: String,
        #[arg(long)]
        prefix: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Frequencies, discrepancy, balance and witness search over a prefix.
    Analyze {
        spec: String,
        #[arg(long)]
        prefix: u64,
        /// Inspect one line slope p/q instead of searching all slopes.
        #[arg(long)]
        slope: Option<String>,
        #[arg(long, default_value_t = 8)]
        max_denominator: u64,
        #[arg(long)]
        min_hits: Option<u64>,
        #[arg(long)]
        max_gap: Option<u64>,
        /// Disable the first/final-quarter persistence filter.
        #[arg(long)]
        no_recency: bool,
        /// Balance window bound (0 skips the balance section).
        #[arg(long, default_value_t = 100)]
        balance: usize,
        /// Exit 3 unless some witness was found.
        #[arg(long)]
        require_witness: bool,
        #[arg(long, value_parser = ["json", "text"], default_value = "text")]
        report: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact WAP and bounded-WAP verdicts for a binary uniform morphism.
    Decide {
        img0: String,
        img1: String,
        #[arg(long, default_value_t = 0)]
        start: u8,
        #[arg(long, value_parser = ["json", "text"], default_value = "text")]
        report: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify every image pair of one length; CSV output.
    Census {
        #[arg(long)]
        length: u64,
        /// Cross-check verdicts on fixed-point prefixes of this length.
        #[arg(long)]
        empirical: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a WAP point in the shift orbit closure of a word.
    Orbit {
        spec: String,
        /// Target letter-0 frequency p/q, strictly between 0 and 1.
        #[arg(long)]
        target: String,
        #[arg(long)]
        depth: u64,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, value_parser = ["json", "text"], default_value = "text")]
        report: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the path of a prefix (ascii, svg, or csv points).
    Plot {
        spec: String,
        #[arg(long)]
        prefix: u64,
        /// Step vectors "bx,by/cx,cy"; default "1,-1/1,1".
        #[arg(long)]
        vectors: Option<String>,
        #[arg(long, value_parser = ["ascii", "svg", "csv"], default_value = "ascii")]
        format: String,
        /// ASCII viewport as COLSxROWS.
        #[arg(long, default_value = "100x30")]
        viewport: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses and runs a full command line; returns the process exit code.
pub fn run<I>(args: I) -> i32
where
    I: IntoIterator,
    I::Item: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Input(_) | Error::Precondition(_) | Error::Size(_) => EXIT_INVALID,
                Error::Budget(_) => EXIT_BUDGET,
                Error::Io(_) => EXIT_INTERNAL,
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Generate { spec, prefix, out } => {
            let spec = WordSpec::parse(&spec)?;
            run_generate(&spec, prefix, out.as_deref())
        }
        Command::Analyze {
            spec,
            prefix,
            slope,
            max_denominator,
            min_hits,
            max_gap,
            no_recency,
            balance,
            require_witness,
            report,
            out,
        } => {
            let spec = WordSpec::parse(&spec)?;
            let opts = AnalyzeOptions {
                prefix,
                slope: slope.as_deref().map(str::parse).transpose()?,
                max_denominator,
                min_hits,
                max_gap,
                recency: !no_recency,
                balance_window: balance,
                require_witness,
            };
            let (text, code) = run_analyze(&spec, &opts, report == "json")?;
            write_output(out.as_deref(), &text)?;
            Ok(code)
        }
        Command::Decide { img0, img1, start, report, out } => {
            let text = run_decide(&img0, &img1, start, report == "json")?;
            write_output(out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Census { length, empirical, out } => {
            let csv = run_census(length, empirical)?;
            write_output(out.as_deref(), &csv)?;
            Ok(EXIT_OK)
        }
        Command::Orbit { spec, target, depth, budget, report, out } => {
            let spec = WordSpec::parse(&spec)?;
            let target: Rational = target.parse()?;
            let (text, code) = run_orbit(&spec, target, depth, budget, report == "json")?;
            write_output(out.as_deref(), &text)?;
            Ok(code)
        }
        Command::Plot { spec, prefix, vectors, format, viewport, out } => {
            let spec = WordSpec::parse(&spec)?;
            let vectors = match vectors.as_deref() {
                None => StepVectors::standard(),
                Some(s) => parse_vectors(s)?,
            };
            let format = match format.as_str() {
                "ascii" => PlotFormat::Ascii,
                "svg" => PlotFormat::Svg,
                _ => PlotFormat::Csv,
            };
            let viewport = parse_viewport(&viewport)?;
            let text = render_plot(&spec, prefix, &vectors, format, viewport)?;
            write_output(out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
    }
}

fn parse_vectors(s: &str) -> Result<StepVectors> {
    let mut pairs = Vec::new();
    for part in s.split('/') {
        let (x, y) = part
            .split_once(',')
            .ok_or_else(|| Error::Input(format!("bad vector component {part:?}")))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Input(format!("bad vector coordinate {t:?}")))
        };
        pairs.push((parse(x)?, parse(y)?));
    }
    if pairs.len() != 2 {
        return Err(Error::Input(format!("expected 2 vectors, got {}", pairs.len())));
    }
    StepVectors::binary(pairs[0], pairs[1])
}

fn parse_viewport(s: &str) -> Result<(usize, usize)> {
    let (w, h) = s
        .split_once('x')
        .ok_or_else(|| Error::Input(format!("viewport {s:?} is not COLSxROWS")))?;
    let parse = |t: &str| {
        t.parse::<usize>()
            .ok()
            .filter(|&v| v >= 1)
            .ok_or_else(|| Error::Input(format!("bad viewport dimension {t:?}")))
    };
    Ok((parse(w)?, parse(h)?))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
