//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line. Every threshold is pinned here; nothing is calibrated at runtime.
//!
//! Two checks are known to fail at their pinned budgets and are kept
//! faithful rather than loosened; the failure messages carry the measured
//! values (see `c06` and `c10`).

use wap_core::analysis::{
    abelian_period_search, balance_profile, wap_witness_search, wap_witness_search_for_letter,
    SearchParams,
};
use wap_core::deciders::{
    decay_check, decide_wap, empirical_witness_hits, enumerate_census, WapVerdict,
};
use wap_core::graphic::{line_hits, DiscrepancyProfile, Rational};
use wap_core::subshift::{build_wap_orbit_point, OrbitStatus, StepDirection};
use wap_core::words::{
    apply_morphism, fixed_point_stream, named_word, periodic_stream, ExponentGen, FiniteWord,
    Morphism,
};

fn criterion<F>(name: &str, body: F)
where
    F: FnOnce() + std::panic::UnwindSafe,
{
    let outcome = std::panic::catch_unwind(body);
    match &outcome {
        Ok(()) => eprintln!("criterion {name}: PASS"),
        Err(_) => eprintln!("criterion {name}: FAIL"),
    }
    if let Err(e) = outcome {
        std::panic::resume_unwind(e);
    }
}

fn rat(s: &str) -> Rational {
    s.parse().unwrap()
}

fn prefix_of(name: &str, n: usize) -> FiniteWord {
    named_word(name).unwrap().prefix(n)
}

/// Prefix lengths at the ends of the first `count` prop34 blocks.
fn prop34_block_ends(count: usize) -> Vec<u64> {
    let gen = ExponentGen::Recurrence { initial: vec![1, 1, 1, 1, 2, 4] };
    let mut total = 0u64;
    gen.values()
        .take(count)
        .map(|e| {
            total += e;
            total
        })
        .collect()
}

/// 1. The two fixed points of 0 -> 0001, 1 -> 1011: NotWAP from 0 via the
///    formula (lhs = -4 < A = -2), WAP from 1 via a zero crossing. Exact
///    integers, driven through the CLI.
#[test]
fn c01_decide_both_fixed_points_exactly() {
    criterion("1 (decide 0001/1011 from both starts)", || {
        let run = |start: &str| -> serde_json::Value {
            let out = std::process::Command::new(env!("CARGO_BIN_EXE_wap"))
                .args(["decide", "0001", "1011", "--start", start, "--report", "json"])
                .output()
                .expect("binary runs");
            assert_eq!(out.status.code(), Some(0));
            serde_json::from_slice(&out.stdout).unwrap()
        };
        let doc = run("0");
        assert_eq!(doc["verdicts"]["wap"], "no");
        assert_eq!(doc["verdicts"]["condition"], "formula");
        assert_eq!(doc["verdicts"]["delta"], -2);
        assert_eq!(doc["verdicts"]["a_max"], -2);
        assert_eq!(doc["verdicts"]["t"], 2);
        assert_eq!(doc["verdicts"]["lhs"], -4);

        let doc = run("1");
        assert_eq!(doc["verdicts"]["wap"], "yes");
        assert_eq!(doc["verdicts"]["condition"], "zero-crossing");

        // The same verdicts straight from the library.
        let m = Morphism::from_images(&["0001", "1011"]).unwrap();
        assert_eq!(decide_wap(&m, 0).unwrap().0, WapVerdict::NotWap);
        assert_eq!(decide_wap(&m, 1).unwrap().0, WapVerdict::Wap);
    });
}

/// 2. Paperfolding prefix identities: half zeros at 4^k - 1 for k = 1..6,
///    and zero excess exactly k + 1 at n = 2^k + 2^(k-2) + ... + 1 for
///    even k up to 8.
#[test]
fn c02_paperfolding_identities() {
    criterion("2 (paperfolding prefix identities)", || {
        let p = prefix_of("paperfolding", 4usize.pow(6));
        for k in 1..=6u32 {
            let n = 4usize.pow(k) - 1;
            let zeros = p.letters()[..n].iter().filter(|&&c| c == 0).count();
            assert_eq!(zeros, 4usize.pow(k) / 2, "k = {k}");
        }
        for k in [2u32, 4, 6, 8] {
            let n: usize = (0..=k / 2).map(|j| 1usize << (k - 2 * j)).sum();
            let zeros = p.letters()[..n].iter().filter(|&&c| c == 0).count() as i64;
            let ones = n as i64 - zeros;
            assert_eq!(zeros - ones, k as i64 + 1, "k = {k}, n = {n}");
        }
    });
}

/// 3. The growing-gap word: its slope-1/2 discrepancy is confined to
///    {-1, 0, 1, 2} over 10^5 letters, and on every level the largest gap
///    over the full prefix strictly exceeds the largest gap in the first
///    half.
#[test]
fn c03_prop12_confinement_and_growing_gaps() {
    criterion("3 (prop12 envelope and growing gaps)", || {
        let n = 100_000usize;
        let u = prefix_of("prop12", n);
        let d = DiscrepancyProfile::from_word(&u, rat("1/2")).unwrap();
        assert_eq!((d.min(), d.max()), (-1, 2));
        for level in -1..=2i64 {
            let hits = line_hits(&d, level);
            let full_max = hits.max_gap;
            let half_max = hits
                .positions
                .windows(2)
                .filter(|w| w[1] <= n as u64 / 2)
                .map(|w| w[1] - w[0])
                .max()
                .unwrap_or(0);
            assert!(half_max > 0, "level {level} has no early gaps");
            assert!(
                full_max > half_max,
                "level {level}: full {full_max} vs first half {half_max}"
            );
        }
    });
}

/// 4. The doubling-block word defeats the witness search (Q = 8, H = 50,
///    recency on, N = 10^5), while its zero excess at block boundaries
///    equals the number of completed separators exactly.
#[test]
fn c04_prop31_no_witness_and_log_drift() {
    criterion("4 (prop31 refutation and drift)", || {
        let n = 100_000usize;
        let u = prefix_of("prop31", n);
        let params = SearchParams {
            max_denominator: 8,
            min_hits: 50,
            max_gap: None,
            recency: true,
        };
        let search = wap_witness_search(&u, &params).unwrap();
        assert!(
            search.candidates.is_empty(),
            "unexpected witness: {:?}",
            search.best().map(|w| (w.slope, w.level, w.hits))
        );

        // End of (01)^(2^m): the drift doubles to the separator count,
        // 2*#0 - len = m.
        let mut end = 2usize;
        for m in 1..=14u64 {
            end += 1 + 2 * (1usize << m);
            assert!(end <= n);
            let zeros = u.letters()[..end].iter().filter(|&&c| c == 0).count() as u64;
            assert_eq!(2 * zeros - end as u64, m, "m = {m}");
        }
    });
}

/// 5. The three-letter block word: each block's letter has occurred in
///    exactly half the prefix at its block end (blocks 4..20), and the
///    #0/#1 ratio at 2-block ends is within 10^-3 of 0.618034 from block
///    30 on (golden-ratio limit of the block recurrence).
#[test]
fn c05_prop34_half_frequency_and_golden_ratio() {
    criterion("5 (prop34 half frequency and golden ratio)", || {
        let ends = prop34_block_ends(33);
        let u = prefix_of("prop34", ends[32] as usize);
        for (i, &end) in ends.iter().enumerate().take(20).skip(3) {
            let letter = (i % 3) as u8;
            let count = u.letters()[..end as usize]
                .iter()
                .filter(|&&c| c == letter)
                .count() as u64;
            assert_eq!(2 * count, end, "block {}", i + 1);
        }
        for block in [30usize, 33] {
            assert_eq!(block % 3, 0, "2-blocks only");
            let end = ends[block - 1] as usize;
            let zeros = u.letters()[..end].iter().filter(|&&c| c == 0).count() as i128;
            let ones = u.letters()[..end].iter().filter(|&&c| c == 1).count() as i128;
            // |zeros/ones - 618034/10^6| <= 1/10^3, cross-multiplied.
            let diff = (zeros * 1_000_000 - 618_034 * ones).abs();
            assert!(diff <= 1_000 * ones, "block {block}: ratio {zeros}/{ones}");
        }
    });
}

/// 6. Exhaustive agreement of the WAP decider with fixed-point empirics for
///    k <= 5: WAP rows show a horizontal line with at least 50 hits in
///    10^5 letters at the frequency slope; NotWAP rows pass the decay
///    check up to 10^6.
///
/// Known red at the pinned budget: the rows 0111/0000 and 01111/00000 are
/// WAP with hit counts growing like n^0.21 and n^0.14 (their second
/// eigenvalues are -3 of 4 and -4 of 5), measuring 34 and 21 hits at 10^5
/// against the required 50. Every other row of the 680 agrees, as does
/// every NotWAP decay check.
#[test]
fn c06_theorem1_census_agreement() {
    criterion("6 (WAP decider vs empirics, k <= 5)", || {
        let mut failures = Vec::new();
        for k in 2..=5u64 {
            for row in enumerate_census(k, None).unwrap() {
                let m = row.morphism();
                match row.wap_from0 {
                    WapVerdict::Wap => {
                        let (level, hits) = empirical_witness_hits(&m, 0, 100_000).unwrap();
                        if hits < 50 {
                            failures.push(format!(
                                "{}/{}: WAP but best level {level} has {hits} hits",
                                row.phi0, row.phi1
                            ));
                        }
                    }
                    WapVerdict::NotWap => {
                        let (_, cert) = decide_wap(&m, 0).unwrap();
                        if !decay_check(&m, &cert, 1_000_000).unwrap() {
                            failures.push(format!(
                                "{}/{}: NotWAP but decay bound violated",
                                row.phi0, row.phi1
                            ));
                        }
                    }
                }
            }
        }
        assert!(
            failures.is_empty(),
            "{} disagreement(s):\n{}",
            failures.len(),
            failures.join("\n")
        );
    });
}

/// 7. Exhaustive agreement of the bounded-WAP decider with abelian-period
///    empirics for k <= 4 over the morphisms whose fixed point realizes
///    the matrix frequency (both letters reachable): yes-rows have an
///    abelian period in {2, k} within (P, S) = (4k, 4k) at 10^4 letters;
///    no-rows have none, and their discrepancy width strictly grows from
///    10^4 to 10^5 letters.
#[test]
fn c07_theorem2_census_agreement() {
    criterion("7 (bounded-WAP decider vs empirics, k <= 4)", || {
        let mut failures = Vec::new();
        for k in 2..=4u64 {
            for row in enumerate_census(k, None).unwrap() {
                if !row.matrix.primitive() {
                    // With b = 0 or c = 0 the fixed point from 0 collapses
                    // (0^w or 0-then-1^w), where the image criterion says
                    // nothing; the equivalence is stated for morphisms
                    // whose powers mix both letters.
                    continue;
                }
                let m = row.morphism();
                let u = fixed_point_stream(&m, 0).unwrap().prefix(10_000);
                let found = abelian_period_search(&u, 4 * k, 4 * k).unwrap();
                if row.bounded_wap {
                    match found {
                        Some(r) if r.period == 2 || r.period == k => {}
                        other => failures.push(format!(
                            "{}/{}: bounded yes, search found {:?}",
                            row.phi0,
                            row.phi1,
                            other.map(|r| (r.period, r.offset))
                        )),
                    }
                } else {
                    if let Some(r) = found {
                        failures.push(format!(
                            "{}/{}: bounded no, but period ({}, {}) verified",
                            row.phi0, row.phi1, r.period, r.offset
                        ));
                    }
                    let slope = row.matrix.zero_frequency();
                    let width_at = |n: usize| {
                        let mut s = fixed_point_stream(&m, 0).unwrap();
                        let d = DiscrepancyProfile::from_stream(&mut s, slope, n).unwrap();
                        d.max() - d.min()
                    };
                    let (w4, w5) = (width_at(10_000), width_at(100_000));
                    if w5 <= w4 {
                        failures.push(format!(
                            "{}/{}: width stalled {w4} -> {w5}",
                            row.phi0, row.phi1
                        ));
                    }
                }
            }
        }
        assert!(
            failures.is_empty(),
            "{} disagreement(s):\n{}",
            failures.len(),
            failures.join("\n")
        );
    });
}

/// 8. The orbit-point construction reaches its depth within budget on
///    paperfolding (depth 4, 10^5) and on the NotWAP fixed point of
///    0 -> 0001, 1 -> 1011 (depth 5, 10^6); the chain frequencies
///    alternate around 1/2 exactly and the chain word hits one level at
///    least depth times.
#[test]
fn c08_orbit_construction() {
    criterion("8 (orbit WAP-point construction)", || {
        let check = |r: &wap_core::subshift::OrbitResult, depth: u64| {
            assert_eq!(r.status, OrbitStatus::Complete, "depth {}", r.depth_reached);
            assert_eq!(r.depth_reached, depth);
            for (idx, level) in r.levels.iter().enumerate().skip(1) {
                let j = idx + 1;
                let expect = if j % 2 == 0 {
                    r.levels[0].direction
                } else {
                    match r.levels[0].direction {
                        StepDirection::AtLeast => StepDirection::AtMost,
                        StepDirection::AtMost => StepDirection::AtLeast,
                    }
                };
                assert_eq!(level.direction, expect, "depth {j}");
                match level.direction {
                    StepDirection::AtLeast => assert!(level.frequency >= r.target, "depth {j}"),
                    StepDirection::AtMost => assert!(level.frequency <= r.target, "depth {j}"),
                }
            }
            assert!(
                r.witness_hits.len() as u64 >= depth,
                "only {} hits at level {}",
                r.witness_hits.len(),
                r.witness_level
            );
        };

        let mut pf = named_word("paperfolding").unwrap();
        let r = build_wap_orbit_point(&mut pf, rat("1/2"), 4, 100_000).unwrap();
        check(&r, 4);

        let m = Morphism::from_images(&["0001", "1011"]).unwrap();
        let mut w = fixed_point_stream(&m, 0).unwrap();
        let r = build_wap_orbit_point(&mut w, rat("1/2"), 5, 1_000_000).unwrap();
        check(&r, 5);
    });
}

/// 9. Oracle equivalences: sliding-window balance equals a from-scratch
///    recount at N = 2000; Parikh vectors transform by the incidence
///    matrix across all image pairs of length <= 3; the pigeonhole hit
///    bound holds on every profile computed here.
#[test]
fn c09_oracle_equivalences() {
    criterion("9 (oracle equivalences)", || {
        // Balance: linear sliding pass vs naive recount of every window.
        let n = 2000usize;
        let max_len = 48usize;
        for name in ["thue_morse", "paperfolding", "prop12"] {
            let u = prefix_of(name, n);
            let report = balance_profile(&u, max_len).unwrap();
            for (len, per) in &report.windows {
                for a in 0..u.alphabet_size() {
                    let mut min = u64::MAX;
                    let mut max = 0u64;
                    for start in 0..=(n - len) {
                        let c = u.letters()[start..start + len]
                            .iter()
                            .filter(|&&x| x == a)
                            .count() as u64;
                        min = min.min(c);
                        max = max.max(c);
                    }
                    assert_eq!(per[a as usize], (min, max), "{name} len {len} letter {a}");
                }
            }
        }

        // Parikh linearity across all pairs of images of length <= 3.
        let images: Vec<String> = (1..=3u32)
            .flat_map(|len| {
                (0..(1u32 << len)).map(move |bits| {
                    (0..len)
                        .rev()
                        .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
                        .collect::<String>()
                })
            })
            .collect();
        let samples = ["", "0", "1", "01", "10", "0011", "101010", "011010011001"];
        for i0 in &images {
            for i1 in &images {
                let m = Morphism::from_images(&[i0, i1]).unwrap();
                let matrix = m.incidence_matrix();
                for s in samples {
                    let u = FiniteWord::from_digits_with_sigma(s, 2).unwrap();
                    let image = apply_morphism(&m, &u).unwrap();
                    for row in 0..2 {
                        let expect: u64 = (0..2)
                            .map(|col| matrix[row][col] * u.parikh().counts()[col])
                            .sum();
                        assert_eq!(image.parikh().counts()[row], expect, "{i0}/{i1} on {s:?}");
                    }
                }
            }
        }

        // Pigeonhole bound on a grid of profiles.
        let slopes = ["0/1", "1/3", "1/2", "2/3", "1/1"];
        let periodic = periodic_stream(&FiniteWord::from_digits("01").unwrap())
            .unwrap()
            .prefix(10_000);
        let mut words = vec![periodic];
        for name in ["thue_morse", "paperfolding", "prop12", "prop31"] {
            words.push(prefix_of(name, 10_000));
        }
        for u in &words {
            for slope in slopes {
                let d = DiscrepancyProfile::from_word(u, rat(slope)).unwrap();
                let width = (d.max() - d.min()) as u64;
                let bound = (u.len() as u64).div_ceil(width + 1);
                let best = (d.min()..=d.max())
                    .map(|level| line_hits(&d, level).count() as u64)
                    .max()
                    .unwrap();
                assert!(best >= bound, "slope {slope}: best {best} < bound {bound}");
            }
        }
    });
}

/// 10. Letter unification versus the ternary word (Q = 4, H = 20,
///     N = 10^5, recency on): the ternary word yields no per-letter
///     witness, and each of its three binary unifications is asked to
///     yield one.
///
/// Known red in its second half at the pinned budget: the block lengths
/// grow by the golden ratio, so any line is crossed at most twice per
/// three-block cycle and 10^5 letters hold eight cycles - at most 16 hits
/// on any persistent line (measured: 16/16/5 for the three unifications),
/// below the required 20. The unifications are WAP (hits keep
/// accumulating: 16, 18, 22, ... as the prefix grows), but not at this
/// prefix length and threshold. Since a unification equals the matching
/// letter indicator word, no threshold choice can separate the two halves.
#[test]
fn c10_prop4_unifications() {
    criterion("10 (ternary unification witnesses)", || {
        let n = 100_000usize;
        let params = SearchParams {
            max_denominator: 4,
            min_hits: 20,
            max_gap: None,
            recency: true,
        };

        // Ternary word, per-letter indicator analysis: no witness.
        let ternary = prefix_of("prop34", n);
        for letter in 0..3u8 {
            let search = wap_witness_search_for_letter(&ternary, letter, &params).unwrap();
            assert!(
                search.candidates.is_empty(),
                "letter {letter}: unexpected witness {:?}",
                search.best().map(|w| (w.slope, w.level, w.hits))
            );
        }

        // The three unifications: each must produce a witness.
        let mut failures = Vec::new();
        for (a, b) in [(0u8, 1u8), (0, 2), (1, 2)] {
            let unified = named_word("prop34").unwrap().unify(a, b).unwrap().prefix(n);
            let search = wap_witness_search(&unified, &params).unwrap();
            if !search.found() {
                let relaxed = SearchParams { min_hits: 2, ..params };
                let best = wap_witness_search(&unified, &relaxed)
                    .unwrap()
                    .best()
                    .map(|w| (w.slope, w.level, w.hits));
                failures.push(format!(
                    "unify({a},{b}): no witness with >= 20 hits; best persistent line {best:?}"
                ));
            }
        }
        assert!(failures.is_empty(), "{}", failures.join("\n"));
    });
}
