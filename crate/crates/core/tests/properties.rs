//! Property and exhaustive-enumeration checks of the library invariants.

use proptest::prelude::*;

use wap_core::analysis::{wap_witness_search, SearchParams};
use wap_core::graphic::{
    graphic_points, line_hits, DiscrepancyProfile, Rational, StepVectors,
};
use wap_core::words::{
    apply_morphism, fixed_point_stream, named_word, periodic_stream, toeplitz_stream, FiniteWord,
    Morphism, ToeplitzPattern, WordStream,
};

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p, q).unwrap()
}

fn word(letters: &[u8], sigma: u8) -> FiniteWord {
    FiniteWord::new(letters.to_vec(), sigma).unwrap()
}

// ---------------------------------------------------------------------------
// Strategies
// ---------------------------------------------------------------------------

fn binary_word(max_len: usize) -> impl Strategy<Value = FiniteWord> {
    prop::collection::vec(0u8..2, 0..=max_len).prop_map(|v| word(&v, 2))
}

fn ternary_word(max_len: usize) -> impl Strategy<Value = FiniteWord> {
    prop::collection::vec(0u8..3, 0..=max_len).prop_map(|v| word(&v, 3))
}

fn binary_morphism(max_image: usize) -> impl Strategy<Value = Morphism> {
    (
        prop::collection::vec(0u8..2, 1..=max_image),
        prop::collection::vec(0u8..2, 1..=max_image),
    )
        .prop_map(|(i0, i1)| Morphism::new(vec![word(&i0, 2), word(&i1, 2)]).unwrap())
}

// ---------------------------------------------------------------------------
// words
// ---------------------------------------------------------------------------

proptest! {
    /// The Parikh vector of an image is the incidence matrix applied to the
    /// Parikh vector of the argument.
    #[test]
    fn parikh_is_linear_under_morphisms(m in binary_morphism(4), u in binary_word(12)) {
        let image = apply_morphism(&m, &u).unwrap();
        let matrix = m.incidence_matrix();
        let before = u.parikh();
        let after = image.parikh();
        for i in 0..2 {
            let expect: u64 = (0..2).map(|j| matrix[i][j] * before.counts()[j]).sum();
            prop_assert_eq!(after.counts()[i], expect);
        }
    }

    /// Unifying two letters keeps the length and adds the counts.
    #[test]
    fn unify_preserves_length_and_merges_counts(u in ternary_word(100)) {
        let merged = u.unify(0, 1).unwrap();
        prop_assert_eq!(merged.len(), u.len());
        prop_assert_eq!(merged.count(0), u.count(0) + u.count(1));
        prop_assert_eq!(merged.count(1), 0);
        prop_assert_eq!(merged.count(2), u.count(2));
    }

    /// A discrepancy profile computed from a stream equals one recomputed
    /// from the materialized prefix.
    #[test]
    fn streaming_and_batch_profiles_agree(u in binary_word(200), p in 0i64..=3, q in 1i64..=3) {
        prop_assume!(p <= q && !u.is_empty());
        let slope = rat(p, q);
        let mut stream = WordStream::from_word(u.clone());
        let streamed = DiscrepancyProfile::from_stream(&mut stream, slope, u.len()).unwrap();
        let batch = DiscrepancyProfile::from_word(&u, slope).unwrap();
        prop_assert_eq!(streamed.values(), batch.values());
    }

    /// Returns of a factor partition the scanned prefix.
    #[test]
    fn return_words_reconstruct(u in binary_word(300), f in binary_word(4)) {
        prop_assume!(!f.is_empty() && !u.is_empty());
        match wap_core::subshift::return_factorization(&u, &f) {
            Err(_) => {} // fewer than two occurrences
            Ok(fact) => {
                let mut rebuilt = fact.leading.letters().to_vec();
                for r in &fact.returns {
                    rebuilt.extend_from_slice(r.letters());
                }
                rebuilt.extend_from_slice(fact.tail.letters());
                prop_assert_eq!(rebuilt, u.letters().to_vec());
            }
        }
    }
}

// ---------------------------------------------------------------------------
// graphic
// ---------------------------------------------------------------------------

proptest! {
    /// The canonical-vector path and the discrepancy are the same object up
    /// to the scale (b+c)/q'.
    #[test]
    fn vectors_and_slopes_are_equivalent(u in binary_word(1000), b in 0u64..=8, c in 0u64..=8) {
        prop_assume!(b + c >= 1);
        let slope = rat(c as i64, (b + c) as i64);
        let path = graphic_points(&u, &StepVectors::canonical(b, c)).unwrap();
        let d = DiscrepancyProfile::from_word(&u, slope).unwrap();
        let scale = (b + c) as i64;
        let qp = slope.denominator();
        for n in 0..=u.len() {
            prop_assert_eq!(path.points()[n].1 * qp, d.value(n) * scale);
        }
    }

    /// D steps by p - q on the counted letter and by p otherwise, in the
    /// reduced slope's terms.
    #[test]
    fn discrepancy_step_identity(u in binary_word(500), p in 0i64..=4, q in 1i64..=4) {
        prop_assume!(p <= q);
        let slope = rat(p, q);
        let (p, q) = (slope.numerator(), slope.denominator());
        let d = DiscrepancyProfile::from_word(&u, slope).unwrap();
        for (i, &letter) in u.letters().iter().enumerate() {
            let step = d.value(i + 1) - d.value(i);
            prop_assert_eq!(step, if letter == 0 { p - q } else { p });
        }
    }
}

/// Pigeonhole: a profile confined to W+1 levels has a level with at least
/// ceil(N/(W+1)) hits.
fn assert_pigeonhole(d: &DiscrepancyProfile) {
    let n = d.len() as u64;
    if n == 0 {
        return;
    }
    let width = (d.max() - d.min()) as u64;
    let bound = n.div_ceil(width + 1);
    let best = (d.min()..=d.max())
        .map(|level| line_hits(d, level).count() as u64)
        .max()
        .unwrap();
    assert!(best >= bound, "best {best} < bound {bound}");
}

#[test]
fn pigeonhole_bound_holds_on_profiles() {
    let slopes = [rat(0, 1), rat(1, 3), rat(1, 2), rat(2, 3), rat(1, 1)];
    for name in ["thue_morse", "paperfolding", "prop12", "prop31"] {
        let u = named_word(name).unwrap().prefix(10_000);
        for slope in slopes {
            let d = DiscrepancyProfile::from_word(&u, slope).unwrap();
            assert_pigeonhole(&d);
        }
    }
}

/// Bounded width forces a witness: searching with the pigeonhole threshold
/// at the matching slope always succeeds.
#[test]
fn bounded_width_yields_a_witness() {
    for (name, n) in [("thue_morse", 20_000usize), ("paperfolding", 10_000), ("prop12", 20_000)] {
        let u = named_word(name).unwrap().prefix(n);
        let d = DiscrepancyProfile::from_word(&u, rat(1, 2)).unwrap();
        let width = (d.max() - d.min()) as u64;
        let bound = (n as u64).div_ceil(width + 1);
        let params = SearchParams {
            max_denominator: 2,
            min_hits: bound.max(2),
            max_gap: None,
            recency: false,
        };
        let search = wap_witness_search(&u, &params).unwrap();
        assert!(
            search.candidates.iter().any(|w| w.slope == rat(1, 2)),
            "{name}: no witness at 1/2 with threshold {bound}"
        );
    }
}

// ---------------------------------------------------------------------------
// fixed points and Toeplitz words
// ---------------------------------------------------------------------------

/// Every enumerated fixed point really is fixed: applying the morphism to a
/// prefix reproduces that prefix as a prefix.
#[test]
fn fixed_points_are_fixed_exhaustively() {
    let n = 10_000usize;
    for k in 2..=5u32 {
        for half in 0..(1u32 << (k - 1)) {
            for bits1 in 0..(1u32 << k) {
                let img = |bits: u32| -> String {
                    (0..k).rev().map(|i| if bits >> i & 1 == 1 { '1' } else { '0' }).collect()
                };
                let m = Morphism::from_images(&[&img(half), &img(bits1)]).unwrap();
                let prefix = fixed_point_stream(&m, 0).unwrap().prefix(n);
                let image = apply_morphism(&m, &prefix).unwrap();
                assert!(
                    image.letters()[..n] == prefix.letters()[..],
                    "{}/{}",
                    img(half),
                    img(bits1)
                );
            }
        }
    }
}

/// Non-hole pattern cells pin the Toeplitz word; holes are the word itself.
#[test]
fn toeplitz_skeleton_and_self_filling() {
    for pattern_text in ["0?1?", "01?", "0??1?", "012??", "0?"] {
        let pattern = ToeplitzPattern::parse(pattern_text).unwrap();
        let n = 10_000usize;
        let t = toeplitz_stream(&pattern).prefix(n);
        let cells: Vec<Option<u8>> = pattern_text
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8))
            .collect();
        let p = cells.len();

        // Skeleton: positions falling on letters of the pattern.
        for j in 1..=n {
            if let Some(c) = cells[(j - 1) % p] {
                assert_eq!(t.letters()[j - 1], c, "{pattern_text} at {j}");
            }
        }

        // Self-filling: replacing the holes of the repeated pattern with
        // the word itself reproduces the word.
        let mut filled = Vec::with_capacity(n);
        let mut hole = 0usize;
        for j in 0..n {
            match cells[j % p] {
                Some(c) => filled.push(c),
                None => {
                    filled.push(t.letters()[hole]);
                    hole += 1;
                }
            }
        }
        assert_eq!(&filled, t.letters(), "{pattern_text}");
    }
}

/// Paperfolding prefix counts at 4^k - 1 (skeleton of its width behavior).
#[test]
fn paperfolding_prefix_identity() {
    let p = named_word("paperfolding").unwrap().prefix(4usize.pow(6));
    for k in 1..=6u32 {
        let n = 4usize.pow(k) - 1;
        let zeros = p.letters()[..n].iter().filter(|&&c| c == 0).count();
        assert_eq!(zeros, 4usize.pow(k) / 2);
    }
}

/// Fresh streams from one periodic spec always agree (determinism).
proptest! {
    #[test]
    fn periodic_streams_are_deterministic(u in binary_word(12)) {
        prop_assume!(!u.is_empty());
        let a = periodic_stream(&u).unwrap().prefix(300);
        let b = periodic_stream(&u).unwrap().prefix(300);
        prop_assert_eq!(a, b);
    }
}
