//! The lattice-path ("graphic") view of a word, and exact discrepancy
//! profiles along rational-slope lines.
//!
//! Mapping letter `0` to the step `(1,-b)` and letter `1` to `(1,c)` turns a
//! word into a path in the integer grid. A word is weak abelian periodic
//! along a rational-slope line exactly when the path meets that line in
//! infinitely many lattice points. For the slope `p/q` this reduces to the
//! integer sequence `D_n = p*n - q*#0(pref_n)`: lattice points on a line of
//! slope `p/q` are the level sets of `D`. All arithmetic here is exact
//! integer arithmetic; no verdict ever passes through floating point.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::words::{FiniteWord, Letter, WordStream};

// ---------------------------------------------------------------------------
// Exact rationals
// ---------------------------------------------------------------------------

/// An exact reduced fraction with positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Input("rational with zero denominator".into()));
        }
        let sign = if (num < 0) != (den < 0) && num != 0 { -1 } else { 1 };
        let (n, d) = (num.unsigned_abs(), den.unsigned_abs());
        let g = gcd(n, d).max(1);
        Ok(Rational { num: sign * (n / g) as i64, den: (d / g) as i64 })
    }

    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn from_counts(count: u64, total: u64) -> Self {
        Rational::new(count as i64, total as i64).expect("total > 0")
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    /// Whether the value lies in `[0, 1]`.
    pub fn is_proper(&self) -> bool {
        self.num >= 0 && self.num <= self.den
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Input(format!("bad rational component {t:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Rational::new(parse(n)?, parse(d)?),
            None => Rational::new(parse(s)?, 1),
        }
    }
}

/// Compares `a/b` with `c/d` exactly (`b`, `d` positive).
pub fn cmp_fractions(a: u64, b: u64, c: u64, d: u64) -> std::cmp::Ordering {
    (a as u128 * d as u128).cmp(&(c as u128 * b as u128))
}

/// All reduced fractions `p/q` in `[0, 1]` with `q <= order`, ascending
/// (the Farey sequence of the given order).
pub fn farey_sequence(order: u64) -> Vec<Rational> {
    assert!(order >= 1);
    let mut out = vec![Rational::ZERO];
    let (mut a, mut b, mut c, mut d) = (0i64, 1i64, 1i64, order as i64);
    while c <= order as i64 {
        let k = (order as i64 + b) / d;
        (a, b, c, d) = (c, d, k * c - a, k * d - b);
        out.push(Rational { num: a, den: b });
    }
    out
}

// ---------------------------------------------------------------------------
// Step vectors and paths
// ---------------------------------------------------------------------------

/// One integer step vector per letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepVectors {
    steps: Vec<(i64, i64)>,
}

impl StepVectors {
    /// Binary steps `(1,-1)` and `(1,1)`, as in the standard picture.
    pub fn standard() -> Self {
        StepVectors { steps: vec![(1, -1), (1, 1)] }
    }

    /// The canonical binary form `v0 = (1,-b)`, `v1 = (1,c)` attached to a
    /// uniform morphism with matrix entries `b = |phi(0)|_1`, `c = |phi(1)|_0`.
    pub fn canonical(b: u64, c: u64) -> Self {
        StepVectors { steps: vec![(1, -(b as i64)), (1, c as i64)] }
    }

    /// Arbitrary binary vectors; they must not be collinear.
    pub fn binary(v0: (i64, i64), v1: (i64, i64)) -> Result<Self> {
        if v0.0 * v1.1 - v0.1 * v1.0 == 0 {
            return Err(Error::Input(format!("step vectors {v0:?}, {v1:?} are collinear")));
        }
        Ok(StepVectors { steps: vec![v0, v1] })
    }

    pub fn letters(&self) -> usize {
        self.steps.len()
    }

    pub fn step(&self, letter: Letter) -> (i64, i64) {
        self.steps[letter as usize]
    }
}

/// The path of a finite word: lattice points from the origin, one per
/// prefix length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphicPath {
    points: Vec<(i64, i64)>,
}

impl GraphicPath {
    /// All `len + 1` points, starting at `(0, 0)`.
    pub fn points(&self) -> &[(i64, i64)] {
        &self.points
    }

    pub fn last(&self) -> (i64, i64) {
        *self.points.last().unwrap()
    }

    pub fn y_range(&self) -> (i64, i64) {
        let min = self.points.iter().map(|p| p.1).min().unwrap();
        let max = self.points.iter().map(|p| p.1).max().unwrap();
        (min, max)
    }
}

/// Walks `u` from the origin with the given step per letter.
pub fn graphic_points(u: &FiniteWord, vectors: &StepVectors) -> Result<GraphicPath> {
    if (u.alphabet_size() as usize) > vectors.letters() {
        return Err(Error::Input(format!(
            "word over alphabet of size {} needs that many step vectors, got {}",
            u.alphabet_size(),
            vectors.letters()
        )));
    }
    let mut points = Vec::with_capacity(u.len() + 1);
    let (mut x, mut y) = (0i64, 0i64);
    points.push((x, y));
    for &c in u.letters() {
        let (dx, dy) = vectors.step(c);
        x += dx;
        y += dy;
        points.push((x, y));
    }
    Ok(GraphicPath { points })
}

// ---------------------------------------------------------------------------
// Discrepancy profiles
// ---------------------------------------------------------------------------

/// The exact integer sequence `D_n = p*n - q*#a(pref_n)` for a slope `p/q`
/// and a counted letter `a` (letter `0` unless stated otherwise).
///
/// `D` steps by `p - q` on the counted letter and by `p` on every other
/// letter, so constant levels of `D` are exactly the lattice points of the
/// word's graphic on lines of slope `p/q`.
#[derive(Clone, Debug)]
pub struct DiscrepancyProfile {
    slope: Rational,
    letter: Letter,
    values: Vec<i64>,
    min: i64,
    max: i64,
}

impl DiscrepancyProfile {
    /// Profile over the first `n` letters of the stream, counting letter 0.
    pub fn from_stream(w: &mut WordStream, slope: Rational, n: usize) -> Result<Self> {
        Self::from_stream_for_letter(w, 0, slope, n)
    }

    /// Profile counting occurrences of `letter` (the letter-indicator view
    /// used for non-binary words).
    pub fn from_stream_for_letter(
        w: &mut WordStream,
        letter: Letter,
        slope: Rational,
        n: usize,
    ) -> Result<Self> {
        check_slope(slope)?;
        let mut values = Vec::with_capacity(n + 1);
        values.push(0i64);
        let (mut min, mut max) = (0i64, 0i64);
        let mut d = 0i64;
        let p = slope.numerator();
        let q = slope.denominator();
        for _ in 0..n {
            match w.next_letter() {
                Some(c) => {
                    d += if c == letter { p - q } else { p };
                    min = min.min(d);
                    max = max.max(d);
                    values.push(d);
                }
                None => break,
            }
        }
        Ok(DiscrepancyProfile { slope, letter, values, min, max })
    }

    pub fn from_word(u: &FiniteWord, slope: Rational) -> Result<Self> {
        Self::from_word_for_letter(u, 0, slope)
    }

    pub fn from_word_for_letter(u: &FiniteWord, letter: Letter, slope: Rational) -> Result<Self> {
        let mut w = WordStream::from_word(u.clone());
        Self::from_stream_for_letter(&mut w, letter, slope, u.len())
    }

    pub fn slope(&self) -> Rational {
        self.slope
    }

    pub fn counted_letter(&self) -> Letter {
        self.letter
    }

    /// Number of letters scanned.
    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `D_n` for `n` in `0..=len`.
    pub fn value(&self, n: usize) -> i64 {
        self.values[n]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn min(&self) -> i64 {
        self.min
    }

    pub fn max(&self) -> i64 {
        self.max
    }
}

fn check_slope(slope: Rational) -> Result<()> {
    if !slope.is_proper() {
        return Err(Error::Input(format!("slope {slope} outside [0, 1]")));
    }
    Ok(())
}

/// Streams the first `n` letters of `w`, folding `(position, D_position)`
/// into `f` without retaining the profile. Returns the number of letters
/// actually scanned.
pub fn fold_discrepancy<F: FnMut(u64, i64)>(
    w: &mut WordStream,
    letter: Letter,
    slope: Rational,
    n: u64,
    mut f: F,
) -> Result<u64> {
    check_slope(slope)?;
    let p = slope.numerator();
    let q = slope.denominator();
    let mut d = 0i64;
    let mut scanned = 0u64;
    while scanned < n {
        match w.next_letter() {
            Some(c) => {
                scanned += 1;
                d += if c == letter { p - q } else { p };
                f(scanned, d);
            }
            None => break,
        }
    }
    Ok(scanned)
}

/// Positions where a profile sits on one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineHits {
    pub level: i64,
    /// 1-based positions `n >= 1` with `D_n = level`, ascending.
    pub positions: Vec<u64>,
    /// Largest difference between consecutive hit positions (0 with fewer
    /// than two hits).
    pub max_gap: u64,
}

impl LineHits {
    pub fn count(&self) -> usize {
        self.positions.len()
    }

    pub fn first(&self) -> Option<u64> {
        self.positions.first().copied()
    }

    pub fn last(&self) -> Option<u64> {
        self.positions.last().copied()
    }
}

/// All positions `n >= 1` with `D_n = level`.
pub fn line_hits(d: &DiscrepancyProfile, level: i64) -> LineHits {
    let mut positions = Vec::new();
    for (n, &v) in d.values.iter().enumerate().skip(1) {
        if v == level {
            positions.push(n as u64);
        }
    }
    let max_gap = positions.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    LineHits { level, positions, max_gap }
}

/// The vertical extent of a profile: how far the path strays from the line
/// of its slope.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WidthEstimate {
    pub slope: Rational,
    pub min: i64,
    pub max: i64,
}

impl WidthEstimate {
    pub fn width(&self) -> i64 {
        self.max - self.min
    }
}

/// The (min, max) envelope of the profile. `D_0 = 0` is included, so
/// `min <= 0 <= max` always, and widening the prefix never shrinks the
/// interval.
pub fn width(d: &DiscrepancyProfile) -> WidthEstimate {
    WidthEstimate { slope: d.slope(), min: d.min(), max: d.max() }
}

/// Serializes a path as CSV lines `n,y` with exact integers.
pub fn path_to_csv(path: &GraphicPath) -> String {
    let mut out = String::from("n,y\n");
    for (n, p) in path.points().iter().enumerate() {
        out.push_str(&format!("{},{}\n", n, p.1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{named_word, periodic_stream, Morphism};

    fn rat(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn rational_reduction_and_order() {
        assert_eq!(rat("2/4"), rat("1/2"));
        assert_eq!(rat("-2/-4"), rat("1/2"));
        assert_eq!(rat("2/-4").to_string(), "-1/2");
        assert_eq!(rat("0/5").to_string(), "0/1");
        assert!(rat("1/3") < rat("1/2"));
        assert!(rat("2/3") > rat("1/2"));
        assert!(Rational::new(1, 0).is_err());
        assert!(rat("1/2").is_proper() && !rat("3/2").is_proper());
    }

    #[test]
    fn farey_matches_brute_force() {
        for order in 1..=10u64 {
            let brute: Vec<Rational> = {
                let mut v: Vec<Rational> = (0..=order)
                    .flat_map(|p| (1..=order).map(move |q| Rational::new(p as i64, q as i64).unwrap()))
                    .filter(|r| r.is_proper())
                    .collect();
                v.sort();
                v.dedup();
                v
            };
            assert_eq!(farey_sequence(order), brute, "order {order}");
        }
    }

    #[test]
    fn graphic_points_examples() {
        let v = StepVectors::standard();
        let u = FiniteWord::from_digits("01").unwrap();
        assert_eq!(graphic_points(&u, &v).unwrap().points(), &[(0, 0), (1, -1), (2, 0)]);

        let u = FiniteWord::from_digits("0001").unwrap();
        let ys: Vec<i64> = graphic_points(&u, &v).unwrap().points()[1..]
            .iter()
            .map(|p| p.1)
            .collect();
        assert_eq!(ys, vec![-1, -2, -3, -2]);

        let p = named_word("paperfolding").unwrap().prefix(32);
        assert_eq!(graphic_points(&p, &v).unwrap().last(), (32, -2));
    }

    #[test]
    fn discrepancy_examples() {
        let u = FiniteWord::from_digits("01").unwrap();
        let mut w = periodic_stream(&u).unwrap();
        let d = DiscrepancyProfile::from_stream(&mut w, rat("1/2"), 8).unwrap();
        assert_eq!(&d.values()[..5], &[0, -1, 0, -1, 0]);

        let mut pf = named_word("paperfolding").unwrap();
        let d = DiscrepancyProfile::from_stream(&mut pf, rat("1/2"), 16).unwrap();
        assert_eq!(d.value(15), -1);

        let m = Morphism::from_images(&["0001", "1011"]).unwrap();
        let mut w = crate::words::fixed_point_stream(&m, 0).unwrap();
        let d = DiscrepancyProfile::from_stream(&mut w, rat("1/2"), 16).unwrap();
        assert_eq!(d.value(16), -4);
    }

    #[test]
    fn line_hits_examples() {
        let u = FiniteWord::from_digits("01").unwrap();
        let mut w = periodic_stream(&u).unwrap();
        let d = DiscrepancyProfile::from_stream(&mut w, rat("1/2"), 100).unwrap();
        let hits = line_hits(&d, 0);
        assert_eq!(hits.positions[..5], [2, 4, 6, 8, 10]);
        assert_eq!(hits.max_gap, 2);

        let mut pf = named_word("paperfolding").unwrap();
        let d = DiscrepancyProfile::from_stream(&mut pf, rat("1/2"), 300).unwrap();
        let hits = line_hits(&d, -1);
        for n in [1u64, 3, 15, 63, 255] {
            assert!(hits.positions.contains(&n), "missing hit {n}");
        }
    }

    #[test]
    fn width_examples() {
        let u = FiniteWord::from_digits("01").unwrap();
        let mut w = periodic_stream(&u).unwrap();
        let d = DiscrepancyProfile::from_stream(&mut w, rat("1/2"), 1000).unwrap();
        let we = width(&d);
        assert_eq!((we.min, we.max), (-1, 0));

        let mut w = named_word("prop12").unwrap();
        let d = DiscrepancyProfile::from_stream(&mut w, rat("1/2"), 10_000).unwrap();
        let we = width(&d);
        assert_eq!((we.min, we.max), (-1, 2));

        let mut pf = named_word("paperfolding").unwrap();
        let d = DiscrepancyProfile::from_stream(&mut pf, rat("1/2"), 21).unwrap();
        assert_eq!(d.min(), -5);
        assert_eq!(d.value(21), -5);
    }

    #[test]
    fn streaming_matches_batch() {
        let mut pf = named_word("paperfolding").unwrap();
        let streamed = DiscrepancyProfile::from_stream(&mut pf, rat("1/3"), 500).unwrap();
        let word = named_word("paperfolding").unwrap().prefix(500);
        let batch = DiscrepancyProfile::from_word(&word, rat("1/3")).unwrap();
        assert_eq!(streamed.values(), batch.values());

        let mut sampled = Vec::new();
        let mut pf = named_word("paperfolding").unwrap();
        fold_discrepancy(&mut pf, 0, rat("1/3"), 500, |n, d| sampled.push((n, d))).unwrap();
        for (n, d) in sampled {
            assert_eq!(batch.value(n as usize), d);
        }
    }

    #[test]
    fn vector_slope_equivalence_spot_check() {
        // g with v0 = (1,-b), v1 = (1,c) equals D for slope c/(b+c), scaled
        // by (b+c)/q'. Checked exhaustively in the property suite.
        let u = named_word("thue_morse").unwrap().prefix(64);
        for (b, c) in [(1u64, 1u64), (2, 4), (3, 5)] {
            let slope = Rational::new(c as i64, (b + c) as i64).unwrap();
            let qp = slope.denominator();
            let path = graphic_points(&u, &StepVectors::canonical(b, c)).unwrap();
            let d = DiscrepancyProfile::from_word(&u, slope).unwrap();
            for n in 0..=u.len() {
                assert_eq!(
                    path.points()[n].1 * qp,
                    d.value(n) * (b + c) as i64,
                    "b={b} c={c} n={n}"
                );
            }
        }
    }

    #[test]
    fn csv_export_is_exact() {
        let u = FiniteWord::from_digits("0110").unwrap();
        let path = graphic_points(&u, &StepVectors::standard()).unwrap();
        assert_eq!(path_to_csv(&path), "n,y\n0,0\n1,-1\n2,0\n3,1\n4,0\n");
    }
}
