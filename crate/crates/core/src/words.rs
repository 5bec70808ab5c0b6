//! Finite and infinite words: morphisms and their fixed points, Toeplitz
//! words, periodic and block-built words, and letter unification.
//!
//! Positions are 1-based throughout, matching the usual `w = w1 w2 ...`
//! indexing. Infinite words are exposed as [`WordStream`]s: deterministic,
//! single-consumer letter sources. Two streams built from the same
//! specification always yield identical prefixes.

use std::fmt;

use crate::error::{Error, Result};

/// A letter is a small index into an alphabet of size `sigma` (at most 3
/// here: `0`, `1`, `2`).
pub type Letter = u8;

const MAX_SIGMA: u8 = 3;

// ---------------------------------------------------------------------------
// Finite words and Parikh vectors
// ---------------------------------------------------------------------------

/// A finite word over the alphabet `{0, .., sigma-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteWord {
    letters: Vec<Letter>,
    sigma: u8,
}

impl FiniteWord {
    pub fn new(letters: Vec<Letter>, sigma: u8) -> Result<Self> {
        if sigma == 0 || sigma > MAX_SIGMA {
            return Err(Error::Input(format!("alphabet size {sigma} unsupported")));
        }
        if let Some(&bad) = letters.iter().find(|&&c| c >= sigma) {
            return Err(Error::Input(format!(
                "letter {bad} outside alphabet of size {sigma}"
            )));
        }
        Ok(FiniteWord { letters, sigma })
    }

    pub fn empty(sigma: u8) -> Self {
        FiniteWord { letters: Vec::new(), sigma }
    }

    /// Parses a digit string like `"0110"`. The alphabet size is the larger
    /// of 2 and the largest digit plus one.
    pub fn from_digits(s: &str) -> Result<Self> {
        let mut letters = Vec::with_capacity(s.len());
        let mut sigma = 2u8;
        for ch in s.chars() {
            let d = ch
                .to_digit(10)
                .filter(|&d| d < MAX_SIGMA as u32)
                .ok_or_else(|| Error::Input(format!("bad letter {ch:?} in word")))?
                as u8;
            sigma = sigma.max(d + 1);
            letters.push(d);
        }
        Ok(FiniteWord { letters, sigma })
    }

    pub fn from_digits_with_sigma(s: &str, sigma: u8) -> Result<Self> {
        let w = Self::from_digits(s)?;
        if w.sigma > sigma {
            return Err(Error::Input(format!(
                "word {s:?} does not fit in alphabet of size {sigma}"
            )));
        }
        FiniteWord::new(w.letters, sigma)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn alphabet_size(&self) -> u8 {
        self.sigma
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Occurrences of `letter` in the word.
    pub fn count(&self, letter: Letter) -> u64 {
        self.letters.iter().filter(|&&c| c == letter).count() as u64
    }

    /// The factor `w[from..=to]` in 1-based inclusive indexing.
    pub fn factor(&self, from: usize, to: usize) -> FiniteWord {
        FiniteWord {
            letters: self.letters[from - 1..to].to_vec(),
            sigma: self.sigma,
        }
    }

    pub fn parikh(&self) -> ParikhVector {
        let mut counts = vec![0u64; self.sigma as usize];
        for &c in &self.letters {
            counts[c as usize] += 1;
        }
        ParikhVector(counts)
    }

    /// The image of the word under the letter unification `b -> a`
    /// (every other letter is kept). Length is preserved.
    pub fn unify(&self, a: Letter, b: Letter) -> Result<FiniteWord> {
        check_unify(a, b, self.sigma)?;
        let letters = self
            .letters
            .iter()
            .map(|&c| if c == b { a } else { c })
            .collect();
        Ok(FiniteWord { letters, sigma: self.sigma })
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.letters {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// Per-letter occurrence counts of a finite word.
///
/// Two words are abelian equivalent exactly when their Parikh vectors are
/// equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParikhVector(pub Vec<u64>);

impl ParikhVector {
    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

/// The Parikh vector of `u`.
pub fn parikh(u: &FiniteWord) -> ParikhVector {
    u.parikh()
}

/// Whether `u` and `v` contain every letter equally often.
pub fn abelian_equivalent(u: &FiniteWord, v: &FiniteWord) -> bool {
    u.alphabet_size() == v.alphabet_size() && u.parikh() == v.parikh()
}

fn check_unify(a: Letter, b: Letter, sigma: u8) -> Result<()> {
    if a == b {
        return Err(Error::Input("unification requires two distinct letters".into()));
    }
    if a >= sigma || b >= sigma {
        return Err(Error::Input(format!(
            "letters {a}, {b} outside alphabet of size {sigma}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Morphisms
// ---------------------------------------------------------------------------

/// A morphism given by one non-empty image per letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    images: Vec<FiniteWord>,
    sigma: u8,
}

impl Morphism {
    pub fn new(images: Vec<FiniteWord>) -> Result<Self> {
        let sigma = images.len() as u8;
        if sigma == 0 || sigma > MAX_SIGMA {
            return Err(Error::Input(format!("{sigma} images unsupported")));
        }
        for (i, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::Input(format!("image of {i} is empty")));
            }
            if let Some(&bad) = img.letters().iter().find(|&&c| c >= sigma) {
                return Err(Error::Input(format!(
                    "image of {i} uses letter {bad} outside alphabet of size {sigma}"
                )));
            }
        }
        let images = images
            .into_iter()
            .map(|w| FiniteWord { letters: w.letters, sigma })
            .collect();
        Ok(Morphism { images, sigma })
    }

    /// Builds a morphism from digit strings, one image per letter.
    pub fn from_images(images: &[&str]) -> Result<Self> {
        let words = images
            .iter()
            .map(|s| FiniteWord::from_digits_with_sigma(s, images.len() as u8))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(words)
    }

    pub fn alphabet_size(&self) -> u8 {
        self.sigma
    }

    pub fn image(&self, letter: Letter) -> &FiniteWord {
        &self.images[letter as usize]
    }

    /// `Some(k)` when every image has the same length `k`.
    pub fn uniform_length(&self) -> Option<usize> {
        let k = self.images[0].len();
        self.images.iter().all(|w| w.len() == k).then_some(k)
    }

    /// Whether the image of `letter` starts with `letter` and is longer
    /// than a single letter, so that iterating the morphism from `letter`
    /// defines an infinite fixed point.
    pub fn is_prolongeable(&self, letter: Letter) -> bool {
        (letter as usize) < self.images.len() && {
            let img = &self.images[letter as usize];
            img.len() >= 2 && img.letters()[0] == letter
        }
    }

    /// Applies the morphism to `u` by concatenating images.
    pub fn apply(&self, u: &FiniteWord) -> Result<FiniteWord> {
        if u.alphabet_size() > self.sigma {
            return Err(Error::Input(format!(
                "word over alphabet of size {} outside morphism domain of size {}",
                u.alphabet_size(),
                self.sigma
            )));
        }
        let total: usize = u.letters().iter().map(|&c| self.images[c as usize].len()).sum();
        let mut out = Vec::with_capacity(total);
        for &c in u.letters() {
            out.extend_from_slice(self.images[c as usize].letters());
        }
        Ok(FiniteWord { letters: out, sigma: self.sigma })
    }

    /// The incidence matrix `m[i][j] = |image(j)|_i`: the Parikh vector of
    /// `apply(u)` is this matrix applied to the Parikh vector of `u`.
    pub fn incidence_matrix(&self) -> Vec<Vec<u64>> {
        let s = self.sigma as usize;
        let mut m = vec![vec![0u64; s]; s];
        for (j, img) in self.images.iter().enumerate() {
            for i in 0..s {
                m[i][j] = img.count(i as u8);
            }
        }
        m
    }

    /// The letter-swapped conjugate of a binary morphism: `0` and `1` are
    /// exchanged both in the images and in their roles. The fixed point of
    /// the conjugate from `0` is the letter-swap of the fixed point of the
    /// original from `1`.
    pub fn swap_letters(&self) -> Result<Morphism> {
        if self.sigma != 2 {
            return Err(Error::Precondition("letter swap is defined for binary morphisms".into()));
        }
        let flip = |w: &FiniteWord| FiniteWord {
            letters: w.letters.iter().map(|&c| 1 - c).collect(),
            sigma: 2,
        };
        Ok(Morphism {
            images: vec![flip(&self.images[1]), flip(&self.images[0])],
            sigma: 2,
        })
    }
}

/// Applies `m` to `u`. Free-function form of [`Morphism::apply`].
pub fn apply_morphism(m: &Morphism, u: &FiniteWord) -> Result<FiniteWord> {
    m.apply(u)
}

// ---------------------------------------------------------------------------
// Word streams
// ---------------------------------------------------------------------------

/// A deterministic letter source. `None` means a finite source ran out;
/// generator-backed sources never return `None`.
pub trait WordSource: Send {
    fn next_letter(&mut self) -> Option<Letter>;
}

/// An on-demand source of the letters of a word, with a 1-based cursor.
///
/// A stream is a single consumer: letters can only be taken in order, and
/// the cursor only advances. Build a fresh stream from the same
/// specification whenever an analysis needs to restart from position 1.
pub struct WordStream {
    source: Box<dyn WordSource>,
    sigma: u8,
    produced: u64,
}

impl WordStream {
    pub fn new(source: Box<dyn WordSource>, sigma: u8) -> Self {
        WordStream { source, sigma, produced: 0 }
    }

    /// A finite stream replaying the given letters (used for `file:` input).
    pub fn from_word(word: FiniteWord) -> Self {
        let sigma = word.alphabet_size();
        WordStream::new(Box::new(BufferSource { letters: word.letters, pos: 0 }), sigma)
    }

    pub fn alphabet_size(&self) -> u8 {
        self.sigma
    }

    /// Number of letters produced so far; the next letter is at position
    /// `position() + 1`.
    pub fn position(&self) -> u64 {
        self.produced
    }

    pub fn next_letter(&mut self) -> Option<Letter> {
        let c = self.source.next_letter();
        if c.is_some() {
            self.produced += 1;
        }
        c
    }

    /// Takes the next `n` letters (fewer when a finite source runs out).
    /// On a fresh stream this is the prefix of the word.
    pub fn prefix(&mut self, n: usize) -> FiniteWord {
        let mut letters = Vec::with_capacity(n);
        for _ in 0..n {
            match self.next_letter() {
                Some(c) => letters.push(c),
                None => break,
            }
        }
        FiniteWord { letters, sigma: self.sigma }
    }

    /// The stream of images under the letter unification `b -> a`.
    pub fn unify(self, a: Letter, b: Letter) -> Result<WordStream> {
        check_unify(a, b, self.sigma)?;
        let sigma = self.sigma;
        Ok(WordStream::new(
            Box::new(UnifySource { inner: self.source, keep: a, merge: b }),
            sigma,
        ))
    }
}

/// The first `n` letters of a fresh stream.
pub fn prefix(w: &mut WordStream, n: usize) -> FiniteWord {
    w.prefix(n)
}

struct BufferSource {
    letters: Vec<Letter>,
    pos: usize,
}

impl WordSource for BufferSource {
    fn next_letter(&mut self) -> Option<Letter> {
        let c = self.letters.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }
}

struct UnifySource {
    inner: Box<dyn WordSource>,
    keep: Letter,
    merge: Letter,
}

impl WordSource for UnifySource {
    fn next_letter(&mut self) -> Option<Letter> {
        self.inner
            .next_letter()
            .map(|c| if c == self.merge { self.keep } else { c })
    }
}

// ---------------------------------------------------------------------------
// Periodic words
// ---------------------------------------------------------------------------

/// The purely periodic word `u u u ...`.
pub fn periodic_stream(u: &FiniteWord) -> Result<WordStream> {
    if u.is_empty() {
        return Err(Error::Input("periodic word needs a non-empty period".into()));
    }
    Ok(WordStream::new(
        Box::new(PeriodicSource { word: u.letters.clone(), pos: 0 }),
        u.alphabet_size(),
    ))
}

struct PeriodicSource {
    word: Vec<Letter>,
    pos: usize,
}

impl WordSource for PeriodicSource {
    fn next_letter(&mut self) -> Option<Letter> {
        let c = self.word[self.pos];
        self.pos += 1;
        if self.pos == self.word.len() {
            self.pos = 0;
        }
        Some(c)
    }
}

// ---------------------------------------------------------------------------
// Morphic fixed points
// ---------------------------------------------------------------------------

/// The fixed point of `m` starting at `start`, generated lazily.
///
/// Writing `m(start) = start . tail`, the fixed point is
/// `start . tail . m(tail) . m^2(tail) . ...`; the generator walks that
/// expansion with an explicit stack of pending images, so memory stays
/// logarithmic in the number of letters produced.
pub fn fixed_point_stream(m: &Morphism, start: Letter) -> Result<WordStream> {
    if !m.is_prolongeable(start) {
        return Err(Error::Precondition(format!(
            "morphism is not prolongeable on {start}: its image must start with {start} and have length at least 2"
        )));
    }
    let images: Vec<Vec<Letter>> = m.images.iter().map(|w| w.letters.clone()).collect();
    let tail = images[start as usize][1..].to_vec();
    Ok(WordStream::new(
        Box::new(FixedPointSource {
            images,
            start,
            tail,
            emitted_start: false,
            depth: 0,
            stack: vec![Frame { letter: None, pos: 0 }],
        }),
        m.sigma,
    ))
}

struct Frame {
    /// `None` marks the phase root (the tail word); otherwise the letter
    /// whose image is being scanned.
    letter: Option<Letter>,
    pos: usize,
}

struct FixedPointSource {
    images: Vec<Vec<Letter>>,
    start: Letter,
    tail: Vec<Letter>,
    emitted_start: bool,
    /// Current phase: the stack is emitting `m^depth(tail)`.
    depth: usize,
    stack: Vec<Frame>,
}

impl WordSource for FixedPointSource {
    fn next_letter(&mut self) -> Option<Letter> {
        if !self.emitted_start {
            self.emitted_start = true;
            return Some(self.start);
        }
        loop {
            if self.stack.is_empty() {
                self.depth += 1;
                self.stack.push(Frame { letter: None, pos: 0 });
            }
            let (letter, pos) = {
                let top = self.stack.last().unwrap();
                (top.letter, top.pos)
            };
            let word: &[Letter] = match letter {
                None => &self.tail,
                Some(c) => &self.images[c as usize],
            };
            if pos >= word.len() {
                self.stack.pop();
                continue;
            }
            let c = word[pos];
            self.stack.last_mut().unwrap().pos += 1;
            if self.stack.len() == self.depth + 1 {
                return Some(c);
            }
            self.stack.push(Frame { letter: Some(c), pos: 0 });
        }
    }
}

// ---------------------------------------------------------------------------
// Toeplitz words
// ---------------------------------------------------------------------------

/// A Toeplitz pattern: letters and holes, starting with a letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToeplitzPattern {
    cells: Vec<Option<Letter>>,
    sigma: u8,
}

impl ToeplitzPattern {
    /// Parses a pattern like `"0?1?"`, with `?` marking holes.
    pub fn parse(s: &str) -> Result<Self> {
        let mut cells = Vec::with_capacity(s.len());
        let mut sigma = 2u8;
        for ch in s.chars() {
            if ch == '?' {
                cells.push(None);
            } else {
                let d = ch
                    .to_digit(10)
                    .filter(|&d| d < MAX_SIGMA as u32)
                    .ok_or_else(|| Error::Input(format!("bad pattern symbol {ch:?}")))? as u8;
                sigma = sigma.max(d + 1);
                cells.push(Some(d));
            }
        }
        match cells.first() {
            Some(Some(_)) => {}
            _ => {
                return Err(Error::Input(
                    "Toeplitz pattern must start with a letter, not a hole".into(),
                ))
            }
        }
        Ok(ToeplitzPattern { cells, sigma })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn hole_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_none()).count()
    }

    pub fn alphabet_size(&self) -> u8 {
        self.sigma
    }
}

/// The Toeplitz word of `pattern`: starting from the pattern repeated
/// forever, the sequence of holes is filled with the word itself, and the
/// limit of that iteration is returned.
///
/// Each filling round is materialized only over the requested prefix. Since
/// the pattern starts with a letter, every round determines a fixed
/// fraction of the remaining holes, so any prefix settles after finitely
/// many rounds.
pub fn toeplitz_stream(pattern: &ToeplitzPattern) -> WordStream {
    let sigma = pattern.sigma;
    WordStream::new(
        Box::new(ToeplitzSource { pattern: pattern.cells.clone(), buf: Vec::new(), pos: 0 }),
        sigma,
    )
}

struct ToeplitzSource {
    pattern: Vec<Option<Letter>>,
    buf: Vec<Letter>,
    pos: usize,
}

impl ToeplitzSource {
    fn ensure(&mut self, n: usize) {
        if self.buf.len() >= n {
            return;
        }
        let target = n.max(self.buf.len() * 2).max(64);
        let p = self.pattern.len();
        let mut prev: Vec<Option<Letter>> = vec![None; target];
        loop {
            let mut cur: Vec<Option<Letter>> = Vec::with_capacity(target);
            let mut hole = 0usize;
            for j in 0..target {
                match self.pattern[j % p] {
                    Some(c) => cur.push(Some(c)),
                    None => {
                        cur.push(prev.get(hole).copied().flatten());
                        hole += 1;
                    }
                }
            }
            let done = cur.iter().all(|c| c.is_some());
            prev = cur;
            if done {
                break;
            }
        }
        self.buf = prev.into_iter().map(|c| c.unwrap()).collect();
    }
}

impl WordSource for ToeplitzSource {
    fn next_letter(&mut self) -> Option<Letter> {
        if self.pos >= self.buf.len() {
            self.ensure(self.pos + 1);
        }
        let c = self.buf[self.pos];
        self.pos += 1;
        Some(c)
    }
}

// ---------------------------------------------------------------------------
// Block-built words
// ---------------------------------------------------------------------------

/// Generator for a sequence of block exponents, all of them at least 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExponentGen {
    Constant(u64),
    /// `start, start + step, start + 2*step, ...`
    Arithmetic { start: u64, step: u64 },
    /// `start, start * ratio, start * ratio^2, ...`
    Geometric { start: u64, ratio: u64 },
    /// The declared initial terms, then each value is the sum of the two
    /// values before it.
    Recurrence { initial: Vec<u64> },
}

impl ExponentGen {
    fn validate(&self) -> Result<()> {
        let ok = match self {
            ExponentGen::Constant(c) => *c >= 1,
            ExponentGen::Arithmetic { start, .. } => *start >= 1,
            ExponentGen::Geometric { start, ratio } => *start >= 1 && *ratio >= 1,
            ExponentGen::Recurrence { initial } => {
                initial.len() >= 2 && initial.iter().all(|&v| v >= 1)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Input("exponent generator would yield a zero exponent".into()))
        }
    }

    fn iter(&self) -> ExponentIter {
        ExponentIter { gen: self.clone(), index: 0, last_two: (0, 0) }
    }

    /// The exponent values, as an endless iterator.
    pub fn values(&self) -> impl Iterator<Item = u64> {
        let mut it = self.iter();
        std::iter::from_fn(move || Some(it.next_value()))
    }
}

struct ExponentIter {
    gen: ExponentGen,
    index: usize,
    last_two: (u64, u64),
}

impl ExponentIter {
    fn next_value(&mut self) -> u64 {
        let v = match &self.gen {
            ExponentGen::Constant(c) => *c,
            ExponentGen::Arithmetic { start, step } => start + step * self.index as u64,
            ExponentGen::Geometric { start, ratio } => {
                let mut v = *start;
                for _ in 0..self.index {
                    v *= ratio;
                }
                v
            }
            ExponentGen::Recurrence { initial } => {
                if self.index < initial.len() {
                    initial[self.index]
                } else {
                    self.last_two.0 + self.last_two.1
                }
            }
        };
        self.last_two = (self.last_two.1, v);
        self.index += 1;
        v
    }
}

/// How one block item draws its exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ItemExponent {
    /// Always repeat this many times.
    Fixed(u64),
    /// Take the next value of the spec's shared exponent sequence.
    Next,
}

/// One entry of a [`BlockSpec`] cycle: a word and its exponent rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockItem {
    pub word: FiniteWord,
    pub exponent: ItemExponent,
}

/// A word built as `block1 block2 ...` where the items cycle and
/// `block = word^exponent`. Items marked [`ItemExponent::Next`] consume a
/// single shared exponent sequence in block order, which lets one sequence
/// drive several interleaved letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSpec {
    items: Vec<BlockItem>,
    exponents: ExponentGen,
    sigma: u8,
}

impl BlockSpec {
    pub fn new(items: Vec<BlockItem>, exponents: ExponentGen) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::Input("block spec needs at least one item".into()));
        }
        let mut sigma = 2u8;
        for item in &items {
            if item.word.is_empty() {
                return Err(Error::Input("block words must be non-empty".into()));
            }
            if let ItemExponent::Fixed(0) = item.exponent {
                return Err(Error::Input("block exponents must be at least 1".into()));
            }
            sigma = sigma.max(item.word.alphabet_size());
        }
        exponents.validate()?;
        Ok(BlockSpec { items, exponents, sigma })
    }

    /// Convenience constructor from digit strings; `None` exponents draw
    /// from the shared sequence.
    pub fn from_parts(parts: &[(&str, Option<u64>)], exponents: ExponentGen) -> Result<Self> {
        let items = parts
            .iter()
            .map(|&(word, fixed)| {
                Ok(BlockItem {
                    word: FiniteWord::from_digits(word)?,
                    exponent: match fixed {
                        Some(e) => ItemExponent::Fixed(e),
                        None => ItemExponent::Next,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        BlockSpec::new(items, exponents)
    }

    pub fn alphabet_size(&self) -> u8 {
        self.sigma
    }
}

/// The infinite concatenation described by `spec`.
pub fn block_word_stream(spec: &BlockSpec) -> Result<WordStream> {
    let items: Vec<(Vec<Letter>, ItemExponent)> = spec
        .items
        .iter()
        .map(|it| (it.word.letters.clone(), it.exponent.clone()))
        .collect();
    Ok(WordStream::new(
        Box::new(BlockSource {
            items,
            exponents: spec.exponents.iter(),
            item_idx: 0,
            word: Vec::new(),
            pos: 0,
            reps_left: 1,
        }),
        spec.sigma,
    ))
}

struct BlockSource {
    items: Vec<(Vec<Letter>, ItemExponent)>,
    exponents: ExponentIter,
    item_idx: usize,
    word: Vec<Letter>,
    pos: usize,
    reps_left: u64,
}

impl WordSource for BlockSource {
    fn next_letter(&mut self) -> Option<Letter> {
        loop {
            if self.pos < self.word.len() {
                let c = self.word[self.pos];
                self.pos += 1;
                return Some(c);
            }
            if self.reps_left > 1 {
                self.reps_left -= 1;
                self.pos = 0;
                continue;
            }
            let (word, exponent) = &self.items[self.item_idx];
            self.item_idx = (self.item_idx + 1) % self.items.len();
            self.reps_left = match exponent {
                ItemExponent::Fixed(e) => *e,
                ItemExponent::Next => self.exponents.next_value(),
            };
            self.word = word.clone();
            self.pos = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// Named words
// ---------------------------------------------------------------------------

/// Names accepted by [`named_word`].
pub const NAMED_WORDS: [&str; 5] = ["paperfolding", "prop12", "prop31", "prop34", "thue_morse"];

/// A fresh stream of one of the built-in example words.
///
/// * `paperfolding` - the Toeplitz word of the pattern `0?1?`.
/// * `thue_morse` - the fixed point of `0 -> 01, 1 -> 10` from `0`.
/// * `prop12` - `(01)^1 1 (10)^2 0 (01)^3 1 (10)^4 0 ...`.
/// * `prop31` - `(01)^1 0 (01)^2 0 (01)^4 0 (01)^8 ...`.
/// * `prop34` - `0^n1 1^n2 2^n3 0^n4 ...` with exponents
///   `1, 1, 1, 1, 2, 4` and then each the sum of the previous two, so that
///   at the end of every block (from the fourth on) the block's letter has
///   occurred in exactly half of the prefix.
pub fn named_word(name: &str) -> Result<WordStream> {
    match name {
        "paperfolding" => Ok(toeplitz_stream(&ToeplitzPattern::parse("0?1?")?)),
        "thue_morse" => fixed_point_stream(&Morphism::from_images(&["01", "10"])?, 0),
        "prop12" => block_word_stream(&BlockSpec::from_parts(
            &[("01", None), ("1", Some(1)), ("10", None), ("0", Some(1))],
            ExponentGen::Arithmetic { start: 1, step: 1 },
        )?),
        "prop31" => block_word_stream(&BlockSpec::from_parts(
            &[("01", None), ("0", Some(1))],
            ExponentGen::Geometric { start: 1, ratio: 2 },
        )?),
        "prop34" => block_word_stream(&prop34_spec()),
        _ => Err(Error::Input(format!(
            "unknown word name {name:?}; expected one of {NAMED_WORDS:?}"
        ))),
    }
}

/// The block spec behind `named:prop34`.
pub fn prop34_spec() -> BlockSpec {
    BlockSpec::from_parts(
        &[("0", None), ("1", None), ("2", None)],
        ExponentGen::Recurrence { initial: vec![1, 1, 1, 1, 2, 4] },
    )
    .expect("static spec is valid")
}

/// The unification `b -> a` of a stream; free-function form of
/// [`WordStream::unify`].
pub fn unify_letters(w: WordStream, a: Letter, b: Letter) -> Result<WordStream> {
    w.unify(a, b)
}
