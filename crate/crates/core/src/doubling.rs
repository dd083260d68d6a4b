//! The amalgamated double `G *_H G'` of a free group along a subgroup.
//!
//! Both factors are copies of `F_k` and share the finitely generated subgroup
//! `H`. Every element has a unique normal form
//! `a_1 b_1' a_2 b_2' ... a_n b_n' h` in which each syllable is a canonical
//! left-coset representative of its factor modulo `H` and `h ∈ H`. The swap
//! automorphism `φ` exchanges the two factors and fixes `H` pointwise; its
//! fixed subgroup is exactly `H`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::freegroups::{stallings_graph, GraphError, Letter, SubgroupGraph, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DoubleError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("syllable {0:?} must look like u:word or p:word")]
    BadSyllable(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Unprimed,
    Primed,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Unprimed => Side::Primed,
            Side::Primed => Side::Unprimed,
        }
    }

    fn tag(self) -> char {
        match self {
            Side::Unprimed => 'u',
            Side::Primed => 'p',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub side: Side,
    pub word: Word,
}

impl Syllable {
    pub fn new(side: Side, word: Word) -> Self {
        Syllable { side, word }
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.side.tag(), self.word)
    }
}

impl FromStr for Syllable {
    type Err = DoubleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DoubleError::BadSyllable(s.to_string());
        let (tag, body) = s.split_once(':').ok_or_else(bad)?;
        let side = match tag {
            "u" => Side::Unprimed,
            "p" => Side::Primed,
            _ => return Err(bad()),
        };
        Ok(Syllable::new(side, body.parse()?))
    }
}

/// A product of syllables, not necessarily alternating or reduced.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DoubleWord(Vec<Syllable>);

impl DoubleWord {
    pub fn identity() -> Self {
        DoubleWord(Vec::new())
    }

    pub fn from_syllables(s: Vec<Syllable>) -> Self {
        DoubleWord(s)
    }

    pub fn single(side: Side, word: Word) -> Self {
        DoubleWord(vec![Syllable::new(side, word)])
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &DoubleWord) -> DoubleWord {
        DoubleWord(self.0.iter().chain(&other.0).cloned().collect())
    }

    pub fn inverse(&self) -> DoubleWord {
        DoubleWord(
            self.0
                .iter()
                .rev()
                .map(|s| Syllable::new(s.side, s.word.inverse()))
                .collect(),
        )
    }

    pub fn check_rank(&self, rank: usize) -> Result<(), WordError> {
        self.0.iter().try_for_each(|s| s.word.check_rank(rank))
    }
}

impl fmt::Display for DoubleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(Syllable::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for DoubleWord {
    type Err = DoubleError;

    /// Whitespace-separated syllables such as `u:abA p:bb u:a`; `1` or the
    /// empty string is the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "1" {
            return Ok(DoubleWord::identity());
        }
        s.split_whitespace().map(str::parse).collect::<Result<_, _>>().map(DoubleWord)
    }
}

/// Alternating non-trivial coset representatives followed by a tail in `H`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalForm {
    syllables: Vec<Syllable>,
    tail: Word,
}

impl NormalForm {
    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn syllable_count(&self) -> usize {
        self.syllables.len()
    }

    pub fn tail(&self) -> &Word {
        &self.tail
    }

    /// The normal form as pairs `(a_i, b_i)`; only `a_1` and `b_n` may be
    /// empty.
    pub fn pairs(&self) -> Vec<(Word, Word)> {
        let mut out = Vec::new();
        let mut it = self.syllables.iter().peekable();
        while it.peek().is_some() {
            let a = match it.peek() {
                Some(s) if s.side == Side::Unprimed => it.next().map(|s| s.word.clone()),
                _ => None,
            };
            let b = match it.peek() {
                Some(s) if s.side == Side::Primed => it.next().map(|s| s.word.clone()),
                _ => None,
            };
            out.push((a.unwrap_or_default(), b.unwrap_or_default()));
        }
        out
    }

    /// Exchanges the sides of all syllables.
    pub fn flipped(&self) -> NormalForm {
        NormalForm {
            syllables: self
                .syllables
                .iter()
                .map(|s| Syllable::new(s.side.flip(), s.word.clone()))
                .collect(),
            tail: self.tail.clone(),
        }
    }

    pub fn to_double_word(&self) -> DoubleWord {
        let mut s = self.syllables.clone();
        if !self.tail.is_empty() {
            s.push(Syllable::new(Side::Unprimed, self.tail.clone()));
        }
        DoubleWord(s)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.syllables {
            write!(f, "{s} ")?;
        }
        write!(f, "h:{}", self.tail)
    }
}

/// `F_k *_H F_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Double {
    subgroup: SubgroupGraph,
}

impl Double {
    pub fn new(rank: usize, h_gens: &[Word]) -> Result<Self, DoubleError> {
        Ok(Double {
            subgroup: stallings_graph(rank, h_gens)?,
        })
    }

    pub fn from_graph(subgroup: SubgroupGraph) -> Self {
        Double { subgroup }
    }

    pub fn rank(&self) -> usize {
        self.subgroup.ambient_rank()
    }

    pub fn subgroup(&self) -> &SubgroupGraph {
        &self.subgroup
    }

    /// Rewrites `w` left to right, carrying the `H`-part of each syllable
    /// rightward into the next one and finally into the tail.
    pub fn normal_form(&self, w: &DoubleWord) -> NormalForm {
        let mut stack: Vec<Syllable> = Vec::new();
        let mut carry = Word::empty();
        for s in &w.0 {
            let mut x = carry.times(&s.word);
            if stack.last().map(|t| t.side) == Some(s.side) {
                let top = stack.pop().expect("non-empty stack");
                x = top.word.times(&x);
            }
            let rep = self.subgroup.left_coset_representative(&x);
            if rep.is_empty() {
                carry = x;
            } else {
                carry = rep.inverse().times(&x);
                stack.push(Syllable::new(s.side, rep));
            }
        }
        NormalForm {
            syllables: stack,
            tail: carry,
        }
    }

    /// The swap automorphism `φ`.
    pub fn swap(&self, w: &DoubleWord) -> DoubleWord {
        DoubleWord(
            w.0.iter()
                .map(|s| Syllable::new(s.side.flip(), s.word.clone()))
                .collect(),
        )
    }

    /// Whether `φ(w) = w` as group elements.
    pub fn is_fixed(&self, w: &DoubleWord) -> bool {
        self.normal_form(w) == self.normal_form(&self.swap(w))
    }

    /// Whether `w` is an element of the amalgamated subgroup.
    pub fn in_subgroup(&self, w: &DoubleWord) -> bool {
        self.normal_form(w).syllable_count() == 0
    }

    pub fn multiply(&self, a: &DoubleWord, b: &DoubleWord) -> NormalForm {
        self.normal_form(&a.concat(b))
    }

    pub fn equal(&self, a: &DoubleWord, b: &DoubleWord) -> bool {
        self.normal_form(a) == self.normal_form(b)
    }
}

/// Outcome of one fixed-subgroup sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixSample {
    pub word: DoubleWord,
    pub fixed: bool,
    pub syllable_free: bool,
}

impl FixSample {
    pub fn agrees(&self) -> bool {
        self.fixed == self.syllable_free
    }
}

pub fn random_word<R: Rng + ?Sized>(rng: &mut R, rank: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let mut w = Word::empty();
    while w.len() < len {
        let l = Letter::new(rng.gen_range(0..rank), rng.gen());
        w = w.times(&Word::from_letters(vec![l]));
    }
    w
}

/// Random product of the given generators and their inverses.
pub fn random_subgroup_element<R: Rng + ?Sized>(rng: &mut R, gens: &[Word], factors: usize) -> Word {
    let mut h = Word::empty();
    if gens.is_empty() {
        return h;
    }
    for _ in 0..rng.gen_range(0..=factors) {
        let g = gens.choose(rng).expect("non-empty");
        h = if rng.gen() { h.times(g) } else { h.times(&g.inverse()) };
    }
    h
}

fn split_across_sides<R: Rng + ?Sized>(rng: &mut R, w: &Word, pieces: usize) -> DoubleWord {
    let letters = w.letters();
    let mut cuts: Vec<usize> = (0..pieces.saturating_sub(1))
        .map(|_| rng.gen_range(0..=letters.len()))
        .collect();
    cuts.push(0);
    cuts.push(letters.len());
    cuts.sort_unstable();
    let mut side = if rng.gen() { Side::Unprimed } else { Side::Primed };
    let mut out = Vec::new();
    for win in cuts.windows(2) {
        out.push(Syllable::new(side, Word::from_letters(letters[win[0]..win[1]].to_vec())));
        side = side.flip();
    }
    DoubleWord(out)
}

/// Random double word for property sampling.
///
/// Mixes three shapes: arbitrary alternating products, elements of `H`
/// written with `H`-generators distributed over both sides, and `H`-elements
/// perturbed by one short word.
pub fn random_double_word<R: Rng + ?Sized>(
    rng: &mut R,
    rank: usize,
    h_gens: &[Word],
    max_syllables: usize,
    max_len: usize,
) -> DoubleWord {
    match rng.gen_range(0..3) {
        0 => {
            let n = rng.gen_range(0..=max_syllables);
            let mut side = if rng.gen() { Side::Unprimed } else { Side::Primed };
            let mut out = Vec::with_capacity(n);
            for _ in 0..n {
                out.push(Syllable::new(side, random_word(rng, rank, max_len)));
                if rng.gen_bool(0.8) {
                    side = side.flip();
                }
            }
            DoubleWord(out)
        }
        1 => {
            let mut out = Vec::new();
            for _ in 0..rng.gen_range(1..=max_syllables.max(1)) {
                let side = if rng.gen() { Side::Unprimed } else { Side::Primed };
                out.push(Syllable::new(side, random_subgroup_element(rng, h_gens, 2)));
            }
            DoubleWord(out)
        }
        _ => {
            let h = random_subgroup_element(rng, h_gens, 3);
            let pieces = rng.gen_range(1..=max_syllables.max(1));
            let mut w = split_across_sides(rng, &h, pieces);
            let side = if rng.gen() { Side::Unprimed } else { Side::Primed };
            let at = rng.gen_range(0..=w.len());
            w.0.insert(at, Syllable::new(side, random_word(rng, rank, 2)));
            w
        }
    }
}

/// Runs the fixed-subgroup check on one word.
pub fn fix_sample(d: &Double, w: DoubleWord) -> FixSample {
    FixSample {
        fixed: d.is_fixed(&w),
        syllable_free: d.in_subgroup(&w),
        word: w,
    }
}
