use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use thiserror::Error;

/// Largest rank representable with single-letter generator names.
pub const MAX_RANK: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid letter {0:?} in word (expected a-z or A-Z)")]
    InvalidLetter(char),
    #[error("generator {letter:?} is outside a free group of rank {rank}")]
    OutOfRank { letter: char, rank: usize },
    #[error("rank {0} is not supported (1..={MAX_RANK})")]
    BadRank(usize),
}

/// A generator or its inverse.
///
/// `gen` is zero-based; `a` is generator 0, `A` its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub const fn gen(gen: usize) -> Self {
        Letter { gen, inverse: false }
    }

    pub const fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    /// Position in the fixed direction order `a, A, b, B, ...`.
    pub const fn direction_index(self) -> usize {
        2 * self.gen + self.inverse as usize
    }

    pub fn from_char(c: char) -> Result<Self, WordError> {
        match c {
            'a'..='z' => Ok(Letter::new(c as usize - 'a' as usize, false)),
            'A'..='Z' => Ok(Letter::new(c as usize - 'A' as usize, true)),
            _ => Err(WordError::InvalidLetter(c)),
        }
    }

    pub fn to_char(self) -> char {
        let base = if self.inverse { b'A' } else { b'a' };
        (base + self.gen as u8) as char
    }
}

/// A word over the letters of a free group.
///
/// Words are not reduced automatically; call [`Word::reduced`] when the
/// group element is what matters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Parses a word and checks every letter against `rank`.
    pub fn parse_in_rank(s: &str, rank: usize) -> Result<Self, WordError> {
        let w: Word = s.parse()?;
        w.check_rank(rank)?;
        Ok(w)
    }

    pub fn check_rank(&self, rank: usize) -> Result<(), WordError> {
        match self.0.iter().find(|l| l.gen >= rank) {
            Some(l) => Err(WordError::OutOfRank {
                letter: l.to_char(),
                rank,
            }),
            None => Ok(()),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Free reduction: cancels every adjacent `x X` pair until none remain.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inv())
    }

    /// Freely and cyclically reduced form (strips conjugating prefix/suffix pairs).
    pub fn cyclically_reduced(&self) -> Word {
        let w = self.reduced().0;
        let mut lo = 0;
        let mut hi = w.len();
        while hi - lo >= 2 && w[lo] == w[hi - 1].inv() {
            lo += 1;
            hi -= 1;
        }
        Word(w[lo..hi].to_vec())
    }

    /// Number of occurrences of a generator, counting both signs.
    pub fn occurrences(&self, gen: usize) -> usize {
        self.0.iter().filter(|l| l.gen == gen).count()
    }

    /// Exponent sum of a generator.
    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.0
            .iter()
            .filter(|l| l.gen == gen)
            .map(|l| if l.inverse { -1 } else { 1 })
            .sum()
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen).max()
    }

    /// Concatenation followed by free reduction.
    pub fn times(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

/// Free reduction as a free function.
pub fn free_reduce(w: &Word) -> Word {
    w.reduced()
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        self.times(rhs)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// `1` and the empty string both denote the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" {
            return Ok(Word::empty());
        }
        s.chars().map(Letter::from_char).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// Parses a comma-separated generator list such as `aa,b,abA`.
pub fn parse_word_list(s: &str, rank: usize) -> Result<Vec<Word>, WordError> {
    if rank == 0 || rank > MAX_RANK {
        return Err(WordError::BadRank(rank));
    }
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| Word::parse_in_rank(t, rank))
        .collect()
}
