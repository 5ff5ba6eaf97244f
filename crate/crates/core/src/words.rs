//! Letters over an involutive alphabet, linear and cyclic words, free
//! reduction, cyclic factors and square-freeness.
//!
//! A letter is a nonzero signed integer: `b` is the positive letter with base
//! `b`, `-b` its inverse. Words print as space separated signed integers
//! (`1 2 -1 -2`), the empty word as the empty string.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid letter token `{0}` (expected a nonzero signed integer)")]
    BadToken(String),
    #[error("factor length must be at least 1")]
    ZeroFactorLength,
}

/// A signed letter. The base is the absolute value, the sign says whether
/// this is the letter or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i32", into = "i32")]
pub struct Letter(i32);

impl Letter {
    pub fn new(base: u32, positive: bool) -> Letter {
        assert!(base >= 1 && base <= i32::MAX as u32, "letter base out of range");
        let b = base as i32;
        Letter(if positive { b } else { -b })
    }

    pub fn from_signed(value: i32) -> Option<Letter> {
        if value == 0 || value == i32::MIN {
            None
        } else {
            Some(Letter(value))
        }
    }

    #[inline]
    pub fn base(self) -> u32 {
        self.0.unsigned_abs()
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    #[inline]
    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    #[inline]
    pub fn signed(self) -> i32 {
        self.0
    }

    #[inline]
    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.0 == -other.0
    }
}

impl TryFrom<i32> for Letter {
    type Error = WordError;

    fn try_from(value: i32) -> Result<Self, Self::Error> {
        Letter::from_signed(value).ok_or_else(|| WordError::BadToken(value.to_string()))
    }
}

impl From<Letter> for i32 {
    fn from(l: Letter) -> i32 {
        l.0
    }
}

/// Base ascending, then the positive letter before its inverse.
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.base(), self.0 < 0).cmp(&(other.base(), other.0 < 0))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite, possibly unreduced, sequence of letters.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    /// Panics on a zero entry; meant for literals in code and tests.
    pub fn from_signed(values: &[i32]) -> Word {
        Word(
            values
                .iter()
                .map(|&v| Letter::from_signed(v).expect("zero is not a letter"))
                .collect(),
        )
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Letter> {
        self.0.iter()
    }

    pub fn to_signed(&self) -> Vec<i32> {
        self.0.iter().map(|l| l.signed()).collect()
    }

    /// Reverses the word and inverts every letter.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// The rotation starting at position `offset` (taken modulo the length).
    pub fn rotated(&self, offset: usize) -> Word {
        if self.0.is_empty() {
            return Word::empty();
        }
        let k = offset % self.0.len();
        let mut letters = Vec::with_capacity(self.0.len());
        letters.extend_from_slice(&self.0[k..]);
        letters.extend_from_slice(&self.0[..k]);
        Word(letters)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| !p[0].is_inverse_of(p[1]))
    }

    /// Exponent sum per base, sorted by base.
    pub fn exponent_sums(&self) -> Vec<(u32, i64)> {
        let mut sums = std::collections::BTreeMap::<u32, i64>::new();
        for l in &self.0 {
            *sums.entry(l.base()).or_default() += if l.is_positive() { 1 } else { -1 };
        }
        sums.into_iter().collect()
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Word {
        Word(letters)
    }
}

impl std::ops::Index<usize> for Word {
    type Output = Letter;

    fn index(&self, i: usize) -> &Letter {
        &self.0[i]
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Letter;
    type IntoIter = std::slice::Iter<'a, Letter>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Accepts any ASCII whitespace between tokens.
    fn from_str(s: &str) -> Result<Word, WordError> {
        s.split_ascii_whitespace()
            .map(|tok| {
                tok.parse::<i32>()
                    .ok()
                    .and_then(Letter::from_signed)
                    .ok_or_else(|| WordError::BadToken(tok.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// A word up to rotation, stored as its least rotation.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Word", into = "Word")]
pub struct CyclicWord(Word);

impl CyclicWord {
    pub fn new(word: Word) -> CyclicWord {
        let k = least_rotation(word.letters());
        CyclicWord(word.rotated(k))
    }

    pub fn from_signed(values: &[i32]) -> CyclicWord {
        CyclicWord::new(Word::from_signed(values))
    }

    /// The stored representative (the least rotation).
    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn letters(&self) -> &[Letter] {
        self.0.letters()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.0.len().max(1)).map(move |k| self.0.rotated(k))
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord::new(self.0.inverse())
    }
}

impl From<Word> for CyclicWord {
    fn from(w: Word) -> CyclicWord {
        CyclicWord::new(w)
    }
}

impl From<CyclicWord> for Word {
    fn from(c: CyclicWord) -> Word {
        c.0
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]~", self.0)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for CyclicWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<CyclicWord, WordError> {
        s.parse::<Word>().map(CyclicWord::new)
    }
}

/// Start index of the lexicographically least rotation (two-pointer
/// minimum-expression scan, linear time).
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n < 2 {
        return 0;
    }
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        match s[(i + k) % n].cmp(&s[(j + k) % n]) {
            Ordering::Equal => k += 1,
            Ordering::Greater => {
                i += k + 1;
                if i == j {
                    i += 1;
                }
                k = 0;
            }
            Ordering::Less => {
                j += k + 1;
                if i == j {
                    j += 1;
                }
                k = 0;
            }
        }
    }
    i.min(j)
}

pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last().is_some_and(|&top| top.is_inverse_of(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

/// Reduced, and the last letter does not cancel against the first.
pub fn is_cyclically_reduced(w: &Word) -> bool {
    let l = w.letters();
    match (l.first(), l.last()) {
        (Some(&first), Some(&last)) => w.is_reduced() && (l.len() == 1 || !last.is_inverse_of(first)),
        _ => true,
    }
}

/// The length-`k` factors read cyclically, one per start position.
pub fn cyclic_factors(w: &CyclicWord, k: usize) -> Result<Vec<Word>, WordError> {
    if k == 0 {
        return Err(WordError::ZeroFactorLength);
    }
    let l = w.letters();
    let n = l.len();
    Ok((0..n)
        .map(|start| Word((0..k).map(|t| l[(start + t) % n]).collect()))
        .collect())
}

/// Square-freeness of `w`. With `cyclic` set, every rotation of `w` must be
/// square-free.
pub fn square_free_status(w: &Word, cyclic: bool) -> bool {
    let l = w.letters();
    if cyclic {
        let n = l.len();
        let doubled: Vec<Letter> = l.iter().chain(l.iter()).copied().collect();
        // Every window of length <= n in the doubled word is a prefix of
        // some rotation.
        first_square(&doubled, n / 2).is_none()
    } else {
        first_square(l, l.len() / 2).is_none()
    }
}

/// Quadratic run-length scan; returns `(start, half_length)` of a square
/// `uu` with `|u| <= max_half`.
pub(crate) fn first_square<T: PartialEq>(s: &[T], max_half: usize) -> Option<(usize, usize)> {
    for half in 1..=max_half {
        let mut run = 0usize;
        for i in 0..s.len().saturating_sub(half) {
            if s[i] == s[i + half] {
                run += 1;
                if run >= half {
                    return Some((i + 1 - half, half));
                }
            } else {
                run = 0;
            }
        }
    }
    None
}

/// Prefix of length `n` of the fixed point of `1 -> 123, 2 -> 13, 3 -> 2`.
pub fn thue_word(n: usize) -> Word {
    let mut seq: Vec<u8> = vec![1];
    // Each image of the current prefix extends it, since 1 -> 123 starts with 1.
    while seq.len() < n {
        let mut next = Vec::with_capacity(seq.len() * 2 + 3);
        for &c in &seq {
            match c {
                1 => next.extend_from_slice(&[1, 2, 3]),
                2 => next.extend_from_slice(&[1, 3]),
                _ => next.push(2),
            }
        }
        seq = next;
    }
    seq.truncate(n);
    Word(seq.into_iter().map(|c| Letter::new(c as u32, true)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i32]) -> Word {
        Word::from_signed(v)
    }

    #[test]
    fn free_reduce_examples() {
        assert_eq!(free_reduce(&w(&[1, -1])), Word::empty());
        assert_eq!(free_reduce(&w(&[1, 2, -2, -1, 3])), w(&[3]));
        assert_eq!(free_reduce(&w(&[1, 2, 3])), w(&[1, 2, 3]));
    }

    #[test]
    fn cyclically_reduced_examples() {
        assert!(is_cyclically_reduced(&w(&[1, 2, -1, -2])));
        assert!(!is_cyclically_reduced(&w(&[1, 2, -1])));
        assert!(is_cyclically_reduced(&Word::empty()));
        assert!(is_cyclically_reduced(&w(&[5])));
    }

    #[test]
    fn cyclic_factor_examples() {
        let c = CyclicWord::from_signed(&[1, 2, -1, -2]);
        let mut got = cyclic_factors(&c, 2).unwrap();
        got.sort();
        let mut want = vec![w(&[1, 2]), w(&[2, -1]), w(&[-1, -2]), w(&[-2, 1])];
        want.sort();
        assert_eq!(got, want);

        let one = CyclicWord::from_signed(&[1]);
        assert_eq!(cyclic_factors(&one, 3).unwrap(), vec![w(&[1, 1, 1])]);
        assert!(cyclic_factors(&CyclicWord::default(), 2).unwrap().is_empty());
        assert_eq!(cyclic_factors(&one, 0), Err(WordError::ZeroFactorLength));
    }

    #[test]
    fn square_free_examples() {
        assert!(square_free_status(&w(&[1, 2, 1]), false));
        assert!(!square_free_status(&w(&[1, 2, 3, 1, 2, 3]), false));
        assert!(!square_free_status(&w(&[1, 2, 1]), true));
        assert!(square_free_status(&Word::empty(), true));
        assert!(square_free_status(&w(&[1, 2, 3]), true));
    }

    #[test]
    fn thue_prefixes() {
        assert_eq!(thue_word(0), Word::empty());
        assert_eq!(thue_word(5), w(&[1, 2, 3, 1, 3]));
        assert_eq!(thue_word(1), w(&[1]));
    }

    #[test]
    fn least_rotation_picks_minimum() {
        let c = CyclicWord::from_signed(&[-2, 1, 2, -1]);
        assert_eq!(c.word(), &w(&[1, 2, -1, -2]));
        // Positive before negative of the same base.
        let c = CyclicWord::from_signed(&[-1, 1, 1]);
        assert_eq!(c.word(), &w(&[1, 1, -1]));
        let c = CyclicWord::from_signed(&[2, 2, 2]);
        assert_eq!(c.word(), &w(&[2, 2, 2]));
    }

    #[test]
    fn token_format() {
        let word: Word = "1 2 -1 -2".parse().unwrap();
        assert_eq!(word, w(&[1, 2, -1, -2]));
        assert_eq!(word.to_string(), "1 2 -1 -2");
        assert_eq!("".parse::<Word>().unwrap(), Word::empty());
        assert_eq!(Word::empty().to_string(), "");
        assert!(matches!("1 0".parse::<Word>(), Err(WordError::BadToken(_))));
        assert!(matches!("1 x".parse::<Word>(), Err(WordError::BadToken(_))));
    }

    #[test]
    fn letter_order_and_inverse() {
        let a = Letter::new(3, true);
        assert_eq!(a.inverse().inverse(), a);
        assert_ne!(a.inverse(), a);
        assert_eq!(a.inverse().base(), 3);
        assert!(Letter::new(1, false) < Letter::new(2, true));
        assert!(Letter::new(2, true) < Letter::new(2, false));
    }
}
