//! Exhaustive generation of Wicks forms of a fixed genus, one canonical
//! representative per isomorphism class.
//!
//! Words are built left to right in first-occurrence normal form: a new
//! base is always the smallest unused one and enters with sign `+`, and any
//! open base may be closed by its inverse. Conditions (ii) and (iii) are
//! checked on every new adjacent pair, the cyclic seam and the genus at the
//! leaves. Leaves are canonicalised and deduplicated.

mod catalog;

use std::collections::BTreeSet;
use std::collections::HashSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::surface::orbit_count_dense;
use crate::words::{CyclicWord, Letter, Word};

pub use catalog::{read_catalog, write_catalog, Catalog, CatalogError};

/// Longest word the dense search supports (genus 3 maximal forms).
pub const MAX_LENGTH: usize = 30;
/// Highest genus enumerated without `allow_long`.
pub const MAX_QUICK_GENUS: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("genus must be at least 1")]
    ZeroGenus,
    #[error("genus {0} needs the long-runtime override")]
    NeedsOverride(u32),
    #[error("word length {0} is odd")]
    OddLength(usize),
    #[error("length range {min}..={max} is outside {lo}..={hi} for genus {genus}")]
    RangeOutOfBounds { genus: u32, min: usize, max: usize, lo: usize, hi: usize },
    #[error("length {0} exceeds the supported maximum {MAX_LENGTH}")]
    TooLong(usize),
}

#[derive(Debug, Clone, Default)]
pub struct EnumerateOptions {
    /// Inclusive bounds on word length; defaults to `4g..=12g-6`.
    pub length_range: Option<(usize, usize)>,
    /// Accept genus 3 and above.
    pub allow_long: bool,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

/// Runs `f` on a pool of `workers` threads, or the global pool.
pub(crate) fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match workers {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

pub fn min_length(genus: u32) -> usize {
    4 * genus as usize
}

pub fn max_length(genus: u32) -> usize {
    12 * genus as usize - 6
}

pub fn enumerate_wicks(
    genus: u32,
    maximal_only: bool,
    opts: &EnumerateOptions,
) -> Result<Catalog, EnumerateError> {
    if genus == 0 {
        return Err(EnumerateError::ZeroGenus);
    }
    if genus > MAX_QUICK_GENUS && !opts.allow_long {
        return Err(EnumerateError::NeedsOverride(genus));
    }
    let (lo, hi) = (min_length(genus), max_length(genus));
    let (min, max) = match (maximal_only, opts.length_range) {
        (true, _) => (hi, hi),
        (false, None) => (lo, hi),
        (false, Some((a, b))) => {
            for len in [a, b] {
                if len % 2 == 1 {
                    return Err(EnumerateError::OddLength(len));
                }
            }
            if a < lo || b > hi || a > b {
                return Err(EnumerateError::RangeOutOfBounds { genus, min: a, max: b, lo, hi });
            }
            (a, b)
        }
    };
    if max > MAX_LENGTH {
        return Err(EnumerateError::TooLong(max));
    }
    let mut forms = BTreeSet::new();
    for n in (min..=max).step_by(2) {
        forms.extend(with_workers(opts.workers, || classes_of_length(genus, n)));
    }
    let forms = forms.into_iter().map(|d| CyclicWord::new(dense_to_word(&d))).collect();
    let complete = maximal_only || (min, max) == (lo, hi);
    Ok(Catalog::from_sorted_unchecked(genus, maximal_only, complete, forms))
}

/// Canonical dense words of every class of genus `genus` and length `n`.
fn classes_of_length(genus: u32, n: usize) -> BTreeSet<Vec<u8>> {
    let mut root = Search::new(n, genus);
    let depth = n.min(8);
    let mut prefixes = Vec::new();
    root.collect_prefixes(0, depth, &mut prefixes);
    let sets: Vec<HashSet<Vec<u8>>> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut s = Search::new(n, genus);
            s.replay(prefix);
            s.dfs(prefix.len());
            s.found
        })
        .collect();
    let mut all = BTreeSet::new();
    for set in sets {
        all.extend(set);
    }
    all
}

/// Dense letter index: `2(b-1)` for `+b`, `2(b-1)+1` for `-b`. Numeric
/// order of indices matches the letter order.
pub(crate) fn dense_to_word(d: &[u8]) -> Word {
    Word::new(
        d.iter()
            .map(|&x| Letter::new(x as u32 / 2 + 1, x % 2 == 0))
            .collect(),
    )
}

struct Search {
    n: usize,
    edges: usize,
    genus: u32,
    letters: [u8; MAX_LENGTH],
    pos_of: [u8; MAX_LENGTH],
    /// `pairs[x]` has bit `y` set when `xy` is an adjacent pair so far.
    pairs: [u32; MAX_LENGTH],
    open: u32,
    introduced: usize,
    seen: [bool; MAX_LENGTH],
    canon: Canonicaliser,
    found: HashSet<Vec<u8>>,
}

impl Search {
    fn new(n: usize, genus: u32) -> Search {
        Search {
            n,
            edges: n / 2,
            genus,
            letters: [0; MAX_LENGTH],
            pos_of: [0; MAX_LENGTH],
            pairs: [0; MAX_LENGTH],
            open: 0,
            introduced: 0,
            seen: [false; MAX_LENGTH],
            canon: Canonicaliser::new(n),
            found: HashSet::new(),
        }
    }

    /// Letters admissible at `pos`, in increasing order.
    fn candidates(&self, pos: usize) -> impl Iterator<Item = u8> + '_ {
        let fresh = (self.introduced < self.edges).then_some(2 * self.introduced as u8);
        let open = self.open;
        fresh.into_iter().chain((0..self.edges as u8).filter(move |b| open >> b & 1 == 1).map(|b| 2 * b + 1)).filter(
            move |&x| {
                if pos == 0 {
                    return true;
                }
                let p = self.letters[pos - 1];
                // (ii) no cancellation; (iii) the inverse pair x^-1 p^-1 is absent.
                p != x ^ 1 && self.pairs[(x ^ 1) as usize] >> (p ^ 1) & 1 == 0
            },
        )
    }

    fn place(&mut self, pos: usize, x: u8) {
        self.letters[pos] = x;
        self.pos_of[x as usize] = pos as u8;
        if pos > 0 {
            self.pairs[self.letters[pos - 1] as usize] |= 1 << x;
        }
        if x.is_multiple_of(2) {
            self.introduced += 1;
            self.open |= 1 << (x / 2);
        } else {
            self.open &= !(1 << (x / 2));
        }
    }

    fn unplace(&mut self, pos: usize, x: u8) {
        if pos > 0 {
            self.pairs[self.letters[pos - 1] as usize] &= !(1 << x);
        }
        if x.is_multiple_of(2) {
            self.introduced -= 1;
            self.open &= !(1 << (x / 2));
        } else {
            self.open |= 1 << (x / 2);
        }
    }

    fn replay(&mut self, prefix: &[u8]) {
        for (pos, &x) in prefix.iter().enumerate() {
            self.place(pos, x);
        }
    }

    fn collect_prefixes(&mut self, pos: usize, depth: usize, out: &mut Vec<Vec<u8>>) {
        if pos == depth {
            out.push(self.letters[..pos].to_vec());
            return;
        }
        let cands: Vec<u8> = self.candidates(pos).collect();
        for x in cands {
            self.place(pos, x);
            self.collect_prefixes(pos + 1, depth, out);
            self.unplace(pos, x);
        }
    }

    fn dfs(&mut self, pos: usize) {
        if pos == self.n {
            self.leaf();
            return;
        }
        let mut buf = [0u8; MAX_LENGTH];
        let mut k = 0;
        for x in self.candidates(pos) {
            buf[k] = x;
            k += 1;
        }
        for &x in &buf[..k] {
            self.place(pos, x);
            self.dfs(pos + 1);
            self.unplace(pos, x);
        }
    }

    fn leaf(&mut self) {
        let n = self.n;
        let (last, first) = (self.letters[n - 1], self.letters[0]);
        if last == first ^ 1 || self.pairs[(first ^ 1) as usize] >> (last ^ 1) & 1 == 1 {
            return;
        }
        let v = orbit_count_dense(&self.letters[..n], &self.pos_of, &mut self.seen);
        let twice = 1 + self.edges as i64 - v as i64;
        if twice != 2 * self.genus as i64 {
            return;
        }
        let canon = self.canon.canonical(&self.letters[..n]);
        self.found.insert(canon);
    }
}

/// Canonical form on dense words, with early exit on rotations that fall
/// behind the current best.
pub(crate) struct Canonicaliser {
    relabel: Vec<u8>,
    best: Vec<u8>,
}

const UNSET: u8 = u8::MAX;

impl Canonicaliser {
    pub(crate) fn new(n: usize) -> Canonicaliser {
        Canonicaliser { relabel: vec![UNSET; n], best: vec![0; n] }
    }

    pub(crate) fn canonical(&mut self, word: &[u8]) -> Vec<u8> {
        let n = word.len();
        self.best.clear();
        self.best.resize(n, UNSET);
        'rot: for r in 0..n {
            self.relabel.iter_mut().for_each(|x| *x = UNSET);
            let mut next = 0u8;
            let mut less = false;
            let mut cand = [0u8; MAX_LENGTH];
            for t in 0..n {
                let x = word[(r + t) % n];
                let b = (x / 2) as usize;
                if self.relabel[b] == UNSET {
                    // Maps base b to `next`, recording whether x was the inverse.
                    self.relabel[b] = 2 * next + (x & 1);
                    next += 1;
                }
                let y = (self.relabel[b] & !1) | ((self.relabel[b] ^ x) & 1);
                cand[t] = y;
                if !less {
                    if y > self.best[t] {
                        continue 'rot;
                    }
                    if y < self.best[t] {
                        less = true;
                    }
                }
            }
            if less {
                self.best[..n].copy_from_slice(&cand[..n]);
            }
        }
        self.best.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::canonical_word;

    #[test]
    fn dense_canonical_matches_reference() {
        let words: [&[i32]; 3] = [
            &[2, 1, -2, -1],
            &[1, 2, 3, 4, 5, -1, 6, -2, -5, 7, 8, -3, -6, 9, -7, -4, -8, -9],
            &[3, -1, 2, -3, 1, -2],
        ];
        for w in words {
            let word = Word::from_signed(w);
            // Dense encoding of the first-occurrence relabelling.
            let mut ids = std::collections::HashMap::new();
            let dense: Vec<u8> = word
                .iter()
                .map(|l| {
                    let k = ids.len() as u8;
                    let b = *ids.entry(l.base()).or_insert(k);
                    2 * b + u8::from(!l.is_positive())
                })
                .collect();
            let mut c = Canonicaliser::new(dense.len());
            assert_eq!(dense_to_word(&c.canonical(&dense)), canonical_word(&word).unwrap());
        }
    }

    #[test]
    fn genus_one_classes() {
        let cat = enumerate_wicks(1, false, &EnumerateOptions::default()).unwrap();
        let words: Vec<String> = cat.forms().iter().map(|f| f.to_string()).collect();
        assert_eq!(words, vec!["1 2 -1 -2", "1 2 3 -1 -2 -3"]);
        assert!(cat.complete);
    }

    #[test]
    fn genus_one_maximal() {
        let cat = enumerate_wicks(1, true, &EnumerateOptions::default()).unwrap();
        assert_eq!(cat.forms(), &[CyclicWord::from_signed(&[1, 2, 3, -1, -2, -3])]);
    }

    #[test]
    fn option_errors() {
        let o = EnumerateOptions::default();
        assert_eq!(enumerate_wicks(0, false, &o).unwrap_err(), EnumerateError::ZeroGenus);
        assert_eq!(enumerate_wicks(3, true, &o).unwrap_err(), EnumerateError::NeedsOverride(3));
        assert_eq!(enumerate_wicks(4, true, &o).unwrap_err(), EnumerateError::NeedsOverride(4));
        let odd = EnumerateOptions { length_range: Some((8, 9)), ..Default::default() };
        assert_eq!(enumerate_wicks(2, false, &odd).unwrap_err(), EnumerateError::OddLength(9));
        let out = EnumerateOptions { length_range: Some((4, 6)), ..Default::default() };
        assert!(matches!(enumerate_wicks(2, false, &out), Err(EnumerateError::RangeOutOfBounds { .. })));
    }

    #[test]
    fn partial_range_is_not_complete() {
        let o = EnumerateOptions { length_range: Some((8, 8)), ..Default::default() };
        let cat = enumerate_wicks(2, false, &o).unwrap();
        assert!(!cat.complete);
        assert!(cat.forms().iter().all(|f| f.len() == 8));
        assert!(cat.forms().contains(&CyclicWord::from_signed(&[1, 2, -1, -2, 3, 4, -3, -4])));
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let o1 = EnumerateOptions { length_range: Some((8, 12)), workers: Some(1), ..Default::default() };
        let o4 = EnumerateOptions { workers: Some(4), ..o1.clone() };
        assert_eq!(enumerate_wicks(2, false, &o1).unwrap(), enumerate_wicks(2, false, &o4).unwrap());
    }
}
