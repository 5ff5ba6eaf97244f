//! Non-cancelling Wicks representations: splitting a rotation of a word into
//! consecutive blocks, one per letter of a form, so that the two occurrences
//! of each base receive mutually inverse blocks.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::{enumerate_wicks, with_workers, Catalog, EnumerateError, EnumerateOptions, MAX_QUICK_GENUS};
use crate::words::{is_cyclically_reduced, CyclicWord, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepresentError {
    #[error("word is not cyclically reduced; a non-cancelling representation cannot exist")]
    NotCyclicallyReduced,
    #[error("genus bound {0} needs the long-runtime override")]
    NeedsOverride(u32),
    #[error("form has a base without its inverse")]
    BadForm,
    #[error("catalog for genus {0} is incomplete")]
    IncompleteCatalog(u32),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
}

/// Images of the positive letters of a form; `a^-1` maps to the inverse.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Substitution(BTreeMap<u32, Word>);

impl Substitution {
    pub fn new() -> Substitution {
        Substitution(BTreeMap::new())
    }

    pub fn insert(&mut self, base: u32, image: Word) {
        self.0.insert(base, image);
    }

    pub fn image(&self, letter: Letter) -> Option<Word> {
        self.0
            .get(&letter.base())
            .map(|w| if letter.is_positive() { w.clone() } else { w.inverse() })
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Word)> {
        self.0.iter().map(|(b, w)| (*b, w))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenated images, without reduction. `None` if a letter has no image.
    pub fn apply(&self, u: &Word) -> Option<Word> {
        let mut out = Vec::new();
        for &l in u {
            out.extend(self.image(l)?.into_letters());
        }
        Some(Word::new(out))
    }

    /// Every image is nonempty and reduced, and the concatenation around `u`
    /// is cyclically reduced.
    pub fn is_non_cancelling_on(&self, u: &Word) -> bool {
        self.0.values().all(|w| !w.is_empty() && w.is_reduced())
            && self.apply(u).is_some_and(|w| is_cyclically_reduced(&w))
    }
}

impl fmt::Display for Substitution {
    /// One `a<i> -> <word>` line per base.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (b, w)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "a{b} -> {w}")?;
        }
        Ok(())
    }
}

/// `substitution` applied to the form's stored word spells the rotation of
/// the target starting at `offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Representation {
    pub offset: usize,
    pub substitution: Substitution,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "offset={}\n{}", self.offset, self.substitution)
    }
}

/// Compiled form: per position the dense base id, sign, and whether this is
/// the base's first occurrence.
struct FormPlan {
    bases: Vec<u32>,
    slot_base: Vec<usize>,
    slot_positive: Vec<bool>,
    slot_first: Vec<bool>,
    /// Slot of the first occurrence of each dense base.
    first_of: Vec<usize>,
}

impl FormPlan {
    fn new(u: &Word) -> Result<FormPlan, RepresentError> {
        let mut bases: Vec<u32> = u.iter().map(|l| l.base()).collect();
        bases.sort_unstable();
        bases.dedup();
        let slot_base: Vec<usize> = u.iter().map(|l| bases.binary_search(&l.base()).unwrap()).collect();
        let mut count = vec![0usize; bases.len()];
        let mut slot_first = Vec::with_capacity(u.len());
        for &b in &slot_base {
            slot_first.push(count[b] == 0);
            count[b] += 1;
        }
        // Each base twice with opposite signs.
        let mut sign_sum = vec![0i32; bases.len()];
        for (k, l) in u.iter().enumerate() {
            sign_sum[slot_base[k]] += if l.is_positive() { 1 } else { -1 };
        }
        if count.iter().any(|&c| c != 2) || sign_sum.iter().any(|&s| s != 0) {
            return Err(RepresentError::BadForm);
        }
        let mut first_of = vec![0usize; bases.len()];
        for (k, &b) in slot_base.iter().enumerate().rev() {
            first_of[b] = k;
        }
        Ok(FormPlan {
            bases,
            slot_base,
            slot_positive: u.iter().map(|l| l.is_positive()).collect(),
            slot_first,
            first_of,
        })
    }
}

struct BlockSearch<'a> {
    target: Vec<i32>,
    form: &'a FormPlan,
    /// Start and length of each base's first block in `target`.
    start: Vec<usize>,
    len: Vec<usize>,
    fixed_rem: usize,
    unassigned: usize,
    found: Vec<Vec<(usize, usize)>>,
    limit: usize,
}

impl BlockSearch<'_> {
    fn run(&mut self, k: usize, pos: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        let m = self.form.slot_base.len();
        let n = self.target.len();
        if k == m {
            if pos == n {
                let blocks = (0..self.form.bases.len()).map(|b| (self.start[b], self.len[b])).collect();
                self.found.push(blocks);
            }
            return;
        }
        let b = self.form.slot_base[k];
        let rem = n - pos;
        if self.form.slot_first[k] {
            // This block and its partner, plus at least 2 per other unassigned base.
            let others = 2 * (self.unassigned - 1);
            let free = rem.saturating_sub(self.fixed_rem);
            if free < 2 + others || (rem - self.fixed_rem) % 2 == 1 {
                return;
            }
            let max_len = (free - others) / 2;
            let min_len = if self.unassigned == 1 { max_len } else { 1 };
            self.unassigned -= 1;
            for l in min_len..=max_len {
                self.start[b] = pos;
                self.len[b] = l;
                self.fixed_rem += l;
                self.run(k + 1, pos + l);
                self.fixed_rem -= l;
                if self.found.len() >= self.limit {
                    break;
                }
            }
            self.unassigned += 1;
        } else {
            let (s, l) = (self.start[b], self.len[b]);
            if l > rem {
                return;
            }
            let same_sign = self.form.slot_positive[k] == self.form.slot_positive[self.form.first_of[b]];
            let matches = if same_sign {
                (0..l).all(|t| self.target[pos + t] == self.target[s + t])
            } else {
                (0..l).all(|t| self.target[pos + t] == -self.target[s + l - 1 - t])
            };
            if matches {
                self.fixed_rem -= l;
                self.run(k + 1, pos + l);
                self.fixed_rem += l;
            }
        }
    }
}

/// All non-cancelling representations of `w` by the form `u`, up to
/// `limit`. The form's first letter is aligned with every rotation offset of
/// `w` in turn.
pub fn find_representations(
    w: &CyclicWord,
    u: &CyclicWord,
    limit: Option<usize>,
) -> Result<Vec<Representation>, RepresentError> {
    if !is_cyclically_reduced(w.word()) {
        return Err(RepresentError::NotCyclicallyReduced);
    }
    let plan = FormPlan::new(u.word())?;
    let limit = limit.unwrap_or(usize::MAX);
    let n = w.len();
    let m = u.len();
    let mut out = Vec::new();
    if n < m || n % 2 == 1 || m == 0 || limit == 0 {
        return Ok(out);
    }
    for offset in 0..n {
        let rotated = w.word().rotated(offset);
        let mut search = BlockSearch {
            target: rotated.to_signed(),
            form: &plan,
            start: vec![0; plan.bases.len()],
            len: vec![0; plan.bases.len()],
            fixed_rem: 0,
            unassigned: plan.bases.len(),
            found: Vec::new(),
            limit: limit - out.len(),
        };
        search.run(0, 0);
        for blocks in search.found {
            let mut sub = Substitution::new();
            for (b, (s, l)) in blocks.into_iter().enumerate() {
                let k = plan.first_of[b];
                let block = Word::new(rotated.letters()[s..s + l].to_vec());
                sub.insert(plan.bases[b], if plan.slot_positive[k] { block } else { block.inverse() });
            }
            let spelled = sub.apply(u.word());
            assert_eq!(spelled.as_ref(), Some(&rotated), "representation failed re-substitution");
            debug_assert!(sub.is_non_cancelling_on(u.word()));
            out.push(Representation { offset, substitution: sub });
        }
        if out.len() >= limit {
            break;
        }
    }
    Ok(out)
}

pub fn is_represented_by(w: &CyclicWord, u: &CyclicWord) -> Result<bool, RepresentError> {
    Ok(!find_representations(w, u, Some(1))?.is_empty())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationCount {
    pub count: usize,
    /// False when the catalog was incomplete: `count` is then a lower bound.
    pub exact: bool,
}

/// Number of catalog classes representing `w`; this is M(g, w) on the
/// complete maximal catalog of genus g.
pub fn count_representations(w: &CyclicWord, catalog: &Catalog, workers: Option<usize>) -> RepresentationCount {
    let exact = catalog.complete;
    if !is_cyclically_reduced(w.word()) || w.len() % 2 == 1 {
        return RepresentationCount { count: 0, exact };
    }
    let count = with_workers(workers, || {
        catalog
            .forms()
            .par_iter()
            .filter(|u| is_represented_by(w, u).unwrap_or(false))
            .count()
    });
    RepresentationCount { count, exact }
}

/// Genus of a word as found by search over catalogs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum WordGenus {
    Finite(u32),
    /// No representation up to the searched genus.
    Exceeds(u32),
    /// Not in the commutator subgroup.
    Infinite,
}

impl fmt::Display for WordGenus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordGenus::Finite(g) => write!(f, "genus={g}"),
            WordGenus::Exceeds(g) => write!(f, "genus>{g}"),
            WordGenus::Infinite => write!(f, "genus=infinite"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct GenusOptions {
    pub allow_long: bool,
    pub workers: Option<usize>,
}

/// Least genus `g <= g_max` with a non-cancelling representation, searched
/// over freshly enumerated complete catalogs of all lengths.
pub fn genus_of_word(w: &CyclicWord, g_max: u32, opts: &GenusOptions) -> Result<WordGenus, RepresentError> {
    if g_max > MAX_QUICK_GENUS && !opts.allow_long {
        return Err(RepresentError::NeedsOverride(g_max));
    }
    let eopts = EnumerateOptions { length_range: None, allow_long: opts.allow_long, workers: opts.workers };
    genus_of_word_with(w, g_max, opts.workers, |g| Ok(enumerate_wicks(g, false, &eopts)?))
}

/// As [`genus_of_word`], with catalogs supplied by `catalog_for(g)`. Each
/// must be the complete catalog of all forms of genus g.
pub fn genus_of_word_with(
    w: &CyclicWord,
    g_max: u32,
    workers: Option<usize>,
    mut catalog_for: impl FnMut(u32) -> Result<Catalog, RepresentError>,
) -> Result<WordGenus, RepresentError> {
    // Exponent sums survive free reduction, so this needs no reduced input.
    if w.word().exponent_sums().iter().any(|&(_, s)| s != 0) {
        return Ok(WordGenus::Infinite);
    }
    if !is_cyclically_reduced(w.word()) {
        return Err(RepresentError::NotCyclicallyReduced);
    }
    if w.is_empty() {
        return Ok(WordGenus::Finite(0));
    }
    for g in 1..=g_max {
        // A genus-g form is at least 4g long; the search needs |u| <= |w|.
        if 4 * g as usize > w.len() {
            break;
        }
        let catalog = catalog_for(g)?;
        if !catalog.complete || catalog.maximal_only || catalog.genus != g {
            return Err(RepresentError::IncompleteCatalog(g));
        }
        let hit = with_workers(workers, || {
            catalog.forms().par_iter().any(|u| is_represented_by(w, u).unwrap_or(false))
        });
        if hit {
            return Ok(WordGenus::Finite(g));
        }
    }
    Ok(WordGenus::Exceeds(g_max))
}
