//! Gluing a cyclic word into a one-face surface, the three Wicks
//! conditions, genus, maximality and canonical forms.
//!
//! Positions `0..n` of a word double as darts: dart `i` is the letter at
//! position `i` read along the boundary, leaving the corner in front of it.
//! Gluing pairs each position with the position of the inverse letter
//! (`pairing`), and corner `i` is identified with corner `pairing(i) + 1`.
//! The cycles of `i -> pairing(i) + 1 (mod n)` are the vertices, and the same
//! permutation is the rotation of darts around each vertex.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::{CyclicWord, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("word violates condition (i) at position {position}: every base must occur once with each sign")]
    Unpaired { position: usize },
    #[error("cannot glue the empty word")]
    Empty,
    #[error("not an orientable Wicks form: {0}")]
    NotWicks(ValidationReport),
    #[error("internal inconsistency: 1 + e - v = {0} is odd")]
    OddEuler(i64),
}

/// Wicks condition identifiers, as printed in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Condition {
    /// The empty word is not a form.
    #[serde(rename = "empty")]
    Empty,
    /// Every base occurs exactly once with each sign.
    #[serde(rename = "i")]
    OccursOnce,
    /// Cyclically reduced.
    #[serde(rename = "ii")]
    CyclicallyReduced,
    /// No length-2 factor whose inverse is also a factor.
    #[serde(rename = "iii")]
    NoInverseFactor,
}

impl Condition {
    pub fn id(self) -> &'static str {
        match self {
            Condition::Empty => "empty",
            Condition::OccursOnce => "i",
            Condition::CyclicallyReduced => "ii",
            Condition::NoInverseFactor => "iii",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: Condition,
    /// Position (in the word as given) of the offending letter or factor.
    pub position: usize,
    /// For condition (iii), the position of the inverse factor.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partner: Option<usize>,
}

/// Outcome of checking the Wicks conditions. Every violated condition is
/// listed, in condition order, with the first witness found for each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }

    pub fn violates(&self, c: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == c)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first() {
            None => f.write_str("PASS"),
            Some(v) => write!(f, "FAIL {} {}", v.condition, v.position),
        }
    }
}

/// Checks conditions (i)-(iii) on a linear representative; positions in the
/// report refer to `w` as given.
pub fn validate_word(w: &Word) -> ValidationReport {
    let l = w.letters();
    let n = l.len();
    let mut violations = Vec::new();
    if n == 0 {
        violations.push(Violation { condition: Condition::Empty, position: 0, partner: None });
        return ValidationReport { violations };
    }

    let mut counts: HashMap<i32, usize> = HashMap::new();
    for x in l {
        *counts.entry(x.signed()).or_default() += 1;
    }
    if let Some(position) = l.iter().position(|x| {
        counts.get(&x.signed()) != Some(&1) || counts.get(&x.inverse().signed()) != Some(&1)
    }) {
        violations.push(Violation { condition: Condition::OccursOnce, position, partner: None });
    }

    if let Some(position) = (0..n).find(|&i| l[i].is_inverse_of(l[(i + 1) % n])) {
        violations.push(Violation { condition: Condition::CyclicallyReduced, position, partner: None });
    }

    // Factor xy at i, inverse y^-1 x^-1 at j.
    let mut factor_at: HashMap<(i32, i32), usize> = HashMap::new();
    for i in 0..n {
        factor_at.entry((l[i].signed(), l[(i + 1) % n].signed())).or_insert(i);
    }
    let witness = (0..n).find_map(|i| {
        let (x, y) = (l[i], l[(i + 1) % n]);
        factor_at
            .get(&(y.inverse().signed(), x.inverse().signed()))
            .map(|&j| (i, j))
    });
    if let Some((position, j)) = witness {
        violations.push(Violation { condition: Condition::NoInverseFactor, position, partner: Some(j) });
    }
    ValidationReport { violations }
}

pub fn validate_wicks(w: &CyclicWord) -> ValidationReport {
    validate_word(w.word())
}

/// The pairing of positions and the vertex classes of corners.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingStructure {
    pub n: usize,
    pub pairing: Vec<usize>,
    pub corner_orbits: Vec<Vec<usize>>,
}

impl GluingStructure {
    pub fn vertex_count(&self) -> usize {
        self.corner_orbits.len()
    }

    pub fn edge_count(&self) -> usize {
        self.n / 2
    }
}

/// One edge per base, oriented along its positive letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub base: u32,
    /// Dart (position) of the positive letter; leaves `tail`.
    pub positive_dart: usize,
    /// Dart (position) of the inverse letter; leaves `head`.
    pub negative_dart: usize,
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// Rotation system of the glued graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddedGraph {
    /// Darts around each vertex, in rotation order.
    pub rotations: Vec<Vec<usize>>,
    /// `(vertex, slot)` of each dart.
    pub dart_end: Vec<(usize, usize)>,
    /// Letter carried by each dart.
    pub dart_letter: Vec<Letter>,
    /// Dart of the inverse letter.
    pub opposite: Vec<usize>,
    /// Edges sorted by base.
    pub edges: Vec<Edge>,
}

impl EmbeddedGraph {
    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dart_count(&self) -> usize {
        self.dart_letter.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.rotations.iter().map(Vec::len).collect()
    }

    pub fn vertex_of(&self, dart: usize) -> usize {
        self.dart_end[dart].0
    }

    /// Next dart counterclockwise around the same vertex.
    pub fn rotate(&self, dart: usize) -> usize {
        let (v, slot) = self.dart_end[dart];
        let rot = &self.rotations[v];
        rot[(slot + 1) % rot.len()]
    }

    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(Edge::is_loop)
    }

    /// Traces the face through dart 0 using only the rotation system:
    /// after traversing dart `d`, continue with `rotate(opposite(d))`.
    pub fn face_trace(&self) -> Word {
        if self.dart_letter.is_empty() {
            return Word::empty();
        }
        let mut out = Vec::with_capacity(self.dart_letter.len());
        let mut d = 0usize;
        loop {
            out.push(self.dart_letter[d]);
            d = self.rotate(self.opposite[d]);
            if d == 0 || out.len() > self.dart_letter.len() {
                break;
            }
        }
        Word::new(out)
    }

    /// `v=<n> e=<m> degrees=<d1,...>` followed by one rotation line per vertex.
    pub fn to_text(&self) -> String {
        let degrees = self
            .degrees()
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let mut s = format!("v={} e={} degrees={}", self.vertex_count(), self.edge_count(), degrees);
        for (v, rot) in self.rotations.iter().enumerate() {
            let letters = rot
                .iter()
                .map(|&d| self.dart_letter[d].to_string())
                .collect::<Vec<_>>()
                .join(" ");
            s.push_str(&format!("\nvertex {v}: {letters}"));
        }
        s
    }
}

fn pairing_of(w: &Word) -> Result<Vec<usize>, SurfaceError> {
    let l = w.letters();
    let mut at: HashMap<i32, usize> = HashMap::with_capacity(l.len());
    for (i, x) in l.iter().enumerate() {
        if at.insert(x.signed(), i).is_some() {
            return Err(SurfaceError::Unpaired { position: i });
        }
    }
    l.iter()
        .enumerate()
        .map(|(i, x)| at.get(&x.inverse().signed()).copied().ok_or(SurfaceError::Unpaired { position: i }))
        .collect()
}

/// Glues the word as given. Vertices are numbered in order of their least
/// corner, and each rotation starts at that corner.
pub fn glue_word(w: &Word) -> Result<(GluingStructure, EmbeddedGraph), SurfaceError> {
    let n = w.len();
    if n == 0 {
        return Err(SurfaceError::Empty);
    }
    let pairing = pairing_of(w)?;
    let mut dart_end = vec![(usize::MAX, 0usize); n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if dart_end[start].0 != usize::MAX {
            continue;
        }
        let v = orbits.len();
        let mut orbit = Vec::new();
        let mut d = start;
        while dart_end[d].0 == usize::MAX {
            dart_end[d] = (v, orbit.len());
            orbit.push(d);
            d = (pairing[d] + 1) % n;
        }
        orbits.push(orbit);
    }

    let l = w.letters();
    let mut edges: Vec<Edge> = (0..n)
        .filter(|&i| l[i].is_positive())
        .map(|p| {
            let q = pairing[p];
            Edge {
                base: l[p].base(),
                positive_dart: p,
                negative_dart: q,
                tail: dart_end[p].0,
                head: dart_end[q].0,
            }
        })
        .collect();
    edges.sort_by_key(|e| e.base);

    let graph = EmbeddedGraph {
        rotations: orbits.clone(),
        dart_end,
        dart_letter: l.to_vec(),
        opposite: pairing.clone(),
        edges,
    };
    Ok((GluingStructure { n, pairing, corner_orbits: orbits }, graph))
}

pub fn glue(w: &CyclicWord) -> Result<(GluingStructure, EmbeddedGraph), SurfaceError> {
    glue_word(w.word())
}

/// `(1 + e - v) / 2`. Reports genus 0 for raw pairings that glue to a sphere.
pub fn genus_of_gluing(g: &GluingStructure) -> Result<u32, SurfaceError> {
    let twice = 1 + g.edge_count() as i64 - g.vertex_count() as i64;
    if twice % 2 != 0 || twice < 0 {
        return Err(SurfaceError::OddEuler(twice));
    }
    Ok((twice / 2) as u32)
}

pub fn topological_genus(w: &CyclicWord) -> Result<u32, SurfaceError> {
    let (gluing, _) = glue(w)?;
    genus_of_gluing(&gluing)
}

/// Number of corner orbits of a word given as signed dense letters, without
/// building the graph. `pos_of[idx]` is the position of letter index `idx`,
/// where index `2(b-1)` is `+b` and `2(b-1)+1` is `-b`.
pub(crate) fn orbit_count_dense(letters: &[u8], pos_of: &[u8], seen: &mut [bool]) -> usize {
    let n = letters.len();
    seen[..n].iter_mut().for_each(|s| *s = false);
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            let partner = pos_of[(letters[d] ^ 1) as usize] as usize;
            d = if partner + 1 == n { 0 } else { partner + 1 };
        }
    }
    count
}

/// Least first-occurrence relabelling over all rotations; two forms are
/// isomorphic iff their canonical forms agree.
pub fn canonical_form(w: &CyclicWord) -> Result<CyclicWord, SurfaceError> {
    canonical_word(w.word()).map(CyclicWord::new)
}

pub fn canonical_word(w: &Word) -> Result<Word, SurfaceError> {
    pairing_of(w)?;
    let l = w.letters();
    let n = l.len();
    if n == 0 {
        return Ok(Word::empty());
    }
    // Dense base ids so relabelling uses a flat table.
    let mut bases: Vec<u32> = l.iter().map(|x| x.base()).collect();
    bases.sort_unstable();
    bases.dedup();
    let dense: Vec<usize> = l.iter().map(|x| bases.binary_search(&x.base()).unwrap()).collect();

    let mut best: Option<Vec<i32>> = None;
    let mut relabel = vec![0i32; bases.len()];
    let mut candidate = vec![0i32; n];
    for r in 0..n {
        relabel.iter_mut().for_each(|x| *x = 0);
        let mut next = 1i32;
        for (t, slot) in candidate.iter_mut().enumerate() {
            let i = (r + t) % n;
            let b = dense[i];
            let s = if l[i].is_positive() { 1 } else { -1 };
            if relabel[b] == 0 {
                // First occurrence becomes the positive letter `next`.
                relabel[b] = next * s;
                next += 1;
            }
            *slot = relabel[b] * s;
        }
        let better = match &best {
            None => true,
            Some(b) => cmp_signed(&candidate, b) == std::cmp::Ordering::Less,
        };
        if better {
            best = Some(candidate.clone());
        }
    }
    Ok(Word::from_signed(&best.unwrap()))
}

fn cmp_signed(a: &[i32], b: &[i32]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = (x.unsigned_abs(), *x < 0).cmp(&(y.unsigned_abs(), *y < 0));
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

/// A validated orientable Wicks form with its glued graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WicksForm {
    word: CyclicWord,
    graph: EmbeddedGraph,
    genus: u32,
    maximal: bool,
}

impl WicksForm {
    pub fn new(word: CyclicWord) -> Result<WicksForm, SurfaceError> {
        let report = validate_wicks(&word);
        if !report.is_pass() {
            return Err(SurfaceError::NotWicks(report));
        }
        let (gluing, graph) = glue(&word)?;
        let genus = genus_of_gluing(&gluing)?;
        let maximal = word.len() + 6 == 12 * genus as usize;
        debug_assert!(graph.degrees().iter().all(|&d| d >= 3));
        Ok(WicksForm { word, graph, genus, maximal })
    }

    pub fn word(&self) -> &CyclicWord {
        &self.word
    }

    pub fn graph(&self) -> &EmbeddedGraph {
        &self.graph
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Length `12g - 6`; equivalently every vertex has degree three.
    pub fn is_maximal(&self) -> bool {
        self.maximal
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

impl TryFrom<CyclicWord> for WicksForm {
    type Error = SurfaceError;

    fn try_from(w: CyclicWord) -> Result<Self, Self::Error> {
        WicksForm::new(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const W2: [i32; 18] = [1, 2, 3, 4, 5, -1, 6, -2, -5, 7, 8, -3, -6, 9, -7, -4, -8, -9];

    fn c(v: &[i32]) -> CyclicWord {
        CyclicWord::from_signed(v)
    }

    #[test]
    fn validation_examples() {
        assert!(validate_wicks(&c(&[1, 2, -1, -2])).is_pass());
        assert!(validate_wicks(&c(&W2)).is_pass());

        let r = validate_word(&Word::from_signed(&[1, 2, -2, -1]));
        assert!(!r.is_pass());
        assert!(r.violates(Condition::CyclicallyReduced));
        let iii = r.violations.iter().find(|v| v.condition == Condition::NoInverseFactor).unwrap();
        assert_eq!((iii.position, iii.partner), (0, Some(2)));
    }

    #[test]
    fn validation_reports_condition_i() {
        let r = validate_word(&Word::from_signed(&[1, 2, -1]));
        assert_eq!(r.first().unwrap().condition, Condition::OccursOnce);
        assert_eq!(r.first().unwrap().position, 1);
        let r = validate_word(&Word::from_signed(&[1, 1, -1, -1]));
        assert!(r.violates(Condition::OccursOnce));
        assert_eq!(validate_word(&Word::empty()).first().unwrap().condition, Condition::Empty);
        assert_eq!(r.to_string(), "FAIL i 0");
        assert_eq!(validate_word(&Word::from_signed(&[1, 2, -1, -2])).to_string(), "PASS");
    }

    #[test]
    fn glue_commutator() {
        let (g, graph) = glue(&c(&[1, 2, -1, -2])).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(graph.edge_count(), 2);
        assert_eq!(graph.degrees(), vec![4]);
        assert_eq!(topological_genus(&c(&[1, 2, -1, -2])).unwrap(), 1);
        assert!(graph.has_loop());
    }

    #[test]
    fn glue_hexagon() {
        // Corner orbits of 0..6 under i -> pairing(i)+1: {0,4,2} and {1,5,3}.
        let (g, graph) = glue(&c(&[1, 2, 3, -1, -2, -3])).unwrap();
        assert_eq!(g.corner_orbits, vec![vec![0, 4, 2], vec![1, 5, 3]]);
        assert_eq!(graph.degrees(), vec![3, 3]);
        assert_eq!(graph.edge_count(), 3);
        assert!(!graph.has_loop());
        assert_eq!(topological_genus(&c(&[1, 2, 3, -1, -2, -3])).unwrap(), 1);
    }

    #[test]
    fn glue_fixture_form() {
        let (g, graph) = glue(&c(&W2)).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(graph.edge_count(), 9);
        assert!(graph.degrees().iter().all(|&d| d == 3));
        let f = WicksForm::new(c(&W2)).unwrap();
        assert_eq!(f.genus(), 2);
        assert!(f.is_maximal());
    }

    #[test]
    fn glue_rejects_unpaired() {
        assert_eq!(glue(&c(&[1, 2, -1])), Err(SurfaceError::Unpaired { position: 1 }));
        assert_eq!(glue(&c(&[])), Err(SurfaceError::Empty));
        assert!(glue(&c(&[1, 1])).is_err());
    }

    #[test]
    fn sphere_pairing_reports_genus_zero() {
        assert_eq!(topological_genus(&c(&[1, -1])).unwrap(), 0);
        assert_eq!(topological_genus(&c(&[1, 2, -2, -1])).unwrap(), 0);
    }

    #[test]
    fn face_trace_round_trip() {
        for w in [&[1, 2, -1, -2][..], &[1, 2, 3, -1, -2, -3], &W2] {
            let word = Word::from_signed(w);
            let (_, graph) = glue_word(&word).unwrap();
            assert_eq!(graph.face_trace(), word);
        }
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_form(&c(&[7, 3, -7, -3])).unwrap(), c(&[1, 2, -1, -2]));
        assert_eq!(canonical_form(&c(&[-1, -2, 1, 2])).unwrap(), c(&[1, 2, -1, -2]));
        let canon = canonical_form(&c(&W2)).unwrap();
        let relabelled: Vec<i32> = W2.iter().map(|&x| if x.abs() % 2 == 0 { -x * 3 } else { x + x.signum() * 20 }).collect();
        let rotated = Word::from_signed(&relabelled).rotated(7);
        assert_eq!(canonical_form(&CyclicWord::new(rotated)).unwrap(), canon);
        assert!(canonical_form(&c(&[1, 2])).is_err());
    }

    #[test]
    fn graph_text() {
        let (_, graph) = glue(&c(&[1, 2, 3, -1, -2, -3])).unwrap();
        assert_eq!(graph.to_text(), "v=2 e=3 degrees=3,3\nvertex 0: 1 -2 3\nvertex 1: 2 -3 -1");
    }

    #[test]
    fn dense_orbit_count_matches_glue() {
        // +1 -> 0, -1 -> 1, +2 -> 2, -2 -> 3, ...
        let word = [0u8, 2, 4, 1, 3, 5];
        let mut pos = [0u8; 6];
        for (i, &x) in word.iter().enumerate() {
            pos[x as usize] = i as u8;
        }
        let mut seen = [false; 6];
        assert_eq!(orbit_count_dense(&word, &pos, &mut seen), 2);
    }
}
