//! The coloring and labelling construction that turns a maximal Wicks form
//! of genus g into a word `v` of length `24g - 12` over the 24-letter
//! alphabet B, and the square-free relabelling `z` of `v`.
//!
//! B has letters `α_j, β_j, γ_j` for colors `j = 1..4`, encoded as
//! `α_j = 3(j-1)+1`, `β_j = 3(j-1)+2`, `γ_j = 3(j-1)+3`. Each edge of the form
//! is subdivided, the two halves are oriented away from the original
//! vertices and labelled at their vertex by its color. Reading the face
//! then gives `v`, with each letter `a` of the form becoming a two-letter
//! block `ℓ(tail) ℓ(head)^-1`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::represent::Substitution;
use crate::surface::{EmbeddedGraph, WicksForm};
use crate::words::{thue_word, CyclicWord, Letter, Word};

pub const COLORS: u8 = 4;
/// Positive letters of B.
pub const B_SIZE: u32 = 3 * COLORS as u32;
/// Variants per positive letter of B in the square-free alphabet.
pub const VARIANTS: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("edge a{base} is a loop; no proper coloring exists")]
    LoopDetected { base: u32 },
    #[error("vertex {vertex} has degree {degree} > 3")]
    DegreeTooHigh { vertex: usize, degree: usize },
    #[error("form is not maximal (all vertices must have degree 3)")]
    NotMaximal,
    #[error("coloring is not proper on edge a{base}")]
    ImproperColoring { base: u32 },
    #[error("dart {dart} is not at vertex {vertex}")]
    BadAlphaDart { vertex: usize, dart: usize },
    #[error("letter {0} is outside the alphabet B")]
    OutsideB(Letter),
    #[error("pairing is inconsistent at position {0}")]
    InconsistentPairing(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    Alpha,
    Beta,
    Gamma,
}

impl Kind {
    /// Successor in the cyclic order α → β → γ → α.
    pub fn next(self) -> Kind {
        match self {
            Kind::Alpha => Kind::Beta,
            Kind::Beta => Kind::Gamma,
            Kind::Gamma => Kind::Alpha,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Kind::Alpha => "α",
            Kind::Beta => "β",
            Kind::Gamma => "γ",
        }
    }
}

/// Positive letter of B with the given kind and color.
pub fn b_letter(kind: Kind, color: u8) -> Letter {
    let k = match kind {
        Kind::Alpha => 1,
        Kind::Beta => 2,
        Kind::Gamma => 3,
    };
    Letter::new(3 * (color as u32 - 1) + k, true)
}

/// Color and kind of a letter of B, or `None` outside B.
pub fn b_parts(l: Letter) -> Option<(u8, Kind)> {
    let b = l.base();
    if b == 0 || b > B_SIZE {
        return None;
    }
    let kind = match (b - 1) % 3 {
        0 => Kind::Alpha,
        1 => Kind::Beta,
        _ => Kind::Gamma,
    };
    Some((((b - 1) / 3 + 1) as u8, kind))
}

/// `α_1`, `β_2^-1`, ...
pub fn b_name(l: Letter) -> Option<String> {
    let (color, kind) = b_parts(l)?;
    let inv = if l.is_positive() { "" } else { "^-1" };
    Some(format!("{}_{}{}", kind.symbol(), color, inv))
}

/// Whether `y` may follow `x` in a constructed word: a positive letter of
/// color j is followed by a negative letter of another color, and `x_j^-1`
/// by the next letter of the same color in the order α → β → γ → α.
pub fn successor_allowed(x: Letter, y: Letter) -> bool {
    match (b_parts(x), b_parts(y)) {
        (Some((cx, kx)), Some((cy, ky))) => {
            if x.is_positive() {
                !y.is_positive() && cx != cy
            } else {
                y.is_positive() && cx == cy && ky == kx.next()
            }
        }
        _ => false,
    }
}

pub fn b_alphabet() -> impl Iterator<Item = Letter> {
    (1..=B_SIZE).flat_map(|b| [Letter::new(b, true), Letter::new(b, false)])
}

pub fn allowed_successors(x: Letter) -> Vec<Letter> {
    b_alphabet().filter(|&y| successor_allowed(x, y)).collect()
}

/// Vertex colors in `1..=4`, indexed by vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring(Vec<u8>);

impl Coloring {
    pub fn new(colors: Vec<u8>) -> Coloring {
        Coloring(colors)
    }

    pub fn color(&self, vertex: usize) -> u8 {
        self.0[vertex]
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn colors_used(&self) -> usize {
        self.0.iter().collect::<HashSet<_>>().len()
    }

    pub fn is_proper(&self, graph: &EmbeddedGraph) -> bool {
        self.0.len() == graph.vertex_count()
            && self.0.iter().all(|&c| (1..=COLORS).contains(&c))
            && graph.edges.iter().all(|e| self.0[e.tail] != self.0[e.head])
    }
}

/// Greedy proper coloring: vertices in index order, smallest free color.
pub fn color_vertices(graph: &EmbeddedGraph) -> Result<Coloring, ConstructError> {
    if let Some(e) = graph.edges.iter().find(|e| e.is_loop()) {
        return Err(ConstructError::LoopDetected { base: e.base });
    }
    if let Some((vertex, degree)) = graph.degrees().into_iter().enumerate().find(|&(_, d)| d > 3) {
        return Err(ConstructError::DegreeTooHigh { vertex, degree });
    }
    let nv = graph.vertex_count();
    let mut neighbours = vec![Vec::new(); nv];
    for e in &graph.edges {
        neighbours[e.tail].push(e.head);
        neighbours[e.head].push(e.tail);
    }
    let mut colors = vec![0u8; nv];
    for v in 0..nv {
        let taken: Vec<u8> = neighbours[v].iter().map(|&u| colors[u]).collect();
        colors[v] = (1..=COLORS).find(|c| !taken.contains(c)).expect("degree <= 3 leaves a color");
    }
    Ok(Coloring(colors))
}

/// A letter of B for every dart (edge end) of the form's graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Labelling(Vec<Letter>);

impl Labelling {
    pub fn label(&self, dart: usize) -> Letter {
        self.0[dart]
    }

    pub fn as_slice(&self) -> &[Letter] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionResult {
    /// Form in the rotation the circuit was read from.
    pub form: CyclicWord,
    pub coloring: Coloring,
    pub labelling: Labelling,
    /// `v` read along the face starting at the form's position 0: positions
    /// `2i, 2i+1` spell the image of the form's letter `i`.
    pub circuit: Word,
    pub phi: Substitution,
    /// Positions of `circuit` pairing the two traversals of each half edge.
    pub pairing: Vec<usize>,
}

impl ConstructionResult {
    pub fn v(&self) -> CyclicWord {
        CyclicWord::new(self.circuit.clone())
    }

    pub fn genus(&self) -> u32 {
        ((self.circuit.len() + 12) / 24) as u32
    }
}

pub fn build_v(form: &WicksForm) -> Result<ConstructionResult, ConstructError> {
    if !form.is_maximal() {
        return Err(ConstructError::NotMaximal);
    }
    let coloring = color_vertices(form.graph())?;
    build_v_with(form, &coloring, None)
}

/// The construction with an explicit coloring. `alpha_darts[v]`, when
/// given, names the dart at vertex `v` labelled α; the rest follow the
/// rotation as β then γ. By default α goes to the first dart of each
/// rotation.
pub fn build_v_with(
    form: &WicksForm,
    coloring: &Coloring,
    alpha_darts: Option<&[usize]>,
) -> Result<ConstructionResult, ConstructError> {
    let graph = form.graph();
    if !form.is_maximal() {
        return Err(ConstructError::NotMaximal);
    }
    if let Some(e) = graph.edges.iter().find(|e| e.is_loop()) {
        return Err(ConstructError::LoopDetected { base: e.base });
    }
    if !coloring.is_proper(graph) {
        let base = graph
            .edges
            .iter()
            .find(|e| coloring.0.get(e.tail) == coloring.0.get(e.head))
            .map_or(0, |e| e.base);
        return Err(ConstructError::ImproperColoring { base });
    }

    let mut labels = vec![Letter::new(1, true); graph.dart_count()];
    for (v, rot) in graph.rotations.iter().enumerate() {
        let start = match alpha_darts {
            Some(darts) => {
                let d = darts[v];
                rot.iter().position(|&x| x == d).ok_or(ConstructError::BadAlphaDart { vertex: v, dart: d })?
            }
            None => 0,
        };
        let mut kind = Kind::Alpha;
        for t in 0..rot.len() {
            labels[rot[(start + t) % rot.len()]] = b_letter(kind, coloring.color(v));
            kind = kind.next();
        }
    }

    let n = graph.dart_count();
    let mut circuit = Vec::with_capacity(2 * n);
    let mut pairing = vec![0usize; 2 * n];
    for i in 0..n {
        let j = graph.opposite[i];
        circuit.push(labels[i]);
        circuit.push(labels[j].inverse());
        pairing[2 * i] = 2 * j + 1;
        pairing[2 * j + 1] = 2 * i;
    }
    let mut phi = Substitution::new();
    for e in &graph.edges {
        let p = e.positive_dart;
        phi.insert(e.base, Word::new(vec![circuit[2 * p], circuit[2 * p + 1]]));
    }
    Ok(ConstructionResult {
        form: form.word().clone(),
        coloring: coloring.clone(),
        labelling: Labelling(labels),
        circuit: Word::new(circuit),
        phi,
        pairing,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VCondition {
    /// A positive letter is followed by a negative letter of another color.
    #[serde(rename = "i")]
    PositiveSuccessor,
    /// A negative letter is followed by the same-color positive letter
    /// that completes an allowed corner.
    #[serde(rename = "ii")]
    NegativeSuccessor,
    /// None of `β_j^-1 α_j`, `α_j^-1 γ_j`, `γ_j^-1 β_j` occurs.
    #[serde(rename = "iii")]
    Forbidden,
    /// The length is `24g - 12` for some g >= 1.
    #[serde(rename = "iv")]
    Length,
}

impl VCondition {
    pub fn id(self) -> &'static str {
        match self {
            VCondition::PositiveSuccessor => "i",
            VCondition::NegativeSuccessor => "ii",
            VCondition::Forbidden => "iii",
            VCondition::Length => "iv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VViolation {
    pub condition: VCondition,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VReport {
    pub violations: Vec<VViolation>,
    /// g with `|v| = 24g - 12`, when the length allows one.
    pub genus: Option<u32>,
}

impl VReport {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, c: VCondition) -> bool {
        self.violations.iter().any(|v| v.condition == c)
    }
}

impl fmt::Display for VReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.violations.first(), self.genus) {
            (None, Some(g)) => write!(f, "PASS g={g}"),
            (None, None) => f.write_str("PASS"),
            (Some(v), _) => write!(f, "FAIL {} {}", v.condition.id(), v.position),
        }
    }
}

fn is_forbidden(x: Letter, y: Letter) -> bool {
    // x^-1 y with the kinds in reverse cyclic order.
    match (b_parts(x), b_parts(y)) {
        (Some((cx, kx)), Some((cy, ky))) => {
            !x.is_positive() && y.is_positive() && cx == cy && kx == ky.next()
        }
        _ => false,
    }
}

/// Checks the four properties of a constructed word, cyclically. At most one
/// violation per condition is reported, at its first position.
pub fn check_v_properties(v: &Word) -> Result<VReport, ConstructError> {
    if let Some(&l) = v.iter().find(|l| b_parts(**l).is_none()) {
        return Err(ConstructError::OutsideB(l));
    }
    let l = v.letters();
    let n = l.len();
    let mut violations = Vec::new();
    let first = |c: VCondition, pos: usize, out: &mut Vec<VViolation>| {
        if !out.iter().any(|x| x.condition == c) {
            out.push(VViolation { condition: c, position: pos });
        }
    };
    for i in 0..n {
        let (x, y) = (l[i], l[(i + 1) % n]);
        if is_forbidden(x, y) {
            first(VCondition::Forbidden, i, &mut violations);
        } else if !successor_allowed(x, y) {
            let c = if x.is_positive() { VCondition::PositiveSuccessor } else { VCondition::NegativeSuccessor };
            first(c, i, &mut violations);
        }
    }
    let genus = if n >= 12 && n % 24 == 12 { Some(((n + 12) / 24) as u32) } else { None };
    if genus.is_none() {
        first(VCondition::Length, 0, &mut violations);
    }
    violations.sort_by_key(|v| v.condition);
    Ok(VReport { violations, genus })
}

/// No length-3 cyclic factor occurs together with its inverse.
pub fn mirror_triple_free(v: &CyclicWord) -> bool {
    let l = v.letters();
    let n = l.len();
    if n <= 2 {
        return true;
    }
    let triple = |i: usize| [l[i].signed(), l[(i + 1) % n].signed(), l[(i + 2) % n].signed()];
    let factors: HashSet<[i32; 3]> = (0..n).map(triple).collect();
    !factors.iter().any(|&[x, y, z]| factors.contains(&[-z, -y, -x]))
}

/// Letter of the square-free alphabet: variant `k` of the positive letter
/// `i` of B has id `4(i-1) + k + 1`.
pub fn e_letter(b_base: u32, variant: u32, positive: bool) -> Letter {
    Letter::new(VARIANTS * (b_base - 1) + variant + 1, positive)
}

/// `(B base, variant)` of a square-free alphabet letter.
pub fn e_parts(l: Letter) -> Option<(u32, u32)> {
    let id = l.base();
    if id == 0 || id > VARIANTS * B_SIZE {
        return None;
    }
    Some(((id - 1) / VARIANTS + 1, (id - 1) % VARIANTS))
}

/// `α_1,0`, `β_2,3^-1`, ...
pub fn e_name(l: Letter) -> Option<String> {
    let (b, k) = e_parts(l)?;
    let (color, kind) = b_parts(Letter::new(b, true))?;
    let inv = if l.is_positive() { "" } else { "^-1" };
    Some(format!("{}_{},{}{}", kind.symbol(), color, k, inv))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendEntry {
    pub id: u32,
    pub b_base: u32,
    pub variant: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareFreeResult {
    /// Same start and pairing as the source circuit.
    pub z: Word,
    pub phi: Substitution,
    pub pairing: Vec<usize>,
    /// Ids used in `z`, ascending.
    pub legend: Vec<LegendEntry>,
}

impl SquareFreeResult {
    pub fn z_cyclic(&self) -> CyclicWord {
        CyclicWord::new(self.z.clone())
    }

    /// Replaces every letter by its letter of B.
    pub fn project(&self) -> Word {
        Word::new(
            self.z
                .iter()
                .map(|&l| Letter::new(e_parts(l).expect("letter of z").0, l.is_positive()))
                .collect(),
        )
    }
}

/// Relabels the positive occurrences of each letter of B along the circuit:
/// the first by the special variant 0, the j-th by the (j-1)-th letter of a
/// Thue word over variants 1..3. Each paired negative occurrence receives
/// the inverse of its partner's image.
pub fn build_z(res: &ConstructionResult) -> Result<SquareFreeResult, ConstructError> {
    let v = res.circuit.letters();
    let n = v.len();
    if res.pairing.len() != n {
        return Err(ConstructError::InconsistentPairing(0));
    }
    for i in 0..n {
        let j = res.pairing[i];
        if j >= n || res.pairing[j] != i || !v[j].is_inverse_of(v[i]) {
            return Err(ConstructError::InconsistentPairing(i));
        }
    }
    if let Some(&l) = v.iter().find(|l| b_parts(**l).is_none()) {
        return Err(ConstructError::OutsideB(l));
    }

    let mut z: Vec<Option<Letter>> = vec![None; n];
    for b in 1..=B_SIZE {
        let positions: Vec<usize> = (0..n).filter(|&i| v[i] == Letter::new(b, true)).collect();
        let thue = thue_word(positions.len().saturating_sub(1));
        for (occ, &i) in positions.iter().enumerate() {
            let variant = if occ == 0 { 0 } else { thue[occ - 1].base() };
            let image = e_letter(b, variant, true);
            z[i] = Some(image);
            z[res.pairing[i]] = Some(image.inverse());
        }
    }
    let z: Word = Word::new(z.into_iter().map(|x| x.expect("every position is paired")).collect());

    // The form letter at dart p spells positions 2p, 2p+1 of the circuit.
    let mut phi = Substitution::new();
    for (base, image) in res.phi.iter() {
        let p = res
            .form
            .letters()
            .iter()
            .position(|l| l.base() == base && l.is_positive())
            .expect("phi is defined on the form's bases");
        debug_assert_eq!(image, &Word::new(vec![v[2 * p], v[2 * p + 1]]));
        phi.insert(base, Word::new(vec![z[2 * p], z[2 * p + 1]]));
    }

    let mut ids: Vec<u32> = z.iter().map(|l| l.base()).collect();
    ids.sort_unstable();
    ids.dedup();
    let legend = ids
        .into_iter()
        .map(|id| {
            let (b_base, variant) = e_parts(Letter::new(id, true)).unwrap();
            LegendEntry { id, b_base, variant }
        })
        .collect();
    Ok(SquareFreeResult { z, phi, pairing: res.pairing.clone(), legend })
}
