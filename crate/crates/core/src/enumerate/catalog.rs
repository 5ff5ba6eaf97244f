use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surface::{canonical_form, WicksForm};
use crate::words::CyclicWord;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("catalog line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn parse_err(line: usize, message: impl Into<String>) -> CatalogError {
    CatalogError::Parse { line, message: message.into() }
}

/// Deduplicated canonical Wicks forms of one genus, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub genus: u32,
    pub maximal_only: bool,
    /// Generation ran to exhaustion over the full length range.
    pub complete: bool,
    forms: Vec<CyclicWord>,
}

impl Catalog {
    pub(crate) fn from_sorted_unchecked(
        genus: u32,
        maximal_only: bool,
        complete: bool,
        forms: Vec<CyclicWord>,
    ) -> Catalog {
        Catalog { genus, maximal_only, complete, forms }
    }

    /// Builds a catalog from arbitrary forms: each is validated,
    /// canonicalised, then the list is sorted and deduplicated.
    pub fn from_forms(
        genus: u32,
        maximal_only: bool,
        complete: bool,
        forms: impl IntoIterator<Item = CyclicWord>,
    ) -> Result<Catalog, String> {
        let mut out = Vec::new();
        for f in forms {
            let canon = check_entry(genus, maximal_only, &f)?;
            out.push(canon);
        }
        out.sort();
        out.dedup();
        Ok(Catalog { genus, maximal_only, complete, forms: out })
    }

    pub fn forms(&self) -> &[CyclicWord] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn header(&self) -> String {
        format!(
            "wicks-catalog genus={} maximal={} complete={} count={}",
            self.genus,
            u8::from(self.maximal_only),
            u8::from(self.complete),
            self.forms.len()
        )
    }

    pub fn to_text(&self) -> String {
        let mut s = self.header();
        s.push('\n');
        for f in &self.forms {
            writeln!(s, "{f}").unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Catalog, CatalogError> {
        let mut lines = text.split('\n');
        let header = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let (genus, maximal_only, complete, count) = parse_header(header)?;
        let mut forms: Vec<CyclicWord> = Vec::with_capacity(count);
        let mut body: Vec<&str> = lines.collect();
        // One trailing newline terminates the last entry.
        if body.last() == Some(&"") {
            body.pop();
        }
        for (k, raw) in body.iter().enumerate() {
            let line = k + 2;
            let word: CyclicWord = raw.parse().map_err(|e| parse_err(line, format!("{e}")))?;
            let canon = check_entry(genus, maximal_only, &word).map_err(|m| parse_err(line, m))?;
            if canon != word {
                return Err(parse_err(line, format!("entry is not in canonical form (expected `{canon}`)")));
            }
            if word.to_string() != *raw {
                return Err(parse_err(line, "entry is not written as its stored representative"));
            }
            if let Some(prev) = forms.last() {
                if prev >= &word {
                    return Err(parse_err(line, "entries must be strictly increasing"));
                }
            }
            forms.push(word);
        }
        if forms.len() != count {
            return Err(parse_err(1, format!("header count={count} but {} entries follow", forms.len())));
        }
        Ok(Catalog { genus, maximal_only, complete, forms })
    }
}

fn check_entry(genus: u32, maximal_only: bool, word: &CyclicWord) -> Result<CyclicWord, String> {
    let form = WicksForm::new(word.clone()).map_err(|e| e.to_string())?;
    if form.genus() != genus {
        return Err(format!("entry has genus {} but catalog genus is {genus}", form.genus()));
    }
    if maximal_only && !form.is_maximal() {
        return Err(format!("entry of length {} is not maximal for genus {genus}", form.len()));
    }
    canonical_form(word).map_err(|e| e.to_string())
}

fn parse_header(line: &str) -> Result<(u32, bool, bool, usize), CatalogError> {
    let mut parts = line.split(' ');
    if parts.next() != Some("wicks-catalog") {
        return Err(parse_err(1, "header must start with `wicks-catalog`"));
    }
    let mut field = |name: &str| -> Result<u64, CatalogError> {
        let part = parts.next().ok_or_else(|| parse_err(1, format!("missing `{name}=`")))?;
        let value = part
            .strip_prefix(name)
            .and_then(|r| r.strip_prefix('='))
            .ok_or_else(|| parse_err(1, format!("expected `{name}=`, found `{part}`")))?;
        value.parse().map_err(|_| parse_err(1, format!("bad value for `{name}`: `{value}`")))
    };
    let genus = field("genus")?;
    let maximal = field("maximal")?;
    let complete = field("complete")?;
    let count = field("count")?;
    if parts.next().is_some() {
        return Err(parse_err(1, "trailing fields in header"));
    }
    if genus == 0 || genus > u32::MAX as u64 {
        return Err(parse_err(1, "genus must be positive"));
    }
    if maximal > 1 || complete > 1 {
        return Err(parse_err(1, "flags must be 0 or 1"));
    }
    Ok((genus as u32, maximal == 1, complete == 1, count as usize))
}

pub fn write_catalog(path: impl AsRef<Path>, catalog: &Catalog) -> Result<(), CatalogError> {
    fs::write(path, catalog.to_text())?;
    Ok(())
}

pub fn read_catalog(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
    Catalog::parse(&fs::read_to_string(path)?)
}
