//! Finite presentations and their text format.
//!
//! ```text
//! # genus two surface
//! gens: a b c d
//! rel: a b a^-1 b^-1 c d c^-1 d^-1
//! ```
//!
//! A word is a whitespace-separated list of `name` or `name^k` terms with
//! `k` a nonzero integer. Serialization merges runs of equal letters into a
//! single power and writes the exponent unless it is `1`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// An ordered list of generator names. Order is significant: it fixes
/// letter codes, enumeration order and tie-breaking everywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut index = HashMap::new();
        let mut out = Vec::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref();
            if !is_valid_name(n) {
                return Err(Error::InvalidName(n.to_string()));
            }
            if index.insert(n.to_string(), i).is_some() {
                return Err(Error::DuplicateGenerator(n.to_string()));
            }
            out.push(n.to_string());
        }
        Ok(Alphabet { names: out, index })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, gen: usize) -> &str {
        &self.names[gen]
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn letter(&self, name: &str) -> Result<Letter> {
        self.lookup(name)
            .map(Letter::pos)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Parses a word; the result is not reduced.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        self.parse_word_at(text, 0)
    }

    fn parse_word_at(&self, text: &str, line: usize) -> Result<Word> {
        let mut letters = Vec::new();
        for term in text.split_whitespace() {
            let (name, exp) = match term.split_once('^') {
                Some((name, exp)) => {
                    let k: i64 = exp.parse().map_err(|_| Error::Parse {
                        line,
                        message: format!("bad exponent in `{term}`"),
                    })?;
                    if k == 0 {
                        return Err(Error::Parse {
                            line,
                            message: format!("zero exponent in `{term}`"),
                        });
                    }
                    (name, k)
                }
                None => (term, 1),
            };
            let gen = self
                .lookup(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            let l = Letter::new(gen, exp < 0);
            letters.extend(std::iter::repeat(l).take(exp.unsigned_abs() as usize));
        }
        Ok(Word::from_letters(letters))
    }

    /// Canonical text form: single spaces, runs merged into powers.
    pub fn format_word(&self, w: &Word) -> String {
        let mut out = String::new();
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let l = letters[i];
            let mut j = i;
            while j < letters.len() && letters[j] == l {
                j += 1;
            }
            let k = (j - i) as i64 * l.sign();
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(self.name(l.gen()));
            if k != 1 {
                let _ = write!(out, "^{k}");
            }
            i = j;
        }
        out
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.iter().find(|l| l.gen() >= self.rank()) {
            Some(l) => Err(Error::Alphabet {
                index: l.gen(),
                rank: self.rank(),
            }),
            None => Ok(()),
        }
    }
}

/// `⟨generators | relators⟩` with relators stored freely and cyclically
/// reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Self> {
        let mut rels = Vec::with_capacity(relators.len());
        for r in relators {
            alphabet.check_word(&r)?;
            rels.push(r.cyclic_reduce().core);
        }
        Ok(Presentation {
            alphabet,
            relators: rels,
        })
    }

    pub fn free<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        Self::new(Alphabet::new(names)?, Vec::new())
    }

    /// Convenience constructor from generator names and relator strings.
    pub fn from_strs<S: AsRef<str>>(names: &[S], relators: &[&str]) -> Result<Self> {
        let alphabet = Alphabet::new(names)?;
        let rels = relators
            .iter()
            .map(|r| alphabet.parse_word(r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, rels)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generators(&self) -> Vec<Word> {
        (0..self.rank()).map(Word::letter).collect()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        self.alphabet.parse_word(text)
    }

    pub fn format_word(&self, w: &Word) -> String {
        self.alphabet.format_word(w)
    }

    /// Same generators, extra relators appended.
    pub fn with_extra_relators(&self, extra: &[Word]) -> Result<Self> {
        let mut rels = self.relators.clone();
        rels.extend(extra.iter().cloned());
        Self::new(self.alphabet.clone(), rels)
    }

    pub fn without_relator(&self, index: usize) -> Self {
        let mut p = self.clone();
        p.relators.remove(index);
        p
    }

    /// Replaces relators wholesale; used to build deliberately broken
    /// presentations in tests and for permuted copies.
    pub fn with_relators(&self, relators: Vec<Word>) -> Result<Self> {
        Self::new(self.alphabet.clone(), relators)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut alphabet: Option<Alphabet> = None;
        let mut relators = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(':').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected `gens:` or `rel:`, found `{line}`"),
            })?;
            match key.trim() {
                "gens" => {
                    if alphabet.is_some() {
                        return Err(Error::Parse {
                            line: line_no,
                            message: "duplicate `gens:` line".into(),
                        });
                    }
                    let names: Vec<&str> = rest.split_whitespace().collect();
                    alphabet = Some(Alphabet::new(&names)?);
                }
                "rel" => {
                    let a = alphabet.as_ref().ok_or_else(|| Error::Parse {
                        line: line_no,
                        message: "`rel:` before `gens:`".into(),
                    })?;
                    relators.push(a.parse_word_at(rest, line_no)?);
                }
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        let alphabet = alphabet.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing `gens:` line".into(),
        })?;
        Self::new(alphabet, relators)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("gens:");
        for n in self.alphabet.names() {
            out.push(' ');
            out.push_str(n);
        }
        out.push('\n');
        for r in &self.relators {
            out.push_str("rel:");
            let w = self.format_word(r);
            if !w.is_empty() {
                out.push(' ');
                out.push_str(&w);
            }
            out.push('\n');
        }
        out
    }

    /// Total number of relator letters.
    pub fn total_relator_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_serialize() {
        let text = "# a comment\ngens: a b\n\nrel: a a a b^-1 b^-1  # trailing\nrel: b^3\n";
        let p = Presentation::parse(text).unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.relators().len(), 2);
        assert_eq!(p.to_text(), "gens: a b\nrel: a^3 b^-2\nrel: b^3\n");
        assert_eq!(Presentation::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn relators_are_cyclically_reduced_on_construction() {
        let p = Presentation::from_strs(&["a", "b"], &["a b a^-1"]).unwrap();
        assert_eq!(p.format_word(&p.relators()[0]), "b");
    }

    #[test]
    fn exponent_minus_one_is_written() {
        let a = Alphabet::new(&["x"]).unwrap();
        assert_eq!(a.format_word(&Word::power_of(0, -1)), "x^-1");
        assert_eq!(a.format_word(&Word::letter(0)), "x");
        assert_eq!(a.format_word(&Word::empty()), "");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Presentation::parse("rel: a"), Err(Error::Parse { .. })));
        assert!(matches!(
            Presentation::parse("gens: a\nrel: b"),
            Err(Error::UnknownGenerator(_))
        ));
        assert!(matches!(
            Presentation::parse("gens: a a"),
            Err(Error::DuplicateGenerator(_))
        ));
        assert!(matches!(Presentation::parse("gens: 1a"), Err(Error::InvalidName(_))));
        assert!(matches!(
            Presentation::parse("gens: a\nrel: a^0"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(Presentation::parse("gens: a^b"), Err(Error::InvalidName(_))));
    }

    #[test]
    fn empty_relator_survives_round_trip() {
        let p = Presentation::from_strs(&["a"], &["a a^-1"]).unwrap();
        assert!(p.relators()[0].is_empty());
        assert_eq!(Presentation::parse(&p.to_text()).unwrap(), p);
    }
}
