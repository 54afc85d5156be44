//! Words in a free group on an ordered generating set.
//!
//! Letters are addressed by generator index, so a [`Word`] only has meaning
//! relative to an alphabet (see [`crate::presentation::Alphabet`]).

use std::fmt;

/// A signed generator: `gen^{+1}` or `gen^{-1}`.
///
/// The packed code `2 * gen + inverted` orders letters by generator first,
/// positive before negative. Enumeration order relies on this.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    pub fn new(gen: usize, inverted: bool) -> Self {
        Letter((gen as u32) << 1 | inverted as u32)
    }

    pub fn pos(gen: usize) -> Self {
        Self::new(gen, false)
    }

    pub fn neg(gen: usize) -> Self {
        Self::new(gen, true)
    }

    pub fn from_code(code: u32) -> Self {
        Letter(code)
    }

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn gen(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "g{}⁻", self.gen())
        } else {
            write!(f, "g{}", self.gen())
        }
    }
}

/// A finite sequence of letters. Not necessarily reduced; most operations
/// return freely reduced words.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Wraps letters as-is, without reduction.
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    /// Builds a reduced word.
    pub fn reduced<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    pub fn letter(gen: usize) -> Self {
        Word(vec![Letter::pos(gen)])
    }

    /// `gen^exp` as a reduced word.
    pub fn power_of(gen: usize, exp: i64) -> Self {
        let l = Letter::new(gen, exp < 0);
        Word(vec![l; exp.unsigned_abs() as usize])
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

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(&f), Some(&l)) => self.0.len() == 1 || f != l.inverse(),
                _ => true,
            }
    }

    pub fn free_reduce(&self) -> Word {
        Word::reduced(self.0.iter().copied())
    }

    /// Formal inverse; reduced whenever `self` is.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Reduced product `self · other`.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.free_reduce().0;
        for &l in &other.0 {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    /// Reduced `self^exp`; negative exponents invert.
    pub fn pow(&self, exp: i64) -> Word {
        let base = if exp < 0 { self.inverse() } else { self.free_reduce() };
        let mut out = Vec::new();
        for _ in 0..exp.unsigned_abs() {
            for &l in &base.0 {
                push_reduced(&mut out, l);
            }
        }
        Word(out)
    }

    /// Reduced `other⁻¹ · self · other`.
    pub fn conjugate_by(&self, other: &Word) -> Word {
        other.inverse().mul(self).mul(other)
    }

    /// Reduced product of a sequence of words.
    pub fn product<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> Word {
        let mut out = Vec::new();
        for w in words {
            for &l in &w.0 {
                push_reduced(&mut out, l);
            }
        }
        Word(out)
    }

    /// Cyclic rotation starting at `offset`: `w[offset..] · w[..offset]`.
    pub fn rotate(&self, offset: usize) -> Word {
        if self.0.is_empty() {
            return Word::empty();
        }
        let k = offset % self.0.len();
        let mut v = Vec::with_capacity(self.0.len());
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    pub fn suffix_from(&self, n: usize) -> Word {
        Word(self.0[n..].to_vec())
    }

    /// Splits a freely reduced word as `conj · core · conj⁻¹` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> CyclicDecomposition {
        let w = self.free_reduce();
        let n = w.0.len();
        let mut k = 0;
        while 2 * k + 1 < n && w.0[k] == w.0[n - 1 - k].inverse() {
            k += 1;
        }
        CyclicDecomposition {
            core: Word(w.0[k..n - k].to_vec()),
            conj: Word(w.0[..k].to_vec()),
        }
    }

    /// Whether every letter references a generator below `rank`.
    pub fn within_rank(&self, rank: usize) -> bool {
        self.0.iter().all(|l| l.gen() < rank)
    }

    /// Exponent sum per generator.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0; rank];
        for l in &self.0 {
            v[l.gen()] += l.sign();
        }
        v
    }

    /// Smallest `p` dividing the length with `w` equal to its rotation by `p`.
    pub fn cyclic_period(&self) -> usize {
        let n = self.0.len();
        (1..=n)
            .filter(|p| n % p == 0)
            .find(|&p| (0..n).all(|i| self.0[i] == self.0[(i + p) % n]))
            .unwrap_or(n)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

/// Result of [`Word::cyclic_reduce`]: `w = conj · core · conj⁻¹` freely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicDecomposition {
    pub core: Word,
    pub conj: Word,
}

/// Every freely reduced word over `rank` generators of length at most
/// `max_len`, by length and then lexicographically (generator order,
/// positive letter before its inverse). Each word appears exactly once.
#[derive(Clone, Debug)]
pub struct WordEnumerator {
    rank: usize,
    max_len: usize,
    current: Vec<u32>,
    started: bool,
    done: bool,
}

impl WordEnumerator {
    pub fn new(rank: usize, max_len: usize) -> Self {
        WordEnumerator {
            rank,
            max_len,
            current: Vec::new(),
            started: false,
            done: false,
        }
    }

    fn letters(&self) -> u32 {
        2 * self.rank as u32
    }

    fn allowed(prev: Option<u32>, code: u32) -> bool {
        prev.map_or(true, |p| p != code ^ 1)
    }

    /// Smallest letter code `>= from` that may follow `prev`.
    fn smallest_from(&self, prev: Option<u32>, from: u32) -> Option<u32> {
        (from..self.letters()).find(|&c| Self::allowed(prev, c))
    }

    fn fill_from(&mut self, start: usize, len: usize) -> bool {
        self.current.truncate(start);
        while self.current.len() < len {
            let prev = self.current.last().copied();
            match self.smallest_from(prev, 0) {
                Some(c) => self.current.push(c),
                None => return false,
            }
        }
        true
    }

    fn advance(&mut self) -> bool {
        let len = self.current.len();
        let mut pos = len;
        while pos > 0 {
            pos -= 1;
            let prev = if pos == 0 { None } else { Some(self.current[pos - 1]) };
            if let Some(c) = self.smallest_from(prev, self.current[pos] + 1) {
                self.current[pos] = c;
                if self.fill_from(pos + 1, len) {
                    return true;
                }
            }
        }
        // exhausted this length
        if len >= self.max_len || self.rank == 0 {
            return false;
        }
        self.fill_from(0, len + 1)
    }
}

impl Iterator for WordEnumerator {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(self.current.iter().map(|&c| Letter::from_code(c)).collect())
    }
}

/// Number of freely reduced words of length exactly `len` over `rank`
/// generators: `2r (2r - 1)^{len - 1}`.
pub fn reduced_word_count(rank: usize, len: usize) -> u64 {
    if len == 0 {
        return 1;
    }
    let r = rank as u64;
    2 * r * (2 * r - 1).pow(len as u32 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Letter {
        Letter::pos(0)
    }
    fn b() -> Letter {
        Letter::pos(1)
    }

    #[test]
    fn free_reduce_examples() {
        let w = Word::from_letters(vec![a(), a().inverse(), b()]);
        assert_eq!(w.free_reduce(), Word::from_letters(vec![b()]));
        assert_eq!(Word::empty().free_reduce(), Word::empty());
        let w = Word::from_letters(vec![a(), b(), b().inverse(), a()]);
        assert_eq!(w.free_reduce(), Word::from_letters(vec![a(), a()]));
    }

    #[test]
    fn cyclic_reduce_examples() {
        let w = Word::from_letters(vec![a(), b(), a().inverse()]);
        let d = w.cyclic_reduce();
        assert_eq!(d.core, Word::letter(1));
        assert_eq!(d.conj, Word::letter(0));

        let d = Word::letter(1).cyclic_reduce();
        assert_eq!(d.core, Word::letter(1));
        assert!(d.conj.is_empty());

        let w = Word::product([&Word::power_of(0, 2), &Word::letter(1), &Word::power_of(0, -2)]);
        let d = w.cyclic_reduce();
        assert_eq!(d.core, Word::letter(1));
        assert_eq!(d.conj, Word::power_of(0, 2));
    }

    #[test]
    fn cyclic_reduce_of_inverse_pair_is_empty() {
        // a a^-1 is not reduced; after reduction it is empty
        let w = Word::from_letters(vec![a(), a().inverse()]);
        let d = w.cyclic_reduce();
        assert!(d.core.is_empty() && d.conj.is_empty());
    }

    #[test]
    fn enumeration_order_and_counts() {
        let words: Vec<Word> = WordEnumerator::new(1, 1).collect();
        assert_eq!(words, vec![Word::empty(), Word::letter(0), Word::power_of(0, -1)]);

        let words: Vec<Word> = WordEnumerator::new(2, 1).collect();
        assert_eq!(
            words,
            vec![
                Word::empty(),
                Word::letter(0),
                Word::power_of(0, -1),
                Word::letter(1),
                Word::power_of(1, -1)
            ]
        );
        assert_eq!(WordEnumerator::new(2, 2).count(), 17);
        assert_eq!(WordEnumerator::new(0, 3).count(), 1);
    }

    #[test]
    fn enumeration_exhaustive_small() {
        for rank in 1..=3 {
            for max_len in 0..=4 {
                let words: Vec<Word> = WordEnumerator::new(rank, max_len).collect();
                let expected: u64 = (0..=max_len).map(|n| reduced_word_count(rank, n)).sum();
                assert_eq!(words.len() as u64, expected);
                for pair in words.windows(2) {
                    let key = |w: &Word| (w.len(), w.clone());
                    assert!(key(&pair[0]) < key(&pair[1]));
                }
                assert!(words.iter().all(|w| w.is_reduced()));
            }
        }
    }

    #[test]
    fn period_detects_proper_powers() {
        assert_eq!(Word::power_of(0, 3).cyclic_period(), 1);
        let ab = Word::from_letters(vec![a(), b()]);
        assert_eq!(ab.pow(2).cyclic_period(), 2);
        assert_eq!(ab.cyclic_period(), 2);
    }
}
