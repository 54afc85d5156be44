//! Metric small cancellation: symmetrized relator sets, piece lengths and
//! Dehn's algorithm.
//!
//! The symmetrized set is stored implicitly: each element is a rotation of a
//! relator or of its inverse, addressed by `(base word, offset)`. Elements are
//! kept sorted lexicographically, which makes two things cheap:
//!
//! * the longest common prefix of an element with any *other* element is
//!   attained at one of its two sorted neighbours, so all pieces come from
//!   adjacent pairs;
//! * the elements sharing a given prefix with a word form a contiguous range,
//!   so Dehn's algorithm narrows one range per letter instead of scanning all
//!   elements.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::presentation::{Alphabet, Presentation};
use crate::word::{Letter, Word};

/// Where a symmetrized element came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Origin {
    pub relator: usize,
    pub inverted: bool,
    pub rotation: usize,
}

#[derive(Clone, Copy, Debug)]
struct Element {
    base: u32,
    offset: u32,
    len: u32,
    /// Position in origin order `(relator, inverted, rotation)`; lower wins
    /// ties in Dehn's algorithm.
    rank: u32,
}

/// Closure of the relators under cyclic rotation and inversion.
#[derive(Clone, Debug)]
pub struct SymmetrizedSet {
    base: Presentation,
    /// `r_0 r_0, r_0^{-1} r_0^{-1}, r_1 r_1, ...`; every element is a slice.
    doubled: Vec<Vec<Letter>>,
    /// Sorted lexicographically, duplicates removed.
    elements: Vec<Element>,
    report: SmallCancellationReport,
    certified: bool,
}

/// Piece statistics of a symmetrized set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallCancellationReport {
    /// Longest piece overall.
    pub max_piece_len: usize,
    /// Shortest relator length (0 when there are no relators).
    pub min_relator_len: usize,
    /// Largest `piece / |r|` over elements `r` and the pieces they contain.
    /// The condition C'(λ) holds exactly when this is below λ.
    pub ratio: Ratio<u64>,
    /// Two distinct elements whose common prefix has length `max_piece_len`.
    pub witness: Option<(Word, Word)>,
    /// Some relator is a proper power.
    pub proper_power: bool,
}

impl SmallCancellationReport {
    /// C'(λ) and no proper powers.
    pub fn satisfies(&self, lambda: Ratio<u64>) -> bool {
        self.ratio < lambda && !self.proper_power
    }

    /// `key: value` record with the keys `max_piece_len`, `min_relator_len`,
    /// `ratio`, `witness_a`, `witness_b`, `proper_power`.
    pub fn to_record(&self, alphabet: &Alphabet) -> String {
        let (wa, wb) = match &self.witness {
            Some((a, b)) => (alphabet.format_word(a), alphabet.format_word(b)),
            None => (String::new(), String::new()),
        };
        let mut out = String::new();
        let _ = writeln!(out, "max_piece_len: {}", self.max_piece_len);
        let _ = writeln!(out, "min_relator_len: {}", self.min_relator_len);
        let _ = writeln!(out, "ratio: {}", self.ratio);
        let _ = writeln!(out, "witness_a: {wa}");
        let _ = writeln!(out, "witness_b: {wb}");
        let _ = writeln!(out, "proper_power: {}", self.proper_power);
        out
    }
}

pub fn one_sixth() -> Ratio<u64> {
    Ratio::new(1, 6)
}

impl SymmetrizedSet {
    pub fn new(p: &Presentation) -> Result<Self> {
        let mut doubled = Vec::with_capacity(2 * p.relators().len());
        let mut proper_power = false;
        for (i, r) in p.relators().iter().enumerate() {
            if r.is_empty() {
                return Err(Error::DegenerateRelator(i));
            }
            proper_power |= r.cyclic_period() < r.len();
            for w in [r.clone(), r.inverse()] {
                doubled.push([w.letters(), w.letters()].concat());
            }
        }

        let mut elements = Vec::new();
        for (b, c) in doubled.iter().enumerate() {
            let len = c.len() / 2;
            for offset in 0..len {
                elements.push(Element {
                    base: b as u32,
                    offset: offset as u32,
                    len: len as u32,
                    rank: elements.len() as u32,
                });
            }
        }

        let mut set = SymmetrizedSet {
            base: p.clone(),
            doubled,
            elements,
            report: SmallCancellationReport {
                max_piece_len: 0,
                min_relator_len: 0,
                ratio: Ratio::new(0, 1),
                witness: None,
                proper_power,
            },
            certified: false,
        };
        set.sort_and_dedup();
        set.report = set.compute_report(proper_power);
        set.certified = set.report.satisfies(one_sixth());
        Ok(set)
    }

    #[inline]
    fn slice(&self, e: &Element) -> &[Letter] {
        let start = e.offset as usize;
        &self.doubled[e.base as usize][start..start + e.len as usize]
    }

    #[inline]
    fn at(&self, e: &Element, k: usize) -> Letter {
        self.slice(e)[k]
    }

    fn compare(&self, x: &Element, y: &Element) -> Ordering {
        self.slice(x).cmp(self.slice(y))
    }

    fn lcp(&self, x: &Element, y: &Element) -> usize {
        self.slice(x)
            .iter()
            .zip(self.slice(y))
            .take_while(|(a, b)| a == b)
            .count()
    }

    fn sort_and_dedup(&mut self) {
        let mut els = std::mem::take(&mut self.elements);
        els.sort_by(|x, y| self.compare(x, y).then(x.rank.cmp(&y.rank)));
        let mut out: Vec<Element> = Vec::with_capacity(els.len());
        for e in els {
            match out.last() {
                Some(prev) if self.compare(prev, &e) == Ordering::Equal => {}
                _ => out.push(e),
            }
        }
        self.elements = out;
    }

    fn compute_report(&self, proper_power: bool) -> SmallCancellationReport {
        let els = &self.elements;
        let adj: Vec<usize> = els.windows(2).map(|p| self.lcp(&p[0], &p[1])).collect();
        let mut max_piece = 0;
        let mut witness = None;
        for (i, &l) in adj.iter().enumerate() {
            if l > max_piece {
                max_piece = l;
                witness = Some((i, i + 1));
            }
        }
        let mut ratio = Ratio::new(0u64, 1);
        for (i, e) in els.iter().enumerate() {
            let left = if i > 0 { adj[i - 1] } else { 0 };
            let right = adj.get(i).copied().unwrap_or(0);
            let piece = left.max(right) as u64;
            let r = Ratio::new(piece, e.len as u64);
            if r > ratio {
                ratio = r;
            }
        }
        SmallCancellationReport {
            max_piece_len: max_piece,
            min_relator_len: self.base.relators().iter().map(Word::len).min().unwrap_or(0),
            ratio,
            witness: witness.map(|(i, j)| (self.materialize(&els[i]), self.materialize(&els[j]))),
            proper_power,
        }
    }

    fn materialize(&self, e: &Element) -> Word {
        Word::from_letters(self.slice(e).to_vec())
    }

    pub fn presentation(&self) -> &Presentation {
        &self.base
    }

    pub fn report(&self) -> &SmallCancellationReport {
        &self.report
    }

    /// Whether the presentation satisfies C'(1/6) without proper powers, so
    /// that Dehn's algorithm decides the word problem.
    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements in sorted order.
    pub fn words(&self) -> Vec<Word> {
        self.elements.iter().map(|e| self.materialize(e)).collect()
    }

    pub fn origin(&self, index: usize) -> Origin {
        let e = &self.elements[index];
        Origin {
            relator: e.base as usize / 2,
            inverted: e.base % 2 == 1,
            rotation: e.offset as usize,
        }
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.elements
            .binary_search_by(|e| {
                let n = (e.len as usize).min(w.len());
                for k in 0..n {
                    match self.at(e, k).cmp(&w.letters()[k]) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                (e.len as usize).cmp(&w.len())
            })
            .is_ok()
    }

    /// Narrows `range` (elements sharing a prefix of length `depth` with the
    /// probe) to those whose letter at `depth` is `l`.
    fn narrow(&self, lo: usize, hi: usize, depth: usize, l: Letter) -> (usize, usize) {
        let slice = &self.elements[lo..hi];
        let key = |e: &Element| -> i64 {
            if e.len as usize <= depth {
                -1
            } else {
                self.at(e, depth).code() as i64
            }
        };
        let target = l.code() as i64;
        let a = slice.partition_point(|e| key(e) < target);
        let b = slice.partition_point(|e| key(e) <= target);
        (lo + a, lo + b)
    }

    /// Finds the Dehn move at position `i` of `w`, if any: the longest prefix
    /// `p` of an element `r = p q` with `|p| > |r| / 2`, ties broken by origin.
    fn match_at(&self, w: &[Letter], i: usize) -> Option<(usize, usize)> {
        let mut ranges = vec![(0usize, self.elements.len())];
        let mut depth = 0;
        while i + depth < w.len() {
            let (lo, hi) = ranges[depth];
            let (a, b) = self.narrow(lo, hi, depth, w[i + depth]);
            if a == b {
                break;
            }
            ranges.push((a, b));
            depth += 1;
        }
        // ranges[d] holds the elements agreeing with w[i..i+d]
        let half_min = self.report.min_relator_len / 2;
        for d in (1..ranges.len()).rev() {
            if d <= half_min {
                break;
            }
            let (lo, hi) = ranges[d];
            let inner = ranges.get(d + 1).copied();
            let mut best: Option<&Element> = None;
            let mut best_idx = 0;
            for idx in lo..hi {
                if let Some((ilo, ihi)) = inner {
                    if idx >= ilo && idx < ihi {
                        continue;
                    }
                }
                let e = &self.elements[idx];
                if (e.len as usize) < 2 * d && best.map_or(true, |b| e.rank < b.rank) {
                    best = Some(e);
                    best_idx = idx;
                }
            }
            if best.is_some() {
                return Some((best_idx, d));
            }
        }
        None
    }

    /// Dehn's algorithm: repeatedly replaces the leftmost, longest (then
    /// lowest-origin) subword `p` with `r = p q` in the set and `|p| > |r|/2`
    /// by `q⁻¹`. Always returns a word equal to `w` in the group; it decides
    /// triviality only when [`Self::is_certified`] holds.
    pub fn dehn_reduce(&self, w: &Word) -> Word {
        let mut cur = w.free_reduce().into_letters();
        if self.elements.is_empty() {
            return Word::from_letters(cur);
        }
        let half_min = self.report.min_relator_len / 2;
        'outer: loop {
            if cur.len() <= half_min {
                break;
            }
            for i in 0..cur.len() - half_min {
                if let Some((idx, d)) = self.match_at(&cur, i) {
                    let e = self.elements[idx];
                    let q_inv: Vec<Letter> = (d..e.len as usize).rev().map(|k| self.at(&e, k).inverse()).collect();
                    let mut next = Vec::with_capacity(cur.len());
                    next.extend_from_slice(&cur[..i]);
                    next.extend(q_inv);
                    next.extend_from_slice(&cur[i + d..]);
                    cur = Word::from_letters(next).free_reduce().into_letters();
                    continue 'outer;
                }
            }
            break;
        }
        Word::from_letters(cur)
    }

    /// Triviality via Dehn's algorithm; refuses uncertified presentations.
    pub fn word_problem(&self, w: &Word) -> Result<bool> {
        if !self.certified {
            return Err(Error::CertificateMissing);
        }
        Ok(self.dehn_reduce(w).is_empty())
    }

    /// Shortest conjugate reachable by alternating cyclic reduction and Dehn
    /// reduction of rotations, returned in its least rotation.
    pub fn cyclic_dehn_form(&self, w: &Word) -> Result<CyclicForm> {
        if !self.certified {
            return Err(Error::CertificateMissing);
        }
        let d = self.dehn_reduce(w).cyclic_reduce();
        let mut conj = d.conj;
        let mut form = d.core;
        'outer: loop {
            for k in 1..form.len() {
                let rot = form.rotate(k);
                let r = self.dehn_reduce(&rot);
                if r.len() < form.len() {
                    conj = conj.mul(&form.prefix(k));
                    let cr = r.cyclic_reduce();
                    conj = conj.mul(&cr.conj);
                    form = cr.core;
                    continue 'outer;
                }
            }
            break;
        }
        let k = least_rotation(&form);
        if k > 0 {
            conj = conj.mul(&form.prefix(k));
            form = form.rotate(k);
        }
        Ok(CyclicForm { form, conjugator: conj })
    }
}

/// `w = conjugator · form · conjugator⁻¹` in the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicForm {
    pub form: Word,
    pub conjugator: Word,
}

/// Offset of the lexicographically least rotation (lowest offset on ties).
pub fn least_rotation(w: &Word) -> usize {
    let n = w.len();
    let l = w.letters();
    let mut best = 0;
    for k in 1..n {
        for j in 0..n {
            match l[(k + j) % n].cmp(&l[(best + j) % n]) {
                Ordering::Less => {
                    best = k;
                    break;
                }
                Ordering::Greater => break,
                Ordering::Equal => {}
            }
        }
    }
    best
}

/// Piece report of a presentation.
pub fn piece_report(p: &Presentation) -> Result<SmallCancellationReport> {
    Ok(SymmetrizedSet::new(p)?.report.clone())
}

/// Whether `p` satisfies C'(λ) with no proper-power relators.
pub fn verify_metric(p: &Presentation, lambda: Ratio<u64>) -> Result<(bool, SmallCancellationReport)> {
    if lambda == Ratio::new(0, 1) || lambda > Ratio::new(1, 2) {
        return Err(Error::Input(format!("lambda {lambda} outside (0, 1/2]")));
    }
    let report = piece_report(p)?;
    Ok((report.satisfies(lambda), report))
}

pub fn parse_ratio(text: &str) -> Result<Ratio<u64>> {
    let bad = || Error::Input(format!("bad rational `{text}`"));
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (
            n.trim().parse().map_err(|_| bad())?,
            d.trim().parse().map_err(|_| bad())?,
        ),
        None => (text.trim().parse().map_err(|_| bad())?, 1),
    };
    if d == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surface() -> Presentation {
        Presentation::from_strs(&["a", "b", "c", "d"], &["a b a^-1 b^-1 c d c^-1 d^-1"]).unwrap()
    }

    /// Brute-force longest common prefix over all distinct pairs.
    fn brute_max_piece(words: &[Word]) -> usize {
        let mut best = 0;
        for (i, x) in words.iter().enumerate() {
            for (j, y) in words.iter().enumerate() {
                if i != j {
                    let l = x.iter().zip(y.iter()).take_while(|(a, b)| a == b).count();
                    best = best.max(l);
                }
            }
        }
        best
    }

    fn brute_symmetrize(p: &Presentation) -> Vec<Word> {
        let mut out: Vec<Word> = Vec::new();
        for r in p.relators() {
            for base in [r.clone(), r.inverse()] {
                for k in 0..base.len() {
                    let w = base.rotate(k);
                    if !out.contains(&w) {
                        out.push(w);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn symmetrize_examples() {
        let p = Presentation::from_strs(&["a", "b"], &["a b"]).unwrap();
        let s = SymmetrizedSet::new(&p).unwrap();
        let mut expected: Vec<Word> = ["a b", "b a", "b^-1 a^-1", "a^-1 b^-1"]
            .iter()
            .map(|t| p.parse_word(t).unwrap())
            .collect();
        expected.sort();
        assert_eq!(s.words(), expected);

        let p = Presentation::from_strs(&["a"], &["a"]).unwrap();
        assert_eq!(SymmetrizedSet::new(&p).unwrap().len(), 2);

        let s = SymmetrizedSet::new(&surface()).unwrap();
        assert_eq!(s.len(), brute_symmetrize(&surface()).len());
        assert_eq!(s.len(), 16);
    }

    #[test]
    fn degenerate_relator() {
        let p = Presentation::from_strs(&["a"], &["a a^-1"]).unwrap();
        assert!(matches!(SymmetrizedSet::new(&p), Err(Error::DegenerateRelator(0))));
    }

    #[test]
    fn surface_report() {
        let s = SymmetrizedSet::new(&surface()).unwrap();
        let r = s.report();
        assert_eq!(r.max_piece_len, 1);
        assert_eq!(r.max_piece_len, brute_max_piece(&brute_symmetrize(&surface())));
        assert_eq!(r.min_relator_len, 8);
        assert_eq!(r.ratio, Ratio::new(1, 8));
        assert!(!r.proper_power);
        let (a, b) = r.witness.clone().unwrap();
        assert_ne!(a, b);
        assert_eq!(a.iter().zip(b.iter()).take_while(|(x, y)| x == y).count(), 1);
        assert!(s.is_certified());
    }

    #[test]
    fn free_report() {
        let p = Presentation::free(&["a", "b"]).unwrap();
        let r = piece_report(&p).unwrap();
        assert_eq!(r.max_piece_len, 0);
        assert!(r.witness.is_none());
        assert!(verify_metric(&p, Ratio::new(1, 100)).unwrap().0);
    }

    #[test]
    fn increasing_exponent_blocks() {
        // seven blocks are not enough: b^5 a b^6 is a piece of a 35-letter relator
        let p = Presentation::from_strs(&["a", "b"], &["a b a b^2 a b^3 a b^4 a b^5 a b^6 a b^7"]).unwrap();
        let r = piece_report(&p).unwrap();
        assert_eq!(r.max_piece_len, brute_max_piece(&brute_symmetrize(&p)));
        assert_eq!(r.max_piece_len, 12);
        assert_eq!(r.ratio, Ratio::new(12, 35));
        let long: String = (1..=30).map(|e| format!("a b^{e} ")).collect();
        let p = Presentation::from_strs(&["a", "b"], &[long.trim()]).unwrap();
        let r = piece_report(&p).unwrap();
        assert_eq!(r.max_piece_len, brute_max_piece(&brute_symmetrize(&p)));
        assert!(r.ratio < one_sixth());
    }

    #[test]
    fn proper_power_rejected() {
        let p = Presentation::from_strs(&["a"], &["a^3"]).unwrap();
        let (ok, r) = verify_metric(&p, one_sixth()).unwrap();
        assert!(!ok);
        assert!(r.proper_power);
    }

    #[test]
    fn verify_metric_surface() {
        assert!(verify_metric(&surface(), one_sixth()).unwrap().0);
        assert!(verify_metric(&surface(), Ratio::new(0, 1)).is_err());
    }

    #[test]
    fn dehn_examples() {
        let p = surface();
        let s = SymmetrizedSet::new(&p).unwrap();
        assert!(s.dehn_reduce(&p.relators()[0]).is_empty());
        let a = p.parse_word("a").unwrap();
        assert_eq!(s.dehn_reduce(&a), a);
        let conj = p.parse_word("a a b a^-1 b^-1 c d c^-1 d^-1 a^-1").unwrap();
        assert!(s.dehn_reduce(&conj).is_empty());
        assert_eq!(s.word_problem(&Word::empty()).unwrap(), true);
        assert_eq!(s.word_problem(&p.parse_word("a b").unwrap()).unwrap(), false);
    }

    #[test]
    fn dehn_replaces_more_than_half() {
        // five of eight letters of the relator become the inverse of the other three
        let p = surface();
        let s = SymmetrizedSet::new(&p).unwrap();
        let w = p.parse_word("a b a^-1 b^-1 c").unwrap();
        assert_eq!(s.dehn_reduce(&w), p.parse_word("d c d^-1").unwrap());
        // exactly half is left alone
        let w = p.parse_word("a b a^-1 b^-1").unwrap();
        assert_eq!(s.dehn_reduce(&w), w);
    }

    #[test]
    fn uncertified_refuses() {
        let p = Presentation::from_strs(&["a", "b"], &["a b a^-1 b^-1"]).unwrap();
        let s = SymmetrizedSet::new(&p).unwrap();
        assert!(!s.is_certified());
        assert!(matches!(s.word_problem(&Word::empty()), Err(Error::CertificateMissing)));
        assert!(matches!(
            s.cyclic_dehn_form(&Word::empty()),
            Err(Error::CertificateMissing)
        ));
    }

    #[test]
    fn cyclic_dehn_form_examples() {
        let p = surface();
        let s = SymmetrizedSet::new(&p).unwrap();
        let w = p.parse_word("a a b a^-1 b^-1 c d c^-1 d^-1 a^-1").unwrap();
        assert!(s.cyclic_dehn_form(&w).unwrap().form.is_empty());
        let f = s.cyclic_dehn_form(&p.parse_word("a b").unwrap()).unwrap();
        assert_eq!(f.form.len(), 2);
        assert!(s.cyclic_dehn_form(&Word::empty()).unwrap().form.is_empty());
    }

    #[test]
    fn cyclic_form_conjugator_replays() {
        let p = surface();
        let s = SymmetrizedSet::new(&p).unwrap();
        for t in [
            "b a",
            "c^-1 a b a^-1 b^-1 c d c^-1",
            "d a b a^-1 b^-1 c d c^-1 d^-1 d^-1 b",
        ] {
            let w = p.parse_word(t).unwrap();
            let f = s.cyclic_dehn_form(&w).unwrap();
            let back = Word::product([&f.conjugator, &f.form, &f.conjugator.inverse(), &w.inverse()]);
            assert!(s.word_problem(&back).unwrap(), "{t}");
        }
    }

    #[test]
    fn ratio_parsing() {
        assert_eq!(parse_ratio("1/6").unwrap(), Ratio::new(1, 6));
        assert_eq!(parse_ratio("2/12").unwrap(), Ratio::new(1, 6));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x").is_err());
    }

    #[test]
    fn record_keys() {
        let s = SymmetrizedSet::new(&surface()).unwrap();
        let rec = s.report().to_record(surface().alphabet());
        let keys: Vec<&str> = rec.lines().map(|l| l.split(':').next().unwrap()).collect();
        assert_eq!(
            keys,
            [
                "max_piece_len",
                "min_relator_len",
                "ratio",
                "witness_a",
                "witness_b",
                "proper_power"
            ]
        );
    }
}
