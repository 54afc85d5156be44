//! Felsch-style coset enumeration.
//!
//! New cosets are only ever defined at the first undefined table entry (in
//! coset order, then column order); everything else comes from deductions,
//! found by scanning every relator rotation through each new entry. Runs of
//! a repeated letter acting as a loop are skipped in one step, which keeps
//! the long power-heavy relators of Rips presentations cheap to scan.

use std::fmt::Write as _;

use crate::presentation::{Alphabet, Presentation};
use crate::profinite::perm::{Perm, PermQuotient};
use crate::word::{Letter, Word};

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetStatus {
    Complete,
    /// Live cosets would have exceeded the bound.
    Overflow(usize),
}

/// Coset table: one row per coset, one column per signed generator in
/// letter-code order (`g0, g0^-1, g1, g1^-1, ...`). Coset 0 is the subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    pub rank: usize,
    pub rows: Vec<Vec<Option<usize>>>,
    pub status: CosetStatus,
}

impl CosetTable {
    pub fn is_complete(&self) -> bool {
        self.status == CosetStatus::Complete
    }

    /// Index of the subgroup when the enumeration completed.
    pub fn index(&self) -> Option<usize> {
        self.is_complete().then_some(self.rows.len())
    }

    pub fn act(&self, coset: usize, l: Letter) -> Option<usize> {
        self.rows[coset][l.code() as usize]
    }

    /// The action on cosets as a permutation representation. Only meaningful
    /// for complete tables.
    pub fn permutation_quotient(&self) -> PermQuotient {
        assert!(self.is_complete(), "incomplete coset table");
        let n = self.rows.len();
        let images = (0..self.rank)
            .map(|g| {
                let v = (0..n).map(|c| self.rows[c][2 * g].expect("complete") as u32).collect();
                Perm::from_images(v).expect("complete tables are permutations")
            })
            .collect();
        PermQuotient::new(n, images).expect("at least one coset")
    }

    /// Checks that every relator acts trivially on every coset and that the
    /// subgroup generators fix coset 0.
    pub fn is_valid_action(&self, p: &Presentation, subgroup: &[Word]) -> bool {
        if !self.is_complete() {
            return false;
        }
        let trace = |start: usize, w: &Word| -> Option<usize> { w.iter().try_fold(start, |c, &l| self.act(c, l)) };
        let inverse_ok = (0..self.rows.len()).all(|c| {
            (0..2 * self.rank).all(|col| {
                let l = Letter::from_code(col as u32);
                self.act(c, l).and_then(|d| self.act(d, l.inverse())) == Some(c)
            })
        });
        inverse_ok
            && p.relators()
                .iter()
                .all(|r| (0..self.rows.len()).all(|c| trace(c, r) == Some(c)))
            && subgroup.iter().all(|h| trace(0, h) == Some(0))
    }

    /// CSV with a header `coset,g,g^-1,...`; cosets numbered from 1, empty
    /// cells for undefined entries.
    pub fn to_csv(&self, alphabet: &Alphabet) -> String {
        let mut out = String::from("coset");
        for g in 0..self.rank {
            let _ = write!(out, ",{},{}^-1", alphabet.name(g), alphabet.name(g));
        }
        out.push('\n');
        for (i, row) in self.rows.iter().enumerate() {
            let _ = write!(out, "{}", i + 1);
            for cell in row {
                match cell {
                    Some(c) => {
                        let _ = write!(out, ",{}", c + 1);
                    }
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }
}

struct Enumerator {
    ncols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    max_cosets: usize,
    overflow: bool,
    bases: Vec<Vec<u32>>,
    run_fwd: Vec<Vec<u32>>,
    run_bwd: Vec<Vec<u32>>,
    /// Rotations (base, offset) starting with each letter code.
    starts: Vec<Vec<(u32, u32)>>,
    deductions: Vec<(u32, u32)>,
}

impl Enumerator {
    fn new(p: &Presentation, max_cosets: usize) -> Self {
        let ncols = 2 * p.rank();
        let mut bases: Vec<Vec<u32>> = Vec::new();
        for r in p.relators().iter().filter(|r| !r.is_empty()) {
            bases.push(r.iter().map(|l| l.code()).collect());
            bases.push(r.inverse().iter().map(|l| l.code()).collect());
        }
        let mut run_fwd = Vec::new();
        let mut run_bwd = Vec::new();
        let mut starts = vec![Vec::new(); ncols];
        for (b, w) in bases.iter().enumerate() {
            let n = w.len();
            let fwd: Vec<u32> = (0..n)
                .map(|i| (0..n).take_while(|&k| w[(i + k) % n] == w[i]).count() as u32)
                .collect();
            let bwd: Vec<u32> = (0..n)
                .map(|i| (0..n).take_while(|&k| w[(i + n - k) % n] == w[i]).count() as u32)
                .collect();
            run_fwd.push(fwd);
            run_bwd.push(bwd);
            for (o, &c) in w.iter().enumerate() {
                starts[c as usize].push((b as u32, o as u32));
            }
        }
        Enumerator {
            ncols,
            table: vec![NONE; ncols],
            parent: vec![0],
            live: 1,
            max_cosets,
            overflow: false,
            bases,
            run_fwd,
            run_bwd,
            starts,
            deductions: Vec::new(),
        }
    }

    #[inline]
    fn get(&self, c: u32, x: u32) -> u32 {
        self.table[c as usize * self.ncols + x as usize]
    }

    #[inline]
    fn set(&mut self, c: u32, x: u32, v: u32) {
        self.table[c as usize * self.ncols + x as usize] = v;
    }

    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut k = c;
        while self.parent[k as usize] != r {
            let next = self.parent[k as usize];
            self.parent[k as usize] = r;
            k = next;
        }
        r
    }

    fn new_coset(&mut self) -> Option<u32> {
        if self.live >= self.max_cosets {
            self.overflow = true;
            return None;
        }
        let c = self.parent.len() as u32;
        self.parent.push(c);
        self.table.extend(std::iter::repeat(NONE).take(self.ncols));
        self.live += 1;
        Some(c)
    }

    fn define(&mut self, c: u32, x: u32) -> bool {
        let Some(d) = self.new_coset() else {
            return false;
        };
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        self.deductions.push((c, x));
        true
    }

    /// Scans the relator rotation `(base, offset)` from coset `alpha`,
    /// recording a deduction or coincidence when it closes up.
    fn scan(&mut self, alpha: u32, base: usize, offset: usize) {
        let n = self.bases[base].len();
        let letter = |s: &Self, i: usize| s.bases[base][(offset + i) % n];
        let mut f = alpha;
        let mut i = 0;
        while i < n {
            let x = letter(self, i);
            let t = self.get(f, x);
            if t == NONE {
                break;
            }
            if t == f {
                let run = self.run_fwd[base][(offset + i) % n] as usize;
                i += run.min(n - i);
            } else {
                f = t;
                i += 1;
            }
        }
        if i >= n {
            if f != alpha {
                self.coincidence(f, alpha);
            }
            return;
        }
        let mut b = alpha;
        let mut j = n;
        while j > i {
            let x = letter(self, j - 1) ^ 1;
            let t = self.get(b, x);
            if t == NONE {
                break;
            }
            if t == b {
                let run = self.run_bwd[base][(offset + j - 1) % n] as usize;
                j -= run.min(j - i);
            } else {
                b = t;
                j -= 1;
            }
        }
        if j == i {
            if f != b {
                self.coincidence(f, b);
            }
        } else if j == i + 1 {
            let x = letter(self, i);
            self.set(f, x, b);
            self.set(b, x ^ 1, f);
            self.deductions.push((f, x));
        }
    }

    /// Traces `w` from `alpha`, defining cosets to close the cycle.
    fn scan_and_fill(&mut self, alpha: u32, w: &[u32]) {
        let n = w.len();
        let mut f = alpha;
        let mut i = 0;
        let mut b = alpha;
        let mut j = n;
        loop {
            while i < n && self.get(f, w[i]) != NONE {
                f = self.get(f, w[i]);
                i += 1;
            }
            if i == n {
                if f != alpha {
                    self.coincidence(f, alpha);
                }
                return;
            }
            while j > i && self.get(b, w[j - 1] ^ 1) != NONE {
                b = self.get(b, w[j - 1] ^ 1);
                j -= 1;
            }
            if j == i {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            if j == i + 1 {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                self.deductions.push((f, w[i]));
                return;
            }
            if !self.define(f, w[i]) {
                return;
            }
        }
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut Vec<u32>) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi as usize] = lo;
            self.live -= 1;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut k = 0;
        while k < queue.len() {
            let g = queue[k];
            k += 1;
            for x in 0..self.ncols as u32 {
                let d = self.get(g, x);
                if d == NONE {
                    continue;
                }
                if self.get(d, x ^ 1) == g {
                    self.set(d, x ^ 1, NONE);
                }
                let mu = self.rep(g);
                let nu = self.rep(d);
                let mu_x = self.get(mu, x);
                if mu_x != NONE {
                    self.merge(nu, mu_x, &mut queue);
                } else {
                    let nu_inv = self.get(nu, x ^ 1);
                    if nu_inv != NONE {
                        self.merge(mu, nu_inv, &mut queue);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, x ^ 1, mu);
                        self.deductions.push((mu, x));
                    }
                }
            }
        }
    }

    fn process_deductions(&mut self) {
        while let Some((c, x)) = self.deductions.pop() {
            if self.overflow {
                return;
            }
            if !self.is_live(c) || self.get(c, x) == NONE {
                continue;
            }
            let starts = std::mem::take(&mut self.starts[x as usize]);
            for &(b, o) in &starts {
                if !self.is_live(c) {
                    break;
                }
                self.scan(c, b as usize, o as usize);
            }
            self.starts[x as usize] = starts;

            let d = self.get(c, x);
            if d == NONE {
                continue;
            }
            let d = self.rep(d);
            let starts = std::mem::take(&mut self.starts[(x ^ 1) as usize]);
            for &(b, o) in &starts {
                if !self.is_live(d) {
                    break;
                }
                self.scan(d, b as usize, o as usize);
            }
            self.starts[(x ^ 1) as usize] = starts;
        }
    }

    fn first_undefined(&self, cursor: &mut usize) -> Option<(u32, u32)> {
        while *cursor < self.parent.len() {
            let c = *cursor as u32;
            if self.is_live(c) {
                if let Some(x) = (0..self.ncols as u32).find(|&x| self.get(c, x) == NONE) {
                    return Some((c, x));
                }
            }
            *cursor += 1;
        }
        None
    }

    fn run(mut self, subgroup: &[Word], rank: usize) -> CosetTable {
        for h in subgroup {
            let w: Vec<u32> = h.free_reduce().iter().map(|l| l.code()).collect();
            if !w.is_empty() && self.is_live(0) {
                self.scan_and_fill(0, &w);
                self.process_deductions();
            }
        }
        let mut cursor = 0;
        while !self.overflow {
            let Some((c, x)) = self.first_undefined(&mut cursor) else {
                break;
            };
            if self.define(c, x) {
                self.process_deductions();
            }
        }
        self.finish(rank)
    }

    fn finish(self, rank: usize) -> CosetTable {
        let live: Vec<u32> = (0..self.parent.len() as u32).filter(|&c| self.is_live(c)).collect();
        let mut renumber = vec![NONE; self.parent.len()];
        for (i, &c) in live.iter().enumerate() {
            renumber[c as usize] = i as u32;
        }
        let rows = live
            .iter()
            .map(|&c| {
                (0..self.ncols as u32)
                    .map(|x| {
                        let d = self.get(c, x);
                        (d != NONE && renumber[d as usize] != NONE).then(|| renumber[d as usize] as usize)
                    })
                    .collect()
            })
            .collect();
        let status = if self.overflow {
            CosetStatus::Overflow(self.max_cosets)
        } else {
            CosetStatus::Complete
        };
        CosetTable { rank, rows, status }
    }
}

/// Enumerates the cosets of `⟨subgroup⟩` in the group presented by `p`.
pub fn todd_coxeter(p: &Presentation, subgroup: &[Word], max_cosets: usize) -> CosetTable {
    assert!(max_cosets >= 1, "max_cosets must be positive");
    Enumerator::new(p, max_cosets).run(subgroup, p.rank())
}
