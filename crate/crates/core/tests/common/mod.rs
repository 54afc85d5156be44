//! Brute-force reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use conjsep::{Letter, Presentation, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Images of `0..n` under a permutation, composed left to right.
pub type Images = Vec<u8>;

pub fn compose(p: &[u8], q: &[u8]) -> Images {
    p.iter().map(|&i| q[i as usize]).collect()
}

pub fn invert(p: &[u8]) -> Images {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j as usize] = i as u8;
    }
    out
}

pub fn identity(n: usize) -> Images {
    (0..n as u8).collect()
}

/// Every permutation of `0..n`, by repeated insertion.
pub fn perms(n: usize) -> Vec<Images> {
    let mut out = vec![Vec::new()];
    for k in 0..n as u8 {
        let mut next = Vec::new();
        for p in &out {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Evaluates a word under generator images and their inverses.
pub fn eval(images: &[Images], inverses: &[Images], w: &[Letter]) -> Images {
    let n = images.first().map_or(0, Vec::len);
    let mut cur = identity(n);
    for l in w {
        let g = if l.is_inverse() {
            &inverses[l.gen()]
        } else {
            &images[l.gen()]
        };
        for x in cur.iter_mut() {
            *x = g[*x as usize];
        }
    }
    cur
}

/// Counts tuples of permutations of degree `n` satisfying every relator by
/// trying all of them.
pub fn brute_force_hom_count(p: &Presentation, n: usize) -> u64 {
    let all = perms(n);
    let rank = p.rank();
    let mut count = 0;
    let mut idx = vec![0usize; rank];
    loop {
        let images: Vec<Images> = idx.iter().map(|&i| all[i].clone()).collect();
        let inverses: Vec<Images> = images.iter().map(|g| invert(g)).collect();
        if p.relators()
            .iter()
            .all(|r| eval(&images, &inverses, r.letters()) == identity(n))
        {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == rank {
                return count;
            }
            idx[k] += 1;
            if idx[k] < all.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// All freely reduced words of length exactly `len` over `rank` generators.
pub fn reduced_words(rank: usize, len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            for code in 0..2 * rank as u32 {
                let l = Letter::from_code(code);
                if w.last().is_some_and(|&p: &Letter| p == l.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Free reduction with an explicit stack.
pub fn free_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for &l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Exponent sum of each generator.
pub fn exponent_sums(rank: usize, w: &[Letter]) -> Vec<i64> {
    let mut s = vec![0; rank];
    for l in w {
        s[l.gen()] += if l.is_inverse() { -1 } else { 1 };
    }
    s
}

pub fn word(letters: Vec<Letter>) -> Word {
    Word::from_letters(letters)
}

/// Rotations of every relator and of its inverse.
pub fn relator_rotations(p: &Presentation) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    for r in p.relators() {
        let r = r.letters().to_vec();
        let inv: Vec<Letter> = r.iter().rev().map(|l| l.inverse()).collect();
        for w in [&r, &inv] {
            for i in 0..w.len() {
                out.push([&w[i..], &w[..i]].concat());
            }
        }
    }
    out
}

/// Words reachable from `start` by at most `depth` insertions of a relator
/// rotation followed by free reduction, never exceeding `cap` letters.
pub fn relator_closure(p: &Presentation, start: &[Letter], depth: usize, cap: usize) -> HashSet<Vec<Letter>> {
    let rotations = relator_rotations(p);
    let start = free_reduce(start);
    let mut seen: HashSet<Vec<Letter>> = HashSet::from([start.clone()]);
    let mut frontier = vec![start];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for rho in &rotations {
                for pos in 0..=w.len() {
                    let v = free_reduce(&[&w[..pos], rho, &w[pos..]].concat());
                    if v.len() <= cap && seen.insert(v.clone()) {
                        next.push(v);
                    }
                }
            }
        }
        frontier = next;
    }
    seen
}

pub fn surface() -> Presentation {
    Presentation::from_strs(&["a", "b", "c", "d"], &["a b a^-1 b^-1 c d c^-1 d^-1"]).unwrap()
}

/// Reference word problem for the genus-two surface group on words of
/// length at most 8. Triviality is certified by a breadth-first closure of
/// relator insertions; nontriviality by a homomorphism to `ℤ^4` or to a
/// symmetric group.
pub struct SurfaceReference {
    pub trivial: HashSet<Vec<Letter>>,
    pub reps: Vec<(Vec<Images>, Vec<Images>)>,
}

impl SurfaceReference {
    pub fn new(p: &Presentation, max_len: usize, seed: u64) -> Self {
        let trivial = relator_closure(p, &[], 2, 2 * max_len)
            .into_iter()
            .filter(|w| w.len() <= max_len)
            .collect();

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut reps = Vec::new();
        for n in 3..=6 {
            let all = perms(n);
            let mut found = 0;
            while found < 6 {
                let a = all[rng.gen_range(0..all.len())].clone();
                let b = all[rng.gen_range(0..all.len())].clone();
                let c = all[rng.gen_range(0..all.len())].clone();
                let ab = eval(
                    &[a.clone(), b.clone()],
                    &[invert(&a), invert(&b)],
                    &[Letter::pos(0), Letter::pos(1), Letter::neg(0), Letter::neg(1)],
                );
                if ab == identity(n) {
                    continue;
                }
                let Some(d) = all.iter().find(|d| {
                    let cd = eval(
                        &[c.clone(), (*d).clone()],
                        &[invert(&c), invert(d)],
                        &[Letter::pos(0), Letter::pos(1), Letter::neg(0), Letter::neg(1)],
                    );
                    compose(&ab, &cd) == identity(n)
                }) else {
                    continue;
                };
                let images = vec![a, b, c, d.clone()];
                let inverses = images.iter().map(|g| invert(g)).collect();
                reps.push((images, inverses));
                found += 1;
            }
        }
        SurfaceReference { trivial, reps }
    }

    pub fn is_trivial(&self, w: &[Letter]) -> Option<bool> {
        if self.trivial.contains(w) {
            return Some(true);
        }
        if exponent_sums(4, w).iter().any(|&s| s != 0) {
            return Some(false);
        }
        let n = |imgs: &Vec<Images>| imgs[0].len();
        if self.reps.iter().any(|(im, inv)| eval(im, inv, w) != identity(n(im))) {
            return Some(false);
        }
        None
    }
}
