//! Backtracking search for homomorphisms into symmetric groups.

use crate::presentation::Presentation;
use crate::profinite::perm::{Perm, PermQuotient};
use crate::word::Word;

/// All permutations of `0..n` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut cur: Vec<u32> = (0..n as u32).collect();
    let mut out = vec![Perm::from_images(cur.clone()).expect("identity")];
    loop {
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Perm::from_images(cur.clone()).expect("permutation"));
    }
}

/// Stream of homomorphisms `p -> Sym(n)` in lexicographic order of the
/// image tuple. A relator is checked as soon as all of its generators have
/// images; assignments failing a relator are pruned with their subtree.
pub struct PermRepEnumerator {
    degree: usize,
    perms: Vec<Perm>,
    inverses: Vec<Perm>,
    /// `checks[g]` holds the relators whose largest generator is `g`.
    checks: Vec<Vec<Word>>,
    choice: Vec<usize>,
    limit: Option<usize>,
    emitted: usize,
    steps: u64,
    started: bool,
    done: bool,
}

impl PermRepEnumerator {
    pub fn new(p: &Presentation, degree: usize, limit: Option<usize>) -> Self {
        assert!(degree >= 1, "degree must be positive");
        let rank = p.rank();
        let mut checks = vec![Vec::new(); rank];
        for r in p.relators() {
            if let Some(top) = r.iter().map(|l| l.gen()).max() {
                checks[top].push(r.clone());
            }
        }
        let perms = all_perms(degree);
        let inverses = perms.iter().map(Perm::inverse).collect();
        PermRepEnumerator {
            degree,
            perms,
            inverses,
            checks,
            choice: Vec::with_capacity(rank),
            limit,
            emitted: 0,
            steps: 0,
            started: false,
            done: false,
        }
    }

    /// Assignments tried so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn rank(&self) -> usize {
        self.checks.len()
    }

    fn consistent(&self, gen: usize) -> bool {
        let mut pts = vec![0u32; self.degree];
        self.checks[gen].iter().all(|r| {
            for (i, p) in pts.iter_mut().enumerate() {
                *p = i as u32;
            }
            for l in r.iter() {
                let k = self.choice[l.gen()];
                let img = if l.is_inverse() {
                    &self.inverses[k]
                } else {
                    &self.perms[k]
                };
                for p in pts.iter_mut() {
                    *p = img.images()[*p as usize];
                }
            }
            pts.iter().enumerate().all(|(i, &j)| i as u32 == j)
        })
    }

    /// Advances `choice` to the next consistent complete assignment.
    fn search(&mut self, mut resume: bool) -> bool {
        let rank = self.rank();
        loop {
            if resume {
                // bump the deepest position, backtracking as needed
                loop {
                    match self.choice.last_mut() {
                        None => return false,
                        Some(last) => {
                            *last += 1;
                            if *last < self.perms.len() {
                                break;
                            }
                            self.choice.pop();
                        }
                    }
                }
            } else if self.choice.len() < rank {
                self.choice.push(0);
            }
            resume = false;
            self.steps += 1;
            let g = self.choice.len() - 1;
            if !self.consistent(g) {
                resume = true;
                continue;
            }
            if self.choice.len() == rank {
                return true;
            }
        }
    }

    fn current(&self) -> PermQuotient {
        PermQuotient::new(
            self.degree,
            self.choice.iter().map(|&i| self.perms[i].clone()).collect(),
        )
        .expect("degrees agree")
    }
}

impl Iterator for PermRepEnumerator {
    type Item = PermQuotient;

    fn next(&mut self) -> Option<PermQuotient> {
        if self.done || self.limit.is_some_and(|l| self.emitted >= l) {
            return None;
        }
        if self.rank() == 0 {
            // a single homomorphism from the trivial group
            self.done = true;
            self.emitted += 1;
            return Some(PermQuotient::new(self.degree, Vec::new()).expect("degree positive"));
        }
        let found = self.search(self.started);
        self.started = true;
        if !found {
            self.done = true;
            return None;
        }
        self.emitted += 1;
        Some(self.current())
    }
}

/// Convenience wrapper over [`PermRepEnumerator`].
pub fn enumerate_perm_reps(p: &Presentation, degree: usize, limit: Option<usize>) -> PermRepEnumerator {
    PermRepEnumerator::new(p, degree, limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn lex_perms() {
        let ps = all_perms(3);
        assert_eq!(ps.len(), 6);
        let mut sorted = ps.clone();
        sorted.sort();
        assert_eq!(ps, sorted);
    }

    #[test]
    fn documented_counts() {
        let z2 = Presentation::from_strs(&["x"], &["x^2"]).unwrap();
        assert_eq!(enumerate_perm_reps(&z2, 3, None).count(), 4);
        let z = Presentation::free(&["x"]).unwrap();
        for n in 1..=5 {
            assert_eq!(enumerate_perm_reps(&z, n, None).count(), factorial(n));
        }
        let surface = Presentation::from_strs(&["a", "b", "c", "d"], &["a b a^-1 b^-1 c d c^-1 d^-1"]).unwrap();
        assert_eq!(enumerate_perm_reps(&surface, 2, None).count(), 16);
    }

    #[test]
    fn limit_and_order() {
        let z = Presentation::free(&["x", "y"]).unwrap();
        let reps: Vec<PermQuotient> = enumerate_perm_reps(&z, 2, Some(3)).collect();
        assert_eq!(reps.len(), 3);
        assert!(reps[0].images().iter().all(Perm::is_identity));
        let all: Vec<PermQuotient> = enumerate_perm_reps(&z, 3, None).collect();
        let keys: Vec<Vec<Perm>> = all.iter().map(|q| q.images().to_vec()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn every_emitted_rep_is_a_homomorphism() {
        let s3 = Presentation::from_strs(&["s", "t"], &["s^2", "t^2", "s t s t s t"]).unwrap();
        for q in enumerate_perm_reps(&s3, 3, None) {
            assert!(q.respects(&s3));
        }
    }
}
