use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::Word;

/// A permutation of `{0, .., n-1}` acting on the right: `(p * q)(i) = q(p(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || std::mem::replace(&mut seen[i as usize], true) {
                return Err(Error::Input(format!("not a permutation: {images:?}")));
            }
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            v[j as usize] = i as u32;
        }
        Perm(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `g⁻¹ · self · g`
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        g.inverse().then(self).then(g)
    }

    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Perm::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            out = out.then(&base);
        }
        out
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.then(self);
            k += 1;
        }
        k
    }

    fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut i = self.apply(s);
            while i != s {
                seen[i] = true;
                c.push(i);
                i = self.apply(i);
            }
            out.push(c);
        }
        out
    }

    /// Sorted cycle lengths, fixed points included. Equal cycle types is
    /// exactly conjugacy in the full symmetric group.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    /// One-line cycle notation on points `1..=n`, fixed points omitted;
    /// the identity is `()`.
    pub fn to_cycle_string(&self) -> String {
        let mut out = String::new();
        for c in self.cycles().into_iter().filter(|c| c.len() > 1) {
            out.push('(');
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{}", p + 1);
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }

    pub fn parse_cycles(text: &str, degree: usize) -> Result<Perm> {
        let bad = || Error::Input(format!("bad cycle notation `{text}`"));
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body_end = rest.find(')').ok_or_else(bad)?;
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let body = &body[..body_end - 1];
            let pts: Vec<usize> = body
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            if pts.iter().any(|&p| p == 0 || p > degree) {
                return Err(bad());
            }
            for k in 0..pts.len() {
                images[pts[k] - 1] = (pts[(k + 1) % pts.len()] - 1) as u32;
            }
            rest = rest[body_end + 1..].trim_start();
        }
        Perm::from_images(images)
    }
}

/// Closure of a set of permutations under multiplication, or `None` once
/// more than `cap` elements have been found.
pub fn generated_group(gens: &[Perm], degree: usize, cap: usize) -> Option<Vec<Perm>> {
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut out = vec![id.clone()];
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.then(s);
            if seen.insert(h.clone()) {
                if out.len() >= cap {
                    return None;
                }
                out.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Some(out)
}

/// A homomorphism to a symmetric group, given by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PermQuotient {
    degree: usize,
    images: Vec<Perm>,
}

impl PermQuotient {
    pub fn new(degree: usize, images: Vec<Perm>) -> Result<Self> {
        if degree == 0 || images.iter().any(|p| p.degree() != degree) {
            return Err(Error::Input("permutation degrees disagree".into()));
        }
        Ok(PermQuotient { degree, images })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn images(&self) -> &[Perm] {
        &self.images
    }

    pub fn evaluate(&self, w: &Word) -> Perm {
        let mut pts: Vec<u32> = (0..self.degree as u32).collect();
        for l in w.iter() {
            let img = &self.images[l.gen()];
            if l.is_inverse() {
                let inv = img.inverse();
                for p in pts.iter_mut() {
                    *p = inv.0[*p as usize];
                }
            } else {
                for p in pts.iter_mut() {
                    *p = img.0[*p as usize];
                }
            }
        }
        Perm(pts)
    }

    /// Whether every relator maps to the identity.
    pub fn respects(&self, p: &Presentation) -> bool {
        self.images.len() == p.rank() && p.relators().iter().all(|r| self.evaluate(r).is_identity())
    }

    /// Elements of the image group, or `None` past `cap`.
    pub fn image_group(&self, cap: usize) -> Option<Vec<Perm>> {
        generated_group(&self.images, self.degree, cap)
    }

    pub fn group_order(&self, cap: usize) -> Option<usize> {
        self.image_group(cap).map(|g| g.len())
    }

    /// One `name: cycles` line per generator.
    pub fn to_lines(&self, p: &Presentation) -> Vec<String> {
        self.images
            .iter()
            .enumerate()
            .map(|(g, img)| format!("{} -> {}", p.alphabet().name(g), img.to_cycle_string()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_is_left_to_right() {
        let a = Perm::from_images(vec![1, 0, 2]).unwrap();
        let b = Perm::from_images(vec![0, 2, 1]).unwrap();
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.then(&b).apply(0), 2);
        assert!(a.then(&a).is_identity());
        assert_eq!(a.then(&b).order(), 3);
    }

    #[test]
    fn cycle_notation_round_trip() {
        let p = Perm::from_images(vec![1, 2, 0, 4, 3, 5]).unwrap();
        assert_eq!(p.to_cycle_string(), "(1 2 3)(4 5)");
        assert_eq!(Perm::parse_cycles("(1 2 3)(4 5)", 6).unwrap(), p);
        assert_eq!(Perm::identity(3).to_cycle_string(), "()");
        assert_eq!(Perm::parse_cycles("()", 3).unwrap(), Perm::identity(3));
        assert!(Perm::parse_cycles("(1 7)", 3).is_err());
    }

    #[test]
    fn closure_sizes() {
        let t = Perm::from_images(vec![1, 0, 2]).unwrap();
        let c = Perm::from_images(vec![1, 2, 0]).unwrap();
        assert_eq!(generated_group(&[t.clone(), c], 3, 100).unwrap().len(), 6);
        assert_eq!(generated_group(&[t.clone()], 3, 100).unwrap().len(), 2);
        assert!(generated_group(&[t], 3, 1).is_none());
        assert_eq!(generated_group(&[], 3, 10).unwrap().len(), 1);
    }

    #[test]
    fn evaluation_matches_composition() {
        let p = Presentation::free(&["a", "b"]).unwrap();
        let a = Perm::from_images(vec![1, 2, 0]).unwrap();
        let b = Perm::from_images(vec![1, 0, 2]).unwrap();
        let q = PermQuotient::new(3, vec![a.clone(), b.clone()]).unwrap();
        let w = p.parse_word("a b^-1 a").unwrap();
        assert_eq!(q.evaluate(&w), a.then(&b.inverse()).then(&a));
    }
}
