//! Integer relation lattices of abelianizations, used to prune searches.

use crate::presentation::Presentation;
use crate::word::Word;

/// Row-echelon basis of the lattice spanned by relator exponent vectors.
#[derive(Clone, Debug)]
pub struct RelationLattice {
    rank: usize,
    rows: Vec<Vec<i128>>,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        return if a < 0 { (-a, -1, 0) } else { (a, 1, 0) };
    }
    let (g, s, t) = ext_gcd(b, a.rem_euclid(b));
    (g, t, s - a.div_euclid(b) * t)
}

fn pivot(v: &[i128]) -> Option<usize> {
    v.iter().position(|&x| x != 0)
}

impl RelationLattice {
    pub fn new(p: &Presentation) -> Self {
        let mut lattice = RelationLattice {
            rank: p.rank(),
            rows: Vec::new(),
        };
        for r in p.relators() {
            lattice.insert(r.exponent_sums(p.rank()).into_iter().map(i128::from).collect());
        }
        lattice
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn insert(&mut self, mut v: Vec<i128>) {
        while let Some(c) = pivot(&v) {
            match self.rows.iter().position(|r| pivot(r).is_some_and(|pc| pc >= c)) {
                Some(i) if pivot(&self.rows[i]) == Some(c) => {
                    let row = &self.rows[i];
                    let (g, s, t) = ext_gcd(row[c], v[c]);
                    let (rc, vc) = (row[c] / g, v[c] / g);
                    let combined: Vec<i128> = row.iter().zip(&v).map(|(&a, &b)| s * a + t * b).collect();
                    let rest: Vec<i128> = row.iter().zip(&v).map(|(&a, &b)| rc * b - vc * a).collect();
                    self.rows[i] = combined;
                    v = rest;
                }
                Some(i) => {
                    self.rows.insert(i, v);
                    return;
                }
                None => {
                    self.rows.push(v);
                    return;
                }
            }
        }
    }

    pub fn contains(&self, v: &[i128]) -> bool {
        let mut v = v.to_vec();
        for row in &self.rows {
            let c = pivot(row).expect("basis rows are nonzero");
            if let Some(vc) = pivot(&v) {
                if vc < c {
                    return false;
                }
                if vc == c {
                    if v[c] % row[c] != 0 {
                        return false;
                    }
                    let q = v[c] / row[c];
                    for (x, &r) in v.iter_mut().zip(row) {
                        *x -= q * r;
                    }
                }
            } else {
                return true;
            }
        }
        pivot(&v).is_none()
    }

    /// Whether `w` could be trivial: its exponent vector lies in the lattice.
    pub fn may_be_trivial(&self, w: &Word) -> bool {
        let v: Vec<i128> = w.exponent_sums(self.rank).into_iter().map(i128::from).collect();
        self.contains(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_lattice() {
        let p = Presentation::from_strs(&["x"], &["x^6", "x^4"]).unwrap();
        let l = RelationLattice::new(&p);
        assert!(l.contains(&[2]));
        assert!(!l.contains(&[3]));
        assert!(l.contains(&[0]));
    }

    #[test]
    fn mixed_lattice() {
        let p = Presentation::from_strs(&["a", "b"], &["a^2 b^4", "a b^-1 a b^-1"]).unwrap();
        let l = RelationLattice::new(&p);
        // spanned by (2,4) and (2,-2): contains (0,6), (4,2), not (2,0)
        assert!(l.contains(&[0, 6]));
        assert!(l.contains(&[4, 2]));
        assert!(!l.contains(&[2, 0]));
        assert!(!l.contains(&[0, 3]));
        let w = p.parse_word("a b a^-1 b^-1").unwrap();
        assert!(l.may_be_trivial(&w));
    }

    #[test]
    fn surface_lattice_is_zero() {
        let p = Presentation::from_strs(&["a", "b", "c", "d"], &["a b a^-1 b^-1 c d c^-1 d^-1"]).unwrap();
        let l = RelationLattice::new(&p);
        assert!(!l.contains(&[1, 0, 0, 0]));
        assert!(l.contains(&[0, 0, 0, 0]));
    }
}
