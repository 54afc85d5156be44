//! Homomorphisms between finitely presented groups, given on generators.

use crate::error::{Error, Result};
use crate::oracle::{Stall, WordProblem};
use crate::presentation::Presentation;
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: Presentation,
    target: Presentation,
    images: Vec<Word>,
}

/// Outcome of [`GroupHom::check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomCheck {
    WellDefined,
    /// Index of the first source relator whose image is nontrivial.
    Fails {
        relator: usize,
    },
    /// The target oracle could not decide the given relator.
    Indeterminate {
        relator: usize,
        stall: Stall,
    },
}

impl GroupHom {
    pub fn new(source: Presentation, target: Presentation, images: Vec<Word>) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::Input(format!(
                "{} generator images for a source of rank {}",
                images.len(),
                source.rank()
            )));
        }
        for w in &images {
            target.alphabet().check_word(w)?;
        }
        let images = images.iter().map(Word::free_reduce).collect();
        Ok(GroupHom { source, target, images })
    }

    /// Sends every source generator to the same-named target generator and
    /// every other source generator to the identity.
    pub fn by_name_deleting(source: Presentation, target: Presentation) -> Result<Self> {
        let images = source
            .alphabet()
            .names()
            .iter()
            .map(|n| match target.alphabet().lookup(n) {
                Some(g) => Word::letter(g),
                None => Word::empty(),
            })
            .collect();
        Self::new(source, target, images)
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image_of_letter(&self, l: Letter) -> Word {
        let w = &self.images[l.gen()];
        if l.is_inverse() {
            w.inverse()
        } else {
            w.clone()
        }
    }

    /// Substitutes generator images and freely reduces.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.source.alphabet().check_word(w)?;
        let mut out = Word::empty();
        for &l in w.iter() {
            out = out.mul(&self.image_of_letter(l));
        }
        Ok(out)
    }

    /// Checks that every source relator maps to the identity of the target
    /// according to `target_wp`.
    pub fn check(&self, target_wp: &dyn WordProblem) -> HomCheck {
        for (i, r) in self.source.relators().iter().enumerate() {
            let image = self.apply(r).expect("relators are over the source alphabet");
            match target_wp.is_trivial(&image) {
                Ok(true) => {}
                Ok(false) => return HomCheck::Fails { relator: i },
                Err(stall) => return HomCheck::Indeterminate { relator: i, stall },
            }
        }
        HomCheck::WellDefined
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{FiniteOracle, FreeOracle};

    #[test]
    fn deletion_map() {
        let g = Presentation::free(&["x", "a1", "a2"]).unwrap();
        let p = Presentation::free(&["x"]).unwrap();
        let h = GroupHom::by_name_deleting(g.clone(), p.clone()).unwrap();
        let w = g.parse_word("x a1 x a2^-1").unwrap();
        assert_eq!(h.apply(&w).unwrap(), p.parse_word("x x").unwrap());
    }

    #[test]
    fn identity_and_collapsing_maps() {
        let g = Presentation::free(&["x", "y"]).unwrap();
        let id = GroupHom::new(g.clone(), g.clone(), g.generators()).unwrap();
        let w = g.parse_word("x y y^-1 x").unwrap();
        assert_eq!(id.apply(&w).unwrap(), w.free_reduce());

        let collapse = GroupHom::new(g.clone(), g.clone(), vec![Word::letter(0), Word::letter(0)]).unwrap();
        assert!(collapse.apply(&g.parse_word("x y^-1").unwrap()).unwrap().is_empty());
    }

    #[test]
    fn alphabet_error() {
        let g = Presentation::free(&["x"]).unwrap();
        let id = GroupHom::new(g.clone(), g.clone(), g.generators()).unwrap();
        assert!(matches!(id.apply(&Word::letter(3)), Err(Error::Alphabet { .. })));
    }

    #[test]
    fn check_examples() {
        let z = Presentation::free(&["x"]).unwrap();
        let z2 = Presentation::from_strs(&["y"], &["y^2"]).unwrap();
        let z3 = Presentation::from_strs(&["y"], &["y^3"]).unwrap();
        let h = GroupHom::new(z, z2.clone(), vec![Word::letter(0)]).unwrap();
        assert_eq!(h.check(&FreeOracle), HomCheck::WellDefined);

        let src = Presentation::from_strs(&["x"], &["x^2"]).unwrap();
        let h = GroupHom::new(src, z3.clone(), vec![Word::letter(0)]).unwrap();
        let oracle = FiniteOracle::enumerate(&z3, 10).unwrap();
        assert_eq!(h.check(&oracle), HomCheck::Fails { relator: 0 });
    }

    #[test]
    fn indeterminate_is_not_failure() {
        let src = Presentation::from_strs(&["x"], &["x^2"]).unwrap();
        let h = GroupHom::new(src.clone(), src, vec![Word::letter(0)]).unwrap();
        let stalled = |_: &Word| -> crate::oracle::Tri { Err(Stall::new("test", 1, "-")) };
        assert!(matches!(h.check(&stalled), HomCheck::Indeterminate { relator: 0, .. }));
    }
}
