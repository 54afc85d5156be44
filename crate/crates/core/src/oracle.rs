//! Tri-state oracles: a definite `Ok(bool)` or an [`Stall`] saying which
//! search ran out of budget.

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::profinite::coset::{todd_coxeter, CosetStatus};
use crate::profinite::perm::{Perm, PermQuotient};
use crate::smallcanc::SymmetrizedSet;
use crate::word::Word;

/// Why a search stopped without an answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stall {
    /// Which search stalled, e.g. `"root-search"` or `"conjugator-enumeration"`.
    pub stage: String,
    /// Work units spent (word-problem calls, assignments, ...).
    pub consumed: u64,
    /// Human readable frontier, e.g. `"length 6"`.
    pub frontier: String,
}

impl Stall {
    pub fn new(stage: impl Into<String>, consumed: u64, frontier: impl Into<String>) -> Self {
        Stall {
            stage: stage.into(),
            consumed,
            frontier: frontier.into(),
        }
    }
}

impl std::fmt::Display for Stall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} stalled after {} steps at {}",
            self.stage, self.consumed, self.frontier
        )
    }
}

pub type Tri = std::result::Result<bool, Stall>;

/// Decides whether a word is trivial in some fixed group.
pub trait WordProblem: Send + Sync {
    fn is_trivial(&self, w: &Word) -> Tri;
}

/// Decides whether a word lies in some fixed subgroup.
pub trait Membership: Send + Sync {
    fn contains(&self, w: &Word) -> Tri;
}

impl<F> WordProblem for F
where
    F: Fn(&Word) -> Tri + Send + Sync,
{
    fn is_trivial(&self, w: &Word) -> Tri {
        self(w)
    }
}

/// Word problem in a free group.
#[derive(Clone, Copy, Debug, Default)]
pub struct FreeOracle;

impl WordProblem for FreeOracle {
    fn is_trivial(&self, w: &Word) -> Tri {
        Ok(w.free_reduce().is_empty())
    }
}

/// Word problem in a C'(1/6) group via Dehn's algorithm.
#[derive(Clone, Debug)]
pub struct DehnOracle {
    set: SymmetrizedSet,
}

impl DehnOracle {
    /// Fails unless the presentation is certified C'(1/6).
    pub fn new(p: &Presentation) -> Result<Self> {
        let set = SymmetrizedSet::new(p)?;
        if !set.is_certified() {
            return Err(Error::CertificateMissing);
        }
        Ok(DehnOracle { set })
    }

    pub fn symmetrized(&self) -> &SymmetrizedSet {
        &self.set
    }
}

impl WordProblem for DehnOracle {
    fn is_trivial(&self, w: &Word) -> Tri {
        Ok(self.set.dehn_reduce(w).is_empty())
    }
}

/// Word problem in a finite group through a faithful permutation
/// representation.
#[derive(Clone, Debug)]
pub struct FiniteOracle {
    quotient: PermQuotient,
}

impl FiniteOracle {
    /// Caller guarantees faithfulness.
    pub fn from_faithful(quotient: PermQuotient) -> Self {
        FiniteOracle { quotient }
    }

    /// Regular representation from a complete coset enumeration over the
    /// trivial subgroup; `None` if it overflows `max_cosets`.
    pub fn enumerate(p: &Presentation, max_cosets: usize) -> Option<Self> {
        let table = todd_coxeter(p, &[], max_cosets);
        match table.status {
            CosetStatus::Complete => Some(FiniteOracle {
                quotient: table.permutation_quotient(),
            }),
            CosetStatus::Overflow(_) => None,
        }
    }

    pub fn quotient(&self) -> &PermQuotient {
        &self.quotient
    }

    pub fn order(&self) -> usize {
        self.quotient.degree()
    }

    pub fn image(&self, w: &Word) -> Perm {
        self.quotient.evaluate(w)
    }
}

impl WordProblem for FiniteOracle {
    fn is_trivial(&self, w: &Word) -> Tri {
        Ok(self.quotient.evaluate(w).is_identity())
    }
}

/// Recognizes conjugates of relators and their inverses; stalls on every
/// other nontrivial word.
#[derive(Clone, Debug)]
pub struct RelatorOracle {
    rotations: Vec<Word>,
}

impl RelatorOracle {
    pub fn new(p: &Presentation) -> Self {
        let mut rotations = Vec::new();
        for r in p.relators() {
            let core = r.cyclic_reduce().core;
            for w in [core.clone(), core.inverse()] {
                rotations.extend((0..w.len()).map(|i| w.rotate(i)));
            }
        }
        rotations.sort();
        rotations.dedup();
        RelatorOracle { rotations }
    }
}

impl WordProblem for RelatorOracle {
    fn is_trivial(&self, w: &Word) -> Tri {
        let core = w.cyclic_reduce().core;
        if core.is_empty() || self.rotations.binary_search(&core).is_ok() {
            return Ok(true);
        }
        Err(Stall::new("relator-oracle", 1, "not a conjugate of a relator"))
    }
}

/// A word-problem oracle for a presentation of unknown type: free groups,
/// finite groups found by coset enumeration, C'(1/6) groups, and otherwise
/// a [`RelatorOracle`].
pub fn auto_oracle(p: &Presentation, max_cosets: usize) -> Box<dyn WordProblem> {
    if p.relators().iter().all(Word::is_empty) {
        return Box::new(FreeOracle);
    }
    if let Some(f) = FiniteOracle::enumerate(p, max_cosets) {
        return Box::new(f);
    }
    match DehnOracle::new(p) {
        Ok(d) => Box::new(d),
        Err(_) => Box::new(RelatorOracle::new(p)),
    }
}
