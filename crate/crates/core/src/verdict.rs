use crate::oracle::Stall;
use crate::presentation::Presentation;
use crate::profinite::witness::Witness;
use crate::record::Record;
use crate::word::Word;

/// Why two elements are known not to be conjugate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// A finite quotient in which the images are not conjugate.
    Quotient(Witness),
    /// Conjugate in the ambient group, but every candidate `h_i⁻¹ g` built
    /// from the centralizer coset representatives was rejected by the
    /// subgroup's membership oracle.
    CentralizerRejection {
        root: Word,
        k: usize,
        conjugator: Word,
        rejected: Vec<Word>,
    },
    /// Conjugate in `G × G`, but for every representative pair `(a, b)` the
    /// quotient image of `a b⁻¹` lies outside the cyclic subgroup generated
    /// by the image of `x_1`.
    MpcsRejection { rejected: Vec<(Word, Word)> },
    /// One coordinate of a pair is already non-conjugate.
    Component { index: usize, evidence: Box<Evidence> },
}

impl Evidence {
    pub fn to_record(&self, p: &Presentation) -> Record {
        let mut r = Record::new();
        match self {
            Evidence::Quotient(w) => {
                r.push("evidence", "quotient");
                r.extend_prefixed("witness_", w.to_record(p));
            }
            Evidence::CentralizerRejection {
                root,
                k,
                conjugator,
                rejected,
            } => {
                r.push("evidence", "centralizer-rejection");
                r.push("root", p.format_word(root));
                r.push("k", k);
                r.push("ambient_conjugator", p.format_word(conjugator));
                r.push_many("rejected", rejected.iter().map(|w| p.format_word(w)));
            }
            Evidence::MpcsRejection { rejected } => {
                r.push("evidence", "mpcs-rejection");
                r.push_many(
                    "rejected",
                    rejected
                        .iter()
                        .map(|(a, b)| format!("({} | {})", p.format_word(a), p.format_word(b))),
                );
            }
            Evidence::Component { index, evidence } => {
                r.push("evidence", "component");
                r.push("component", index + 1);
                r.extend_prefixed("component_", evidence.to_record(p));
            }
        }
        r
    }
}

/// Outcome of a conjugacy question; `C` is the conjugator type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjugacyVerdict<C = Word> {
    /// `c` with `c⁻¹ x c = y`, already re-verified.
    Conjugate(C),
    NonConjugate(Evidence),
    Undecided(Stall),
}

impl<C> ConjugacyVerdict<C> {
    pub fn is_definite(&self) -> bool {
        !matches!(self, ConjugacyVerdict::Undecided(_))
    }

    pub fn is_conjugate(&self) -> bool {
        matches!(self, ConjugacyVerdict::Conjugate(_))
    }

    pub fn is_non_conjugate(&self) -> bool {
        matches!(self, ConjugacyVerdict::NonConjugate(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConjugacyVerdict::Conjugate(_) => "conjugate",
            ConjugacyVerdict::NonConjugate(_) => "non-conjugate",
            ConjugacyVerdict::Undecided(_) => "undecided",
        }
    }

    pub fn map<D>(self, f: impl FnOnce(C) -> D) -> ConjugacyVerdict<D> {
        match self {
            ConjugacyVerdict::Conjugate(c) => ConjugacyVerdict::Conjugate(f(c)),
            ConjugacyVerdict::NonConjugate(e) => ConjugacyVerdict::NonConjugate(e),
            ConjugacyVerdict::Undecided(s) => ConjugacyVerdict::Undecided(s),
        }
    }
}

/// Fields describing a stall.
pub fn stall_record(s: &Stall) -> Record {
    let mut r = Record::new();
    r.push("stage", &s.stage)
        .push("consumed", s.consumed)
        .push("frontier", &s.frontier);
    r
}
