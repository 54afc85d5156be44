//! Two-sided conjugacy decision: conjugator search against witness search.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;

use crate::budget::Control;
use crate::oracle::Stall;
use crate::profinite::witness::separate_conjugacy;
use crate::subgroup::GroupContext;
use crate::verdict::{ConjugacyVerdict, Evidence};
use crate::word::{Word, WordEnumerator};

/// Which procedure produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecisionPath {
    /// Cyclic Dehn forms agree up to rotation.
    CyclicForm,
    /// A conjugator was found by enumeration.
    ConjugatorSearch,
    /// A finite quotient separates the classes.
    WitnessSearch,
}

impl DecisionPath {
    pub fn name(self) -> &'static str {
        match self {
            DecisionPath::CyclicForm => "cyclic-form",
            DecisionPath::ConjugatorSearch => "conjugator-search",
            DecisionPath::WitnessSearch => "witness-search",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub verdict: ConjugacyVerdict,
    pub path: Option<DecisionPath>,
}

/// `c⁻¹ x c = y` in the group of `ctx`.
pub fn verify_conjugator(ctx: &GroupContext, x: &Word, y: &Word, c: &Word) -> bool {
    ctx.is_trivial(&x.conjugate_by(c).mul(&y.inverse()))
}

/// Path (i): compare cyclic Dehn forms. Returns a verified conjugator or
/// `None` when the forms differ.
pub fn cyclic_form_path(ctx: &GroupContext, x: &Word, y: &Word) -> Option<Word> {
    let fx = ctx.cyclic_form(x);
    let fy = ctx.cyclic_form(y);
    if fx.form != fy.form {
        return None;
    }
    // x = cx F cx⁻¹ and y = cy F cy⁻¹, so (cx cy⁻¹)⁻¹ x (cx cy⁻¹) = y
    let c = fx.conjugator.mul(&fy.conjugator.inverse());
    verify_conjugator(ctx, x, y, &c).then_some(c)
}

/// Path (ii): length-lex enumeration of candidate conjugators.
pub fn conjugator_search(ctx: &GroupContext, x: &Word, y: &Word, control: &Control) -> Result<Word, Stall> {
    let budget = ctx.budget();
    let y_inv = y.inverse();
    let mut steps = 0u64;
    let mut length = 0;
    for g in WordEnumerator::new(ctx.presentation().rank(), budget.max_length) {
        length = g.len();
        steps += 1;
        if steps > budget.max_steps || (steps % 256 == 0 && control.should_stop()) {
            return Err(Stall::new("conjugator-search", steps, format!("length {length}")));
        }
        if ctx.is_trivial(&x.conjugate_by(&g).mul(&y_inv)) {
            return Ok(g);
        }
    }
    Err(Stall::new(
        "conjugator-search-exhausted",
        steps,
        format!("length {length}"),
    ))
}

/// Path (iii): a finite quotient separating the conjugacy classes,
/// re-verified before it is returned.
pub fn witness_path(ctx: &GroupContext, x: &Word, y: &Word, control: &Control) -> Result<Evidence, Stall> {
    let p = ctx.presentation();
    let search = separate_conjugacy(p, x, y, ctx.budget(), control)
        .map_err(|e| Stall::new("witness-search", 0, e.to_string()))?;
    match search.witness {
        Some(w) if w.verify(p, ctx.budget().image_cap) => Ok(Evidence::Quotient(w)),
        Some(_) => panic!("witness search returned a witness that does not verify"),
        None => Err(search.stall()),
    }
}

enum Answer {
    Conjugate(Word),
    NonConjugate(Evidence),
}

/// Runs the cyclic-form path, then the conjugator and witness searches
/// concurrently under one budget. The first definite answer cancels the
/// other search.
pub fn parallel_decide_conjugacy(ctx: &GroupContext, x: &Word, y: &Word) -> Decision {
    if let Some(c) = cyclic_form_path(ctx, x, y) {
        return Decision {
            verdict: ConjugacyVerdict::Conjugate(c),
            path: Some(DecisionPath::CyclicForm),
        };
    }
    let cancel = AtomicBool::new(false);
    let control = ctx.budget().control().with_cancel(&cancel);
    let slot: Mutex<Option<(Answer, DecisionPath)>> = Mutex::new(None);
    let offer = |a: Answer, path: DecisionPath| {
        let mut s = slot.lock().expect("result slot");
        if let Some((prev, _)) = s.as_ref() {
            let clash = matches!(
                (prev, &a),
                (Answer::Conjugate(_), Answer::NonConjugate(_)) | (Answer::NonConjugate(_), Answer::Conjugate(_))
            );
            assert!(!clash, "conjugator and witness searches disagree");
            return;
        }
        *s = Some((a, path));
        cancel.store(true, Ordering::Relaxed);
    };
    let (conj_stall, wit_stall) = std::thread::scope(|scope| {
        let conj = scope.spawn(|| match conjugator_search(ctx, x, y, &control) {
            Ok(g) => {
                offer(Answer::Conjugate(g), DecisionPath::ConjugatorSearch);
                None
            }
            Err(s) => Some(s),
        });
        let wit = scope.spawn(|| match witness_path(ctx, x, y, &control) {
            Ok(e) => {
                offer(Answer::NonConjugate(e), DecisionPath::WitnessSearch);
                None
            }
            Err(s) => Some(s),
        });
        (
            conj.join().expect("conjugator search panicked"),
            wit.join().expect("witness search panicked"),
        )
    });
    match slot.into_inner().expect("result slot") {
        Some((Answer::Conjugate(c), path)) => Decision {
            verdict: ConjugacyVerdict::Conjugate(c),
            path: Some(path),
        },
        Some((Answer::NonConjugate(e), path)) => Decision {
            verdict: ConjugacyVerdict::NonConjugate(e),
            path: Some(path),
        },
        None => {
            let c = conj_stall.expect("no answer means both searches stalled");
            let w = wit_stall.expect("no answer means both searches stalled");
            Decision {
                verdict: ConjugacyVerdict::Undecided(Stall::new(
                    "conjugacy",
                    c.consumed + w.consumed,
                    format!("{}; {}", c, w),
                )),
                path: None,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::presentation::Presentation;

    fn ctx(p: Presentation) -> GroupContext {
        GroupContext::new(
            p,
            Budget {
                time_ms: None,
                ..Budget::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn rotations_use_cyclic_forms() {
        let c = ctx(Presentation::free(&["a", "b"]).unwrap());
        let x = c.parse("a b b");
        let y = c.parse("b a b");
        let d = parallel_decide_conjugacy(&c, &x, &y);
        assert_eq!(d.path, Some(DecisionPath::CyclicForm));
        let ConjugacyVerdict::Conjugate(g) = d.verdict else {
            panic!()
        };
        assert!(verify_conjugator(&c, &x, &y, &g));
    }

    #[test]
    fn inverse_generator_needs_a_witness() {
        let c = ctx(Presentation::free(&["a", "b"]).unwrap());
        let x = c.parse("a");
        let d = parallel_decide_conjugacy(&c, &x, &x.inverse());
        assert_eq!(d.path, Some(DecisionPath::WitnessSearch));
        assert!(d.verdict.is_non_conjugate());
    }

    #[test]
    fn surface_conjugates() {
        let c = ctx(Presentation::from_strs(&["a", "b", "c", "d"], &["a b a^-1 b^-1 c d c^-1 d^-1"]).unwrap());
        let x = c.parse("a c");
        let g = c.parse("b d^-1 a");
        let y = x.conjugate_by(&g);
        let d = parallel_decide_conjugacy(&c, &x, &y);
        let ConjugacyVerdict::Conjugate(h) = d.verdict else {
            panic!("{d:?}")
        };
        assert!(verify_conjugator(&c, &x, &y, &h));
    }

    #[test]
    fn explicit_conjugator_search() {
        let c = ctx(Presentation::from_strs(&["a", "b", "c", "d"], &["a b a^-1 b^-1 c d c^-1 d^-1"]).unwrap());
        let x = c.parse("a b");
        let y = c.parse("b a");
        let g = conjugator_search(&c, &x, &y, &Control::unlimited()).unwrap();
        assert!(g.len() <= 1);
        assert!(verify_conjugator(&c, &x, &y, &g));
    }

    #[test]
    fn exhausted_budget_is_undecided() {
        let p = Presentation::free(&["a", "b"]).unwrap();
        let c = GroupContext::new(
            p,
            Budget {
                max_length: 1,
                max_degree: 1,
                time_ms: None,
                ..Budget::default()
            },
        )
        .unwrap();
        let d = parallel_decide_conjugacy(&c, &c.parse("a"), &c.parse("a^-1"));
        assert!(matches!(d.verdict, ConjugacyVerdict::Undecided(_)));
        assert_eq!(d.path, None);
    }
}
