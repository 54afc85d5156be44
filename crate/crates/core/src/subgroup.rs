//! Conjugacy in subgroups from membership, membership in normal subgroups
//! from conjugacy, and the centralizer computations both rely on.

use crate::abelian::RelationLattice;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::oracle::{Membership, Stall, Tri, WordProblem};
use crate::presentation::Presentation;
use crate::profinite::decide::{parallel_decide_conjugacy, verify_conjugator};
use crate::profinite::witness::{separate_from_cyclic_double_coset, WitnessSearch};
use crate::rips::RipsOutput;
use crate::smallcanc::{CyclicForm, SymmetrizedSet};
use crate::verdict::{ConjugacyVerdict, Evidence};
use crate::word::{Word, WordEnumerator};

/// A C'(1/6)-certified group with its search budget.
#[derive(Clone, Debug)]
pub struct GroupContext {
    set: SymmetrizedSet,
    lattice: RelationLattice,
    budget: Budget,
}

impl GroupContext {
    pub fn new(p: Presentation, budget: Budget) -> Result<Self> {
        let set = SymmetrizedSet::new(&p)?;
        if !set.is_certified() {
            return Err(Error::CertificateMissing);
        }
        Ok(GroupContext {
            lattice: RelationLattice::new(&p),
            set,
            budget,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        self.set.presentation()
    }

    pub fn symmetrized(&self) -> &SymmetrizedSet {
        &self.set
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn with_budget(&self, budget: Budget) -> Self {
        GroupContext { budget, ..self.clone() }
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        self.set.dehn_reduce(w).is_empty()
    }

    pub fn cyclic_form(&self, w: &Word) -> CyclicForm {
        self.set.cyclic_dehn_form(w).expect("context is certified")
    }

    /// Parses a word, panicking on bad input; for tests and examples.
    pub fn parse(&self, text: &str) -> Word {
        self.presentation().parse_word(text).expect("valid word")
    }
}

impl WordProblem for GroupContext {
    fn is_trivial(&self, w: &Word) -> Tri {
        Ok(GroupContext::is_trivial(self, w))
    }
}

/// `C_G(x) = ⟨root⟩` with `root^k = x`, and the cosets of `⟨x⟩` in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerData {
    /// Cyclic Dehn form of `x`.
    pub element: Word,
    pub root: Word,
    pub k: usize,
    /// `root^0, .., root^(k-1)`.
    pub coset_reps: Vec<Word>,
    /// The whole search range was covered, so `k` is maximal within it.
    pub exhaustive: bool,
    /// Candidate roots examined.
    pub steps: u64,
}

impl CentralizerData {
    fn new(element: Word, root: Word, k: usize, exhaustive: bool, steps: u64) -> Self {
        let coset_reps = (0..k as i64).map(|i| root.pow(i)).collect();
        CentralizerData {
            element,
            root,
            k,
            coset_reps,
            exhaustive,
            steps,
        }
    }
}

/// Finds the primitive root of `x`. The period of the cyclic form gives a
/// first root `s` with `s^k0 = form`; words of length up to `|form| · slack`
/// are then tried as roots `t` with `t^j = s`, `j ≥ 2`, pruned by the
/// abelianization.
pub fn centralizer_coset_reps(ctx: &GroupContext, x: &Word) -> Result<CentralizerData> {
    let cf = ctx.cyclic_form(x);
    let form = cf.form;
    if form.is_empty() {
        return Err(Error::Input("the identity has no cyclic centralizer".into()));
    }
    let period = form.cyclic_period();
    let mut s = form.prefix(period);
    let mut k = form.len() / period;
    let budget = ctx.budget();
    let bound = form.len() * budget.root_slack;
    let rank = ctx.presentation().rank();
    let mut steps = 0u64;
    let mut exhaustive = true;

    let vec_of = |w: &Word| -> Vec<i128> { w.exponent_sums(rank).into_iter().map(i128::from).collect() };
    let mut s_vec = vec_of(&s);
    let mut j_max = s.len() * budget.root_slack;
    let mut search = WordEnumerator::new(rank, bound).skip(1);
    for t in search.by_ref() {
        steps += 1;
        if steps > budget.max_steps {
            exhaustive = false;
            break;
        }
        if t.len() >= s.len() {
            // a root of s is never longer than s itself
            break;
        }
        let t_vec = vec_of(&t);
        for j in 2..=j_max {
            let diff: Vec<i128> = t_vec.iter().zip(&s_vec).map(|(&a, &b)| j as i128 * a - b).collect();
            if !ctx.lattice.contains(&diff) {
                continue;
            }
            if ctx.is_trivial(&t.pow(j as i64).mul(&s.inverse())) {
                k *= j;
                s = t.clone();
                s_vec = t_vec.clone();
                j_max = s.len() * budget.root_slack;
                break;
            }
        }
    }
    let root = cf.conjugator.mul(&s).mul(&cf.conjugator.inverse());
    debug_assert!(ctx.is_trivial(&root.pow(k as i64).mul(&x.inverse())));
    Ok(CentralizerData::new(form, root, k, exhaustive, steps))
}

/// A subgroup given by generators and a membership oracle.
pub struct SubgroupContext<'a> {
    pub ambient: &'a GroupContext,
    pub gens: Vec<Word>,
    pub membership: Box<dyn Membership + 'a>,
    /// Caller's assertion that the subgroup is normal.
    pub normal: bool,
}

impl<'a> SubgroupContext<'a> {
    pub fn new(ambient: &'a GroupContext, gens: Vec<Word>, membership: Box<dyn Membership + 'a>, normal: bool) -> Self {
        SubgroupContext {
            ambient,
            gens,
            membership,
            normal,
        }
    }

    pub fn contains(&self, w: &Word) -> Tri {
        self.membership.contains(w)
    }

    /// Whether every letter of `w` is (the inverse of) a one-letter generator.
    pub fn syntactically_contains(&self, w: &Word) -> bool {
        w.iter().all(|l| {
            self.gens
                .iter()
                .any(|g| g.len() == 1 && g.letters()[0].gen() == l.gen())
        })
    }
}

/// Membership in `ψ⁻¹(K)` for a hom `ψ` and a word problem for the quotient
/// by `K`.
pub struct QuotientMembership<'a> {
    psi: &'a crate::hom::GroupHom,
    quotient: Box<dyn WordProblem + 'a>,
}

impl<'a> QuotientMembership<'a> {
    pub fn new(psi: &'a crate::hom::GroupHom, quotient: Box<dyn WordProblem + 'a>) -> Self {
        QuotientMembership { psi, quotient }
    }
}

impl Membership for QuotientMembership<'_> {
    fn contains(&self, w: &Word) -> Tri {
        let img = self
            .psi
            .apply(w)
            .map_err(|e| Stall::new("quotient-membership", 0, e.to_string()))?;
        self.quotient.is_trivial(&img)
    }
}

/// Membership in `N` through the word problem of `G/N ≅ P`.
pub fn quotient_word_problem(out: &RipsOutput, w: &Word, p_oracle: &dyn WordProblem) -> Result<Tri> {
    Ok(p_oracle.is_trivial(&out.psi.apply(w)?))
}

fn stall_verdict<C>(stage: &str, s: Stall) -> ConjugacyVerdict<C> {
    ConjugacyVerdict::Undecided(Stall::new(format!("{stage}: {}", s.stage), s.consumed, s.frontier))
}

/// Conjugacy in a subgroup `H` from membership in `H`: decide in `G`, then
/// test the conjugators `h_i⁻¹ g` for the centralizer coset
/// representatives `h_i`.
pub fn conj_in_subgroup(h: &SubgroupContext, x: &Word, y: &Word) -> Result<ConjugacyVerdict> {
    let ctx = h.ambient;
    for (w, name) in [(x, "x"), (y, "y")] {
        match h.contains(w) {
            Ok(true) => {}
            Ok(false) => return Err(Error::Input(format!("{name} is not in the subgroup"))),
            Err(s) => return Ok(stall_verdict("membership", s)),
        }
    }
    if x.free_reduce() == y.free_reduce() {
        return Ok(ConjugacyVerdict::Conjugate(Word::empty()));
    }
    let g = match parallel_decide_conjugacy(ctx, x, y).verdict {
        ConjugacyVerdict::Conjugate(g) => g,
        other => return Ok(other),
    };
    if ctx.is_trivial(x) {
        // both trivial
        return Ok(ConjugacyVerdict::Conjugate(Word::empty()));
    }
    let cd = centralizer_coset_reps(ctx, x)?;
    let mut rejected = Vec::new();
    for hi in &cd.coset_reps {
        let c = hi.inverse().mul(&g);
        match h.contains(&c) {
            Ok(true) => {
                assert!(
                    verify_conjugator(ctx, x, y, &c),
                    "centralizer representative broke the conjugator"
                );
                return Ok(ConjugacyVerdict::Conjugate(c));
            }
            Ok(false) => rejected.push(c),
            Err(s) => return Ok(stall_verdict("membership", s)),
        }
    }
    if !cd.exhaustive {
        return Ok(ConjugacyVerdict::Undecided(Stall::new(
            "root-search",
            cd.steps,
            format!("roots of length below {}", cd.root.len()),
        )));
    }
    Ok(ConjugacyVerdict::NonConjugate(Evidence::CentralizerRejection {
        root: cd.root,
        k: cd.k,
        conjugator: g,
        rejected,
    }))
}

/// Membership in a normal subgroup `N` from conjugacy in `N`, for a fixed
/// `x0 ∈ N` of infinite order. `C_G(x0) = ⟨r⟩` and `C_N(x0) = ⟨r^d⟩`; the
/// representatives `f_i = r^i`, `i < d`, are found once with the bootstrap
/// membership oracle of the subgroup context.
pub struct MembershipViaConj<'a> {
    n: &'a SubgroupContext<'a>,
    x0: Word,
    root: Word,
    d: usize,
    f_reps: Vec<Word>,
}

/// An oracle deciding conjugacy inside `N`.
pub trait ConjugacyOracle {
    fn decide(&self, x: &Word, y: &Word) -> Result<ConjugacyVerdict>;
}

impl<F> ConjugacyOracle for F
where
    F: Fn(&Word, &Word) -> Result<ConjugacyVerdict>,
{
    fn decide(&self, x: &Word, y: &Word) -> Result<ConjugacyVerdict> {
        self(x, y)
    }
}

/// [`conj_in_subgroup`] as a [`ConjugacyOracle`].
pub struct SubgroupConjugacy<'a, 'b>(pub &'b SubgroupContext<'a>);

impl ConjugacyOracle for SubgroupConjugacy<'_, '_> {
    fn decide(&self, x: &Word, y: &Word) -> Result<ConjugacyVerdict> {
        conj_in_subgroup(self.0, x, y)
    }
}

impl<'a> MembershipViaConj<'a> {
    pub fn new(n: &'a SubgroupContext<'a>, x0: &Word) -> Result<Self> {
        if !n.normal {
            return Err(Error::Input("membership from conjugacy needs a normal subgroup".into()));
        }
        match n.contains(x0) {
            Ok(true) => {}
            Ok(false) => return Err(Error::Input("x0 is not in the subgroup".into())),
            Err(s) => return Err(Error::Input(format!("cannot confirm x0 is in the subgroup: {s}"))),
        }
        let ctx = n.ambient;
        if ctx.is_trivial(x0) {
            return Err(Error::Input("x0 must be nontrivial".into()));
        }
        let cd = centralizer_coset_reps(ctx, x0)?;
        if !cd.exhaustive {
            return Err(Error::Input("root search for x0 did not finish".into()));
        }
        let mut d = cd.k;
        for i in 1..cd.k {
            match n.contains(&cd.root.pow(i as i64)) {
                Ok(true) => {
                    d = i;
                    break;
                }
                Ok(false) => {}
                Err(s) => return Err(Error::Input(format!("cannot place root powers: {s}"))),
            }
        }
        let f_reps = (0..d as i64).map(|i| cd.root.pow(i)).collect();
        Ok(MembershipViaConj {
            n,
            x0: x0.clone(),
            root: cd.root,
            d,
            f_reps,
        })
    }

    pub fn x0(&self) -> &Word {
        &self.x0
    }

    /// Representatives of `C_N(x0)` in `C_G(x0)`, starting with the identity.
    pub fn f_reps(&self) -> &[Word] {
        &self.f_reps
    }

    /// Decides `g ∈ N`.
    pub fn contains(&self, g: &Word, conj: &dyn ConjugacyOracle) -> Result<Tri> {
        let ctx = self.n.ambient;
        let budget = ctx.budget();
        if self.n.syntactically_contains(g) {
            return Ok(Ok(true));
        }
        let xg = self.x0.conjugate_by(g);
        // conj(x0^g, x0) gives c ∈ N with c⁻¹ x0^g c = x0, so h = c⁻¹ has x0^h = x0^g
        let h = match conj.decide(&xg, &self.x0)? {
            ConjugacyVerdict::NonConjugate(_) => return Ok(Ok(false)),
            ConjugacyVerdict::Undecided(s) => return Ok(Err(s)),
            ConjugacyVerdict::Conjugate(c) => {
                let h = c.inverse();
                if ctx.is_trivial(&xg.mul(&self.x0.conjugate_by(&h).inverse())) {
                    h
                } else {
                    match self.find_h(&xg, budget)? {
                        Ok(h) => h,
                        Err(s) => return Ok(Err(s)),
                    }
                }
            }
        };
        // g h⁻¹ ∈ C_G(x0) = ⟨r⟩; find the f_i with g h⁻¹ f_i⁻¹ ∈ C_N(x0) = ⟨r^d⟩
        let z = g.mul(&h.inverse());
        let span = (g.len() + h.len() + 1) * budget.root_slack.max(1) + self.d;
        let step = self.root.pow(self.d as i64);
        let mut steps = 0u64;
        for (i, f) in self.f_reps.iter().enumerate() {
            let target = z.mul(&f.inverse());
            for m in std::iter::once(0i64).chain((1..=span as i64).flat_map(|m| [m, -m])) {
                steps += 1;
                if ctx.is_trivial(&target.mul(&step.pow(-m))) {
                    return Ok(Ok(i == 0));
                }
            }
        }
        Ok(Err(Stall::new(
            "centralizer-power-search",
            steps,
            format!("|m| <= {span}"),
        )))
    }

    /// Enumerates words over `G`, keeps those the bootstrap oracle puts in
    /// `N`, and returns the first `h` with `x0^h = x0^g`.
    fn find_h(&self, xg: &Word, budget: &Budget) -> Result<std::result::Result<Word, Stall>> {
        let ctx = self.n.ambient;
        let control = budget.control();
        let mut steps = 0u64;
        for h in WordEnumerator::new(ctx.presentation().rank(), budget.max_length) {
            steps += 1;
            if steps > budget.max_steps || (steps % 256 == 0 && control.should_stop()) {
                return Ok(Err(Stall::new(
                    "subgroup-enumeration",
                    steps,
                    format!("length {}", h.len()),
                )));
            }
            if self.n.contains(&h) != Ok(true) {
                continue;
            }
            if ctx.is_trivial(&xg.mul(&self.x0.conjugate_by(&h).inverse())) {
                return Ok(Ok(h));
            }
        }
        Ok(Err(Stall::new(
            "subgroup-enumeration-exhausted",
            steps,
            format!("length {}", budget.max_length),
        )))
    }
}

/// Finite quotient in which `g` avoids `C_G(x) · ⟨h_gens⟩`, with the cyclic
/// centralizer computed first. Refuses when the root search is incomplete.
pub fn separate_from_double_coset(ctx: &GroupContext, g: &Word, x: &Word, h_gens: &[Word]) -> Result<WitnessSearch> {
    let cd = centralizer_coset_reps(ctx, x)?;
    if !cd.exhaustive {
        return Err(Error::CertificateMissing);
    }
    let budget = ctx.budget();
    separate_from_cyclic_double_coset(ctx.presentation(), g, &cd.root, h_gens, budget, &budget.control())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::auto_oracle;
    use crate::rips::{rips_build, RipsParams};

    fn budget() -> Budget {
        Budget {
            time_ms: None,
            ..Budget::default()
        }
    }

    fn free_ctx() -> GroupContext {
        GroupContext::new(Presentation::free(&["a", "b"]).unwrap(), budget()).unwrap()
    }

    fn surface_ctx() -> GroupContext {
        let p = Presentation::from_strs(&["a", "b", "c", "d"], &["a b a^-1 b^-1 c d c^-1 d^-1"]).unwrap();
        GroupContext::new(p, budget()).unwrap()
    }

    #[test]
    fn free_square_root() {
        let c = free_ctx();
        let cd = centralizer_coset_reps(&c, &c.parse("a^2")).unwrap();
        assert_eq!(cd.root, c.parse("a"));
        assert_eq!(cd.k, 2);
        assert_eq!(cd.coset_reps, vec![Word::empty(), c.parse("a")]);
        assert!(cd.exhaustive);
    }

    #[test]
    fn conjugated_power_root() {
        let c = free_ctx();
        let x = c.parse("b a^3 b^-1");
        let cd = centralizer_coset_reps(&c, &x).unwrap();
        assert_eq!(cd.root, c.parse("b a b^-1"));
        assert_eq!(cd.k, 3);
    }

    #[test]
    fn surface_generator_is_primitive() {
        let c = surface_ctx();
        let cd = centralizer_coset_reps(&c, &c.parse("a")).unwrap();
        assert_eq!((cd.root.clone(), cd.k), (c.parse("a"), 1));
        let cd = centralizer_coset_reps(&c, &c.parse("a b a b")).unwrap();
        assert_eq!(cd.k, 2);
        assert!(c.is_trivial(&cd.root.pow(2).mul(&c.parse("a b a b").inverse())));
    }

    struct Always;
    impl Membership for Always {
        fn contains(&self, _: &Word) -> Tri {
            Ok(true)
        }
    }

    #[test]
    fn equal_elements_are_conjugate() {
        let c = free_ctx();
        let h = SubgroupContext::new(&c, c.presentation().generators(), Box::new(Always), true);
        let x = c.parse("a b");
        assert_eq!(
            conj_in_subgroup(&h, &x, &x).unwrap(),
            ConjugacyVerdict::Conjugate(Word::empty())
        );
    }

    fn z3_rips() -> (RipsOutput, GroupContext) {
        let p = Presentation::from_strs(&["x"], &["x^3"]).unwrap();
        let out = rips_build(&p, &RipsParams::default()).unwrap();
        let ctx = GroupContext::new(out.g.clone(), budget()).unwrap();
        (out, ctx)
    }

    #[test]
    fn rips_normal_subgroup_conjugacy() {
        let (out, ctx) = z3_rips();
        let p_oracle = auto_oracle(&out.p, 100);
        let n = SubgroupContext::new(
            &ctx,
            out.n_gens.clone(),
            Box::new(QuotientMembership::new(&out.psi, p_oracle)),
            true,
        );
        let a1 = ctx.parse("a1");
        let y = a1.conjugate_by(&ctx.parse("x"));
        let v = conj_in_subgroup(&n, &a1, &y).unwrap();
        assert!(
            matches!(v, ConjugacyVerdict::NonConjugate(Evidence::CentralizerRejection { .. })),
            "{v:?}"
        );

        let t = ctx.parse("a2 a1^-1 a2");
        let y = a1.conjugate_by(&t);
        let ConjugacyVerdict::Conjugate(c) = conj_in_subgroup(&n, &a1, &y).unwrap() else {
            panic!()
        };
        assert!(verify_conjugator(&ctx, &a1, &y, &c));
        assert_eq!(n.contains(&c), Ok(true));
    }

    #[test]
    fn membership_from_conjugacy() {
        let (out, ctx) = z3_rips();
        let p_oracle = auto_oracle(&out.p, 100);
        let n = SubgroupContext::new(
            &ctx,
            out.n_gens.clone(),
            Box::new(QuotientMembership::new(&out.psi, p_oracle)),
            true,
        );
        let m = MembershipViaConj::new(&n, &ctx.parse("a1")).unwrap();
        assert_eq!(m.f_reps(), &[Word::empty()]);
        let oracle = SubgroupConjugacy(&n);
        assert_eq!(m.contains(&ctx.parse("a1 a2^-1"), &oracle).unwrap(), Ok(true));
        assert_eq!(m.contains(&ctx.parse("x"), &oracle).unwrap(), Ok(false));
        assert_eq!(m.contains(&ctx.parse("a1 x^3"), &oracle).unwrap(), Ok(true));
        assert_eq!(m.contains(&ctx.parse("x a1 x^-1"), &oracle).unwrap(), Ok(true));
    }

    #[test]
    fn quotient_word_problem_examples() {
        let (out, ctx) = z3_rips();
        let o = auto_oracle(&out.p, 100);
        assert_eq!(
            quotient_word_problem(&out, &ctx.parse("a1 a2"), o.as_ref()).unwrap(),
            Ok(true)
        );
        assert_eq!(
            quotient_word_problem(&out, &ctx.parse("x"), o.as_ref()).unwrap(),
            Ok(false)
        );
        assert_eq!(
            quotient_word_problem(&out, &ctx.parse("x^3 a1"), o.as_ref()).unwrap(),
            Ok(true)
        );
    }

    #[test]
    fn double_coset_separation() {
        let c = free_ctx();
        let (a, b) = (c.parse("a"), c.parse("b"));
        let s = separate_from_double_coset(&c, &b, &a, &[a.clone()]).unwrap();
        assert!(s.witness.unwrap().verify(c.presentation(), 10_000));
    }
}
