//! Centralizer roots, conjugacy inside the normal subgroup N of a Rips
//! construction, and membership in N decided through conjugacy.

use conjsep::budget::Budget;
use conjsep::oracle::{auto_oracle, Membership};
use conjsep::rips::{rips_build, RipsParams};
use conjsep::subgroup::{
    centralizer_coset_reps, conj_in_subgroup, quotient_word_problem, GroupContext, MembershipViaConj,
    QuotientMembership, SubgroupConjugacy, SubgroupContext,
};
use conjsep::Presentation;

fn main() -> conjsep::Result<()> {
    let surface = Presentation::from_strs(&["a", "b", "c", "d"], &["a b a^-1 b^-1 c d c^-1 d^-1"])?;
    let ctx = GroupContext::new(surface.clone(), Budget::default())?;
    let x = surface.parse_word("c^-1 a b a b a b c")?;
    let cd = centralizer_coset_reps(&ctx, &x)?;
    println!(
        "root of {}: {} with k = {}",
        surface.format_word(&x),
        surface.format_word(&cd.root),
        cd.k
    );

    let p = Presentation::from_strs(&["x"], &["x^3"])?;
    let out = rips_build(&p, &RipsParams::default())?;
    let g = GroupContext::new(out.g.clone(), Budget::default())?;
    let n = SubgroupContext::new(
        &g,
        out.n_gens.clone(),
        Box::new(QuotientMembership::new(&out.psi, auto_oracle(&p, 100))) as Box<dyn Membership>,
        true,
    );
    let a1 = g.parse("a1");
    for y in ["x^-1 a1 x", "a2^-1 a1 a2", "a1^-1"] {
        let y = g.parse(y);
        let v = conj_in_subgroup(&n, &a1, &y)?;
        println!("a1 ~ {} in N: {}", out.g.format_word(&y), v.name());
    }

    let m = MembershipViaConj::new(&n, &a1)?;
    let oracle = SubgroupConjugacy(&n);
    let p_oracle = auto_oracle(&p, 100);
    for w in ["x a1 x^-1 a2", "x^3", "x a2", "a1 x^2"] {
        let w = g.parse(w);
        println!(
            "{:>14} in N: via conjugacy {:?}, via G/N {:?}",
            out.g.format_word(&w),
            m.contains(&w, &oracle)?,
            quotient_word_problem(&out, &w, p_oracle.as_ref())?
        );
    }
    Ok(())
}
