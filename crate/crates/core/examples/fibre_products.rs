//! Fibre products T_H inside G x G for a Rips construction over Z/6:
//! generators, conjugacy, and |T_H : T_N| = |H : N| via the eta image.

use conjsep::budget::Budget;
use conjsep::fibre::{
    fibre_conj, fibre_generators, fibre_membership, index_ratio_check, FibreContext, FiniteGroup, PairWord,
};
use conjsep::rips::{rips_build, RipsParams};
use conjsep::subgroup::GroupContext;
use conjsep::verdict::ConjugacyVerdict;
use conjsep::{Presentation, Word};

fn main() -> conjsep::Result<()> {
    let p = Presentation::from_strs(&["x"], &["x^6"])?;
    let out = rips_build(&p, &RipsParams::default())?;
    let g = GroupContext::new(out.g.clone(), Budget::default())?;
    let a = out.g.alphabet();

    let t_n = FibreContext::new(&out, &g, Vec::new())?;
    let gens: Vec<String> = fibre_generators(&t_n)?.iter().map(|w| w.format(a)).collect();
    println!("T_N generators: {}", gens.join(", "));
    for text in ["(x a1 | x)", "(x | x^2)", "(x^6 | a2)"] {
        let w = PairWord::parse(a, text)?;
        println!("{text} in T_N: {:?}", fibre_membership(&t_n, &w));
    }

    let x = PairWord::parse(a, "(a1 | a2)")?;
    for y in ["(x^-1 a1 x | x^-1 a2 x)", "(a1 | x^-1 a2 x)"] {
        let y = PairWord::parse(a, y)?;
        let v = fibre_conj(&t_n, &x, &y)?;
        let how = match &v {
            ConjugacyVerdict::Conjugate(c) => c.format(a),
            ConjugacyVerdict::NonConjugate(e) => e.to_record(&out.g).get_str("evidence").unwrap_or("").to_string(),
            ConjugacyVerdict::Undecided(s) => s.to_string(),
        };
        println!("{} ~ {}: {} ({how})", x.format(a), y.format(a), v.name());
    }

    let finite = FiniteGroup::by_enumeration(&p, 100)?;
    for k in [6, 3, 2, 1] {
        let t_h = FibreContext::new(&out, &g, vec![Word::power_of(0, k)])?;
        let r = index_ratio_check(&t_h, &t_n, &finite)?;
        println!("F = <x^{k}>: |eta(T_H) : eta(T_N)| = {}, |H : N| = {}", r.lhs, r.rhs);
    }
    Ok(())
}
