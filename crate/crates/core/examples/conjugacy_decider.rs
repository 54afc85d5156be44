//! The conjugacy decider on the surface group: cyclic forms, conjugator
//! search and finite-quotient witnesses racing under one budget.

use conjsep::budget::Budget;
use conjsep::profinite::decide::parallel_decide_conjugacy;
use conjsep::subgroup::GroupContext;
use conjsep::verdict::ConjugacyVerdict;
use conjsep::Presentation;

fn main() -> conjsep::Result<()> {
    let p = Presentation::from_strs(&["a", "b", "c", "d"], &["a b a^-1 b^-1 c d c^-1 d^-1"])?;
    let ctx = GroupContext::new(p.clone(), Budget::default())?;
    let pairs = [
        ("a b c", "c a b"),
        ("a c", "b^-1 a c b"),
        ("a b", "b a"),
        ("a", "a^-1"),
        ("a b^2", "b a^2"),
    ];
    for (x, y) in pairs {
        let d = parallel_decide_conjugacy(&ctx, &p.parse_word(x)?, &p.parse_word(y)?);
        let path = d.path.map_or("-", |p| p.name());
        let detail = match &d.verdict {
            ConjugacyVerdict::Conjugate(c) => format!("conjugator {}", p.format_word(c)),
            ConjugacyVerdict::NonConjugate(e) => {
                e.to_record(&p).to_text().lines().take(4).collect::<Vec<_>>().join("; ")
            }
            ConjugacyVerdict::Undecided(s) => s.to_string(),
        };
        println!("{x:>8} ~ {y:<12} {:<14} via {path:<18} {detail}", d.verdict.name());
    }
    Ok(())
}
