//! Finite quotients separating elements, conjugacy classes, subgroups and
//! double cosets, with their self-verifying records.

use conjsep::budget::Budget;
use conjsep::profinite::witness::{parse_witness, separate_conjugacy, separate_elements, separate_from_subgroup};
use conjsep::subgroup::{separate_from_double_coset, GroupContext};
use conjsep::Presentation;

fn main() -> conjsep::Result<()> {
    let budget = Budget::default();
    let control = budget.control();
    let f = Presentation::free(&["a", "b"])?;
    let w = |s: &str| f.parse_word(s);

    let s = separate_elements(&f, &w("a b")?, &w("b a")?, &budget, &control)?;
    let witness = s.witness.expect("[a, b] is nontrivial");
    let text = witness.to_record(&f).to_text();
    print!("{text}");
    let parsed = parse_witness(&f, &text)?;
    println!("reparsed and verified: {}\n", parsed.verify(&f, budget.image_cap));

    let s = separate_conjugacy(&f, &w("a b")?, &w("a b^-1")?, &budget, &control)?;
    print!("{}", s.witness.expect("distinct classes").to_record(&f).to_text());
    println!();

    let s = separate_from_subgroup(&f, &w("b")?, &[w("a")?, w("b a b^-1")?], &budget, &control)?;
    print!(
        "{}",
        s.witness.expect("b is not in <a, b a b^-1>").to_record(&f).to_text()
    );
    println!();

    let ctx = GroupContext::new(f.clone(), budget.clone())?;
    let s = separate_from_double_coset(&ctx, &w("b")?, &w("a")?, &[w("a^2")?])?;
    match s.witness {
        Some(wit) => print!("{}", wit.to_record(&f).to_text()),
        None => println!("no witness: {}", s.stall()),
    }
    Ok(())
}
