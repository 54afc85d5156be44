//! Piece reports, the C'(1/6) certificate and Dehn's algorithm on the
//! genus-two surface group.

use conjsep::smallcanc::{one_sixth, verify_metric, SymmetrizedSet};
use conjsep::Presentation;

fn main() -> conjsep::Result<()> {
    let p = Presentation::from_strs(&["a", "b", "c", "d"], &["a b a^-1 b^-1 c d c^-1 d^-1"])?;
    let (holds, report) = verify_metric(&p, one_sixth())?;
    println!("C'(1/6): {holds}");
    print!("{}", report.to_record(p.alphabet()));

    let s = SymmetrizedSet::new(&p)?;
    println!("symmetrized set: {} words", s.len());
    for text in ["a b a^-1 b^-1 c d c^-1", "b a b^-1 a^-1 d c d^-1 c^-1", "a b"] {
        let w = p.parse_word(text)?;
        println!(
            "{text:>32}  ->  {:<20} trivial: {}",
            p.format_word(&s.dehn_reduce(&w)),
            s.word_problem(&w)?
        );
    }

    let w = p.parse_word("d^-1 a b a^-1 b^-1 c d c^-1 a d")?;
    let cf = s.cyclic_dehn_form(&w)?;
    println!(
        "cyclic form of {}: {} (conjugator {})",
        p.format_word(&w),
        p.format_word(&cf.form),
        p.format_word(&cf.conjugator)
    );

    let bad = Presentation::from_strs(&["x", "y"], &["x y x y^-1 x^-1 y^-1"])?;
    let (holds, report) = verify_metric(&bad, one_sixth())?;
    println!(
        "<x, y | x y x y^-1 x^-1 y^-1> is C'(1/6): {holds} (ratio {})",
        report.ratio
    );
    Ok(())
}
