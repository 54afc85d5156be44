//! Words, free and cyclic reduction, length-lex enumeration and the
//! presentation text format.

use conjsep::word::{reduced_word_count, WordEnumerator};
use conjsep::Presentation;

fn main() -> conjsep::Result<()> {
    let p = Presentation::parse("gens: a b\nrel: a b a^-1 b^-1   # Z^2\n")?;
    let w = p.parse_word("b a a^-1 b^2 a b^-3")?.free_reduce();
    println!("reduced:          {}", p.format_word(&w));

    let d = w.cyclic_reduce();
    println!("cyclic core:      {}", p.format_word(&d.core));
    println!("conjugator:       {}", p.format_word(&d.conj));
    println!("inverse:          {}", p.format_word(&w.inverse()));
    println!("exponent sums:    {:?}", w.exponent_sums(p.rank()));

    let sq = p.parse_word("a b a b")?;
    println!("period of (a b)^2: {}", sq.cyclic_period());

    let first: Vec<String> = WordEnumerator::new(2, 2).map(|w| p.format_word(&w)).collect();
    println!("length-lex up to 2: [{}]", first.join(", "));
    for n in 1..=5 {
        println!("reduced words of length {n}: {}", reduced_word_count(2, n));
    }

    print!("{}", p.to_text());
    Ok(())
}
