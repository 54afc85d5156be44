//! Permutation representations by backtracking and Todd-Coxeter coset
//! enumeration.

use conjsep::profinite::coset::todd_coxeter;
use conjsep::profinite::reps::enumerate_perm_reps;
use conjsep::Presentation;

fn main() -> conjsep::Result<()> {
    let s3 = Presentation::from_strs(&["s", "t"], &["s^2", "t^2", "s t s t s t"])?;
    for degree in 1..=4 {
        println!(
            "homomorphisms S3 -> Sym({degree}): {}",
            enumerate_perm_reps(&s3, degree, None).count()
        );
    }
    for q in enumerate_perm_reps(&s3, 3, None)
        .filter(|q| q.group_order(100) == Some(6))
        .take(2)
    {
        println!("faithful: {}", q.to_lines(&s3).join(", "));
    }

    let surface = Presentation::from_strs(&["a", "b", "c", "d"], &["a b a^-1 b^-1 c d c^-1 d^-1"])?;
    println!("surface -> Sym(2): {}", enumerate_perm_reps(&surface, 2, None).count());

    let t = todd_coxeter(&s3, &[s3.parse_word("s")?], 100);
    println!("|S3 : <s>| = {:?}", t.index());
    print!("{}", t.to_csv(s3.alphabet()));
    let q = t.permutation_quotient();
    println!("action: {}", q.to_lines(&s3).join(", "));

    let z = Presentation::from_strs(&["x", "y"], &["x y x^-1 y^-1"])?;
    println!("Z^2 with 50 cosets: {:?}", todd_coxeter(&z, &[], 50).status);
    Ok(())
}
