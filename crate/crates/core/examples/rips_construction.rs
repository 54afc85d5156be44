//! The Rips construction over S3: build G, verify it, and check that the
//! a-generators have index |S3| by coset enumeration.

use conjsep::oracle::auto_oracle;
use conjsep::profinite::coset::todd_coxeter;
use conjsep::rips::{preimage_subgroup, rips_build, verify_rips, RipsOutput, RipsParams};
use conjsep::Presentation;

fn main() -> conjsep::Result<()> {
    let p = Presentation::from_strs(&["s", "t"], &["s^2", "t^2", "s t s t s t"])?;
    let out = rips_build(&p, &RipsParams::default())?;
    println!(
        "G: {} generators, {} relators, {} letters, ratio {}",
        out.g.rank(),
        out.g.relators().len(),
        out.g.total_relator_length(),
        out.report.ratio
    );
    let first = out.g.format_word(&out.g.relators()[0]);
    println!("first relator starts: {} ...", &first[..first.len().min(60)]);

    let v = verify_rips(&out, auto_oracle(&p, 100).as_ref());
    for c in &v.checks {
        println!(
            "{:>10}: {} ({})",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.detail
        );
    }

    print!("{}", out.sidecar_text());
    let again = RipsOutput::from_parts(p.clone(), out.g.clone(), &out.sidecar_text())?;
    println!("sidecar round trip: {}", again.exponent_log == out.exponent_log);

    let t = todd_coxeter(&out.g, &out.n_gens, 10_000);
    println!("|G : N| = {:?}", t.index());
    let h = preimage_subgroup(&out, &[p.parse_word("s t")?])?;
    println!("|G : psi^-1(<s t>)| = {:?}", todd_coxeter(&out.g, &h, 10_000).index());
    Ok(())
}
