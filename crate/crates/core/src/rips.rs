//! The Rips construction: from a finite presentation `P`, a C'(λ)
//! presentation of `G` with `N = ⟨a_1, .., a_n⟩` normal and `G/N ≅ P`.

use std::fmt::Write as _;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::hom::{GroupHom, HomCheck};
use crate::oracle::WordProblem;
use crate::presentation::{Alphabet, Presentation};
use crate::smallcanc::{one_sixth, parse_ratio, verify_metric, SmallCancellationReport};
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RipsParams {
    pub num_a_generators: usize,
    pub initial_blocks_per_word: usize,
    pub lambda_target: Ratio<u64>,
    pub max_rounds: usize,
}

impl Default for RipsParams {
    fn default() -> Self {
        RipsParams {
            num_a_generators: 2,
            initial_blocks_per_word: 7,
            lambda_target: one_sixth(),
            max_rounds: 12,
        }
    }
}

impl RipsParams {
    fn validate(&self) -> Result<()> {
        if self.num_a_generators < 2 {
            return Err(Error::Input("at least two a-generators are required".into()));
        }
        if self.initial_blocks_per_word < 7 {
            return Err(Error::Input("at least seven blocks per word are required".into()));
        }
        if self.lambda_target > one_sixth() || self.lambda_target == Ratio::new(0, 1) {
            return Err(Error::Input("lambda must lie in (0, 1/6]".into()));
        }
        if self.max_rounds == 0 {
            return Err(Error::Input("max_rounds must be positive".into()));
        }
        Ok(())
    }
}

/// The exponents `lo..=hi` used by one block word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentInterval {
    /// `w<i>` for the word attached to relator `i` (1-based), `u <x> <a>` and
    /// `v <x> <a>` for the conjugation words.
    pub role: String,
    pub lo: u64,
    pub hi: u64,
}

#[derive(Clone, Debug)]
pub struct RipsOutput {
    pub p: Presentation,
    pub g: Presentation,
    /// The a-generators as one-letter words over `g`.
    pub n_gens: Vec<Word>,
    pub psi: GroupHom,
    pub report: SmallCancellationReport,
    pub exponent_log: Vec<ExponentInterval>,
    pub blocks_per_word: usize,
    pub lambda: Ratio<u64>,
}

/// Names `s1, s2, ..` for the first stem `s` in `a, aa, aaa, ..` that does
/// not clash with `p`'s generators.
fn a_names(p: &Presentation, count: usize) -> Vec<String> {
    let mut stem = String::from("a");
    loop {
        let names: Vec<String> = (1..=count).map(|i| format!("{stem}{i}")).collect();
        if names.iter().all(|n| p.alphabet().lookup(n).is_none()) {
            return names;
        }
        stem.push('a');
    }
}

struct Builder {
    a1: usize,
    a2: usize,
    next: u64,
    log: Vec<ExponentInterval>,
}

impl Builder {
    fn block_word(&mut self, role: String, blocks: usize) -> Word {
        let lo = self.next;
        let mut w = Vec::new();
        for _ in 0..blocks {
            w.push(Letter::pos(self.a1));
            w.extend(std::iter::repeat(Letter::pos(self.a2)).take(self.next as usize));
            self.next += 1;
        }
        self.log.push(ExponentInterval {
            role,
            lo,
            hi: self.next - 1,
        });
        Word::from_letters(w)
    }
}

fn build_once(p: &Presentation, params: &RipsParams, blocks: usize) -> Result<(Presentation, Vec<ExponentInterval>)> {
    let m = p.rank();
    let mut names: Vec<String> = p.alphabet().names().to_vec();
    let a = a_names(p, params.num_a_generators);
    names.extend(a.iter().cloned());
    let alphabet = Alphabet::new(&names)?;
    let mut b = Builder {
        a1: m,
        a2: m + 1,
        next: 1,
        log: Vec::new(),
    };
    let mut rels = Vec::new();
    for (i, r) in p.relators().iter().enumerate() {
        let w = b.block_word(format!("w{}", i + 1), blocks);
        rels.push(Word::from_letters(
            r.iter().chain(w.inverse().iter()).copied().collect(),
        ));
    }
    for x in 0..m {
        for t in 0..params.num_a_generators {
            let at = Letter::pos(m + t);
            let xn = p.alphabet().name(x);
            let u = b.block_word(format!("u {xn} {}", a[t]), blocks);
            let mut rel = vec![Letter::neg(x), at, Letter::pos(x)];
            rel.extend(u.inverse().iter());
            rels.push(Word::from_letters(rel));
            let v = b.block_word(format!("v {xn} {}", a[t]), blocks);
            let mut rel = vec![Letter::pos(x), at, Letter::neg(x)];
            rel.extend(v.inverse().iter());
            rels.push(Word::from_letters(rel));
        }
    }
    Ok((Presentation::new(alphabet, rels)?, b.log))
}

/// Builds `G`, growing the number of blocks per word until the metric
/// condition holds.
pub fn rips_build(p: &Presentation, params: &RipsParams) -> Result<RipsOutput> {
    params.validate()?;
    let mut blocks = params.initial_blocks_per_word;
    let mut last = None;
    for _ in 0..params.max_rounds {
        let (g, log) = build_once(p, params, blocks)?;
        let (ok, report) = verify_metric(&g, params.lambda_target)?;
        if ok {
            return assemble(p.clone(), g, report, log, blocks, params.lambda_target);
        }
        last = Some(report);
        blocks += blocks.div_ceil(4);
    }
    Err(Error::ConstructionFailure {
        rounds: params.max_rounds,
        report: Box::new(last.expect("at least one round")),
    })
}

fn assemble(
    p: Presentation,
    g: Presentation,
    report: SmallCancellationReport,
    exponent_log: Vec<ExponentInterval>,
    blocks_per_word: usize,
    lambda: Ratio<u64>,
) -> Result<RipsOutput> {
    let n_gens = (p.rank()..g.rank()).map(Word::letter).collect();
    let psi = GroupHom::by_name_deleting(g.clone(), p.clone())?;
    Ok(RipsOutput {
        p,
        g,
        n_gens,
        psi,
        report,
        exponent_log,
        blocks_per_word,
        lambda,
    })
}

impl RipsOutput {
    pub fn num_a_generators(&self) -> usize {
        self.n_gens.len()
    }

    /// The generator index in `g` of `a_t` (0-based `t`).
    pub fn a_gen(&self, t: usize) -> usize {
        self.p.rank() + t
    }

    /// Same-named copy of a word over `P`.
    pub fn lift(&self, w: &Word) -> Result<Word> {
        self.p.alphabet().check_word(w)?;
        Ok(w.clone())
    }

    pub fn project(&self, w: &Word) -> Result<Word> {
        self.psi.apply(w)
    }

    /// Sidecar record: `ngens:`, `psi: delete`, `params:` and one
    /// `exponents:` line per block word.
    pub fn sidecar_text(&self) -> String {
        let mut out = String::from("ngens:");
        for w in &self.n_gens {
            out.push(' ');
            out.push_str(&self.g.format_word(w));
        }
        out.push('\n');
        out.push_str("psi: delete\n");
        let _ = writeln!(out, "params: blocks {} lambda {}", self.blocks_per_word, self.lambda);
        for e in &self.exponent_log {
            let _ = writeln!(out, "exponents: {} {} {}", e.role, e.lo, e.hi);
        }
        out
    }

    /// Reassembles an output from `P`, `G` and the sidecar record, checking
    /// that the pieces fit together. The metric report is recomputed.
    pub fn from_parts(p: Presentation, g: Presentation, sidecar: &str) -> Result<RipsOutput> {
        let bad = |line: usize, message: String| Error::Parse { line, message };
        let mut ngens: Option<Vec<String>> = None;
        let mut psi_seen = false;
        let mut blocks = None;
        let mut lambda = one_sixth();
        let mut log = Vec::new();
        for (i, raw) in sidecar.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| bad(line_no, format!("expected `key: value`, found `{line}`")))?;
            let fields: Vec<&str> = rest.split_whitespace().collect();
            match key.trim() {
                "ngens" => ngens = Some(fields.iter().map(|s| s.to_string()).collect()),
                "psi" => {
                    if fields != ["delete"] {
                        return Err(bad(line_no, "only `psi: delete` is supported".into()));
                    }
                    psi_seen = true;
                }
                "params" => match fields.as_slice() {
                    ["blocks", b, "lambda", l] => {
                        blocks = Some(b.parse().map_err(|_| bad(line_no, format!("bad block count `{b}`")))?);
                        lambda = parse_ratio(l)?;
                    }
                    _ => return Err(bad(line_no, "expected `params: blocks N lambda R`".into())),
                },
                "exponents" => {
                    let n = fields.len();
                    if n < 3 {
                        return Err(bad(line_no, "expected `exponents: ROLE LO HI`".into()));
                    }
                    let num = |s: &str| {
                        s.parse::<u64>()
                            .map_err(|_| bad(line_no, format!("bad exponent `{s}`")))
                    };
                    log.push(ExponentInterval {
                        role: fields[..n - 2].join(" "),
                        lo: num(fields[n - 2])?,
                        hi: num(fields[n - 1])?,
                    });
                }
                other => return Err(bad(line_no, format!("unknown key `{other}`"))),
            }
        }
        let ngens = ngens.ok_or_else(|| bad(0, "missing `ngens:` line".into()))?;
        if !psi_seen {
            return Err(bad(0, "missing `psi:` line".into()));
        }
        let mut expected: Vec<String> = p.alphabet().names().to_vec();
        expected.extend(ngens.iter().cloned());
        if g.alphabet().names() != expected.as_slice() {
            return Err(Error::Input(
                "generators of G must be those of P followed by the ngens".into(),
            ));
        }
        let (_, report) = verify_metric(&g, lambda)?;
        let blocks = blocks.unwrap_or(0);
        assemble(p, g, report, log, blocks, lambda)
    }
}

/// One named check of [`verify_rips`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RipsCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RipsVerification {
    pub checks: Vec<RipsCheck>,
}

impl RipsVerification {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&RipsCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn is_a_word(w: &[Letter], m: usize) -> bool {
    w.iter().all(|l| l.gen() >= m)
}

/// Runs the four checks: metric certificate, well-defined ψ, syntactic
/// normality of `⟨N⟩`, and the presentation-level quotient.
pub fn verify_rips(out: &RipsOutput, p_oracle: &dyn WordProblem) -> RipsVerification {
    let mut checks = Vec::with_capacity(4);
    let m = out.p.rank();
    let g = &out.g;

    let metric = match verify_metric(g, out.lambda) {
        Ok((ok, report)) => RipsCheck {
            name: "metric",
            passed: ok,
            detail: format!("ratio {} proper_power {}", report.ratio, report.proper_power),
        },
        Err(e) => RipsCheck {
            name: "metric",
            passed: false,
            detail: e.to_string(),
        },
    };
    checks.push(metric);

    let (passed, detail) = match out.psi.check(p_oracle) {
        HomCheck::WellDefined => (true, "every relator maps to the identity".to_string()),
        HomCheck::Fails { relator } => (false, format!("relator {} maps to a nontrivial element", relator + 1)),
        HomCheck::Indeterminate { relator, stall } => (false, format!("relator {}: {stall}", relator + 1)),
    };
    checks.push(RipsCheck {
        name: "psi",
        passed,
        detail,
    });

    let mut missing = None;
    'outer: for x in 0..m {
        for t in 0..out.num_a_generators() {
            let at = Letter::pos(out.a_gen(t));
            for (sign, head) in [
                (-1, [Letter::neg(x), at, Letter::pos(x)]),
                (1, [Letter::pos(x), at, Letter::neg(x)]),
            ] {
                let found = g
                    .relators()
                    .iter()
                    .any(|r| r.len() > 3 && r.letters()[..3] == head && is_a_word(&r.letters()[3..], m));
                if !found {
                    missing = Some((x, t, sign));
                    break 'outer;
                }
            }
        }
    }
    checks.push(RipsCheck {
        name: "normality",
        passed: missing.is_none(),
        detail: match missing {
            None => "every conjugate of every a-generator is a word in N".into(),
            Some((x, t, sign)) => {
                let xn = g.alphabet().name(x);
                let an = g.alphabet().name(out.a_gen(t));
                let (l, r) = if sign < 0 { ("^-1", "") } else { ("", "^-1") };
                format!("no relator expresses {xn}{l} {an} {xn}{r} in N (x = {xn}, a = {an})")
            }
        },
    });

    let mut images: Vec<Word> = Vec::new();
    let mut stray = None;
    for (i, r) in g.relators().iter().enumerate() {
        let img = Word::reduced(r.iter().copied().filter(|l| l.gen() < m))
            .cyclic_reduce()
            .core;
        if img.is_empty() {
            continue;
        }
        if !out.p.relators().contains(&img) {
            stray = Some(i);
            break;
        }
        images.push(img);
    }
    let uncovered = out
        .p
        .relators()
        .iter()
        .position(|r| !r.is_empty() && !images.contains(r));
    checks.push(RipsCheck {
        name: "quotient",
        passed: stray.is_none() && uncovered.is_none(),
        detail: match (stray, uncovered) {
            (Some(i), _) => format!("relator {} of G does not delete to a relator of P", i + 1),
            (None, Some(j)) => format!("relator {} of P is not the image of any relator of G", j + 1),
            (None, None) => "deleting a-letters yields exactly the relators of P".into(),
        },
    });

    RipsVerification { checks }
}

/// Generators of `ψ⁻¹(⟨F⟩)`: the a-generators and the lifts of `f_gens`.
/// Normality of `⟨F⟩` in `P` is the caller's assumption.
pub fn preimage_subgroup(out: &RipsOutput, f_gens: &[Word]) -> Result<Vec<Word>> {
    let mut gens = out.n_gens.clone();
    for f in f_gens {
        gens.push(out.lift(f)?);
    }
    Ok(gens)
}
