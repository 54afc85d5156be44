//! Batch command-line front end. [`run`] parses arguments, executes one
//! job and writes its record once.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fibre::{fibre_conj, fibre_generators, index_ratio, FibreContext, FiniteGroup, PairWord};
use crate::oracle::{auto_oracle, DehnOracle, Membership, WordProblem};
use crate::presentation::Presentation;
use crate::profinite::coset::todd_coxeter;
use crate::profinite::decide::parallel_decide_conjugacy;
use crate::profinite::reps::enumerate_perm_reps;
use crate::profinite::witness::{separate_conjugacy, separate_elements, separate_from_subgroup, WitnessSearch};
use crate::record::Record;
use crate::rips::{preimage_subgroup, rips_build, verify_rips, RipsOutput, RipsParams};
use crate::smallcanc::{one_sixth, parse_ratio, verify_metric, SymmetrizedSet};
use crate::subgroup::{
    quotient_word_problem, separate_from_double_coset, GroupContext, MembershipViaConj, QuotientMembership,
    SubgroupConjugacy, SubgroupContext,
};
use crate::verdict::{stall_record, ConjugacyVerdict};
use crate::word::Word;

#[derive(Parser, Debug)]
#[command(
    name = "conjsep",
    version,
    about = "Small-cancellation groups, Rips constructions and finite-quotient witnesses"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalOpts {
    /// Small-cancellation constant, e.g. 1/6.
    #[arg(long, global = true, value_name = "R")]
    lambda: Option<String>,
    #[arg(long = "max-length", global = true, value_name = "N")]
    max_length: Option<usize>,
    #[arg(long = "max-degree", global = true, value_name = "N")]
    max_degree: Option<usize>,
    #[arg(long = "max-cosets", global = true, value_name = "N")]
    max_cosets: Option<usize>,
    #[arg(long = "time-ms", global = true, value_name = "N")]
    time_ms: Option<u64>,
    /// Seed for randomized instance generation; every command is
    /// deterministic given its inputs.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Emit::Text)]
    emit: Emit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Structured,
}

/// Presentation of P, presentation of G and the sidecar record.
#[derive(Args, Debug)]
struct RipsFiles {
    p_file: PathBuf,
    g_file: PathBuf,
    sidecar: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Piece report and C'(λ) verdict.
    VerifySc { p_file: PathBuf },
    /// Word problem.
    Wp { p_file: PathBuf, word: String },
    /// Conjugacy in a C'(1/6) group.
    Conj { p_file: PathBuf, x: String, y: String },
    /// Membership in N, or in the preimage of ⟨⟨F⟩⟩ with --f.
    Member {
        #[command(flatten)]
        files: RipsFiles,
        word: String,
        /// `quotient` uses the word problem of G/N; `conj` reduces to
        /// conjugacy in N.
        #[arg(long, value_enum, default_value_t = Method::Quotient)]
        method: Method,
        /// Infinite-order element of N for `--method conj`; defaults to the
        /// first a-generator.
        #[arg(long)]
        x0: Option<String>,
        #[arg(long = "f", value_name = "WORD")]
        f: Vec<String>,
    },
    /// Rips construction.
    Rips {
        p_file: PathBuf,
        g_out: PathBuf,
        sidecar_out: PathBuf,
        #[arg(long, default_value_t = 7)]
        blocks: usize,
        #[arg(long = "max-rounds", default_value_t = 12)]
        max_rounds: usize,
        #[arg(long = "num-a", default_value_t = 2)]
        num_a: usize,
    },
    /// Generators of ψ⁻¹(⟨F⟩).
    Preimage {
        #[command(flatten)]
        files: RipsFiles,
        f: Vec<String>,
    },
    /// Generators of the fibre product T_H.
    FibreGens {
        #[command(flatten)]
        files: RipsFiles,
        #[arg(long = "f", value_name = "WORD")]
        f: Vec<String>,
    },
    /// Conjugacy in the fibre product T_H.
    FibreConj {
        #[command(flatten)]
        files: RipsFiles,
        x: String,
        y: String,
        #[arg(long = "f", value_name = "WORD")]
        f: Vec<String>,
    },
    /// |η(T_H) : η(T_N)| against |H : N| for finite P.
    FibreIndex {
        p_file: PathBuf,
        #[arg(long = "f", value_name = "WORD")]
        f: Vec<String>,
        /// Multiplication table of P; coset enumeration otherwise.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Permutation representations of degree --max-degree.
    Quotients {
        p_file: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Finite-quotient separation witness.
    Separate {
        kind: SeparateKind,
        p_file: PathBuf,
        /// element/conjugacy: x y; subgroup: g h...; double-coset: g x h...
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Todd–Coxeter coset enumeration.
    Tc { p_file: PathBuf, subgroup: Vec<String> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Quotient,
    Conj,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeparateKind {
    Element,
    Conjugacy,
    Subgroup,
    DoubleCoset,
}

/// Exit status and record of one job.
struct Outcome {
    record: Record,
    code: i32,
}

impl Outcome {
    fn definite(record: Record) -> Self {
        Outcome { record, code: 0 }
    }

    fn undecided(record: Record) -> Self {
        Outcome { record, code: 2 }
    }
}

/// Runs one job; returns the process exit code (0 definite, 2 undecided or
/// exhausted, 1 input error).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    let emit = cli.global.emit;
    match execute(&cli) {
        Ok(o) => {
            let text = match emit {
                Emit::Text => o.record.to_text(),
                Emit::Structured => {
                    let mut s = serde_json::to_string_pretty(&o.record.to_json()).expect("json");
                    s.push('\n');
                    s
                }
            };
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn read_presentation(path: &Path) -> Result<Presentation> {
    Presentation::parse(&read(path)?)
}

/// Writes via a sibling temporary file and a rename.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn budget(g: &GlobalOpts) -> Budget {
    let d = Budget::default();
    Budget {
        max_length: g.max_length.unwrap_or(d.max_length),
        max_degree: g.max_degree.unwrap_or(d.max_degree),
        max_cosets: g.max_cosets.unwrap_or(d.max_cosets),
        time_ms: g.time_ms.or(d.time_ms),
        ..d
    }
}

fn lambda(g: &GlobalOpts) -> Result<Ratio<u64>> {
    g.lambda.as_deref().map(parse_ratio).unwrap_or_else(|| Ok(one_sixth()))
}

fn validate(g: &GlobalOpts) -> Result<()> {
    let zero = [
        g.max_length == Some(0),
        g.max_degree == Some(0),
        g.max_cosets == Some(0),
        g.time_ms == Some(0),
    ];
    if zero.iter().any(|&z| z) {
        return Err(Error::Input("budgets must be positive".into()));
    }
    Ok(())
}

fn words(p: &Presentation, texts: &[String]) -> Result<Vec<Word>> {
    texts.iter().map(|t| p.parse_word(t)).collect()
}

fn load_rips(files: &RipsFiles) -> Result<RipsOutput> {
    let p = read_presentation(&files.p_file)?;
    let g = read_presentation(&files.g_file)?;
    RipsOutput::from_parts(p, g, &read(&files.sidecar)?)
}

/// Word problem for a presentation: Dehn's algorithm when certified, free
/// reduction, or the regular representation of a finite group.
fn word_problem_oracle(p: &Presentation, max_cosets: usize) -> Box<dyn WordProblem> {
    match DehnOracle::new(p) {
        Ok(d) => Box::new(d),
        Err(_) => auto_oracle(p, max_cosets),
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    validate(g)?;
    let budget = budget(g);
    match &cli.command {
        Command::VerifySc { p_file } => {
            let p = read_presentation(p_file)?;
            let lambda = lambda(g)?;
            let (ok, report) = verify_metric(&p, lambda)?;
            let mut r = Record::new();
            r.push("lambda", lambda);
            r.push("holds", ok);
            for line in report.to_record(p.alphabet()).lines() {
                let (k, v) = line.split_once(':').expect("record line");
                r.push(k, v.trim());
            }
            Ok(Outcome::definite(r))
        }
        Command::Wp { p_file, word } => {
            let p = read_presentation(p_file)?;
            let w = p.parse_word(word)?;
            let mut r = Record::new();
            r.push("word", p.format_word(&w));
            match SymmetrizedSet::new(&p) {
                Ok(s) if s.is_certified() => {
                    let d = s.dehn_reduce(&w);
                    r.push("method", "dehn");
                    r.push("trivial", d.is_empty());
                    r.push("dehn_form", p.format_word(&d));
                }
                _ => {
                    let o = auto_oracle(&p, budget.max_cosets);
                    r.push("method", "oracle");
                    match o.is_trivial(&w) {
                        Ok(t) => {
                            r.push("trivial", t);
                        }
                        Err(s) => {
                            r.push("trivial", "undecided")
                                .extend_prefixed("stall_", stall_record(&s));
                            return Ok(Outcome::undecided(r));
                        }
                    }
                }
            }
            Ok(Outcome::definite(r))
        }
        Command::Conj { p_file, x, y } => {
            let p = read_presentation(p_file)?;
            let (x, y) = (p.parse_word(x)?, p.parse_word(y)?);
            let ctx = GroupContext::new(p.clone(), budget)?;
            let d = parallel_decide_conjugacy(&ctx, &x, &y);
            let mut r = Record::new();
            r.push("x", p.format_word(&x)).push("y", p.format_word(&y));
            if let Some(path) = d.path {
                r.push("path", path.name());
            }
            Ok(verdict_outcome(r, d.verdict, &p, |c| p.format_word(c)))
        }
        Command::Member {
            files,
            word,
            method,
            x0,
            f,
        } => {
            let out = load_rips(files)?;
            let w = out.g.parse_word(word)?;
            let f_gens = words(&out.p, f)?;
            let q = out.p.with_extra_relators(&f_gens)?;
            let q_oracle = word_problem_oracle(&q, budget.max_cosets);
            let mut r = Record::new();
            r.push("word", out.g.format_word(&w));
            r.push(
                "method",
                match method {
                    Method::Quotient => "quotient",
                    Method::Conj => "conj",
                },
            );
            let answer = match method {
                Method::Quotient => quotient_word_problem(&out, &w, q_oracle.as_ref())?,
                Method::Conj => {
                    let ctx = GroupContext::new(out.g.clone(), budget)?;
                    let gens = preimage_subgroup(&out, &f_gens)?;
                    let normal = true;
                    let n = SubgroupContext::new(
                        &ctx,
                        gens,
                        Box::new(QuotientMembership::new(&out.psi, q_oracle)) as Box<dyn Membership>,
                        normal,
                    );
                    let x0 = match x0 {
                        Some(t) => out.g.parse_word(t)?,
                        None => out.n_gens[0].clone(),
                    };
                    let m = MembershipViaConj::new(&n, &x0)?;
                    r.push("x0", out.g.format_word(&x0));
                    m.contains(&w, &SubgroupConjugacy(&n))?
                }
            };
            match answer {
                Ok(b) => {
                    r.push("member", b);
                    Ok(Outcome::definite(r))
                }
                Err(s) => {
                    r.push("member", "undecided")
                        .extend_prefixed("stall_", stall_record(&s));
                    Ok(Outcome::undecided(r))
                }
            }
        }
        Command::Rips {
            p_file,
            g_out,
            sidecar_out,
            blocks,
            max_rounds,
            num_a,
        } => {
            let p = read_presentation(p_file)?;
            let params = RipsParams {
                num_a_generators: *num_a,
                initial_blocks_per_word: *blocks,
                lambda_target: lambda(g)?,
                max_rounds: *max_rounds,
            };
            let out = rips_build(&p, &params)?;
            let mut r = Record::new();
            r.push("generators", out.g.rank());
            r.push("relators", out.g.relators().len());
            r.push("blocks_per_word", out.blocks_per_word);
            r.push("total_relator_length", out.g.total_relator_length());
            r.push("ratio", out.report.ratio);
            let v = verify_rips(&out, word_problem_oracle(&p, budget.max_cosets).as_ref());
            for c in &v.checks {
                r.push(format!("check_{}", c.name), if c.passed { "pass" } else { "fail" });
            }
            write_atomic(g_out, &out.g.to_text())?;
            write_atomic(sidecar_out, &out.sidecar_text())?;
            Ok(Outcome::definite(r))
        }
        Command::Preimage { files, f } => {
            let out = load_rips(files)?;
            let f_gens = words(&out.p, f)?;
            let gens = preimage_subgroup(&out, &f_gens)?;
            let mut r = Record::new();
            r.push_many("generator", gens.iter().map(|w| out.g.format_word(w)));
            r.push("assumption", "<F> is normal in P");
            let t = todd_coxeter(&out.g, &gens, budget.max_cosets);
            match t.index() {
                Some(i) => r.push("index", i),
                None => r.push("index", "unknown (coset enumeration overflowed)"),
            };
            Ok(Outcome::definite(r))
        }
        Command::FibreGens { files, f } => {
            let out = load_rips(files)?;
            let ctx = GroupContext::new(out.g.clone(), budget)?;
            let fc = FibreContext::new(&out, &ctx, words(&out.p, f)?)?;
            let gens = fibre_generators(&fc)?;
            let mut r = Record::new();
            r.push("count", gens.len());
            r.push_many("generator", gens.iter().map(|p| p.format(out.g.alphabet())));
            Ok(Outcome::definite(r))
        }
        Command::FibreConj { files, x, y, f } => {
            let out = load_rips(files)?;
            let ctx = GroupContext::new(out.g.clone(), budget)?;
            let fc = FibreContext::new(&out, &ctx, words(&out.p, f)?)?;
            let a = out.g.alphabet();
            let (x, y) = (PairWord::parse(a, x)?, PairWord::parse(a, y)?);
            let v = fibre_conj(&fc, &x, &y)?;
            let mut r = Record::new();
            r.push("x", x.format(a)).push("y", y.format(a));
            Ok(verdict_outcome(r, v, &out.g, |c| c.format(a)))
        }
        Command::FibreIndex { p_file, f, table } => {
            let p = read_presentation(p_file)?;
            let fg = match table {
                Some(t) => FiniteGroup::parse_table(&p, &read(t)?)?,
                None => FiniteGroup::by_enumeration(&p, budget.max_cosets)?,
            };
            let ir = index_ratio(&fg, &words(&p, f)?, &[])?;
            let mut r = Record::new();
            r.push("order", fg.order());
            r.push("eta_t_h", ir.eta_h).push("eta_t_n", ir.eta_n);
            r.push("lhs", ir.lhs).push("rhs", ir.rhs).push("equal", ir.equal);
            Ok(Outcome::definite(r))
        }
        Command::Quotients { p_file, limit } => {
            let p = read_presentation(p_file)?;
            let reps: Vec<_> = enumerate_perm_reps(&p, budget.max_degree, *limit).collect();
            let mut r = Record::new();
            r.push("degree", budget.max_degree);
            r.push("count", reps.len());
            r.push_many("rep", reps.iter().map(|q| q.to_lines(&p).join(", ")));
            Ok(Outcome::definite(r))
        }
        Command::Separate {
            kind,
            p_file,
            words: texts,
        } => {
            let p = read_presentation(p_file)?;
            let ws = words(&p, texts)?;
            let need = |n: usize| -> Result<()> {
                if ws.len() < n || (matches!(kind, SeparateKind::Element | SeparateKind::Conjugacy) && ws.len() != n) {
                    return Err(Error::Input(format!("expected {n} words")));
                }
                Ok(())
            };
            let control = budget.control();
            let search: WitnessSearch = match kind {
                SeparateKind::Element => {
                    need(2)?;
                    separate_elements(&p, &ws[0], &ws[1], &budget, &control)?
                }
                SeparateKind::Conjugacy => {
                    need(2)?;
                    separate_conjugacy(&p, &ws[0], &ws[1], &budget, &control)?
                }
                SeparateKind::Subgroup => {
                    need(1)?;
                    separate_from_subgroup(&p, &ws[0], &ws[1..], &budget, &control)?
                }
                SeparateKind::DoubleCoset => {
                    need(2)?;
                    let ctx = GroupContext::new(p.clone(), budget.clone())?;
                    separate_from_double_coset(&ctx, &ws[0], &ws[1], &ws[2..])?
                }
            };
            let mut r = Record::new();
            r.push("reps_scanned", search.reps_scanned);
            r.push_many("skipped", search.skipped.iter());
            match &search.witness {
                Some(w) => {
                    r.push("found", true);
                    r.extend_prefixed("witness_", w.to_record(&p));
                    Ok(Outcome::definite(r))
                }
                None => {
                    r.push("found", false);
                    r.extend_prefixed("stall_", stall_record(&search.stall()));
                    Ok(Outcome::undecided(r))
                }
            }
        }
        Command::Tc { p_file, subgroup } => {
            let p = read_presentation(p_file)?;
            let t = todd_coxeter(&p, &words(&p, subgroup)?, budget.max_cosets);
            let mut r = Record::new();
            match t.index() {
                Some(i) => {
                    r.push("status", "complete").push("index", i);
                    r.push_many("csv", t.to_csv(p.alphabet()).lines());
                    Ok(Outcome::definite(r))
                }
                None => {
                    r.push("status", "overflow").push("max_cosets", budget.max_cosets);
                    Ok(Outcome::undecided(r))
                }
            }
        }
    }
}

fn verdict_outcome<C>(mut r: Record, v: ConjugacyVerdict<C>, p: &Presentation, fmt: impl Fn(&C) -> String) -> Outcome {
    r.push("verdict", v.name());
    match v {
        ConjugacyVerdict::Conjugate(c) => {
            r.push("conjugator", fmt(&c));
            Outcome::definite(r)
        }
        ConjugacyVerdict::NonConjugate(e) => {
            r.extend_prefixed("", e.to_record(p));
            Outcome::definite(r)
        }
        ConjugacyVerdict::Undecided(s) => {
            r.extend_prefixed("stall_", stall_record(&s));
            Outcome::undecided(r)
        }
    }
}
