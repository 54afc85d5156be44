//! Fibre products `T_H = {(g1, g2) : ψ(g1) ≡ ψ(g2) mod F} ≤ G × G`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::oracle::{FiniteOracle, Stall, Tri};
use crate::presentation::{Alphabet, Presentation};
use crate::profinite::decide::parallel_decide_conjugacy;
use crate::profinite::perm::{generated_group, Perm, PermQuotient};
use crate::rips::RipsOutput;
use crate::subgroup::{centralizer_coset_reps, GroupContext};
use crate::verdict::{ConjugacyVerdict, Evidence};
use crate::word::Word;

/// An element of `G × G`; components are kept freely reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairWord {
    pub left: Word,
    pub right: Word,
}

impl PairWord {
    pub fn new(left: Word, right: Word) -> Self {
        PairWord {
            left: left.free_reduce(),
            right: right.free_reduce(),
        }
    }

    pub fn identity() -> Self {
        PairWord::new(Word::empty(), Word::empty())
    }

    pub fn diagonal(w: &Word) -> Self {
        PairWord::new(w.clone(), w.clone())
    }

    pub fn mul(&self, other: &PairWord) -> PairWord {
        PairWord::new(self.left.mul(&other.left), self.right.mul(&other.right))
    }

    pub fn inverse(&self) -> PairWord {
        PairWord::new(self.left.inverse(), self.right.inverse())
    }

    /// `c⁻¹ · self · c`
    pub fn conjugate_by(&self, c: &PairWord) -> PairWord {
        PairWord::new(self.left.conjugate_by(&c.left), self.right.conjugate_by(&c.right))
    }

    /// Parses `(<word> | <word>)`.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<PairWord> {
        let bad = || Error::Input(format!("expected `(<word> | <word>)`, found `{text}`"));
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (l, r) = inner.split_once('|').ok_or_else(bad)?;
        Ok(PairWord::new(alphabet.parse_word(l)?, alphabet.parse_word(r)?))
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        format!(
            "({} | {})",
            alphabet.format_word(&self.left),
            alphabet.format_word(&self.right)
        )
    }
}

/// Decision procedures for `Q = P / ⟨⟨F⟩⟩`.
#[derive(Clone, Debug)]
pub enum QuotientOracle {
    Finite(FiniteOracle),
    /// `Q ≅ ℤ^rank`: every relator has zero exponent sums and every pair of
    /// generators has its commutator among the relators.
    FreeAbelian {
        rank: usize,
    },
}

fn is_commutator_of(r: &Word, i: usize, j: usize) -> bool {
    use crate::word::Letter;
    let base = Word::from_letters(vec![Letter::pos(i), Letter::pos(j), Letter::neg(i), Letter::neg(j)]);
    let inv = base.inverse();
    r.len() == 4 && (0..4).any(|k| r.rotate(k) == base || r.rotate(k) == inv)
}

impl QuotientOracle {
    /// Finite by coset enumeration, else free abelian by inspection.
    pub fn for_quotient(p: &Presentation, f_gens: &[Word], max_cosets: usize) -> Result<Self> {
        let q = p.with_extra_relators(f_gens)?;
        if let Some(f) = FiniteOracle::enumerate(&q, max_cosets) {
            return Ok(QuotientOracle::Finite(f));
        }
        let m = q.rank();
        let zero_sums = q.relators().iter().all(|r| r.exponent_sums(m).iter().all(|&e| e == 0));
        let commuting = (0..m).all(|i| (i + 1..m).all(|j| q.relators().iter().any(|r| is_commutator_of(r, i, j))));
        if zero_sums && commuting {
            return Ok(QuotientOracle::FreeAbelian { rank: m });
        }
        Err(Error::Input(
            "the quotient is neither finite within the coset budget nor recognisably free abelian".into(),
        ))
    }

    pub fn word_problem(&self, w: &Word) -> bool {
        match self {
            QuotientOracle::Finite(f) => f.image(w).is_identity(),
            QuotientOracle::FreeAbelian { rank } => w.exponent_sums(*rank).iter().all(|&e| e == 0),
        }
    }

    /// `m` with `y = x^m` in `Q`, if one exists.
    pub fn mpcs(&self, y: &Word, x: &Word) -> Option<i64> {
        match self {
            QuotientOracle::Finite(f) => {
                let (px, py) = (f.image(x), f.image(y));
                let mut cur = Perm::identity(px.degree());
                for m in 0..px.order() as i64 {
                    if cur == py {
                        return Some(m);
                    }
                    cur = cur.then(&px);
                }
                None
            }
            QuotientOracle::FreeAbelian { rank } => {
                let (vx, vy) = (x.exponent_sums(*rank), y.exponent_sums(*rank));
                let Some(i) = vx.iter().position(|&e| e != 0) else {
                    return vy.iter().all(|&e| e == 0).then_some(0);
                };
                if vy[i] % vx[i] != 0 {
                    return None;
                }
                let m = vy[i] / vx[i];
                vx.iter().zip(&vy).all(|(&a, &b)| m * a == b).then_some(m)
            }
        }
    }
}

/// `T_H` for `H = ψ⁻¹(⟨⟨F⟩⟩)`; `T_N` when `h_gens` is empty.
pub struct FibreContext<'a> {
    pub out: &'a RipsOutput,
    pub group: &'a GroupContext,
    pub h_gens: Vec<Word>,
    pub q: QuotientOracle,
}

impl<'a> FibreContext<'a> {
    pub fn new(out: &'a RipsOutput, group: &'a GroupContext, h_gens: Vec<Word>) -> Result<Self> {
        for h in &h_gens {
            out.p.alphabet().check_word(h)?;
        }
        let q = QuotientOracle::for_quotient(&out.p, &h_gens, group.budget().max_cosets)?;
        Ok(FibreContext { out, group, h_gens, q })
    }

    fn q_image(&self, w: &Word) -> Word {
        self.out.psi.apply(w).expect("word over G")
    }
}

/// `(n, 1)` for the a-generators, `(lift h, 1)` for the `F` generators and
/// the diagonal `(g, g)` for every generator of `G`.
pub fn fibre_generators(ctx: &FibreContext) -> Result<Vec<PairWord>> {
    let mut out = Vec::new();
    for n in &ctx.out.n_gens {
        out.push(PairWord::new(n.clone(), Word::empty()));
    }
    for h in &ctx.h_gens {
        out.push(PairWord::new(ctx.out.lift(h)?, Word::empty()));
    }
    for g in ctx.out.g.generators() {
        out.push(PairWord::diagonal(&g));
    }
    Ok(out)
}

pub fn fibre_membership(ctx: &FibreContext, p: &PairWord) -> Tri {
    let g = ctx.out.g.alphabet();
    if g.check_word(&p.left).is_err() || g.check_word(&p.right).is_err() {
        return Err(Stall::new("fibre-membership", 0, "word outside the alphabet of G"));
    }
    Ok(ctx.q.word_problem(&ctx.q_image(&p.left.mul(&p.right.inverse()))))
}

/// Conjugacy in `G × G`, coordinate by coordinate.
pub fn conj_in_direct_product(group: &GroupContext, x: &PairWord, y: &PairWord) -> ConjugacyVerdict<PairWord> {
    let mut conj = Vec::with_capacity(2);
    let mut stall = None;
    for (i, (a, b)) in [(&x.left, &y.left), (&x.right, &y.right)].into_iter().enumerate() {
        match parallel_decide_conjugacy(group, a, b).verdict {
            ConjugacyVerdict::Conjugate(c) => conj.push(c),
            ConjugacyVerdict::NonConjugate(e) => {
                return ConjugacyVerdict::NonConjugate(Evidence::Component {
                    index: i,
                    evidence: Box::new(e),
                })
            }
            ConjugacyVerdict::Undecided(s) => {
                stall.get_or_insert(Stall::new(
                    format!("component {}: {}", i + 1, s.stage),
                    s.consumed,
                    s.frontier,
                ));
            }
        }
    }
    match stall {
        Some(s) => ConjugacyVerdict::Undecided(s),
        None => {
            let right = conj.pop().expect("two components");
            let left = conj.pop().expect("two components");
            ConjugacyVerdict::Conjugate(PairWord::new(left, right))
        }
    }
}

fn certify(ctx: &FibreContext, x: &PairWord, y: &PairWord, c: PairWord) -> ConjugacyVerdict<PairWord> {
    let g = ctx.group;
    let ok = g.is_trivial(&x.left.conjugate_by(&c.left).mul(&y.left.inverse()))
        && g.is_trivial(&x.right.conjugate_by(&c.right).mul(&y.right.inverse()))
        && fibre_membership(ctx, &c) == Ok(true);
    assert!(ok, "fibre conjugator failed re-verification");
    ConjugacyVerdict::Conjugate(c)
}

/// Conjugacy in `T_H`: conjugacy in `G × G`, then one cyclic-membership
/// query in `Q` per centralizer representative pair.
pub fn fibre_conj(ctx: &FibreContext, x: &PairWord, y: &PairWord) -> Result<ConjugacyVerdict<PairWord>> {
    for (w, name) in [(x, "x"), (y, "y")] {
        match fibre_membership(ctx, w) {
            Ok(true) => {}
            Ok(false) => return Err(Error::Input(format!("{name} is not in the fibre product"))),
            Err(s) => return Err(Error::Input(s.to_string())),
        }
    }
    if x == y {
        return Ok(ConjugacyVerdict::Conjugate(PairWord::identity()));
    }
    let g = match conj_in_direct_product(ctx.group, x, y) {
        ConjugacyVerdict::Conjugate(g) => g,
        other => return Ok(other),
    };
    let group = ctx.group;
    // a trivial coordinate has the whole group as centralizer, and a diagonal
    // conjugator already lies in T_H
    if group.is_trivial(&x.left) {
        return Ok(certify(ctx, x, y, PairWord::diagonal(&g.right)));
    }
    if group.is_trivial(&x.right) {
        return Ok(certify(ctx, x, y, PairWord::diagonal(&g.left)));
    }
    let c1 = centralizer_coset_reps(group, &x.left)?;
    let c2 = centralizer_coset_reps(group, &x.right)?;
    let qx1 = ctx.q_image(&x.left);
    let mut rejected = Vec::new();
    for z1 in &c1.coset_reps {
        for z2 in &c2.coset_reps {
            let a = z1.inverse().mul(&g.left);
            let b = z2.inverse().mul(&g.right);
            let d = ctx.q_image(&a.mul(&b.inverse()));
            if let Some(m) = ctx.q.mpcs(&d, &qx1) {
                let c = PairWord::new(x.left.pow(-m).mul(&a), b);
                return Ok(certify(ctx, x, y, c));
            }
            rejected.push((a, b));
        }
    }
    if !(c1.exhaustive && c2.exhaustive) {
        return Ok(ConjugacyVerdict::Undecided(Stall::new(
            "root-search",
            c1.steps + c2.steps,
            "centralizer roots not confirmed primitive",
        )));
    }
    Ok(ConjugacyVerdict::NonConjugate(Evidence::MpcsRejection { rejected }))
}

/// A finite group `P` with a faithful permutation representation.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    p: Presentation,
    rep: PermQuotient,
    order: usize,
}

impl FiniteGroup {
    /// Regular representation from coset enumeration over the trivial group.
    pub fn by_enumeration(p: &Presentation, max_cosets: usize) -> Result<Self> {
        let f = FiniteOracle::enumerate(p, max_cosets)
            .ok_or_else(|| Error::Input(format!("coset enumeration exceeded {max_cosets} cosets")))?;
        Ok(FiniteGroup {
            p: p.clone(),
            order: f.order(),
            rep: f.quotient().clone(),
        })
    }

    /// Caller guarantees faithfulness; relators are checked.
    pub fn from_perms(p: &Presentation, rep: PermQuotient, cap: usize) -> Result<Self> {
        if !rep.respects(p) {
            return Err(Error::Input("permutation images do not satisfy the relators".into()));
        }
        let order = rep
            .group_order(cap)
            .ok_or_else(|| Error::Input(format!("group larger than {cap}")))?;
        Ok(FiniteGroup {
            p: p.clone(),
            rep,
            order,
        })
    }

    /// From a multiplication table `table[i][j] = i·j` and the elements
    /// representing the generators. The table must be a group, the images
    /// must satisfy the relators and generate.
    pub fn from_table(p: &Presentation, table: &[Vec<usize>], gen_elements: &[usize]) -> Result<Self> {
        let n = table.len();
        let bad = |m: String| Error::Input(format!("multiplication table: {m}"));
        if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
            return Err(bad("not a square table over 0..n".into()));
        }
        for i in 0..n {
            let mut row = table[i].clone();
            row.sort_unstable();
            let mut col: Vec<usize> = (0..n).map(|j| table[j][i]).collect();
            col.sort_unstable();
            if row.iter().enumerate().any(|(k, &v)| k != v) || col.iter().enumerate().any(|(k, &v)| k != v) {
                return Err(bad(format!("row or column {i} is not a permutation")));
            }
        }
        if !(0..n).any(|e| (0..n).all(|i| table[e][i] == i && table[i][e] == i)) {
            return Err(bad("no identity element".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(bad(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        if gen_elements.len() != p.rank() || gen_elements.iter().any(|&g| g >= n) {
            return Err(bad("one element per generator required".into()));
        }
        let images = gen_elements
            .iter()
            .map(|&g| Perm::from_images((0..n).map(|i| table[i][g] as u32).collect()))
            .collect::<Result<Vec<_>>>()?;
        let rep = PermQuotient::new(n, images)?;
        let fg = FiniteGroup::from_perms(p, rep, n)?;
        if fg.order != n {
            return Err(bad(format!("generators reach {} of {n} elements", fg.order)));
        }
        Ok(fg)
    }

    /// Text form: `order: n`, one `gen: <name> <element>` line per
    /// generator, then `n` lines `row: <n entries>`; elements are `0..n`.
    pub fn parse_table(p: &Presentation, text: &str) -> Result<Self> {
        let mut order = None;
        let mut gens: HashMap<usize, usize> = HashMap::new();
        let mut rows = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| Error::Parse {
                line: i + 1,
                message: m.to_string(),
            };
            let (key, rest) = line.split_once(':').ok_or_else(|| err("expected `key: value`"))?;
            let nums = |s: &str| -> Result<Vec<usize>> {
                s.split_whitespace()
                    .map(|t| t.parse::<usize>().map_err(|_| err("expected a non-negative integer")))
                    .collect()
            };
            match key.trim() {
                "order" => order = Some(nums(rest)?.first().copied().ok_or_else(|| err("missing order"))?),
                "gen" => {
                    let mut it = rest.split_whitespace();
                    let name = it.next().ok_or_else(|| err("missing generator"))?;
                    let g = p.alphabet().letter(name)?.gen();
                    let el = nums(it.next().ok_or_else(|| err("missing element"))?)?[0];
                    gens.insert(g, el);
                }
                "row" => rows.push(nums(rest)?),
                _ => return Err(err("unknown key")),
            }
        }
        let order = order.ok_or_else(|| Error::Input("missing `order:`".into()))?;
        if rows.len() != order {
            return Err(Error::Input(format!("{} rows for order {order}", rows.len())));
        }
        let gen_elements = (0..p.rank())
            .map(|g| {
                gens.get(&g)
                    .copied()
                    .ok_or_else(|| Error::Input(format!("no element for `{}`", p.alphabet().name(g))))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteGroup::from_table(p, &rows, &gen_elements)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn presentation(&self) -> &Presentation {
        &self.p
    }

    pub fn image(&self, w: &Word) -> Perm {
        self.rep.evaluate(w)
    }

    /// Order of the subgroup generated by the images of `gens`.
    pub fn subgroup_order(&self, gens: &[Word]) -> usize {
        let imgs: Vec<Perm> = gens.iter().map(|w| self.image(w)).collect();
        generated_group(&imgs, self.rep.degree(), usize::MAX)
            .expect("finite")
            .len()
    }

    /// `|η(T)|` for the fibre product over `⟨⟨F⟩⟩`: the subgroup of `P × P`
    /// generated by `(f, 1)` and the diagonal.
    pub fn eta_order(&self, f_gens: &[Word]) -> usize {
        let n = self.rep.degree();
        let pair = |a: &Perm, b: &Perm| -> Perm {
            let mut v: Vec<u32> = a.images().to_vec();
            v.extend(b.images().iter().map(|&i| i + n as u32));
            Perm::from_images(v).expect("disjoint union")
        };
        let id = Perm::identity(n);
        let mut gens: Vec<Perm> = f_gens.iter().map(|f| pair(&self.image(f), &id)).collect();
        for g in self.rep.images() {
            gens.push(pair(g, g));
        }
        generated_group(&gens, 2 * n, usize::MAX).expect("finite").len()
    }
}

/// `|T_H : T_N|` computed as `|η(T_H)| / |η(T_N)|` inside `P × P`, next to
/// `|H : N| = |F_H| / |F_N|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexRatio {
    pub eta_h: usize,
    pub eta_n: usize,
    pub lhs: usize,
    pub rhs: usize,
    pub equal: bool,
}

pub fn index_ratio(p_finite: &FiniteGroup, h_gens: &[Word], n_gens: &[Word]) -> Result<IndexRatio> {
    for w in h_gens.iter().chain(n_gens) {
        p_finite.presentation().alphabet().check_word(w)?;
    }
    let eta_h = p_finite.eta_order(h_gens);
    let eta_n = p_finite.eta_order(n_gens);
    if eta_h % eta_n != 0 {
        return Err(Error::Input("η(T_N) is not contained in η(T_H)".into()));
    }
    let (fh, fn_) = (p_finite.subgroup_order(h_gens), p_finite.subgroup_order(n_gens));
    let lhs = eta_h / eta_n;
    let rhs = fh / fn_;
    Ok(IndexRatio {
        eta_h,
        eta_n,
        lhs,
        rhs,
        equal: lhs == rhs && fh % fn_ == 0,
    })
}

/// [`index_ratio`] for two fibre contexts over the same Rips output.
pub fn index_ratio_check(ctx_h: &FibreContext, ctx_n: &FibreContext, p_finite: &FiniteGroup) -> Result<IndexRatio> {
    index_ratio(p_finite, &ctx_h.h_gens, &ctx_n.h_gens)
}
