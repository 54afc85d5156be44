//! Finite-quotient witnesses and the searches that find them.

use std::collections::HashSet;

use crate::budget::{Budget, Control};
use crate::error::{Error, Result};
use crate::oracle::Stall;
use crate::presentation::Presentation;
use crate::profinite::perm::{generated_group, Perm, PermQuotient};
use crate::profinite::reps::PermRepEnumerator;
use crate::record::Record;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    /// Images of `subject[0]` and `subject[1]` differ.
    Element,
    /// Images of `subject[0]` and `subject[1]` are not conjugate in the
    /// image group.
    Conjugacy,
    /// The image of `subject[0]` lies outside the image of `⟨subgroup⟩`.
    Subgroup,
    /// The image of `subject[0]` lies outside `⟨image of subject[1]⟩ · image of ⟨subgroup⟩`.
    DoubleCoset,
}

impl WitnessKind {
    pub fn name(self) -> &'static str {
        match self {
            WitnessKind::Element => "element",
            WitnessKind::Conjugacy => "conjugacy",
            WitnessKind::Subgroup => "subgroup",
            WitnessKind::DoubleCoset => "double-coset",
        }
    }
}

/// A finite quotient together with the words it separates. Everything
/// needed to re-check the separation is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub kind: WitnessKind,
    pub quotient: PermQuotient,
    pub subject: Vec<Word>,
    pub subgroup: Vec<Word>,
}

fn conjugate_within(x: &Perm, y: &Perm, group: &[Perm]) -> bool {
    group.iter().any(|g| &x.conjugate_by(g) == y)
}

fn subgroup_elements(q: &PermQuotient, gens: &[Word], cap: usize) -> Option<Vec<Perm>> {
    let imgs: Vec<Perm> = gens.iter().map(|w| q.evaluate(w)).collect();
    generated_group(&imgs, q.degree(), cap)
}

/// `Some(true)` if `q` separates as `kind` says, `None` if an image group
/// exceeds `cap`.
fn separates(kind: WitnessKind, q: &PermQuotient, subject: &[Word], subgroup: &[Word], cap: usize) -> Option<bool> {
    let g = q.evaluate(&subject[0]);
    match kind {
        WitnessKind::Element => Some(g != q.evaluate(&subject[1])),
        WitnessKind::Conjugacy => {
            let y = q.evaluate(&subject[1]);
            if g.cycle_type() != y.cycle_type() {
                return Some(true);
            }
            if g == y {
                return Some(false);
            }
            let group = q.image_group(cap)?;
            Some(!conjugate_within(&g, &y, &group))
        }
        WitnessKind::Subgroup => {
            let h = subgroup_elements(q, subgroup, cap)?;
            Some(!h.contains(&g))
        }
        WitnessKind::DoubleCoset => {
            let c = subgroup_elements(q, &subject[1..2], cap)?;
            let h: HashSet<Perm> = subgroup_elements(q, subgroup, cap)?.into_iter().collect();
            // g ∈ C·H  iff  c⁻¹g ∈ H for some c ∈ C
            Some(!c.iter().any(|c| h.contains(&c.inverse().then(&g))))
        }
    }
}

impl Witness {
    /// Re-evaluates the stored words in the stored quotient.
    pub fn verify(&self, p: &Presentation, cap: usize) -> bool {
        let arity = match self.kind {
            WitnessKind::Subgroup => 1,
            _ => 2,
        };
        self.subject.len() == arity
            && self.quotient.respects(p)
            && separates(self.kind, &self.quotient, &self.subject, &self.subgroup, cap) == Some(true)
    }

    pub fn to_record(&self, p: &Presentation) -> Record {
        let mut r = Record::new();
        r.push("kind", self.kind.name());
        r.push("degree", self.quotient.degree());
        r.push_many("image", self.quotient.to_lines(p));
        r.push_many("subject", self.subject.iter().map(|w| p.format_word(w)));
        r.push_many(
            "subject_image",
            self.subject.iter().map(|w| self.quotient.evaluate(w).to_cycle_string()),
        );
        if !self.subgroup.is_empty() {
            r.push_many("subgroup", self.subgroup.iter().map(|w| p.format_word(w)));
        }
        r
    }
}

/// Result of a witness search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSearch {
    pub witness: Option<Witness>,
    /// Homomorphisms examined.
    pub reps_scanned: u64,
    /// Quotients skipped because an image group exceeded the cap.
    pub skipped: Vec<String>,
    /// The budget or a cancellation stopped the scan early.
    pub interrupted: bool,
    /// Largest degree reached.
    pub frontier_degree: usize,
}

impl WitnessSearch {
    pub fn stall(&self) -> Stall {
        let stage = if self.interrupted {
            "witness-search"
        } else {
            "witness-search-exhausted"
        };
        Stall::new(stage, self.reps_scanned, format!("degree {}", self.frontier_degree))
    }
}

fn scan(
    p: &Presentation,
    kind: WitnessKind,
    subject: Vec<Word>,
    subgroup: Vec<Word>,
    budget: &Budget,
    control: &Control,
) -> Result<WitnessSearch> {
    for w in subject.iter().chain(&subgroup) {
        p.alphabet().check_word(w)?;
    }
    let mut out = WitnessSearch {
        witness: None,
        reps_scanned: 0,
        skipped: Vec::new(),
        interrupted: false,
        frontier_degree: 0,
    };
    for degree in 1..=budget.max_degree {
        out.frontier_degree = degree;
        let mut reps = PermRepEnumerator::new(p, degree, None);
        loop {
            if reps.steps() + out.reps_scanned >= budget.max_steps
                || (out.reps_scanned % 64 == 0 && control.should_stop())
            {
                out.interrupted = true;
                return Ok(out);
            }
            let Some(q) = reps.next() else { break };
            out.reps_scanned += 1;
            match separates(kind, &q, &subject, &subgroup, budget.image_cap) {
                Some(true) => {
                    out.witness = Some(Witness {
                        kind,
                        quotient: q,
                        subject,
                        subgroup,
                    });
                    return Ok(out);
                }
                Some(false) => {}
                None => out.skipped.push(format!(
                    "degree {degree}: image group larger than {}: {}",
                    budget.image_cap,
                    q.to_lines(p).join(", ")
                )),
            }
        }
    }
    Ok(out)
}

/// Finite quotient in which `x` and `y` have different images.
pub fn separate_elements(
    p: &Presentation,
    x: &Word,
    y: &Word,
    budget: &Budget,
    control: &Control,
) -> Result<WitnessSearch> {
    scan(
        p,
        WitnessKind::Element,
        vec![x.clone(), y.clone()],
        Vec::new(),
        budget,
        control,
    )
}

/// Finite quotient in which the images of `x` and `y` are not conjugate in
/// the image group.
pub fn separate_conjugacy(
    p: &Presentation,
    x: &Word,
    y: &Word,
    budget: &Budget,
    control: &Control,
) -> Result<WitnessSearch> {
    scan(
        p,
        WitnessKind::Conjugacy,
        vec![x.clone(), y.clone()],
        Vec::new(),
        budget,
        control,
    )
}

/// Finite quotient in which the image of `g` avoids the image of `⟨h_gens⟩`.
pub fn separate_from_subgroup(
    p: &Presentation,
    g: &Word,
    h_gens: &[Word],
    budget: &Budget,
    control: &Control,
) -> Result<WitnessSearch> {
    scan(
        p,
        WitnessKind::Subgroup,
        vec![g.clone()],
        h_gens.to_vec(),
        budget,
        control,
    )
}

/// Finite quotient in which the image of `g` avoids `⟨c⟩·⟨h_gens⟩`. The
/// caller supplies the cyclic generator `c`, normally a verified centralizer
/// root; see [`crate::subgroup::separate_from_double_coset`].
pub fn separate_from_cyclic_double_coset(
    p: &Presentation,
    g: &Word,
    c: &Word,
    h_gens: &[Word],
    budget: &Budget,
    control: &Control,
) -> Result<WitnessSearch> {
    scan(
        p,
        WitnessKind::DoubleCoset,
        vec![g.clone(), c.clone()],
        h_gens.to_vec(),
        budget,
        control,
    )
}

/// Parses a record produced by [`Witness::to_record`] in text form.
pub fn parse_witness(p: &Presentation, text: &str) -> Result<Witness> {
    let mut kind = None;
    let mut degree = None;
    let mut images: Vec<Option<Perm>> = vec![None; p.rank()];
    let mut subject = Vec::new();
    let mut subgroup = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| Error::Input(format!("bad witness line `{line}`")))?;
        let value = value.trim();
        match key {
            "kind" => {
                kind = Some(match value {
                    "element" => WitnessKind::Element,
                    "conjugacy" => WitnessKind::Conjugacy,
                    "subgroup" => WitnessKind::Subgroup,
                    "double-coset" => WitnessKind::DoubleCoset,
                    other => return Err(Error::Input(format!("unknown witness kind `{other}`"))),
                })
            }
            "degree" => {
                degree = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| Error::Input(format!("bad degree `{value}`")))?,
                )
            }
            "image" => {
                let n = degree.ok_or_else(|| Error::Input("`image` before `degree`".into()))?;
                let (name, cycles) = value
                    .split_once("->")
                    .ok_or_else(|| Error::Input(format!("bad image `{value}`")))?;
                let g = p.alphabet().letter(name.trim())?.gen();
                images[g] = Some(Perm::parse_cycles(cycles, n)?);
            }
            "subject" => subject.push(p.parse_word(value)?),
            "subgroup" => subgroup.push(p.parse_word(value)?),
            "subject_image" => {}
            other => return Err(Error::Input(format!("unknown witness key `{other}`"))),
        }
    }
    let kind = kind.ok_or_else(|| Error::Input("missing `kind`".into()))?;
    let degree = degree.ok_or_else(|| Error::Input("missing `degree`".into()))?;
    let images = images
        .into_iter()
        .enumerate()
        .map(|(g, i)| i.ok_or_else(|| Error::Input(format!("no image for `{}`", p.alphabet().name(g)))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Witness {
        kind,
        quotient: PermQuotient::new(degree, images)?,
        subject,
        subgroup,
    })
}
