//! Belief updates: Bayesian and Jeffrey conditionalization, their
//! coordinated multi-lab forms, coordinated Adams conditioning, and checks of
//! the conditions that characterize each rule.
//!
//! Sources are [`StateDistribution`]s. Outputs implement [`Probability`];
//! most are distributions again, Adams conditioning yields a reweighted
//! [`Measure`], and coordinated conditionalization a [`Coordinated`] function
//! evaluated on demand.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fde::{ensure_arrow_free, eval_formula, Assignment};
use crate::probability::{
    conditional_probability, format_rational, partition_failure, induced_probability,
    Probability, ProbabilityDomain, ProbabilityTable, Rational, StateDistribution,
    ValidateOptions,
};
use crate::syntax::Formula;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum UpdateRule {
    Bayes,
    Jeffrey,
    Coordinated,
    CoordinatedBayes,
    CoordinatedJeffrey,
    Adams,
}

impl UpdateRule {
    pub const ALL: [UpdateRule; 6] = [
        UpdateRule::Bayes,
        UpdateRule::Jeffrey,
        UpdateRule::Coordinated,
        UpdateRule::CoordinatedBayes,
        UpdateRule::CoordinatedJeffrey,
        UpdateRule::Adams,
    ];

    pub fn token(self) -> &'static str {
        match self {
            UpdateRule::Bayes => "bayes",
            UpdateRule::Jeffrey => "jeffrey",
            UpdateRule::Coordinated => "coordinated",
            UpdateRule::CoordinatedBayes => "coordinated-bayes",
            UpdateRule::CoordinatedJeffrey => "coordinated-jeffrey",
            UpdateRule::Adams => "adams",
        }
    }
}

impl fmt::Display for UpdateRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for UpdateRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        UpdateRule::ALL
            .into_iter()
            .find(|r| r.token() == s.trim())
            .ok_or_else(|| Error::Format(format!("unknown update rule `{s}`")))
    }
}

/// Non-negative masses over assignments with no normalisation requirement.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Measure {
    atoms: Vec<String>,
    masses: Vec<(Assignment, Rational)>,
}

impl Measure {
    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn masses(&self) -> &[(Assignment, Rational)] {
        &self.masses
    }

    pub fn total(&self) -> Rational {
        self.masses.iter().map(|(_, m)| m).sum()
    }

    /// Fails unless the masses sum to one.
    pub fn into_distribution(self) -> Result<StateDistribution> {
        StateDistribution::new(self.atoms, self.masses)
    }
}

impl Probability for Measure {
    fn prob(&self, f: &Formula) -> Result<Rational> {
        ensure_arrow_free(f)?;
        let mut total = Rational::zero();
        for (a, m) in &self.masses {
            if eval_formula(a, f)?.t {
                total += m;
            }
        }
        Ok(total)
    }
}

/// `p*_x(A) = p_y(B|A) p_x(A) / p_z(B)`, and `0` when `p_x(A) = 0` or
/// `p_y(A) = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Coordinated {
    p_x: StateDistribution,
    p_y: StateDistribution,
    p_z_of_b: Rational,
    b: Formula,
}

impl Probability for Coordinated {
    fn prob(&self, a: &Formula) -> Result<Rational> {
        let px = self.p_x.prob(a)?;
        let py = self.p_y.prob(a)?;
        if px.is_zero() || py.is_zero() {
            return Ok(Rational::zero());
        }
        Ok(conditional_probability(&self.p_y, &self.b, a)? * px / &self.p_z_of_b)
    }
}

/// Any rule's output.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Updated {
    Distribution(StateDistribution),
    Measure(Measure),
    Coordinated(Coordinated),
}

impl Probability for Updated {
    fn prob(&self, f: &Formula) -> Result<Rational> {
        match self {
            Updated::Distribution(d) => d.prob(f),
            Updated::Measure(m) => m.prob(f),
            Updated::Coordinated(c) => c.prob(f),
        }
    }
}

/// `base` with the value at one formula shifted by `delta`; other formulas,
/// even equivalent ones, are untouched.
pub struct Perturbed<P> {
    pub base: P,
    pub formula: Formula,
    pub delta: Rational,
}

impl<P: Probability> Probability for Perturbed<P> {
    fn prob(&self, f: &Formula) -> Result<Rational> {
        let v = self.base.prob(f)?;
        Ok(if *f == self.formula { v + &self.delta } else { v })
    }
}

fn positive<P: Probability + ?Sized>(p: &P, f: &Formula, who: &str) -> Result<Rational> {
    let v = p.prob(f)?;
    if !v.is_positive() {
        return Err(Error::Precondition(format!("{who}({f}) = {}, must be positive", format_rational(&v))));
    }
    Ok(v)
}

fn partition<P: Probability + ?Sized>(p: &P, bs: &[Formula], who: &str) -> Result<()> {
    if let Some(why) = partition_failure(p, bs)? {
        return Err(Error::Precondition(format!(
            "the cells do not behave as a partition under {who}: {why}"
        )));
    }
    Ok(())
}

fn same_atoms(ds: &[&StateDistribution]) -> Result<()> {
    if ds.windows(2).any(|w| w[0].atoms() != w[1].atoms()) {
        return Err(Error::Precondition("the distributions are over different atoms".into()));
    }
    Ok(())
}

/// `sum_i w_i d_i` for weights summing to one.
fn mixture(atoms: &[String], parts: Vec<(Rational, StateDistribution)>) -> Result<StateDistribution> {
    let mut merged: BTreeMap<Assignment, Rational> = BTreeMap::new();
    for (w, d) in parts {
        for (a, m) in d.masses() {
            *merged.entry(a.clone()).or_insert_with(Rational::zero) += &w * m;
        }
    }
    StateDistribution::new(atoms.to_vec(), merged.into_iter().collect())
}

/// `p*(A) = p(A | b)`.
pub fn bayes_update(p: &StateDistribution, b: &Formula) -> Result<StateDistribution> {
    p.condition_on(b)
}

/// `p*(A) = sum_i p(A | b_i) w_i`. Cells with weight zero are dropped; the
/// others need positive prior probability and must not overlap under `p*`.
pub fn jeffrey_update(p: &StateDistribution, cells: &[(Formula, Rational)]) -> Result<StateDistribution> {
    if cells.is_empty() {
        return Err(Error::Precondition("no cells".into()));
    }
    let mut total = Rational::zero();
    let mut parts = Vec::new();
    for (b, w) in cells {
        if w.is_negative() {
            return Err(Error::Precondition(format!("weight for {b} is negative")));
        }
        total += w;
        if w.is_zero() {
            continue;
        }
        positive(p, b, "p")?;
        parts.push((w.clone(), p.condition_on(b)?));
    }
    if !total.is_one() {
        return Err(Error::Precondition(format!(
            "weights sum to {}, not 1",
            format_rational(&total)
        )));
    }
    let out = mixture(p.atoms(), parts)?;
    for (i, (a, _)) in cells.iter().enumerate() {
        for (b, _) in &cells[i + 1..] {
            let meet = Formula::and(a.clone(), b.clone());
            let v = out.prob(&meet)?;
            if !v.is_zero() {
                return Err(Error::Precondition(format!(
                    "p*({meet}) = {}, the cells overlap after updating",
                    format_rational(&v)
                )));
            }
        }
    }
    Ok(out)
}

pub fn coord_conditionalize(
    p_x: &StateDistribution,
    p_y: &StateDistribution,
    p_z: &StateDistribution,
    b: &Formula,
) -> Result<Coordinated> {
    ensure_arrow_free(b)?;
    let p_z_of_b = positive(p_z, b, "p_z")?;
    Ok(Coordinated {
        p_x: p_x.clone(),
        p_y: p_y.clone(),
        p_z_of_b,
        b: b.clone(),
    })
}

fn coord_bayes_hypotheses(
    p_y: &StateDistribution,
    p_z: &StateDistribution,
    b1: &Formula,
    b2: &Formula,
) -> Result<()> {
    partition(p_z, &[b1.clone(), b2.clone()], "p_z")?;
    positive(p_y, b1, "p_y")?;
    let meet = Formula::and(b1.clone(), b2.clone());
    if p_y.prob(&meet)? != p_z.prob(&meet)? {
        return Err(Error::Precondition(format!("p_y({meet}) differs from p_z({meet})")));
    }
    Ok(())
}

/// `p*_x(A) = p_y(A | b1)`.
pub fn coord_bayes_update(
    p_y: &StateDistribution,
    p_z: &StateDistribution,
    b1: &Formula,
    b2: &Formula,
) -> Result<StateDistribution> {
    coord_bayes_hypotheses(p_y, p_z, b1, b2)?;
    p_y.condition_on(b1)
}

fn coord_jeffrey_hypotheses(p_y: &StateDistribution, p_z_star: &StateDistribution, bs: &[Formula]) -> Result<()> {
    partition(p_z_star, bs, "p_z*")?;
    for b in bs {
        positive(p_y, b, "p_y")?;
    }
    for (i, a) in bs.iter().enumerate() {
        for b in &bs[i + 1..] {
            let meet = Formula::and(a.clone(), b.clone());
            if p_y.prob(&meet)? != p_z_star.prob(&meet)? {
                return Err(Error::Precondition(format!("p_y({meet}) differs from p_z*({meet})")));
            }
        }
    }
    Ok(())
}

/// `p*_x(A) = sum_i p_y(A | b_i) p_z*(b_i)`.
pub fn coord_jeffrey_update(
    p_y: &StateDistribution,
    p_z_star: &StateDistribution,
    bs: &[Formula],
) -> Result<StateDistribution> {
    coord_jeffrey_hypotheses(p_y, p_z_star, bs)?;
    let mut parts = Vec::new();
    for b in bs {
        parts.push((p_z_star.prob(b)?, p_y.condition_on(b)?));
    }
    mixture(p_y.atoms(), parts)
}

/// The inputs to coordinated Adams conditioning: lab `y` moves its
/// conditionals `p_y(b_i | a1)` to `new_conditionals[i]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdamsInput {
    pub p_y: StateDistribution,
    pub new_conditionals: [Rational; 2],
    pub p_z: StateDistribution,
    pub a1: Formula,
    pub a2: Formula,
    pub b1: Formula,
    pub b2: Formula,
}

impl AdamsInput {
    /// `p_y(b1 | a1)` and `p_y(b2 | a1)`, after checking the update is defined.
    fn old_conditionals(&self) -> Result<[Rational; 2]> {
        partition(&self.p_z, &[self.a1.clone(), self.a2.clone()], "p_z")?;
        partition(&self.p_z, &[self.b1.clone(), self.b2.clone()], "p_z")?;
        positive(&self.p_y, &self.a1, "p_y")?;
        let c1 = conditional_probability(&self.p_y, &self.b1, &self.a1)?;
        let c2 = conditional_probability(&self.p_y, &self.b2, &self.a1)?;
        if !(c1.is_positive() && c1 < Rational::one()) {
            return Err(Error::Precondition(format!(
                "p_y({} | {}) = {}, must lie strictly between 0 and 1",
                self.b1,
                self.a1,
                format_rational(&c1)
            )));
        }
        if !c2.is_positive() {
            return Err(Error::Precondition(format!(
                "p_y({} | {}) = 0",
                self.b2, self.a1
            )));
        }
        let [n1, n2] = &self.new_conditionals;
        if n1.is_negative() || n2.is_negative() || !(n1 + n2).is_one() {
            return Err(Error::Precondition("the new conditionals must be non-negative and sum to 1".into()));
        }
        Ok([c1, c2])
    }
}

pub fn adams_update(input: &AdamsInput) -> Result<Measure> {
    let [c1, c2] = input.old_conditionals()?;
    let k1 = &input.new_conditionals[0] / c1;
    let k2 = &input.new_conditionals[1] / c2;
    let mut masses = Vec::new();
    for (a, m) in input.p_z.masses() {
        let holds = |f: &Formula| eval_formula(a, f).map(|v| v.t);
        let in_a1 = holds(&input.a1)?;
        let mut w = Rational::zero();
        if in_a1 && holds(&input.b1)? {
            w += &k1;
        }
        if in_a1 && holds(&input.b2)? {
            w += &k2;
        }
        if holds(&input.a2)? {
            w += Rational::one();
        }
        if !w.is_zero() {
            masses.push((a.clone(), w * m));
        }
    }
    Ok(Measure {
        atoms: input.p_z.atoms().to_vec(),
        masses,
    })
}

/// A rule together with its inputs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum UpdateSpec {
    Bayes {
        p: StateDistribution,
        b: Formula,
    },
    Jeffrey {
        p: StateDistribution,
        cells: Vec<(Formula, Rational)>,
    },
    Coordinated {
        p_x: StateDistribution,
        p_y: StateDistribution,
        p_z: StateDistribution,
        b: Formula,
    },
    CoordinatedBayes {
        p_y: StateDistribution,
        p_z: StateDistribution,
        b1: Formula,
        b2: Formula,
    },
    CoordinatedJeffrey {
        p_y: StateDistribution,
        p_z_star: StateDistribution,
        cells: Vec<Formula>,
    },
    Adams(AdamsInput),
}

impl UpdateSpec {
    pub fn rule(&self) -> UpdateRule {
        match self {
            UpdateSpec::Bayes { .. } => UpdateRule::Bayes,
            UpdateSpec::Jeffrey { .. } => UpdateRule::Jeffrey,
            UpdateSpec::Coordinated { .. } => UpdateRule::Coordinated,
            UpdateSpec::CoordinatedBayes { .. } => UpdateRule::CoordinatedBayes,
            UpdateSpec::CoordinatedJeffrey { .. } => UpdateRule::CoordinatedJeffrey,
            UpdateSpec::Adams(_) => UpdateRule::Adams,
        }
    }

    /// The formulas the rule singles out.
    pub fn cells(&self) -> Vec<Formula> {
        match self {
            UpdateSpec::Bayes { b, .. } | UpdateSpec::Coordinated { b, .. } => vec![b.clone()],
            UpdateSpec::Jeffrey { cells, .. } => cells.iter().map(|(b, _)| b.clone()).collect(),
            UpdateSpec::CoordinatedBayes { b1, b2, .. } => vec![b1.clone(), b2.clone()],
            UpdateSpec::CoordinatedJeffrey { cells, .. } => cells.clone(),
            UpdateSpec::Adams(i) => vec![
                i.a1.clone(),
                i.a2.clone(),
                i.b1.clone(),
                i.b2.clone(),
                Formula::and(i.a1.clone(), i.b1.clone()),
                Formula::and(i.a1.clone(), i.b2.clone()),
            ],
        }
    }

    fn sources(&self) -> Vec<&StateDistribution> {
        match self {
            UpdateSpec::Bayes { p, .. } | UpdateSpec::Jeffrey { p, .. } => vec![p],
            UpdateSpec::Coordinated { p_x, p_y, p_z, .. } => vec![p_x, p_y, p_z],
            UpdateSpec::CoordinatedBayes { p_y, p_z, .. } => vec![p_y, p_z],
            UpdateSpec::CoordinatedJeffrey { p_y, p_z_star, .. } => vec![p_y, p_z_star],
            UpdateSpec::Adams(i) => vec![&i.p_y, &i.p_z],
        }
    }

    pub fn atoms(&self) -> &[String] {
        self.sources()[0].atoms()
    }

    pub fn apply(&self) -> Result<Updated> {
        same_atoms(&self.sources())?;
        Ok(match self {
            UpdateSpec::Bayes { p, b } => Updated::Distribution(bayes_update(p, b)?),
            UpdateSpec::Jeffrey { p, cells } => Updated::Distribution(jeffrey_update(p, cells)?),
            UpdateSpec::Coordinated { p_x, p_y, p_z, b } => {
                Updated::Coordinated(coord_conditionalize(p_x, p_y, p_z, b)?)
            }
            UpdateSpec::CoordinatedBayes { p_y, p_z, b1, b2 } => {
                Updated::Distribution(coord_bayes_update(p_y, p_z, b1, b2)?)
            }
            UpdateSpec::CoordinatedJeffrey { p_y, p_z_star, cells } => {
                Updated::Distribution(coord_jeffrey_update(p_y, p_z_star, cells)?)
            }
            UpdateSpec::Adams(i) => Updated::Measure(adams_update(i)?),
        })
    }

    fn check_hypotheses(&self) -> Result<()> {
        same_atoms(&self.sources())?;
        match self {
            UpdateSpec::Bayes { p, b } => positive(p, b, "p").map(drop),
            UpdateSpec::Jeffrey { p, cells } => {
                let mut total = Rational::zero();
                for (b, w) in cells {
                    if w.is_negative() {
                        return Err(Error::Precondition(format!("weight for {b} is negative")));
                    }
                    if w.is_positive() {
                        positive(p, b, "p")?;
                    }
                    total += w;
                }
                if !total.is_one() {
                    return Err(Error::Precondition("weights do not sum to 1".into()));
                }
                Ok(())
            }
            UpdateSpec::Coordinated { p_x, p_y, p_z, b } => {
                positive(p_x, b, "p_x")?;
                positive(p_y, b, "p_y")?;
                positive(p_z, b, "p_z").map(drop)
            }
            UpdateSpec::CoordinatedBayes { p_y, p_z, b1, b2 } => coord_bayes_hypotheses(p_y, p_z, b1, b2),
            UpdateSpec::CoordinatedJeffrey { p_y, p_z_star, cells } => {
                coord_jeffrey_hypotheses(p_y, p_z_star, cells)
            }
            UpdateSpec::Adams(i) => {
                i.old_conditionals()?;
                for b in [&i.b1, &i.b2] {
                    let y = conditional_probability(&i.p_y, b, &i.a1)?;
                    let z = conditional_probability(&i.p_z, b, &i.a1)?;
                    if y != z {
                        return Err(Error::Precondition(format!(
                            "p_z({b} | {}) differs from p_y({b} | {})",
                            i.a1, i.a1
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

/// The outcome of checking a candidate against a rule's characterizing
/// conditions; empty `failures` means every condition holds.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Characterization {
    pub failures: Vec<String>,
}

impl Characterization {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The domain the conditions are checked on: `domain`, the rule's cells, and
/// each domain formula conjoined and disjoined with each cell.
pub fn characterization_domain(spec: &UpdateSpec, domain: &[Formula]) -> Vec<Formula> {
    let cells = spec.cells();
    let mut out: Vec<Formula> = Vec::new();
    let mut push = |f: Formula| {
        if !out.contains(&f) {
            out.push(f);
        }
    };
    for f in domain.iter().chain(cells.iter()) {
        push(f.clone());
    }
    for a in &cells {
        for b in &cells {
            if a != b {
                push(Formula::and(a.clone(), b.clone()));
            }
        }
    }
    if let Some(join) = Formula::disjunction(cells.iter().cloned()) {
        push(join);
    }
    for x in domain {
        for c in &cells {
            push(Formula::and(x.clone(), c.clone()));
            push(Formula::or(x.clone(), c.clone()));
        }
    }
    out
}

/// Checks `candidate` against the conditions that characterize `spec`'s rule,
/// on [`characterization_domain`]. A table candidate must cover that domain. Every rule except coordinated
/// conditionalization also requires the candidate to satisfy the probability
/// axioms there, since those conditions only pin the candidate down for
/// probability functions. Errors when the rule's own hypotheses fail.
pub fn check_characterization<P: Probability + ?Sized>(
    spec: &UpdateSpec,
    candidate: &P,
    domain: &[Formula],
) -> Result<Characterization> {
    spec.check_hypotheses()?;
    let dom = characterization_domain(spec, domain);
    let star = |f: &Formula| candidate.prob(f);
    let mut failures = Vec::new();
    let r = format_rational;
    // p*(a | b), or None when p*(b) = 0
    let star_cond = |a: &Formula, b: &Formula| -> Result<Option<Rational>> {
        let pb = star(b)?;
        if pb.is_zero() {
            return Ok(None);
        }
        Ok(Some(star(&Formula::and(a.clone(), b.clone()))? / pb))
    };
    let star_partition = |bs: &[Formula]| -> Result<Option<String>> { partition_failure(candidate, bs) };

    match spec {
        UpdateSpec::Bayes { p, b } => {
            for a in domain {
                let want = conditional_probability(p, a, b)?;
                expect(&mut failures, "conditionalization", format!("p*({a})"), star(a)?, want);
            }
        }
        UpdateSpec::Jeffrey { p, cells } => {
            let bs: Vec<Formula> = cells.iter().map(|(b, _)| b.clone()).collect();
            for (b, w) in cells {
                expect(&mut failures, "rigidity of the new weights", format!("p*({b})"), star(b)?, w.clone());
            }
            for (b, w) in cells {
                if w.is_zero() {
                    continue;
                }
                for a in domain {
                    if let Some(got) = star_cond(a, b)? {
                        let want = conditional_probability(p, a, b)?;
                        expect(&mut failures, "rigidity of conditionals", format!("p*({a} | {b})"), got, want);
                    }
                }
            }
            if let Some(why) = star_partition(&bs)? {
                failures.push(format!("partition: {why}"));
            }
        }
        UpdateSpec::Coordinated { p_x, p_y, p_z, b } => {
            let want = p_x.prob(b)? / p_z.prob(b)?;
            expect(&mut failures, "i", format!("p*({b})"), star(b)?, want);
            let mut positives = Vec::new();
            for a in &dom {
                let pa = star(a)?;
                let pxa = p_x.prob(a)?;
                let vanishing = pxa.is_zero()
                    || p_y.prob(a)?.is_zero()
                    || conditional_probability(p_y, b, a)?.is_zero();
                if pa.is_zero() != vanishing {
                    failures.push(format!(
                        "ii: p*({a}) = {} but p_x({a}) = {} and p_y({b} | {a}) is {}",
                        r(&pa),
                        r(&pxa),
                        if vanishing { "zero or undefined" } else { "positive" }
                    ));
                }
                if pa.is_positive() && !vanishing {
                    positives.push((a, pxa / &pa * conditional_probability(p_y, b, a)?));
                }
            }
            if let Some((a0, k0)) = positives.first() {
                for (a, k) in &positives[1..] {
                    if k != k0 {
                        failures.push(format!(
                            "iii: p_x/p* times p_y({b} | .) is {} at {a0} but {} at {a}",
                            r(k0),
                            r(k)
                        ));
                    }
                }
            }
        }
        UpdateSpec::CoordinatedBayes { p_y, b1, b2, .. } => {
            expect(&mut failures, "i (extremal)", format!("p*({b1})"), star(b1)?, Rational::one());
            expect(&mut failures, "i (extremal)", format!("p*({b2})"), star(b2)?, Rational::zero());
            for a in domain {
                if let Some(got) = star_cond(a, b1)? {
                    let want = conditional_probability(p_y, a, b1)?;
                    expect(&mut failures, "ii (x-y rigidity)", format!("p*({a} | {b1})"), got, want);
                }
            }
            if let Some(why) = star_partition(&[b1.clone(), b2.clone()])? {
                failures.push(format!("iii (partition): {why}"));
            }
        }
        UpdateSpec::CoordinatedJeffrey { p_y, p_z_star, cells } => {
            for b in cells {
                expect(&mut failures, "i (x-z rigidity)", format!("p*({b})"), star(b)?, p_z_star.prob(b)?);
            }
            for b in cells {
                for a in domain {
                    if let Some(got) = star_cond(a, b)? {
                        let want = conditional_probability(p_y, a, b)?;
                        expect(&mut failures, "ii (x-y rigidity)", format!("p*({a} | {b})"), got, want);
                    }
                }
            }
            if let Some(why) = star_partition(cells)? {
                failures.push(format!("iii (partition): {why}"));
            }
        }
        UpdateSpec::Adams(i) => {
            for a in [&i.a1, &i.a2] {
                expect(&mut failures, "i (x-z rigidity)", format!("p*({a})"), star(a)?, i.p_z.prob(a)?);
            }
            for (b, new) in [(&i.b1, &i.new_conditionals[0]), (&i.b2, &i.new_conditionals[1])] {
                match star_cond(b, &i.a1)? {
                    Some(got) => expect(&mut failures, "ii (x-y rigidity)", format!("p*({b} | {})", i.a1), got, new.clone()),
                    None => failures.push(format!("ii (x-y rigidity): p*({}) = 0", i.a1)),
                }
            }
            let cells = [
                Formula::and(i.a1.clone(), i.b1.clone()),
                Formula::and(i.a1.clone(), i.b2.clone()),
                i.a2.clone(),
            ];
            for cell in &cells {
                let pz = i.p_z.prob(cell)?;
                for c in domain {
                    let got = star_cond(c, cell)?;
                    let want = if pz.is_zero() {
                        None
                    } else {
                        Some(conditional_probability(&i.p_z, c, cell)?)
                    };
                    match (got, want) {
                        (Some(g), Some(w)) => expect(&mut failures, "iii (x-z rigidity)", format!("p*({c} | {cell})"), g, w),
                        (None, None) => {}
                        _ => failures.push(format!(
                            "iii (x-z rigidity): p*({c} | {cell}) and p_z({c} | {cell}) are not both defined"
                        )),
                    }
                }
            }
            if let Some(why) = star_partition(&cells)? {
                failures.push(format!("iv (partition): {why}"));
            }
        }
    }
    if spec.rule() != UpdateRule::Coordinated {
        let pd = ProbabilityDomain::new(dom.clone())?;
        let values: Vec<Rational> = dom.iter().map(|f| star(f)).collect::<Result<_>>()?;
        for v in pd.validate(&values, ValidateOptions::default()) {
            failures.push(format!("probability axioms: {v}"));
        }
    }
    Ok(Characterization { failures })
}

fn expect(failures: &mut Vec<String>, label: &str, what: String, got: Rational, want: Rational) {
    if got != want {
        failures.push(format!(
            "{label}: {what} = {} but should be {}",
            format_rational(&got),
            format_rational(&want)
        ));
    }
}

/// `true` iff `p` and `q` agree on every formula of `domain`.
pub fn agree_on<P: Probability + ?Sized, Q: Probability + ?Sized>(
    p: &P,
    q: &Q,
    domain: &[Formula],
) -> Result<bool> {
    for f in domain {
        if p.prob(f)? != q.prob(f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `induced_probability` for each formula, as a table.
pub fn tabulate(d: &StateDistribution, domain: &[Formula]) -> Result<ProbabilityTable> {
    let mut t = ProbabilityTable::new();
    for f in domain {
        t.insert(f.clone(), induced_probability(d, f)?)?;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fde::TruthValue;
    use crate::probability::rational;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        rational(n, d)
    }

    fn one_atom() -> Vec<String> {
        vec!["p".into()]
    }

    fn classical(atoms: &[&str], weights: &[(&[bool], i64)]) -> StateDistribution {
        let total: i64 = weights.iter().map(|(_, w)| w).sum();
        let masses = weights
            .iter()
            .map(|(vals, w)| {
                let a = atoms
                    .iter()
                    .zip(vals.iter())
                    .map(|(x, &b)| (x.to_string(), if b { TruthValue::T } else { TruthValue::F }))
                    .collect();
                (a, r(*w, total))
            })
            .collect();
        StateDistribution::new(atoms.iter().map(|s| s.to_string()).collect(), masses).unwrap()
    }

    #[test]
    fn bayes_on_excluded_middle() {
        let d = StateDistribution::uniform(&one_atom());
        let post = bayes_update(&d, &f("p | ~p")).unwrap();
        assert_eq!(post.prob(&f("p")).unwrap(), r(2, 3));
        let none = StateDistribution::point(Assignment::new().with("p", TruthValue::N));
        assert!(bayes_update(&none, &f("p")).is_err());
    }

    #[test]
    fn jeffrey_degenerate_cases() {
        let d = classical(&["p", "q"], &[(&[true, true], 1), (&[true, false], 2), (&[false, true], 3), (&[false, false], 4)]);
        let same = jeffrey_update(&d, &[(f("p"), r(3, 10)), (f("~p"), r(7, 10))]).unwrap();
        assert_eq!(same, d);
        let one = jeffrey_update(&d, &[(f("p"), r(1, 1)), (f("~p"), r(0, 1))]).unwrap();
        assert_eq!(one, bayes_update(&d, &f("p")).unwrap());
        let moved = jeffrey_update(&d, &[(f("p"), r(1, 2)), (f("~p"), r(1, 2))]).unwrap();
        // q: 1/2 * 1/3 + 1/2 * 3/7
        assert_eq!(moved.prob(&f("q")).unwrap(), r(1, 6) + r(3, 14));
        assert!(jeffrey_update(&d, &[(f("p"), r(1, 2)), (f("~p"), r(1, 3))]).is_err());
    }

    #[test]
    fn jeffrey_rejects_overlapping_cells() {
        let d = StateDistribution::uniform(&one_atom());
        assert!(jeffrey_update(&d, &[(f("p"), r(1, 2)), (f("~p"), r(1, 2))]).is_err());
    }

    #[test]
    fn coordinated_single_lab_is_bayes() {
        let d = classical(&["p", "q"], &[(&[true, true], 1), (&[true, false], 2), (&[false, true], 3), (&[false, false], 4)]);
        let b = f("q");
        let c = coord_conditionalize(&d, &d, &d, &b).unwrap();
        let post = bayes_update(&d, &b).unwrap();
        for a in ["p", "~p", "p & q", "p | q", "q"] {
            assert_eq!(c.prob(&f(a)).unwrap(), post.prob(&f(a)).unwrap(), "{a}");
        }
    }

    #[test]
    fn coordinated_output_characterized() {
        let px = StateDistribution::uniform(&["p".into(), "q".into()]);
        let py = classical(&["p", "q"], &[(&[true, true], 1), (&[true, false], 1), (&[false, true], 2)]);
        let py = mixture(px.atoms(), vec![(r(1, 2), px.clone()), (r(1, 2), py)]).unwrap();
        let pz = classical(&["p", "q"], &[(&[true, true], 3), (&[false, false], 1)]);
        let spec = UpdateSpec::Coordinated { p_x: px, p_y: py, p_z: pz, b: f("q") };
        let out = spec.apply().unwrap();
        let domain = [f("p"), f("~p"), f("p & q"), f("p | ~q")];
        assert!(check_characterization(&spec, &out, &domain).unwrap().holds());
        let bad = Perturbed { base: out, formula: f("p"), delta: r(1, 100) };
        assert!(!check_characterization(&spec, &bad, &domain).unwrap().holds());
    }

    #[test]
    fn coord_bayes_extremal() {
        let pz = classical(&["p", "q"], &[(&[true, true], 1), (&[false, false], 1)]);
        let py = StateDistribution::uniform(&["p".into(), "q".into()]);
        // p_y(p & ~p) = 1/4 but p_z(p & ~p) = 0
        assert!(coord_bayes_update(&py, &pz, &f("p"), &f("~p")).is_err());
        let py = classical(&["p", "q"], &[(&[true, true], 1), (&[true, false], 2), (&[false, true], 1)]);
        let out = coord_bayes_update(&py, &pz, &f("p"), &f("~p")).unwrap();
        assert_eq!(out.prob(&f("p")).unwrap(), r(1, 1));
        assert_eq!(out.prob(&f("~p")).unwrap(), r(0, 1));
        assert_eq!(out, bayes_update(&py, &f("p")).unwrap());
        let spec = UpdateSpec::CoordinatedBayes { p_y: py, p_z: pz, b1: f("p"), b2: f("~p") };
        let domain = [f("q"), f("p & q"), f("~q")];
        assert!(check_characterization(&spec, &out, &domain).unwrap().holds());
        let bad = Perturbed { base: out, formula: f("~q"), delta: r(1, 100) };
        let report = check_characterization(&spec, &bad, &domain).unwrap();
        assert!(!report.holds());
    }

    #[test]
    fn coord_jeffrey_rigidity() {
        let pz = classical(&["p", "q"], &[(&[true, true], 1), (&[false, false], 3)]);
        let py = classical(&["p", "q"], &[(&[true, true], 1), (&[true, false], 1), (&[false, true], 1), (&[false, false], 1)]);
        let cells = [f("p"), f("~p")];
        let out = coord_jeffrey_update(&py, &pz, &cells).unwrap();
        assert_eq!(out.prob(&f("p")).unwrap(), r(1, 4));
        let spec = UpdateSpec::CoordinatedJeffrey { p_y: py.clone(), p_z_star: pz, cells: cells.to_vec() };
        assert!(check_characterization(&spec, &out, &[f("q"), f("p | q")]).unwrap().holds());
        let unchanged = coord_jeffrey_update(&py, &py, &cells).unwrap();
        assert_eq!(unchanged, py);
    }

    #[test]
    fn adams_no_change_and_rigidity() {
        let pz = classical(
            &["p", "q"],
            &[(&[true, true], 1), (&[true, false], 3), (&[false, true], 2), (&[false, false], 2)],
        );
        let input = AdamsInput {
            p_y: pz.clone(),
            new_conditionals: [r(1, 4), r(3, 4)],
            p_z: pz.clone(),
            a1: f("p"),
            a2: f("~p"),
            b1: f("q"),
            b2: f("~q"),
        };
        let same = adams_update(&input).unwrap().into_distribution().unwrap();
        assert_eq!(same, pz);
        let moved = AdamsInput { new_conditionals: [r(1, 2), r(1, 2)], ..input };
        let out = adams_update(&moved).unwrap();
        assert_eq!(out.prob(&f("p")).unwrap(), pz.prob(&f("p")).unwrap());
        assert_eq!(conditional_probability(&out, &f("q"), &f("p")).unwrap(), r(1, 2));
        let spec = UpdateSpec::Adams(moved);
        let domain = [f("q"), f("p | q"), f("~q & p")];
        assert!(check_characterization(&spec, &out, &domain).unwrap().holds());
        let bad = Perturbed { base: out, formula: f("p | q"), delta: r(1, 100) };
        assert!(!check_characterization(&spec, &bad, &domain).unwrap().holds());
    }

    #[test]
    fn rule_tokens_round_trip() {
        for r in UpdateRule::ALL {
            assert_eq!(r.token().parse::<UpdateRule>().unwrap(), r);
        }
    }
}
