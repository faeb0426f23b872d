//! Probability functions on the `->`-free fragment, with exact rationals.
//!
//! A function is either induced by a mass distribution over four-valued
//! assignments ([`StateDistribution`]) or given pointwise as a finite
//! formula-to-value table ([`ProbabilityTable`]).

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fde::{atoms_of, ensure_arrow_free, eval_formula, Assignment};
use crate::syntax::Formula;

pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `a/b`, an integer, or a decimal such as `-0.125`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Format(format!("not a rational number: `{text}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Ok(if negative { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// `a/b` in lowest terms, or `a` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Anything that assigns probabilities to formulas.
pub trait Probability {
    fn prob(&self, f: &Formula) -> Result<Rational>;
}

impl<P: Probability + ?Sized> Probability for &P {
    fn prob(&self, f: &Formula) -> Result<Rational> {
        (**self).prob(f)
    }
}

/// Masses over assignments to a fixed atom list; masses are non-negative and
/// sum to exactly one. Zero-mass entries are dropped.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StateDistribution {
    atoms: Vec<String>,
    masses: Vec<(Assignment, Rational)>,
}

impl StateDistribution {
    pub fn new(atoms: Vec<String>, masses: Vec<(Assignment, Rational)>) -> Result<StateDistribution> {
        let mut atoms = atoms;
        atoms.sort();
        atoms.dedup();
        let mut merged: BTreeMap<Assignment, Rational> = BTreeMap::new();
        let mut total = Rational::zero();
        for (a, m) in masses {
            if a.atoms().ne(atoms.iter().map(String::as_str)) {
                return Err(Error::InvalidDistribution(format!(
                    "assignment {} does not value exactly the atoms {:?}",
                    render_assignment(&a),
                    atoms
                )));
            }
            if m.is_negative() {
                return Err(Error::InvalidDistribution(format!(
                    "negative mass {} on {}",
                    format_rational(&m),
                    render_assignment(&a)
                )));
            }
            total += &m;
            if merged.insert(a.clone(), m).is_some() {
                return Err(Error::InvalidDistribution(format!(
                    "assignment {} listed twice",
                    render_assignment(&a)
                )));
            }
        }
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {}, not 1",
                format_rational(&total)
            )));
        }
        Ok(StateDistribution {
            atoms,
            masses: merged.into_iter().filter(|(_, m)| !m.is_zero()).collect(),
        })
    }

    /// Equal mass on all `4^n` assignments.
    pub fn uniform(atoms: &[String]) -> StateDistribution {
        let all: Vec<Assignment> = Assignment::enumerate(atoms).collect();
        let m = Rational::new(BigInt::one(), BigInt::from(all.len()));
        StateDistribution::new(atoms.to_vec(), all.into_iter().map(|a| (a, m.clone())).collect())
            .expect("uniform masses sum to one")
    }

    pub fn point(a: Assignment) -> StateDistribution {
        let atoms = a.atoms().map(String::from).collect();
        StateDistribution::new(atoms, vec![(a, Rational::one())]).expect("point mass")
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    /// Support entries in assignment order.
    pub fn masses(&self) -> &[(Assignment, Rational)] {
        &self.masses
    }

    /// The distribution of `p(. | b)`: mass restricted to assignments
    /// designating `b`, renormalised.
    pub fn condition_on(&self, b: &Formula) -> Result<StateDistribution> {
        let pb = self.prob(b)?;
        if pb.is_zero() {
            return Err(Error::UndefinedConditional(b.render()));
        }
        let mut masses = Vec::new();
        for (a, m) in &self.masses {
            if eval_formula(a, b)?.t {
                masses.push((a.clone(), m / &pb));
            }
        }
        StateDistribution::new(self.atoms.clone(), masses)
    }
}

impl Probability for StateDistribution {
    fn prob(&self, f: &Formula) -> Result<Rational> {
        induced_probability(self, f)
    }
}

pub(crate) fn render_assignment(a: &Assignment) -> String {
    let parts: Vec<String> = a.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Total mass of the assignments at which `f` is designated.
pub fn induced_probability(d: &StateDistribution, f: &Formula) -> Result<Rational> {
    ensure_arrow_free(f)?;
    let mut total = Rational::zero();
    for (a, m) in &d.masses {
        if eval_formula(a, f)?.t {
            total += m;
        }
    }
    if d.masses.is_empty() {
        // unreachable for a valid distribution, but keep unbound atoms an error
        if let Some(x) = f.atoms().into_iter().find(|x| !d.atoms.contains(x)) {
            return Err(Error::UnboundAtom(x));
        }
    }
    Ok(total)
}

/// A finite formula-to-value map with no checks on the values.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ProbabilityTable {
    values: BTreeMap<Formula, Rational>,
}

impl ProbabilityTable {
    pub fn new() -> ProbabilityTable {
        ProbabilityTable::default()
    }

    /// Rejects formulas containing `->`.
    pub fn insert(&mut self, f: Formula, v: Rational) -> Result<()> {
        ensure_arrow_free(&f)?;
        self.values.insert(f, v);
        Ok(())
    }

    pub fn get(&self, f: &Formula) -> Option<&Rational> {
        self.values.get(f)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Formula, &Rational)> {
        self.values.iter()
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.values.keys()
    }

    /// Restriction of any probability function to `domain`.
    pub fn from_function<P: Probability + ?Sized>(p: &P, domain: &[Formula]) -> Result<ProbabilityTable> {
        let mut t = ProbabilityTable::new();
        for f in domain {
            t.insert(f.clone(), p.prob(f)?)?;
        }
        Ok(t)
    }

    pub fn from_pairs<I: IntoIterator<Item = (Formula, Rational)>>(pairs: I) -> Result<ProbabilityTable> {
        let mut t = ProbabilityTable::new();
        for (f, v) in pairs {
            t.insert(f, v)?;
        }
        Ok(t)
    }
}

impl Probability for ProbabilityTable {
    fn prob(&self, f: &Formula) -> Result<Rational> {
        self.values
            .get(f)
            .cloned()
            .ok_or_else(|| Error::OutsideDomain(f.render()))
    }
}

/// A table whose values all lie in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ProbabilityAssignment(ProbabilityTable);

impl ProbabilityAssignment {
    pub fn new(table: ProbabilityTable) -> Result<ProbabilityAssignment> {
        for (f, v) in table.iter() {
            if v.is_negative() || *v > Rational::one() {
                return Err(Error::OutOfRange {
                    formula: f.render(),
                    value: format_rational(v),
                });
            }
        }
        Ok(ProbabilityAssignment(table))
    }

    pub fn table(&self) -> &ProbabilityTable {
        &self.0
    }
}

impl Probability for ProbabilityAssignment {
    fn prob(&self, f: &Formula) -> Result<Rational> {
        self.0.prob(f)
    }
}

/// Which probability axiom a table breaks, with witnesses.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AxiomViolation {
    /// Axiom i: a value outside `[0, 1]`.
    Range { formula: Formula, value: String },
    /// Axiom ii: `antecedent` entails `consequent` but has a larger value.
    Monotonicity {
        antecedent: Formula,
        consequent: Formula,
    },
    /// Axiom iii: `p(a & b) + p(a | b) != p(a) + p(b)`.
    Additivity { a: Formula, b: Formula },
    /// Every value is zero while non-triviality was requested.
    Trivial,
}

impl AxiomViolation {
    pub fn axiom(&self) -> &'static str {
        match self {
            AxiomViolation::Range { .. } => "i",
            AxiomViolation::Monotonicity { .. } => "ii",
            AxiomViolation::Additivity { .. } => "iii",
            AxiomViolation::Trivial => "non-triviality",
        }
    }
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Range { formula, value } => {
                write!(f, "axiom i: p({formula}) = {value} is outside [0, 1]")
            }
            AxiomViolation::Monotonicity {
                antecedent,
                consequent,
            } => write!(
                f,
                "axiom ii: {antecedent} entails {consequent} but p({antecedent}) > p({consequent})"
            ),
            AxiomViolation::Additivity { a, b } => write!(
                f,
                "axiom iii: p({a} & {b}) + p({a} | {b}) != p({a}) + p({b})"
            ),
            AxiomViolation::Trivial => write!(f, "non-triviality: every value is 0"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct ValidateOptions {
    /// Also require some value to be positive.
    pub non_trivial: bool,
}

/// A fixed finite domain with its entailment pairs and additivity quadruples
/// precomputed, so that many value vectors can be checked cheaply.
#[derive(Clone, Debug)]
pub struct ProbabilityDomain {
    formulas: Vec<Formula>,
    index: HashMap<Formula, usize>,
    entails: Vec<(usize, usize)>,
    // (a, b, a & b, a | b)
    quads: Vec<(usize, usize, usize, usize)>,
}

impl ProbabilityDomain {
    pub fn new(formulas: Vec<Formula>) -> Result<ProbabilityDomain> {
        for f in &formulas {
            ensure_arrow_free(f)?;
        }
        let index: HashMap<Formula, usize> = formulas
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        if index.len() != formulas.len() {
            return Err(Error::Format("duplicate formula in domain".into()));
        }
        // designation sets over the common assignment space
        let atoms = atoms_of(&formulas);
        let space: Vec<Assignment> = Assignment::enumerate(&atoms).collect();
        let words = space.len().div_ceil(64);
        let mut designated = vec![vec![0u64; words]; formulas.len()];
        for (k, a) in space.iter().enumerate() {
            for (i, f) in formulas.iter().enumerate() {
                if eval_formula(a, f)?.t {
                    designated[i][k / 64] |= 1 << (k % 64);
                }
            }
        }
        let mut entails = Vec::new();
        for i in 0..formulas.len() {
            for j in 0..formulas.len() {
                let sub = designated[i]
                    .iter()
                    .zip(&designated[j])
                    .all(|(a, b)| a & !b == 0);
                if i != j && sub {
                    entails.push((i, j));
                }
            }
        }
        let mut quads = Vec::new();
        for (i, a) in formulas.iter().enumerate() {
            for (j, b) in formulas.iter().enumerate() {
                let and = index.get(&Formula::and(a.clone(), b.clone()));
                let or = index.get(&Formula::or(a.clone(), b.clone()));
                if let (Some(&k), Some(&l)) = (and, or) {
                    quads.push((i, j, k, l));
                }
            }
        }
        Ok(ProbabilityDomain {
            formulas,
            index,
            entails,
            quads,
        })
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn position(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// Entailing pairs `(i, j)`, `i != j`, by domain position.
    pub fn entailments(&self) -> &[(usize, usize)] {
        &self.entails
    }

    pub fn additivity_quadruples(&self) -> &[(usize, usize, usize, usize)] {
        &self.quads
    }

    /// Checks `values[i]` as the value of `formulas()[i]`. Works for any exact
    /// ordered number type.
    pub fn validate<T>(&self, values: &[T], opts: ValidateOptions) -> Vec<AxiomViolation>
    where
        T: Clone + PartialOrd + Zero + One + fmt::Display,
    {
        assert_eq!(values.len(), self.formulas.len());
        let mut out = Vec::new();
        let (zero, one) = (T::zero(), T::one());
        for (f, v) in self.formulas.iter().zip(values) {
            if *v < zero || *v > one {
                out.push(AxiomViolation::Range {
                    formula: f.clone(),
                    value: v.to_string(),
                });
            }
        }
        for &(i, j) in &self.entails {
            if values[i] > values[j] {
                out.push(AxiomViolation::Monotonicity {
                    antecedent: self.formulas[i].clone(),
                    consequent: self.formulas[j].clone(),
                });
            }
        }
        for &(i, j, k, l) in &self.quads {
            if sum(&values[k], &values[l]) != sum(&values[i], &values[j]) {
                out.push(AxiomViolation::Additivity {
                    a: self.formulas[i].clone(),
                    b: self.formulas[j].clone(),
                });
            }
        }
        if opts.non_trivial && values.iter().all(|v| v.is_zero()) {
            out.push(AxiomViolation::Trivial);
        }
        out
    }

    /// Same as [`ProbabilityDomain::validate`] but stops at the first failure.
    pub fn is_coherent<T>(&self, values: &[T]) -> bool
    where
        T: Clone + PartialOrd + Zero + One,
    {
        let (zero, one) = (T::zero(), T::one());
        values.iter().all(|v| *v >= zero && *v <= one)
            && self.entails.iter().all(|&(i, j)| values[i] <= values[j])
            && self
                .quads
                .iter()
                .all(|&(i, j, k, l)| sum(&values[k], &values[l]) == sum(&values[i], &values[j]))
    }
}

fn sum<T: Clone + Zero>(a: &T, b: &T) -> T {
    a.clone() + b.clone()
}

/// Checks a table against axioms i to iii over its own domain.
pub fn validate_probability(table: &ProbabilityTable, opts: ValidateOptions) -> Vec<AxiomViolation> {
    let formulas: Vec<Formula> = table.formulas().cloned().collect();
    let domain = ProbabilityDomain::new(formulas).expect("table formulas are arrow-free");
    let values: Vec<Rational> = table.iter().map(|(_, v)| v.clone()).collect();
    domain.validate(&values, opts)
}

/// `p(a & b) / p(b)`; an error when `p(b) = 0`.
pub fn conditional_probability<P: Probability + ?Sized>(
    p: &P,
    a: &Formula,
    b: &Formula,
) -> Result<Rational> {
    let pb = p.prob(b)?;
    if pb.is_zero() {
        return Err(Error::UndefinedConditional(b.render()));
    }
    Ok(p.prob(&Formula::and(a.clone(), b.clone()))? / pb)
}

/// Pairwise meets have probability zero and the disjunction probability one.
/// An empty family never behaves as a partition.
pub fn behaves_as_partition<P: Probability + ?Sized>(p: &P, bs: &[Formula]) -> Result<bool> {
    Ok(partition_failure(p, bs)?.is_none())
}

/// The first reason `bs` fails to behave as a partition under `p`.
pub fn partition_failure<P: Probability + ?Sized>(p: &P, bs: &[Formula]) -> Result<Option<String>> {
    let Some(join) = Formula::disjunction(bs.iter().cloned()) else {
        return Ok(Some("empty family".into()));
    };
    for (i, a) in bs.iter().enumerate() {
        for b in &bs[i + 1..] {
            let meet = Formula::and(a.clone(), b.clone());
            let v = p.prob(&meet)?;
            if !v.is_zero() {
                return Ok(Some(format!("p({meet}) = {}", format_rational(&v))));
            }
        }
    }
    let v = p.prob(&join)?;
    if !v.is_one() {
        return Ok(Some(format!("p({join}) = {}", format_rational(&v))));
    }
    Ok(None)
}

/// `(p(a), sum_i p(a | b_i) p(b_i))`, skipping cells of probability zero.
pub fn total_probability_check<P: Probability + ?Sized>(
    p: &P,
    a: &Formula,
    bs: &[Formula],
) -> Result<(Rational, Rational)> {
    if let Some(why) = partition_failure(p, bs)? {
        return Err(Error::Precondition(format!(
            "family does not behave as a partition: {why}"
        )));
    }
    let lhs = p.prob(a)?;
    let mut rhs = Rational::zero();
    for b in bs {
        let pb = p.prob(b)?;
        if pb.is_zero() {
            continue;
        }
        rhs += conditional_probability(p, a, b)? * pb;
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fde::TruthValue;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        rational(n, d)
    }

    fn one_atom_uniform() -> StateDistribution {
        StateDistribution::uniform(&["p".to_string()])
    }

    fn classical(pairs: &[(&[(&str, TruthValue)], (i64, i64))]) -> StateDistribution {
        let masses: Vec<(Assignment, Rational)> = pairs
            .iter()
            .map(|(asg, (n, d))| {
                (
                    asg.iter().map(|(a, v)| (a.to_string(), *v)).collect(),
                    r(*n, *d),
                )
            })
            .collect();
        let atoms = masses[0].0.atoms().map(String::from).collect();
        StateDistribution::new(atoms, masses).unwrap()
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/6").unwrap(), r(1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), r(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), r(-3, 2));
        assert_eq!(parse_rational(" 2 ").unwrap(), r(2, 1));
        assert_eq!(parse_rational(".5").unwrap(), r(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.2.3").is_err());
        assert_eq!(format_rational(&r(6, 4)), "3/2");
        assert_eq!(format_rational(&r(-2, 1)), "-2");
    }

    #[test]
    fn uniform_one_atom_values() {
        let d = one_atom_uniform();
        assert_eq!(d.prob(&f("p")).unwrap(), r(1, 2));
        assert_eq!(d.prob(&f("p & ~p")).unwrap(), r(1, 4));
        assert_eq!(d.prob(&f("p | ~p")).unwrap(), r(3, 4));
        assert_eq!(d.prob(&f("~p")).unwrap(), r(1, 2));
        assert!(d.prob(&f("p")).unwrap() + d.prob(&f("~p")).unwrap() > d.prob(&f("p | ~p")).unwrap());
    }

    #[test]
    fn point_mass() {
        let d = StateDistribution::point(Assignment::new().with("p", TruthValue::T));
        assert_eq!(d.prob(&f("p")).unwrap(), r(1, 1));
        assert_eq!(d.prob(&f("~p")).unwrap(), r(0, 1));
        assert_eq!(d.prob(&f("q")), Err(Error::UnboundAtom("q".into())));
        assert!(d.prob(&f("p -> p")).is_err());
    }

    #[test]
    fn distribution_validation() {
        let a = Assignment::new().with("p", TruthValue::T);
        let b = Assignment::new().with("p", TruthValue::F);
        let atoms = vec!["p".to_string()];
        assert!(StateDistribution::new(atoms.clone(), vec![(a.clone(), r(1, 2))]).is_err());
        assert!(StateDistribution::new(
            atoms.clone(),
            vec![(a.clone(), r(3, 2)), (b.clone(), r(-1, 2))]
        )
        .is_err());
        assert!(StateDistribution::new(
            atoms.clone(),
            vec![(a.clone(), r(1, 2)), (a.clone(), r(1, 2))]
        )
        .is_err());
        let wrong = Assignment::new().with("q", TruthValue::T);
        assert!(StateDistribution::new(atoms, vec![(wrong, r(1, 1))]).is_err());
    }

    #[test]
    fn validation_examples() {
        let d = one_atom_uniform();
        let dom = vec![f("p"), f("~p"), f("p & ~p"), f("p | ~p")];
        let t = ProbabilityTable::from_function(&d, &dom).unwrap();
        assert!(validate_probability(&t, ValidateOptions::default()).is_empty());

        let t = ProbabilityTable::from_pairs([(f("p"), r(6, 10)), (f("p | q"), r(1, 2))]).unwrap();
        let v = validate_probability(&t, ValidateOptions::default());
        assert_eq!(
            v,
            vec![AxiomViolation::Monotonicity {
                antecedent: f("p"),
                consequent: f("p | q")
            }]
        );

        let zeros = ProbabilityTable::from_pairs(dom.iter().map(|g| (g.clone(), r(0, 1)))).unwrap();
        assert!(validate_probability(&zeros, ValidateOptions::default()).is_empty());
        assert_eq!(
            validate_probability(&zeros, ValidateOptions { non_trivial: true }),
            vec![AxiomViolation::Trivial]
        );

        let t = ProbabilityTable::from_pairs([
            (f("p"), r(1, 2)),
            (f("q"), r(1, 2)),
            (f("p & q"), r(1, 2)),
            (f("p | q"), r(1, 4)),
            (f("~q"), r(3, 2)),
        ])
        .unwrap();
        let axioms: Vec<&str> = validate_probability(&t, ValidateOptions::default())
            .iter()
            .map(|v| v.axiom())
            .collect();
        assert!(axioms.contains(&"i") && axioms.contains(&"ii") && axioms.contains(&"iii"));
    }

    #[test]
    fn assignment_range_is_enforced() {
        let t = ProbabilityTable::from_pairs([(f("p"), r(5, 4))]).unwrap();
        assert!(matches!(ProbabilityAssignment::new(t), Err(Error::OutOfRange { .. })));
        let mut t = ProbabilityTable::new();
        assert!(t.insert(f("p -> q"), r(1, 2)).is_err());
    }

    #[test]
    fn conditionals() {
        let d = one_atom_uniform();
        assert_eq!(conditional_probability(&d, &f("p"), &f("p | ~p")).unwrap(), r(2, 3));
        assert_eq!(conditional_probability(&d, &f("p"), &f("p")).unwrap(), r(1, 1));
        let d = StateDistribution::point(Assignment::new().with("p", TruthValue::N));
        assert_eq!(
            conditional_probability(&d, &f("p"), &f("p")),
            Err(Error::UndefinedConditional("p".into()))
        );
    }

    #[test]
    fn partitions() {
        let d = one_atom_uniform();
        assert!(!behaves_as_partition(&d, &[f("p"), f("~p")]).unwrap());
        let c = classical(&[(&[("p", TruthValue::T)], (1, 3)), (&[("p", TruthValue::F)], (2, 3))]);
        assert!(behaves_as_partition(&c, &[f("p"), f("~p")]).unwrap());
        assert!(behaves_as_partition(&c, &[f("p | ~p")]).unwrap());
        assert!(!behaves_as_partition(&c, &[]).unwrap());
    }

    #[test]
    fn total_probability() {
        let c = classical(&[
            (&[("p", TruthValue::T), ("q", TruthValue::T)], (1, 5)),
            (&[("p", TruthValue::T), ("q", TruthValue::F)], (1, 5)),
            (&[("p", TruthValue::F), ("q", TruthValue::TF)], (1, 5)),
            (&[("p", TruthValue::F), ("q", TruthValue::N)], (2, 5)),
        ]);
        let (lhs, rhs) = total_probability_check(&c, &f("q"), &[f("p"), f("~p")]).unwrap();
        assert_eq!(lhs, r(2, 5));
        assert_eq!(lhs, rhs);
        let (lhs, rhs) = total_probability_check(&c, &f("q"), &[f("p | ~p")]).unwrap();
        assert_eq!(lhs, rhs);
        assert!(matches!(
            total_probability_check(&one_atom_uniform(), &f("p"), &[f("p"), f("~p")]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn conditioning_matches_conditional_probability() {
        let d = StateDistribution::uniform(&["p".to_string(), "q".to_string()]);
        let b = f("p | q");
        let dc = d.condition_on(&b).unwrap();
        for a in [f("p"), f("q & ~p"), f("~q")] {
            assert_eq!(dc.prob(&a).unwrap(), conditional_probability(&d, &a, &b).unwrap());
        }
    }

    #[test]
    fn chaining_rule() {
        let d = StateDistribution::uniform(&["p".to_string(), "q".to_string()]);
        let (a, b, c) = (f("p"), f("p | q"), f("~q"));
        let pcb = conditional_probability(&d, &c, &b).unwrap();
        assert!(pcb > Rational::zero());
        let lhs = conditional_probability(&d, &Formula::and(a.clone(), c.clone()), &b).unwrap() / pcb;
        let rhs = conditional_probability(&d, &a, &Formula::and(b, c)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn domain_validates_machine_integers() {
        let dom = ProbabilityDomain::new(vec![f("p"), f("q"), f("p & q"), f("p | q")]).unwrap();
        type R = num_rational::Ratio<i64>;
        let good = [R::new(1, 2), R::new(1, 3), R::new(1, 6), R::new(2, 3)];
        assert!(dom.validate(&good, ValidateOptions::default()).is_empty());
        assert!(dom.is_coherent(&good));
        let bad = [R::new(1, 2), R::new(1, 3), R::new(1, 6), R::new(1, 3)];
        assert!(!dom.is_coherent(&bad));
        assert_eq!(dom.entailments().len(), 5);
        assert_eq!(dom.additivity_quadruples().len(), 1);
    }
}
