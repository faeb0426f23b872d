//! Hilbert-style proofs: axiom schemas `A1`..`A16`, rules `R1`..`R6`, a
//! line-by-line checker, and the finite set operations used by the canonical
//! construction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::frames::ConditionSet;
use crate::syntax::{parse, Formula};

/// Axiom ids in matching order.
pub const AXIOM_IDS: [&str; 16] = [
    "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10", "A11", "A12", "A13", "A14",
    "A15", "A16",
];

pub const OPTIONAL_AXIOMS: [&str; 5] = ["A12", "A13", "A14", "A15", "A16"];

// A schema id and its forms; metavariables are the atoms `A`, `B`, `C`.
const SCHEMAS: [(&str, &[&str]); 16] = [
    ("A1", &["A -> A"]),
    ("A2", &["A -> A | B", "B -> A | B"]),
    ("A3", &["A & B -> A", "A & B -> B"]),
    ("A4", &["(A -> C) & (B -> C) -> (A | B -> C)"]),
    ("A5", &["(A -> B) & (A -> C) -> (A -> B & C)"]),
    ("A6", &["A & (B | C) -> (A & B) | C"]),
    ("A7", &["~(A | B) -> ~A & ~B", "~A & ~B -> ~(A | B)"]),
    ("A8", &["~(A & B) -> ~A | ~B", "~A | ~B -> ~(A & B)"]),
    ("A9", &["A -> ~~A", "~~A -> A"]),
    ("A10", &["~(A | B -> C) -> ~(A -> C) | ~(B -> C)"]),
    ("A11", &["~(A -> B & C) -> ~(A -> B) | ~(A -> C)"]),
    ("A12", &["A & (A -> B) -> B"]),
    ("A13", &["A & ~B -> ~(A -> B)"]),
    ("A14", &["(A -> B) & (B -> C) -> (A -> C)"]),
    ("A15", &["(A -> B) & ~(A -> C) -> ~(B -> C)"]),
    ("A16", &["(~A -> ~B) & ~(C -> A) -> ~(C -> B)"]),
];

pub const METAVARIABLES: [&str; 3] = ["A", "B", "C"];

#[derive(Clone, PartialEq, Eq, Debug)]
enum Pattern {
    Meta(usize),
    Not(Box<Pattern>),
    And(Box<Pattern>, Box<Pattern>),
    Or(Box<Pattern>, Box<Pattern>),
    Imp(Box<Pattern>, Box<Pattern>),
}

impl Pattern {
    fn from_formula(f: &Formula) -> Pattern {
        let b = |g: &Formula| Box::new(Pattern::from_formula(g));
        match f {
            Formula::Atom(a) => Pattern::Meta(
                METAVARIABLES
                    .iter()
                    .position(|m| m == a)
                    .expect("schema atoms are metavariables"),
            ),
            Formula::Not(g) => Pattern::Not(b(g)),
            Formula::And(l, r) => Pattern::And(b(l), b(r)),
            Formula::Or(l, r) => Pattern::Or(b(l), b(r)),
            Formula::Imp(l, r) => Pattern::Imp(b(l), b(r)),
        }
    }

    fn matches(&self, f: &Formula, binding: &mut [Option<Formula>; 3]) -> bool {
        match (self, f) {
            (Pattern::Meta(i), _) => match &binding[*i] {
                Some(bound) => bound == f,
                None => {
                    binding[*i] = Some(f.clone());
                    true
                }
            },
            (Pattern::Not(p), Formula::Not(g)) => p.matches(g, binding),
            (Pattern::And(p, q), Formula::And(l, r))
            | (Pattern::Or(p, q), Formula::Or(l, r))
            | (Pattern::Imp(p, q), Formula::Imp(l, r)) => {
                p.matches(l, binding) && q.matches(r, binding)
            }
            _ => false,
        }
    }

    fn instantiate(&self, s: &Substitution) -> Option<Formula> {
        Some(match self {
            Pattern::Meta(i) => s.0.get(METAVARIABLES[*i])?.clone(),
            Pattern::Not(p) => Formula::not(p.instantiate(s)?),
            Pattern::And(p, q) => Formula::and(p.instantiate(s)?, q.instantiate(s)?),
            Pattern::Or(p, q) => Formula::or(p.instantiate(s)?, q.instantiate(s)?),
            Pattern::Imp(p, q) => Formula::imp(p.instantiate(s)?, q.instantiate(s)?),
        })
    }
}

/// An axiom schema: an id such as `A2` and its forms.
#[derive(Clone, Debug)]
pub struct AxiomSchema {
    pub id: &'static str,
    forms: Vec<Pattern>,
}

impl AxiomSchema {
    pub fn is_optional(&self) -> bool {
        OPTIONAL_AXIOMS.contains(&self.id)
    }

    /// The first form `f` instantiates.
    pub fn matches(&self, f: &Formula) -> Option<Substitution> {
        self.forms.iter().find_map(|p| {
            let mut binding = [None, None, None];
            p.matches(f, &mut binding).then(|| {
                Substitution(
                    METAVARIABLES
                        .iter()
                        .zip(binding)
                        .filter_map(|(m, b)| b.map(|b| (m.to_string(), b)))
                        .collect(),
                )
            })
        })
    }

    /// Each form instantiated by `s`, where every metavariable it uses is bound.
    pub fn instances(&self, s: &Substitution) -> Vec<Formula> {
        self.forms.iter().filter_map(|p| p.instantiate(s)).collect()
    }

    /// Number of forms (`A2`, `A3`, `A7`, `A8` and `A9` have two).
    pub fn form_count(&self) -> usize {
        self.forms.len()
    }
}

pub fn schemas() -> &'static [AxiomSchema] {
    static CELL: OnceLock<Vec<AxiomSchema>> = OnceLock::new();
    CELL.get_or_init(|| {
        SCHEMAS
            .iter()
            .map(|(id, forms)| AxiomSchema {
                id,
                forms: forms
                    .iter()
                    .map(|s| Pattern::from_formula(&parse(s).expect("schema parses")))
                    .collect(),
            })
            .collect()
    })
}

pub fn schema(id: &str) -> Option<&'static AxiomSchema> {
    schemas().iter().find(|s| s.id == id)
}

/// Metavariable bindings, keyed `A`, `B`, `C`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Substitution(pub BTreeMap<String, Formula>);

impl Substitution {
    pub fn get(&self, meta: &str) -> Option<&Formula> {
        self.0.get(meta)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k} = {v}")).collect();
        f.write_str(&parts.join(", "))
    }
}

/// Which optional axioms are available. `A1`..`A11` and all rules always are.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LogicConfig {
    optional: BTreeSet<&'static str>,
}

impl LogicConfig {
    pub fn basic() -> LogicConfig {
        LogicConfig::default()
    }

    pub fn full() -> LogicConfig {
        LogicConfig {
            optional: OPTIONAL_AXIOMS.iter().copied().collect(),
        }
    }

    pub fn with(mut self, id: &str) -> Result<LogicConfig> {
        let known = OPTIONAL_AXIOMS
            .iter()
            .find(|a| **a == id)
            .ok_or_else(|| Error::Format(format!("`{id}` is not an optional axiom")))?;
        self.optional.insert(known);
        Ok(self)
    }

    pub fn enables(&self, id: &str) -> bool {
        AXIOM_IDS[..11].contains(&id) || self.optional.contains(id)
    }

    pub fn optional(&self) -> impl Iterator<Item = &str> {
        self.optional.iter().copied()
    }

    /// The frame conditions that validate the enabled optional axioms.
    pub fn conditions(&self) -> ConditionSet {
        let ids: Vec<&str> = self.optional.iter().copied().collect();
        ConditionSet::for_axioms(&ids)
    }
}

impl FromStr for LogicConfig {
    type Err = Error;

    /// Comma-separated optional axiom ids; `all` enables `A12`..`A16`.
    fn from_str(s: &str) -> Result<Self> {
        let mut cfg = LogicConfig::basic();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part.eq_ignore_ascii_case("all") {
                cfg = LogicConfig::full();
            } else {
                cfg = cfg.with(&part.to_ascii_uppercase())?;
            }
        }
        Ok(cfg)
    }
}

/// The first enabled schema `f` instantiates, in `A1`..`A16` order.
pub fn match_axiom(f: &Formula, cfg: &LogicConfig) -> Option<(&'static str, Substitution)> {
    schemas()
        .iter()
        .filter(|s| cfg.enables(s.id))
        .find_map(|s| s.matches(f).map(|sub| (s.id, sub)))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Rule {
    /// `A, A -> B / B`
    R1,
    /// `A, B / A & B`
    R2,
    /// `A -> B / (C -> A) -> (C -> B)`
    R3,
    /// `A -> B / (B -> C) -> (A -> C)`
    R4,
    /// `A -> B / ~(A -> C) -> ~(B -> C)`
    R5,
    /// `~A -> ~B / ~(C -> A) -> ~(C -> B)`
    R6,
}

impl Rule {
    pub fn arity(self) -> usize {
        match self {
            Rule::R1 | Rule::R2 => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::R1 => "modus ponens",
            Rule::R2 => "adjunction",
            Rule::R3 => "prefixing",
            Rule::R4 => "suffixing",
            Rule::R5 => "negated suffixing",
            Rule::R6 => "negated prefixing",
        }
    }

    /// Whether `conclusion` follows from `premises` by this rule. For `R1`
    /// the premises may come in either order.
    pub fn applies(self, premises: &[&Formula], conclusion: &Formula) -> bool {
        if premises.len() != self.arity() {
            return false;
        }
        let imp = |f: &Formula| match f {
            Formula::Imp(a, b) => Some(((**a).clone(), (**b).clone())),
            _ => None,
        };
        let neg = |f: &Formula| match f {
            Formula::Not(a) => Some((**a).clone()),
            _ => None,
        };
        match self {
            Rule::R1 => {
                let (p, q) = (premises[0], premises[1]);
                let mp = |minor: &Formula, major: &Formula| {
                    matches!(imp(major), Some((a, b)) if a == *minor && b == *conclusion)
                };
                mp(p, q) || mp(q, p)
            }
            Rule::R2 => *conclusion == Formula::and(premises[0].clone(), premises[1].clone()),
            Rule::R3 | Rule::R4 | Rule::R5 | Rule::R6 => {
                let Some((a, b)) = imp(premises[0]) else {
                    return false;
                };
                let Some((lhs, rhs)) = imp(conclusion) else {
                    return false;
                };
                match self {
                    Rule::R3 => match (imp(&lhs), imp(&rhs)) {
                        (Some((c1, a1)), Some((c2, b1))) => c1 == c2 && a1 == a && b1 == b,
                        _ => false,
                    },
                    Rule::R4 => match (imp(&lhs), imp(&rhs)) {
                        (Some((b1, c1)), Some((a1, c2))) => c1 == c2 && a1 == a && b1 == b,
                        _ => false,
                    },
                    Rule::R5 => match (neg(&lhs).and_then(|x| imp(&x)), neg(&rhs).and_then(|x| imp(&x))) {
                        (Some((a1, c1)), Some((b1, c2))) => c1 == c2 && a1 == a && b1 == b,
                        _ => false,
                    },
                    _ => {
                        let (Some(na), Some(nb)) = (neg(&a), neg(&b)) else {
                            return false;
                        };
                        match (neg(&lhs).and_then(|x| imp(&x)), neg(&rhs).and_then(|x| imp(&x))) {
                            (Some((c1, a1)), Some((c2, b1))) => c1 == c2 && a1 == na && b1 == nb,
                            _ => false,
                        }
                    }
                }
            }
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "R1" => Ok(Rule::R1),
            "R2" => Ok(Rule::R2),
            "R3" => Ok(Rule::R3),
            "R4" => Ok(Rule::R4),
            "R5" => Ok(Rule::R5),
            "R6" => Ok(Rule::R6),
            other => Err(Error::Format(format!("unknown rule `{other}`"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Justification {
    Axiom {
        id: String,
        substitution: Option<Substitution>,
    },
    /// Premises are 1-based line numbers.
    Rule { rule: Rule, premises: Vec<usize> },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProofLine {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
}

/// The first bad line (1-based) and why.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rejection {
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

impl Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    /// Reads the line format
    /// `N. formula ; AXIOM id [WITH A = f, B = g]` or
    /// `N. formula ; RULE id FROM i[,j]`. Blank lines and `#` comments are
    /// ignored; line numbers must run 1, 2, 3, ...
    pub fn parse(text: &str) -> Result<Proof> {
        let mut lines = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Format(format!("proof text line {}: {msg}", k + 1));
            let (number, rest) = line.split_once('.').ok_or_else(|| bad("missing `N.` prefix"))?;
            let number: usize = number.trim().parse().map_err(|_| bad("bad line number"))?;
            if number != lines.len() + 1 {
                return Err(bad(&format!("expected line number {}", lines.len() + 1)));
            }
            let (formula, just) = rest
                .rsplit_once(';')
                .ok_or_else(|| bad("missing `;` before the justification"))?;
            let formula = parse(formula.trim()).map_err(|e| bad(&e.to_string()))?;
            let mut words = just.split_whitespace();
            let justification = match words.next().map(str::to_ascii_uppercase).as_deref() {
                Some("AXIOM") => {
                    let id = words.next().ok_or_else(|| bad("missing axiom id"))?.to_ascii_uppercase();
                    let tail: Vec<&str> = words.collect();
                    let substitution = match tail.first() {
                        None => None,
                        Some(w) if w.eq_ignore_ascii_case("WITH") => {
                            let mut sub = Substitution::default();
                            for binding in tail[1..].join(" ").split(',') {
                                let (m, f) = binding
                                    .split_once('=')
                                    .ok_or_else(|| bad("substitution entries read `A = formula`"))?;
                                let m = m.trim();
                                if !METAVARIABLES.contains(&m) {
                                    return Err(bad(&format!("`{m}` is not a metavariable")));
                                }
                                let f = parse(f.trim()).map_err(|e| bad(&e.to_string()))?;
                                sub.0.insert(m.to_string(), f);
                            }
                            Some(sub)
                        }
                        Some(_) => return Err(bad("unexpected text after the axiom id")),
                    };
                    Justification::Axiom { id, substitution }
                }
                Some("RULE") => {
                    let rule: Rule = words.next().ok_or_else(|| bad("missing rule id"))?.parse()?;
                    let from = words.next().ok_or_else(|| bad("missing FROM"))?;
                    if !from.eq_ignore_ascii_case("FROM") {
                        return Err(bad("expected FROM"));
                    }
                    let list: String = words.collect::<Vec<_>>().join("");
                    let premises = list
                        .split(',')
                        .map(|p| p.trim().parse::<usize>().map_err(|_| bad("bad premise number")))
                        .collect::<Result<Vec<_>>>()?;
                    Justification::Rule { rule, premises }
                }
                _ => return Err(bad("justification must start with AXIOM or RULE")),
            };
            lines.push(ProofLine {
                formula,
                justification,
            });
        }
        Ok(Proof { lines })
    }

    /// The line format read by [`Proof::parse`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, l) in self.lines.iter().enumerate() {
            let just = match &l.justification {
                Justification::Axiom { id, substitution } => match substitution {
                    Some(s) => format!("AXIOM {id} WITH {s}"),
                    None => format!("AXIOM {id}"),
                },
                Justification::Rule { rule, premises } => {
                    let ps: Vec<String> = premises.iter().map(usize::to_string).collect();
                    format!("RULE {rule} FROM {}", ps.join(","))
                }
            };
            out.push_str(&format!("{}. {} ; {}\n", i + 1, l.formula, just));
        }
        out
    }
}

pub fn check_proof(proof: &Proof, cfg: &LogicConfig) -> std::result::Result<(), Rejection> {
    for (i, line) in proof.lines.iter().enumerate() {
        let number = i + 1;
        let reject = |reason: String| Rejection {
            line: number,
            reason,
        };
        match &line.justification {
            Justification::Axiom { id, substitution } => {
                let schema = schema(id).ok_or_else(|| reject(format!("unknown axiom `{id}`")))?;
                if !cfg.enables(id) {
                    return Err(reject(format!("axiom {id} is not enabled")));
                }
                if schema.matches(&line.formula).is_none() {
                    return Err(reject(format!("not an instance of {id}")));
                }
                if let Some(s) = substitution {
                    if !schema.instances(s).contains(&line.formula) {
                        return Err(reject(format!("not the instance of {id} under {s}")));
                    }
                }
            }
            Justification::Rule { rule, premises } => {
                if premises.len() != rule.arity() {
                    return Err(reject(format!(
                        "{rule} takes {} premise(s), got {}",
                        rule.arity(),
                        premises.len()
                    )));
                }
                if let Some(&p) = premises.iter().find(|&&p| p == 0 || p >= number) {
                    return Err(reject(format!("premise {p} is not an earlier line")));
                }
                let ps: Vec<&Formula> = premises.iter().map(|&p| &proof.lines[p - 1].formula).collect();
                if !rule.applies(&ps, &line.formula) {
                    return Err(reject(format!("{rule} ({}) does not yield this formula", rule.name())));
                }
            }
        }
    }
    Ok(())
}

/// `{ C : (A -> C) in x and A in y }`
pub fn ogreaterthan(x: &BTreeSet<Formula>, y: &BTreeSet<Formula>) -> BTreeSet<Formula> {
    x.iter()
        .filter_map(|f| match f {
            Formula::Imp(a, c) if y.contains(a) => Some((**c).clone()),
            _ => None,
        })
        .collect()
}

/// `{ ~(A -> C) : A in x and ~C in y }`
pub fn ovee(x: &BTreeSet<Formula>, y: &BTreeSet<Formula>) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for a in x {
        for g in y {
            if let Formula::Not(c) = g {
                out.insert(Formula::not(Formula::imp(a.clone(), (**c).clone())));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<Formula> {
        items.iter().map(|s| f(s)).collect()
    }

    #[test]
    fn axiom_matching() {
        let cfg = LogicConfig::basic();
        let (id, sub) = match_axiom(&f("(p & q) -> p"), &cfg).unwrap();
        assert_eq!(id, "A3");
        assert_eq!(sub.get("A"), Some(&f("p")));
        assert_eq!(sub.get("B"), Some(&f("q")));
        let (id, sub) = match_axiom(&f("p -> p"), &cfg).unwrap();
        assert_eq!((id, sub.get("A")), ("A1", Some(&f("p"))));
        assert!(match_axiom(&f("p -> q"), &cfg).is_none());
        assert_eq!(match_axiom(&f("q -> p | q"), &cfg).unwrap().0, "A2");
        assert_eq!(match_axiom(&f("~~(p -> q) -> (p -> q)"), &cfg).unwrap().0, "A9");
    }

    #[test]
    fn optional_axioms_need_enabling() {
        let mp = f("p & (p -> q) -> q");
        assert!(match_axiom(&mp, &LogicConfig::basic()).is_none());
        assert_eq!(match_axiom(&mp, &LogicConfig::full()).unwrap().0, "A12");
        let cfg: LogicConfig = "a14, A16".parse().unwrap();
        assert!(cfg.enables("A14") && cfg.enables("A16") && !cfg.enables("A12"));
        assert!("A9".parse::<LogicConfig>().is_err());
    }

    #[test]
    fn every_schema_form_matches_its_own_text() {
        for (id, forms) in SCHEMAS {
            for form in forms {
                let g = f(form);
                let cfg = LogicConfig::full();
                let (found, sub) = match_axiom(&g, &cfg).unwrap();
                assert!(schema(id).unwrap().matches(&g).is_some(), "{id} {form}");
                assert!(schema(found).unwrap().instances(&sub).contains(&g));
            }
        }
    }

    #[test]
    fn repeated_metavariables_must_agree() {
        assert!(schema("A1").unwrap().matches(&f("p -> q")).is_none());
        assert!(schema("A12").unwrap().matches(&f("p & (q -> r) -> r")).is_none());
    }

    const IDEMPOTENCE: &str = "\
1. A -> A ; AXIOM A1
2. A -> A ; AXIOM A1
3. (A -> A) & (A -> A) ; RULE R2 FROM 1,2
4. (A -> A) & (A -> A) -> (A -> A & A) ; AXIOM A5
5. A -> A & A ; RULE R1 FROM 3,4
";

    #[test]
    fn idempotence_proof_accepts() {
        let p = Proof::parse(IDEMPOTENCE).unwrap();
        assert_eq!(p.lines.len(), 5);
        assert_eq!(check_proof(&p, &LogicConfig::basic()), Ok(()));
        assert_eq!(p.conclusion(), Some(&f("A -> A & A")));
        assert_eq!(Proof::parse(&p.render()).unwrap(), p);
    }

    #[test]
    fn bad_lines_reject() {
        let p = Proof::parse("1. p ; AXIOM A1").unwrap();
        let r = check_proof(&p, &LogicConfig::basic()).unwrap_err();
        assert_eq!(r.line, 1);
        assert!(r.reason.contains("not an instance"));

        let p = Proof::parse("1. p -> p ; AXIOM A1\n2. p ; RULE R1 FROM 1,3").unwrap();
        assert_eq!(check_proof(&p, &LogicConfig::basic()).unwrap_err().line, 2);
        let p = Proof::parse("1. p -> p ; AXIOM A1\n2. p ; RULE R1 FROM 1").unwrap();
        assert_eq!(check_proof(&p, &LogicConfig::basic()).unwrap_err().line, 2);
        let p = Proof::parse("1. p & (p -> q) -> q ; AXIOM A12").unwrap();
        assert!(check_proof(&p, &LogicConfig::basic()).is_err());
        assert!(check_proof(&p, &LogicConfig::full()).is_ok());
    }

    #[test]
    fn substitutions_are_checked() {
        let ok = Proof::parse("1. p & q -> q ; AXIOM A3 WITH A = p, B = q").unwrap();
        assert!(check_proof(&ok, &LogicConfig::basic()).is_ok());
        let bad = Proof::parse("1. p & q -> q ; AXIOM A3 WITH A = q, B = p").unwrap();
        assert_eq!(check_proof(&bad, &LogicConfig::basic()).unwrap_err().line, 1);
    }

    #[test]
    fn rule_applications() {
        let ab = f("p -> q");
        assert!(Rule::R5.applies(&[&ab], &f("~(p -> r) -> ~(q -> r)")));
        assert!(!Rule::R5.applies(&[&ab], &f("~(q -> r) -> ~(p -> r)")));
        assert!(Rule::R3.applies(&[&ab], &f("(r -> p) -> (r -> q)")));
        assert!(Rule::R4.applies(&[&ab], &f("(q -> r) -> (p -> r)")));
        assert!(!Rule::R4.applies(&[&ab], &f("(q -> r) -> (p -> s)")));
        let nn = f("~p -> ~q");
        assert!(Rule::R6.applies(&[&nn], &f("~(r -> p) -> ~(r -> q)")));
        assert!(!Rule::R6.applies(&[&ab], &f("~(r -> p) -> ~(r -> q)")));
        assert!(Rule::R1.applies(&[&ab, &f("p")], &f("q")));
        assert!(Rule::R1.applies(&[&f("p"), &ab], &f("q")));
        assert!(Rule::R2.applies(&[&f("p"), &f("q")], &f("p & q")));
        assert!(!Rule::R2.applies(&[&f("p"), &f("q")], &f("q & p")));
    }

    #[test]
    fn parse_errors() {
        assert!(Proof::parse("2. p -> p ; AXIOM A1").is_err());
        assert!(Proof::parse("1. p -> p AXIOM A1").is_err());
        assert!(Proof::parse("1. p -> p ; LEMMA").is_err());
        assert!(Proof::parse("1. p -> p ; RULE R9 FROM 1").is_err());
        assert!(Proof::parse("1. p -> ; AXIOM A1").is_err());
        let p = Proof::parse("# comment\n\n1. p -> p ; AXIOM A1 # trailing\n").unwrap();
        assert_eq!(p.lines.len(), 1);
    }

    #[test]
    fn set_operations() {
        assert_eq!(ogreaterthan(&set(&["p -> q"]), &set(&["p"])), set(&["q"]));
        assert_eq!(ogreaterthan(&set(&["p -> q", "r -> s"]), &set(&["p", "r"])), set(&["q", "s"]));
        assert!(ogreaterthan(&set(&["p & q"]), &set(&["p"])).is_empty());
        assert_eq!(ovee(&set(&["p"]), &set(&["~q"])), set(&["~(p -> q)"]));
        assert!(ovee(&set(&["p"]), &set(&["q"])).is_empty());
        assert_eq!(
            ovee(&set(&["p", "r"]), &set(&["~q", "~s"])),
            set(&["~(p -> q)", "~(p -> s)", "~(r -> q)", "~(r -> s)"])
        );
    }
}
