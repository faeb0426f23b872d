//! Bets on `->`-free formulas, net gains over four-valued assignments, sure
//! loss detection, and stake recipes that exploit incoherent quotients.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fde::{atoms_of, ensure_arrow_free, eval_formula, fde_entails, Assignment};
use crate::probability::{format_rational, Rational, StateDistribution};
use crate::syntax::Formula;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum BetKind {
    Plain,
    Conditional,
    Reversed,
    ReversedConditional,
}

impl BetKind {
    pub fn token(self) -> &'static str {
        match self {
            BetKind::Plain => "plain",
            BetKind::Conditional => "conditional",
            BetKind::Reversed => "reversed",
            BetKind::ReversedConditional => "reversed-conditional",
        }
    }

    pub fn is_conditional(self) -> bool {
        matches!(self, BetKind::Conditional | BetKind::ReversedConditional)
    }

    pub fn is_reversed(self) -> bool {
        matches!(self, BetKind::Reversed | BetKind::ReversedConditional)
    }
}

impl fmt::Display for BetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for BetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "plain" => Ok(BetKind::Plain),
            "conditional" => Ok(BetKind::Conditional),
            "reversed" => Ok(BetKind::Reversed),
            "reversed-conditional" => Ok(BetKind::ReversedConditional),
            other => Err(Error::InvalidBet(format!("unknown bet kind `{other}`"))),
        }
    }
}

/// A bet from the bettor's side. The stake may be negative.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bet {
    kind: BetKind,
    target: Formula,
    condition: Option<Formula>,
    quotient: Rational,
    stake: Rational,
}

impl Bet {
    pub fn new(
        kind: BetKind,
        target: Formula,
        condition: Option<Formula>,
        quotient: Rational,
        stake: Rational,
    ) -> Result<Bet> {
        if kind.is_conditional() != condition.is_some() {
            return Err(Error::InvalidBet(format!(
                "a {kind} bet {} a condition",
                if kind.is_conditional() { "needs" } else { "takes no" }
            )));
        }
        ensure_arrow_free(&target)?;
        if let Some(c) = &condition {
            ensure_arrow_free(c)?;
        }
        Ok(Bet {
            kind,
            target,
            condition,
            quotient,
            stake,
        })
    }

    /// Panics if `target` contains `->`.
    pub fn plain(target: Formula, quotient: Rational, stake: Rational) -> Bet {
        Bet::new(BetKind::Plain, target, None, quotient, stake).expect("arrow-free target")
    }

    pub fn conditional(target: Formula, condition: Formula, quotient: Rational, stake: Rational) -> Bet {
        Bet::new(BetKind::Conditional, target, Some(condition), quotient, stake)
            .expect("arrow-free target and condition")
    }

    pub fn reversed(target: Formula, quotient: Rational, stake: Rational) -> Bet {
        Bet::new(BetKind::Reversed, target, None, quotient, stake).expect("arrow-free target")
    }

    pub fn reversed_conditional(
        target: Formula,
        condition: Formula,
        quotient: Rational,
        stake: Rational,
    ) -> Bet {
        Bet::new(BetKind::ReversedConditional, target, Some(condition), quotient, stake)
            .expect("arrow-free target and condition")
    }

    pub fn kind(&self) -> BetKind {
        self.kind
    }

    pub fn target(&self) -> &Formula {
        &self.target
    }

    pub fn condition(&self) -> Option<&Formula> {
        self.condition.as_ref()
    }

    pub fn quotient(&self) -> &Rational {
        &self.quotient
    }

    pub fn stake(&self) -> &Rational {
        &self.stake
    }

    fn formulas(&self) -> impl Iterator<Item = &Formula> {
        std::iter::once(&self.target).chain(self.condition.iter())
    }
}

impl fmt::Display for Bet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bet on {}", self.kind, self.target)?;
        if let Some(c) = &self.condition {
            write!(f, " given {c}")?;
        }
        write!(
            f,
            " at quotient {} with stake {}",
            format_rational(&self.quotient),
            format_rational(&self.stake)
        )
    }
}

/// The bettor's gain on `b` at assignment `a`.
pub fn bet_gain(b: &Bet, a: &Assignment) -> Result<Rational> {
    if let Some(c) = &b.condition {
        if !eval_formula(a, c)?.t {
            return Ok(Rational::zero());
        }
    }
    let won = eval_formula(a, &b.target)?.t;
    let q = &b.quotient;
    let s = &b.stake;
    Ok(match (b.kind.is_reversed(), won) {
        (false, true) | (true, false) => (Rational::one() - q) * s,
        (false, false) | (true, true) => -(q * s),
    })
}

/// Net gain at every assignment to the atoms the bets mention.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GainProfile {
    pub atoms: Vec<String>,
    pub gains: Vec<(Assignment, Rational)>,
}

impl GainProfile {
    pub fn min(&self) -> Rational {
        self.gains.iter().map(|(_, g)| g).min().cloned().unwrap_or_default()
    }

    pub fn max(&self) -> Rational {
        self.gains.iter().map(|(_, g)| g).max().cloned().unwrap_or_default()
    }

    /// The gain if it is the same everywhere.
    pub fn constant(&self) -> Option<Rational> {
        let first = &self.gains.first()?.1;
        self.gains.iter().all(|(_, g)| g == first).then(|| first.clone())
    }

    pub fn gain_at(&self, a: &Assignment) -> Option<&Rational> {
        self.gains.iter().find(|(b, _)| b == a).map(|(_, g)| g)
    }
}

pub fn net_gain_profile(bets: &[Bet]) -> Result<GainProfile> {
    let atoms = atoms_of(bets.iter().flat_map(Bet::formulas));
    let mut gains = Vec::new();
    for a in Assignment::enumerate(&atoms) {
        let mut total = Rational::zero();
        for b in bets {
            total += bet_gain(b, &a)?;
        }
        gains.push((a, total));
    }
    Ok(GainProfile { atoms, gains })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DutchBookCheck {
    /// Every assignment gives the bettor a strictly negative net gain.
    pub sure_loss: bool,
    /// The best net gain the bettor can hope for.
    pub max_gain: Rational,
}

pub fn is_dutch_book(bets: &[Bet]) -> Result<DutchBookCheck> {
    let profile = net_gain_profile(bets)?;
    let max_gain = profile.max();
    Ok(DutchBookCheck {
        sure_loss: max_gain.is_negative(),
        max_gain,
    })
}

/// Mass-weighted net gain under `d`.
pub fn expected_net_gain(d: &StateDistribution, bets: &[Bet]) -> Result<Rational> {
    let mut total = Rational::zero();
    for (a, m) in d.masses() {
        for b in bets {
            total += bet_gain(b, a)? * m;
        }
    }
    Ok(total)
}

/// How a quote is to be settled.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QuoteKind {
    Plain,
    /// Called off unless the condition is designated.
    Conditional(Formula),
    /// The quotient announced for after learning the formula.
    Updated(Formula),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Quote {
    pub target: Formula,
    pub kind: QuoteKind,
    pub quotient: Rational,
}

impl Quote {
    pub fn plain(target: Formula, quotient: Rational) -> Quote {
        Quote {
            target,
            kind: QuoteKind::Plain,
            quotient,
        }
    }

    pub fn conditional(target: Formula, condition: Formula, quotient: Rational) -> Quote {
        Quote {
            target,
            kind: QuoteKind::Conditional(condition),
            quotient,
        }
    }

    pub fn updated(target: Formula, on: Formula, quotient: Rational) -> Quote {
        Quote {
            target,
            kind: QuoteKind::Updated(on),
            quotient,
        }
    }
}

/// An incoherence in a set of quotients that a bookmaker can exploit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ViolationDescriptor {
    /// A quotient `p` for `a` outside `[0, 1]`.
    Range { a: Formula, p: Rational },
    /// Two different quotients `p`, `q` for the same `a`.
    TwoQuotients { a: Formula, p: Rational, q: Rational },
    /// `a` entails `b` but `p(a) = p > q = p(b)`.
    Monotonicity { a: Formula, b: Formula, p: Rational, q: Rational },
    /// Quotients `p, q, r, s` for `a, b, a & b, a | b` with `p + q != r + s`.
    Additivity {
        a: Formula,
        b: Formula,
        p: Rational,
        q: Rational,
        r: Rational,
        s: Rational,
    },
    /// Quotients `p` for `b`, `q` for `a & b` and `r` for `a` given `b`, with `pr != q`.
    Conditional {
        a: Formula,
        b: Formula,
        p: Rational,
        q: Rational,
        r: Rational,
    },
    /// As `Conditional`, but `r` is the quotient announced for `a` once `b`
    /// is learned; requires `p > q > 0`.
    Diachronic {
        a: Formula,
        b: Formula,
        p: Rational,
        q: Rational,
        r: Rational,
    },
}

impl ViolationDescriptor {
    /// The probability axiom broken: `i`..`iv`, or `update` for the
    /// announced-update case.
    pub fn axiom(&self) -> &'static str {
        match self {
            ViolationDescriptor::Range { .. } | ViolationDescriptor::TwoQuotients { .. } => "i",
            ViolationDescriptor::Monotonicity { .. } => "ii",
            ViolationDescriptor::Additivity { .. } => "iii",
            ViolationDescriptor::Conditional { .. } => "iv",
            ViolationDescriptor::Diachronic { .. } => "update",
        }
    }
}

impl fmt::Display for ViolationDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = format_rational;
        match self {
            ViolationDescriptor::Range { a, p } => {
                write!(f, "axiom i: quotient {} for {a} is outside [0, 1]", r(p))
            }
            ViolationDescriptor::TwoQuotients { a, p, q } => {
                write!(f, "axiom i: {a} is quoted at both {} and {}", r(p), r(q))
            }
            ViolationDescriptor::Monotonicity { a, b, p, q } => write!(
                f,
                "axiom ii: {a} entails {b} but is quoted higher ({} > {})",
                r(p),
                r(q)
            ),
            ViolationDescriptor::Additivity { a, b, p, q, r: rr, s } => write!(
                f,
                "axiom iii: q({a}) + q({b}) = {} but q({}) + q({}) = {}",
                r(&(p + q)),
                Formula::and(a.clone(), b.clone()),
                Formula::or(a.clone(), b.clone()),
                r(&(rr + s))
            ),
            ViolationDescriptor::Conditional { a, b, p, q, r: rr } => write!(
                f,
                "axiom iv: q({a} | {b}) = {} but q({a} & {b}) / q({b}) = {} / {}",
                r(rr),
                r(q),
                r(p)
            ),
            ViolationDescriptor::Diachronic { a, b, p, q, r: rr } => write!(
                f,
                "announced update: {a} after learning {b} quoted at {}, not {} / {}",
                r(rr),
                r(q),
                r(p)
            ),
        }
    }
}

/// Bets built from a violation, with the signed stake `S` they use.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Recipe {
    pub stake: Rational,
    pub bets: Vec<Bet>,
}

fn signed(magnitude: &Rational, positive: bool) -> Rational {
    if positive {
        magnitude.clone()
    } else {
        -magnitude.clone()
    }
}

/// The bets that guarantee the bettor a loss, with stake size `magnitude`.
pub fn construct_violation_stakes(v: &ViolationDescriptor, magnitude: &Rational) -> Result<Recipe> {
    if !magnitude.is_positive() {
        return Err(Error::InvalidBet("stake size must be positive".into()));
    }
    let none = |why: String| Err(Error::NoViolation(why));
    let one = Rational::one;
    match v {
        ViolationDescriptor::Range { a, p } => {
            if !p.is_negative() && *p <= one() {
                return none(format!("quotient {} is in [0, 1]", format_rational(p)));
            }
            let s = signed(magnitude, *p > one());
            Ok(Recipe {
                bets: vec![Bet::plain(a.clone(), p.clone(), s.clone())],
                stake: s,
            })
        }
        ViolationDescriptor::TwoQuotients { a, p, q } => {
            if p == q {
                return none("the two quotients agree".into());
            }
            let s = signed(magnitude, p > q);
            Ok(Recipe {
                bets: vec![
                    Bet::plain(a.clone(), p.clone(), s.clone()),
                    Bet::plain(a.clone(), q.clone(), -s.clone()),
                ],
                stake: s,
            })
        }
        ViolationDescriptor::Monotonicity { a, b, p, q } => {
            if !fde_entails(a, b)? {
                return Err(Error::Precondition(format!("{a} does not entail {b}")));
            }
            if p <= q {
                return none(format!("q({a}) <= q({b})"));
            }
            let s = magnitude.clone();
            Ok(Recipe {
                bets: vec![
                    Bet::plain(a.clone(), p.clone(), s.clone()),
                    Bet::plain(b.clone(), q.clone(), -s.clone()),
                ],
                stake: s,
            })
        }
        ViolationDescriptor::Additivity { a, b, p, q, r, s } => {
            let gap = (p + q) - (r + s);
            if gap.is_zero() {
                return none("p + q = r + s".into());
            }
            let st = signed(magnitude, gap.is_positive());
            Ok(Recipe {
                bets: vec![
                    Bet::plain(a.clone(), p.clone(), st.clone()),
                    Bet::plain(b.clone(), q.clone(), st.clone()),
                    Bet::plain(Formula::and(a.clone(), b.clone()), r.clone(), -st.clone()),
                    Bet::plain(Formula::or(a.clone(), b.clone()), s.clone(), -st.clone()),
                ],
                stake: st,
            })
        }
        ViolationDescriptor::Conditional { a, b, p, q, r }
        | ViolationDescriptor::Diachronic { a, b, p, q, r } => {
            if matches!(v, ViolationDescriptor::Diachronic { .. })
                && !(p > q && q.is_positive())
            {
                return Err(Error::Precondition(
                    "the announced-update recipe needs p > q > 0".into(),
                ));
            }
            let gap = p * r - q;
            if gap.is_zero() {
                return none("pr = q".into());
            }
            let s = signed(magnitude, gap.is_positive());
            // The updated bet is only placed once b is learned, so it settles
            // like a bet conditional on b.
            Ok(Recipe {
                bets: vec![
                    Bet::plain(b.clone(), p.clone(), r * &s),
                    Bet::plain(Formula::and(a.clone(), b.clone()), q.clone(), -s.clone()),
                    Bet::conditional(a.clone(), b.clone(), r.clone(), s.clone()),
                ],
                stake: s,
            })
        }
    }
}

/// The first exploitable incoherence among `quotes`, checked in the order
/// range, repeated quotes, monotonicity, additivity, conditionals, announced
/// updates.
pub fn find_violation(quotes: &[Quote]) -> Result<Option<ViolationDescriptor>> {
    for q in quotes {
        ensure_arrow_free(&q.target)?;
        match &q.kind {
            QuoteKind::Conditional(c) | QuoteKind::Updated(c) => ensure_arrow_free(c)?,
            QuoteKind::Plain => {}
        }
    }
    let plain: Vec<(&Formula, &Rational)> = quotes
        .iter()
        .filter(|q| q.kind == QuoteKind::Plain)
        .map(|q| (&q.target, &q.quotient))
        .collect();
    let lookup = |f: &Formula| plain.iter().find(|(g, _)| *g == f).map(|(_, v)| (*v).clone());

    for (a, p) in &plain {
        if p.is_negative() || **p > Rational::one() {
            return Ok(Some(ViolationDescriptor::Range {
                a: (*a).clone(),
                p: (*p).clone(),
            }));
        }
    }
    for (i, (a, p)) in plain.iter().enumerate() {
        if let Some((_, q)) = plain[i + 1..].iter().find(|(b, q)| b == a && q != p) {
            return Ok(Some(ViolationDescriptor::TwoQuotients {
                a: (*a).clone(),
                p: (*p).clone(),
                q: (*q).clone(),
            }));
        }
    }
    for (a, p) in &plain {
        for (b, q) in &plain {
            if p > q && fde_entails(a, b)? {
                return Ok(Some(ViolationDescriptor::Monotonicity {
                    a: (*a).clone(),
                    b: (*b).clone(),
                    p: (*p).clone(),
                    q: (*q).clone(),
                }));
            }
        }
    }
    for (i, (a, p)) in plain.iter().enumerate() {
        for (b, q) in &plain[i + 1..] {
            let meet = lookup(&Formula::and((*a).clone(), (*b).clone()));
            let join = lookup(&Formula::or((*a).clone(), (*b).clone()));
            if let (Some(r), Some(s)) = (meet, join) {
                if *p + *q != &r + &s {
                    return Ok(Some(ViolationDescriptor::Additivity {
                        a: (*a).clone(),
                        b: (*b).clone(),
                        p: (*p).clone(),
                        q: (*q).clone(),
                        r,
                        s,
                    }));
                }
            }
        }
    }
    for diachronic in [false, true] {
        for quote in quotes {
            let b = match (&quote.kind, diachronic) {
                (QuoteKind::Conditional(b), false) | (QuoteKind::Updated(b), true) => b,
                _ => continue,
            };
            let a = &quote.target;
            let (Some(p), Some(q)) = (lookup(b), lookup(&Formula::and(a.clone(), b.clone()))) else {
                continue;
            };
            let r = quote.quotient.clone();
            if &p * &r == q {
                continue;
            }
            let (a, b) = (a.clone(), b.clone());
            if !diachronic {
                return Ok(Some(ViolationDescriptor::Conditional { a, b, p, q, r }));
            }
            if p > q && q.is_positive() {
                return Ok(Some(ViolationDescriptor::Diachronic { a, b, p, q, r }));
            }
        }
    }
    Ok(None)
}
