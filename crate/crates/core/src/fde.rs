//! Four-valued truth values and evaluation of the `->`-free fragment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::syntax::Formula;

/// A subset of `{T, F}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct TruthValue {
    pub t: bool,
    pub f: bool,
}

impl TruthValue {
    pub const N: TruthValue = TruthValue { t: false, f: false };
    pub const T: TruthValue = TruthValue { t: true, f: false };
    pub const F: TruthValue = TruthValue { t: false, f: true };
    pub const TF: TruthValue = TruthValue { t: true, f: true };

    /// In the order `N, T, F, TF`.
    pub const ALL: [TruthValue; 4] = [Self::N, Self::T, Self::F, Self::TF];

    pub fn new(t: bool, f: bool) -> TruthValue {
        TruthValue { t, f }
    }

    pub fn designated(self) -> bool {
        self.t
    }

    pub fn negate(self) -> TruthValue {
        TruthValue { t: self.f, f: self.t }
    }

    pub fn and(self, other: TruthValue) -> TruthValue {
        TruthValue {
            t: self.t && other.t,
            f: self.f || other.f,
        }
    }

    pub fn or(self, other: TruthValue) -> TruthValue {
        TruthValue {
            t: self.t || other.t,
            f: self.f && other.f,
        }
    }

    pub fn token(self) -> &'static str {
        match (self.t, self.f) {
            (false, false) => "N",
            (true, false) => "T",
            (false, true) => "F",
            (true, true) => "TF",
        }
    }

    /// Position in [`TruthValue::ALL`].
    pub fn index(self) -> usize {
        match (self.t, self.f) {
            (false, false) => 0,
            (true, false) => 1,
            (false, true) => 2,
            (true, true) => 3,
        }
    }
}

impl PartialOrd for TruthValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TruthValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.index().cmp(&other.index())
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for TruthValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "N" => Ok(Self::N),
            "T" => Ok(Self::T),
            "F" => Ok(Self::F),
            "TF" => Ok(Self::TF),
            other => Err(Error::Format(format!(
                "unknown truth value `{other}` (expected N, T, F or TF)"
            ))),
        }
    }
}

impl Serialize for TruthValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.token())
    }
}

impl<'de> Deserialize<'de> for TruthValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Atom name to truth value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(pub BTreeMap<String, TruthValue>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn get(&self, atom: &str) -> Option<TruthValue> {
        self.0.get(atom).copied()
    }

    pub fn set(&mut self, atom: &str, v: TruthValue) {
        self.0.insert(atom.to_string(), v);
    }

    pub fn with(mut self, atom: &str, v: TruthValue) -> Assignment {
        self.set(atom, v);
        self
    }

    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    /// All `4^n` assignments over `atoms`, in lexicographic order of the value
    /// vectors (first atom most significant, `N < T < F < TF`).
    pub fn enumerate(atoms: &[String]) -> AssignmentIter {
        AssignmentIter {
            atoms: atoms.to_vec(),
            digits: vec![0; atoms.len()],
            done: false,
        }
    }
}

impl FromIterator<(String, TruthValue)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (String, TruthValue)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

pub struct AssignmentIter {
    atoms: Vec<String>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for AssignmentIter {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.done {
            return None;
        }
        let out = self
            .atoms
            .iter()
            .zip(&self.digits)
            .map(|(a, &d)| (a.clone(), TruthValue::ALL[d]))
            .collect();
        // odometer, last atom fastest
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < 4 {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}

pub fn eval_formula(a: &Assignment, f: &Formula) -> Result<TruthValue> {
    match f {
        Formula::Atom(name) => a.get(name).ok_or_else(|| Error::UnboundAtom(name.clone())),
        Formula::Not(g) => Ok(eval_formula(a, g)?.negate()),
        Formula::And(l, r) => Ok(eval_formula(a, l)?.and(eval_formula(a, r)?)),
        Formula::Or(l, r) => Ok(eval_formula(a, l)?.or(eval_formula(a, r)?)),
        Formula::Imp(..) => Err(Error::ArrowInFragment(f.render())),
    }
}

pub fn ensure_arrow_free(f: &Formula) -> Result<()> {
    if f.contains_imp() {
        Err(Error::ArrowInFragment(f.render()))
    } else {
        Ok(())
    }
}

/// Atoms of several formulas, sorted.
pub fn atoms_of<'a, I: IntoIterator<Item = &'a Formula>>(fs: I) -> Vec<String> {
    let mut set = BTreeSet::new();
    for f in fs {
        set.extend(f.atoms());
    }
    set.into_iter().collect()
}

/// Four-valued entailment: every assignment designating `a` designates `b`.
pub fn fde_entails(a: &Formula, b: &Formula) -> Result<bool> {
    Ok(fde_counterexample(a, b)?.is_none())
}

/// The first assignment (in enumeration order) designating `a` but not `b`.
pub fn fde_counterexample(a: &Formula, b: &Formula) -> Result<Option<Assignment>> {
    ensure_arrow_free(a)?;
    ensure_arrow_free(b)?;
    for asg in Assignment::enumerate(&atoms_of([a, b])) {
        if eval_formula(&asg, a)?.t && !eval_formula(&asg, b)?.t {
            return Ok(Some(asg));
        }
    }
    Ok(None)
}
