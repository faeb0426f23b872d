//! Models: a frame plus an atomic valuation, with full evaluation of `->`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::fde::{Assignment, TruthValue};
use crate::frames::Frame;
use crate::syntax::Formula;

/// Most states a model may have; extensions are packed into `u64` masks.
pub const MAX_MODEL_STATES: usize = 64;

/// The extension of a formula in a model: bit `x` of `t` is set iff
/// `T` is in the value at state `x`, likewise for `f`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Extension {
    pub t: u64,
    pub f: u64,
}

impl Extension {
    pub fn at(self, x: usize) -> TruthValue {
        TruthValue::new(self.t >> x & 1 == 1, self.f >> x & 1 == 1)
    }

    pub fn not(self) -> Extension {
        Extension {
            t: self.f,
            f: self.t,
        }
    }

    pub fn and(self, o: Extension) -> Extension {
        Extension {
            t: self.t & o.t,
            f: self.f | o.f,
        }
    }

    pub fn or(self, o: Extension) -> Extension {
        Extension {
            t: self.t | o.t,
            f: self.f & o.f,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Polarity {
    T,
    F,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::T => "T",
            Polarity::F => "F",
        })
    }
}

/// `polarity` is in the value of `formula` at `lower` but not at `upper`,
/// although `lower <= upper`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PersistenceViolation {
    pub lower: usize,
    pub upper: usize,
    pub formula: Formula,
    pub polarity: Polarity,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Model {
    frame: Frame,
    atoms: Vec<String>,
    /// `valuation[state][atom]`
    valuation: Vec<Vec<TruthValue>>,
    atom_ext: BTreeMap<String, Extension>,
    // z-masks: bit z of r1z[x * n + y] is set iff R1 x y z
    r1z: Vec<u64>,
    r2z: Vec<u64>,
}

impl Model {
    /// `valuation[state][i]` is the value of `atoms[i]`. The atomic
    /// persistence constraints are not enforced here; see
    /// [`Model::atomic_violations`].
    pub fn new(frame: Frame, atoms: Vec<String>, valuation: Vec<Vec<TruthValue>>) -> Result<Model> {
        let n = frame.len();
        if n > MAX_MODEL_STATES {
            return Err(Error::BoundsExceeded(format!(
                "models are limited to {MAX_MODEL_STATES} states, got {n}"
            )));
        }
        if valuation.len() != n {
            return Err(Error::Format(format!(
                "valuation covers {} states, frame has {n}",
                valuation.len()
            )));
        }
        for (x, row) in valuation.iter().enumerate() {
            if row.len() != atoms.len() {
                return Err(Error::Format(format!(
                    "state `{}` values {} atoms, expected {}",
                    frame.name(x),
                    row.len(),
                    atoms.len()
                )));
            }
        }
        let mut atom_ext = BTreeMap::new();
        for (i, a) in atoms.iter().enumerate() {
            let mut e = Extension::default();
            for (x, row) in valuation.iter().enumerate() {
                e.t |= (row[i].t as u64) << x;
                e.f |= (row[i].f as u64) << x;
            }
            if atom_ext.insert(a.clone(), e).is_some() {
                return Err(Error::Format(format!("duplicate atom `{a}`")));
            }
        }
        let mut r1z = vec![0u64; n * n];
        let mut r2z = vec![0u64; n * n];
        for x in 0..n {
            for &(y, z) in frame.r1_pairs(x) {
                r1z[x * n + y] |= 1 << z;
            }
            for &(y, z) in frame.r2_pairs(x) {
                r2z[x * n + y] |= 1 << z;
            }
        }
        Ok(Model {
            frame,
            atoms,
            valuation,
            atom_ext,
            r1z,
            r2z,
        })
    }

    /// One assignment per state, in state order; every state must value the
    /// same atoms.
    pub fn from_assignments(frame: Frame, per_state: &[Assignment]) -> Result<Model> {
        let atoms: Vec<String> = per_state
            .first()
            .map(|a| a.atoms().map(String::from).collect())
            .unwrap_or_default();
        let mut valuation = Vec::with_capacity(per_state.len());
        for (x, asg) in per_state.iter().enumerate() {
            if asg.0.len() != atoms.len() || asg.atoms().zip(&atoms).any(|(a, b)| a != b) {
                return Err(Error::Format(format!(
                    "state `{}` does not value exactly the atoms {:?}",
                    frame.names().get(x).map(String::as_str).unwrap_or("?"),
                    atoms
                )));
            }
            valuation.push(asg.0.values().copied().collect());
        }
        Model::new(frame, atoms, valuation)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn state(&self, name: &str) -> Result<usize> {
        self.frame.index_of(name)
    }

    pub fn value(&self, state: usize, atom: &str) -> Option<TruthValue> {
        let i = self.atoms.iter().position(|a| a == atom)?;
        self.valuation.get(state).map(|row| row[i])
    }

    pub fn assignment(&self, state: usize) -> Assignment {
        self.atoms
            .iter()
            .cloned()
            .zip(self.valuation[state].iter().copied())
            .collect()
    }

    pub fn atom_extension(&self, atom: &str) -> Result<Extension> {
        self.atom_ext
            .get(atom)
            .copied()
            .ok_or_else(|| Error::UnboundAtom(atom.to_string()))
    }

    fn all_states(&self) -> u64 {
        let n = self.len();
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    fn l_mask(&self) -> u64 {
        self.frame.l_states().fold(0, |m, x| m | 1 << x)
    }

    /// The extension of `a -> b` given extensions of `a` and `b`.
    pub fn imp(&self, a: Extension, b: Extension) -> Extension {
        let n = self.len();
        let mut out = Extension::default();
        for x in 0..n {
            let mut t = true;
            let mut f = false;
            let mut ys = a.t;
            while ys != 0 {
                let y = ys.trailing_zeros() as usize;
                ys &= ys - 1;
                if self.r1z[x * n + y] & !b.t != 0 {
                    t = false;
                }
                if self.r2z[x * n + y] & b.f != 0 {
                    f = true;
                }
            }
            out.t |= (t as u64) << x;
            out.f |= (f as u64) << x;
        }
        out
    }

    pub fn extension(&self, f: &Formula) -> Result<Extension> {
        Ok(match f {
            Formula::Atom(a) => self.atom_extension(a)?,
            Formula::Not(g) => self.extension(g)?.not(),
            Formula::And(l, r) => self.extension(l)?.and(self.extension(r)?),
            Formula::Or(l, r) => self.extension(l)?.or(self.extension(r)?),
            Formula::Imp(l, r) => self.imp(self.extension(l)?, self.extension(r)?),
        })
    }

    /// True iff `T` is in the value of the extension at every `L`-state.
    pub fn l_valid(&self, e: Extension) -> bool {
        let l = self.l_mask();
        e.t & l == l
    }

    /// Atomic persistence failures, in state and atom order.
    pub fn atomic_violations(&self) -> Vec<PersistenceViolation> {
        let mut out = Vec::new();
        for (lower, upper) in self.frame.derive_leq() {
            for (i, a) in self.atoms.iter().enumerate() {
                let (lo, up) = (self.valuation[lower][i], self.valuation[upper][i]);
                for (pol, l, u) in [(Polarity::T, lo.t, up.t), (Polarity::F, lo.f, up.f)] {
                    if l && !u {
                        out.push(PersistenceViolation {
                            lower,
                            upper,
                            formula: Formula::Atom(a.clone()),
                            polarity: pol,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn is_admissible(&self) -> bool {
        self.atomic_violations().is_empty()
    }

    fn persistence_failures(&self, e: Extension) -> Vec<(usize, usize, Polarity)> {
        let mut out = Vec::new();
        for (x, y) in self.frame.derive_leq() {
            if e.t >> x & 1 == 1 && e.t >> y & 1 == 0 {
                out.push((x, y, Polarity::T));
            }
            if e.f >> x & 1 == 1 && e.f >> y & 1 == 0 {
                out.push((x, y, Polarity::F));
            }
        }
        out
    }

    /// One representative formula per distinct extension among all formulas of
    /// depth at most `depth` over the model's atoms. Representatives are the
    /// first found, level by level, so each has depth at most `depth`.
    pub fn formula_classes(&self, depth: usize) -> Vec<(Formula, Extension)> {
        let mut seen = HashSet::new();
        let mut classes: Vec<(Formula, Extension)> = Vec::new();
        for a in &self.atoms {
            let e = self.atom_ext[a];
            if seen.insert(e) {
                classes.push((Formula::Atom(a.clone()), e));
            }
        }
        for _ in 0..depth {
            let prev = classes.len();
            let mut fresh = Vec::new();
            let mut push = |f: &dyn Fn() -> Formula, e: Extension, fresh: &mut Vec<_>| {
                if seen.insert(e) {
                    fresh.push((f(), e));
                }
            };
            for i in 0..prev {
                let (fa, ea) = &classes[i];
                push(&|| Formula::not(fa.clone()), ea.not(), &mut fresh);
                for (fb, eb) in &classes[..prev] {
                    push(&|| Formula::and(fa.clone(), fb.clone()), ea.and(*eb), &mut fresh);
                    push(&|| Formula::or(fa.clone(), fb.clone()), ea.or(*eb), &mut fresh);
                    push(&|| Formula::imp(fa.clone(), fb.clone()), self.imp(*ea, *eb), &mut fresh);
                }
            }
            if fresh.is_empty() {
                break;
            }
            classes.extend(fresh);
        }
        classes
    }
}

pub fn eval_model(m: &Model, state: usize, f: &Formula) -> Result<TruthValue> {
    if state >= m.len() {
        return Err(Error::UnknownState(format!("#{state}")));
    }
    Ok(m.extension(f)?.at(state))
}

/// Evaluates at a state given by name.
pub fn eval_model_named(m: &Model, state: &str, f: &Formula) -> Result<TruthValue> {
    eval_model(m, m.state(state)?, f)
}

/// Failures of heredity along `<=` for every formula up to `depth`. Atomic
/// failures come first, then one entry per failing class representative.
pub fn check_persistence(m: &Model, depth: usize) -> Vec<PersistenceViolation> {
    let mut out = m.atomic_violations();
    for (formula, e) in m.formula_classes(depth) {
        if matches!(formula, Formula::Atom(_)) {
            continue;
        }
        for (lower, upper, polarity) in m.persistence_failures(e) {
            out.push(PersistenceViolation {
                lower,
                upper,
                formula: formula.clone(),
                polarity,
            });
        }
    }
    out
}

/// Consequence in a single model.
///
/// With `at_l_only == false`, `premises` must be non-empty and the check runs
/// over every state. With `at_l_only == true` only `L`-states count; an empty
/// premise set then asks whether `conclusion` is true at every `L`-state.
pub fn consequence_in_model(
    m: &Model,
    premises: &[Formula],
    conclusion: &Formula,
    at_l_only: bool,
) -> Result<bool> {
    if premises.is_empty() && !at_l_only {
        return Err(Error::EmptyPremises);
    }
    let mut scope = if at_l_only { m.l_mask() } else { m.all_states() };
    for p in premises {
        scope &= m.extension(p)?.t;
    }
    Ok(m.extension(conclusion)?.t & scope == scope)
}
