//! Brute-force oracles shared by the integration tests. None of them call the
//! evaluators they are used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use lablogic::frames::Frame;
use lablogic::gen::{atom_names, random_model};
use lablogic::models::{Extension, Model};
use lablogic::{ConditionSet, Formula};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `(told true, told false)`
pub type Val = (bool, bool);

pub fn eval(f: &Formula, env: &BTreeMap<String, Val>) -> Val {
    match f {
        Formula::Atom(a) => env[a],
        Formula::Not(g) => {
            let (t, f) = eval(g, env);
            (f, t)
        }
        Formula::And(l, r) => {
            let (a, b) = (eval(l, env), eval(r, env));
            (a.0 && b.0, a.1 || b.1)
        }
        Formula::Or(l, r) => {
            let (a, b) = (eval(l, env), eval(r, env));
            (a.0 || b.0, a.1 && b.1)
        }
        Formula::Imp(..) => panic!("the oracle only covers the ->-free fragment"),
    }
}

/// Every map from `atoms` to the four values, by counting in base 4.
pub fn all_envs(atoms: &[String]) -> Vec<BTreeMap<String, Val>> {
    let n = atoms.len();
    (0..4usize.pow(n as u32))
        .map(|code| {
            atoms
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let digit = code / 4usize.pow(i as u32) % 4;
                    (a.clone(), (digit & 1 == 1, digit & 2 == 2))
                })
                .collect()
        })
        .collect()
}

pub fn atoms_of(fs: &[&Formula]) -> Vec<String> {
    let mut out: Vec<String> = fs.iter().flat_map(|f| f.atoms()).collect();
    out.sort();
    out.dedup();
    out
}

/// Truth preservation over the full truth table.
pub fn entails(a: &Formula, b: &Formula) -> bool {
    all_envs(&atoms_of(&[a, b]))
        .iter()
        .all(|env| !eval(a, env).0 || eval(b, env).0)
}

/// The `->` clause read straight off the frame relations.
pub fn imp(frame: &Frame, a: Extension, b: Extension) -> Extension {
    let n = frame.len();
    let bit = |mask: u64, x: usize| mask >> x & 1 == 1;
    let mut out = Extension::default();
    for x in 0..n {
        let mut t = true;
        let mut f = false;
        for y in 0..n {
            for z in 0..n {
                if frame.r1(x, y, z) && bit(a.t, y) && !bit(b.t, z) {
                    t = false;
                }
                if frame.r2(x, y, z) && bit(a.t, y) && bit(b.f, z) {
                    f = true;
                }
            }
        }
        out.t |= (t as u64) << x;
        out.f |= (f as u64) << x;
    }
    out
}

/// Extension evaluator over metavariable bindings, memoising `->`.
pub struct ExtEval<'m> {
    pub frame: &'m Frame,
    l_mask: u64,
    memo: HashMap<(Extension, Extension), Extension>,
}

impl<'m> ExtEval<'m> {
    pub fn new(frame: &'m Frame) -> ExtEval<'m> {
        let l_mask = frame.l_states().fold(0, |m, x| m | 1 << x);
        ExtEval {
            frame,
            l_mask,
            memo: HashMap::new(),
        }
    }

    pub fn imp(&mut self, a: Extension, b: Extension) -> Extension {
        let frame = self.frame;
        *self.memo.entry((a, b)).or_insert_with(|| imp(frame, a, b))
    }

    /// Evaluates a formula whose atoms are the metavariables `A`, `B`, `C`,
    /// bound to `env[0]`, `env[1]`, `env[2]`.
    pub fn eval(&mut self, f: &Formula, env: &[Extension; 3]) -> Extension {
        match f {
            Formula::Atom(a) => match a.as_str() {
                "A" => env[0],
                "B" => env[1],
                "C" => env[2],
                other => panic!("`{other}` is not a metavariable"),
            },
            Formula::Not(g) => {
                let e = self.eval(g, env);
                Extension { t: e.f, f: e.t }
            }
            Formula::And(l, r) => {
                let (a, b) = (self.eval(l, env), self.eval(r, env));
                Extension {
                    t: a.t & b.t,
                    f: a.f | b.f,
                }
            }
            Formula::Or(l, r) => {
                let (a, b) = (self.eval(l, env), self.eval(r, env));
                Extension {
                    t: a.t | b.t,
                    f: a.f & b.f,
                }
            }
            Formula::Imp(l, r) => {
                let (a, b) = (self.eval(l, env), self.eval(r, env));
                self.imp(a, b)
            }
        }
    }

    pub fn l_valid(&self, e: Extension) -> bool {
        e.t & self.l_mask == self.l_mask
    }
}

/// The seeded model corpus: up to 4 states, 1 to 3 atoms, frames satisfying
/// `conds` on top of `i`..`v`.
pub fn model_corpus(count: usize, seed: u64, conds: ConditionSet) -> Vec<Model> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let k = r.gen_range(1..=3);
            random_model(&mut r, 4, &atom_names(k), conds)
        })
        .collect()
}
