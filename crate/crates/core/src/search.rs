//! Bounded countermodel search.
//!
//! For each state count in turn, the frame conditions, atomic persistence and
//! the refutation requirements are encoded as a SAT instance. The first model in
//! the enumeration order (state count ascending, then `L`, `R1`, `R2` and the
//! valuation, each lexicographically with `N < T < F < TF`) is extracted by
//! fixing decision variables one at a time, smallest value first. Every
//! model returned is re-checked with the direct evaluator.

use std::collections::HashMap;

use varisat::{ExtendFormula, Lit, Solver};

use crate::error::{Error, Result};
use crate::fde::{atoms_of, TruthValue};
use crate::frames::{validate_frame, Condition, ConditionSet, Frame};
use crate::models::Model;
use crate::syntax::Formula;

/// Largest state count the search accepts.
pub const MAX_SEARCH_STATES: usize = 5;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SearchBounds {
    pub max_states: usize,
    pub conditions: ConditionSet,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_states: 3,
            conditions: ConditionSet::basic(),
        }
    }
}

/// The first model (in enumeration order) whose frame meets
/// `bounds.conditions`, whose valuation is persistent, where every premise is
/// true at every `L`-state and the conclusion is untrue at some `L`-state.
pub fn find_countermodel(
    premises: &[Formula],
    conclusion: &Formula,
    bounds: SearchBounds,
) -> Result<Option<Model>> {
    if bounds.max_states == 0 || bounds.max_states > MAX_SEARCH_STATES {
        return Err(Error::BoundsExceeded(format!(
            "max_states must be between 1 and {MAX_SEARCH_STATES}, got {}",
            bounds.max_states
        )));
    }
    for n in 1..=bounds.max_states {
        if let Some(m) = search_size(premises, conclusion, n, bounds.conditions)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

struct Encoder<'s> {
    solver: Solver<'s>,
    n: usize,
    l: Vec<Lit>,
    r1: Vec<Lit>,
    r2: Vec<Lit>,
    leq: Vec<Lit>,
    vt: HashMap<String, Vec<Lit>>,
    vf: HashMap<String, Vec<Lit>>,
    cache: HashMap<Formula, (Vec<Lit>, Vec<Lit>)>,
}

impl<'s> Encoder<'s> {
    fn fresh(&mut self) -> Lit {
        self.solver.new_lit()
    }

    fn fresh_vec(&mut self, k: usize) -> Vec<Lit> {
        (0..k).map(|_| self.fresh()).collect()
    }

    fn clause(&mut self, lits: &[Lit]) {
        self.solver.add_clause(lits);
    }

    fn idx3(&self, x: usize, y: usize, z: usize) -> usize {
        (x * self.n + y) * self.n + z
    }

    /// `out <-> and(lits)`
    fn define_and(&mut self, out: Lit, lits: &[Lit]) {
        for &l in lits {
            self.clause(&[!out, l]);
        }
        let mut big: Vec<Lit> = lits.iter().map(|&l| !l).collect();
        big.push(out);
        self.clause(&big);
    }

    /// `out <-> or(lits)`
    fn define_or(&mut self, out: Lit, lits: &[Lit]) {
        for &l in lits {
            self.clause(&[out, !l]);
        }
        let mut big: Vec<Lit> = lits.to_vec();
        big.push(!out);
        self.clause(&big);
    }

    fn and_of(&mut self, lits: &[Lit]) -> Lit {
        let out = self.fresh();
        self.define_and(out, lits);
        out
    }

    fn or_of(&mut self, lits: &[Lit]) -> Lit {
        let out = self.fresh();
        self.define_or(out, lits);
        out
    }

    /// Literals for `T in v(x, f)` and `F in v(x, f)`, per state.
    fn encode(&mut self, f: &Formula) -> (Vec<Lit>, Vec<Lit>) {
        if let Some(hit) = self.cache.get(f) {
            return hit.clone();
        }
        let n = self.n;
        let out = match f {
            Formula::Atom(a) => (self.vt[a].clone(), self.vf[a].clone()),
            Formula::Not(g) => {
                let (t, fl) = self.encode(g);
                (fl, t)
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let (ta, fa) = self.encode(a);
                let (tb, fb) = self.encode(b);
                let conj = matches!(f, Formula::And(..));
                let mut t = Vec::with_capacity(n);
                let mut fl = Vec::with_capacity(n);
                for x in 0..n {
                    if conj {
                        t.push(self.and_of(&[ta[x], tb[x]]));
                        fl.push(self.or_of(&[fa[x], fb[x]]));
                    } else {
                        t.push(self.or_of(&[ta[x], tb[x]]));
                        fl.push(self.and_of(&[fa[x], fb[x]]));
                    }
                }
                (t, fl)
            }
            Formula::Imp(a, b) => {
                let (ta, _) = self.encode(a);
                let (tb, fb) = self.encode(b);
                let mut t = Vec::with_capacity(n);
                let mut fl = Vec::with_capacity(n);
                for x in 0..n {
                    let mut breaks = Vec::new();
                    let mut refutes = Vec::new();
                    for y in 0..n {
                        for z in 0..n {
                            let i = self.idx3(x, y, z);
                            let (r1, r2) = (self.r1[i], self.r2[i]);
                            breaks.push(self.and_of(&[r1, ta[y], !tb[z]]));
                            refutes.push(self.and_of(&[r2, ta[y], fb[z]]));
                        }
                    }
                    let any_break = self.or_of(&breaks);
                    t.push(!any_break);
                    fl.push(self.or_of(&refutes));
                }
                (t, fl)
            }
        };
        self.cache.insert(f.clone(), out.clone());
        out
    }

    fn frame_conditions(&mut self, conds: ConditionSet) {
        let n = self.n;
        let all = |k: u32| 0..n.pow(k);
        let digits = |code: usize, k: usize| {
            let mut t = vec![0; k];
            let mut c = code;
            for slot in t.iter_mut().rev() {
                *slot = c % n;
                c /= n;
            }
            t
        };
        // derived order
        for x in 0..n {
            for y in 0..n {
                let mut ways = Vec::new();
                for u in 0..n {
                    let i = self.idx3(u, x, y);
                    let (lu, r) = (self.l[u], self.r1[i]);
                    ways.push(self.and_of(&[lu, r]));
                }
                let leq = self.leq[x * n + y];
                self.define_or(leq, &ways);
            }
        }
        let leq = |s: &Self, x: usize, y: usize| s.leq[x * n + y];
        for cond in conds.conditions() {
            match cond {
                Condition::I | Condition::A => {
                    for x in 0..n {
                        let c = leq(self, x, x);
                        self.clause(&[c]);
                    }
                }
                Condition::II => {
                    for code in all(3) {
                        let t = digits(code, 3);
                        let c = [!leq(self, t[0], t[1]), !leq(self, t[1], t[2]), leq(self, t[0], t[2])];
                        self.clause(&c);
                    }
                }
                Condition::III => {
                    for code in all(2) {
                        let t = digits(code, 2);
                        let c = [!self.l[t[0]], !leq(self, t[0], t[1]), self.l[t[1]]];
                        self.clause(&c);
                    }
                }
                Condition::IV | Condition::C => {
                    for code in all(4) {
                        let t = digits(code, 4);
                        let (w, x, y, z) = (t[0], t[1], t[2], t[3]);
                        let c = [
                            !leq(self, w, x),
                            !self.r1[self.idx3(x, y, z)],
                            self.r1[self.idx3(w, y, z)],
                        ];
                        self.clause(&c);
                    }
                }
                Condition::V => {
                    for code in all(4) {
                        let t = digits(code, 4);
                        let (x, w, y, z) = (t[0], t[1], t[2], t[3]);
                        let c = [
                            !leq(self, x, w),
                            !self.r2[self.idx3(x, y, z)],
                            self.r2[self.idx3(w, y, z)],
                        ];
                        self.clause(&c);
                    }
                }
                Condition::VI => {
                    for x in 0..n {
                        let c = self.r1[self.idx3(x, x, x)];
                        self.clause(&[c]);
                    }
                }
                Condition::VII => {
                    for x in 0..n {
                        let c = self.r2[self.idx3(x, x, x)];
                        self.clause(&[c]);
                    }
                }
                Condition::VIII | Condition::E | Condition::IX | Condition::X => {
                    for code in all(3) {
                        let t = digits(code, 3);
                        let (x, y, z) = (t[0], t[1], t[2]);
                        let (head, mut witnesses) = match cond {
                            Condition::IX | Condition::X => (self.r2[self.idx3(x, y, z)], Vec::new()),
                            _ => (self.r1[self.idx3(x, y, z)], Vec::new()),
                        };
                        for w in 0..n {
                            let pair = match cond {
                                Condition::IX => [self.r1[self.idx3(x, y, w)], self.r2[self.idx3(x, w, z)]],
                                Condition::X => [self.r2[self.idx3(x, y, w)], self.r1[self.idx3(x, z, w)]],
                                _ => [self.r1[self.idx3(x, y, w)], self.r1[self.idx3(x, w, z)]],
                            };
                            witnesses.push(self.and_of(&pair));
                        }
                        witnesses.push(!head);
                        self.clause(&witnesses);
                    }
                }
                Condition::B => {
                    for code in all(4) {
                        let t = digits(code, 4);
                        let (u, x, y, z) = (t[0], t[1], t[2], t[3]);
                        let c = [
                            !self.l[u],
                            !self.r1[self.idx3(u, x, y)],
                            !leq(self, y, z),
                            self.r1[self.idx3(u, x, z)],
                        ];
                        self.clause(&c);
                    }
                }
                Condition::D => {
                    for code in all(3) {
                        let t = digits(code, 3);
                        let (u, v, x) = (t[0], t[1], t[2]);
                        let c = [!self.l[u], !self.l[v], !self.r1[self.idx3(u, v, x)], self.l[x]];
                        self.clause(&c);
                    }
                }
            }
        }
    }
}

fn search_size(
    premises: &[Formula],
    conclusion: &Formula,
    n: usize,
    conds: ConditionSet,
) -> Result<Option<Model>> {
    let atoms = atoms_of(premises.iter().chain(std::iter::once(conclusion)));
    let mut enc = Encoder {
        solver: Solver::new(),
        n,
        l: Vec::new(),
        r1: Vec::new(),
        r2: Vec::new(),
        leq: Vec::new(),
        vt: HashMap::new(),
        vf: HashMap::new(),
        cache: HashMap::new(),
    };
    // decision variables first, in enumeration order
    enc.l = enc.fresh_vec(n);
    enc.r1 = enc.fresh_vec(n * n * n);
    enc.r2 = enc.fresh_vec(n * n * n);
    let mut valuation_order = Vec::new();
    let mut vt: HashMap<String, Vec<Lit>> = atoms.iter().map(|a| (a.clone(), Vec::new())).collect();
    let mut vf = vt.clone();
    for _x in 0..n {
        for a in &atoms {
            let f = enc.fresh();
            let t = enc.fresh();
            // F is the more significant digit: N < T < F < TF
            valuation_order.push(f);
            valuation_order.push(t);
            vt.get_mut(a).unwrap().push(t);
            vf.get_mut(a).unwrap().push(f);
        }
    }
    enc.vt = vt;
    enc.vf = vf;
    enc.leq = enc.fresh_vec(n * n);

    enc.frame_conditions(conds);
    for a in &atoms {
        for x in 0..n {
            for y in 0..n {
                let le = enc.leq[x * n + y];
                let (tx, ty) = (enc.vt[a][x], enc.vt[a][y]);
                let (fx, fy) = (enc.vf[a][x], enc.vf[a][y]);
                enc.clause(&[!le, !tx, ty]);
                enc.clause(&[!le, !fx, fy]);
            }
        }
    }
    for p in premises {
        let (t, _) = enc.encode(p);
        for (x, tx) in t.into_iter().enumerate() {
            let lx = enc.l[x];
            enc.clause(&[!lx, tx]);
        }
    }
    let (tc, _) = enc.encode(conclusion);
    let mut somewhere = Vec::new();
    for (x, tcx) in tc.into_iter().enumerate() {
        let lx = enc.l[x];
        somewhere.push(enc.and_of(&[lx, !tcx]));
    }
    enc.clause(&somewhere);

    let decisions: Vec<Lit> = enc
        .l
        .iter()
        .chain(&enc.r1)
        .chain(&enc.r2)
        .chain(&valuation_order)
        .copied()
        .collect();

    let solve = |solver: &mut Solver, assumptions: &[Lit]| -> Result<Option<Vec<bool>>> {
        solver.assume(assumptions);
        let sat = solver
            .solve()
            .map_err(|e| Error::Internal(format!("SAT solver failed: {e}")))?;
        Ok(sat.then(|| {
            let model = solver.model().unwrap_or_default();
            let mut values = vec![false; model.iter().map(|l| l.index() + 1).max().unwrap_or(0)];
            for l in model {
                values[l.index()] = l.is_positive();
            }
            values
        }))
    };
    let value = |values: &[bool], l: Lit| values.get(l.index()).copied().unwrap_or(false) == l.is_positive();

    let Some(mut current) = solve(&mut enc.solver, &[])? else {
        return Ok(None);
    };
    let mut fixed = Vec::with_capacity(decisions.len());
    for &d in &decisions {
        if !value(&current, d) {
            fixed.push(!d);
            continue;
        }
        fixed.push(!d);
        match solve(&mut enc.solver, &fixed)? {
            Some(v) => current = v,
            None => {
                fixed.pop();
                fixed.push(d);
            }
        }
    }

    let bit = |l: Lit| value(&current, l);
    let frame = Frame::from_bits(
        Frame::default_names(n),
        enc.l.iter().map(|&l| bit(l)).collect(),
        enc.r1.iter().map(|&l| bit(l)).collect(),
        enc.r2.iter().map(|&l| bit(l)).collect(),
    );
    let valuation = (0..n)
        .map(|x| {
            atoms
                .iter()
                .map(|a| TruthValue::new(bit(enc.vt[a][x]), bit(enc.vf[a][x])))
                .collect()
        })
        .collect();
    let model = Model::new(frame, atoms, valuation)?;
    certify(&model, premises, conclusion, conds)?;
    Ok(Some(model))
}

fn certify(m: &Model, premises: &[Formula], conclusion: &Formula, conds: ConditionSet) -> Result<()> {
    let broken = validate_frame(m.frame(), conds);
    if !broken.is_empty() {
        return Err(Error::Internal(format!(
            "search produced an invalid frame: {}",
            broken[0].render(m.frame())
        )));
    }
    if !m.is_admissible() {
        return Err(Error::Internal("search produced a non-persistent valuation".into()));
    }
    for p in premises {
        if !m.l_valid(m.extension(p)?) {
            return Err(Error::Internal(format!("premise {p} fails in the found model")));
        }
    }
    if m.l_valid(m.extension(conclusion)?) {
        return Err(Error::Internal(format!("conclusion {conclusion} holds in the found model")));
    }
    Ok(())
}
