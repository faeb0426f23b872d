//! Finite frames `<S, L, <=, R1, R2>` and their structural conditions.
//!
//! `<=` is never supplied: `x <= y` iff `R1 u x y` for some `u` in `L`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Frame {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    l: Vec<bool>,
    r1: Vec<bool>,
    r2: Vec<bool>,
    leq: Vec<bool>,
    r1_pairs: Vec<Vec<(usize, usize)>>,
    r2_pairs: Vec<Vec<(usize, usize)>>,
}

impl Frame {
    /// Builds a frame over named states. Triples name states by id.
    pub fn new<S: AsRef<str>>(
        states: &[S],
        l: &[S],
        r1: &[[S; 3]],
        r2: &[[S; 3]],
    ) -> Result<Frame> {
        let names: Vec<String> = states.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateState(name.clone()));
            }
        }
        let look = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| Error::UnknownState(s.as_ref().to_string()))
        };
        let l = l.iter().map(look).collect::<Result<Vec<_>>>()?;
        let triples = |ts: &[[S; 3]]| {
            ts.iter()
                .map(|[x, y, z]| Ok((look(x)?, look(y)?, look(z)?)))
                .collect::<Result<Vec<_>>>()
        };
        let r1 = triples(r1)?;
        let r2 = triples(r2)?;
        Ok(Frame::from_indices(names, &l, &r1, &r2))
    }

    /// Builds a frame from state indices. Panics on out-of-range indices.
    pub fn from_indices(
        names: Vec<String>,
        l: &[usize],
        r1: &[(usize, usize, usize)],
        r2: &[(usize, usize, usize)],
    ) -> Frame {
        let n = names.len();
        let mut lv = vec![false; n];
        for &u in l {
            lv[u] = true;
        }
        let mut r1v = vec![false; n * n * n];
        for &(x, y, z) in r1 {
            r1v[(x * n + y) * n + z] = true;
        }
        let mut r2v = vec![false; n * n * n];
        for &(x, y, z) in r2 {
            r2v[(x * n + y) * n + z] = true;
        }
        Frame::from_bits(names, lv, r1v, r2v)
    }

    /// Builds a frame from characteristic vectors: `l[x]`, and `r[(x*n+y)*n+z]`.
    pub fn from_bits(names: Vec<String>, l: Vec<bool>, r1: Vec<bool>, r2: Vec<bool>) -> Frame {
        let n = names.len();
        assert_eq!(l.len(), n);
        assert_eq!(r1.len(), n * n * n);
        assert_eq!(r2.len(), n * n * n);
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut leq = vec![false; n * n];
        for u in (0..n).filter(|&u| l[u]) {
            for x in 0..n {
                for y in 0..n {
                    if r1[(u * n + x) * n + y] {
                        leq[x * n + y] = true;
                    }
                }
            }
        }
        let pairs = |r: &[bool]| {
            (0..n)
                .map(|x| {
                    let mut v = Vec::new();
                    for y in 0..n {
                        for z in 0..n {
                            if r[(x * n + y) * n + z] {
                                v.push((y, z));
                            }
                        }
                    }
                    v
                })
                .collect::<Vec<_>>()
        };
        let r1_pairs = pairs(&r1);
        let r2_pairs = pairs(&r2);
        Frame {
            names,
            index,
            l,
            r1,
            r2,
            leq,
            r1_pairs,
            r2_pairs,
        }
    }

    /// Default state names `s0, s1, ...`.
    pub fn default_names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("s{i}")).collect()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn in_l(&self, x: usize) -> bool {
        self.l[x]
    }

    pub fn l_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&x| self.l[x])
    }

    pub fn r1(&self, x: usize, y: usize, z: usize) -> bool {
        let n = self.len();
        self.r1[(x * n + y) * n + z]
    }

    pub fn r2(&self, x: usize, y: usize, z: usize) -> bool {
        let n = self.len();
        self.r2[(x * n + y) * n + z]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    /// `(y, z)` with `R1 x y z`, in lexicographic order.
    pub fn r1_pairs(&self, x: usize) -> &[(usize, usize)] {
        &self.r1_pairs[x]
    }

    /// `(y, z)` with `R2 x y z`, in lexicographic order.
    pub fn r2_pairs(&self, x: usize) -> &[(usize, usize)] {
        &self.r2_pairs[x]
    }

    pub fn r1_triples(&self) -> Vec<(usize, usize, usize)> {
        triples_of(&self.r1_pairs)
    }

    pub fn r2_triples(&self) -> Vec<(usize, usize, usize)> {
        triples_of(&self.r2_pairs)
    }

    /// The derived order as index pairs, lexicographically sorted.
    pub fn derive_leq(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.leq(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// The derived order with state names.
    pub fn derive_leq_named(&self) -> Vec<(String, String)> {
        self.derive_leq()
            .into_iter()
            .map(|(x, y)| (self.names[x].clone(), self.names[y].clone()))
            .collect()
    }
}

fn triples_of(pairs: &[Vec<(usize, usize)>]) -> Vec<(usize, usize, usize)> {
    pairs
        .iter()
        .enumerate()
        .flat_map(|(x, ps)| ps.iter().map(move |&(y, z)| (x, y, z)))
        .collect()
}

/// Frame conditions. `I`..`X` are the numbered frame conditions; `A`..`E` the
/// lab-practice conditions from which they are motivated.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Condition {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
    X,
    A,
    B,
    C,
    D,
    E,
}

impl Condition {
    pub const NUMBERED: [Condition; 10] = [
        Condition::I,
        Condition::II,
        Condition::III,
        Condition::IV,
        Condition::V,
        Condition::VI,
        Condition::VII,
        Condition::VIII,
        Condition::IX,
        Condition::X,
    ];

    pub const OPTIONAL: [Condition; 10] = [
        Condition::VI,
        Condition::VII,
        Condition::VIII,
        Condition::IX,
        Condition::X,
        Condition::A,
        Condition::B,
        Condition::C,
        Condition::D,
        Condition::E,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Condition::I => "i",
            Condition::II => "ii",
            Condition::III => "iii",
            Condition::IV => "iv",
            Condition::V => "v",
            Condition::VI => "vi",
            Condition::VII => "vii",
            Condition::VIII => "viii",
            Condition::IX => "ix",
            Condition::X => "x",
            Condition::A => "a",
            Condition::B => "b",
            Condition::C => "c",
            Condition::D => "d",
            Condition::E => "e",
        }
    }

    /// Roles of the witness tuple, in order.
    pub fn witness_roles(self) -> &'static [&'static str] {
        match self {
            Condition::I | Condition::VI | Condition::VII | Condition::A => &["x"],
            Condition::II | Condition::VIII | Condition::IX | Condition::X | Condition::E => {
                &["x", "y", "z"]
            }
            Condition::III => &["x", "y"],
            Condition::IV | Condition::C => &["w", "x", "y", "z"],
            Condition::V => &["x", "w", "y", "z"],
            Condition::B => &["u", "x", "y", "z"],
            Condition::D => &["u", "v", "x"],
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Condition::I => "x <= x",
            Condition::II => "x <= y and y <= z imply x <= z",
            Condition::III => "x in L and x <= y imply y in L",
            Condition::IV => "w <= x and R1xyz imply R1wyz",
            Condition::V => "x <= w and R2xyz imply R2wyz",
            Condition::VI => "R1xxx",
            Condition::VII => "R2xxx",
            Condition::VIII => "R1xyz implies R1xyw and R1xwz for some w",
            Condition::IX => "R2xyz implies R1xyw and R2xwz for some w",
            Condition::X => "R2xyz implies R2xyw and R1xzw for some w",
            Condition::A => "R1uxx for some u in L",
            Condition::B => "u in L, R1uxy and y <= z imply R1uxz",
            Condition::C => "R1xyz and w <= x imply R1wyz",
            Condition::D => "u, v in L and R1uvx imply x in L",
            Condition::E => "R1xyz implies R1xwz and R1xyw for some w",
        }
    }

    /// The optional axiom a numbered condition validates, if any.
    pub fn axiom(self) -> Option<&'static str> {
        match self {
            Condition::VI => Some("A12"),
            Condition::VII => Some("A13"),
            Condition::VIII => Some("A14"),
            Condition::IX => Some("A15"),
            Condition::X => Some("A16"),
            _ => None,
        }
    }

    pub fn is_required(self) -> bool {
        matches!(
            self,
            Condition::I | Condition::II | Condition::III | Condition::IV | Condition::V
        )
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = Condition::NUMBERED.iter().chain(&Condition::OPTIONAL[5..]);
        all.copied()
            .find(|c| c.label() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::Format(format!("unknown frame condition `{s}`")))
    }
}

/// Optional conditions to check on top of the required `i`..`v`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct ConditionSet {
    flags: u16,
}

impl ConditionSet {
    /// Only `i`..`v`.
    pub fn basic() -> ConditionSet {
        ConditionSet::default()
    }

    /// `i`..`x`.
    pub fn numbered() -> ConditionSet {
        Condition::NUMBERED[5..]
            .iter()
            .fold(ConditionSet::basic(), |s, &c| s.with(c))
    }

    pub fn with(mut self, c: Condition) -> ConditionSet {
        if !c.is_required() {
            self.flags |= 1 << (c as u16);
        }
        self
    }

    pub fn contains(self, c: Condition) -> bool {
        c.is_required() || self.flags & (1 << (c as u16)) != 0
    }

    /// Every condition checked under this set, required ones first.
    pub fn conditions(self) -> Vec<Condition> {
        Condition::NUMBERED
            .iter()
            .chain(&Condition::OPTIONAL[5..])
            .copied()
            .filter(|&c| self.contains(c))
            .collect()
    }

    /// The conditions for the optional axioms `A12`..`A16` listed in `axioms`.
    pub fn for_axioms<S: AsRef<str>>(axioms: &[S]) -> ConditionSet {
        let mut set = ConditionSet::basic();
        for c in &Condition::NUMBERED[5..] {
            if axioms.iter().any(|a| Some(a.as_ref()) == c.axiom()) {
                set = set.with(*c);
            }
        }
        set
    }
}

impl FromStr for ConditionSet {
    type Err = Error;

    /// Comma-separated labels; `all` means `vi`..`x`.
    fn from_str(s: &str) -> Result<Self> {
        let mut set = ConditionSet::basic();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part.eq_ignore_ascii_case("all") {
                set = ConditionSet::numbered();
            } else {
                set = set.with(part.parse()?);
            }
        }
        Ok(set)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub condition: Condition,
    /// State indices in the order of [`Condition::witness_roles`].
    pub witness: Vec<usize>,
}

impl Violation {
    pub fn render(&self, frame: &Frame) -> String {
        let parts: Vec<String> = self
            .condition
            .witness_roles()
            .iter()
            .zip(&self.witness)
            .map(|(role, &s)| format!("{role}={}", frame.name(s)))
            .collect();
        format!(
            "condition {} ({}) fails at {}",
            self.condition,
            self.condition.description(),
            parts.join(", ")
        )
    }
}

/// One violation per failing condition, each with the lexicographically least
/// witness.
pub fn validate_frame(f: &Frame, c: ConditionSet) -> Vec<Violation> {
    c.conditions()
        .into_iter()
        .filter_map(|cond| {
            first_witness(f, cond).map(|witness| Violation {
                condition: cond,
                witness,
            })
        })
        .collect()
}

pub fn satisfies(f: &Frame, cond: Condition) -> bool {
    first_witness(f, cond).is_none()
}

fn first_witness(f: &Frame, cond: Condition) -> Option<Vec<usize>> {
    let n = f.len();
    let exists = |p: &dyn Fn(usize) -> bool| (0..n).any(p);
    match cond {
        Condition::I | Condition::A => (0..n).find(|&x| !f.leq(x, x)).map(|x| vec![x]),
        Condition::II => tuples(n, 3).find(|t| f.leq(t[0], t[1]) && f.leq(t[1], t[2]) && !f.leq(t[0], t[2])),
        Condition::III => tuples(n, 2).find(|t| f.in_l(t[0]) && f.leq(t[0], t[1]) && !f.in_l(t[1])),
        Condition::IV | Condition::C => {
            tuples(n, 4).find(|t| f.leq(t[0], t[1]) && f.r1(t[1], t[2], t[3]) && !f.r1(t[0], t[2], t[3]))
        }
        Condition::V => {
            tuples(n, 4).find(|t| f.leq(t[0], t[1]) && f.r2(t[0], t[2], t[3]) && !f.r2(t[1], t[2], t[3]))
        }
        Condition::VI => (0..n).find(|&x| !f.r1(x, x, x)).map(|x| vec![x]),
        Condition::VII => (0..n).find(|&x| !f.r2(x, x, x)).map(|x| vec![x]),
        Condition::VIII | Condition::E => tuples(n, 3).find(|t| {
            let (x, y, z) = (t[0], t[1], t[2]);
            f.r1(x, y, z) && !exists(&|w| f.r1(x, y, w) && f.r1(x, w, z))
        }),
        Condition::IX => tuples(n, 3).find(|t| {
            let (x, y, z) = (t[0], t[1], t[2]);
            f.r2(x, y, z) && !exists(&|w| f.r1(x, y, w) && f.r2(x, w, z))
        }),
        Condition::X => tuples(n, 3).find(|t| {
            let (x, y, z) = (t[0], t[1], t[2]);
            f.r2(x, y, z) && !exists(&|w| f.r2(x, y, w) && f.r1(x, z, w))
        }),
        Condition::B => tuples(n, 4).find(|t| {
            f.in_l(t[0]) && f.r1(t[0], t[1], t[2]) && f.leq(t[2], t[3]) && !f.r1(t[0], t[1], t[3])
        }),
        Condition::D => tuples(n, 3)
            .find(|t| f.in_l(t[0]) && f.in_l(t[1]) && f.r1(t[0], t[1], t[2]) && !f.in_l(t[2])),
    }
}

/// All `k`-tuples over `0..n` in lexicographic order.
fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(k as u32);
    (0..total).map(move |mut code| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        t
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn contraposition_frame() -> Frame {
        Frame::new(
            &["u", "x", "y"],
            &["u"],
            &[
                ["u", "u", "u"],
                ["u", "x", "x"],
                ["u", "x", "y"],
                ["u", "y", "y"],
                ["x", "x", "x"],
                ["x", "x", "y"],
                ["x", "y", "y"],
                ["y", "y", "y"],
            ],
            &[
                ["u", "u", "u"],
                ["x", "x", "x"],
                ["y", "y", "y"],
                ["y", "x", "x"],
            ],
        )
        .unwrap()
    }

    #[test]
    fn derived_order_of_contraposition_frame() {
        let f = contraposition_frame();
        let leq = f.derive_leq_named();
        let expect: Vec<(String, String)> = [("u", "u"), ("x", "x"), ("x", "y"), ("y", "y")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(leq, expect);
    }

    #[test]
    fn contraposition_frame_fails_only_ix_and_x() {
        // R2(y, x, x) is forced by availability, but y has no R1(y, x, w).
        let f = contraposition_frame();
        assert!(validate_frame(&f, ConditionSet::basic()).is_empty());
        let v = validate_frame(&f, ConditionSet::numbered());
        let y = f.index_of("y").unwrap();
        let x = f.index_of("x").unwrap();
        assert_eq!(
            v,
            vec![
                Violation { condition: Condition::IX, witness: vec![y, x, x] },
                Violation { condition: Condition::X, witness: vec![y, x, x] },
            ]
        );
    }

    #[test]
    fn repaired_contraposition_frame_satisfies_everything() {
        let f = contraposition_frame();
        let mut r1 = f.r1_triples();
        r1.push((2, 1, 1));
        let g = Frame::from_indices(f.names().to_vec(), &[0], &r1, &f.r2_triples());
        assert_eq!(g.derive_leq(), f.derive_leq());
        assert!(validate_frame(&g, ConditionSet::numbered()).is_empty());
    }

    #[test]
    fn order_edge_cases() {
        let empty_l = Frame::from_indices(Frame::default_names(2), &[], &[(0, 0, 0)], &[]);
        assert!(empty_l.derive_leq().is_empty());
        let v = validate_frame(&empty_l, ConditionSet::basic());
        assert_eq!(v[0].condition, Condition::I);
        assert_eq!(v[0].witness, vec![0]);

        let n = 3;
        let full: Vec<_> = tuples(n, 3).map(|t| (t[0], t[1], t[2])).collect();
        let f = Frame::from_indices(Frame::default_names(n), &[0], &full, &[]);
        assert_eq!(f.derive_leq().len(), n * n);
    }

    #[test]
    fn availability_violation_witness() {
        // s0 <= s1 via R1(s0, s0, s1); R2(s0, s0, s0) is not carried to s1.
        let f = Frame::from_indices(
            vec!["x".into(), "w".into()],
            &[0, 1],
            &[(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1)],
            &[(0, 0, 0), (1, 1, 1)],
        );
        let v = validate_frame(&f, ConditionSet::basic());
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!(v[0].condition, Condition::V);
        assert_eq!(v[0].witness, vec![0, 1, 0, 0]);
        assert_eq!(
            v[0].render(&f),
            "condition v (x <= w and R2xyz imply R2wyz) fails at x=x, w=w, y=x, z=x"
        );
    }

    #[test]
    fn unknown_and_duplicate_states() {
        assert_eq!(
            Frame::new(&["a", "a"], &["a"], &[], &[]),
            Err(Error::DuplicateState("a".into()))
        );
        assert_eq!(
            Frame::new(&["a"], &["b"], &[], &[]),
            Err(Error::UnknownState("b".into()))
        );
    }

    #[test]
    fn condition_set_parsing() {
        let s: ConditionSet = "vi, vii,viii,ix,x".parse().unwrap();
        assert_eq!(s, ConditionSet::numbered());
        assert_eq!("all".parse::<ConditionSet>().unwrap(), ConditionSet::numbered());
        assert!("xi".parse::<ConditionSet>().is_err());
        let s: ConditionSet = "e,d".parse().unwrap();
        assert!(s.contains(Condition::E) && s.contains(Condition::D) && s.contains(Condition::I));
        assert!(!s.contains(Condition::VI));
        assert_eq!(
            ConditionSet::for_axioms(&["A12", "A16"]),
            ConditionSet::basic().with(Condition::VI).with(Condition::X)
        );
    }

    #[test]
    fn lab_conditions_on_contraposition_frame() {
        let f = contraposition_frame();
        let lab = [Condition::A, Condition::B, Condition::C, Condition::D, Condition::E]
            .iter()
            .fold(ConditionSet::basic(), |s, &c| s.with(c));
        assert!(validate_frame(&f, lab).is_empty());
    }

    #[test]
    fn flagging_more_conditions_never_hides_violations() {
        let f = Frame::from_indices(Frame::default_names(2), &[0], &[(0, 0, 0), (0, 1, 1), (1, 0, 1)], &[(1, 0, 0)]);
        let base = validate_frame(&f, ConditionSet::basic());
        let more = validate_frame(&f, ConditionSet::numbered());
        for v in &base {
            assert!(more.contains(v));
        }
        assert!(more.len() >= base.len());
    }
}
