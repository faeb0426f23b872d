//! Trial streams and relative frequencies, and the frequency of a
//! conditional over a state's accessible pairs.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fde::{ensure_arrow_free, eval_formula, Assignment, TruthValue};
use crate::models::Model;
use crate::probability::{Probability, ProbabilityTable, Rational, StateDistribution};
use crate::syntax::Formula;

/// One assignment per trial, all over the same atoms.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TrialStream {
    atoms: Vec<String>,
    trials: Vec<Assignment>,
}

impl TrialStream {
    pub fn new(atoms: Vec<String>) -> TrialStream {
        let mut atoms = atoms;
        atoms.sort();
        atoms.dedup();
        TrialStream {
            atoms,
            trials: Vec::new(),
        }
    }

    pub fn from_trials(atoms: Vec<String>, trials: Vec<Assignment>) -> Result<TrialStream> {
        let mut ts = TrialStream::new(atoms);
        for t in trials {
            ts.push(t)?;
        }
        Ok(ts)
    }

    pub fn push(&mut self, trial: Assignment) -> Result<()> {
        if trial.atoms().ne(self.atoms.iter().map(String::as_str)) {
            return Err(Error::Format(format!(
                "trial {} does not value exactly the atoms {:?}",
                self.trials.len() + 1,
                self.atoms
            )));
        }
        self.trials.push(trial);
        Ok(())
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn trials(&self) -> &[Assignment] {
        &self.trials
    }

    pub fn len(&self) -> usize {
        self.trials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trials.is_empty()
    }

    /// `n` independent draws from `d`, reproducible from `seed`.
    pub fn generate(d: &StateDistribution, n: usize, seed: u64) -> Result<TrialStream> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let denominator = d
            .masses()
            .iter()
            .fold(BigInt::one(), |l, (_, m)| l.lcm(m.denom()));
        let weights = d
            .masses()
            .iter()
            .map(|(_, m)| {
                (m * Rational::from_integer(denominator.clone()))
                    .to_integer()
                    .to_u64()
                    .ok_or_else(|| Error::InvalidDistribution("masses too fine to sample".into()))
            })
            .collect::<Result<Vec<u64>>>()?;
        let index = WeightedIndex::new(&weights)
            .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
        let trials = (0..n)
            .map(|_| d.masses()[index.sample(&mut rng)].0.clone())
            .collect();
        Ok(TrialStream {
            atoms: d.atoms().to_vec(),
            trials,
        })
    }

    /// Reads `atoms: p q ...` followed by one line of value tokens per
    /// trial. `#` starts a comment.
    pub fn parse(text: &str) -> Result<TrialStream> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Format("trial file is empty".into()))?;
        let atoms: Vec<String> = header
            .strip_prefix("atoms:")
            .ok_or_else(|| Error::Format("trial file must start with `atoms:`".into()))?
            .split_whitespace()
            .map(String::from)
            .collect();
        if atoms.is_empty() {
            return Err(Error::Format("no atoms in the header".into()));
        }
        let mut ts = TrialStream::new(atoms.clone());
        if ts.atoms.len() != atoms.len() {
            return Err(Error::Format("duplicate atom in the header".into()));
        }
        for (k, line) in lines {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != atoms.len() {
                return Err(Error::Format(format!(
                    "line {k}: expected {} values, got {}",
                    atoms.len(),
                    tokens.len()
                )));
            }
            let mut a = Assignment::new();
            for (atom, tok) in atoms.iter().zip(tokens) {
                let v: TruthValue = tok
                    .parse()
                    .map_err(|_| Error::Format(format!("line {k}: bad value `{tok}`")))?;
                a.set(atom, v);
            }
            ts.push(a)?;
        }
        Ok(ts)
    }

    /// The format read by [`TrialStream::parse`], atoms in sorted order.
    pub fn render(&self) -> String {
        let mut out = format!("atoms: {}\n", self.atoms.join(" "));
        for t in &self.trials {
            let row: Vec<&str> = t.0.values().map(|v| v.token()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Running designation counts for a fixed list of formulas.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FrequencyCounter {
    formulas: Vec<Formula>,
    counts: Vec<u64>,
    n: u64,
}

impl FrequencyCounter {
    pub fn new(formulas: Vec<Formula>) -> Result<FrequencyCounter> {
        for f in &formulas {
            ensure_arrow_free(f)?;
        }
        let counts = vec![0; formulas.len()];
        Ok(FrequencyCounter {
            formulas,
            counts,
            n: 0,
        })
    }

    pub fn observe(&mut self, trial: &Assignment) -> Result<()> {
        for (f, c) in self.formulas.iter().zip(self.counts.iter_mut()) {
            if eval_formula(trial, f)?.t {
                *c += 1;
            }
        }
        self.n += 1;
        Ok(())
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    /// Counts in formula order.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn snapshot(&self) -> FrequencyTable {
        FrequencyTable {
            n: self.n,
            counts: self.formulas.iter().cloned().zip(self.counts.iter().copied()).collect(),
        }
    }
}

/// Counts after `n` trials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FrequencyTable {
    pub n: u64,
    pub counts: Vec<(Formula, u64)>,
}

impl FrequencyTable {
    pub fn freq(&self, f: &Formula) -> Result<u64> {
        self.counts
            .iter()
            .find(|(g, _)| g == f)
            .map(|(_, c)| *c)
            .ok_or_else(|| Error::OutsideDomain(f.render()))
    }

    pub fn rfreq(&self, f: &Formula) -> Result<Rational> {
        if self.n == 0 {
            return Err(Error::Precondition("relative frequency after zero trials".into()));
        }
        Ok(Rational::new(self.freq(f)?.into(), self.n.into()))
    }

    /// `freq(a & b) / freq(b)`; both must be counted.
    pub fn conditional(&self, a: &Formula, b: &Formula) -> Result<Rational> {
        let fb = self.freq(b)?;
        if fb == 0 {
            return Err(Error::UndefinedConditional(b.render()));
        }
        let fab = self.freq(&Formula::and(a.clone(), b.clone()))?;
        Ok(Rational::new(fab.into(), fb.into()))
    }

    /// Relative frequencies of every counted formula.
    pub fn rfreq_table(&self) -> Result<ProbabilityTable> {
        let mut t = ProbabilityTable::new();
        for (f, _) in &self.counts {
            t.insert(f.clone(), self.rfreq(f)?)?;
        }
        Ok(t)
    }
}

impl Probability for FrequencyTable {
    fn prob(&self, f: &Formula) -> Result<Rational> {
        self.rfreq(f)
    }
}

pub fn run_trials(ts: &TrialStream, formulas: &[Formula]) -> Result<FrequencyTable> {
    let mut c = FrequencyCounter::new(formulas.to_vec())?;
    for t in ts.trials() {
        c.observe(t)?;
    }
    Ok(c.snapshot())
}

/// How the frequency of a negated conditional treats pairs where the
/// antecedent is not true.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Mode {
    /// Count a pair when `T in v(y, A)` implies `F in v(z, B)`; vacuous pairs count.
    #[default]
    AsWritten,
    /// Count a pair when `T in v(y, A)` and `F in v(z, B)`.
    Conjunctive,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::AsWritten => "as-written",
            Mode::Conjunctive => "conjunctive",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "as-written" => Ok(Mode::AsWritten),
            "conjunctive" => Ok(Mode::Conjunctive),
            other => Err(Error::Format(format!("unknown mode `{other}`"))),
        }
    }
}

/// For `A -> B`, the share of `R1`-pairs `(y, z)` at `x` with
/// `T in v(y, A)` implying `T in v(z, B)`. For `~(A -> B)`, the share of
/// `R2`-pairs counted under `mode`.
pub fn conditional_rfreq(m: &Model, x: usize, f: &Formula, mode: Mode) -> Result<Rational> {
    let (negated, a, b) = match f {
        Formula::Imp(a, b) => (false, a, b),
        Formula::Not(g) => match &**g {
            Formula::Imp(a, b) => (true, a, b),
            _ => return Err(Error::Precondition(format!("{f} is not a conditional or its negation"))),
        },
        _ => return Err(Error::Precondition(format!("{f} is not a conditional or its negation"))),
    };
    if x >= m.len() {
        return Err(Error::UnknownState(x.to_string()));
    }
    let ea = m.extension(a)?;
    let eb = m.extension(b)?;
    let pairs = if negated {
        m.frame().r2_pairs(x)
    } else {
        m.frame().r1_pairs(x)
    };
    if pairs.is_empty() {
        return Err(Error::Precondition(format!(
            "no {} pairs at state `{}`",
            if negated { "R2" } else { "R1" },
            m.frame().name(x)
        )));
    }
    let hits = pairs
        .iter()
        .filter(|&&(y, z)| {
            let ante = ea.at(y).t;
            match (negated, mode) {
                (false, _) => !ante || eb.at(z).t,
                (true, Mode::AsWritten) => !ante || eb.at(z).f,
                (true, Mode::Conjunctive) => ante && eb.at(z).f,
            }
        })
        .count();
    Ok(Rational::new(hits.into(), pairs.len().into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::Frame;
    use crate::models::tests::contraposition_model;
    use crate::probability::{rational, validate_probability, ValidateOptions};
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn stream(values: &[TruthValue]) -> TrialStream {
        TrialStream::from_trials(
            vec!["p".into()],
            values.iter().map(|&v| Assignment::new().with("p", v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn four_trial_counts() {
        let ts = stream(&[TruthValue::T, TruthValue::TF, TruthValue::N, TruthValue::F]);
        let table = run_trials(&ts, &[f("p"), f("~p"), f("p & ~p")]).unwrap();
        assert_eq!(table.freq(&f("p")).unwrap(), 2);
        assert_eq!(table.freq(&f("~p")).unwrap(), 2);
        assert_eq!(table.rfreq(&f("p")).unwrap(), rational(1, 2));
        assert!(validate_probability(&table.rfreq_table().unwrap(), ValidateOptions::default()).is_empty());
    }

    #[test]
    fn glut_trial() {
        let ts = stream(&[TruthValue::TF]);
        let table = run_trials(&ts, &[f("p"), f("~p"), f("p & ~p")]).unwrap();
        for g in ["p", "~p", "p & ~p"] {
            assert_eq!(table.rfreq(&f(g)).unwrap(), rational(1, 1));
        }
    }

    #[test]
    fn empty_stream_has_no_rfreq() {
        let table = run_trials(&stream(&[]), &[f("p")]).unwrap();
        assert!(table.rfreq(&f("p")).is_err());
        let ts = stream(&[TruthValue::F]);
        let table = run_trials(&ts, &[f("p"), f("~p & p")]).unwrap();
        assert!(table.conditional(&f("~p"), &f("p")).is_err());
    }

    #[test]
    fn trial_file_round_trip() {
        let text = "# a run\natoms: q p\nT N\nTF F # glut\n\nN N\n";
        let ts = TrialStream::parse(text).unwrap();
        assert_eq!(ts.atoms(), ["p", "q"]);
        assert_eq!(ts.len(), 3);
        assert_eq!(ts.trials()[1].get("q"), Some(TruthValue::TF));
        assert_eq!(TrialStream::parse(&ts.render()).unwrap(), ts);
        assert!(TrialStream::parse("atoms: p\nT T\n").is_err());
        assert!(TrialStream::parse("p\nT\n").is_err());
        assert!(TrialStream::parse("atoms: p\nX\n").is_err());
    }

    #[test]
    fn generation_is_reproducible() {
        let d = StateDistribution::uniform(&["p".into()]);
        let a = TrialStream::generate(&d, 50, 9).unwrap();
        let b = TrialStream::generate(&d, 50, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 50);
        let point = StateDistribution::point(Assignment::new().with("p", TruthValue::F));
        let c = TrialStream::generate(&point, 5, 1).unwrap();
        assert!(c.trials().iter().all(|t| t.get("p") == Some(TruthValue::F)));
    }

    #[test]
    fn contraposition_model_frequencies() {
        let m = contraposition_model();
        let u = m.state("u").unwrap();
        assert_eq!(conditional_rfreq(&m, u, &f("A -> ~B"), Mode::AsWritten).unwrap(), rational(1, 1));
        assert_eq!(conditional_rfreq(&m, u, &f("~(A -> B)"), Mode::Conjunctive).unwrap(), rational(0, 1));
        assert_eq!(conditional_rfreq(&m, u, &f("~(A -> B)"), Mode::AsWritten).unwrap(), rational(1, 1));
        assert!(conditional_rfreq(&m, u, &f("A & B"), Mode::AsWritten).is_err());
    }

    #[test]
    fn ninety_percent_regularity() {
        let pairs = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)];
        let r1: Vec<(usize, usize, usize)> = pairs.iter().map(|&(y, z)| (0, y, z)).collect();
        let frame = Frame::from_indices(Frame::default_names(4), &[0], &r1, &[]);
        let mut val = vec![vec![TruthValue::T, TruthValue::T]; 4];
        val[3][1] = TruthValue::N;
        let m = Model::new(frame, vec!["p".into(), "q".into()], val).unwrap();
        assert_eq!(conditional_rfreq(&m, 0, &f("p -> q"), Mode::AsWritten).unwrap(), rational(9, 10));
        assert!(conditional_rfreq(&m, 0, &f("~(p -> q)"), Mode::AsWritten).is_err());
    }
}
