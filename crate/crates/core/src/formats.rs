//! JSON file formats: models, distributions, bet families, quotes,
//! probability tables and update scenarios.
//!
//! Rationals are written as strings (`"3/4"`, `"1"`, `"0.25"`), formulas in
//! the surface syntax, truth values as `N`, `T`, `F` or `TF`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::betting::{Bet, BetKind, Quote};
use crate::error::{Error, Result};
use crate::fde::{Assignment, TruthValue};
use crate::frames::Frame;
use crate::models::Model;
use crate::probability::{format_rational, parse_rational, ProbabilityTable, Rational, StateDistribution};
use crate::syntax::Formula;
use crate::updating::{AdamsInput, UpdateRule, UpdateSpec};

fn json_error(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(json_error)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub states: Vec<String>,
    #[serde(rename = "L")]
    pub l: Vec<String>,
    #[serde(rename = "R1", default)]
    pub r1: Vec<[String; 3]>,
    #[serde(rename = "R2", default)]
    pub r2: Vec<[String; 3]>,
    /// State to atom values. May be omitted for a bare frame.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub valuation: BTreeMap<String, BTreeMap<String, TruthValue>>,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<ModelFile> {
        from_json(text)
    }

    pub fn frame(&self) -> Result<Frame> {
        Frame::new(&self.states, &self.l, &self.r1, &self.r2)
    }

    /// Every state must value the same atoms.
    pub fn model(&self) -> Result<Model> {
        let frame = self.frame()?;
        for s in self.valuation.keys() {
            frame.index_of(s)?;
        }
        let per_state = self
            .states
            .iter()
            .map(|s| {
                self.valuation
                    .get(s)
                    .map(|row| Assignment(row.clone()))
                    .ok_or_else(|| Error::Format(format!("state `{s}` has no valuation")))
            })
            .collect::<Result<Vec<_>>>()?;
        Model::from_assignments(frame, &per_state)
    }

    pub fn from_frame(f: &Frame) -> ModelFile {
        let name = |x: usize| f.name(x).to_string();
        let triples = |ts: Vec<(usize, usize, usize)>| {
            ts.into_iter()
                .map(|(x, y, z)| [name(x), name(y), name(z)])
                .collect()
        };
        ModelFile {
            states: f.names().to_vec(),
            l: f.l_states().map(name).collect(),
            r1: triples(f.r1_triples()),
            r2: triples(f.r2_triples()),
            valuation: BTreeMap::new(),
        }
    }

    pub fn from_model(m: &Model) -> ModelFile {
        let mut file = ModelFile::from_frame(m.frame());
        for x in 0..m.len() {
            file.valuation
                .insert(m.frame().name(x).to_string(), m.assignment(x).0);
        }
        file
    }

    pub fn render(&self) -> String {
        to_json(self)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassEntry {
    pub assignment: BTreeMap<String, TruthValue>,
    pub mass: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionFile {
    pub atoms: Vec<String>,
    pub masses: Vec<MassEntry>,
}

impl DistributionFile {
    pub fn parse(text: &str) -> Result<DistributionFile> {
        from_json(text)
    }

    pub fn distribution(&self) -> Result<StateDistribution> {
        StateDistribution::new(self.atoms.clone(), self.entries()?)
    }

    fn entries(&self) -> Result<Vec<(Assignment, Rational)>> {
        self.masses
            .iter()
            .map(|e| Ok((Assignment(e.assignment.clone()), parse_rational(&e.mass)?)))
            .collect()
    }

    pub fn from_masses(atoms: &[String], masses: &[(Assignment, Rational)]) -> DistributionFile {
        DistributionFile {
            atoms: atoms.to_vec(),
            masses: masses
                .iter()
                .map(|(a, m)| MassEntry {
                    assignment: a.0.clone(),
                    mass: format_rational(m),
                })
                .collect(),
        }
    }

    pub fn from_distribution(d: &StateDistribution) -> DistributionFile {
        DistributionFile::from_masses(d.atoms(), d.masses())
    }

    pub fn render(&self) -> String {
        to_json(self)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BetEntry {
    pub kind: String,
    pub target: Formula,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<Formula>,
    pub quotient: String,
    pub stake: String,
}

impl BetEntry {
    pub fn bet(&self) -> Result<Bet> {
        Bet::new(
            self.kind.parse::<BetKind>()?,
            self.target.clone(),
            self.condition.clone(),
            parse_rational(&self.quotient)?,
            parse_rational(&self.stake)?,
        )
    }

    pub fn from_bet(b: &Bet) -> BetEntry {
        BetEntry {
            kind: b.kind().token().to_string(),
            target: b.target().clone(),
            condition: b.condition().cloned(),
            quotient: format_rational(b.quotient()),
            stake: format_rational(b.stake()),
        }
    }
}

/// A quotient for `target`, optionally conditional on `condition` or
/// announced for after learning `updated_on`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuoteEntry {
    pub target: Formula,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<Formula>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub updated_on: Option<Formula>,
    pub quotient: String,
}

impl QuoteEntry {
    pub fn quote(&self) -> Result<Quote> {
        let q = parse_rational(&self.quotient)?;
        let t = self.target.clone();
        match (&self.condition, &self.updated_on) {
            (None, None) => Ok(Quote::plain(t, q)),
            (Some(c), None) => Ok(Quote::conditional(t, c.clone(), q)),
            (None, Some(b)) => Ok(Quote::updated(t, b.clone(), q)),
            (Some(_), Some(_)) => Err(Error::Format(
                "a quote takes `condition` or `updated_on`, not both".into(),
            )),
        }
    }
}

/// Either a family of bets (every entry has a stake) or a list of quotes.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BookFile {
    Bets(Vec<BetEntry>),
    Quotes(Vec<QuoteEntry>),
}

impl BookFile {
    pub fn parse(text: &str) -> Result<BookFile> {
        from_json(text)
    }
}

pub fn parse_bets(text: &str) -> Result<Vec<Bet>> {
    let entries: Vec<BetEntry> = from_json(text)?;
    entries.iter().map(BetEntry::bet).collect()
}

pub fn render_bets(bets: &[Bet]) -> String {
    to_json(&bets.iter().map(BetEntry::from_bet).collect::<Vec<_>>())
}

pub fn parse_quotes(text: &str) -> Result<Vec<Quote>> {
    let entries: Vec<QuoteEntry> = from_json(text)?;
    entries.iter().map(QuoteEntry::quote).collect()
}

/// An object mapping formulas to values, e.g. `{"p": "1/2", "p | q": "3/4"}`.
pub fn parse_table(text: &str) -> Result<ProbabilityTable> {
    let raw: BTreeMap<String, String> = from_json(text)?;
    let mut t = ProbabilityTable::new();
    for (f, v) in raw {
        t.insert(crate::syntax::parse(&f)?, parse_rational(&v)?)?;
    }
    Ok(t)
}

pub fn render_table(t: &ProbabilityTable) -> String {
    let raw: BTreeMap<String, String> = t
        .iter()
        .map(|(f, v)| (f.render(), format_rational(v)))
        .collect();
    to_json(&raw)
}

/// A distribution given inline or as a path relative to the scenario file.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistributionSource {
    Path(String),
    Inline(DistributionFile),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellEntry {
    pub formula: Formula,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
}

/// Which inputs each rule reads:
///
/// | rule | `distributions` | `formulas` | other |
/// |---|---|---|---|
/// | `bayes` | `p` | `b` | |
/// | `jeffrey` | `p` | | `cells` with weights |
/// | `coordinated` | `p_x`, `p_y`, `p_z` | `b` | |
/// | `coordinated-bayes` | `p_y`, `p_z` | `b1`, `b2` | |
/// | `coordinated-jeffrey` | `p_y`, `p_z_star` | | `cells` |
/// | `adams` | `p_y`, `p_z` | `a1`, `a2`, `b1`, `b2` | `new_conditionals` |
///
/// `query` lists formulas whose updated values are reported.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub rule: String,
    pub distributions: BTreeMap<String, DistributionSource>,
    #[serde(default)]
    pub formulas: BTreeMap<String, Formula>,
    #[serde(default)]
    pub cells: Vec<CellEntry>,
    #[serde(default)]
    pub new_conditionals: Vec<String>,
    #[serde(default)]
    pub query: Vec<Formula>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Scenario {
    pub spec: UpdateSpec,
    pub query: Vec<Formula>,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<ScenarioFile> {
        from_json(text)
    }

    /// Resolves file references against `base`.
    pub fn scenario(&self, base: &Path) -> Result<Scenario> {
        let rule: UpdateRule = self.rule.parse()?;
        let dist = |key: &str| -> Result<StateDistribution> {
            let src = self
                .distributions
                .get(key)
                .ok_or_else(|| Error::Format(format!("rule `{rule}` needs distribution `{key}`")))?;
            match src {
                DistributionSource::Inline(d) => d.distribution(),
                DistributionSource::Path(p) => {
                    let path: PathBuf = base.join(p);
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
                    DistributionFile::parse(&text)?.distribution()
                }
            }
        };
        let formula = |key: &str| -> Result<Formula> {
            self.formulas
                .get(key)
                .cloned()
                .ok_or_else(|| Error::Format(format!("rule `{rule}` needs formula `{key}`")))
        };
        let spec = match rule {
            UpdateRule::Bayes => UpdateSpec::Bayes {
                p: dist("p")?,
                b: formula("b")?,
            },
            UpdateRule::Jeffrey => UpdateSpec::Jeffrey {
                p: dist("p")?,
                cells: self
                    .cells
                    .iter()
                    .map(|c| {
                        let w = c.weight.as_deref().ok_or_else(|| {
                            Error::Format(format!("cell `{}` has no weight", c.formula))
                        })?;
                        Ok((c.formula.clone(), parse_rational(w)?))
                    })
                    .collect::<Result<_>>()?,
            },
            UpdateRule::Coordinated => UpdateSpec::Coordinated {
                p_x: dist("p_x")?,
                p_y: dist("p_y")?,
                p_z: dist("p_z")?,
                b: formula("b")?,
            },
            UpdateRule::CoordinatedBayes => UpdateSpec::CoordinatedBayes {
                p_y: dist("p_y")?,
                p_z: dist("p_z")?,
                b1: formula("b1")?,
                b2: formula("b2")?,
            },
            UpdateRule::CoordinatedJeffrey => UpdateSpec::CoordinatedJeffrey {
                p_y: dist("p_y")?,
                p_z_star: dist("p_z_star")?,
                cells: self.cells.iter().map(|c| c.formula.clone()).collect(),
            },
            UpdateRule::Adams => {
                let [n1, n2] = match self.new_conditionals.as_slice() {
                    [a, b] => [parse_rational(a)?, parse_rational(b)?],
                    _ => return Err(Error::Format("adams needs two `new_conditionals`".into())),
                };
                UpdateSpec::Adams(AdamsInput {
                    p_y: dist("p_y")?,
                    new_conditionals: [n1, n2],
                    p_z: dist("p_z")?,
                    a1: formula("a1")?,
                    a2: formula("a2")?,
                    b1: formula("b1")?,
                    b2: formula("b2")?,
                })
            }
        };
        Ok(Scenario {
            spec,
            query: self.query.clone(),
        })
    }
}
