use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use lablogic::betting::{
    construct_violation_stakes, find_violation, is_dutch_book, net_gain_profile, Bet,
};
use lablogic::fde::{fde_counterexample, Assignment};
use lablogic::formats::{to_json, BookFile, DistributionFile, ModelFile, ScenarioFile};
use lablogic::labsim::{conditional_rfreq, run_trials, Mode, TrialStream};
use lablogic::probability::{format_rational, parse_rational, total_probability_check, ValidateOptions};
use lablogic::proof::{check_proof, LogicConfig, Proof};
use lablogic::updating::{check_characterization, Updated};
use lablogic::{
    check_persistence, consequence_in_model, eval_formula, eval_model, find_countermodel, parse,
    validate_frame, validate_probability, ConditionSet, Formula, Probability, SearchBounds,
    TruthValue,
};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "lablogic", version, about = "Four-valued relevant logic and its probability calculus")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for generated trial streams.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// State bound for countermodel search.
    #[arg(long, global = true, default_value_t = 3)]
    max_states: usize,
    /// Frame conditions beyond i-v, e.g. `vi,viii` or `all`.
    #[arg(long, global = true)]
    conditions: Option<String>,
    /// Reading of negated conditional frequencies.
    #[arg(long, global = true, default_value = "as-written")]
    mode: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula and print it back in canonical form.
    Parse { formula: String },
    /// Evaluate a formula in a model or under an assignment.
    Eval {
        formula: String,
        /// Model file; evaluates at `--state`, or at every state.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        state: Option<String>,
        /// Atom values such as `p=T`, for ->-free formulas.
        #[arg(long = "assign", value_delimiter = ',')]
        assign: Vec<String>,
    },
    /// Check the frame conditions of a model or frame file.
    CheckFrame { file: PathBuf },
    /// Check frame conditions and persistence of a model file.
    CheckModel {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Decide consequence: four-valued entailment, or truth in a model.
    Entails {
        #[arg(long = "premise")]
        premises: Vec<String>,
        #[arg(long)]
        conclusion: String,
        #[arg(long)]
        model: Option<PathBuf>,
        /// In a model, only look at L-states.
        #[arg(long)]
        at_l_only: bool,
    },
    /// Check a proof file.
    ProveCheck {
        file: PathBuf,
        /// Optional axioms to enable, e.g. `A12,A14` or `all`.
        #[arg(long, default_value = "")]
        axioms: String,
    },
    /// Search for a finite countermodel.
    Countermodel {
        #[arg(long = "premise")]
        premises: Vec<String>,
        #[arg(long)]
        conclusion: String,
    },
    /// Check a probability table against the probability axioms.
    ProbValidate {
        file: PathBuf,
        /// Also require some value to be positive.
        #[arg(long)]
        non_trivial: bool,
    },
    /// Total probability over a family that behaves as a partition.
    Ttp {
        distribution: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long = "cell", required = true)]
        cells: Vec<String>,
    },
    /// Look for a Dutch book in a list of quotes or a family of bets.
    DutchBook {
        file: PathBuf,
        /// Stake size for constructed bets.
        #[arg(long, default_value = "1")]
        stake: String,
    },
    /// Apply an updating rule from a scenario file.
    Update { scenario: PathBuf },
    /// Relative frequencies over a trial stream, or of a conditional in a model.
    Simulate {
        /// Trial file.
        #[arg(long, conflicts_with_all = ["distribution", "model"])]
        trials: Option<PathBuf>,
        /// Distribution to draw `--n` trials from.
        #[arg(long, requires = "n")]
        distribution: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        /// Model whose R1/R2 pairs at `--state` give the frequency of a conditional.
        #[arg(long, requires = "state", conflicts_with = "distribution")]
        model: Option<PathBuf>,
        #[arg(long)]
        state: Option<String>,
        #[arg(long = "formula", required = true)]
        formulas: Vec<String>,
        /// Print the generated trials as well.
        #[arg(long)]
        emit_trials: bool,
    },
}

/// What a command found: exit code 0 or 1, text and JSON renderings.
struct Report {
    failed: bool,
    text: String,
    json: Value,
}

impl Report {
    fn new(failed: bool, text: String, json: Value) -> Report {
        Report { failed, text, json }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn formula(text: &str) -> anyhow::Result<Formula> {
    parse(text).map_err(|e| anyhow!("`{text}`: {e}"))
}

fn formulas(texts: &[String]) -> anyhow::Result<Vec<Formula>> {
    texts.iter().map(|t| formula(t)).collect()
}

fn conditions(g: &Global) -> anyhow::Result<ConditionSet> {
    Ok(match &g.conditions {
        Some(c) => c.parse()?,
        None => ConditionSet::basic(),
    })
}

fn labels(c: ConditionSet) -> Vec<String> {
    c.conditions().iter().map(|c| c.to_string()).collect()
}

fn assignment_json(a: &Assignment) -> Value {
    json!(a.0.iter().map(|(k, v)| (k.clone(), json!(v.token()))).collect::<serde_json::Map<_, _>>())
}

fn assignment_text(a: &Assignment) -> String {
    let parts: Vec<String> = a.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
    parts.join(" ")
}

fn run(cli: Cli) -> anyhow::Result<Report> {
    let g = &cli.global;
    match cli.command {
        Command::Parse { formula: text } => {
            let f = formula(&text)?;
            let atoms: Vec<String> = f.atoms().into_iter().collect();
            Ok(Report::new(
                false,
                format!("{f}\n"),
                json!({"formula": f.render(), "atoms": atoms, "depth": f.depth()}),
            ))
        }
        Command::Eval {
            formula: text,
            model,
            state,
            assign,
        } => {
            let f = formula(&text)?;
            if let Some(path) = model {
                let m = ModelFile::parse(&read(&path)?)?.model()?;
                let states: Vec<usize> = match &state {
                    Some(s) => vec![m.state(s)?],
                    None => (0..m.len()).collect(),
                };
                let mut text = String::new();
                let mut values = serde_json::Map::new();
                for x in states {
                    let v = eval_model(&m, x, &f)?;
                    writeln!(text, "{}: {v}", m.frame().name(x))?;
                    values.insert(m.frame().name(x).to_string(), json!(v.token()));
                }
                return Ok(Report::new(false, text, json!({"formula": f.render(), "values": values})));
            }
            if state.is_some() {
                bail!("--state needs --model");
            }
            let mut a = Assignment::new();
            for entry in &assign {
                let (atom, value) = entry
                    .split_once('=')
                    .ok_or_else(|| anyhow!("`{entry}` should read atom=VALUE"))?;
                a.set(atom.trim(), value.trim().parse::<TruthValue>()?);
            }
            let v = eval_formula(&a, &f)?;
            Ok(Report::new(
                false,
                format!("{v}\n"),
                json!({"formula": f.render(), "value": v.token(), "designated": v.designated()}),
            ))
        }
        Command::CheckFrame { file } => {
            let frame = ModelFile::parse(&read(&file)?)?.frame()?;
            let conds = conditions(g)?;
            let violations = validate_frame(&frame, conds);
            let mut text = String::new();
            if violations.is_empty() {
                text.push_str("all conditions satisfied\n");
            }
            for v in &violations {
                writeln!(text, "{}", v.render(&frame))?;
            }
            let js: Vec<Value> = violations
                .iter()
                .map(|v| {
                    let w: Vec<&str> = v.witness.iter().map(|&s| frame.name(s)).collect();
                    json!({"condition": v.condition.to_string(), "witness": w, "message": v.render(&frame)})
                })
                .collect();
            Ok(Report::new(
                !violations.is_empty(),
                text,
                json!({"conditions": labels(conds), "satisfied": violations.is_empty(), "violations": js}),
            ))
        }
        Command::CheckModel { file, depth } => {
            let m = ModelFile::parse(&read(&file)?)?.model()?;
            let conds = conditions(g)?;
            let violations = validate_frame(m.frame(), conds);
            let persistence = check_persistence(&m, depth);
            let mut text = String::new();
            for v in &violations {
                writeln!(text, "{}", v.render(m.frame()))?;
            }
            let name = |x: usize| m.frame().name(x).to_string();
            for p in &persistence {
                writeln!(
                    text,
                    "persistence fails: {} <= {} but {} in v({}, {}) and not in v({}, {})",
                    name(p.lower),
                    name(p.upper),
                    p.polarity,
                    name(p.lower),
                    p.formula,
                    name(p.upper),
                    p.formula
                )?;
            }
            let ok = violations.is_empty() && persistence.is_empty();
            if ok {
                writeln!(text, "frame conditions hold and persistence holds to depth {depth}")?;
            }
            let pj: Vec<Value> = persistence
                .iter()
                .map(|p| json!({"lower": name(p.lower), "upper": name(p.upper), "formula": p.formula.render(), "polarity": p.polarity.to_string()}))
                .collect();
            let vj: Vec<String> = violations.iter().map(|v| v.render(m.frame())).collect();
            Ok(Report::new(
                !ok,
                text,
                json!({"conditions": labels(conds), "depth": depth, "frame_violations": vj, "persistence_violations": pj}),
            ))
        }
        Command::Entails {
            premises,
            conclusion,
            model,
            at_l_only,
        } => {
            let ps = formulas(&premises)?;
            let c = formula(&conclusion)?;
            if let Some(path) = model {
                let m = ModelFile::parse(&read(&path)?)?.model()?;
                let at_l = at_l_only || ps.is_empty();
                let holds = consequence_in_model(&m, &ps, &c, at_l)?;
                return Ok(Report::new(
                    !holds,
                    format!("{}\n", if holds { "holds" } else { "fails" }),
                    json!({"holds": holds, "at_l_only": at_l}),
                ));
            }
            let premise = Formula::conjunction(ps).ok_or_else(|| anyhow!("four-valued entailment needs a premise"))?;
            let counter = fde_counterexample(&premise, &c)?;
            let text = match &counter {
                None => "holds\n".to_string(),
                Some(a) => format!("fails: {}\n", assignment_text(a)),
            };
            Ok(Report::new(
                counter.is_some(),
                text,
                json!({"holds": counter.is_none(), "counterexample": counter.as_ref().map(assignment_json)}),
            ))
        }
        Command::ProveCheck { file, axioms } => {
            let proof = Proof::parse(&read(&file)?)?;
            let cfg: LogicConfig = axioms.parse()?;
            match check_proof(&proof, &cfg) {
                Ok(()) => {
                    let concl = proof.conclusion().map(Formula::render).unwrap_or_default();
                    Ok(Report::new(
                        false,
                        format!("accepted: {concl}\n"),
                        json!({"accepted": true, "conclusion": concl, "lines": proof.lines.len()}),
                    ))
                }
                Err(rej) => Ok(Report::new(
                    true,
                    format!("rejected at {rej}\n"),
                    json!({"accepted": false, "line": rej.line, "reason": rej.reason}),
                )),
            }
        }
        Command::Countermodel {
            premises,
            conclusion,
        } => {
            let ps = formulas(&premises)?;
            let c = formula(&conclusion)?;
            let bounds = SearchBounds {
                max_states: g.max_states,
                conditions: conditions(g)?,
            };
            match find_countermodel(&ps, &c, bounds)? {
                Some(m) => {
                    let file = ModelFile::from_model(&m);
                    Ok(Report::new(true, file.render(), json!({"found": true, "model": file})))
                }
                None => Ok(Report::new(
                    false,
                    format!("no countermodel with at most {} states\n", g.max_states),
                    json!({"found": false, "max_states": g.max_states}),
                )),
            }
        }
        Command::ProbValidate { file, non_trivial } => {
            let table = lablogic::formats::parse_table(&read(&file)?)?;
            let v = validate_probability(&table, ValidateOptions { non_trivial });
            let mut text = String::new();
            if v.is_empty() {
                writeln!(text, "coherent over {} formulas", table.len())?;
            }
            for x in &v {
                writeln!(text, "{x}")?;
            }
            let js: Vec<Value> = v
                .iter()
                .map(|x| json!({"axiom": x.axiom(), "message": x.to_string()}))
                .collect();
            Ok(Report::new(!v.is_empty(), text, json!({"coherent": v.is_empty(), "violations": js})))
        }
        Command::Ttp {
            distribution,
            target,
            cells,
        } => {
            let d = DistributionFile::parse(&read(&distribution)?)?.distribution()?;
            let a = formula(&target)?;
            let bs = formulas(&cells)?;
            match total_probability_check(&d, &a, &bs) {
                Ok((lhs, rhs)) => {
                    let (l, r) = (format_rational(&lhs), format_rational(&rhs));
                    Ok(Report::new(
                        lhs != rhs,
                        format!("p({a}) = {l}\nsum of p({a} | b) p(b) = {r}\n"),
                        json!({"partition": true, "lhs": l, "rhs": r, "equal": lhs == rhs}),
                    ))
                }
                Err(lablogic::Error::Precondition(why)) => Ok(Report::new(
                    true,
                    format!("{why}\n"),
                    json!({"partition": false, "reason": why}),
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::DutchBook { file, stake } => {
            let magnitude = parse_rational(&stake)?;
            match BookFile::parse(&read(&file)?)? {
                BookFile::Quotes(entries) => {
                    let quotes = entries.iter().map(|q| q.quote()).collect::<Result<Vec<_>, _>>()?;
                    let Some(v) = find_violation(&quotes)? else {
                        return Ok(Report::new(false, "no violation found\n".into(), json!({"violation": null})));
                    };
                    let recipe = construct_violation_stakes(&v, &magnitude)?;
                    let check = is_dutch_book(&recipe.bets)?;
                    let mut text = format!("violation of {v}\nstake S = {}\n", format_rational(&recipe.stake));
                    for b in &recipe.bets {
                        writeln!(text, "  {b}")?;
                    }
                    writeln!(text, "best net gain {}", format_rational(&check.max_gain))?;
                    Ok(Report::new(
                        true,
                        text,
                        json!({
                            "violation": {"axiom": v.axiom(), "message": v.to_string()},
                            "stake": format_rational(&recipe.stake),
                            "bets": bets_json(&recipe.bets),
                            "sure_loss": check.sure_loss,
                            "max_gain": format_rational(&check.max_gain),
                        }),
                    ))
                }
                BookFile::Bets(entries) => {
                    let bets = entries.iter().map(|b| b.bet()).collect::<Result<Vec<_>, _>>()?;
                    let profile = net_gain_profile(&bets)?;
                    let check = is_dutch_book(&bets)?;
                    let mut text = String::new();
                    for (a, gain) in &profile.gains {
                        writeln!(text, "{}: {}", assignment_text(a), format_rational(gain))?;
                    }
                    writeln!(
                        text,
                        "{}",
                        if check.sure_loss { "Dutch book: every outcome loses" } else { "not a Dutch book" }
                    )?;
                    let gains: Vec<Value> = profile
                        .gains
                        .iter()
                        .map(|(a, gain)| json!({"assignment": assignment_json(a), "gain": format_rational(gain)}))
                        .collect();
                    Ok(Report::new(
                        check.sure_loss,
                        text,
                        json!({"sure_loss": check.sure_loss, "max_gain": format_rational(&check.max_gain), "gains": gains}),
                    ))
                }
            }
        }
        Command::Update { scenario } => {
            let base = scenario.parent().map(Path::to_path_buf).unwrap_or_default();
            let s = ScenarioFile::parse(&read(&scenario)?)?.scenario(&base)?;
            let out = s.spec.apply()?;
            let query = if s.query.is_empty() { s.spec.cells() } else { s.query.clone() };
            let ch = check_characterization(&s.spec, &out, &query)?;
            let mut text = format!("rule {}\n", s.spec.rule());
            let mut values = serde_json::Map::new();
            for f in &query {
                let v = format_rational(&out.prob(f)?);
                writeln!(text, "p*({f}) = {v}")?;
                values.insert(f.render(), json!(v));
            }
            writeln!(
                text,
                "characterization {}",
                if ch.holds() { "holds" } else { "fails" }
            )?;
            for failure in &ch.failures {
                writeln!(text, "  {failure}")?;
            }
            let dist = match &out {
                Updated::Distribution(d) => Some(DistributionFile::from_distribution(d)),
                Updated::Measure(m) => Some(DistributionFile::from_masses(m.atoms(), m.masses())),
                Updated::Coordinated(_) => None,
            };
            Ok(Report::new(
                !ch.holds(),
                text,
                json!({"rule": s.spec.rule().token(), "values": values, "characterization": ch.holds(), "failures": ch.failures, "distribution": dist}),
            ))
        }
        Command::Simulate {
            trials,
            distribution,
            n,
            model,
            state,
            formulas: texts,
            emit_trials,
        } => {
            let fs = formulas(&texts)?;
            if let Some(path) = model {
                let mode: Mode = g.mode.parse()?;
                let m = ModelFile::parse(&read(&path)?)?.model()?;
                let x = m.state(state.as_deref().unwrap_or_default())?;
                let mut text = String::new();
                let mut values = serde_json::Map::new();
                for f in &fs {
                    let v = format_rational(&conditional_rfreq(&m, x, f, mode)?);
                    writeln!(text, "rfreq({f}) = {v}")?;
                    values.insert(f.render(), json!(v));
                }
                return Ok(Report::new(false, text, json!({"mode": mode.to_string(), "values": values})));
            }
            let ts = match (trials, distribution) {
                (Some(p), _) => TrialStream::parse(&read(&p)?)?,
                (None, Some(p)) => {
                    let d = DistributionFile::parse(&read(&p)?)?.distribution()?;
                    TrialStream::generate(&d, n.unwrap_or_default(), g.seed)?
                }
                (None, None) => bail!("simulate needs --trials, --distribution or --model"),
            };
            let table = run_trials(&ts, &fs)?;
            let mut text = String::new();
            if emit_trials {
                text.push_str(&ts.render());
            }
            writeln!(text, "n = {}", table.n)?;
            let mut rows = Vec::new();
            for f in &fs {
                let c = table.freq(f)?;
                let r = if table.n == 0 { None } else { Some(format_rational(&table.rfreq(f)?)) };
                writeln!(text, "{f}: freq {c}, rfreq {}", r.as_deref().unwrap_or("undefined"))?;
                rows.push(json!({"formula": f.render(), "freq": c, "rfreq": r}));
            }
            let mut js = json!({"n": table.n, "frequencies": rows});
            if emit_trials {
                js["trials"] = json!(ts.render());
            }
            Ok(Report::new(false, text, js))
        }
    }
}

fn bets_json(bets: &[Bet]) -> Value {
    serde_json::from_str(&lablogic::formats::render_bets(bets)).expect("rendered bets are JSON")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let json_out = cli.global.json;
    match run(cli) {
        Ok(report) => {
            if json_out {
                print!("{}", to_json(&report.json));
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.failed as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
