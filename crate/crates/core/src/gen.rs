//! Seeded random instances: frames, models, formulas and distributions.
//!
//! Frames are drawn at random and then repaired by adding tuples until every
//! requested condition holds, so each generator always returns a valid
//! instance.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::fde::{Assignment, TruthValue};
use crate::frames::{validate_frame, Condition, ConditionSet, Frame};
use crate::models::Model;
use crate::probability::{Rational, StateDistribution};
use crate::syntax::Formula;
use crate::updating::{AdamsInput, UpdateRule, UpdateSpec};

/// A frame on `n` states satisfying `i`..`v` and every condition in `conds`.
/// `density` is the probability of each initial triple.
pub fn random_frame<R: Rng>(rng: &mut R, n: usize, conds: ConditionSet, density: f64) -> Frame {
    assert!(n > 0);
    let names = Frame::default_names(n);
    let mut l = vec![false; n];
    for slot in l.iter_mut() {
        *slot = rng.gen_bool(0.3);
    }
    if !l.iter().any(|&b| b) {
        l[rng.gen_range(0..n)] = true;
    }
    let mut r1: Vec<bool> = (0..n * n * n).map(|_| rng.gen_bool(density)).collect();
    let mut r2: Vec<bool> = (0..n * n * n).map(|_| rng.gen_bool(density)).collect();
    let at = |x: usize, y: usize, z: usize| (x * n + y) * n + z;
    loop {
        let frame = Frame::from_bits(names.clone(), l.clone(), r1.clone(), r2.clone());
        let Some(v) = validate_frame(&frame, conds).into_iter().next() else {
            return frame;
        };
        let w = &v.witness;
        let u = frame.l_states().next().unwrap_or(0);
        match v.condition {
            Condition::I | Condition::A => r1[at(u, w[0], w[0])] = true,
            Condition::II => r1[at(u, w[0], w[2])] = true,
            Condition::III | Condition::D => l[*w.last().unwrap()] = true,
            Condition::IV | Condition::C => r1[at(w[0], w[2], w[3])] = true,
            Condition::V => r2[at(w[1], w[2], w[3])] = true,
            Condition::VI => r1[at(w[0], w[0], w[0])] = true,
            Condition::VII => r2[at(w[0], w[0], w[0])] = true,
            Condition::VIII | Condition::E | Condition::X => r1[at(w[0], w[2], w[2])] = true,
            Condition::IX => r1[at(w[0], w[1], w[1])] = true,
            Condition::B => r1[at(w[0], w[1], w[3])] = true,
        }
    }
}

/// A model over `frame` whose valuation satisfies atomic persistence.
pub fn random_valuation<R: Rng>(rng: &mut R, frame: Frame, atoms: &[String]) -> Model {
    let n = frame.len();
    let mut val: Vec<Vec<TruthValue>> = (0..n)
        .map(|_| {
            atoms
                .iter()
                .map(|_| TruthValue::ALL[rng.gen_range(0..4)])
                .collect()
        })
        .collect();
    let leq = frame.derive_leq();
    let mut changed = true;
    while changed {
        changed = false;
        for &(x, y) in &leq {
            for i in 0..atoms.len() {
                let (lo, up) = (val[x][i], val[y][i]);
                let merged = TruthValue::new(lo.t || up.t, lo.f || up.f);
                if merged != up {
                    val[y][i] = merged;
                    changed = true;
                }
            }
        }
    }
    Model::new(frame, atoms.to_vec(), val).expect("generated model is well-formed")
}

/// A valid model with between 1 and `max_states` states.
pub fn random_model<R: Rng>(
    rng: &mut R,
    max_states: usize,
    atoms: &[String],
    conds: ConditionSet,
) -> Model {
    let n = rng.gen_range(1..=max_states);
    let density = rng.gen_range(0.05..0.35);
    let frame = random_frame(rng, n, conds, density);
    random_valuation(rng, frame, atoms)
}

/// A formula of depth at most `max_depth`.
pub fn random_formula<R: Rng>(
    rng: &mut R,
    atoms: &[String],
    max_depth: usize,
    allow_imp: bool,
) -> Formula {
    if max_depth == 0 || rng.gen_bool(0.25) {
        return Formula::Atom(atoms.choose(rng).expect("at least one atom").clone());
    }
    let ops = if allow_imp { 4 } else { 3 };
    let sub = |rng: &mut R| random_formula(rng, atoms, max_depth - 1, allow_imp);
    match rng.gen_range(0..ops) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        _ => Formula::imp(sub(rng), sub(rng)),
    }
}

/// A distribution over at most `max_support` assignments drawn from
/// `candidates` (all assignments when `None`), with integer weights below
/// `max_weight`.
pub fn random_distribution<R: Rng>(
    rng: &mut R,
    atoms: &[String],
    candidates: Option<&[Assignment]>,
    max_support: usize,
    max_weight: u32,
) -> StateDistribution {
    let all: Vec<Assignment> = match candidates {
        Some(c) => c.to_vec(),
        None => Assignment::enumerate(atoms).collect(),
    };
    assert!(!all.is_empty() && max_support > 0 && max_weight > 0);
    let k = rng.gen_range(1..=max_support.min(all.len()));
    let chosen: Vec<Assignment> = all.choose_multiple(rng, k).cloned().collect();
    let weights: Vec<u32> = chosen.iter().map(|_| rng.gen_range(1..=max_weight)).collect();
    let total: u32 = weights.iter().sum();
    let masses = chosen
        .into_iter()
        .zip(weights)
        .map(|(a, w)| (a, Rational::new(BigInt::from(w), BigInt::from(total))))
        .filter(|(_, m)| !m.is_zero())
        .collect();
    StateDistribution::new(atoms.to_vec(), masses).expect("weights normalise to one")
}

fn designated(a: &Assignment, f: &Formula) -> bool {
    crate::fde::eval_formula(a, f).expect("atoms bound").t
}

fn count_designated(a: &Assignment, fs: &[Formula]) -> usize {
    fs.iter().filter(|f| designated(a, f)).count()
}

/// A distribution supported on assignments passing `keep` that gives every
/// formula in `cover` positive probability, if one exists.
fn restricted_distribution<R: Rng>(
    rng: &mut R,
    atoms: &[String],
    keep: impl Fn(&Assignment) -> bool,
    cover: &[Formula],
) -> Option<StateDistribution> {
    let candidates: Vec<Assignment> = Assignment::enumerate(atoms).filter(|a| keep(a)).collect();
    if candidates.is_empty() || cover.iter().any(|f| !candidates.iter().any(|a| designated(a, f))) {
        return None;
    }
    loop {
        let d = random_distribution(rng, atoms, Some(&candidates), candidates.len().min(8), 9);
        if cover
            .iter()
            .all(|f| d.masses().iter().any(|(a, _)| designated(a, f)))
        {
            return Some(d);
        }
    }
}

fn random_weights<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    let raw: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
    let total: u32 = raw.iter().sum();
    raw.into_iter()
        .map(|w| Rational::new(BigInt::from(w), BigInt::from(total)))
        .collect()
}

fn random_cells<R: Rng>(rng: &mut R, atoms: &[String], n: usize) -> Vec<Formula> {
    (0..n).map(|_| random_formula(rng, atoms, 2, false)).collect()
}

fn positive_everywhere(ds: &[&StateDistribution], f: &Formula) -> bool {
    ds.iter().all(|d| d.masses().iter().any(|(a, _)| designated(a, f)))
}

/// A random instance of `rule` over `atoms` that meets the rule's hypotheses.
pub fn random_update_spec<R: Rng>(rng: &mut R, rule: UpdateRule, atoms: &[String]) -> UpdateSpec {
    loop {
        if let Some(spec) = try_update_spec(rng, rule, atoms) {
            return spec;
        }
    }
}

fn try_update_spec<R: Rng>(rng: &mut R, rule: UpdateRule, atoms: &[String]) -> Option<UpdateSpec> {
    let any = |rng: &mut R| random_distribution(rng, atoms, None, 8, 9);
    match rule {
        UpdateRule::Bayes => {
            let p = any(rng);
            let b = random_formula(rng, atoms, 2, false);
            positive_everywhere(&[&p], &b).then_some(UpdateSpec::Bayes { p, b })
        }
        UpdateRule::Jeffrey => {
            let n = rng.gen_range(2..=3);
            let bs = random_cells(rng, atoms, n);
            let p = restricted_distribution(rng, atoms, |a| count_designated(a, &bs) <= 1, &bs)?;
            let cells = bs.into_iter().zip(random_weights(rng, n)).collect();
            Some(UpdateSpec::Jeffrey { p, cells })
        }
        UpdateRule::Coordinated => {
            let (p_x, p_y, p_z) = (any(rng), any(rng), any(rng));
            let b = random_formula(rng, atoms, 2, false);
            positive_everywhere(&[&p_x, &p_y, &p_z], &b).then_some(UpdateSpec::Coordinated { p_x, p_y, p_z, b })
        }
        UpdateRule::CoordinatedBayes => {
            let bs = random_cells(rng, atoms, 2);
            let p_z = restricted_distribution(rng, atoms, |a| count_designated(a, &bs) == 1, &[])?;
            let p_y = restricted_distribution(rng, atoms, |a| count_designated(a, &bs) <= 1, &bs[..1])?;
            let [b1, b2]: [Formula; 2] = bs.try_into().ok()?;
            Some(UpdateSpec::CoordinatedBayes { p_y, p_z, b1, b2 })
        }
        UpdateRule::CoordinatedJeffrey => {
            let n = rng.gen_range(2..=3);
            let cells = random_cells(rng, atoms, n);
            let p_z_star = restricted_distribution(rng, atoms, |a| count_designated(a, &cells) == 1, &[])?;
            let p_y = restricted_distribution(rng, atoms, |a| count_designated(a, &cells) <= 1, &cells)?;
            Some(UpdateSpec::CoordinatedJeffrey { p_y, p_z_star, cells })
        }
        UpdateRule::Adams => {
            let a_cells = random_cells(rng, atoms, 2);
            let b_cells = random_cells(rng, atoms, 2);
            let (a1, a2) = (a_cells[0].clone(), a_cells[1].clone());
            let (b1, b2) = (b_cells[0].clone(), b_cells[1].clone());
            let a1b1 = Formula::and(a1.clone(), b1.clone());
            let a1b2 = Formula::and(a1.clone(), b2.clone());
            let p_z = restricted_distribution(
                rng,
                atoms,
                |a| count_designated(a, &a_cells) == 1 && count_designated(a, &b_cells) == 1,
                &[a1b1, a1b2],
            )?;
            // p_y agrees with p_z on conditionals given a1 and is free elsewhere
            let given_a1 = p_z.condition_on(&a1).ok()?;
            let outside = restricted_distribution(rng, atoms, |a| !designated(a, &a1), &[]);
            let p_y = match outside {
                Some(r) if rng.gen_bool(0.7) => {
                    let t = Rational::new(BigInt::from(rng.gen_range(1..=9)), BigInt::from(10));
                    let mut merged = std::collections::BTreeMap::new();
                    for (a, m) in given_a1.masses() {
                        *merged.entry(a.clone()).or_insert_with(Rational::zero) += &t * m;
                    }
                    for (a, m) in r.masses() {
                        *merged.entry(a.clone()).or_insert_with(Rational::zero) +=
                            (Rational::one() - &t) * m;
                    }
                    StateDistribution::new(atoms.to_vec(), merged.into_iter().collect()).ok()?
                }
                _ => given_a1,
            };
            let k = Rational::new(BigInt::from(rng.gen_range(1..=9)), BigInt::from(10));
            let new_conditionals = [k.clone(), Rational::one() - k];
            Some(UpdateSpec::Adams(AdamsInput {
                p_y,
                new_conditionals,
                p_z,
                a1,
                a2,
                b1,
                b2,
            }))
        }
    }
}

/// The atom names `p`, `q`, `r`, `s`, then `p4`, `p5`, ...
pub fn atom_names(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| match i {
            0 => "p".to_string(),
            1 => "q".to_string(),
            2 => "r".to_string(),
            3 => "s".to_string(),
            _ => format!("p{i}"),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::check_persistence;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_frames_satisfy_requested_conditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let all = Condition::OPTIONAL
            .iter()
            .fold(ConditionSet::basic(), |s, &c| s.with(c));
        for i in 0..200 {
            let conds = if i % 2 == 0 { all } else { ConditionSet::basic() };
            let n = 1 + i % 5;
            let f = random_frame(&mut rng, n, conds, 0.2);
            assert!(validate_frame(&f, conds).is_empty());
        }
    }

    #[test]
    fn generated_models_are_admissible_and_persistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let atoms = atom_names(2);
        for _ in 0..50 {
            let m = random_model(&mut rng, 4, &atoms, ConditionSet::basic());
            assert!(m.is_admissible());
            assert!(check_persistence(&m, 2).is_empty());
        }
    }

    #[test]
    fn update_instances_meet_their_hypotheses() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let atoms = atom_names(2);
        for rule in UpdateRule::ALL {
            for _ in 0..20 {
                let spec = random_update_spec(&mut rng, rule, &atoms);
                let out = spec.apply().unwrap_or_else(|e| panic!("{rule}: {e}"));
                let report = crate::updating::check_characterization(&spec, &out, &[]).unwrap();
                assert!(report.holds(), "{rule}: {:?}", report.failures);
            }
        }
    }

    #[test]
    fn formulas_respect_depth() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let atoms = atom_names(3);
        for _ in 0..200 {
            let f = random_formula(&mut rng, &atoms, 3, false);
            assert!(f.depth() <= 3);
            assert!(!f.contains_imp());
        }
    }
}
