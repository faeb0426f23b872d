//! Seeded inputs shared by the benchmarks.

use lablogic::gen::{atom_names, random_distribution, random_formula, random_model};
use lablogic::{ConditionSet, Formula, Model, StateDistribution};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` random models over `atoms` atoms with at most `max_states` states.
pub fn models(count: usize, max_states: usize, atoms: usize, seed: u64) -> Vec<Model> {
    let mut r = rng(seed);
    let at = atom_names(atoms);
    (0..count)
        .map(|_| random_model(&mut r, max_states, &at, ConditionSet::basic()))
        .collect()
}

pub fn formulas(count: usize, atoms: usize, depth: usize, arrows: bool, seed: u64) -> Vec<Formula> {
    let mut r = rng(seed);
    let at = atom_names(atoms);
    (0..count)
        .map(|_| random_formula(&mut r, &at, depth, arrows))
        .collect()
}

pub fn distribution(atoms: usize, support: usize, seed: u64) -> StateDistribution {
    random_distribution(&mut rng(seed), &atom_names(atoms), None, support, 20)
}
