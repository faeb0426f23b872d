//! Four-valued relevant logic with separate confirmation and refutation
//! relations, and a probability calculus over its `->`-free fragment.
//!
//! The crate covers formula syntax, four-valued evaluation, finite frames and
//! models, countermodel search, a Hilbert-style proof checker, probability
//! functions, betting and Dutch books, belief updating rules, and relative
//! frequencies over trial streams.

pub mod betting;
pub mod error;
pub mod fde;
pub mod formats;
pub mod frames;
pub mod gen;
pub mod labsim;
pub mod models;
pub mod probability;
pub mod proof;
pub mod search;
pub mod syntax;
pub mod updating;

pub use betting::{
    construct_violation_stakes, expected_net_gain, find_violation, is_dutch_book,
    net_gain_profile, Bet, BetKind, GainProfile, Quote, Recipe, ViolationDescriptor,
};
pub use error::{Error, Result};
pub use fde::{eval_formula, fde_entails, Assignment, TruthValue};
pub use frames::{validate_frame, Condition, ConditionSet, Frame, Violation};
pub use labsim::{conditional_rfreq, run_trials, FrequencyTable, Mode, TrialStream};
pub use models::{check_persistence, consequence_in_model, eval_model, Model};
pub use probability::{
    behaves_as_partition, conditional_probability, induced_probability,
    total_probability_check, validate_probability, Probability, ProbabilityAssignment,
    ProbabilityTable, Rational, StateDistribution,
};
pub use proof::{check_proof, match_axiom, LogicConfig, Proof, Rejection, Rule};
pub use search::{find_countermodel, SearchBounds};
pub use syntax::{parse, render, Formula, ParseError};
pub use updating::{check_characterization, Characterization, UpdateRule, UpdateSpec, Updated};
