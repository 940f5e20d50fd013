//! Neural-guided SLD resolution.
//!
//! Goals are refuted against definite-clause rule sets by depth-first SLD
//! resolution. Successful proofs yield `(literal, rule)` records; a small
//! feedforward network trained on those records ranks the rules tried at
//! each node of later searches.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, model
//! persistence and the command line live in the `neurosld` crate.

#![no_std]

extern crate alloc;

pub mod curriculum;
pub mod encoding;
pub mod knowledge;
pub mod network;
pub mod resolver;
pub mod syntax;
pub mod term;

pub use curriculum::{
    educate, train_from_traces, EducateError, EducationReport, Purpose, Schedule, Stage,
    StageReport, TrainError, TrainingParams,
};
pub use encoding::{
    complete_and_flatten, decode_ranking, encode_literal, encode_rule_target, exceeds_shape,
    normalize_variables, tree_positions, EncodeError, EncodingConfig, Slot,
};
pub use knowledge::{
    missing_symbols, validate_coverage, Goal, KnowledgeError, Rule, RuleId, RuleSet, SymbolSet,
    VBLE,
};
pub use network::{cross_entropy, softmax, Activation, Layer, NetError, Network};
pub use resolver::{
    rank_rules, replay, resolve_step, solve, GuidanceError, Mode, Policy, ProofResult, ReplayError,
    SearchStats, SolveOptions, SolveReport, Status, TraceRecord,
};
pub use syntax::{
    classify_token, parse_literals, parse_recorded_term, parse_term, render_literals, SyntaxError,
    TokenClass,
};
pub use term::{
    is_variant, rename_apart, unify, FreshVars, Name, Substitution, Term, UnifyFailure,
};
