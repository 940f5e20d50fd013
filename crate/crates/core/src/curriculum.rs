//! Education: solve goals from easy to hard, learn from the proofs.
//!
//! Every stage is solved with the guided policy. A proved `Learn` stage
//! adds its trace to the accumulated record set and the network is then
//! trained on all records gathered so far. `Test` stages only measure.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::encoding::{encode_literal, encode_rule_target, EncodeError, EncodingConfig};
use crate::knowledge::{missing_symbols, validate_coverage, Goal, RuleSet};
use crate::network::{NetError, Network};
use crate::resolver::{
    check_guidance, solve, GuidanceError, Policy, SearchStats, SolveOptions, Status, TraceRecord,
};
use crate::term::Name;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Purpose {
    Learn,
    Test,
}

impl Purpose {
    pub fn as_str(self) -> &'static str {
        match self {
            Purpose::Learn => "learn",
            Purpose::Test => "test",
        }
    }

    pub fn from_name(name: &str) -> Option<Purpose> {
        [Purpose::Learn, Purpose::Test]
            .into_iter()
            .find(|p| p.as_str() == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub goal: Goal,
    pub purpose: Purpose,
    pub depth_limit: usize,
    pub node_budget: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    stages: Vec<Stage>,
}

impl Schedule {
    pub fn new(stages: Vec<Stage>) -> Result<Schedule, EducateError> {
        if stages.is_empty() {
            return Err(EducateError::EmptySchedule);
        }
        Ok(Schedule { stages })
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainingParams {
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl TrainingParams {
    pub fn new(epochs: usize, learning_rate: f64, seed: u64) -> Result<Self, TrainError> {
        if !(learning_rate.is_finite() && learning_rate > 0.0) {
            return Err(TrainError::LearningRate);
        }
        Ok(Self {
            epochs,
            learning_rate,
            seed,
        })
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum TrainError {
    #[error("learning rate must be a positive number")]
    LearningRate,
    #[error("record {index}: {source}")]
    Record { index: usize, source: EncodeError },
    #[error(transparent)]
    Net(#[from] NetError),
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EducateError {
    #[error("schedule has no stages")]
    EmptySchedule,
    #[error("symbols missing from the symbol set: {0:?}")]
    MissingSymbols(Vec<Name>),
    #[error(transparent)]
    Guidance(#[from] GuidanceError),
    #[error(transparent)]
    Train(#[from] TrainError),
}

/// Train on `(literal, rule)` records for `params.epochs` epochs.
///
/// Records are visited in a fresh seed-derived shuffle each epoch with one
/// gradient step per record. Returns the mean pre-step loss of every epoch.
pub fn train_from_traces(
    records: &[TraceRecord],
    net: &mut Network,
    cfg: &EncodingConfig,
    params: &TrainingParams,
) -> Result<Vec<f64>, TrainError> {
    if records.is_empty() {
        return Ok(Vec::new());
    }
    let examples = records
        .iter()
        .enumerate()
        .map(|(index, r)| {
            let x = encode_literal(&r.literal, cfg)
                .map_err(|source| TrainError::Record { index, source })?;
            let t = encode_rule_target(r.rule_id, cfg.output_dim())
                .map_err(|source| TrainError::Record { index, source })?;
            Ok((x, t))
        })
        .collect::<Result<Vec<_>, TrainError>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut losses = Vec::with_capacity(params.epochs);
    for _ in 0..params.epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for &i in &order {
            let (x, t) = &examples[i];
            total += net.backprop_update(x, t, params.learning_rate)?;
        }
        losses.push(total / examples.len() as f64);
    }
    Ok(losses)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StageReport {
    pub goal: Goal,
    pub purpose: Purpose,
    pub status: Status,
    pub stats: SearchStats,
    /// Trace of the proof, empty when unproved.
    pub trace: Vec<TraceRecord>,
    /// Per-epoch mean loss of the training round after this stage, if any.
    pub losses: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EducationReport {
    pub stages: Vec<StageReport>,
    pub training_rounds: usize,
    /// Size of the accumulated record set at the end.
    pub records: usize,
}

impl EducationReport {
    /// Whether every test stage was proved.
    pub fn tests_passed(&self) -> bool {
        self.stages
            .iter()
            .filter(|s| s.purpose == Purpose::Test)
            .all(|s| s.status == Status::Proved)
    }
}

/// Run `schedule` against `rules`, training `net` in place.
pub fn educate(
    schedule: &Schedule,
    rules: &RuleSet,
    net: &mut Network,
    cfg: &EncodingConfig,
    params: &TrainingParams,
) -> Result<EducationReport, EducateError> {
    let mut missing = validate_coverage(rules, cfg.symbols());
    for name in missing_symbols(
        schedule.stages.iter().flat_map(|s| &s.goal.literals),
        cfg.symbols(),
    ) {
        if !missing.contains(&name) {
            missing.push(name);
        }
    }
    if !missing.is_empty() {
        return Err(EducateError::MissingSymbols(missing));
    }
    check_guidance(net, cfg, rules)?;

    let mut report = EducationReport::default();
    let mut records: Vec<TraceRecord> = Vec::new();
    for stage in &schedule.stages {
        let opts = SolveOptions::new(stage.depth_limit).with_budget(stage.node_budget);
        let outcome = solve(
            &stage.goal,
            rules,
            &Policy::Guided { net: &*net, cfg },
            &opts,
        )?;
        let trace = outcome.first().map(|p| p.trace.clone()).unwrap_or_default();
        let mut losses = Vec::new();
        if stage.purpose == Purpose::Learn && outcome.proved() && !trace.is_empty() {
            records.extend(trace.iter().cloned());
            losses = train_from_traces(&records, net, cfg, params)?;
            report.training_rounds += 1;
        }
        report.stages.push(StageReport {
            goal: stage.goal.clone(),
            purpose: stage.purpose,
            status: outcome.status,
            stats: outcome.stats,
            trace,
            losses,
        });
    }
    report.records = records.len();
    Ok(report)
}
