//! Machine-readable outputs: solve results, education reports, loss and
//! comparison tables.
//!
//! Solve output schema:
//! `{"goal","policy","mode","status","stats":{"nodes_expanded","backtracks","max_depth_reached"},
//!   "proofs":[{"answer":{"X":"4"},"trace":[{"literal","rule_id"}],"stats":{...}}]}`.
//! Answers bind every goal variable, keyed by name; a variable left free
//! maps to a renamed variable.

use neurosld_core::{EducationReport, Goal, Mode, SearchStats, SolveReport, Status, TraceRecord};
use serde::Serialize;

#[derive(Serialize)]
pub struct StatsJson {
    pub nodes_expanded: u64,
    pub backtracks: u64,
    pub max_depth_reached: usize,
}

impl From<SearchStats> for StatsJson {
    fn from(s: SearchStats) -> Self {
        Self {
            nodes_expanded: s.nodes_expanded,
            backtracks: s.backtracks,
            max_depth_reached: s.max_depth_reached,
        }
    }
}

#[derive(Serialize)]
pub struct RecordJson {
    pub literal: String,
    pub rule_id: u32,
}

fn records(trace: &[TraceRecord]) -> Vec<RecordJson> {
    trace
        .iter()
        .map(|r| RecordJson {
            literal: r.literal.to_string(),
            rule_id: r.rule_id,
        })
        .collect()
}

#[derive(Serialize)]
pub struct ProofJson {
    pub answer: serde_json::Map<String, serde_json::Value>,
    pub trace: Vec<RecordJson>,
    pub stats: StatsJson,
}

#[derive(Serialize)]
pub struct SolveJson {
    pub goal: String,
    pub policy: String,
    pub mode: String,
    pub status: String,
    pub stats: StatsJson,
    pub proofs: Vec<ProofJson>,
}

pub fn solve_json(goal: &Goal, policy: &str, mode: Mode, report: &SolveReport) -> SolveJson {
    let vars = goal.variables();
    let proofs = report
        .proofs
        .iter()
        .map(|p| {
            let mut answer = serde_json::Map::new();
            for v in &vars {
                let bound = p.answer.apply(&neurosld_core::Term::Variable(v.clone()));
                answer.insert(v.to_string(), bound.to_string().into());
            }
            ProofJson {
                answer,
                trace: records(&p.trace),
                stats: p.stats.into(),
            }
        })
        .collect();
    SolveJson {
        goal: goal.to_string(),
        policy: policy.into(),
        mode: mode.as_str().into(),
        status: report.status.as_str().into(),
        stats: report.stats.into(),
        proofs,
    }
}

#[derive(Serialize)]
pub struct StageJson {
    pub stage: usize,
    pub goal: String,
    pub purpose: String,
    pub status: String,
    pub stats: StatsJson,
    pub trace: Vec<RecordJson>,
    pub losses: Vec<f64>,
}

#[derive(Serialize)]
pub struct EducationJson {
    pub stages: Vec<StageJson>,
    pub training_rounds: usize,
    pub records: usize,
    pub tests_passed: bool,
}

pub fn education_json(report: &EducationReport) -> EducationJson {
    EducationJson {
        stages: report
            .stages
            .iter()
            .enumerate()
            .map(|(i, s)| StageJson {
                stage: i + 1,
                goal: s.goal.to_string(),
                purpose: s.purpose.as_str().into(),
                status: s.status.as_str().into(),
                stats: s.stats.into(),
                trace: records(&s.trace),
                losses: s.losses.clone(),
            })
            .collect(),
        training_rounds: report.training_rounds,
        records: report.records,
        tests_passed: report.tests_passed(),
    }
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).expect("writing to memory cannot fail");
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
}

/// `stage,epoch,mean_loss`, one row per epoch of every training round;
/// stages and epochs count from 1.
pub fn losses_csv(report: &EducationReport) -> String {
    csv_string(|w| {
        w.write_record(["stage", "epoch", "mean_loss"])?;
        for (i, s) in report.stages.iter().enumerate() {
            for (e, loss) in s.losses.iter().enumerate() {
                w.write_record([(i + 1).to_string(), (e + 1).to_string(), loss.to_string()])?;
            }
        }
        Ok(())
    })
}

/// One row of a policy comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompareRow {
    pub goal: String,
    pub policy: String,
    pub status: Status,
    pub nodes_expanded: u64,
    pub backtracks: u64,
}

/// `goal,policy,status,nodes_expanded,backtracks`; header only when empty.
pub fn compare_csv(rows: &[CompareRow]) -> String {
    csv_string(|w| {
        w.write_record(["goal", "policy", "status", "nodes_expanded", "backtracks"])?;
        for r in rows {
            w.write_record([
                r.goal.clone(),
                r.policy.clone(),
                r.status.as_str().to_string(),
                r.nodes_expanded.to_string(),
                r.backtracks.to_string(),
            ])?;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_compare_is_header_only() {
        assert_eq!(
            compare_csv(&[]),
            "goal,policy,status,nodes_expanded,backtracks\n"
        );
    }

    #[test]
    fn goals_with_commas_are_quoted() {
        let row = CompareRow {
            goal: "[bigger,4,1]".into(),
            policy: "static".into(),
            status: Status::Proved,
            nodes_expanded: 3,
            backtracks: 1,
        };
        assert_eq!(
            compare_csv(&[row]).lines().nth(1),
            Some("\"[bigger,4,1]\",static,proved,3,1")
        );
    }
}
