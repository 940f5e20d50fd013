//! Proof-trace files: JSON lines, one header per proof followed by its
//! records.
//!
//! ```text
//! {"goal":"[bigger,X,Y]","status":"proved"}
//! {"literal":"[bigger,X,Y]","rule_id":3}
//! ```

use neurosld_core::{
    parse_literals, parse_recorded_term, render_literals, Goal, RuleId, Status, TraceRecord,
};
use serde::{Deserialize, Serialize};

/// The trace of one proof attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub goal: Goal,
    pub status: Status,
    pub records: Vec<TraceRecord>,
}

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct TraceError {
    pub line: usize,
    pub message: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    goal: String,
    status: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    literal: String,
    rule_id: RuleId,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Line {
    Header(Header),
    Record(Record),
}

pub fn write_traces(entries: &[TraceEntry]) -> String {
    let mut out = String::new();
    for entry in entries {
        let header = Header {
            goal: render_literals(&entry.goal.literals),
            status: entry.status.as_str().into(),
        };
        out += &serde_json::to_string(&header).expect("header serializes");
        out.push('\n');
        for r in &entry.records {
            let record = Record {
                literal: r.literal.to_string(),
                rule_id: r.rule_id,
            };
            out += &serde_json::to_string(&record).expect("record serializes");
            out.push('\n');
        }
    }
    out
}

pub fn parse_traces(text: &str) -> Result<Vec<TraceEntry>, TraceError> {
    let mut entries: Vec<TraceEntry> = Vec::new();
    for (i, raw) in text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
    {
        let line = i + 1;
        let fail = |message: String| TraceError { line, message };
        match serde_json::from_str::<Line>(raw).map_err(|e| fail(e.to_string()))? {
            Line::Header(h) => {
                let goal = Goal::new(parse_literals(&h.goal).map_err(|e| fail(e.to_string()))?);
                let status = Status::from_name(&h.status)
                    .ok_or_else(|| fail(format!("unknown status {:?}", h.status)))?;
                entries.push(TraceEntry {
                    goal,
                    status,
                    records: Vec::new(),
                });
            }
            Line::Record(r) => {
                let literal = parse_recorded_term(&r.literal).map_err(|e| fail(e.to_string()))?;
                let entry = entries
                    .last_mut()
                    .ok_or_else(|| fail("record before any goal header".into()))?;
                entry.records.push(TraceRecord {
                    literal,
                    rule_id: r.rule_id,
                });
            }
        }
    }
    Ok(entries)
}
