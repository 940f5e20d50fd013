//! Education schedule files: a JSON array of stages, easiest first.
//!
//! ```json
//! [{"goal":"[bigger,4,2]","purpose":"learn","depth_limit":5,"node_budget":1000}]
//! ```

use neurosld_core::{
    parse_literals, render_literals, EducateError, Goal, Purpose, Schedule, Stage,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ScheduleError {
    #[error("schedule is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("stage {index}: {message}")]
    Stage { index: usize, message: String },
    #[error("schedule has no stages")]
    Empty,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StageFile {
    goal: String,
    purpose: String,
    depth_limit: usize,
    node_budget: u64,
}

/// Stages are numbered from 1 in error messages.
pub fn parse_schedule(text: &str) -> Result<Schedule, ScheduleError> {
    let raw: Vec<StageFile> = serde_json::from_str(text)?;
    let stages = raw
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            let fail = |message: String| ScheduleError::Stage {
                index: i + 1,
                message,
            };
            let goal = Goal::new(parse_literals(&s.goal).map_err(|e| fail(e.to_string()))?);
            let purpose = Purpose::from_name(&s.purpose).ok_or_else(|| {
                fail(format!(
                    "purpose must be \"learn\" or \"test\", found {:?}",
                    s.purpose
                ))
            })?;
            if s.depth_limit == 0 || s.node_budget == 0 {
                return Err(fail("depth_limit and node_budget must be positive".into()));
            }
            Ok(Stage {
                goal,
                purpose,
                depth_limit: s.depth_limit,
                node_budget: s.node_budget,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Schedule::new(stages).map_err(|e| match e {
        EducateError::EmptySchedule => ScheduleError::Empty,
        other => ScheduleError::Stage {
            index: 0,
            message: other.to_string(),
        },
    })
}

pub fn render_schedule(schedule: &Schedule) -> String {
    let stages: Vec<StageFile> = schedule
        .stages()
        .iter()
        .map(|s| StageFile {
            goal: render_literals(&s.goal.literals),
            purpose: s.purpose.as_str().into(),
            depth_limit: s.depth_limit,
            node_budget: s.node_budget,
        })
        .collect();
    serde_json::to_string_pretty(&stages).expect("schedule serializes") + "\n"
}
