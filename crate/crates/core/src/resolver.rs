//! Depth-limited SLD resolution with pluggable rule ordering.
//!
//! The leftmost goal literal is always selected. Search is depth-first
//! over an explicit stack; every frame owns its goal and the current
//! instantiation of the original goal variables, so backtracking is a pop.

use alloc::vec::Vec;

use crate::encoding::{decode_ranking, encode_literal, EncodeError, EncodingConfig};
use crate::knowledge::{Goal, Rule, RuleId, RuleSet};
use crate::network::{NetError, Network};
use crate::term::{is_variant, rename_apart, unify, FreshVars, Name, Substitution, Term};

/// Order in which candidate rules are tried at each node.
#[derive(Clone, Copy, Debug)]
pub enum Policy<'a> {
    /// Ascending rule ID.
    StaticOrder,
    /// Ascending rule ID, enumerating every proof.
    Exhaustive,
    /// Rules ranked by the network for the selected literal.
    Guided {
        net: &'a Network,
        cfg: &'a EncodingConfig,
    },
}

impl Policy<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            Policy::StaticOrder => "static",
            Policy::Exhaustive => "exhaustive",
            Policy::Guided { .. } => "guided",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    First,
    All,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::First => "first",
            Mode::All => "all",
        }
    }

    pub fn from_name(name: &str) -> Option<Mode> {
        [Mode::First, Mode::All]
            .into_iter()
            .find(|m| m.as_str() == name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Proved,
    /// The whole tree was searched without a proof.
    Exhausted,
    /// No proof, and at least one branch was cut by the depth limit.
    DepthLimited,
    /// No proof before the node budget ran out.
    BudgetExhausted,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Proved => "proved",
            Status::Exhausted => "exhausted",
            Status::DepthLimited => "depth_limited",
            Status::BudgetExhausted => "budget_exhausted",
        }
    }

    /// Inverse of [`Status::as_str`].
    pub fn from_name(name: &str) -> Option<Status> {
        [
            Status::Proved,
            Status::Exhausted,
            Status::DepthLimited,
            Status::BudgetExhausted,
        ]
        .into_iter()
        .find(|s| s.as_str() == name)
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Maximum resolution steps along one branch.
    pub depth_limit: usize,
    /// Maximum number of expanded nodes; `None` for no cap.
    pub node_budget: Option<u64>,
    pub mode: Mode,
    pub occurs_check: bool,
}

impl SolveOptions {
    pub fn new(depth_limit: usize) -> Self {
        Self {
            depth_limit,
            node_budget: None,
            mode: Mode::First,
            occurs_check: true,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.node_budget = Some(budget);
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }
}

/// One resolution step of a successful proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    /// The selected literal as it stood when the rule was applied.
    pub literal: Term,
    pub rule_id: RuleId,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Non-empty goals whose children were generated.
    pub nodes_expanded: u64,
    /// Alternatives tried after the first rule at some node.
    pub backtracks: u64,
    pub max_depth_reached: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofResult {
    pub status: Status,
    /// Bindings of the goal's own variables.
    pub answer: Substitution,
    pub trace: Vec<TraceRecord>,
    /// Counters at the moment this proof was found.
    pub stats: SearchStats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub status: Status,
    pub proofs: Vec<ProofResult>,
    /// Counters at the end of the search.
    pub stats: SearchStats,
}

impl SolveReport {
    pub fn proved(&self) -> bool {
        self.status == Status::Proved
    }

    pub fn first(&self) -> Option<&ProofResult> {
        self.proofs.first()
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GuidanceError {
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error("network maps {net_in} -> {net_out} but the encoding needs {cfg_in} -> {cfg_out}")]
    Shape {
        net_in: usize,
        net_out: usize,
        cfg_in: usize,
        cfg_out: usize,
    },
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ReplayError {
    #[error("step {step}: rule {rule_id} is not in the rule set")]
    UnknownRule { step: usize, rule_id: RuleId },
    #[error("step {step}: goal is already empty")]
    GoalExhausted { step: usize },
    #[error("step {step}: recorded literal {recorded} does not match selected literal {selected}")]
    LiteralMismatch {
        step: usize,
        recorded: Term,
        selected: Term,
    },
    #[error("step {step}: rule {rule_id} does not resolve with {selected}")]
    NoResolvent {
        step: usize,
        rule_id: RuleId,
        selected: Term,
    },
}

/// Resolve literal `index` of `goal` with a renamed copy of `rule`.
///
/// The literal is replaced by the rule's premises in clause order and the
/// step unifier is applied to every literal of the new goal.
pub fn resolve_step(
    goal: &Goal,
    index: usize,
    rule: &Rule,
    fresh: &mut FreshVars,
    occurs_check: bool,
) -> Option<(Goal, Substitution)> {
    let selected = goal.literals.get(index)?;
    let renamed = rename_apart(&rule.literals(), fresh);
    let (head, premises) = renamed.split_first()?;
    let mgu = unify(head, selected, occurs_check).ok()?;
    let mut literals = Vec::with_capacity(goal.len() - 1 + premises.len());
    literals.extend(goal.literals[..index].iter().map(|t| mgu.apply(t)));
    literals.extend(premises.iter().map(|t| mgu.apply(t)));
    literals.extend(goal.literals[index + 1..].iter().map(|t| mgu.apply(t)));
    Some((Goal::new(literals), mgu))
}

/// Check that `net` and `cfg` agree and that every rule ID is rankable.
pub fn check_guidance(
    net: &Network,
    cfg: &EncodingConfig,
    rules: &RuleSet,
) -> Result<(), GuidanceError> {
    if net.input_dim() != cfg.input_dim() || net.output_dim() != cfg.output_dim() {
        return Err(GuidanceError::Shape {
            net_in: net.input_dim(),
            net_out: net.output_dim(),
            cfg_in: cfg.input_dim(),
            cfg_out: cfg.output_dim(),
        });
    }
    cfg.check_rule_capacity(rules.max_rule_id())?;
    Ok(())
}

/// Rule IDs `1..=output_dim`, best first, for `literal`.
pub fn rank_rules(
    literal: &Term,
    net: &Network,
    cfg: &EncodingConfig,
) -> Result<Vec<RuleId>, GuidanceError> {
    let x = encode_literal(literal, cfg)?;
    if net.output_dim() != cfg.output_dim() {
        return Err(GuidanceError::Shape {
            net_in: net.input_dim(),
            net_out: net.output_dim(),
            cfg_in: cfg.input_dim(),
            cfg_out: cfg.output_dim(),
        });
    }
    Ok(decode_ranking(&net.predict(&x)?))
}

struct Frame {
    goal: Goal,
    /// Current instantiation of the original goal variables.
    bindings: Vec<Term>,
    depth: usize,
    /// Rule indices in trial order, filled on expansion.
    order: Option<Vec<usize>>,
    next: usize,
}

fn rule_order(
    literal: &Term,
    rules: &RuleSet,
    policy: &Policy<'_>,
    static_order: &[usize],
) -> Result<Vec<usize>, GuidanceError> {
    match policy {
        Policy::StaticOrder | Policy::Exhaustive => Ok(static_order.to_vec()),
        Policy::Guided { net, cfg } => {
            let ranking = rank_rules(literal, net, cfg)?;
            Ok(ranking
                .into_iter()
                .filter_map(|id| rules.position(id))
                .collect())
        }
    }
}

/// Search for refutations of `goal`.
///
/// Unprovability is reported through [`SolveReport::status`]; the only
/// errors come from a guided policy that cannot encode a literal.
pub fn solve(
    goal: &Goal,
    rules: &RuleSet,
    policy: &Policy<'_>,
    opts: &SolveOptions,
) -> Result<SolveReport, GuidanceError> {
    if let Policy::Guided { net, cfg } = policy {
        check_guidance(net, cfg, rules)?;
    }
    let mode = match policy {
        Policy::Exhaustive => Mode::All,
        _ => opts.mode,
    };
    let static_order: Vec<usize> = {
        let mut idx: Vec<usize> = (0..rules.len()).collect();
        idx.sort_by_key(|&i| rules.rules()[i].id());
        idx
    };
    let vars: Vec<Name> = goal.variables();
    let mut fresh = FreshVars::above(&goal.literals);
    let mut stats = SearchStats::default();
    let mut proofs = Vec::new();
    let mut path: Vec<TraceRecord> = Vec::new();
    let mut depth_cut = false;
    let mut budget_hit = false;

    let mut stack = alloc::vec![Frame {
        goal: goal.clone(),
        bindings: vars.iter().map(|v| Term::Variable(v.clone())).collect(),
        depth: 0,
        order: None,
        next: 0,
    }];

    while let Some(frame) = stack.last_mut() {
        if frame.order.is_none() {
            stats.max_depth_reached = stats.max_depth_reached.max(frame.depth);
            if frame.goal.is_empty() {
                proofs.push(ProofResult {
                    status: Status::Proved,
                    answer: Substitution::from_pairs(
                        vars.iter().cloned().zip(frame.bindings.iter().cloned()),
                    ),
                    trace: path[..frame.depth].to_vec(),
                    stats,
                });
                stack.pop();
                if mode == Mode::First {
                    break;
                }
                continue;
            }
            if frame.depth >= opts.depth_limit {
                depth_cut = true;
                stack.pop();
                continue;
            }
            if opts.node_budget.is_some_and(|b| stats.nodes_expanded >= b) {
                budget_hit = true;
                break;
            }
            stats.nodes_expanded += 1;
            frame.order = Some(rule_order(
                &frame.goal.literals[0],
                rules,
                policy,
                &static_order,
            )?);
        }

        let order = frame.order.as_deref().unwrap_or(&[]);
        let Some(&rule_index) = order.get(frame.next) else {
            stack.pop();
            continue;
        };
        if frame.next > 0 {
            stats.backtracks += 1;
        }
        frame.next += 1;

        let rule = &rules.rules()[rule_index];
        if let Some((child, mgu)) =
            resolve_step(&frame.goal, 0, rule, &mut fresh, opts.occurs_check)
        {
            path.truncate(frame.depth);
            path.push(TraceRecord {
                literal: frame.goal.literals[0].clone(),
                rule_id: rule.id(),
            });
            let next = Frame {
                goal: child,
                bindings: frame.bindings.iter().map(|t| mgu.apply(t)).collect(),
                depth: frame.depth + 1,
                order: None,
                next: 0,
            };
            stack.push(next);
        }
    }

    let status = if !proofs.is_empty() {
        Status::Proved
    } else if budget_hit {
        Status::BudgetExhausted
    } else if depth_cut {
        Status::DepthLimited
    } else {
        Status::Exhausted
    };
    Ok(SolveReport {
        status,
        proofs,
        stats,
    })
}

/// Re-run `trace` from `goal`, checking every recorded literal against the
/// literal actually selected. Returns the goal left after the last step,
/// which is empty for a complete proof.
pub fn replay(
    goal: &Goal,
    trace: &[TraceRecord],
    rules: &RuleSet,
    occurs_check: bool,
) -> Result<Goal, ReplayError> {
    let mut fresh = FreshVars::above(&goal.literals);
    let mut current = goal.clone();
    for (step, record) in trace.iter().enumerate() {
        let rule = rules.get(record.rule_id).ok_or(ReplayError::UnknownRule {
            step,
            rule_id: record.rule_id,
        })?;
        let selected = current
            .literals
            .first()
            .ok_or(ReplayError::GoalExhausted { step })?;
        if !is_variant(selected, &record.literal) {
            return Err(ReplayError::LiteralMismatch {
                step,
                recorded: record.literal.clone(),
                selected: selected.clone(),
            });
        }
        current = resolve_step(&current, 0, rule, &mut fresh, occurs_check)
            .ok_or_else(|| ReplayError::NoResolvent {
                step,
                rule_id: record.rule_id,
                selected: selected.clone(),
            })?
            .0;
    }
    Ok(current)
}
