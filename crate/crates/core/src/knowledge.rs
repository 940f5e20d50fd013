//! Rules, rule sets, symbol sets and goals.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{parse_term, render_literals, SyntaxError};
use crate::term::{Name, Term};

/// Symbol every variable is mapped to before encoding.
pub const VBLE: &str = "Vble";

pub type RuleId = u32;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum KnowledgeError {
    #[error("rule id must be a positive integer")]
    NonPositiveRuleId,
    #[error("rule name must be non-empty and contain no whitespace")]
    InvalidRuleName,
    #[error("duplicate rule id {0}")]
    DuplicateRuleId(RuleId),
    #[error("duplicate rule name {0:?}")]
    DuplicateRuleName(String),
    #[error("clause has no positive literal")]
    NoPositiveLiteral,
    #[error("clause has more than one positive literal")]
    MultiplePositiveLiterals,
    #[error("clause literal {0:?} must start with '+' or '-'")]
    UnsignedLiteral(String),
    #[error("clause literal {literal:?}: {source}")]
    Literal {
        literal: String,
        source: SyntaxError,
    },
    #[error("symbol id must be a positive integer")]
    NonPositiveSymbolId,
    #[error("duplicate symbol id {0}")]
    DuplicateSymbolId(u32),
    #[error("duplicate symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("invalid symbol {0:?}")]
    InvalidSymbol(String),
    #[error("symbol set must contain {VBLE:?}")]
    MissingVble,
}

/// A named definite clause `q ∨ ¬p1 ∨ … ∨ ¬pn`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    id: RuleId,
    name: String,
    positive: Term,
    negatives: Vec<Term>,
}

impl Rule {
    pub fn new(
        id: RuleId,
        name: impl Into<String>,
        positive: Term,
        negatives: Vec<Term>,
    ) -> Result<Rule, KnowledgeError> {
        let name = name.into();
        if id == 0 {
            return Err(KnowledgeError::NonPositiveRuleId);
        }
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(KnowledgeError::InvalidRuleName);
        }
        Ok(Rule {
            id,
            name,
            positive,
            negatives,
        })
    }

    /// Build a rule from signed literal strings such as
    /// `["-[child,Y,X]", "-[male,X]", "+[father,X,Y]"]`.
    /// Premises keep their written order.
    pub fn from_clause<S: AsRef<str>>(
        id: RuleId,
        name: impl Into<String>,
        clause: &[S],
    ) -> Result<Rule, KnowledgeError> {
        let mut positive = None;
        let mut negatives = Vec::new();
        for item in clause {
            let item = item.as_ref().trim();
            let (sign, body) = match item.chars().next() {
                Some(s @ ('+' | '-')) => (s, &item[1..]),
                _ => return Err(KnowledgeError::UnsignedLiteral(item.to_string())),
            };
            let literal = parse_term(body).map_err(|source| KnowledgeError::Literal {
                literal: item.to_string(),
                source,
            })?;
            if sign == '+' {
                if positive.replace(literal).is_some() {
                    return Err(KnowledgeError::MultiplePositiveLiterals);
                }
            } else {
                negatives.push(literal);
            }
        }
        let positive = positive.ok_or(KnowledgeError::NoPositiveLiteral)?;
        Rule::new(id, name, positive, negatives)
    }

    pub fn id(&self) -> RuleId {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The conclusion `q`.
    pub fn positive(&self) -> &Term {
        &self.positive
    }

    /// The premises `p1 … pn`, in clause order.
    pub fn negatives(&self) -> &[Term] {
        &self.negatives
    }

    pub fn is_assertion(&self) -> bool {
        self.negatives.is_empty()
    }

    /// Signed literal strings, premises first: `["-[p,X]", "+[q,X]"]`.
    pub fn clause_strings(&self) -> Vec<String> {
        self.negatives
            .iter()
            .map(|n| format!("-{n}"))
            .chain(core::iter::once(format!("+{}", self.positive)))
            .collect()
    }

    /// Head followed by premises; renamed apart as one unit on each use.
    pub fn literals(&self) -> Vec<Term> {
        let mut out = Vec::with_capacity(1 + self.negatives.len());
        out.push(self.positive.clone());
        out.extend(self.negatives.iter().cloned());
        out
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.id, self.name, self.positive)?;
        if !self.negatives.is_empty() {
            write!(f, " <- {}", render_literals(&self.negatives))?;
        }
        Ok(())
    }
}

/// Rules with unique IDs and names, kept in the order given.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleSet {
    rules: Vec<Rule>,
    by_id: BTreeMap<RuleId, usize>,
}

impl RuleSet {
    pub fn new(rules: Vec<Rule>) -> Result<RuleSet, KnowledgeError> {
        let mut by_id = BTreeMap::new();
        let mut names = BTreeSet::new();
        for (i, rule) in rules.iter().enumerate() {
            if by_id.insert(rule.id, i).is_some() {
                return Err(KnowledgeError::DuplicateRuleId(rule.id));
            }
            if !names.insert(rule.name.as_str()) {
                return Err(KnowledgeError::DuplicateRuleName(rule.name.clone()));
            }
        }
        Ok(RuleSet { rules, by_id })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn get(&self, id: RuleId) -> Option<&Rule> {
        self.by_id.get(&id).map(|&i| &self.rules[i])
    }

    /// Position of rule `id` in [`RuleSet::rules`].
    pub fn position(&self, id: RuleId) -> Option<usize> {
        self.by_id.get(&id).copied()
    }

    /// Largest rule ID, or 0 for an empty set.
    pub fn max_rule_id(&self) -> RuleId {
        self.by_id.keys().next_back().copied().unwrap_or(0)
    }

    /// Rules by ascending ID.
    pub fn by_ascending_id(&self) -> impl Iterator<Item = &Rule> {
        self.by_id.values().map(|&i| &self.rules[i])
    }
}

/// Vocabulary for literal encoding: symbols with unique positive IDs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolSet {
    by_id: BTreeMap<u32, Name>,
    by_symbol: BTreeMap<Name, u32>,
}

impl SymbolSet {
    pub fn new<I, S>(entries: I) -> Result<SymbolSet, KnowledgeError>
    where
        I: IntoIterator<Item = (u32, S)>,
        S: AsRef<str>,
    {
        let mut by_id = BTreeMap::new();
        let mut by_symbol = BTreeMap::new();
        for (id, symbol) in entries {
            let symbol = symbol.as_ref();
            if id == 0 {
                return Err(KnowledgeError::NonPositiveSymbolId);
            }
            if crate::syntax::classify_token(symbol).is_err() {
                return Err(KnowledgeError::InvalidSymbol(symbol.to_string()));
            }
            let name: Name = symbol.into();
            if by_id.insert(id, name.clone()).is_some() {
                return Err(KnowledgeError::DuplicateSymbolId(id));
            }
            if by_symbol.insert(name, id).is_some() {
                return Err(KnowledgeError::DuplicateSymbol(symbol.to_string()));
            }
        }
        if !by_symbol.contains_key(VBLE) {
            return Err(KnowledgeError::MissingVble);
        }
        Ok(SymbolSet { by_id, by_symbol })
    }

    pub fn id_of(&self, symbol: &str) -> Option<u32> {
        self.by_symbol.get(symbol).copied()
    }

    pub fn symbol(&self, id: u32) -> Option<&str> {
        self.by_id.get(&id).map(|s| &**s)
    }

    pub fn max_symbol_id(&self) -> u32 {
        self.by_id.keys().next_back().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    /// `(id, symbol)` pairs by ascending ID.
    pub fn entries(&self) -> impl Iterator<Item = (u32, &str)> {
        self.by_id.iter().map(|(&id, s)| (id, &**s))
    }
}

/// A conjunction of literals to refute; empty means solved.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Goal {
    pub literals: Vec<Term>,
}

impl Goal {
    pub fn new(literals: Vec<Term>) -> Goal {
        Goal { literals }
    }

    pub fn parse(text: &str) -> Result<Goal, SyntaxError> {
        crate::syntax::parse_literals(text).map(Goal::new)
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    /// Distinct variables in first-occurrence order.
    pub fn variables(&self) -> Vec<Name> {
        let mut out = Vec::new();
        for lit in &self.literals {
            lit.collect_vars(&mut out);
        }
        out
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_literals(&self.literals))
    }
}

/// Constants and functors in `terms` that have no symbol ID, in order of
/// first appearance.
pub fn missing_symbols<'a>(
    terms: impl IntoIterator<Item = &'a Term>,
    symbols: &SymbolSet,
) -> Vec<Name> {
    fn walk(t: &Term, symbols: &SymbolSet, out: &mut Vec<Name>) {
        let mut note = |s: &Name| {
            if symbols.id_of(s).is_none() && !out.contains(s) {
                out.push(s.clone());
            }
        };
        match t {
            Term::Constant(c) => note(c),
            Term::Variable(_) => {}
            Term::Compound(functor, args) => {
                note(functor);
                args.iter().for_each(|a| walk(a, symbols, out));
            }
        }
    }
    let mut out = Vec::new();
    for t in terms {
        walk(t, symbols, &mut out);
    }
    out
}

/// Every constant or functor used by `rules` that `symbols` lacks.
/// An empty result means every rule literal can be encoded.
pub fn validate_coverage(rules: &RuleSet, symbols: &SymbolSet) -> Vec<Name> {
    missing_symbols(
        rules
            .rules()
            .iter()
            .flat_map(|r| core::iter::once(&r.positive).chain(&r.negatives)),
        symbols,
    )
}
