//! Line-oriented JSON knowledge-base files.
//!
//! Each non-blank line holds one object. Rule entries look like
//! `{"id":3,"name":"BiggerABC","clause":["-[bigger,A,B]","-[bigger,B,C]","+[bigger,A,C]"]}`
//! and symbol entries like `{"id":1,"symbol":"Vble"}`. Rules and symbols may
//! live in one file or two; each parser keeps its own kind of entry and
//! skips the other.

use std::collections::BTreeMap;
use std::path::Path;

use neurosld_core::{classify_token, KnowledgeError, Rule, RuleId, RuleSet, SymbolSet};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum KbError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {kind}")]
    Line { line: usize, kind: LineError },
    #[error(transparent)]
    Invalid(#[from] KnowledgeError),
}

#[derive(Debug, thiserror::Error)]
pub enum LineError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("entry is neither a rule (\"clause\") nor a symbol (\"symbol\")")]
    UnknownEntry,
    #[error("id must be a positive integer, found {0}")]
    BadId(i64),
    #[error("duplicate {what} {value}, first seen on line {first}")]
    Duplicate {
        what: &'static str,
        value: String,
        first: usize,
    },
    #[error("malformed clause {0:?}")]
    Clause(String),
    #[error(transparent)]
    Knowledge(#[from] KnowledgeError),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ClauseField {
    Literals(Vec<String>),
    Bracketed(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleEntry {
    id: i64,
    name: String,
    clause: ClauseField,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolEntry {
    id: i64,
    symbol: String,
}

#[derive(Serialize)]
struct RuleLine<'a> {
    id: RuleId,
    name: &'a str,
    clause: Vec<String>,
}

#[derive(Serialize)]
struct SymbolLine<'a> {
    id: u32,
    symbol: &'a str,
}

enum Kind {
    Rule,
    Symbol,
}

fn entries(
    text: &str,
    wanted: Kind,
) -> impl Iterator<Item = (usize, Result<Value, LineError>)> + '_ {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .filter_map(move |(i, l)| {
            let value = match serde_json::from_str::<Value>(l) {
                Ok(v) => v,
                Err(e) => return Some((i + 1, Err(e.into()))),
            };
            let is_rule = value.get("clause").is_some();
            let is_symbol = value.get("symbol").is_some();
            if !is_rule && !is_symbol {
                return Some((i + 1, Err(LineError::UnknownEntry)));
            }
            let keep = match wanted {
                Kind::Rule => is_rule,
                Kind::Symbol => is_symbol,
            };
            keep.then_some((i + 1, Ok(value)))
        })
}

fn positive_id(id: i64) -> Result<u32, LineError> {
    u32::try_from(id)
        .ok()
        .filter(|&v| v > 0)
        .ok_or(LineError::BadId(id))
}

/// Split `[-[a,X],+[b,X]]` into its signed literals.
fn split_bracketed(text: &str) -> Result<Vec<String>, LineError> {
    let bad = || LineError::Clause(text.to_string());
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(bad)?;
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in inner.char_indices() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(inner[start..i].trim().to_string());
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(bad());
        }
    }
    parts.push(inner[start..].trim().to_string());
    if depth != 0 || parts.iter().any(String::is_empty) {
        return Err(bad());
    }
    Ok(parts)
}

fn track<K: Ord + ToString>(
    seen: &mut BTreeMap<K, usize>,
    key: K,
    line: usize,
    what: &'static str,
) -> Result<(), LineError> {
    if let Some(&first) = seen.get(&key) {
        return Err(LineError::Duplicate {
            what,
            value: key.to_string(),
            first,
        });
    }
    seen.insert(key, line);
    Ok(())
}

/// Parse the rule entries of a knowledge-base file, in file order.
pub fn parse_rule_set(text: &str) -> Result<RuleSet, KbError> {
    let mut rules = Vec::new();
    let mut ids = BTreeMap::new();
    let mut names = BTreeMap::new();
    for (line, value) in entries(text, Kind::Rule) {
        let parsed = value.and_then(|v| {
            let entry: RuleEntry = serde_json::from_value(v)?;
            let id = positive_id(entry.id)?;
            track(&mut ids, id, line, "rule id")?;
            track(&mut names, entry.name.clone(), line, "rule name")?;
            let literals = match entry.clause {
                ClauseField::Literals(l) => l,
                ClauseField::Bracketed(s) => split_bracketed(&s)?,
            };
            Ok(Rule::from_clause(id, entry.name, &literals)?)
        });
        rules.push(parsed.map_err(|kind| KbError::Line { line, kind })?);
    }
    Ok(RuleSet::new(rules)?)
}

/// Parse the symbol entries of a knowledge-base file.
pub fn parse_symbol_set(text: &str) -> Result<SymbolSet, KbError> {
    let mut pairs = Vec::new();
    let mut ids = BTreeMap::new();
    let mut symbols = BTreeMap::new();
    for (line, value) in entries(text, Kind::Symbol) {
        let parsed = value.and_then(|v| {
            let entry: SymbolEntry = serde_json::from_value(v)?;
            let id = positive_id(entry.id)?;
            track(&mut ids, id, line, "symbol id")?;
            track(&mut symbols, entry.symbol.clone(), line, "symbol")?;
            if classify_token(&entry.symbol).is_err() {
                return Err(KnowledgeError::InvalidSymbol(entry.symbol).into());
            }
            Ok((id, entry.symbol))
        });
        pairs.push(parsed.map_err(|kind| KbError::Line { line, kind })?);
    }
    Ok(SymbolSet::new(pairs)?)
}

/// One line per rule, in rule-set order.
pub fn render_rule_set(rules: &RuleSet) -> String {
    rules
        .rules()
        .iter()
        .map(|r| {
            let line = RuleLine {
                id: r.id(),
                name: r.name(),
                clause: r.clause_strings(),
            };
            serde_json::to_string(&line).expect("rule line serializes") + "\n"
        })
        .collect()
}

/// One line per symbol, by ascending ID.
pub fn render_symbol_set(symbols: &SymbolSet) -> String {
    symbols
        .entries()
        .map(|(id, symbol)| {
            serde_json::to_string(&SymbolLine { id, symbol }).expect("symbol line serializes")
                + "\n"
        })
        .collect()
}

pub(crate) fn read(path: &Path) -> Result<String, KbError> {
    std::fs::read_to_string(path).map_err(|source| KbError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_rule_set(path: &Path) -> Result<RuleSet, KbError> {
    parse_rule_set(&read(path)?)
}

pub fn load_symbol_set(path: &Path) -> Result<SymbolSet, KbError> {
    parse_symbol_set(&read(path)?)
}
