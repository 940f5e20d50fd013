//! Literal, rule and ranking encodings for the network.
//!
//! A literal becomes a fixed-size vector in four steps: variables are
//! replaced by [`VBLE`], the tree is completed to a `breadth`-ary tree of
//! `depth` levels (functors label nodes, arguments are children, missing
//! slots are `Empty`), the completed tree is flattened level by level, and
//! each slot becomes a one-hot block of width `max_symbol_id`. `Empty`
//! slots are all-zero blocks.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::knowledge::{RuleId, SymbolSet, VBLE};
use crate::term::Term;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("symbol {0:?} is not in the symbol set")]
    UnknownSymbol(String),
    #[error("rule id {id} is outside 1..={output_dim}")]
    RuleIdOutOfRange { id: RuleId, output_dim: usize },
    #[error("depth, breadth and output dimension must all be at least 1")]
    ZeroDimension,
    #[error("output dimension {output_dim} is smaller than max rule id {max_rule_id}")]
    OutputTooSmall {
        output_dim: usize,
        max_rule_id: RuleId,
    },
}

/// One position of a completed term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot<'a> {
    Symbol(&'a str),
    Empty,
}

/// Shape of the literal encoding and the rule decoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodingConfig {
    depth: usize,
    breadth: usize,
    output_dim: usize,
    symbols: SymbolSet,
}

impl EncodingConfig {
    pub fn new(
        depth: usize,
        breadth: usize,
        output_dim: usize,
        symbols: SymbolSet,
    ) -> Result<Self, EncodeError> {
        if depth == 0 || breadth == 0 || output_dim == 0 {
            return Err(EncodeError::ZeroDimension);
        }
        Ok(Self {
            depth,
            breadth,
            output_dim,
            symbols,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn breadth(&self) -> usize {
        self.breadth
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn symbols(&self) -> &SymbolSet {
        &self.symbols
    }

    /// Number of positions in the completed tree.
    pub fn positions(&self) -> usize {
        tree_positions(self.depth, self.breadth)
    }

    pub fn block_width(&self) -> usize {
        self.symbols.max_symbol_id() as usize
    }

    pub fn input_dim(&self) -> usize {
        self.positions() * self.block_width()
    }

    /// Fail if some rule ID would not fit in the output vector.
    pub fn check_rule_capacity(&self, max_rule_id: RuleId) -> Result<(), EncodeError> {
        if (max_rule_id as usize) > self.output_dim {
            Err(EncodeError::OutputTooSmall {
                output_dim: self.output_dim,
                max_rule_id,
            })
        } else {
            Ok(())
        }
    }
}

/// `1 + b + b^2 + … + b^(d-1)`.
pub fn tree_positions(depth: usize, breadth: usize) -> usize {
    let mut total = 0;
    let mut level = 1;
    for _ in 0..depth {
        total += level;
        level *= breadth;
    }
    total
}

/// Replace every variable by the constant `Vble`.
pub fn normalize_variables(t: &Term) -> Term {
    t.map_vars(&mut |_| Term::constant(VBLE))
}

fn label(t: &Term) -> &str {
    match t {
        Term::Constant(s) | Term::Variable(s) | Term::Compound(s, _) => s,
    }
}

fn children(t: &Term) -> &[Term] {
    match t {
        Term::Compound(_, args) => args,
        _ => &[],
    }
}

/// Complete `t` to a `breadth`-ary tree of `depth` levels and list its
/// slots in level order. Subterms past either bound are dropped.
pub fn complete_and_flatten(t: &Term, depth: usize, breadth: usize) -> Vec<Slot<'_>> {
    let mut out = Vec::with_capacity(tree_positions(depth, breadth));
    let mut level: Vec<Option<&Term>> = vec![Some(t)];
    for d in 0..depth {
        out.extend(
            level
                .iter()
                .map(|n| n.map_or(Slot::Empty, |t| Slot::Symbol(label(t)))),
        );
        if d + 1 == depth {
            break;
        }
        let mut next = Vec::with_capacity(level.len() * breadth);
        for node in &level {
            let kids = node.map_or(&[][..], children);
            next.extend((0..breadth).map(|i| kids.get(i)));
        }
        level = next;
    }
    out
}

/// Whether completion to `depth` × `breadth` drops any part of `t`.
pub fn exceeds_shape(t: &Term, depth: usize, breadth: usize) -> bool {
    let kids = children(t);
    if kids.is_empty() {
        return false;
    }
    depth <= 1 || kids.len() > breadth || kids.iter().any(|k| exceeds_shape(k, depth - 1, breadth))
}

/// One-hot encode a goal literal.
pub fn encode_literal(literal: &Term, cfg: &EncodingConfig) -> Result<Vec<f64>, EncodeError> {
    let normalized = normalize_variables(literal);
    let width = cfg.block_width();
    let slots = complete_and_flatten(&normalized, cfg.depth, cfg.breadth);
    let mut out = vec![0.0; slots.len() * width];
    for (block, slot) in slots.iter().enumerate() {
        if let Slot::Symbol(s) = slot {
            let id = cfg
                .symbols
                .id_of(s)
                .ok_or_else(|| EncodeError::UnknownSymbol(String::from(*s)))?;
            out[block * width + id as usize - 1] = 1.0;
        }
    }
    Ok(out)
}

/// One-hot target for rule `id` in an `output_dim`-wide vector.
pub fn encode_rule_target(id: RuleId, output_dim: usize) -> Result<Vec<f64>, EncodeError> {
    if id == 0 || id as usize > output_dim {
        return Err(EncodeError::RuleIdOutOfRange { id, output_dim });
    }
    let mut out = vec![0.0; output_dim];
    out[id as usize - 1] = 1.0;
    Ok(out)
}

/// Rule IDs `1..=len` ordered by descending score; ties go to the lower ID.
pub fn decode_ranking(output: &[f64]) -> Vec<RuleId> {
    let mut ids: Vec<RuleId> = (1..=output.len() as RuleId).collect();
    // stable sort keeps ascending ID among equal scores
    ids.sort_by(|&a, &b| output[b as usize - 1].total_cmp(&output[a as usize - 1]));
    ids
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_term;

    fn bigger_symbols() -> SymbolSet {
        SymbolSet::new([(1, "Vble"), (2, "bigger"), (3, "1"), (4, "2"), (5, "4")]).unwrap()
    }

    fn labels(slots: &[Slot<'_>]) -> Vec<String> {
        slots
            .iter()
            .map(|s| match s {
                Slot::Empty => String::from("Empty"),
                Slot::Symbol(s) => String::from(*s),
            })
            .collect()
    }

    #[test]
    fn positions_formula() {
        assert_eq!(tree_positions(1, 5), 1);
        assert_eq!(tree_positions(2, 3), 4);
        assert_eq!(tree_positions(3, 2), 7);
        assert_eq!(tree_positions(3, 1), 3);
    }

    #[test]
    fn normalize_examples() {
        let t = parse_term("[bigger,X,Y]").unwrap();
        let vble = Term::constant(VBLE);
        assert_eq!(
            normalize_variables(&t),
            Term::compound("bigger", vec![vble.clone(), vble])
        );
        let g = parse_term("[bigger,4,2]").unwrap();
        assert_eq!(normalize_variables(&g), g);
        let nested = parse_term("[know,P,[love,X,ran]]").unwrap();
        let n = normalize_variables(&nested);
        assert_eq!(
            alloc::string::ToString::to_string(&n),
            "[know,Vble,[love,Vble,ran]]"
        );
        assert_eq!(normalize_variables(&n), n);
    }

    #[test]
    fn flatten_examples() {
        let t = parse_term("[bigger,4,2]").unwrap();
        assert_eq!(
            labels(&complete_and_flatten(&t, 2, 3)),
            ["bigger", "4", "2", "Empty"]
        );
        let c = parse_term("c").unwrap();
        assert_eq!(
            labels(&complete_and_flatten(&c, 2, 2)),
            ["c", "Empty", "Empty"]
        );
        let deep = parse_term("[f,[g,a,a,a],x]").unwrap();
        assert_eq!(labels(&complete_and_flatten(&deep, 2, 2)), ["f", "g", "x"]);
        assert!(exceeds_shape(&deep, 2, 2));
        assert!(!exceeds_shape(&t, 2, 3));
        assert!(exceeds_shape(&t, 2, 1));
        assert!(exceeds_shape(&t, 1, 3));
    }

    #[test]
    fn flatten_is_level_order() {
        let t = parse_term("[f,[g,a],[h,b]]").unwrap();
        assert_eq!(
            labels(&complete_and_flatten(&t, 3, 2)),
            ["f", "g", "h", "a", "Empty", "b", "Empty"]
        );
    }

    #[test]
    fn encode_examples() {
        let cfg = EncodingConfig::new(2, 3, 3, bigger_symbols()).unwrap();
        assert_eq!(cfg.input_dim(), 20);
        let ground = encode_literal(&parse_term("[bigger,4,2]").unwrap(), &cfg).unwrap();
        #[rustfmt::skip]
        let expected = [
            0., 1., 0., 0., 0.,
            0., 0., 0., 0., 1.,
            0., 0., 0., 1., 0.,
            0., 0., 0., 0., 0.,
        ];
        assert_eq!(ground, expected);
        let open = encode_literal(&parse_term("[bigger,X,Y]").unwrap(), &cfg).unwrap();
        #[rustfmt::skip]
        let expected = [
            0., 1., 0., 0., 0.,
            1., 0., 0., 0., 0.,
            1., 0., 0., 0., 0.,
            0., 0., 0., 0., 0.,
        ];
        assert_eq!(open, expected);
        assert_eq!(
            encode_literal(&parse_term("[love,X,Y]").unwrap(), &cfg),
            Err(EncodeError::UnknownSymbol("love".into()))
        );
    }

    #[test]
    fn block_width_follows_max_id_with_gaps() {
        let ss = SymbolSet::new([(1, "Vble"), (7, "p")]).unwrap();
        let cfg = EncodingConfig::new(1, 1, 1, ss).unwrap();
        let v = encode_literal(&Term::constant("p"), &cfg).unwrap();
        assert_eq!(v.len(), 7);
        assert_eq!(v[6], 1.0);
    }

    #[test]
    fn rule_targets() {
        assert_eq!(encode_rule_target(2, 3).unwrap(), [0., 1., 0.]);
        assert_eq!(encode_rule_target(1, 1).unwrap(), [1.]);
        assert!(encode_rule_target(4, 3).is_err());
        assert!(encode_rule_target(0, 3).is_err());
    }

    #[test]
    fn rankings() {
        assert_eq!(decode_ranking(&[0.1, 0.7, 0.2]), [2, 3, 1]);
        assert_eq!(decode_ranking(&[0.5, 0.5]), [1, 2]);
        assert_eq!(decode_ranking(&[0.0, 0.0, 1.0, 0.0]), [3, 1, 2, 4]);
        assert!(decode_ranking(&[]).is_empty());
    }

    #[test]
    fn config_validation() {
        assert!(EncodingConfig::new(0, 1, 1, bigger_symbols()).is_err());
        let cfg = EncodingConfig::new(2, 2, 3, bigger_symbols()).unwrap();
        assert!(cfg.check_rule_capacity(3).is_ok());
        assert!(cfg.check_rule_capacity(4).is_err());
    }
}
