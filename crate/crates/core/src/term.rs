//! First-order terms, substitutions and most-general unification.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Interned-by-refcount symbol text shared between terms.
pub type Name = Arc<str>;

/// Prefix of variables produced by [`FreshVars`]. User input may not use it.
pub const FRESH_PREFIX: &str = "_V";

/// A first-order term: a constant, a variable or a functor applied to
/// one or more arguments.
///
/// A compound with zero arguments is never built; [`Term::compound`]
/// collapses it to a constant.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Constant(Name),
    Variable(Name),
    Compound(Name, Vec<Term>),
}

impl Term {
    pub fn constant(symbol: impl Into<Name>) -> Term {
        Term::Constant(symbol.into())
    }

    pub fn var(name: impl Into<Name>) -> Term {
        Term::Variable(name.into())
    }

    pub fn compound(functor: impl Into<Name>, args: Vec<Term>) -> Term {
        if args.is_empty() {
            Term::Constant(functor.into())
        } else {
            Term::Compound(functor.into(), args)
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Variable(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Constant(_) => true,
            Term::Variable(_) => false,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Whether the variable `name` occurs anywhere in this term.
    pub fn contains_var(&self, name: &str) -> bool {
        match self {
            Term::Constant(_) => false,
            Term::Variable(v) => &**v == name,
            Term::Compound(_, args) => args.iter().any(|a| a.contains_var(name)),
        }
    }

    /// Distinct variables in depth-first, left-to-right order of first occurrence.
    pub fn variables(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut Vec<Name>) {
        match self {
            Term::Constant(_) => {}
            Term::Variable(v) => {
                if !out.iter().any(|seen| seen == v) {
                    out.push(v.clone());
                }
            }
            Term::Compound(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Height of the term tree; atoms have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Term::Compound(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            _ => 1,
        }
    }

    /// Replace every variable by the result of `f`, leaving structure intact.
    pub fn map_vars(&self, f: &mut impl FnMut(&Name) -> Term) -> Term {
        match self {
            Term::Constant(_) => self.clone(),
            Term::Variable(v) => f(v),
            Term::Compound(functor, args) => Term::Compound(
                functor.clone(),
                args.iter().map(|a| a.map_vars(f)).collect(),
            ),
        }
    }
}

/// Renders in bracket syntax: `[bigger,X,[succ,0]]`.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Constant(c) => f.write_str(c),
            Term::Variable(v) => f.write_str(v),
            Term::Compound(functor, args) => {
                write!(f, "[{functor}")?;
                for arg in args {
                    write!(f, ",{arg}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite mapping from variables to terms.
///
/// Bindings of a variable to itself are never stored. Substitutions
/// returned by [`unify`] are idempotent.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Name, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from raw pairs. Identity pairs are dropped; later pairs for
    /// the same variable replace earlier ones.
    pub fn from_pairs<I, N>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (N, Term)>,
        N: Into<Name>,
    {
        let mut s = Self::new();
        for (name, term) in pairs {
            s.insert(name.into(), term);
        }
        s
    }

    fn insert(&mut self, name: Name, term: Term) {
        if matches!(&term, Term::Variable(v) if *v == name) {
            self.bindings.remove(&name);
        } else {
            self.bindings.insert(name, term);
        }
    }

    pub fn get(&self, name: &str) -> Option<&Term> {
        self.bindings.get(name)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Bindings in ascending variable-name order.
    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Term)> {
        self.bindings.iter()
    }

    /// Simultaneous replacement of every bound variable in `t`.
    pub fn apply(&self, t: &Term) -> Term {
        if self.is_empty() {
            return t.clone();
        }
        t.map_vars(&mut |v| match self.bindings.get(v) {
            Some(bound) => bound.clone(),
            None => Term::Variable(v.clone()),
        })
    }

    /// The substitution that behaves like applying `self` and then `other`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (name, term) in &self.bindings {
            out.insert(name.clone(), other.apply(term));
        }
        for (name, term) in &other.bindings {
            if !self.bindings.contains_key(name) {
                out.insert(name.clone(), term.clone());
            }
        }
        out
    }

    /// Keep only bindings for the listed variables.
    pub fn restrict(&self, vars: &[Name]) -> Substitution {
        Substitution {
            bindings: self
                .bindings
                .iter()
                .filter(|(k, _)| vars.contains(k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Add `name/term` and push it through the existing range so the
    /// result stays idempotent. `term` must already be fully substituted.
    fn bind_eager(&mut self, name: Name, term: Term) {
        let single = Substitution::from_pairs([(name.clone(), term.clone())]);
        for bound in self.bindings.values_mut() {
            *bound = single.apply(bound);
        }
        self.insert(name, term);
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (name, term)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}/{term}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Why two terms failed to unify.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum UnifyFailure {
    #[error("symbol or arity clash")]
    Clash,
    #[error("occurs check")]
    OccursCheck,
}

/// Compute an idempotent most general unifier of `a` and `b`.
///
/// In a variable-variable pair the variable from `a` is bound to the one
/// from `b`, so callers that pass a renamed rule head as `a` keep the
/// goal's variable names. With `occurs_check` off a cyclic binding such as
/// `X/[f,X]` is accepted and the result is no longer idempotent.
pub fn unify(a: &Term, b: &Term, occurs_check: bool) -> Result<Substitution, UnifyFailure> {
    let mut subst = Substitution::new();
    let mut pending = vec![(a.clone(), b.clone())];
    while let Some((left, right)) = pending.pop() {
        let left = subst.apply(&left);
        let right = subst.apply(&right);
        match (left, right) {
            (Term::Variable(v), Term::Variable(w)) if v == w => {}
            (Term::Variable(v), other) | (other, Term::Variable(v)) => {
                if occurs_check && other.contains_var(&v) {
                    return Err(UnifyFailure::OccursCheck);
                }
                subst.bind_eager(v, other);
            }
            (Term::Constant(c), Term::Constant(d)) => {
                if c != d {
                    return Err(UnifyFailure::Clash);
                }
            }
            (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return Err(UnifyFailure::Clash);
                }
                // reversed so the leftmost argument pair is solved first
                pending.extend(xs.into_iter().zip(ys).rev());
            }
            _ => return Err(UnifyFailure::Clash),
        }
    }
    Ok(subst)
}

/// Source of variable names that no user input can contain.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreshVars {
    next: u64,
}

impl FreshVars {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn starting_at(next: u64) -> Self {
        Self { next }
    }

    /// A counter whose names cannot clash with any reserved variable
    /// already present in `terms`.
    pub fn above<'a>(terms: impl IntoIterator<Item = &'a Term>) -> Self {
        let mut next = 0;
        for t in terms {
            for v in t.variables() {
                if let Some(n) = reserved_index(&v) {
                    next = next.max(n + 1);
                }
            }
        }
        Self { next }
    }

    /// The number the next fresh variable will carry.
    pub fn peek(&self) -> u64 {
        self.next
    }

    pub fn fresh(&mut self) -> Name {
        let name: Name = format!("{FRESH_PREFIX}{}", self.next).into();
        self.next += 1;
        name
    }
}

/// Whether `name` lies in the namespace reserved for [`FreshVars`].
pub fn is_reserved_var(name: &str) -> bool {
    name.strip_prefix(FRESH_PREFIX)
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

fn reserved_index(name: &str) -> Option<u64> {
    if is_reserved_var(name) {
        name[FRESH_PREFIX.len()..].parse().ok()
    } else {
        None
    }
}

/// Whether `a` and `b` are equal up to a consistent, one-to-one renaming
/// of variables.
pub fn is_variant(a: &Term, b: &Term) -> bool {
    fn walk(a: &Term, b: &Term, map: &mut Vec<(Name, Name)>) -> bool {
        match (a, b) {
            (Term::Constant(x), Term::Constant(y)) => x == y,
            (Term::Variable(x), Term::Variable(y)) => {
                match map.iter().find(|(l, r)| l == x || r == y) {
                    Some((l, r)) => l == x && r == y,
                    None => {
                        map.push((x.clone(), y.clone()));
                        true
                    }
                }
            }
            (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| walk(x, y, map))
            }
            _ => false,
        }
    }
    walk(a, b, &mut Vec::new())
}

/// Consistently replace every variable in `terms` with a fresh one.
///
/// Variables are renamed in order of first occurrence, so the same input
/// and counter state always give the same output.
pub fn rename_apart(terms: &[Term], fresh: &mut FreshVars) -> Vec<Term> {
    let mut vars = Vec::new();
    for t in terms {
        t.collect_vars(&mut vars);
    }
    if vars.is_empty() {
        return terms.to_vec();
    }
    let renaming =
        Substitution::from_pairs(vars.into_iter().map(|v| (v, Term::Variable(fresh.fresh()))));
    terms.iter().map(|t| renaming.apply(t)).collect()
}
