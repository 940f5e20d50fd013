#![allow(dead_code)]

use neurosld_core::{Substitution, Term};
use proptest::prelude::*;

pub const CONSTANTS: [&str; 3] = ["a", "b", "c"];
pub const FUNCTORS: [&str; 2] = ["f", "g"];
pub const VARIABLES: [&str; 3] = ["X", "Y", "Z"];

/// Terms over at most eight symbols, depth at most `depth`, using the first
/// `vars` variable names.
pub fn term(depth: u32, vars: usize) -> BoxedStrategy<Term> {
    let vars = vars.min(VARIABLES.len());
    let leaf = if vars == 0 {
        prop::sample::select(CONSTANTS.to_vec())
            .prop_map(Term::constant)
            .boxed()
    } else {
        prop_oneof![
            prop::sample::select(CONSTANTS.to_vec()).prop_map(Term::constant),
            prop::sample::select(VARIABLES[..vars].to_vec()).prop_map(Term::var),
        ]
        .boxed()
    };
    leaf.prop_recursive(depth.saturating_sub(1), 24, 3, |inner| {
        (
            prop::sample::select(FUNCTORS.to_vec()),
            prop::collection::vec(inner, 1..=3),
        )
            .prop_map(|(f, args)| Term::compound(f, args))
    })
    .boxed()
}

pub fn substitution(vars: usize) -> BoxedStrategy<Substitution> {
    let names = VARIABLES[..vars.min(VARIABLES.len())].to_vec();
    prop::collection::vec((prop::sample::select(names), term(3, vars)), 0..=3)
        .prop_map(|pairs| {
            let mut seen = Vec::new();
            let unique: Vec<(&str, Term)> = pairs
                .into_iter()
                .filter(|(v, _)| {
                    let fresh = !seen.contains(v);
                    seen.push(*v);
                    fresh
                })
                .collect();
            Substitution::from_pairs(unique)
        })
        .boxed()
}

/// One-way matching: extend `theta` so that `theta(pattern) == target`,
/// treating every variable in `target` as a frozen constant.
pub fn match_into(pattern: &Term, target: &Term, theta: &mut Vec<(String, Term)>) -> bool {
    match (pattern, target) {
        (Term::Variable(v), _) => match theta.iter().find(|(n, _)| n.as_str() == &**v) {
            Some((_, bound)) => bound == target,
            None => {
                theta.push((v.to_string(), target.clone()));
                true
            }
        },
        (Term::Constant(a), Term::Constant(b)) => a == b,
        (Term::Compound(f, xs), Term::Compound(g, ys)) => {
            f == g
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| match_into(x, y, theta))
        }
        _ => false,
    }
}

pub mod kb {
    use neurosld_core::{Goal, Rule, RuleSet, SymbolSet, Term};
    use rand::Rng;

    pub const PREDICATES: [(&str, usize); 3] = [("p", 1), ("q", 2), ("r", 2)];
    pub const CONSTANTS: [&str; 3] = ["a", "b", "c"];

    pub fn symbols() -> SymbolSet {
        SymbolSet::new([
            (1, "Vble"),
            (2, "p"),
            (3, "q"),
            (4, "r"),
            (5, "a"),
            (6, "b"),
            (7, "c"),
            (8, "s"),
        ])
        .unwrap()
    }

    fn argument<R: Rng>(rng: &mut R, vars: &[&str]) -> Term {
        match rng.gen_range(0..10) {
            0..=4 => Term::var(vars[rng.gen_range(0..vars.len())]),
            5..=8 => Term::constant(CONSTANTS[rng.gen_range(0..CONSTANTS.len())]),
            _ => Term::compound(
                "s",
                vec![Term::constant(CONSTANTS[rng.gen_range(0..CONSTANTS.len())])],
            ),
        }
    }

    pub fn literal<R: Rng>(rng: &mut R, vars: &[&str]) -> Term {
        let (name, arity) = PREDICATES[rng.gen_range(0..PREDICATES.len())];
        Term::compound(name, (0..arity).map(|_| argument(rng, vars)).collect())
    }

    /// Between one and `max_rules` rules with IDs `1..=n` in shuffled order.
    pub fn rule_set<R: Rng>(rng: &mut R, max_rules: usize) -> RuleSet {
        let n = rng.gen_range(1..=max_rules);
        let mut ids: Vec<u32> = (1..=n as u32).collect();
        for i in (1..ids.len()).rev() {
            ids.swap(i, rng.gen_range(0..=i));
        }
        let rules = ids
            .into_iter()
            .map(|id| {
                let vars = ["X", "Y", "Z"];
                let premises = match rng.gen_range(0..10) {
                    0..=4 => 0,
                    5..=8 => 1,
                    _ => 2,
                };
                let head = literal(rng, &vars);
                let body = (0..premises).map(|_| literal(rng, &vars)).collect();
                Rule::new(id, format!("rule{id}"), head, body).unwrap()
            })
            .collect();
        RuleSet::new(rules).unwrap()
    }

    pub fn goal<R: Rng>(rng: &mut R) -> Goal {
        let n = rng.gen_range(1..=2);
        Goal::new((0..n).map(|_| literal(rng, &["U", "W"])).collect())
    }
}

pub mod reference {
    //! A deliberately naive recursive SLD solver used as an oracle.

    use neurosld_core::{Goal, RuleSet, Term};

    type Bindings = Vec<(String, Term)>;

    fn substitute(t: &Term, b: &Bindings) -> Term {
        t.map_vars(&mut |v| {
            b.iter()
                .find(|(n, _)| n.as_str() == &**v)
                .map_or_else(|| Term::Variable(v.clone()), |(_, t)| t.clone())
        })
    }

    /// Textbook unification keeping the bindings in solved form.
    fn unify(a: &Term, b: &Term) -> Option<Bindings> {
        let mut solved: Bindings = Vec::new();
        let mut todo = vec![(a.clone(), b.clone())];
        while let Some((s, t)) = todo.pop() {
            let (s, t) = (substitute(&s, &solved), substitute(&t, &solved));
            match (&s, &t) {
                _ if s == t => {}
                (Term::Variable(v), other) | (other, Term::Variable(v)) => {
                    if other.contains_var(v) {
                        return None;
                    }
                    let single = vec![(v.to_string(), other.clone())];
                    for (_, range) in solved.iter_mut() {
                        *range = substitute(range, &single);
                    }
                    solved.push((v.to_string(), other.clone()));
                }
                (Term::Compound(f, xs), Term::Compound(g, ys))
                    if f == g && xs.len() == ys.len() =>
                {
                    todo.extend(xs.iter().cloned().zip(ys.iter().cloned()));
                }
                _ => return None,
            }
        }
        Some(solved)
    }

    pub struct Outcome {
        /// Instantiated goal literals of every proof, in discovery order.
        pub answers: Vec<Vec<Term>>,
        pub traces: Vec<Vec<u32>>,
        pub depth_cut: bool,
    }

    pub fn solve(goal: &Goal, rules: &RuleSet, depth_limit: usize) -> Outcome {
        let mut ordered: Vec<_> = rules.rules().iter().collect();
        ordered.sort_by_key(|r| r.id());
        let mut out = Outcome {
            answers: Vec::new(),
            traces: Vec::new(),
            depth_cut: false,
        };
        let mut counter = 0usize;
        let mut trace = Vec::new();
        go(
            &goal.literals,
            &goal.literals,
            &ordered,
            0,
            depth_limit,
            &mut counter,
            &mut trace,
            &mut out,
        );
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn go(
        goal: &[Term],
        answer: &[Term],
        rules: &[&neurosld_core::Rule],
        depth: usize,
        limit: usize,
        counter: &mut usize,
        trace: &mut Vec<u32>,
        out: &mut Outcome,
    ) {
        let Some((selected, rest)) = goal.split_first() else {
            out.answers.push(answer.to_vec());
            out.traces.push(trace.clone());
            return;
        };
        if depth >= limit {
            out.depth_cut = true;
            return;
        }
        for rule in rules {
            *counter += 1;
            let tag = *counter;
            let mut rename = |v: &neurosld_core::Name| Term::var(format!("{v}__{tag}"));
            let head = rule.positive().map_vars(&mut rename);
            let Some(b) = unify(&head, selected) else {
                continue;
            };
            let mut next: Vec<Term> = rule
                .negatives()
                .iter()
                .map(|p| substitute(&p.map_vars(&mut rename), &b))
                .collect();
            next.extend(rest.iter().map(|t| substitute(t, &b)));
            let answer: Vec<Term> = answer.iter().map(|t| substitute(t, &b)).collect();
            trace.push(rule.id());
            go(&next, &answer, rules, depth + 1, limit, counter, trace, out);
            trace.pop();
        }
    }
}
