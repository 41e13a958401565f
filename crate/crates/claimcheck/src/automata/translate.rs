//! Tableau translation from NNF formulas to generalized Büchi automata.
//!
//! Nodes carry a set of obligations for the current position (`old`) and a
//! set postponed to the next position (`next`). Temporal operators are
//! expanded on the fly through their expansion laws:
//!
//! ```text
//! a U b  =  b | (a & X(a U b))
//! a R b  =  (a & b) | (b & X(a R b))
//! F a    =  a | X(F a)
//! G a    =  a & X(G a)
//! ```
//!
//! Disjunctive expansions split the node under construction; nodes whose
//! literal obligations are contradictory are discarded. Finished nodes are
//! merged by their `(old, next)` key. Every edge out of a node carries the
//! node's literal obligations as its guard, checked against the state read
//! at the position where the edge is taken.
//!
//! Each `U` or `F` subformula contributes one acceptance set containing the
//! nodes where that obligation is absent or already discharged, which is
//! exactly the generalized Büchi condition preventing a run from postponing
//! an eventuality forever.
//!
//! Every obligation that can appear in a node is a member of the closure of
//! the input, so the expansion runs over small interned ids rather than
//! formula trees.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::kripke::Literal;
use crate::ltl::Formula;

use super::{GeneralizedBuchi, Guard};
use std::sync::Arc;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("formula is not in negation normal form at `{offending}`")]
pub struct TranslateError {
    pub offending: Formula,
}

type Id = u32;

/// Decomposed shape of a closure member; children are interned ids.
#[derive(Debug, Clone, Copy)]
enum Kind {
    True,
    False,
    /// Atom or negated atom: (variable symbol, value symbol, positive).
    Literal(u32, u32, bool),
    And(Id, Id),
    Or(Id, Id),
    Next(Id),
    Until(Id, Id),
    Release(Id, Id),
    Eventually(Id),
    Globally(Id),
}

struct Closure {
    kinds: Vec<Kind>,
    symbols: Vec<String>,
    /// `U`/`F` subformulas and their goals, in discovery order.
    eventualities: Vec<(Id, Id)>,
    /// Id of the input formula itself.
    root: Id,
}

impl Closure {
    fn build(f: &Formula) -> Closure {
        let members: Vec<Formula> = f.closure().into_iter().collect();
        let index: HashMap<&Formula, Id> = members
            .iter()
            .enumerate()
            .map(|(i, g)| (g, i as Id))
            .collect();
        let root = index[f];
        let mut symbols: Vec<String> = Vec::new();
        let mut symbol_ids: HashMap<String, u32> = HashMap::new();
        let mut sym = |name: &str, symbols: &mut Vec<String>| -> u32 {
            if let Some(&id) = symbol_ids.get(name) {
                return id;
            }
            let id = symbols.len() as u32;
            symbols.push(name.to_string());
            symbol_ids.insert(name.to_string(), id);
            id
        };
        let kinds = members
            .iter()
            .map(|g| match g {
                Formula::True => Kind::True,
                Formula::False => Kind::False,
                Formula::Atom(a) => {
                    Kind::Literal(sym(&a.var, &mut symbols), sym(&a.value, &mut symbols), true)
                }
                Formula::Not(inner) => match &**inner {
                    Formula::Atom(a) => Kind::Literal(
                        sym(&a.var, &mut symbols),
                        sym(&a.value, &mut symbols),
                        false,
                    ),
                    _ => unreachable!("rejected by the NNF check"),
                },
                Formula::And(a, b) => Kind::And(index[&**a], index[&**b]),
                Formula::Or(a, b) => Kind::Or(index[&**a], index[&**b]),
                Formula::Next(a) => Kind::Next(index[&**a]),
                Formula::Until(a, b) => Kind::Until(index[&**a], index[&**b]),
                Formula::Release(a, b) => Kind::Release(index[&**a], index[&**b]),
                Formula::Eventually(a) => Kind::Eventually(index[&**a]),
                Formula::Globally(a) => Kind::Globally(index[&**a]),
                Formula::Implies(..) | Formula::WeakUntil(..) => {
                    unreachable!("rejected by the NNF check")
                }
            })
            .collect();
        let mut eventualities = Vec::new();
        collect_eventualities(f, &index, &mut eventualities);
        Closure {
            kinds,
            symbols,
            eventualities,
            root,
        }
    }

    fn literal(&self, id: Id) -> Option<(u32, u32, bool)> {
        match self.kinds[id as usize] {
            Kind::Literal(var, value, positive) => Some((var, value, positive)),
            _ => None,
        }
    }
}

fn collect_eventualities(f: &Formula, index: &HashMap<&Formula, Id>, out: &mut Vec<(Id, Id)>) {
    match f {
        Formula::Until(a, b) => {
            let pair = (index[f], index[&**b]);
            if !out.contains(&pair) {
                out.push(pair);
            }
            collect_eventualities(a, index, out);
            collect_eventualities(b, index, out);
        }
        Formula::Eventually(a) => {
            let pair = (index[f], index[&**a]);
            if !out.contains(&pair) {
                out.push(pair);
            }
            collect_eventualities(a, index, out);
        }
        Formula::True | Formula::False | Formula::Atom(_) | Formula::Not(_) => {}
        Formula::Next(g) | Formula::Globally(g) => collect_eventualities(g, index, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Release(a, b) => {
            collect_eventualities(a, index, out);
            collect_eventualities(b, index, out);
        }
        Formula::Implies(..) | Formula::WeakUntil(..) => {
            unreachable!("rejected by the NNF check")
        }
    }
}

/// Where edges into a finished node come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Source {
    Init,
    Node(usize),
}

#[derive(Debug, Clone)]
struct Pending {
    incoming: Source,
    new: Vec<Id>,
    old: BTreeSet<Id>,
    next: BTreeSet<Id>,
}

/// Translates an NNF formula into a generalized Büchi automaton accepting
/// exactly the words that satisfy it.
pub fn translate_gba(f: &Formula) -> Result<GeneralizedBuchi, TranslateError> {
    check_nnf(f)?;
    let closure = Closure::build(f);

    // (old, next) -> node id, nodes numbered in creation order.
    let mut ids: HashMap<(BTreeSet<Id>, BTreeSet<Id>), usize> = HashMap::new();
    let mut olds: Vec<BTreeSet<Id>> = Vec::new();
    let mut initial: Vec<usize> = Vec::new();
    let mut edges: Vec<Vec<usize>> = Vec::new();

    let mut work = vec![Pending {
        incoming: Source::Init,
        new: vec![closure.root],
        old: BTreeSet::new(),
        next: BTreeSet::new(),
    }];

    while let Some(mut node) = work.pop() {
        let Some(g) = node.new.pop() else {
            let key = (node.old.clone(), node.next.clone());
            let (id, fresh) = match ids.get(&key) {
                Some(&id) => (id, false),
                None => {
                    let id = olds.len();
                    ids.insert(key, id);
                    olds.push(node.old);
                    edges.push(Vec::new());
                    (id, true)
                }
            };
            match node.incoming {
                Source::Init => {
                    if !initial.contains(&id) {
                        initial.push(id);
                    }
                }
                Source::Node(j) => {
                    if !edges[j].contains(&id) {
                        edges[j].push(id);
                    }
                }
            }
            if fresh {
                work.push(Pending {
                    incoming: Source::Node(id),
                    new: node.next.iter().copied().collect(),
                    old: BTreeSet::new(),
                    next: BTreeSet::new(),
                });
            }
            continue;
        };

        if node.old.contains(&g) {
            work.push(node);
            continue;
        }
        match closure.kinds[g as usize] {
            Kind::False => {} // unsatisfiable obligation, drop the node
            Kind::True => {
                node.old.insert(g);
                work.push(node);
            }
            Kind::Literal(var, value, positive) => {
                let contradicts = node.old.iter().filter_map(|&o| closure.literal(o)).any(
                    |(ovar, ovalue, opositive)| {
                        ovar == var
                            && if positive {
                                (opositive && ovalue != value) || (!opositive && ovalue == value)
                            } else {
                                opositive && ovalue == value
                            }
                    },
                );
                if !contradicts {
                    node.old.insert(g);
                    work.push(node);
                }
            }
            Kind::And(a, b) => {
                node.old.insert(g);
                node.new.push(a);
                node.new.push(b);
                work.push(node);
            }
            Kind::Or(a, b) => {
                node.old.insert(g);
                let mut right = node.clone();
                node.new.push(a);
                right.new.push(b);
                work.push(right);
                work.push(node);
            }
            Kind::Next(a) => {
                node.old.insert(g);
                node.next.insert(a);
                work.push(node);
            }
            Kind::Until(a, b) => {
                node.old.insert(g);
                let mut wait = node.clone();
                wait.new.push(a);
                wait.next.insert(g);
                node.new.push(b);
                work.push(node); // goal branch
                work.push(wait); // postponing branch explored first
            }
            Kind::Release(a, b) => {
                node.old.insert(g);
                let mut hold = node.clone();
                hold.new.push(b);
                hold.next.insert(g);
                node.new.push(a);
                node.new.push(b);
                work.push(node); // release branch
                work.push(hold);
            }
            Kind::Eventually(a) => {
                node.old.insert(g);
                let mut wait = node.clone();
                wait.next.insert(g);
                node.new.push(a);
                work.push(node);
                work.push(wait);
            }
            Kind::Globally(a) => {
                node.old.insert(g);
                node.new.push(a);
                node.next.insert(g);
                work.push(node);
            }
        }
    }

    // Every edge out of a node is guarded by the node's literals.
    let transitions = olds
        .iter()
        .zip(&edges)
        .map(|(old, targets)| {
            let mut guard = Guard::new();
            for &o in old {
                if let Some((var, value, positive)) = closure.literal(o) {
                    guard.insert(Literal {
                        var: closure.symbols[var as usize].clone(),
                        value: closure.symbols[value as usize].clone(),
                        positive,
                    });
                }
            }
            let guard = Arc::new(guard);
            targets.iter().map(|&dst| (guard.clone(), dst)).collect()
        })
        .collect();

    // One acceptance set per eventuality, in discovery order: the nodes that
    // either do not carry the obligation or already satisfy its goal.
    let acceptance = closure
        .eventualities
        .iter()
        .map(|&(ev, goal)| {
            olds.iter()
                .enumerate()
                .filter(|(_, old)| !old.contains(&ev) || old.contains(&goal))
                .map(|(id, _)| id)
                .collect()
        })
        .collect();

    Ok(GeneralizedBuchi {
        transitions,
        initial,
        acceptance,
    })
}

fn check_nnf(f: &Formula) -> Result<(), TranslateError> {
    if f.is_nnf() {
        Ok(())
    } else {
        let offending = first_nnf_violation(f).unwrap_or_else(|| f.clone());
        Err(TranslateError { offending })
    }
}

fn first_nnf_violation(f: &Formula) -> Option<Formula> {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => None,
        Formula::Implies(..) | Formula::WeakUntil(..) => Some(f.clone()),
        Formula::Not(g) => {
            if matches!(**g, Formula::Atom(_)) {
                None
            } else {
                Some(f.clone())
            }
        }
        Formula::Next(g) | Formula::Eventually(g) | Formula::Globally(g) => first_nnf_violation(g),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(a, b) | Formula::Release(a, b) => {
            first_nnf_violation(a).or_else(|| first_nnf_violation(b))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{accepts_lasso, degeneralize, guard_consistent};
    use crate::kripke::State;
    use crate::ltl::{eval_lasso, parse, Formula, Lasso};

    fn st(p: &str) -> State {
        State::from_pairs(&[("p", p)])
    }

    #[test]
    fn rejects_non_nnf_input() {
        let f = Formula::atom("p", "a").implies(Formula::atom("q", "b"));
        let err = translate_gba(&f).unwrap_err();
        assert!(err.to_string().contains("negation normal form"));
        let g = Formula::atom("p", "a").until(Formula::atom("q", "b")).not();
        assert!(translate_gba(&g).is_err());
    }

    #[test]
    fn until_gets_one_acceptance_set() {
        let f = parse("p = a U p = b").unwrap();
        let g = translate_gba(&f).unwrap();
        assert_eq!(g.acceptance.len(), 1);
        for set in &g.acceptance {
            assert!(set.iter().all(|id| *id < g.node_count()));
        }
    }

    #[test]
    fn globally_only_formula_has_no_acceptance_sets() {
        let f = parse("G (p = a)").unwrap();
        let g = translate_gba(&f).unwrap();
        assert_eq!(g.acceptance.len(), 0);
    }

    #[test]
    fn node_count_within_closure_bound() {
        for text in [
            "p = a U (p = b U p = c)",
            "G (F (p = a))",
            "(p = a R p = b) | X (p = c)",
            "F (p = a) & G (p = b | p = c)",
        ] {
            let f = parse(text).unwrap();
            let g = translate_gba(&f).unwrap();
            let bound = 1usize << f.closure().len().min(30);
            assert!(g.node_count() <= bound, "{text}: {} nodes", g.node_count());
        }
    }

    #[test]
    fn guards_satisfy_the_consistency_invariant() {
        let f = parse("(p = a & p != b) U (p = b | p = c)").unwrap();
        let g = translate_gba(&f).unwrap();
        for edges in &g.transitions {
            for (guard, _) in edges {
                assert!(guard_consistent(guard), "inconsistent guard {guard:?}");
            }
        }
    }

    #[test]
    fn contradictory_conjunction_yields_empty_automaton() {
        let f = parse("p = a & p = b").unwrap();
        let g = translate_gba(&f).unwrap();
        assert!(g.initial.is_empty());
    }

    #[test]
    fn until_automaton_agrees_with_oracle_on_edge_lassos() {
        let f = parse("p = a U p = b").unwrap();
        let a = degeneralize(&translate_gba(&f).unwrap());
        let cases = [
            Lasso::new(vec![], vec![st("b")]),
            Lasso::new(vec![st("a")], vec![st("b")]),
            Lasso::new(vec![], vec![st("a")]),
            Lasso::new(vec![st("a"), st("a")], vec![st("c")]),
            Lasso::new(vec![st("b")], vec![st("c")]),
            Lasso::new(vec![], vec![st("a"), st("b")]),
        ];
        for w in cases {
            assert_eq!(
                accepts_lasso(&a, &w),
                eval_lasso(&f, &w).unwrap(),
                "disagreement on {w:?}"
            );
        }
    }

    #[test]
    fn release_automaton_agrees_with_oracle_on_edge_lassos() {
        let f = parse("p = a R p = b").unwrap();
        let a = degeneralize(&translate_gba(&f).unwrap());
        let cases = [
            Lasso::new(vec![], vec![st("b")]),
            Lasso::new(vec![st("b")], vec![st("a")]),
            Lasso::new(vec![], vec![st("a")]),
            Lasso::new(vec![st("b"), st("b")], vec![st("c")]),
        ];
        for w in cases {
            assert_eq!(
                accepts_lasso(&a, &w),
                eval_lasso(&f, &w).unwrap(),
                "disagreement on {w:?}"
            );
        }
    }
}
