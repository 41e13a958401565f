//! ω-automata produced from LTL formulas, and the operations that connect
//! them back to lassos for cross-validation.

mod translate;

pub use translate::{translate_gba, TranslateError};

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::kripke::Literal;
use crate::ltl::Lasso;

/// A transition guard: a consistent conjunction of equality/inequality
/// literals. A state satisfies the guard when it satisfies every literal.
/// Guards are shared: every edge out of a tableau node carries the same one.
pub type Guard = BTreeSet<Literal>;
pub type SharedGuard = Arc<Guard>;

pub fn guard_holds(guard: &Guard, s: &crate::kripke::State) -> bool {
    guard.iter().all(|lit| lit.holds(s))
}

/// Checks the guard invariant: no `v=a` together with `v=b` for `a != b`,
/// and no `v=a` together with `v!=a`.
pub fn guard_consistent(guard: &Guard) -> bool {
    for lit in guard {
        if lit.positive {
            let clash = guard.iter().any(|other| {
                other.var == lit.var
                    && ((other.positive && other.value != lit.value)
                        || (!other.positive && other.value == lit.value))
            });
            if clash {
                return false;
            }
        }
    }
    true
}

/// Generalized Büchi automaton: possibly many acceptance sets, each of which
/// an accepting run must visit infinitely often. Node ids index `transitions`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedBuchi {
    pub transitions: Vec<Vec<(SharedGuard, usize)>>,
    pub initial: Vec<usize>,
    pub acceptance: Vec<BTreeSet<usize>>,
}

impl GeneralizedBuchi {
    pub fn node_count(&self) -> usize {
        self.transitions.len()
    }
}

/// Büchi automaton: a single acceptance set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Buchi {
    pub transitions: Vec<Vec<(SharedGuard, usize)>>,
    pub initial: Vec<usize>,
    pub accepting: BTreeSet<usize>,
}

impl Buchi {
    pub fn node_count(&self) -> usize {
        self.transitions.len()
    }

    /// Plain-text export: `initial:` and `accepting:` headers, then one line
    /// per transition, `src -- guard --> dst`, in node order. Stable across
    /// runs for the same input.
    pub fn export_text(&self) -> String {
        let mut out = String::new();
        out.push_str("initial:");
        for id in &self.initial {
            out.push_str(&format!(" {id}"));
        }
        out.push('\n');
        out.push_str("accepting:");
        for id in &self.accepting {
            out.push_str(&format!(" {id}"));
        }
        out.push('\n');
        for (src, edges) in self.transitions.iter().enumerate() {
            for (guard, dst) in edges {
                out.push_str(&format!("{src} -- {} --> {dst}\n", render_guard(guard)));
            }
        }
        out
    }

    /// Graphviz rendering of the same structure.
    pub fn export_dot(&self, name: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!("digraph \"{name}\" {{\n"));
        out.push_str("  rankdir=LR;\n");
        for id in 0..self.node_count() {
            let shape = if self.accepting.contains(&id) {
                "doublecircle"
            } else {
                "circle"
            };
            out.push_str(&format!("  n{id} [label=\"{id}\", shape={shape}];\n"));
        }
        for id in &self.initial {
            out.push_str(&format!("  init{id} [shape=point, style=invis];\n"));
            out.push_str(&format!("  init{id} -> n{id};\n"));
        }
        for (src, edges) in self.transitions.iter().enumerate() {
            for (guard, dst) in edges {
                out.push_str(&format!(
                    "  n{src} -> n{dst} [label=\"{}\"];\n",
                    render_guard(guard)
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

fn render_guard(guard: &Guard) -> String {
    if guard.is_empty() {
        return "true".to_string();
    }
    guard
        .iter()
        .map(|lit| lit.to_string())
        .collect::<Vec<_>>()
        .join(" & ")
}

/// Counting construction: a generalized automaton with acceptance sets
/// `F_0 .. F_{k-1}` becomes an equivalent Büchi automaton over node pairs
/// `(q, i)`; leaving a node of `F_i` advances the counter `i` modulo `k`, and
/// `F_0 x {0}` is the acceptance set. Only pairs reachable from the initial
/// layer are materialized. An empty acceptance list means every run is
/// accepting, so every node of the copy is accepting; a single set yields an
/// isomorphic automaton.
pub fn degeneralize(g: &GeneralizedBuchi) -> Buchi {
    let k = g.acceptance.len();
    if k == 0 {
        return Buchi {
            transitions: g.transitions.clone(),
            initial: g.initial.clone(),
            accepting: (0..g.node_count()).collect(),
        };
    }
    if k == 1 {
        return Buchi {
            transitions: g.transitions.clone(),
            initial: g.initial.clone(),
            accepting: g.acceptance[0].clone(),
        };
    }
    // Pairs (q, i) discovered breadth-first from the initial layer, numbered
    // in discovery order.
    let mut id_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for &q in &g.initial {
        id_of.entry((q, 0)).or_insert_with(|| {
            pairs.push((q, 0));
            pairs.len() - 1
        });
    }
    let mut transitions: Vec<Vec<(SharedGuard, usize)>> = Vec::new();
    let mut at = 0;
    while at < pairs.len() {
        let (q, i) = pairs[at];
        let j = if g.acceptance[i].contains(&q) {
            (i + 1) % k
        } else {
            i
        };
        let mut edges = Vec::new();
        for (guard, q2) in &g.transitions[q] {
            let target = *id_of.entry((*q2, j)).or_insert_with(|| {
                pairs.push((*q2, j));
                pairs.len() - 1
            });
            edges.push((guard.clone(), target));
        }
        transitions.push(edges);
        at += 1;
    }
    Buchi {
        transitions,
        initial: g.initial.iter().map(|&q| id_of[&(q, 0)]).collect(),
        accepting: pairs
            .iter()
            .enumerate()
            .filter(|(_, &(q, i))| i == 0 && g.acceptance[0].contains(&q))
            .map(|(id, _)| id)
            .collect(),
    }
}

/// Decides whether some run of `a` over `prefix . cycle^ω` visits an
/// accepting node infinitely often: the finite product of the automaton with
/// the lasso positions is searched for a cycle through an accepting node.
/// Position wrap-around confines every cycle to the cycle region.
pub fn accepts_lasso(a: &Buchi, w: &Lasso) -> bool {
    if a.node_count() == 0 || a.initial.is_empty() {
        return false;
    }
    let n_pos = w.positions();
    let loopback = w.prefix.len();
    let succ_pos = |i: usize| if i + 1 < n_pos { i + 1 } else { loopback };
    let slot = |pos: usize, q: usize| pos * a.node_count() + q;

    // Reachable product nodes and their adjacency, guards evaluated once.
    fn intern(
        s: usize,
        node: (usize, usize),
        id_of: &mut [usize],
        nodes: &mut Vec<(usize, usize)>,
    ) -> usize {
        if id_of[s] == usize::MAX {
            id_of[s] = nodes.len();
            nodes.push(node);
        }
        id_of[s]
    }
    let mut id_of = vec![usize::MAX; n_pos * a.node_count()];
    let mut nodes: Vec<(usize, usize)> = Vec::new();
    for &q in &a.initial {
        intern(slot(0, q), (0, q), &mut id_of, &mut nodes);
    }
    let mut adj: Vec<Vec<usize>> = Vec::new();
    let mut next_unvisited = 0;
    while next_unvisited < nodes.len() {
        let (pos, q) = nodes[next_unvisited];
        let state = w.state_at(pos);
        let mut edges = Vec::new();
        for (guard, q2) in &a.transitions[q] {
            if guard_holds(guard, state) {
                let to = (succ_pos(pos), *q2);
                edges.push(intern(slot(to.0, to.1), to, &mut id_of, &mut nodes));
            }
        }
        adj.push(edges);
        next_unvisited += 1;
    }

    // Accept iff a strongly connected component that actually contains a
    // cycle (size >= 2, or a self-loop) holds an accepting node.
    let accepting_scc = |scc: &[usize]| {
        let cyclic = scc.len() >= 2 || scc.iter().any(|&v| adj[v].contains(&v));
        cyclic && scc.iter().any(|&v| a.accepting.contains(&nodes[v].1))
    };
    tarjan_has_scc(&adj, accepting_scc)
}

/// Iterative Tarjan SCC; returns true as soon as `matches` accepts a
/// component.
fn tarjan_has_scc(adj: &[Vec<usize>], matches: impl Fn(&[usize]) -> bool) -> bool {
    let n = adj.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0;
    for start in 0..n {
        if index[start] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(start, 0)];
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;
        while let Some(&(v, child)) = call.last() {
            if child < adj[v].len() {
                call.last_mut().expect("nonempty").1 += 1;
                let w = adj[v][child];
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut scc = Vec::new();
                    loop {
                        let w = stack.pop().expect("component members are on the stack");
                        on_stack[w] = false;
                        scc.push(w);
                        if w == v {
                            break;
                        }
                    }
                    if matches(&scc) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::State;
    use crate::ltl::{eval_lasso, parse, Formula};

    fn st(pairs: &[(&str, &str)]) -> State {
        State::from_pairs(pairs)
    }

    fn ba_for(f: &Formula) -> Buchi {
        degeneralize(&translate_gba(&f.to_nnf()).unwrap())
    }

    #[test]
    fn atom_automaton_checks_first_position() {
        let a = ba_for(&Formula::atom("p", "a"));
        assert!(accepts_lasso(
            &a,
            &Lasso::new(vec![], vec![st(&[("p", "a")])])
        ));
        assert!(!accepts_lasso(
            &a,
            &Lasso::new(vec![], vec![st(&[("p", "b")])])
        ));
    }

    #[test]
    fn eventually_automaton_needs_the_goal_once() {
        let a = ba_for(&Formula::atom("p", "a").eventually());
        assert!(accepts_lasso(
            &a,
            &Lasso::new(vec![st(&[("p", "b")])], vec![st(&[("p", "a")])])
        ));
        assert!(!accepts_lasso(
            &a,
            &Lasso::new(vec![], vec![st(&[("p", "b")])])
        ));
    }

    #[test]
    fn true_automaton_accepts_anything() {
        let a = ba_for(&Formula::True);
        assert!(accepts_lasso(
            &a,
            &Lasso::new(vec![], vec![st(&[("p", "a")])])
        ));
        assert!(accepts_lasso(
            &a,
            &Lasso::new(
                vec![st(&[("p", "b")])],
                vec![st(&[("p", "c")]), st(&[("p", "a")])]
            )
        ));
    }

    #[test]
    fn false_automaton_accepts_nothing() {
        let a = ba_for(&Formula::False);
        assert!(!accepts_lasso(
            &a,
            &Lasso::new(vec![], vec![st(&[("p", "a")])])
        ));
    }

    #[test]
    fn degeneralize_without_acceptance_sets_marks_all_nodes() {
        let g = GeneralizedBuchi {
            transitions: vec![
                vec![(Arc::new(Guard::new()), 1)],
                vec![(Arc::new(Guard::new()), 1)],
            ],
            initial: vec![0],
            acceptance: vec![],
        };
        let b = degeneralize(&g);
        assert_eq!(b.transitions, g.transitions);
        assert_eq!(b.initial, g.initial);
        assert_eq!(b.accepting, BTreeSet::from([0, 1]));
    }

    #[test]
    fn degeneralize_single_set_is_isomorphic() {
        let g = GeneralizedBuchi {
            transitions: vec![
                vec![(Arc::new(Guard::new()), 1)],
                vec![(Arc::new(Guard::new()), 0)],
            ],
            initial: vec![0],
            acceptance: vec![BTreeSet::from([1])],
        };
        let b = degeneralize(&g);
        assert_eq!(b.transitions, g.transitions);
        assert_eq!(b.accepting, BTreeSet::from([1]));
    }

    #[test]
    fn degeneralize_respects_size_bound() {
        let f = parse("F (p = a) & F (q = b) & F (p = c)").unwrap().to_nnf();
        let g = translate_gba(&f).unwrap();
        let b = degeneralize(&g);
        assert!(b.node_count() <= g.node_count() * g.acceptance.len().max(1));
    }

    #[test]
    fn negated_response_accepts_stalling_lasso() {
        // The negation of "issued implies eventually endorsed" accepts the
        // lasso that stalls in the dropped stage, and the oracle agrees.
        let phi = parse("stage = issued -> F (stage = endorsed)").unwrap();
        let neg = phi.clone().not().to_nnf();
        let a = degeneralize(&translate_gba(&neg).unwrap());
        let w = Lasso::new(
            vec![
                st(&[("stage", "issued"), ("claim_status", "initial")]),
                st(&[("stage", "signed"), ("claim_status", "initial")]),
            ],
            vec![st(&[
                ("stage", "claim_asset_dropped"),
                ("claim_status", "initial"),
            ])],
        );
        assert_eq!(eval_lasso(&phi.not(), &w), Ok(true));
        assert!(accepts_lasso(&a, &w));
    }

    #[test]
    fn export_text_is_stable() {
        let a = ba_for(&parse("p = a U q = b").unwrap());
        let text1 = a.export_text();
        let text2 = ba_for(&parse("p = a U q = b").unwrap()).export_text();
        assert_eq!(text1, text2);
        assert!(text1.starts_with("initial:"));
        assert!(text1.contains("accepting:"));
        assert!(text1.contains("-->"));
    }

    #[test]
    fn export_dot_shape() {
        let a = ba_for(&Formula::atom("p", "a"));
        let dot = a.export_dot("atom");
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("doublecircle"));
    }

    #[test]
    fn guard_consistency_check() {
        let ok: Guard = [Literal::eq("p", "a"), Literal::neq("q", "b")]
            .into_iter()
            .collect();
        assert!(guard_consistent(&ok));
        let clash: Guard = [Literal::eq("p", "a"), Literal::eq("p", "b")]
            .into_iter()
            .collect();
        assert!(!guard_consistent(&clash));
        let contra: Guard = [Literal::eq("p", "a"), Literal::neq("p", "a")]
            .into_iter()
            .collect();
        assert!(!guard_consistent(&contra));
    }

    #[test]
    fn automata_agree_with_the_oracle_on_random_nnf_formulas() {
        let mut rng = crate::oracle::Rng::new(31337);
        for _ in 0..500 {
            let f = crate::oracle::random_nnf_formula(&mut rng, 4);
            let g = translate_gba(&f).unwrap();
            assert!(
                g.node_count() <= 1usize << f.closure().len().min(30),
                "size bound violated for {f}"
            );
            let b = degeneralize(&g);
            let w = crate::oracle::random_lasso(&mut rng, 3, 3);
            assert_eq!(
                accepts_lasso(&b, &w),
                eval_lasso(&f, &w).unwrap(),
                "disagreement on {f} over {w:?}"
            );
        }
    }

    #[test]
    fn formula_and_negation_accept_complementarily() {
        let mut rng = crate::oracle::Rng::new(271828);
        for _ in 0..300 {
            let f = crate::oracle::random_nnf_formula(&mut rng, 3);
            let w = crate::oracle::random_lasso(&mut rng, 2, 3);
            let pos = ba_for(&f);
            let neg = ba_for(&f.clone().not());
            let pos_accepts = accepts_lasso(&pos, &w);
            let neg_accepts = accepts_lasso(&neg, &w);
            assert!(
                pos_accepts != neg_accepts,
                "both or neither accept {f} on {w:?}"
            );
        }
    }
}
