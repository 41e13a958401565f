//! Model checking by negation, automaton translation, synchronous product,
//! and nested depth-first emptiness search.

use std::collections::HashSet;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::automata::{degeneralize, guard_holds, translate_gba, Buchi};
use crate::kripke::{Model, State, StateSpaceLimit, DEFAULT_STATE_CAP};
use crate::ltl::{eval_lasso, Formula, Lasso};

/// How a specification is interpreted against the model.
///
/// `AsWritten` evaluates the formula at the initial states only.
/// `GloballyWrapped` checks `G f` instead, so the formula must hold at every
/// position of every run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckMode {
    AsWritten,
    GloballyWrapped,
}

impl CheckMode {
    pub fn apply(&self, f: Formula) -> Formula {
        match self {
            CheckMode::AsWritten => f,
            CheckMode::GloballyWrapped => f.wrap_globally(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails(Lasso),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckStats {
    pub product_states: usize,
    pub elapsed_seconds: f64,
}

/// Result of one check: the outcome, a vacuity flag for implications whose
/// antecedent never holds at the evaluated states, and search statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub vacuous: bool,
    pub stats: CheckStats,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self.outcome, Outcome::Holds)
    }

    pub fn counterexample(&self) -> Option<&Lasso> {
        match &self.outcome {
            Outcome::Holds => None,
            Outcome::Fails(w) => Some(w),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("unknown atom: variable `{var}` is not declared in the model")]
    UnknownVariable { var: String },
    #[error("unknown atom: value `{value}` is not in the domain of `{var}`")]
    UnknownValue { var: String, value: String },
    #[error(transparent)]
    StateSpaceLimit(#[from] StateSpaceLimit),
}

/// Why a lasso fails counterexample validation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("first state is not an initial state of the model")]
    NotInitial,
    #[error("broken transition: step {index} does not follow the successor relation")]
    BrokenTransition { index: usize },
    #[error("not violating: the lasso satisfies the specification")]
    NotViolating,
    #[error("state {index} is not a valid assignment for the model")]
    InvalidState { index: usize },
}

/// Decides whether every infinite path of `m` from every initial state
/// satisfies `f` under the given mode, with the default state cap.
pub fn check(m: &Model, f: &Formula, mode: CheckMode) -> Result<Verdict, CheckError> {
    check_capped(m, f, mode, DEFAULT_STATE_CAP)
}

/// [`check`] with an explicit bound on explored product states.
///
/// The negated, mode-adjusted formula is translated to a Büchi automaton
/// whose product with the model is searched for an accepting lasso. A lasso
/// found means the specification fails and the lasso, projected to model
/// states, is the counterexample. Equal inputs produce identical verdicts,
/// including the specific counterexample.
pub fn check_capped(
    m: &Model,
    f: &Formula,
    mode: CheckMode,
    cap: usize,
) -> Result<Verdict, CheckError> {
    let start = Instant::now();
    validate_atoms(m, f)?;
    let adjusted = mode.apply(f.clone());
    let negated = adjusted.not().to_nnf();
    let automaton = degeneralize(&translate_gba(&negated).expect("negation normal form"));
    let mut search = ProductSearch::new(m, &automaton, cap);
    let witness = search.run()?;
    let vacuous = is_vacuous(m, f, mode, cap)?;
    let stats = CheckStats {
        product_states: search.explored,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    let outcome = match witness {
        Some(w) => {
            debug_assert_eq!(verify_counterexample(m, f, mode, &w), Ok(()));
            Outcome::Fails(w)
        }
        None => Outcome::Holds,
    };
    Ok(Verdict {
        outcome,
        vacuous,
        stats,
    })
}

/// Searches the synchronous product of model and automaton for an accepting
/// lasso and projects it to model states. Returns `None` when the product
/// language is empty. Exploration order is fixed: model successors in kripke
/// order, automaton transitions in construction order.
pub fn product_search(m: &Model, a: &Buchi, cap: usize) -> Result<Option<Lasso>, StateSpaceLimit> {
    ProductSearch::new(m, a, cap).run()
}

/// Validates a claimed counterexample independently of the search: the lasso
/// must start in an initial state, follow only model transitions (including
/// the cycle wrap-around), and violate the mode-adjusted formula per
/// [`eval_lasso`].
pub fn verify_counterexample(
    m: &Model,
    f: &Formula,
    mode: CheckMode,
    w: &Lasso,
) -> Result<(), WitnessError> {
    let states: Vec<&State> = w.prefix.iter().chain(w.cycle.iter()).collect();
    for (index, s) in states.iter().enumerate() {
        if !m.is_valid_state(s) {
            return Err(WitnessError::InvalidState { index });
        }
    }
    if !m.is_initial(states[0]) {
        return Err(WitnessError::NotInitial);
    }
    for index in 0..states.len() {
        let here = states[index];
        let there = if index + 1 < states.len() {
            states[index + 1]
        } else {
            &w.cycle[0]
        };
        if !m.successors(here).contains(there) {
            return Err(WitnessError::BrokenTransition { index });
        }
    }
    let adjusted = mode.apply(f.clone());
    match eval_lasso(&adjusted, w) {
        Ok(false) => Ok(()),
        Ok(true) => Err(WitnessError::NotViolating),
        Err(_) => Err(WitnessError::InvalidState { index: 0 }),
    }
}

fn validate_atoms(m: &Model, f: &Formula) -> Result<(), CheckError> {
    for atom in f.atoms() {
        match m.variable(&atom.var) {
            None => {
                return Err(CheckError::UnknownVariable {
                    var: atom.var.clone(),
                })
            }
            Some(decl) => {
                if !decl.domain.contains(&atom.value) {
                    return Err(CheckError::UnknownValue {
                        var: atom.var.clone(),
                        value: atom.value.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// A top-level implication is vacuously satisfied when its (propositional)
/// antecedent is false at every evaluated state: the initial states under
/// `AsWritten`, every reachable state under `GloballyWrapped`.
fn is_vacuous(m: &Model, f: &Formula, mode: CheckMode, cap: usize) -> Result<bool, CheckError> {
    let Formula::Implies(antecedent, _) = f else {
        return Ok(false);
    };
    let never_holds = |s: &State| propositional_value(antecedent, s) == Some(false);
    let vacuous = match mode {
        // Lazy: the initial set alone can be exponential in width.
        CheckMode::AsWritten => m.initial_state_iter().all(|s| never_holds(&s)),
        CheckMode::GloballyWrapped => m.reachable_states(cap)?.iter().all(never_holds),
    };
    Ok(vacuous)
}

/// Evaluates a formula at a single state; `None` when a temporal operator
/// makes the value depend on more than that state.
fn propositional_value(f: &Formula, s: &State) -> Option<bool> {
    match f {
        Formula::True => Some(true),
        Formula::False => Some(false),
        Formula::Atom(a) => Some(s.get(&a.var) == Some(a.value.as_str())),
        Formula::Not(g) => propositional_value(g, s).map(|b| !b),
        Formula::And(a, b) => Some(propositional_value(a, s)? && propositional_value(b, s)?),
        Formula::Or(a, b) => Some(propositional_value(a, s)? || propositional_value(b, s)?),
        Formula::Implies(a, b) => Some(!propositional_value(a, s)? || propositional_value(b, s)?),
        _ => None,
    }
}

type ProductNode = (State, usize);

/// Nested depth-first search for an accepting cycle in the product of a
/// model with a Büchi automaton. The outer (blue) search visits product
/// states in depth-first order; when it finishes an accepting state, the
/// inner (red) search looks for a cycle back to it. Red marks persist across
/// inner searches, which keeps the whole search linear in the product size.
struct ProductSearch<'a> {
    model: &'a Model,
    automaton: &'a Buchi,
    cap: usize,
    blue: HashSet<ProductNode>,
    red: HashSet<ProductNode>,
    explored: usize,
}

impl<'a> ProductSearch<'a> {
    fn new(model: &'a Model, automaton: &'a Buchi, cap: usize) -> Self {
        ProductSearch {
            model,
            automaton,
            cap,
            blue: HashSet::new(),
            red: HashSet::new(),
            explored: 0,
        }
    }

    fn successors(&self, (s, q): &ProductNode) -> Vec<ProductNode> {
        let enabled: Vec<usize> = self.automaton.transitions[*q]
            .iter()
            .filter(|(guard, _)| guard_holds(guard, s))
            .map(|(_, q2)| *q2)
            .collect();
        let mut out = Vec::new();
        for s2 in self.model.successors(s) {
            for &q2 in &enabled {
                out.push((s2.clone(), q2));
            }
        }
        out
    }

    fn mark_blue(&mut self, node: ProductNode) -> Result<(), StateSpaceLimit> {
        if self.explored == self.cap {
            return Err(StateSpaceLimit { cap: self.cap });
        }
        self.blue.insert(node);
        self.explored += 1;
        Ok(())
    }

    fn run(&mut self) -> Result<Option<Lasso>, StateSpaceLimit> {
        if self.automaton.node_count() == 0 || self.automaton.initial.is_empty() {
            return Ok(None);
        }
        // Initial states are enumerated lazily: their number alone can
        // exceed the cap.
        let model = self.model;
        for s0 in model.initial_state_iter() {
            for q0 in self.automaton.initial.clone() {
                let root = (s0.clone(), q0);
                if !self.blue.contains(&root) {
                    if let Some(lasso) = self.blue_dfs(root)? {
                        return Ok(Some(lasso));
                    }
                }
            }
        }
        Ok(None)
    }

    fn blue_dfs(&mut self, root: ProductNode) -> Result<Option<Lasso>, StateSpaceLimit> {
        self.mark_blue(root.clone())?;
        let succs = self.successors(&root);
        let mut stack: Vec<(ProductNode, Vec<ProductNode>, usize)> = vec![(root, succs, 0)];
        while !stack.is_empty() {
            let top = stack.len() - 1;
            if stack[top].2 < stack[top].1.len() {
                let next = stack[top].1[stack[top].2].clone();
                stack[top].2 += 1;
                if !self.blue.contains(&next) {
                    self.mark_blue(next.clone())?;
                    let succs = self.successors(&next);
                    stack.push((next, succs, 0));
                }
            } else {
                let node = stack[top].0.clone();
                if self.automaton.accepting.contains(&node.1) {
                    if let Some(cycle) = self.red_dfs(&node) {
                        let prefix = stack[..top].iter().map(|(n, _, _)| n.0.clone()).collect();
                        return Ok(Some(Lasso::new(prefix, cycle)));
                    }
                }
                stack.pop();
            }
        }
        Ok(None)
    }

    /// Searches for a path from `seed` back to `seed`; on success returns the
    /// cycle projected to model states.
    fn red_dfs(&mut self, seed: &ProductNode) -> Option<Vec<State>> {
        self.red.insert(seed.clone());
        let succs = self.successors(seed);
        let mut stack: Vec<(ProductNode, Vec<ProductNode>, usize)> = vec![(seed.clone(), succs, 0)];
        while !stack.is_empty() {
            let top = stack.len() - 1;
            if stack[top].2 < stack[top].1.len() {
                let next = stack[top].1[stack[top].2].clone();
                stack[top].2 += 1;
                if next == *seed {
                    return Some(stack.iter().map(|(n, _, _)| n.0.clone()).collect());
                }
                if !self.red.contains(&next) {
                    self.red.insert(next.clone());
                    let succs = self.successors(&next);
                    stack.push((next, succs, 0));
                }
            } else {
                stack.pop();
            }
        }
        None
    }
}

/// Verdict rendered for reports and expectation vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictLabel {
    Holds,
    Fails,
}

impl VerdictLabel {
    pub fn symbol(&self) -> &'static str {
        match self {
            VerdictLabel::Holds => "⊤",
            VerdictLabel::Fails => "⊥",
        }
    }
}

impl From<&Outcome> for VerdictLabel {
    fn from(o: &Outcome) -> Self {
        match o {
            Outcome::Holds => VerdictLabel::Holds,
            Outcome::Fails(_) => VerdictLabel::Fails,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub prefix: Vec<State>,
    pub cycle: Vec<State>,
}

/// Machine-readable result of one check. Serialized field names are stable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub model: String,
    pub spec: String,
    pub mode: CheckMode,
    pub verdict: VerdictLabel,
    pub vacuous: bool,
    pub counterexample: Option<CounterexampleReport>,
    pub stats: CheckStats,
}

impl CheckReport {
    pub fn new(
        name: impl Into<String>,
        model: &Model,
        f: &Formula,
        mode: CheckMode,
        v: &Verdict,
    ) -> Self {
        CheckReport {
            name: name.into(),
            model: model.name.clone(),
            spec: f.pretty(),
            mode,
            verdict: VerdictLabel::from(&v.outcome),
            vacuous: v.vacuous,
            counterexample: v.counterexample().map(|w| CounterexampleReport {
                prefix: w.prefix.clone(),
                cycle: w.cycle.clone(),
            }),
            stats: v.stats.clone(),
        }
    }
}
