//! Finite-state transition systems over enum-typed variables.
//!
//! A model is a set of variable declarations, an initial-state constraint,
//! and guarded transition rules. Nondeterminism comes from multiple rules
//! firing in the same state and from set-valued updates; variables a firing
//! rule does not mention keep their value.

mod parser;

pub use parser::{parse_model, ModelError};

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Default bound on explored states before giving up.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("state space exceeds the configured cap of {cap} states")]
pub struct StateSpaceLimit {
    pub cap: usize,
}

/// A declared variable and its ordered, duplicate-free value domain.
/// Domain order is significant: it fixes tie-breaking everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableDecl {
    pub name: String,
    pub domain: Vec<String>,
}

/// A total assignment of one value to every declared variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct State(BTreeMap<String, String>);

impl State {
    pub fn from_pairs(pairs: &[(&str, &str)]) -> Self {
        State(
            pairs
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        )
    }

    pub fn get(&self, var: &str) -> Option<&str> {
        self.0.get(var).map(|s| s.as_str())
    }

    pub fn set(&mut self, var: impl Into<String>, value: impl Into<String>) {
        self.0.insert(var.into(), value.into());
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        write!(f, "}}")
    }
}

/// An equality or inequality test against a single variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: String,
    pub value: String,
    pub positive: bool,
}

impl Literal {
    pub fn eq(var: impl Into<String>, value: impl Into<String>) -> Self {
        Literal {
            var: var.into(),
            value: value.into(),
            positive: true,
        }
    }

    pub fn neq(var: impl Into<String>, value: impl Into<String>) -> Self {
        Literal {
            var: var.into(),
            value: value.into(),
            positive: false,
        }
    }

    /// Whether the literal holds in `s`. A variable missing from `s` never
    /// satisfies the literal.
    pub fn holds(&self, s: &State) -> bool {
        match s.get(&self.var) {
            Some(v) => (v == self.value) == self.positive,
            None => false,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}",
            self.var,
            if self.positive { "=" } else { "!=" },
            self.value
        )
    }
}

/// Right-hand side of one `next(var)` update: the set of values the variable
/// may take in the successor state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Update {
    pub var: String,
    pub choices: Vec<String>,
}

/// One guarded transition rule. When the guard holds in a state, the rule
/// denotes every state obtained by picking one choice per update; unlisted
/// variables keep their value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransRule {
    pub guard: Vec<Literal>,
    pub updates: Vec<Update>,
}

impl TransRule {
    fn fires(&self, s: &State) -> bool {
        self.guard.iter().all(|lit| lit.holds(s))
    }
}

/// A finite-state model: declarations, a factored initial-state constraint
/// (per variable, the allowed initial values), and transition rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub name: String,
    pub variables: Vec<VariableDecl>,
    init_allowed: Vec<Vec<String>>,
    pub rules: Vec<TransRule>,
}

impl Model {
    pub(crate) fn new(
        name: String,
        variables: Vec<VariableDecl>,
        init_allowed: Vec<Vec<String>>,
        rules: Vec<TransRule>,
    ) -> Self {
        Model {
            name,
            variables,
            init_allowed,
            rules,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn variable(&self, name: &str) -> Option<&VariableDecl> {
        self.variables.iter().find(|v| v.name == name)
    }

    /// Whether `s` satisfies the initial-state constraint.
    pub fn is_initial(&self, s: &State) -> bool {
        if !self.is_valid_state(s) {
            return false;
        }
        self.variables
            .iter()
            .zip(&self.init_allowed)
            .all(|(decl, allowed)| {
                s.get(&decl.name)
                    .is_some_and(|v| allowed.iter().any(|a| a == v))
            })
    }

    /// Whether `s` assigns every declared variable a value from its domain,
    /// and nothing else.
    pub fn is_valid_state(&self, s: &State) -> bool {
        s.len() == self.variables.len()
            && self.variables.iter().all(|decl| {
                s.get(&decl.name)
                    .is_some_and(|v| decl.domain.iter().any(|d| d == v))
            })
    }

    /// The initial states, enumerated in kripke order (variable declaration
    /// order, then domain order). The set is nonempty by construction.
    ///
    /// The set can be exponential in the number of unconstrained variables;
    /// [`Model::initial_state_iter`] enumerates it lazily.
    pub fn initial_states(&self) -> Vec<State> {
        self.initial_state_iter().collect()
    }

    /// Lazy enumeration of the initial states, in the same order as
    /// [`Model::initial_states`].
    pub fn initial_state_iter(&self) -> impl Iterator<Item = State> + '_ {
        InitialStates {
            model: self,
            indices: vec![0; self.variables.len()],
            done: false,
        }
    }

    /// Sort key realizing kripke order: per-variable domain indices in
    /// declaration order.
    fn state_key(&self, s: &State) -> Vec<usize> {
        self.variables
            .iter()
            .map(|decl| {
                let v = s
                    .get(&decl.name)
                    .expect("state assigns every declared variable");
                decl.domain
                    .iter()
                    .position(|d| d == v)
                    .expect("value is in the domain")
            })
            .collect()
    }

    /// All successors of `s`: the union of the denotations of every rule
    /// whose guard holds, deduplicated, in kripke order. Empty when no rule
    /// fires (a deadlock, before totalization).
    pub fn successors(&self, s: &State) -> Vec<State> {
        let mut out: Vec<State> = Vec::new();
        for rule in self.rules.iter().filter(|r| r.fires(s)) {
            let mut partial = vec![s.clone()];
            for update in &rule.updates {
                let mut next = Vec::with_capacity(partial.len() * update.choices.len());
                for base in &partial {
                    for choice in &update.choices {
                        let mut st = base.clone();
                        st.set(update.var.clone(), choice.clone());
                        next.push(st);
                    }
                }
                partial = next;
            }
            out.extend(partial);
        }
        out.sort_by_cached_key(|st| self.state_key(st));
        out.dedup();
        out
    }

    /// Breadth-first enumeration of all reachable states, deduplicated, in a
    /// deterministic order. Fails once more than `cap` states are discovered.
    pub fn reachable_states(&self, cap: usize) -> Result<Vec<State>, StateSpaceLimit> {
        let mut order: Vec<State> = Vec::new();
        let mut seen: HashSet<State> = HashSet::new();
        let mut queue: VecDeque<State> = VecDeque::new();
        let push = |st: State,
                    seen: &mut HashSet<State>,
                    order: &mut Vec<State>,
                    queue: &mut VecDeque<State>| {
            if seen.insert(st.clone()) {
                if order.len() == cap {
                    return Err(StateSpaceLimit { cap });
                }
                order.push(st.clone());
                queue.push_back(st);
            }
            Ok(())
        };
        for st in self.initial_state_iter() {
            push(st, &mut seen, &mut order, &mut queue)?;
        }
        while let Some(st) = queue.pop_front() {
            for succ in self.successors(&st) {
                push(succ, &mut seen, &mut order, &mut queue)?;
            }
        }
        Ok(order)
    }

    /// Closes every reachable deadlock state with a self-loop and reports the
    /// states that were modified. A model that is already total comes back
    /// unchanged with an empty report.
    pub fn totalize(&self, cap: usize) -> Result<(Model, Vec<State>), StateSpaceLimit> {
        let mut model = self.clone();
        let mut stuttered = Vec::new();
        for st in self.reachable_states(cap)? {
            if self.successors(&st).is_empty() {
                let guard = self
                    .variables
                    .iter()
                    .map(|decl| {
                        Literal::eq(
                            decl.name.clone(),
                            st.get(&decl.name)
                                .expect("reachable state is total")
                                .to_string(),
                        )
                    })
                    .collect();
                // No updates: every variable keeps its value, a stutter step.
                model.rules.push(TransRule {
                    guard,
                    updates: vec![],
                });
                stuttered.push(st);
            }
        }
        Ok((model, stuttered))
    }
}

/// Odometer over the per-variable allowed initial values.
struct InitialStates<'a> {
    model: &'a Model,
    indices: Vec<usize>,
    done: bool,
}

impl Iterator for InitialStates<'_> {
    type Item = State;

    fn next(&mut self) -> Option<State> {
        if self.done {
            return None;
        }
        if self.model.variables.is_empty() {
            self.done = true;
            return Some(State(BTreeMap::new()));
        }
        let mut state = State(BTreeMap::new());
        for (slot, (decl, allowed)) in self
            .model
            .variables
            .iter()
            .zip(&self.model.init_allowed)
            .enumerate()
        {
            state.set(decl.name.clone(), allowed[self.indices[slot]].clone());
        }
        // Advance the last slot first so enumeration is lexicographic in
        // declaration order.
        for slot in (0..self.indices.len()).rev() {
            self.indices[slot] += 1;
            if self.indices[slot] < self.model.init_allowed[slot].len() {
                return Some(state);
            }
            self.indices[slot] = 0;
        }
        self.done = true;
        Some(state)
    }
}
