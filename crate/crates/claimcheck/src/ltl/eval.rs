//! Brute-force LTL semantics over ultimately periodic words.
//!
//! This is the reference oracle: it evaluates a formula on a lasso by
//! bottom-up fixpoint iteration, independent of the automata pipeline, so the
//! two can be cross-checked against each other.

use thiserror::Error;

use crate::kripke::State;

use super::Formula;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable `{var}` is not assigned in state {index} of the lasso")]
    UnboundVariable { var: String, index: usize },
}

/// An ultimately periodic trace: a finite prefix followed by a nonempty cycle
/// repeated forever. This is the counterexample format.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lasso {
    pub prefix: Vec<State>,
    pub cycle: Vec<State>,
}

impl Lasso {
    /// The cycle must be nonempty; an empty cycle denotes no infinite word.
    pub fn new(prefix: Vec<State>, cycle: Vec<State>) -> Self {
        assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
        Lasso { prefix, cycle }
    }

    /// Number of distinct positions, `|prefix| + |cycle|`.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// The state at unfolded position `i` of the infinite word.
    pub fn state_at(&self, i: usize) -> &State {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    fn states(&self) -> Vec<&State> {
        self.prefix.iter().chain(self.cycle.iter()).collect()
    }
}

/// Decides whether the infinite word `prefix . cycle^ω` satisfies `f` at
/// position 0.
///
/// Subformulas are evaluated bottom-up over the `|prefix| + |cycle|`
/// positions. Temporal operators are solved on the cycle first by fixpoint
/// iteration (least fixpoints start from false, greatest from true; the cycle
/// stabilizes within `|cycle| + 1` backward passes), then the prefix is
/// resolved in a single backward pass.
pub fn eval_lasso(f: &Formula, w: &Lasso) -> Result<bool, EvalError> {
    let states = w.states();
    let vals = eval_positions(f, &states, w.prefix.len())?;
    Ok(vals[0])
}

fn eval_positions(f: &Formula, states: &[&State], loopback: usize) -> Result<Vec<bool>, EvalError> {
    let n = states.len();
    let succ = |i: usize| if i + 1 < n { i + 1 } else { loopback };
    let vals = match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(atom) => {
            let mut v = Vec::with_capacity(n);
            for (i, s) in states.iter().enumerate() {
                match s.get(&atom.var) {
                    Some(val) => v.push(val == atom.value),
                    None => {
                        return Err(EvalError::UnboundVariable {
                            var: atom.var.clone(),
                            index: i,
                        })
                    }
                }
            }
            v
        }
        Formula::Not(g) => {
            let gv = eval_positions(g, states, loopback)?;
            gv.into_iter().map(|b| !b).collect()
        }
        Formula::And(a, b) => {
            let (av, bv) = (
                eval_positions(a, states, loopback)?,
                eval_positions(b, states, loopback)?,
            );
            av.into_iter().zip(bv).map(|(x, y)| x && y).collect()
        }
        Formula::Or(a, b) => {
            let (av, bv) = (
                eval_positions(a, states, loopback)?,
                eval_positions(b, states, loopback)?,
            );
            av.into_iter().zip(bv).map(|(x, y)| x || y).collect()
        }
        Formula::Implies(a, b) => {
            let (av, bv) = (
                eval_positions(a, states, loopback)?,
                eval_positions(b, states, loopback)?,
            );
            av.into_iter().zip(bv).map(|(x, y)| !x || y).collect()
        }
        Formula::Next(g) => {
            let gv = eval_positions(g, states, loopback)?;
            (0..n).map(|i| gv[succ(i)]).collect()
        }
        Formula::Eventually(g) => {
            let gv = eval_positions(g, states, loopback)?;
            fixpoint(n, loopback, false, |i, v| gv[i] || v[succ(i)])
        }
        Formula::Globally(g) => {
            let gv = eval_positions(g, states, loopback)?;
            fixpoint(n, loopback, true, |i, v| gv[i] && v[succ(i)])
        }
        Formula::Until(a, b) => {
            let (av, bv) = (
                eval_positions(a, states, loopback)?,
                eval_positions(b, states, loopback)?,
            );
            fixpoint(n, loopback, false, |i, v| bv[i] || (av[i] && v[succ(i)]))
        }
        Formula::WeakUntil(a, b) => {
            let (av, bv) = (
                eval_positions(a, states, loopback)?,
                eval_positions(b, states, loopback)?,
            );
            fixpoint(n, loopback, true, |i, v| bv[i] || (av[i] && v[succ(i)]))
        }
        Formula::Release(a, b) => {
            let (av, bv) = (
                eval_positions(a, states, loopback)?,
                eval_positions(b, states, loopback)?,
            );
            fixpoint(n, loopback, true, |i, v| bv[i] && (av[i] || v[succ(i)]))
        }
    };
    Ok(vals)
}

/// Iterates `step` backward over the cycle positions until stable, then
/// resolves the prefix in one backward pass. Monotone boolean updates from a
/// constant start value stabilize within `cycle_len + 1` passes.
fn fixpoint(
    n: usize,
    loopback: usize,
    init: bool,
    step: impl Fn(usize, &[bool]) -> bool,
) -> Vec<bool> {
    let mut v = vec![init; n];
    let cycle_len = n - loopback;
    let mut passes = 0;
    loop {
        let mut changed = false;
        for i in (loopback..n).rev() {
            let next = step(i, &v);
            if next != v[i] {
                v[i] = next;
                changed = true;
            }
        }
        passes += 1;
        if !changed {
            break;
        }
        debug_assert!(passes <= cycle_len + 1, "cycle fixpoint did not stabilize");
    }
    for i in (0..loopback).rev() {
        v[i] = step(i, &v);
    }
    v
}
