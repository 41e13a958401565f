//! LTL abstract syntax, concrete syntax, normal forms, and a brute-force
//! semantics oracle over ultimately periodic words.

mod eval;
mod parser;

pub use eval::{eval_lasso, EvalError, Lasso};
pub use parser::{parse, parse_spec_file, ParseError, SpecEntry};

use std::fmt;

/// An equality test `variable = value` over enum-typed state variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub var: String,
    pub value: String,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.var, self.value)
    }
}

/// LTL formula over atoms of the form `variable = value`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Eventually(Box<Formula>),
    Globally(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    WeakUntil(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Formula {
    /// Builds `var = value`. Both names must be identifiers
    /// (`[A-Za-z_][A-Za-z0-9_]*`); anything else is a programming error.
    pub fn atom(var: impl Into<String>, value: impl Into<String>) -> Self {
        let (var, value) = (var.into(), value.into());
        assert!(is_ident(&var), "invalid variable name: {var:?}");
        assert!(is_ident(&value), "invalid value name: {value:?}");
        Formula::Atom(Atom { var, value })
    }

    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Self) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Self) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Self) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn next(self) -> Self {
        Formula::Next(Box::new(self))
    }

    pub fn eventually(self) -> Self {
        Formula::Eventually(Box::new(self))
    }

    pub fn globally(self) -> Self {
        Formula::Globally(Box::new(self))
    }

    pub fn until(self, other: Self) -> Self {
        Formula::Until(Box::new(self), Box::new(other))
    }

    pub fn weak_until(self, other: Self) -> Self {
        Formula::WeakUntil(Box::new(self), Box::new(other))
    }

    pub fn release(self, other: Self) -> Self {
        Formula::Release(Box::new(self), Box::new(other))
    }

    /// Wraps the formula in a leading `G`, turning a one-shot property into
    /// an invariant checked at every position.
    pub fn wrap_globally(self) -> Self {
        self.globally()
    }

    /// Fully parenthesized concrete syntax. `parse(f.pretty())` returns a
    /// formula structurally equal to `f`.
    pub fn pretty(&self) -> String {
        self.to_string()
    }

    /// Rewrites to negation normal form: negation appears only directly above
    /// atoms, and `->` and `W` are eliminated (`a W b` becomes `b R (a | b)`).
    /// The result is semantically equivalent on every lasso.
    pub fn to_nnf(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => self.clone(),
            Formula::Not(f) => f.negated_nnf(),
            Formula::And(a, b) => a.to_nnf().and(b.to_nnf()),
            Formula::Or(a, b) => a.to_nnf().or(b.to_nnf()),
            // a -> b  ==  !a | b
            Formula::Implies(a, b) => a.negated_nnf().or(b.to_nnf()),
            Formula::Next(f) => f.to_nnf().next(),
            Formula::Eventually(f) => f.to_nnf().eventually(),
            Formula::Globally(f) => f.to_nnf().globally(),
            Formula::Until(a, b) => a.to_nnf().until(b.to_nnf()),
            // a W b  ==  b R (a | b)
            Formula::WeakUntil(a, b) => {
                let (a, b) = (a.to_nnf(), b.to_nnf());
                b.clone().release(a.or(b))
            }
            Formula::Release(a, b) => a.to_nnf().release(b.to_nnf()),
        }
    }

    /// NNF of the negation, dualizing operators on the way down.
    fn negated_nnf(&self) -> Formula {
        match self {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Atom(_) => self.clone().not(),
            Formula::Not(f) => f.to_nnf(),
            Formula::And(a, b) => a.negated_nnf().or(b.negated_nnf()),
            Formula::Or(a, b) => a.negated_nnf().and(b.negated_nnf()),
            // !(a -> b)  ==  a & !b
            Formula::Implies(a, b) => a.to_nnf().and(b.negated_nnf()),
            Formula::Next(f) => f.negated_nnf().next(),
            Formula::Eventually(f) => f.negated_nnf().globally(),
            Formula::Globally(f) => f.negated_nnf().eventually(),
            // !(a U b)  ==  !a R !b
            Formula::Until(a, b) => a.negated_nnf().release(b.negated_nnf()),
            // !(a W b)  ==  !(b R (a | b))  ==  !b U (!a & !b)
            Formula::WeakUntil(a, b) => {
                let (na, nb) = (a.negated_nnf(), b.negated_nnf());
                nb.clone().until(na.and(nb))
            }
            // !(a R b)  ==  !a U !b
            Formula::Release(a, b) => a.negated_nnf().until(b.negated_nnf()),
        }
    }

    /// True when negation occurs only directly above atoms and neither `->`
    /// nor `W` appears.
    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Not(f) => matches!(**f, Formula::Atom(_)),
            Formula::Implies(..) | Formula::WeakUntil(..) => false,
            Formula::Next(f) | Formula::Eventually(f) | Formula::Globally(f) => f.is_nnf(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b) => a.is_nnf() && b.is_nnf(),
        }
    }

    /// The set of all subformulas, including the formula itself.
    pub fn closure(&self) -> std::collections::BTreeSet<Formula> {
        let mut set = std::collections::BTreeSet::new();
        self.collect_closure(&mut set);
        set
    }

    fn collect_closure(&self, set: &mut std::collections::BTreeSet<Formula>) {
        set.insert(self.clone());
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => {}
            Formula::Not(f) | Formula::Next(f) | Formula::Eventually(f) | Formula::Globally(f) => {
                f.collect_closure(set);
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b)
            | Formula::WeakUntil(a, b)
            | Formula::Release(a, b) => {
                a.collect_closure(set);
                b.collect_closure(set);
            }
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn node_count(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 1,
            Formula::Not(f) | Formula::Next(f) | Formula::Eventually(f) | Formula::Globally(f) => {
                1 + f.node_count()
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b)
            | Formula::WeakUntil(a, b)
            | Formula::Release(a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    /// All atoms occurring in the formula, in first-occurrence order.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::Atom(a) => {
                if !out.contains(&a) {
                    out.push(a);
                }
            }
            Formula::True | Formula::False => {}
            Formula::Not(f) | Formula::Next(f) | Formula::Eventually(f) | Formula::Globally(f) => {
                f.collect_atoms(out);
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b)
            | Formula::WeakUntil(a, b)
            | Formula::Release(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(g) => write!(f, "! ({g})"),
            Formula::Next(g) => write!(f, "X ({g})"),
            Formula::Eventually(g) => write!(f, "F ({g})"),
            Formula::Globally(g) => write!(f, "G ({g})"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Until(a, b) => write!(f, "({a} U {b})"),
            Formula::WeakUntil(a, b) => write!(f, "({a} W {b})"),
            Formula::Release(a, b) => write!(f, "({a} R {b})"),
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
