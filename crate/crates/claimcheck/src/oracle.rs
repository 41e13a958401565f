//! Randomized cross-validation of the automata pipeline against the lasso
//! semantics oracle.
//!
//! Case generation is driven by a self-contained SplitMix64 generator so a
//! seed reproduces the exact same case sequence on every platform and in
//! every build.

use std::fmt;

use crate::automata::{accepts_lasso, degeneralize, translate_gba};
use crate::kripke::{Literal, Model, State, TransRule, Update, VariableDecl, DEFAULT_STATE_CAP};
use crate::ltl::{eval_lasso, Formula, Lasso};

/// SplitMix64: tiny, fast, and stable across versions.
#[derive(Debug, Clone)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..n`. `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }
}

/// The fixed vocabulary used for random cases: two variables, three values.
pub const VOCAB: &[(&str, &[&str])] = &[("p", &["a", "b", "c"]), ("q", &["a", "b", "c"])];

fn random_atom(rng: &mut Rng) -> Formula {
    let (var, values) = rng.pick(VOCAB);
    Formula::atom(*var, *rng.pick(values))
}

/// A random formula over the full syntax, including operators the normal
/// form eliminates.
pub fn random_formula(rng: &mut Rng, depth: usize) -> Formula {
    if depth == 0 {
        return match rng.below(6) {
            0 => Formula::True,
            1 => Formula::False,
            _ => random_atom(rng),
        };
    }
    match rng.below(12) {
        0 => random_formula(rng, depth - 1).not(),
        1 => random_formula(rng, depth - 1).and(random_formula(rng, depth - 1)),
        2 => random_formula(rng, depth - 1).or(random_formula(rng, depth - 1)),
        3 => random_formula(rng, depth - 1).implies(random_formula(rng, depth - 1)),
        4 => random_formula(rng, depth - 1).next(),
        5 => random_formula(rng, depth - 1).eventually(),
        6 => random_formula(rng, depth - 1).globally(),
        7 => random_formula(rng, depth - 1).until(random_formula(rng, depth - 1)),
        8 => random_formula(rng, depth - 1).weak_until(random_formula(rng, depth - 1)),
        9 => random_formula(rng, depth - 1).release(random_formula(rng, depth - 1)),
        _ => random_formula(rng, 0),
    }
}

/// A random formula already in negation normal form.
pub fn random_nnf_formula(rng: &mut Rng, depth: usize) -> Formula {
    if depth == 0 {
        return match rng.below(8) {
            0 => Formula::True,
            1 => Formula::False,
            2..=4 => random_atom(rng),
            _ => random_atom(rng).not(),
        };
    }
    match rng.below(10) {
        0 => random_nnf_formula(rng, depth - 1).and(random_nnf_formula(rng, depth - 1)),
        1 => random_nnf_formula(rng, depth - 1).or(random_nnf_formula(rng, depth - 1)),
        2 => random_nnf_formula(rng, depth - 1).next(),
        3 => random_nnf_formula(rng, depth - 1).eventually(),
        4 => random_nnf_formula(rng, depth - 1).globally(),
        5 => random_nnf_formula(rng, depth - 1).until(random_nnf_formula(rng, depth - 1)),
        6 => random_nnf_formula(rng, depth - 1).release(random_nnf_formula(rng, depth - 1)),
        _ => random_nnf_formula(rng, 0),
    }
}

fn random_state(rng: &mut Rng) -> State {
    let mut s = State::from_pairs(&[]);
    for (var, values) in VOCAB {
        s.set(*var, *rng.pick(values));
    }
    s
}

/// A random lasso over the fixed vocabulary, `|prefix| <= max_prefix`,
/// `1 <= |cycle| <= max_cycle`.
pub fn random_lasso(rng: &mut Rng, max_prefix: usize, max_cycle: usize) -> Lasso {
    let prefix_len = rng.below(max_prefix + 1);
    let cycle_len = 1 + rng.below(max_cycle);
    Lasso::new(
        (0..prefix_len).map(|_| random_state(rng)).collect(),
        (0..cycle_len).map(|_| random_state(rng)).collect(),
    )
}

/// A small random model over the fixed vocabulary: random initial
/// constraint, a handful of random guarded rules, deadlocks closed by
/// totalization.
pub fn random_model(rng: &mut Rng) -> Model {
    let variables: Vec<VariableDecl> = VOCAB
        .iter()
        .map(|(name, values)| VariableDecl {
            name: name.to_string(),
            domain: values.iter().map(|v| v.to_string()).collect(),
        })
        .collect();
    // Each variable is either pinned to one initial value or left free.
    let init_allowed: Vec<Vec<String>> = variables
        .iter()
        .map(|decl| {
            if rng.below(2) == 0 {
                vec![decl.domain[rng.below(decl.domain.len())].clone()]
            } else {
                decl.domain.clone()
            }
        })
        .collect();
    let mut rules = Vec::new();
    for _ in 0..1 + rng.below(4) {
        let mut guard = Vec::new();
        for _ in 0..rng.below(3) {
            let decl = &variables[rng.below(variables.len())];
            guard.push(Literal {
                var: decl.name.clone(),
                value: decl.domain[rng.below(decl.domain.len())].clone(),
                positive: rng.below(3) > 0,
            });
        }
        let mut updates = Vec::new();
        let first = rng.below(variables.len());
        for (i, decl) in variables.iter().enumerate() {
            if i != first && rng.below(2) == 0 {
                continue;
            }
            let mut choices: Vec<String> = decl
                .domain
                .iter()
                .filter(|_| rng.below(2) == 0)
                .cloned()
                .collect();
            if choices.is_empty() {
                choices.push(decl.domain[rng.below(decl.domain.len())].clone());
            }
            updates.push(Update {
                var: decl.name.clone(),
                choices,
            });
        }
        rules.push(TransRule { guard, updates });
    }
    let model = Model::new("random".to_string(), variables, init_allowed, rules);
    let (total, _) = model
        .totalize(DEFAULT_STATE_CAP)
        .expect("vocabulary models are tiny");
    total
}

/// A random lasso that follows the model's transitions from an initial
/// state. The walk runs until it revisits a state, which closes the cycle;
/// totality guarantees this happens.
pub fn random_valid_lasso(rng: &mut Rng, m: &Model) -> Lasso {
    let inits = m.initial_states();
    let mut path = vec![inits[rng.below(inits.len())].clone()];
    loop {
        let succs = m.successors(path.last().expect("nonempty"));
        let next = succs[rng.below(succs.len())].clone();
        if let Some(at) = path.iter().position(|s| *s == next) {
            let cycle = path.split_off(at);
            return Lasso::new(path, cycle);
        }
        path.push(next);
    }
}

/// A case where the automata pipeline and the semantics oracle disagree.
/// Finding one means a defect in the translation, the degeneralization, the
/// acceptance check, or the oracle itself.
#[derive(Debug, Clone, PartialEq)]
pub struct Disagreement {
    pub seed: u64,
    pub index: u64,
    pub formula: Formula,
    pub lasso: Lasso,
    pub oracle: bool,
    pub automaton: bool,
}

impl fmt::Display for Disagreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "disagreement at seed {} case {}:", self.seed, self.index)?;
        writeln!(f, "  formula:   {}", self.formula.pretty())?;
        writeln!(
            f,
            "  prefix:    {:?}",
            self.lasso
                .prefix
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
        )?;
        writeln!(
            f,
            "  cycle:     {:?}",
            self.lasso
                .cycle
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
        )?;
        writeln!(f, "  oracle:    {}", self.oracle)?;
        write!(f, "  automaton: {}", self.automaton)
    }
}

/// Whether the automaton for `f` and the semantics of `f` agree on `w`.
/// Returns the two answers `(oracle, automaton)`.
pub fn cross_check(f: &Formula, w: &Lasso) -> (bool, bool) {
    let oracle = eval_lasso(f, w).expect("vocabulary states bind every variable");
    let automaton = degeneralize(&translate_gba(&f.to_nnf()).expect("normal form"));
    (oracle, accepts_lasso(&automaton, w))
}

/// Runs `cases` randomized cross-checks. Returns the number of cases run, or
/// the first disagreement found, shrunk to a smaller witness when possible.
pub fn run_cases(cases: u64, seed: u64) -> Result<u64, Disagreement> {
    let mut rng = Rng::new(seed);
    for index in 0..cases {
        let formula = random_formula(&mut rng, 4);
        let lasso = random_lasso(&mut rng, 3, 3);
        let (oracle, automaton) = cross_check(&formula, &lasso);
        if oracle != automaton {
            let (formula, lasso) = shrink(formula, lasso);
            let (oracle, automaton) = cross_check(&formula, &lasso);
            return Err(Disagreement {
                seed,
                index,
                formula,
                lasso,
                oracle,
                automaton,
            });
        }
    }
    Ok(cases)
}

/// Greedily shrinks a disagreeing case: try replacing the formula by a direct
/// subformula, dropping prefix states, or shortening the cycle, keeping every
/// step that still disagrees.
fn shrink(mut formula: Formula, mut lasso: Lasso) -> (Formula, Lasso) {
    let disagrees = |f: &Formula, w: &Lasso| {
        let (oracle, automaton) = cross_check(f, w);
        oracle != automaton
    };
    loop {
        let mut reduced = false;
        for sub in direct_subformulas(&formula) {
            if disagrees(&sub, &lasso) {
                formula = sub;
                reduced = true;
                break;
            }
        }
        if !lasso.prefix.is_empty() {
            let shorter = Lasso::new(lasso.prefix[1..].to_vec(), lasso.cycle.clone());
            if disagrees(&formula, &shorter) {
                lasso = shorter;
                reduced = true;
            }
        }
        if lasso.cycle.len() > 1 {
            for drop_at in 0..lasso.cycle.len() {
                let mut cycle = lasso.cycle.clone();
                cycle.remove(drop_at);
                let shorter = Lasso::new(lasso.prefix.clone(), cycle);
                if disagrees(&formula, &shorter) {
                    lasso = shorter;
                    reduced = true;
                    break;
                }
            }
        }
        if !reduced {
            return (formula, lasso);
        }
    }
}

fn direct_subformulas(f: &Formula) -> Vec<Formula> {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => vec![],
        Formula::Not(g) | Formula::Next(g) | Formula::Eventually(g) | Formula::Globally(g) => {
            vec![(**g).clone()]
        }
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Until(a, b)
        | Formula::WeakUntil(a, b)
        | Formula::Release(a, b) => vec![(**a).clone(), (**b).clone()],
    }
}
