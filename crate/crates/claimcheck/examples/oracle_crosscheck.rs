//! Cross-validate the automata pipeline against the lasso semantics oracle
//! on randomized formulas and words.
//!
//! ```bash
//! cargo run --example oracle_crosscheck
//! ```

use claimcheck::oracle::{self, Rng};

fn main() {
    // A few sample cases, printed so the shapes are visible.
    let mut rng = Rng::new(99);
    println!("sample cases:");
    for _ in 0..5 {
        let f = oracle::random_formula(&mut rng, 3);
        let w = oracle::random_lasso(&mut rng, 2, 2);
        let (oracle_says, automaton_says) = oracle::cross_check(&f, &w);
        println!(
            "  {:50} oracle={oracle_says:5} automaton={automaton_says}",
            f.pretty()
        );
        assert_eq!(oracle_says, automaton_says);
    }

    // The real batch: identical seeds reproduce identical case sequences.
    match oracle::run_cases(2000, 7) {
        Ok(n) => println!("\n{n} randomized cases: automata and oracle agree on all"),
        Err(disagreement) => {
            println!("\n{disagreement}");
            std::process::exit(1);
        }
    }
}
