//! Evaluate formulas on ultimately periodic words with the semantics oracle.
//!
//! ```bash
//! cargo run --example evaluate_lasso
//! ```

use claimcheck::kripke::State;
use claimcheck::ltl::{eval_lasso, parse, Lasso};

fn state(stage: &str) -> State {
    State::from_pairs(&[("stage", stage), ("claim_status", "initial")])
}

fn main() {
    // A claim that is issued and signed, then dropped forever.
    let stalled = Lasso::new(
        vec![state("issued"), state("signed")],
        vec![state("claim_asset_dropped")],
    );

    let formulas = [
        "stage = issued -> F (stage = endorsed)",
        "stage = issued -> F (stage = claim_asset_dropped)",
        "G (claim_status = initial)",
        "F (G (stage = claim_asset_dropped))",
        "stage = issued & X (stage = signed)",
    ];
    println!("word: issued, signed, (claim_asset_dropped)^ω\n");
    for text in formulas {
        let f = parse(text).unwrap();
        println!("{:60} {}", text, eval_lasso(&f, &stalled).unwrap());
    }

    // The oracle resolves temporal operators on the cycle by fixpoint
    // iteration, so recurrence over a multi-state cycle works too.
    let alternating = Lasso::new(vec![], vec![state("evaluated"), state("endorsed")]);
    let recurrence = parse("G (F (stage = endorsed))").unwrap();
    println!(
        "\nword: (evaluated, endorsed)^ω\n{:60} {}",
        recurrence.pretty(),
        eval_lasso(&recurrence, &alternating).unwrap()
    );
}
