//! Translate a formula to a generalized Büchi automaton, degeneralize it,
//! and print both the plain-text export and the Graphviz rendering.
//!
//! ```bash
//! cargo run --example formula_to_automaton
//! ```

use claimcheck::automata::{accepts_lasso, degeneralize, translate_gba};
use claimcheck::kripke::State;
use claimcheck::ltl::{parse, Lasso};

fn main() {
    let f = parse("p = a U q = b").unwrap().to_nnf();
    let gba = translate_gba(&f).unwrap();
    println!(
        "formula {} -> {} tableau nodes, {} acceptance set(s)",
        f.pretty(),
        gba.node_count(),
        gba.acceptance.len()
    );

    let ba = degeneralize(&gba);
    println!("degeneralized: {} nodes\n", ba.node_count());
    println!("{}", ba.export_text());

    // The automaton decides lassos; here the goal q=b arrives at step 1.
    let good = Lasso::new(
        vec![State::from_pairs(&[("p", "a"), ("q", "a")])],
        vec![State::from_pairs(&[("p", "c"), ("q", "b")])],
    );
    let bad = Lasso::new(vec![], vec![State::from_pairs(&[("p", "a"), ("q", "a")])]);
    println!("accepts good lasso: {}", accepts_lasso(&ba, &good));
    println!("accepts bad lasso:  {}", accepts_lasso(&ba, &bad));

    println!("\nGraphviz:\n{}", ba.export_dot("p_until_q"));
}
