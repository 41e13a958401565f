//! Describe a transition system in the model language, explore it, and
//! check formulas against it.
//!
//! ```bash
//! cargo run --example custom_model
//! ```

use claimcheck::checker::{check, verify_counterexample, CheckMode, Outcome};
use claimcheck::kripke::{parse_model, DEFAULT_STATE_CAP};
use claimcheck::ltl::parse;

const MODEL: &str = "\
# A two-phase commit sketch: a coordinator collects votes, then decides.
var phase : {collecting, deciding, committed, aborted};
var vote  : {none, yes, no};

init phase = collecting & vote = none;

trans phase = collecting -> next(vote) in {yes, no};
trans phase = collecting & vote != none -> next(phase) = deciding;
trans phase = deciding & vote = yes -> next(phase) = committed;
trans phase = deciding & vote = no  -> next(phase) = aborted;
# Terminal phases persist.
trans phase = committed -> next(phase) = committed;
trans phase = aborted   -> next(phase) = aborted;
";

fn main() {
    let model = parse_model(MODEL).unwrap().with_name("two-phase");
    let (model, stuttered) = model.totalize(DEFAULT_STATE_CAP).unwrap();
    println!(
        "model `{}` totalized; {} deadlock state(s) closed",
        model.name,
        stuttered.len()
    );

    let reach = model.reachable_states(DEFAULT_STATE_CAP).unwrap();
    println!("{} reachable states:", reach.len());
    for s in &reach {
        println!("  {s}");
    }

    for text in [
        "G (phase = aborted -> G (phase = aborted))",
        "phase = collecting -> F (phase = committed)",
    ] {
        let f = parse(text).unwrap();
        let verdict = check(&model, &f, CheckMode::AsWritten).unwrap();
        match &verdict.outcome {
            Outcome::Holds => println!("\n{text}\n  HOLDS"),
            Outcome::Fails(w) => {
                println!("\n{text}\n  FAILS; counterexample:");
                for s in &w.prefix {
                    println!("    prefix {s}");
                }
                for s in &w.cycle {
                    println!("    cycle  {s}");
                }
                // Counterexamples re-validate against the semantics oracle.
                assert_eq!(
                    verify_counterexample(&model, &f, CheckMode::AsWritten, w),
                    Ok(())
                );
            }
        }
    }
}
