//! Run the built-in claims-workflow suite and inspect its counterexamples.
//!
//! ```bash
//! cargo run --example claimchain_suite
//! ```

use claimcheck::checker::{CheckMode, VerdictLabel};
use claimcheck::claimchain::{builtin_model, run_suite};
use claimcheck::kripke::DEFAULT_STATE_CAP;

fn main() {
    let model = builtin_model();
    let reach = model.reachable_states(DEFAULT_STATE_CAP).unwrap();
    println!(
        "built-in model `{}`: {} reachable states",
        model.name,
        reach.len()
    );

    let report = run_suite(CheckMode::AsWritten);
    println!("\n{:6} {:7} {:>9}  formula", "spec", "verdict", "time");
    for entry in &report.specs {
        println!(
            "{:6} {:^7} {:>8.3}s  {}{}",
            entry.id,
            entry.verdict.symbol(),
            entry.stats.elapsed_seconds,
            entry.formula,
            if entry.vacuous { "   (vacuous)" } else { "" }
        );
    }
    println!("\nsuite pass: {}", report.pass);

    for entry in &report.specs {
        if entry.verdict == VerdictLabel::Fails {
            let cex = entry.counterexample.as_ref().unwrap();
            println!("\n{} counterexample:", entry.id);
            for s in &cex.prefix {
                println!("  prefix {s}");
            }
            for s in &cex.cycle {
                println!("  cycle  {s}");
            }
        }
    }

    // Under the wrapped interpretation the conditional-drop spec fails too:
    // the antecedent becomes reachable, and the consequent does not follow.
    let wrapped = run_suite(CheckMode::GloballyWrapped);
    println!(
        "\nglobally-wrapped verdicts: {}",
        wrapped
            .specs
            .iter()
            .map(|e| format!("{} {}", e.id, e.verdict.symbol()))
            .collect::<Vec<_>>()
            .join(", ")
    );
}
