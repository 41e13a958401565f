//! Parse formulas from the spec language, print them back, and rewrite them
//! to negation normal form.
//!
//! ```bash
//! cargo run --example parse_formulas
//! ```

use claimcheck::ltl::{parse, parse_spec_file};

fn main() {
    let inputs = [
        "stage = issued -> F (stage = endorsed)",
        "p = a U q = b U r = c",
        "! (request = sent W reply = received)",
        "G (lock = held -> X (lock = free))",
    ];
    for text in inputs {
        let f = parse(text).unwrap();
        println!("input:  {text}");
        println!("pretty: {}", f.pretty());
        println!("nnf:    {}", f.to_nnf().pretty());
        println!("closure size: {}\n", f.to_nnf().closure().len());
    }

    // Spec files hold one formula per line; `# name` comments label them.
    let file = "\
# phi_live
start = yes -> F (done = yes)
# phi_safe
G (done = yes -> X (done = yes))
";
    for (i, entry) in parse_spec_file(file).unwrap().iter().enumerate() {
        let name = entry
            .name
            .clone()
            .unwrap_or_else(|| format!("phi{}", i + 1));
        println!("{name}: {}", entry.formula.pretty());
    }

    // Errors carry a location and what was expected there.
    let err = parse("stage = issued -> F (stage = )").unwrap_err();
    println!("\nparse error demo: {err}");
}
