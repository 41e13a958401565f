//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use claimcheck::checker::{check, verify_counterexample, CheckMode, Outcome, VerdictLabel};
use claimcheck::claimchain::{builtin_model, builtin_specs, run_suite, EXPECTED_VERDICTS};
use claimcheck::ltl::Lasso;
use claimcheck::oracle;

fn criterion(name: &str, body: impl FnOnce() + std::panic::UnwindSafe) {
    match std::panic::catch_unwind(body) {
        Ok(()) => println!("acceptance: {name}: PASS"),
        Err(cause) => {
            println!("acceptance: {name}: FAIL");
            std::panic::resume_unwind(cause);
        }
    }
}

#[test]
fn verdict_table_reproduction() {
    criterion("verdict-table-reproduction", || {
        let report = run_suite(CheckMode::AsWritten);
        assert_eq!(
            report.observed(),
            EXPECTED_VERDICTS.to_vec(),
            "verdict vector must match exactly"
        );
        assert!(report.pass);
        for entry in &report.specs {
            assert!(
                entry.stats.elapsed_seconds <= 1.0,
                "{} took {:.3}s, over the 1s budget",
                entry.id,
                entry.stats.elapsed_seconds
            );
        }
    });
}

#[test]
fn counterexample_validity() {
    criterion("counterexample-validity", || {
        let model = builtin_model();
        let specs = builtin_specs();
        let report = run_suite(CheckMode::AsWritten);
        for (index, banned_stage) in [(2, "endorsed"), (4, "evaluated")] {
            let entry = &report.specs[index];
            assert_eq!(entry.verdict, VerdictLabel::Fails);
            let cex = entry
                .counterexample
                .as_ref()
                .expect("failing spec carries a lasso");
            let lasso = Lasso::new(cex.prefix.clone(), cex.cycle.clone());
            // (a) starts initial, (b) follows transitions including the
            // wrap-around, (c) violates the spec per the semantics oracle.
            assert_eq!(
                verify_counterexample(&model, &specs[index], CheckMode::AsWritten, &lasso),
                Ok(())
            );
            for state in lasso.prefix.iter().chain(lasso.cycle.iter()) {
                assert_ne!(
                    state.get("stage"),
                    Some(banned_stage),
                    "witness for {} must avoid stage {banned_stage}",
                    entry.id
                );
            }
        }
    });
}

#[test]
fn oracle_equivalence() {
    criterion("oracle-equivalence", || match oracle::run_cases(1000, 7) {
        Ok(n) => assert_eq!(n, 1000),
        Err(d) => panic!("automata pipeline disagrees with the oracle:\n{d}"),
    });
}

#[test]
fn checker_cross_consistency() {
    criterion("checker-cross-consistency", || {
        let mut rng = oracle::Rng::new(42);
        for case in 0..500 {
            let m = oracle::random_model(&mut rng);
            let f = oracle::random_formula(&mut rng, 3);
            let v_pos = check(&m, &f, CheckMode::AsWritten).unwrap();
            let v_neg = check(&m, &f.clone().not(), CheckMode::AsWritten).unwrap();
            assert!(
                !(v_pos.holds() && v_neg.holds()),
                "case {case}: both {f} and its negation hold"
            );
            for (formula, verdict) in [(&f, &v_pos), (&f.clone().not(), &v_neg)] {
                if let Outcome::Fails(w) = &verdict.outcome {
                    assert_eq!(
                        verify_counterexample(&m, formula, CheckMode::AsWritten, w),
                        Ok(()),
                        "case {case}: invalid witness for {formula}"
                    );
                }
            }
        }
    });
}

#[test]
fn vacuity_surfacing() {
    criterion("vacuity-surfacing", || {
        let as_written = run_suite(CheckMode::AsWritten);
        assert!(
            as_written.specs[0].vacuous,
            "first spec is vacuous as written"
        );
        assert!(
            as_written.specs[3].vacuous,
            "fourth spec is vacuous as written"
        );
        assert_eq!(as_written.specs[0].verdict, VerdictLabel::Holds);
        assert_eq!(as_written.specs[3].verdict, VerdictLabel::Holds);

        let wrapped = run_suite(CheckMode::GloballyWrapped);
        assert_eq!(
            wrapped.specs[3].verdict,
            VerdictLabel::Fails,
            "fourth spec flips under the wrapped mode"
        );
        let cex = wrapped.specs[3]
            .counterexample
            .as_ref()
            .expect("witness attached");
        let lasso = Lasso::new(cex.prefix.clone(), cex.cycle.clone());
        assert_eq!(
            verify_counterexample(
                &builtin_model(),
                &builtin_specs()[3],
                CheckMode::GloballyWrapped,
                &lasso
            ),
            Ok(())
        );
    });
}

#[test]
fn deterministic_suite_output() {
    criterion("deterministic-suite-output", || {
        let bin = env!("CARGO_BIN_EXE_claimcheck");
        let run = || {
            let out = std::process::Command::new(bin)
                .args(["suite", "--output", "json"])
                .output()
                .expect("suite runs");
            assert!(out.status.success());
            String::from_utf8(out.stdout).expect("utf-8 output")
        };
        let first = run();
        let second = run();
        // Byte-identical apart from the elapsed-time fields.
        let mask = |s: &str| {
            let mut out = String::new();
            for line in s.lines() {
                if let Some(at) = line.find("\"elapsed_seconds\":") {
                    out.push_str(&line[..at + "\"elapsed_seconds\":".len()]);
                    out.push_str(" <elapsed>");
                    if line.trim_end().ends_with(',') {
                        out.push(',');
                    }
                } else {
                    out.push_str(line);
                }
                out.push('\n');
            }
            out
        };
        assert_eq!(mask(&first), mask(&second));
    });
}
