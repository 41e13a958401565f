//! Built-in model of a blockchain insurance claims workflow, five temporal
//! specifications over it, and a suite runner with a pinned expectation.
//!
//! A claim asset moves through the stages issued, signed, endorsed and
//! evaluated. Endorsement can fail (the claim asset is dropped), and an
//! evaluated claim is either discarded or committed to the world state. The
//! claim status is decided nondeterministically at the evaluation step and
//! persists afterwards; terminal stages loop forever.

use serde::Serialize;

use crate::checker::{check, CheckMode, CheckStats, CounterexampleReport, Verdict, VerdictLabel};
use crate::kripke::{parse_model, Model, DEFAULT_STATE_CAP};
use crate::ltl::{parse_spec_file, Formula, SpecEntry};

/// Workflow stage of a claim asset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClaimStage {
    Issued,
    Signed,
    Endorsed,
    Evaluated,
    ClaimAssetDropped,
    ClaimUpdatedDiscarded,
    EvaluatedWorldStateUpdated,
}

impl ClaimStage {
    pub const ALL: [ClaimStage; 7] = [
        ClaimStage::Issued,
        ClaimStage::Signed,
        ClaimStage::Endorsed,
        ClaimStage::Evaluated,
        ClaimStage::ClaimAssetDropped,
        ClaimStage::ClaimUpdatedDiscarded,
        ClaimStage::EvaluatedWorldStateUpdated,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ClaimStage::Issued => "issued",
            ClaimStage::Signed => "signed",
            ClaimStage::Endorsed => "endorsed",
            ClaimStage::Evaluated => "evaluated",
            ClaimStage::ClaimAssetDropped => "claim_asset_dropped",
            ClaimStage::ClaimUpdatedDiscarded => "claim_updated_discarded",
            ClaimStage::EvaluatedWorldStateUpdated => "evaluated_world_state_updated",
        }
    }
}

/// Decision status of a claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClaimStatus {
    Initial,
    Approved,
    Denied,
    Flagged,
}

impl ClaimStatus {
    pub const ALL: [ClaimStatus; 4] = [
        ClaimStatus::Initial,
        ClaimStatus::Approved,
        ClaimStatus::Denied,
        ClaimStatus::Flagged,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ClaimStatus::Initial => "initial",
            ClaimStatus::Approved => "approved",
            ClaimStatus::Denied => "denied",
            ClaimStatus::Flagged => "flagged",
        }
    }
}

/// The built-in model source, byte-stable; `emit-builtin` writes exactly
/// these bytes.
pub const BUILTIN_MODEL_TEXT: &str = "\
# ClaimChain workflow model.
#
# A claim is issued, signed, and submitted for endorsement. Endorsement
# either succeeds or the claim asset is dropped. An endorsed claim is
# evaluated, which decides the claim status; the evaluated claim is then
# either discarded or committed to the world state. Terminal stages persist.

var stage : {issued, signed, endorsed, evaluated, claim_asset_dropped, claim_updated_discarded, evaluated_world_state_updated};
var claim_status : {initial, approved, denied, flagged};

init stage = issued & claim_status = initial;

trans stage = issued -> next(stage) = signed;
trans stage = signed -> next(stage) = endorsed;
trans stage = signed -> next(stage) = claim_asset_dropped;
trans stage = endorsed -> next(stage) = evaluated, next(claim_status) in {approved, denied, flagged};
trans stage = evaluated -> next(stage) = evaluated_world_state_updated;
trans stage = evaluated -> next(stage) = claim_updated_discarded;
trans stage = claim_asset_dropped -> next(stage) = claim_asset_dropped;
trans stage = claim_updated_discarded -> next(stage) = claim_updated_discarded;
trans stage = evaluated_world_state_updated -> next(stage) = evaluated_world_state_updated;
";

/// The built-in specifications, byte-stable; `emit-builtin` writes exactly
/// these bytes.
pub const BUILTIN_SPEC_TEXT: &str = "\
# Specifications for the ClaimChain workflow model.

# phi1
stage = endorsed -> F (claim_status = approved) | F (claim_status = denied) | F (claim_status = flagged)

# phi2
stage = issued -> F (stage = claim_asset_dropped) | F (stage = claim_updated_discarded) | F (stage = evaluated_world_state_updated)

# phi3
stage = issued -> F (stage = endorsed)

# phi4
stage = signed & stage != endorsed -> G (stage = claim_asset_dropped)

# phi5
stage = issued -> F (stage = evaluated)
";

/// Verdicts the suite is expected to reproduce, in spec order.
pub const EXPECTED_VERDICTS: [VerdictLabel; 5] = [
    VerdictLabel::Holds,
    VerdictLabel::Holds,
    VerdictLabel::Fails,
    VerdictLabel::Holds,
    VerdictLabel::Fails,
];

/// The built-in workflow model, already total: every terminal stage
/// self-loops in the source text.
pub fn builtin_model() -> Model {
    let model = parse_model(BUILTIN_MODEL_TEXT)
        .expect("built-in model text parses")
        .with_name("claimchain");
    let (total, stuttered) = model
        .totalize(DEFAULT_STATE_CAP)
        .expect("built-in model is small");
    debug_assert!(stuttered.is_empty(), "built-in model is already total");
    total
}

/// The five built-in specifications, in order.
pub fn builtin_specs() -> Vec<Formula> {
    builtin_spec_entries()
        .into_iter()
        .map(|e| e.formula)
        .collect()
}

/// The built-in specifications with their `phiN` names and source text.
pub fn builtin_spec_entries() -> Vec<SpecEntry> {
    let entries = parse_spec_file(BUILTIN_SPEC_TEXT).expect("built-in spec text parses");
    debug_assert_eq!(entries.len(), 5);
    entries
}

/// One row of the suite report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteEntry {
    pub id: String,
    pub formula: String,
    pub verdict: VerdictLabel,
    pub vacuous: bool,
    pub counterexample: Option<CounterexampleReport>,
    pub stats: CheckStats,
}

/// Result of checking the five built-in specifications against the built-in
/// model, compared against the pinned expectation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub model: String,
    pub mode: CheckMode,
    pub specs: Vec<SuiteEntry>,
    pub expected: Vec<VerdictLabel>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn observed(&self) -> Vec<VerdictLabel> {
        self.specs.iter().map(|e| e.verdict).collect()
    }
}

/// Checks all built-in specifications against the built-in model. Under
/// [`CheckMode::AsWritten`] the verdict vector must come out as the pinned
/// expectation; `pass` records whether it did.
pub fn run_suite(mode: CheckMode) -> SuiteReport {
    let model = builtin_model();
    let mut specs = Vec::new();
    for (i, entry) in builtin_spec_entries().into_iter().enumerate() {
        let id = entry.name.unwrap_or_else(|| format!("phi{}", i + 1));
        let verdict: Verdict = check(&model, &entry.formula, mode)
            .expect("built-in specs only mention declared variables");
        if let Some(w) = verdict.counterexample() {
            debug_assert_eq!(
                crate::checker::verify_counterexample(&model, &entry.formula, mode, w),
                Ok(())
            );
        }
        specs.push(SuiteEntry {
            id,
            formula: entry.formula.pretty(),
            verdict: match &verdict.outcome {
                crate::checker::Outcome::Holds => VerdictLabel::Holds,
                crate::checker::Outcome::Fails(_) => VerdictLabel::Fails,
            },
            vacuous: verdict.vacuous,
            counterexample: verdict.counterexample().map(|w| CounterexampleReport {
                prefix: w.prefix.clone(),
                cycle: w.cycle.clone(),
            }),
            stats: verdict.stats,
        });
    }
    let expected: Vec<VerdictLabel> = EXPECTED_VERDICTS.to_vec();
    let pass = specs.iter().map(|e| e.verdict).collect::<Vec<_>>() == expected;
    SuiteReport {
        model: model.name,
        mode,
        specs,
        expected,
        pass,
    }
}
