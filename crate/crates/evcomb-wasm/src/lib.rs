//! Browser bindings for the evidence-combination demo page.
//!
//! Three operations are exposed, all returning the JSON report format used
//! by the CLI so the page and the command line render the same data:
//! a parameterized Zadeh scenario, free-form document combination, and the
//! seeded equivalence checks.

use wasm_bindgen::prelude::*;

use evcomb::checks::{run_check, CheckKind};
use evcomb::doc::parse_input_document;
use evcomb::render::{render_report, Format};
use evcomb::rules::{DeltaPolicy, LambdaPolicy, RuleSpec};
use evcomb::scenarios::{comparison_report, zadeh_scenario, Scenario};

fn err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn parse_rules(spec: &str) -> Result<Vec<RuleSpec>, JsError> {
    if spec.is_empty() || spec == "all" {
        return Ok(RuleSpec::all());
    }
    spec.split(',')
        .map(|name| {
            RuleSpec::by_name(name.trim(), DeltaPolicy::Overlap, LambdaPolicy::Cardinality)
                .ok_or_else(|| JsError::new(&format!("unknown rule `{name}`")))
        })
        .collect()
}

/// Zadeh's two-expert scenario at the given epsilon, evaluated under every
/// rule. Returns the comparison report as JSON.
#[wasm_bindgen]
pub fn zadeh_report(epsilon: f64) -> Result<String, JsError> {
    let scenario = zadeh_scenario(epsilon).map_err(err)?;
    let report = comparison_report(&scenario, &RuleSpec::all()).map_err(err)?;
    Ok(render_report(&report, Format::Json))
}

/// Combines the sources of a JSON evidence document under the named rules
/// (`"all"` or a comma-separated list). Returns the comparison report as
/// JSON.
#[wasm_bindgen]
pub fn combine_document(document: &str, rules: &str) -> Result<String, JsError> {
    let (frame, sources) = parse_input_document(document).map_err(err)?;
    let rules = parse_rules(rules)?;
    let scenario = Scenario::new("document", frame, sources, "").map_err(err)?;
    let report = comparison_report(&scenario, &rules).map_err(err)?;
    Ok(render_report(&report, Format::Json))
}

/// Runs one named equivalence/conservation check over seeded random cases.
/// Returns `{check, trials, max_abs_diff, tolerance, verdict}` as JSON.
#[wasm_bindgen]
pub fn bench_check(check: &str, trials: u32, seed: u64) -> Result<String, JsError> {
    let kind =
        CheckKind::parse(check).ok_or_else(|| JsError::new(&format!("unknown check `{check}`")))?;
    let run = run_check(kind, trials as usize, seed).map_err(err)?;
    Ok(format!(
        "{{\"check\": \"{}\", \"trials\": {}, \"max_abs_diff\": {:e}, \"tolerance\": {:e}, \"verdict\": \"{}\"}}",
        kind.name(),
        run.trials,
        run.max_abs_diff,
        run.tolerance,
        if run.pass { "pass" } else { "fail" }
    ))
}
