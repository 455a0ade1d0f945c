//! Report rendering: aligned tables for humans, stable-field-order JSON for
//! machines.
//!
//! Masses are printed with 12 fractional digits in tables; JSON mass values
//! are rounded to 12 decimal places so the printed numbers re-parse to
//! identical values.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::frame::SubsetId;
use crate::scenarios::FusionReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

impl Format {
    pub fn parse(name: &str) -> Option<Format> {
        match name {
            "table" => Some(Format::Table),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

#[derive(Serialize)]
struct JsonRule {
    name: String,
    masses: BTreeMap<String, f64>,
    conflict: f64,
    decision: String,
}

#[derive(Serialize)]
struct JsonCheck {
    name: String,
    max_abs_diff: f64,
    verdict: String,
}

#[derive(Serialize)]
struct JsonReport {
    scenario: String,
    rules: Vec<JsonRule>,
    checks: Vec<JsonCheck>,
}

fn round12(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

fn verdict(pass: bool) -> String {
    if pass { "pass" } else { "fail" }.to_owned()
}

pub fn render_report(report: &FusionReport, format: Format) -> String {
    match format {
        Format::Json => render_json(report),
        Format::Table => render_table(report),
    }
}

fn render_json(report: &FusionReport) -> String {
    let frame = &report.frame;
    let json = JsonReport {
        scenario: report.scenario.clone(),
        rules: report
            .rules
            .iter()
            .map(|rule| JsonRule {
                name: rule.rule.clone(),
                masses: rule
                    .masses
                    .iter()
                    .map(|(s, m)| (frame.render_subset(*s), round12(*m)))
                    .collect(),
                conflict: round12(rule.conflict),
                decision: frame.render_subset(rule.decision),
            })
            .collect(),
        checks: report
            .checks
            .iter()
            .map(|check| JsonCheck {
                name: check.name.clone(),
                max_abs_diff: check.max_abs_diff,
                verdict: verdict(check.pass),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&json).expect("report serialization cannot fail")
}

fn render_table(report: &FusionReport) -> String {
    let frame = &report.frame;
    let mut out = String::new();
    out.push_str(&format!("scenario: {}\n", report.scenario));
    out.push_str(&format!("frame:    {}\n\n", frame.labels().join(", ")));

    // rows = union of focal subsets across rules, ascending mask order
    let subsets: BTreeSet<SubsetId> = report
        .rules
        .iter()
        .flat_map(|r| r.masses.keys().copied())
        .collect();

    let label_width = subsets
        .iter()
        .map(|s| frame.render_subset(*s).len())
        .chain(["decision".len(), "conflict".len()])
        .max()
        .unwrap_or(8);
    let col = 14usize; // width of "0." + 12 digits

    let mut header = format!("{:label_width$}", "subset");
    for rule in &report.rules {
        header.push_str(&format!("  {:>col$}", rule.rule));
    }
    out.push_str(header.trim_end());
    out.push('\n');

    for subset in &subsets {
        let mut line = format!("{:label_width$}", frame.render_subset(*subset));
        for rule in &report.rules {
            let mass = rule.masses.get(subset).copied().unwrap_or(0.0);
            line.push_str(&format!("  {mass:>col$.12}"));
        }
        out.push_str(&line);
        out.push('\n');
    }

    let mut line = format!("{:label_width$}", "conflict");
    for rule in &report.rules {
        line.push_str(&format!("  {:>col$.12}", rule.conflict));
    }
    out.push_str(&line);
    out.push('\n');

    let mut line = format!("{:label_width$}", "decision");
    for rule in &report.rules {
        line.push_str(&format!("  {:>col$}", frame.render_subset(rule.decision)));
    }
    out.push_str(&line);
    out.push('\n');

    if !report.checks.is_empty() {
        out.push_str("\nchecks:\n");
        for check in &report.checks {
            out.push_str(&format!(
                "  {:<18} max_abs_diff={:.3e}  verdict={}\n",
                check.name,
                check.max_abs_diff,
                verdict(check.pass)
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Frame;
    use crate::mass::MassFunction;
    use crate::rules::RuleSpec;
    use crate::scenarios::{comparison_report, zadeh_scenario, Scenario};

    fn vacuous_report() -> FusionReport {
        let frame = Frame::shared(["A", "B"]).unwrap();
        let v = MassFunction::vacuous(frame.clone());
        let s = Scenario::new("vacuous", frame, vec![v.clone(), v], "").unwrap();
        comparison_report(&s, &[RuleSpec::Dempster]).unwrap()
    }

    #[test]
    fn vacuous_table_prints_theta_row_with_unit_mass() {
        let table = render_report(&vacuous_report(), Format::Table);
        assert!(table.contains("Theta"), "{table}");
        assert!(table.contains("1.000000000000"), "{table}");
    }

    #[test]
    fn json_shape_and_round_trip() {
        let s = zadeh_scenario(0.01).unwrap();
        let report = comparison_report(&s, &RuleSpec::all()).unwrap();
        let json = render_report(&report, Format::Json);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["scenario"], "zadeh(epsilon=0.01)");
        let rules = value["rules"].as_array().unwrap();
        assert_eq!(rules.len(), 8);
        let pcr5 = rules.iter().find(|r| r["name"] == "pcr5").unwrap();
        assert!((pcr5["masses"]["A"].as_f64().unwrap() - 0.499851).abs() < 1e-9);
        assert_eq!(pcr5["decision"], "A");
        // rendering the same report twice is byte-identical
        assert_eq!(json, render_report(&report, Format::Json));
    }

    #[test]
    fn json_masses_re_parse_to_the_rounded_values_exactly() {
        let s = zadeh_scenario(0.07).unwrap();
        let report = comparison_report(&s, &RuleSpec::all()).unwrap();
        let json = render_report(&report, Format::Json);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        for (row, rendered) in report.rules.iter().zip(value["rules"].as_array().unwrap()) {
            for (subset, mass) in &row.masses {
                let key = report.frame.render_subset(*subset);
                let reparsed = rendered["masses"][&key].as_f64().unwrap();
                assert_eq!(reparsed, round12(*mass), "{}/{key}", row.rule);
            }
            assert_eq!(
                rendered["conflict"].as_f64().unwrap(),
                round12(row.conflict)
            );
        }
    }

    #[test]
    fn empty_check_list_renders_as_empty_array() {
        // a three-source, non-conflicting scenario attaches no checks
        let frame = Frame::shared(["A", "B", "C"]).unwrap();
        let mk = |i: usize| {
            MassFunction::new(
                frame.clone(),
                [(frame.singleton(i), 0.5), (frame.full_set(), 0.5)],
            )
            .unwrap()
        };
        let s = Scenario::new("three", frame.clone(), vec![mk(0), mk(1), mk(2)], "").unwrap();
        let report = comparison_report(&s, &[RuleSpec::Conjunctive]).unwrap();
        assert!(report.checks.is_empty());
        let json = render_report(&report, Format::Json);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["checks"], serde_json::json!([]));
    }
}
