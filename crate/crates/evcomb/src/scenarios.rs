//! Canonical evaluation scenarios and multi-rule comparison reports.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frame::{Frame, SubsetId};
use crate::mass::MassFunction;
use crate::reference::equivalence_report;
use crate::rules::{
    combine_conjunctive, combine_disjunctive, combine_mixed, combine_pcr5, combine_pcr6,
    combine_total_conflict, combine_yamada_first, fully_conflicting, DeltaPolicy, RuleSpec,
};

/// Tolerance applied to the standard equivalence checks inside a report.
pub const CHECK_TOL: f64 = 1e-12;

/// A named evaluation case: a frame plus at least two sources on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    name: String,
    frame: Arc<Frame>,
    sources: Vec<MassFunction>,
    notes: String,
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        frame: Arc<Frame>,
        sources: Vec<MassFunction>,
        notes: impl Into<String>,
    ) -> Result<Self> {
        if sources.len() < 2 {
            return Err(Error::TooFewSources(sources.len()));
        }
        if sources.iter().any(|m| m.frame_arc() != &frame) {
            return Err(Error::FrameMismatch);
        }
        Ok(Scenario {
            name: name.into(),
            frame,
            sources,
            notes: notes.into(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn sources(&self) -> &[MassFunction] {
        &self.sources
    }

    pub fn notes(&self) -> &str {
        &self.notes
    }
}

/// Zadeh's two-expert example on {A, B, C}: both experts nearly certain of
/// different singletons, agreeing only on a small residual mass ε on C.
pub fn zadeh_scenario(epsilon: f64) -> Result<Scenario> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::BadEpsilon(epsilon));
    }
    let frame = Frame::shared(["A", "B", "C"])?;
    let (a, b, c) = (frame.singleton(0), frame.singleton(1), frame.singleton(2));
    let m1 = MassFunction::new(frame.clone(), [(a, 1.0 - epsilon), (c, epsilon)])?;
    let m2 = MassFunction::new(frame.clone(), [(b, 1.0 - epsilon), (c, epsilon)])?;
    Scenario::new(
        format!("zadeh(epsilon={epsilon})"),
        frame,
        vec![m1, m2],
        "two nearly-certain experts backing different singletons",
    )
}

/// One rule's row in a comparison report.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleReport {
    pub rule: String,
    /// Output masses on non-empty subsets; for the raw conjunctive rule the
    /// empty-set mass is carried by `conflict` instead.
    pub masses: BTreeMap<SubsetId, f64>,
    /// The scenario's conjunctive conflict `k` (the mass every rule
    /// redistributes or discards), identical across rows.
    pub conflict: f64,
    pub decision: SubsetId,
}

/// One equivalence check attached to a report.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub max_abs_diff: f64,
    pub pass: bool,
}

/// Per-rule outputs, decisions, and the standard equivalence checks for one
/// scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionReport {
    pub scenario: String,
    pub frame: Arc<Frame>,
    pub rules: Vec<RuleReport>,
    pub checks: Vec<CheckReport>,
}

/// Runs each rule on the scenario and attaches the equivalence checks that
/// apply: pcr5-vs-pcr6 for two-source scenarios, and the fully-conflicting
/// identities when every cross-source focal pair is disjoint.
pub fn comparison_report(scenario: &Scenario, rules: &[RuleSpec]) -> Result<FusionReport> {
    let sources = scenario.sources();
    let conflict = combine_conjunctive(sources)?.conflict();

    let mut rows = Vec::with_capacity(rules.len());
    for spec in rules {
        if spec.needs_two_sources() && sources.len() != 2 {
            return Err(Error::ArityError {
                rule: spec.name().to_owned(),
                got: sources.len(),
            });
        }
        let output = spec.apply(sources)?;
        let assignment = output.as_assignment();
        let masses = assignment
            .entries()
            .iter()
            .filter(|(s, _)| !s.is_empty())
            .map(|(s, m)| (*s, *m))
            .collect();
        rows.push(RuleReport {
            rule: spec.name().to_owned(),
            masses,
            conflict,
            decision: assignment.max_belief_decision(),
        });
    }

    let mut checks = Vec::new();
    let mut push = |name: &str, report: crate::reference::EquivalenceReport| {
        checks.push(CheckReport {
            name: name.to_owned(),
            max_abs_diff: report.max_abs_diff,
            pass: report.pass,
        });
    };
    if sources.len() == 2 {
        let five = combine_pcr5(&sources[0], &sources[1])?;
        let six = combine_pcr6(sources)?;
        push("pcr5-pcr6", equivalence_report(&five, &six, CHECK_TOL)?);
        if fully_conflicting(sources) {
            let yam = combine_yamada_first(&sources[0], &sources[1])?;
            push("yamada1-pcr5", equivalence_report(&yam, &five, CHECK_TOL)?);
            let mixed = combine_mixed(&sources[0], &sources[1], &DeltaPolicy::Overlap)?;
            let disj = combine_disjunctive(sources)?;
            push(
                "mixed-disjunctive",
                equivalence_report(&mixed, &disj, CHECK_TOL)?,
            );
        }
    }
    if fully_conflicting(sources) {
        let shared = combine_total_conflict(sources)?;
        let six = combine_pcr6(sources)?;
        push("eq40-pcr6", equivalence_report(&shared, &six, CHECK_TOL)?);
    }

    Ok(FusionReport {
        scenario: scenario.name().to_owned(),
        frame: scenario.frame().clone(),
        rules: rows,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::MassAssignment;
    use crate::reference::random_disjoint_pair;

    #[test]
    fn zadeh_scenario_shape() {
        let s = zadeh_scenario(0.01).unwrap();
        assert_eq!(s.frame().labels(), ["A", "B", "C"]);
        assert_eq!(s.sources().len(), 2);
        let a = s.frame().singleton(0);
        assert!((s.sources()[0].mass(a) - 0.99).abs() < 1e-12);
        assert_eq!(zadeh_scenario(0.0).unwrap_err(), Error::BadEpsilon(0.0));
        assert_eq!(zadeh_scenario(0.5).unwrap_err(), Error::BadEpsilon(0.5));
    }

    #[test]
    fn zadeh_report_decisions_split_by_rule_family() {
        let s = zadeh_scenario(0.01).unwrap();
        let report = comparison_report(&s, &RuleSpec::all()).unwrap();
        let frame = s.frame();
        let a = frame.singleton(0);
        let c = frame.singleton(2);
        let by_name: BTreeMap<&str, &RuleReport> =
            report.rules.iter().map(|r| (r.rule.as_str(), r)).collect();
        assert_eq!(by_name["dempster"].decision, c);
        // the proportional-redistribution family keeps the decision on the
        // strongly-supported singletons
        for rule in ["pcr5", "pcr6", "yamada1", "cbc"] {
            assert_eq!(by_name[rule].decision, a, "{rule} must decide A");
        }
        // union-heavy rules leave singleton beliefs at zero except for the
        // shared residual C, so max-belief lands on C there
        for rule in ["disjunctive", "mixed"] {
            assert_eq!(by_name[rule].decision, c);
        }
        for row in &report.rules {
            assert!((row.conflict - 0.9999).abs() < 1e-12);
        }
        // coincidence check attached, fully-conflicting checks not
        assert_eq!(report.checks.len(), 1);
        assert_eq!(report.checks[0].name, "pcr5-pcr6");
        assert!(report.checks[0].pass);
    }

    #[test]
    fn vacuous_scenario_is_unanimous() {
        let frame = Frame::shared(["A", "B"]).unwrap();
        let v = MassFunction::vacuous(frame.clone());
        let s = Scenario::new("vacuous", frame.clone(), vec![v.clone(), v], "").unwrap();
        let report = comparison_report(&s, &RuleSpec::all()).unwrap();
        for row in &report.rules {
            assert_eq!(row.decision, frame.singleton(0));
            assert!((row.masses[&frame.full_set()] - 1.0).abs() < 1e-12);
            assert_eq!(row.conflict, 0.0);
        }
    }

    #[test]
    fn fully_conflicting_scenario_attaches_equivalence_checks() {
        let frame = Frame::shared(["A", "B", "C", "D"]).unwrap();
        let (m1, m2) = random_disjoint_pair(&frame, 42).unwrap();
        let s = Scenario::new("disjoint", frame, vec![m1, m2], "").unwrap();
        // dempster would fail at total conflict, so compare the others
        let rules = vec![
            RuleSpec::Conjunctive,
            RuleSpec::Disjunctive,
            RuleSpec::Pcr5,
            RuleSpec::Pcr6,
            RuleSpec::YamadaFirst,
        ];
        let report = comparison_report(&s, &rules).unwrap();
        let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "pcr5-pcr6",
                "yamada1-pcr5",
                "mixed-disjunctive",
                "eq40-pcr6"
            ]
        );
        assert!(report.checks.iter().all(|c| c.pass));
    }

    #[test]
    fn arity_mismatch_is_rejected() {
        let frame = Frame::shared(["A", "B", "C"]).unwrap();
        let mk = |i: usize| MassFunction::new(frame.clone(), [(frame.singleton(i), 1.0)]).unwrap();
        let s = Scenario::new("three", frame.clone(), vec![mk(0), mk(1), mk(2)], "").unwrap();
        let err = comparison_report(&s, &[RuleSpec::Pcr5]).unwrap_err();
        assert_eq!(
            err,
            Error::ArityError {
                rule: "pcr5".into(),
                got: 3
            }
        );
    }

    #[test]
    fn report_generation_is_deterministic() {
        let s = zadeh_scenario(0.25).unwrap();
        let a = comparison_report(&s, &RuleSpec::all()).unwrap();
        let b = comparison_report(&s, &RuleSpec::all()).unwrap();
        assert_eq!(a, b);
    }
}
