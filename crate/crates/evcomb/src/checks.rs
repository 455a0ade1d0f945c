//! Named property checks over seeded random inputs.
//!
//! Each check runs a fixed number of trials, derives every case from a
//! splitmix64 stream (so runs are reproducible), and reports the worst
//! per-subset deviation seen together with a pass/fail verdict at the
//! check's pinned tolerance.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::mass::{MassAssignment, MassFunction};
use crate::reference::{
    equivalence_report, oracle_pairwise_combine, random_bba, random_disjoint_pair,
    random_disjoint_sources, SplitMix64, TransferFn,
};
use crate::rules::{
    combine_conjunctive, combine_dempster, combine_disjunctive, combine_mixed, combine_pcr5,
    combine_pcr6, combine_total_conflict, combine_yamada_cbc, combine_yamada_first, DeltaPolicy,
    LambdaPolicy,
};

/// The checkable properties exposed by the bench interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// PCR6 restricted to two sources coincides with PCR5.
    Pcr5Pcr6,
    /// On fully-conflicting pairs the first sharing scheme equals PCR5.
    Yamada1Pcr5,
    /// On fully-conflicting sources the total-conflict rule equals PCR6.
    Eq40Pcr6,
    /// On fully-conflicting pairs the mixed rule degenerates to disjunctive.
    MixedDisjunctive,
    /// Every rule output sums to one (including the empty set for the raw
    /// conjunctive rule).
    SumToOne,
    /// Every two-source rule agrees with the pairwise-transfer oracle.
    OracleAgreement,
}

pub const ALL_CHECKS: [CheckKind; 6] = [
    CheckKind::Pcr5Pcr6,
    CheckKind::Yamada1Pcr5,
    CheckKind::Eq40Pcr6,
    CheckKind::MixedDisjunctive,
    CheckKind::SumToOne,
    CheckKind::OracleAgreement,
];

impl CheckKind {
    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::Pcr5Pcr6 => "pcr5-pcr6",
            CheckKind::Yamada1Pcr5 => "yamada1-pcr5",
            CheckKind::Eq40Pcr6 => "eq40-pcr6",
            CheckKind::MixedDisjunctive => "mixed-disjunctive",
            CheckKind::SumToOne => "sum-to-one",
            CheckKind::OracleAgreement => "oracle-agreement",
        }
    }

    pub fn parse(name: &str) -> Option<CheckKind> {
        ALL_CHECKS.iter().copied().find(|c| c.name() == name)
    }

    pub fn tolerance(&self) -> f64 {
        match self {
            CheckKind::SumToOne => 1e-9,
            _ => 1e-12,
        }
    }
}

/// Result of running one check over `trials` seeded cases.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRun {
    pub check: CheckKind,
    pub trials: usize,
    pub max_abs_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn letters(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| char::from(b'A' + i as u8).to_string())
        .collect()
}

/// A random frame with 2..=8 singletons plus a pair of random BBAs on it,
/// with 1..=8 focal elements each.
fn random_case(rng: &mut SplitMix64) -> (Arc<Frame>, MassFunction, MassFunction) {
    let n = 2 + rng.below(7) as usize;
    let frame = Frame::shared(letters(n)).unwrap();
    let max_focal = ((1usize << n) - 1).min(8) as u64;
    let f1 = 1 + rng.below(max_focal) as usize;
    let f2 = 1 + rng.below(max_focal) as usize;
    let m1 = random_bba(&frame, f1, rng.next_u64()).unwrap();
    let m2 = random_bba(&frame, f2, rng.next_u64()).unwrap();
    (frame, m1, m2)
}

fn disjoint_case(rng: &mut SplitMix64) -> (Arc<Frame>, MassFunction, MassFunction) {
    let n = 2 + rng.below(7) as usize;
    let frame = Frame::shared(letters(n)).unwrap();
    let (m1, m2) = random_disjoint_pair(&frame, rng.next_u64()).unwrap();
    (frame, m1, m2)
}

/// Runs `check` over `trials` cases derived from `seed`.
pub fn run_check(check: CheckKind, trials: usize, seed: u64) -> Result<CheckRun> {
    let mut rng = SplitMix64::new(seed);
    let tol = check.tolerance();
    let mut max_abs_diff = 0.0f64;
    let mut track = |d: f64| {
        if d > max_abs_diff {
            max_abs_diff = d;
        }
    };

    for _ in 0..trials {
        match check {
            CheckKind::Pcr5Pcr6 => {
                let (_, m1, m2) = random_case(&mut rng);
                let five = combine_pcr5(&m1, &m2)?;
                let six = combine_pcr6(&[m1, m2])?;
                track(equivalence_report(&five, &six, tol)?.max_abs_diff);
            }
            CheckKind::Yamada1Pcr5 => {
                let (_, m1, m2) = disjoint_case(&mut rng);
                let yam = combine_yamada_first(&m1, &m2)?;
                let five = combine_pcr5(&m1, &m2)?;
                track(equivalence_report(&yam, &five, tol)?.max_abs_diff);
            }
            CheckKind::Eq40Pcr6 => {
                let m = 3 + rng.below(3) as usize;
                let n = m + rng.below(9 - m as u64) as usize;
                let frame = Frame::shared(letters(n)).unwrap();
                let sources = random_disjoint_sources(&frame, m, rng.next_u64())?;
                let shared = combine_total_conflict(&sources)?;
                let six = combine_pcr6(&sources)?;
                track(equivalence_report(&shared, &six, tol)?.max_abs_diff);
            }
            CheckKind::MixedDisjunctive => {
                let (_, m1, m2) = disjoint_case(&mut rng);
                let mixed = combine_mixed(&m1, &m2, &DeltaPolicy::Overlap)?;
                let disj = combine_disjunctive(&[m1, m2])?;
                track(equivalence_report(&mixed, &disj, tol)?.max_abs_diff);
            }
            CheckKind::SumToOne => {
                let (_, m1, m2) = random_case(&mut rng);
                let conj = combine_conjunctive(&[m1.clone(), m2.clone()])?;
                track((conj.total_mass() - 1.0).abs());
                let mut outputs = vec![
                    combine_disjunctive(&[m1.clone(), m2.clone()])?,
                    combine_pcr5(&m1, &m2)?,
                    combine_pcr6(&[m1.clone(), m2.clone()])?,
                    combine_yamada_first(&m1, &m2)?,
                    combine_mixed(&m1, &m2, &DeltaPolicy::Overlap)?,
                    combine_yamada_cbc(&m1, &m2, &LambdaPolicy::Cardinality)?,
                ];
                // Dempster is undefined at total conflict, which random pairs
                // can reach; skip that case.
                match combine_dempster(&[m1.clone(), m2.clone()]) {
                    Ok(m) => outputs.push(m),
                    Err(Error::TotalConflict) => {}
                    Err(e) => return Err(e),
                }
                let (_, d1, d2) = disjoint_case(&mut rng);
                outputs.push(combine_total_conflict(&[d1, d2])?);
                for out in outputs {
                    track((out.total_mass() - 1.0).abs());
                    assert_eq!(out.mass(crate::frame::SubsetId::EMPTY), 0.0);
                }
            }
            CheckKind::OracleAgreement => {
                let (_, m1, m2) = random_case(&mut rng);
                let cases: Vec<(TransferFn, MassFunction)> = vec![
                    (
                        TransferFn::disjunctive(),
                        combine_disjunctive(&[m1.clone(), m2.clone()])?,
                    ),
                    (TransferFn::pcr5(&m1, &m2), combine_pcr5(&m1, &m2)?),
                    (
                        TransferFn::yamada_first(&m1, &m2),
                        combine_yamada_first(&m1, &m2)?,
                    ),
                    (
                        TransferFn::mixed(DeltaPolicy::Overlap),
                        combine_mixed(&m1, &m2, &DeltaPolicy::Overlap)?,
                    ),
                    (
                        TransferFn::cbc(&m1, &m2, LambdaPolicy::Cardinality),
                        combine_yamada_cbc(&m1, &m2, &LambdaPolicy::Cardinality)?,
                    ),
                ];
                for (transfer, rule_out) in &cases {
                    let oracle = oracle_pairwise_combine(&m1, &m2, transfer)?;
                    track(equivalence_report(rule_out, &oracle, tol)?.max_abs_diff);
                }
                // raw conjunctive, compared with the empty set included
                let conj = combine_conjunctive(&[m1.clone(), m2.clone()])?;
                let oracle = oracle_pairwise_combine(&m1, &m2, &TransferFn::conjunctive())?;
                track(equivalence_report(&conj, &oracle, tol)?.max_abs_diff);
                // Dempster via the normalized oracle-conjunctive output
                match combine_dempster(&[m1.clone(), m2.clone()]) {
                    Ok(rule_out) => {
                        let oracle_norm = oracle.normalized()?;
                        track(equivalence_report(&rule_out, &oracle_norm, tol)?.max_abs_diff);
                    }
                    Err(Error::TotalConflict) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }

    Ok(CheckRun {
        check,
        trials,
        max_abs_diff,
        tolerance: tol,
        pass: max_abs_diff <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass_on_short_runs() {
        for check in ALL_CHECKS {
            let run = run_check(check, 25, 7).unwrap();
            assert!(
                run.pass,
                "{} failed: max diff {:e} over tolerance {:e}",
                check.name(),
                run.max_abs_diff,
                run.tolerance
            );
        }
    }

    #[test]
    fn check_runs_are_deterministic() {
        let a = run_check(CheckKind::Pcr5Pcr6, 10, 3).unwrap();
        let b = run_check(CheckKind::Pcr5Pcr6, 10, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn names_round_trip() {
        for check in ALL_CHECKS {
            assert_eq!(CheckKind::parse(check.name()), Some(check));
        }
        assert_eq!(CheckKind::parse("nope"), None);
    }
}
