//! Combination rules.
//!
//! Every rule is a pure function from input BBAs (plus rule parameters) to an
//! output BBA. The raw conjunctive rule returns a [`SubnormalMass`] because it
//! retains the conflict mass on the empty set; every other rule returns a
//! normal [`MassFunction`].
//!
//! Accumulation is deterministic: sources in the given order, focal elements
//! in ascending mask order, so outputs are bit-reproducible.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frame::{Frame, SubsetId};
use crate::mass::{MassFunction, SubnormalMass};

/// Guard on the product of focal counts enumerated by the M-source rules.
pub const MAX_TUPLE_SPACE: u128 = 10_000_000;

/// Choice of the split weight δ used by the mixed rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaPolicy {
    /// δ = |X∩Y| / |X∪Y|, the degree of overlapping.
    Overlap,
    /// A constant δ in `[0, 1]`.
    Fixed(f64),
}

impl DeltaPolicy {
    pub fn delta(&self, x: SubsetId, y: SubsetId) -> Result<f64> {
        match *self {
            DeltaPolicy::Overlap => delta_overlap(x, y),
            DeltaPolicy::Fixed(v) => {
                if (0.0..=1.0).contains(&v) {
                    Ok(v)
                } else {
                    Err(Error::BadDelta(v))
                }
            }
        }
    }
}

/// Degree of overlapping between two subsets: `|x∩y| / |x∪y|`.
pub fn delta_overlap(x: SubsetId, y: SubsetId) -> Result<f64> {
    let union = x.union(y);
    if union.is_empty() {
        return Err(Error::UndefinedOverlap);
    }
    Ok(f64::from(x.intersect(y).cardinality()) / f64::from(union.cardinality()))
}

/// Choice of the three-way weights (λ₁, λ₂, λ₃) used by the compromise rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaPolicy {
    /// Weights proportional to the cardinalities of the three parts
    /// `x∩y`, `x\y`, `y\x` of `x∪y`; empty parts get weight zero.
    Cardinality,
    /// Constant weights, each in `[0, 1]`, summing to one within 1e-12.
    Fixed(f64, f64, f64),
}

impl LambdaPolicy {
    pub fn weights(&self, x: SubsetId, y: SubsetId) -> Result<(f64, f64, f64)> {
        match *self {
            LambdaPolicy::Cardinality => Ok(lambda_cardinality(x, y)),
            LambdaPolicy::Fixed(l1, l2, l3) => {
                let in_range = |v: f64| (0.0..=1.0).contains(&v);
                if in_range(l1)
                    && in_range(l2)
                    && in_range(l3)
                    && (l1 + l2 + l3 - 1.0).abs() <= 1e-12
                {
                    Ok((l1, l2, l3))
                } else {
                    Err(Error::BadLambdaWeights(l1, l2, l3))
                }
            }
        }
    }
}

/// Cardinality-partition weights: λ₁ = |x∩y|/|x∪y|, λ₂ = |x\y|/|x∪y|,
/// λ₃ = |y\x|/|x∪y|. The three parts partition `x∪y`, so the weights sum
/// to one exactly.
pub fn lambda_cardinality(x: SubsetId, y: SubsetId) -> (f64, f64, f64) {
    let union = x.union(y);
    debug_assert!(!union.is_empty());
    let u = f64::from(union.cardinality());
    (
        f64::from(x.intersect(y).cardinality()) / u,
        f64::from(x.difference(y).cardinality()) / u,
        f64::from(y.difference(x).cardinality()) / u,
    )
}

fn check_sources(sources: &[MassFunction]) -> Result<Arc<Frame>> {
    if sources.len() < 2 {
        return Err(Error::TooFewSources(sources.len()));
    }
    let frame = sources[0].frame_arc();
    if sources[1..].iter().any(|m| m.frame_arc() != frame) {
        return Err(Error::FrameMismatch);
    }
    Ok(frame.clone())
}

fn check_pair(m1: &MassFunction, m2: &MassFunction) -> Result<Arc<Frame>> {
    if m1.frame_arc() != m2.frame_arc() {
        return Err(Error::FrameMismatch);
    }
    Ok(m1.frame_arc().clone())
}

/// Left fold of the product transfer `op` over all sources.
fn product_fold(
    sources: &[MassFunction],
    op: fn(SubsetId, SubsetId) -> SubsetId,
) -> BTreeMap<SubsetId, f64> {
    let mut acc: BTreeMap<SubsetId, f64> = sources[0].iter().collect();
    for m in &sources[1..] {
        let mut next: BTreeMap<SubsetId, f64> = BTreeMap::new();
        for (x, px) in &acc {
            for (y, py) in m.iter() {
                *next.entry(op(*x, y)).or_insert(0.0) += px * py;
            }
        }
        acc = next;
    }
    acc
}

/// Conjunctive rule: each focal product lands on the intersection; mass on
/// the empty set is retained and reported as the conflict `k`.
pub fn combine_conjunctive(sources: &[MassFunction]) -> Result<SubnormalMass> {
    let frame = check_sources(sources)?;
    Ok(SubnormalMass::from_combination(
        frame,
        product_fold(sources, SubsetId::intersect),
    ))
}

/// Disjunctive rule: each focal product lands on the union. The empty set
/// can never receive mass since focal elements are non-empty.
pub fn combine_disjunctive(sources: &[MassFunction]) -> Result<MassFunction> {
    let frame = check_sources(sources)?;
    Ok(MassFunction::from_combination(
        frame,
        product_fold(sources, SubsetId::union),
    ))
}

/// Dempster's rule: conjunctive combination followed by removal of the
/// empty-set mass and renormalization. Undefined at total conflict.
pub fn combine_dempster(sources: &[MassFunction]) -> Result<MassFunction> {
    combine_conjunctive(sources)?.normalized()
}

/// Proportional two-way split of the product `p = m1(x)·m2(y)` back onto
/// `x` and `y`: `x` gets `mx·p/(mx+my)` and `y` gets `my·p/(mx+my)`.
#[inline]
fn proportional_split(mx: f64, my: f64) -> (f64, f64) {
    let denom = mx + my;
    (mx * mx * my / denom, mx * my * my / denom)
}

/// First sharing scheme: for every focal pair `(x, y)` the product mass is
/// split back onto `x` and `y` in proportion to the source masses, whether
/// or not the pair conflicts.
pub fn combine_yamada_first(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    let frame = check_pair(m1, m2)?;
    let mut out: BTreeMap<SubsetId, f64> = BTreeMap::new();
    for (x, mx) in m1.iter() {
        for (y, my) in m2.iter() {
            let (to_x, to_y) = proportional_split(mx, my);
            *out.entry(x).or_insert(0.0) += to_x;
            *out.entry(y).or_insert(0.0) += to_y;
        }
    }
    Ok(MassFunction::from_combination(frame, out))
}

/// Proportional conflict redistribution rule #5 for two sources: conjunctive
/// transfer for agreeing pairs, and each conflicting product returned to its
/// two generating focal elements in proportion to their masses.
pub fn combine_pcr5(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    let frame = check_pair(m1, m2)?;
    let mut out: BTreeMap<SubsetId, f64> = BTreeMap::new();
    for (x, mx) in m1.iter() {
        for (y, my) in m2.iter() {
            let c = x.intersect(y);
            if c.is_empty() {
                let (to_x, to_y) = proportional_split(mx, my);
                *out.entry(x).or_insert(0.0) += to_x;
                *out.entry(y).or_insert(0.0) += to_y;
            } else {
                *out.entry(c).or_insert(0.0) += mx * my;
            }
        }
    }
    Ok(MassFunction::from_combination(frame, out))
}

/// Iterates over all tuples of focal elements drawn from `lists`, calling
/// `visit(subsets, masses)` for each.
fn for_each_tuple(lists: &[Vec<(SubsetId, f64)>], mut visit: impl FnMut(&[SubsetId], &[f64])) {
    let mut idx = vec![0usize; lists.len()];
    let mut subsets = vec![SubsetId::EMPTY; lists.len()];
    let mut masses = vec![0.0f64; lists.len()];
    loop {
        for (k, &i) in idx.iter().enumerate() {
            let (s, m) = lists[k][i];
            subsets[k] = s;
            masses[k] = m;
        }
        visit(&subsets, &masses);
        // odometer increment
        let mut k = lists.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < lists[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn tuple_space(sources: &[MassFunction]) -> u128 {
    sources.iter().map(|m| m.focal_count() as u128).product()
}

/// Proportional conflict redistribution rule #6 for M ≥ 2 sources.
///
/// On top of the conjunctive part, each source's focal element `x` regains,
/// from every tuple of the other sources' focal elements whose common
/// intersection with `x` is empty, the share
/// `m_i(x)² · Π m_j(x_j) / (m_i(x) + Σ m_j(x_j))`.
pub fn combine_pcr6(sources: &[MassFunction]) -> Result<MassFunction> {
    let frame = check_sources(sources)?;
    let space = tuple_space(sources);
    if space > MAX_TUPLE_SPACE {
        return Err(Error::TupleSpaceTooLarge(space));
    }

    let mut out = product_fold(sources, SubsetId::intersect);
    out.remove(&SubsetId::EMPTY);

    let focal: Vec<Vec<(SubsetId, f64)>> = sources.iter().map(|m| m.iter().collect()).collect();
    for i in 0..sources.len() {
        let others: Vec<Vec<(SubsetId, f64)>> = focal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, l)| l.clone())
            .collect();
        for &(x, mx) in &focal[i] {
            for_each_tuple(&others, |subsets, masses| {
                let inter = subsets.iter().fold(x, |acc, s| acc.intersect(*s));
                if inter.is_empty() {
                    let prod: f64 = masses.iter().product();
                    let sum: f64 = masses.iter().sum();
                    *out.entry(x).or_insert(0.0) += mx * mx * prod / (mx + sum);
                }
            });
        }
    }
    Ok(MassFunction::from_combination(frame, out))
}

/// Mixed rule: each focal product is split between `x∩y` (weight δ) and
/// `x∪y` (weight 1−δ). A conflicting pair sends the whole product to the
/// union regardless of the policy, so the empty set never receives mass.
pub fn combine_mixed(
    m1: &MassFunction,
    m2: &MassFunction,
    delta: &DeltaPolicy,
) -> Result<MassFunction> {
    let frame = check_pair(m1, m2)?;
    let mut out: BTreeMap<SubsetId, f64> = BTreeMap::new();
    for (x, mx) in m1.iter() {
        for (y, my) in m2.iter() {
            let p = mx * my;
            let c = x.intersect(y);
            let u = x.union(y);
            if c.is_empty() {
                *out.entry(u).or_insert(0.0) += p;
            } else {
                let d = delta.delta(x, y)?;
                if d > 0.0 {
                    *out.entry(c).or_insert(0.0) += d * p;
                }
                if d < 1.0 {
                    *out.entry(u).or_insert(0.0) += (1.0 - d) * p;
                }
            }
        }
    }
    Ok(MassFunction::from_combination(frame, out))
}

/// Compromise rule: each focal product is shared among `c = x∩y`,
/// `x\y` and `y\x` with weights from the λ policy. When `c` is empty the
/// product falls back to the two-way proportional split onto `x` and `y`.
///
/// The policy must assign weight zero to any empty part; a nonzero weight
/// on an empty part is rejected as [`Error::InvalidLambdaPolicy`].
pub fn combine_yamada_cbc(
    m1: &MassFunction,
    m2: &MassFunction,
    lambda: &LambdaPolicy,
) -> Result<MassFunction> {
    let frame = check_pair(m1, m2)?;
    let mut out: BTreeMap<SubsetId, f64> = BTreeMap::new();
    for (x, mx) in m1.iter() {
        for (y, my) in m2.iter() {
            let p = mx * my;
            let c = x.intersect(y);
            if c.is_empty() {
                let (to_x, to_y) = proportional_split(mx, my);
                *out.entry(x).or_insert(0.0) += to_x;
                *out.entry(y).or_insert(0.0) += to_y;
                continue;
            }
            let (l1, l2, l3) = lambda.weights(x, y)?;
            for (part, weight) in [(c, l1), (x.difference(y), l2), (y.difference(x), l3)] {
                if weight == 0.0 {
                    continue;
                }
                if part.is_empty() {
                    return Err(Error::InvalidLambdaPolicy { weight });
                }
                *out.entry(part).or_insert(0.0) += weight * p;
            }
        }
    }
    Ok(MassFunction::from_combination(frame, out))
}

/// Whether every cross-source pair of focal elements has empty intersection.
pub fn fully_conflicting(sources: &[MassFunction]) -> bool {
    for (i, a) in sources.iter().enumerate() {
        for b in &sources[i + 1..] {
            for (x, _) in a.iter() {
                for (y, _) in b.iter() {
                    if x.intersects(y) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Total-conflict sharing rule: requires every cross-source focal pair to be
/// disjoint. Each focal tuple's product is returned to the participating
/// focal elements in proportion to their own masses.
pub fn combine_total_conflict(sources: &[MassFunction]) -> Result<MassFunction> {
    let frame = check_sources(sources)?;
    if !fully_conflicting(sources) {
        return Err(Error::NotFullyConflicting);
    }
    let focal: Vec<Vec<(SubsetId, f64)>> = sources.iter().map(|m| m.iter().collect()).collect();
    let mut out: BTreeMap<SubsetId, f64> = BTreeMap::new();
    for_each_tuple(&focal, |subsets, masses| {
        let prod: f64 = masses.iter().product();
        let sum: f64 = masses.iter().sum();
        for (s, m) in subsets.iter().zip(masses) {
            *out.entry(*s).or_insert(0.0) += m / sum * prod;
        }
    });
    Ok(MassFunction::from_combination(frame, out))
}

/// Identifier plus parameters selecting one combination rule.
#[derive(Debug, Clone, PartialEq)]
pub enum RuleSpec {
    Conjunctive,
    Disjunctive,
    Dempster,
    Pcr5,
    Pcr6,
    YamadaFirst,
    Mixed(DeltaPolicy),
    Cbc(LambdaPolicy),
}

/// Outcome of applying a rule: either a normal BBA or, for the raw
/// conjunctive rule, a subnormal one retaining the conflict mass.
#[derive(Debug, Clone, PartialEq)]
pub enum RuleOutput {
    Normalized(MassFunction),
    Subnormal(SubnormalMass),
}

impl RuleOutput {
    pub fn as_assignment(&self) -> &dyn crate::mass::MassAssignment {
        match self {
            RuleOutput::Normalized(m) => m,
            RuleOutput::Subnormal(m) => m,
        }
    }

    pub fn empty_set_mass(&self) -> f64 {
        match self {
            RuleOutput::Normalized(_) => 0.0,
            RuleOutput::Subnormal(m) => m.conflict(),
        }
    }
}

impl RuleSpec {
    /// The wire name used by the CLI and report formats.
    pub fn name(&self) -> &'static str {
        match self {
            RuleSpec::Conjunctive => "conjunctive",
            RuleSpec::Disjunctive => "disjunctive",
            RuleSpec::Dempster => "dempster",
            RuleSpec::Pcr5 => "pcr5",
            RuleSpec::Pcr6 => "pcr6",
            RuleSpec::YamadaFirst => "yamada1",
            RuleSpec::Mixed(_) => "mixed",
            RuleSpec::Cbc(_) => "cbc",
        }
    }

    /// Builds the rule named `name` with the given policies where relevant.
    pub fn by_name(name: &str, delta: DeltaPolicy, lambda: LambdaPolicy) -> Option<RuleSpec> {
        match name {
            "conjunctive" => Some(RuleSpec::Conjunctive),
            "disjunctive" => Some(RuleSpec::Disjunctive),
            "dempster" => Some(RuleSpec::Dempster),
            "pcr5" => Some(RuleSpec::Pcr5),
            "pcr6" => Some(RuleSpec::Pcr6),
            "yamada1" => Some(RuleSpec::YamadaFirst),
            "mixed" => Some(RuleSpec::Mixed(delta)),
            "cbc" => Some(RuleSpec::Cbc(lambda)),
            _ => None,
        }
    }

    /// Every rule, with the default overlap/cardinality policies.
    pub fn all() -> Vec<RuleSpec> {
        vec![
            RuleSpec::Conjunctive,
            RuleSpec::Disjunctive,
            RuleSpec::Dempster,
            RuleSpec::Pcr5,
            RuleSpec::Pcr6,
            RuleSpec::YamadaFirst,
            RuleSpec::Mixed(DeltaPolicy::Overlap),
            RuleSpec::Cbc(LambdaPolicy::Cardinality),
        ]
    }

    /// Rules defined pairwise only.
    pub fn needs_two_sources(&self) -> bool {
        matches!(
            self,
            RuleSpec::Pcr5 | RuleSpec::YamadaFirst | RuleSpec::Mixed(_) | RuleSpec::Cbc(_)
        )
    }

    pub fn apply(&self, sources: &[MassFunction]) -> Result<RuleOutput> {
        if self.needs_two_sources() && sources.len() != 2 {
            return Err(Error::ArityError {
                rule: self.name().to_owned(),
                got: sources.len(),
            });
        }
        Ok(match self {
            RuleSpec::Conjunctive => RuleOutput::Subnormal(combine_conjunctive(sources)?),
            RuleSpec::Disjunctive => RuleOutput::Normalized(combine_disjunctive(sources)?),
            RuleSpec::Dempster => RuleOutput::Normalized(combine_dempster(sources)?),
            RuleSpec::Pcr5 => RuleOutput::Normalized(combine_pcr5(&sources[0], &sources[1])?),
            RuleSpec::Pcr6 => RuleOutput::Normalized(combine_pcr6(sources)?),
            RuleSpec::YamadaFirst => {
                RuleOutput::Normalized(combine_yamada_first(&sources[0], &sources[1])?)
            }
            RuleSpec::Mixed(delta) => {
                RuleOutput::Normalized(combine_mixed(&sources[0], &sources[1], delta)?)
            }
            RuleSpec::Cbc(lambda) => {
                RuleOutput::Normalized(combine_yamada_cbc(&sources[0], &sources[1], lambda)?)
            }
        })
    }
}
