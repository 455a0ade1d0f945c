//! Basic belief assignments and the belief/plausibility measures.
//!
//! [`MassFunction`] is a validated, normal BBA: strictly positive masses on
//! non-empty focal subsets, summing to one. [`SubnormalMass`] is the output
//! kind of the raw conjunctive rule, where the empty set may carry the
//! conflict mass; keeping it a distinct type preserves the "no mass on ∅"
//! invariant for every other rule at the type level.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frame::{Frame, SubsetId};

/// Tolerance on the input mass sum before exact renormalization.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Read access shared by [`MassFunction`] and [`SubnormalMass`].
///
/// Belief and plausibility are provided methods; both ignore any mass on
/// the empty set, which makes them meaningful for subnormal assignments
/// as well.
pub trait MassAssignment {
    fn frame(&self) -> &Frame;

    /// Focal entries in ascending mask order.
    fn entries(&self) -> &BTreeMap<SubsetId, f64>;

    fn mass(&self, subset: SubsetId) -> f64 {
        self.entries().get(&subset).copied().unwrap_or(0.0)
    }

    fn total_mass(&self) -> f64 {
        self.entries().values().sum()
    }

    /// Sum of masses of non-empty focal subsets of `subset`.
    fn belief(&self, subset: SubsetId) -> Result<f64> {
        self.frame().check_subset(subset)?;
        Ok(self
            .entries()
            .iter()
            .filter(|(b, _)| !b.is_empty() && b.is_subset_of(subset))
            .map(|(_, m)| m)
            .sum())
    }

    /// Sum of masses of focal subsets intersecting `subset`.
    fn plausibility(&self, subset: SubsetId) -> Result<f64> {
        self.frame().check_subset(subset)?;
        Ok(self
            .entries()
            .iter()
            .filter(|(b, _)| b.intersects(subset))
            .map(|(_, m)| m)
            .sum())
    }

    fn bel_pl(&self, subset: SubsetId) -> Result<(f64, f64)> {
        Ok((self.belief(subset)?, self.plausibility(subset)?))
    }

    /// The singleton with maximal belief; ties break to the earliest label.
    fn max_belief_decision(&self) -> SubsetId {
        let mut best = self.frame().singleton(0);
        let mut best_bel = self.mass(best);
        for s in self.frame().singletons().skip(1) {
            let bel = self.mass(s); // bel of a singleton is its own mass
            if bel > best_bel {
                best = s;
                best_bel = bel;
            }
        }
        best
    }
}

/// A validated normal basic belief assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    frame: Arc<Frame>,
    entries: BTreeMap<SubsetId, f64>,
}

impl MassFunction {
    /// Validates and builds a BBA.
    ///
    /// Duplicate subsets are merged by summation. Each entry must carry a
    /// strictly positive mass on a non-empty subset of the frame, and the
    /// merged masses must sum to one within [`NORMALIZATION_TOL`]; the stored
    /// masses are then renormalized by the actual sum so downstream
    /// arithmetic starts from an exact unit total.
    pub fn new(
        frame: impl Into<Arc<Frame>>,
        entries: impl IntoIterator<Item = (SubsetId, f64)>,
    ) -> Result<Self> {
        let frame = frame.into();
        let mut merged: BTreeMap<SubsetId, f64> = BTreeMap::new();
        for (subset, mass) in entries {
            if mass <= 0.0 || !mass.is_finite() {
                return Err(Error::NonPositiveMass(mass));
            }
            if subset.is_empty() {
                return Err(Error::EmptyFocal);
            }
            frame.check_subset(subset)?;
            *merged.entry(subset).or_insert(0.0) += mass;
        }
        let sum: f64 = merged.values().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(sum));
        }
        for mass in merged.values_mut() {
            *mass /= sum;
        }
        Ok(MassFunction {
            frame,
            entries: merged,
        })
    }

    /// The vacuous BBA: all mass on Θ.
    pub fn vacuous(frame: impl Into<Arc<Frame>>) -> Self {
        let frame = frame.into();
        let full = frame.full_set();
        MassFunction {
            frame,
            entries: BTreeMap::from([(full, 1.0)]),
        }
    }

    /// Rule-output constructor: trusts the caller on normalization, drops
    /// zero entries so focal status stays structural.
    pub(crate) fn from_combination(frame: Arc<Frame>, entries: BTreeMap<SubsetId, f64>) -> Self {
        let entries: BTreeMap<SubsetId, f64> =
            entries.into_iter().filter(|(_, m)| *m > 0.0).collect();
        debug_assert!(entries.keys().all(|s| !s.is_empty()));
        debug_assert!((entries.values().sum::<f64>() - 1.0).abs() < 1e-6);
        MassFunction { frame, entries }
    }

    pub fn frame_arc(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn focal_count(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SubsetId, f64)> + '_ {
        self.entries.iter().map(|(s, m)| (*s, *m))
    }
}

impl MassAssignment for MassFunction {
    fn frame(&self) -> &Frame {
        &self.frame
    }

    fn entries(&self) -> &BTreeMap<SubsetId, f64> {
        &self.entries
    }
}

/// A conjunctive-combination output: a mass assignment that may hold
/// conflict mass on the empty set.
#[derive(Debug, Clone, PartialEq)]
pub struct SubnormalMass {
    frame: Arc<Frame>,
    entries: BTreeMap<SubsetId, f64>,
}

impl SubnormalMass {
    pub(crate) fn from_combination(frame: Arc<Frame>, entries: BTreeMap<SubsetId, f64>) -> Self {
        let entries: BTreeMap<SubsetId, f64> =
            entries.into_iter().filter(|(_, m)| *m > 0.0).collect();
        SubnormalMass { frame, entries }
    }

    pub fn frame_arc(&self) -> &Arc<Frame> {
        &self.frame
    }

    /// The conflict measure `k`: mass assigned to the empty set.
    pub fn conflict(&self) -> f64 {
        self.mass(SubsetId::EMPTY)
    }

    /// Dempster's normalization step: drop the empty-set mass and divide the
    /// rest by the retained total. Fails with [`Error::TotalConflict`] when
    /// the conflict is one within 1e-12.
    pub fn normalized(&self) -> Result<MassFunction> {
        let retained: f64 = self
            .entries
            .iter()
            .filter(|(s, _)| !s.is_empty())
            .map(|(_, m)| m)
            .sum();
        if retained <= 1e-12 {
            return Err(Error::TotalConflict);
        }
        let entries = self
            .entries
            .iter()
            .filter(|(s, _)| !s.is_empty())
            .map(|(s, m)| (*s, m / retained))
            .collect();
        Ok(MassFunction::from_combination(self.frame.clone(), entries))
    }

    pub fn iter(&self) -> impl Iterator<Item = (SubsetId, f64)> + '_ {
        self.entries.iter().map(|(s, m)| (*s, *m))
    }
}

impl MassAssignment for SubnormalMass {
    fn frame(&self) -> &Frame {
        &self.frame
    }

    fn entries(&self) -> &BTreeMap<SubsetId, f64> {
        &self.entries
    }
}
