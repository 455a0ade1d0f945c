//! Frame of discernment and power-set subset algebra.
//!
//! A [`Frame`] is an ordered set of mutually exclusive hypothesis labels.
//! Subsets of the frame are encoded as membership bitmasks ([`SubsetId`]):
//! bit `k` is set iff singleton `k` belongs to the subset. The frame size is
//! capped so that exhaustive power-set enumeration stays tractable and every
//! mask fits in one machine word.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Upper bound on the number of singletons in a frame.
pub const MAX_FRAME_SIZE: usize = 20;

/// One element of the power set, as a membership bitmask over the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetId(u32);

impl SubsetId {
    /// The empty set.
    pub const EMPTY: SubsetId = SubsetId(0);

    pub fn from_bits(bits: u32) -> Self {
        SubsetId(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn intersect(self, other: SubsetId) -> SubsetId {
        SubsetId(self.0 & other.0)
    }

    pub fn union(self, other: SubsetId) -> SubsetId {
        SubsetId(self.0 | other.0)
    }

    /// Set difference `self \ other` (relative complement, frame-free).
    pub fn difference(self, other: SubsetId) -> SubsetId {
        SubsetId(self.0 & !other.0)
    }

    /// Number of member singletons.
    pub fn cardinality(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersects(self, other: SubsetId) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_subset_of(self, other: SubsetId) -> bool {
        self.0 & other.0 == self.0
    }

    pub fn contains_singleton(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }
}

impl fmt::Display for SubsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{mask {:#b}}}", self.0)
    }
}

/// Ordered frame of discernment: distinct, non-empty hypothesis labels.
///
/// Input label order is preserved and defines both the bit positions of
/// [`SubsetId`] masks and the tie-break order for decisions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    labels: Vec<String>,
}

impl Frame {
    /// Builds a frame from distinct labels. Fails with [`Error::FrameTooLarge`]
    /// outside `1..=MAX_FRAME_SIZE`, [`Error::DuplicateLabel`] on repeats and
    /// [`Error::EmptyLabel`] on blank names.
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() || labels.len() > MAX_FRAME_SIZE {
            return Err(Error::FrameTooLarge(labels.len()));
        }
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Frame { labels })
    }

    /// Number of singletons `n`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a frame always has at least one label
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    /// The full set Θ, mask `2^n - 1`.
    pub fn full_set(&self) -> SubsetId {
        SubsetId((1u32 << self.labels.len()) - 1)
    }

    /// The singleton holding only label `index`.
    pub fn singleton(&self, index: usize) -> SubsetId {
        debug_assert!(index < self.labels.len());
        SubsetId(1 << index)
    }

    /// Whether `subset` is a valid member of this frame's power set.
    pub fn contains(&self, subset: SubsetId) -> bool {
        subset.0 < 1u32 << self.labels.len()
    }

    pub fn check_subset(&self, subset: SubsetId) -> Result<()> {
        if self.contains(subset) {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }

    /// Complement with respect to Θ.
    pub fn complement(&self, subset: SubsetId) -> Result<SubsetId> {
        self.check_subset(subset)?;
        Ok(SubsetId(!subset.0 & self.full_set().0))
    }

    /// Resolves a list of labels into a subset mask.
    pub fn subset_of_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<SubsetId> {
        let mut bits = 0u32;
        for label in labels {
            let idx = self
                .labels
                .iter()
                .position(|l| l == label.as_ref())
                .ok_or_else(|| Error::UnknownLabel(label.as_ref().to_owned()))?;
            bits |= 1 << idx;
        }
        Ok(SubsetId(bits))
    }

    /// All `2^n` subsets in ascending mask order.
    pub fn subsets(&self) -> impl Iterator<Item = SubsetId> {
        (0..1u32 << self.labels.len()).map(SubsetId)
    }

    /// All singletons in label order.
    pub fn singletons(&self) -> impl Iterator<Item = SubsetId> {
        (0..self.labels.len()).map(|i| SubsetId(1 << i))
    }

    /// Renders a subset as `+`-joined labels in frame order; Θ renders as
    /// `Theta` and the empty set as `Empty`.
    pub fn render_subset(&self, subset: SubsetId) -> String {
        if subset.is_empty() {
            return "Empty".to_owned();
        }
        if subset == self.full_set() {
            return "Theta".to_owned();
        }
        let mut out = String::new();
        for (i, label) in self.labels.iter().enumerate() {
            if subset.contains_singleton(i) {
                if !out.is_empty() {
                    out.push('+');
                }
                out.push_str(label);
            }
        }
        out
    }

    /// Convenience for tests and examples: frame shared behind an [`Arc`].
    pub fn shared<I, S>(labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Ok(Arc::new(Self::new(labels)?))
    }
}
