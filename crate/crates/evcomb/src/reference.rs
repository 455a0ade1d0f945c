//! Brute-force oracle engine and deterministic input generators.
//!
//! The oracle is intentionally a second, structurally different
//! implementation of the pairwise rules: a closure-driven double loop over
//! focal pairs, checked per pair for mass conservation. Agreement between a
//! rule and its oracle is therefore meaningful evidence, not a tautology.
//!
//! Generators use a self-contained splitmix64 stream so that test vectors
//! are reproducible across runs and across language ports.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frame::{Frame, SubsetId};
use crate::mass::{MassAssignment, MassFunction, SubnormalMass};
use crate::rules::{DeltaPolicy, LambdaPolicy};

/// splitmix64: 64-bit state advanced by the golden-gamma constant, output
/// mixed by two xor-shift-multiply rounds. Fixed constants make the stream
/// portable: state += 0x9E3779B97F4A7C15; z ^= z>>30, z *= 0xBF58476D1CE4E5B9;
/// z ^= z>>27, z *= 0x94D049BB133111EB; z ^= z>>31.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `(0, 1]`: the top 53 bits plus one, scaled by 2⁻⁵³.
    pub fn next_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform draw in `0..bound` by masked rejection; `bound` must be > 0.
    /// A bound of one returns zero without consuming a draw.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        if bound == 1 {
            return 0;
        }
        let mask = u64::MAX >> (bound - 1).leading_zeros();
        loop {
            let v = self.next_u64() & mask;
            if v < bound {
                return v;
            }
        }
    }
}

/// Share list produced by a transfer for one focal pair.
pub type Shares = Vec<(SubsetId, f64)>;

type TransferImpl = Box<dyn Fn(SubsetId, SubsetId, f64) -> Shares + Send + Sync>;

/// A pairwise mass transfer: maps a focal pair `(x, y)` and its product mass
/// `p` to a list of shares. Shares must sum to `p` within 1e-15, and may
/// target the empty set only if the transfer declares it.
pub struct TransferFn {
    name: &'static str,
    allows_empty: bool,
    f: TransferImpl,
}

impl std::fmt::Debug for TransferFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TransferFn")
            .field("name", &self.name)
            .field("allows_empty", &self.allows_empty)
            .finish()
    }
}

impl TransferFn {
    pub fn new(
        name: &'static str,
        allows_empty: bool,
        f: impl Fn(SubsetId, SubsetId, f64) -> Shares + Send + Sync + 'static,
    ) -> Self {
        TransferFn {
            name,
            allows_empty,
            f: Box::new(f),
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn allows_empty(&self) -> bool {
        self.allows_empty
    }

    pub fn shares(&self, x: SubsetId, y: SubsetId, p: f64) -> Shares {
        (self.f)(x, y, p)
    }

    /// Everything to `x∩y`, conflict landing on the empty set.
    pub fn conjunctive() -> Self {
        Self::new("conjunctive", true, |x, y, p| vec![(x.intersect(y), p)])
    }

    /// Everything to `x∪y`.
    pub fn disjunctive() -> Self {
        Self::new("disjunctive", false, |x, y, p| vec![(x.union(y), p)])
    }

    /// The two-way proportional split applied to every pair. Needs the
    /// per-source masses, so it captures copies of both inputs.
    pub fn yamada_first(m1: &MassFunction, m2: &MassFunction) -> Self {
        let (a, b) = (m1.entries().clone(), m2.entries().clone());
        Self::new("yamada1", false, move |x, y, _p| {
            let (mx, my) = (a[&x], b[&y]);
            let denom = mx + my;
            vec![(x, mx * mx * my / denom), (y, mx * my * my / denom)]
        })
    }

    /// Conjunctive transfer for agreeing pairs, two-way proportional split
    /// for conflicting ones.
    pub fn pcr5(m1: &MassFunction, m2: &MassFunction) -> Self {
        let (a, b) = (m1.entries().clone(), m2.entries().clone());
        Self::new("pcr5", false, move |x, y, p| {
            let c = x.intersect(y);
            if c.is_empty() {
                let (mx, my) = (a[&x], b[&y]);
                let denom = mx + my;
                vec![(x, mx * mx * my / denom), (y, mx * my * my / denom)]
            } else {
                vec![(c, p)]
            }
        })
    }

    /// The δ-weighted intersection/union split, conflict going wholly to the
    /// union.
    pub fn mixed(delta: DeltaPolicy) -> Self {
        Self::new("mixed", false, move |x, y, p| {
            let c = x.intersect(y);
            let u = x.union(y);
            if c.is_empty() {
                return vec![(u, p)];
            }
            let d = delta.delta(x, y).expect("delta policy failed");
            vec![(c, d * p), (u, (1.0 - d) * p)]
        })
    }

    /// The three-way λ split among `x∩y`, `x\y`, `y\x`, falling back to the
    /// two-way proportional split when the intersection is empty.
    pub fn cbc(m1: &MassFunction, m2: &MassFunction, lambda: LambdaPolicy) -> Self {
        let (a, b) = (m1.entries().clone(), m2.entries().clone());
        Self::new("cbc", false, move |x, y, p| {
            let c = x.intersect(y);
            if c.is_empty() {
                let (mx, my) = (a[&x], b[&y]);
                let denom = mx + my;
                return vec![(x, mx * mx * my / denom), (y, mx * my * my / denom)];
            }
            let (l1, l2, l3) = lambda.weights(x, y).expect("lambda policy failed");
            [
                (c, l1 * p),
                (x.difference(y), l2 * p),
                (y.difference(x), l3 * p),
            ]
            .into_iter()
            .filter(|(_, share)| *share != 0.0)
            .collect()
        })
    }
}

/// Per-pair conservation tolerance enforced on every transfer.
pub const TRANSFER_CONSERVATION_TOL: f64 = 1e-15;

/// Naive double loop over all focal pairs, applying `transfer` to each pair
/// product and accumulating the shares. The independent implementation that
/// every pairwise rule is checked against.
pub fn oracle_pairwise_combine(
    m1: &MassFunction,
    m2: &MassFunction,
    transfer: &TransferFn,
) -> Result<SubnormalMass> {
    if m1.frame_arc() != m2.frame_arc() {
        return Err(Error::FrameMismatch);
    }
    let mut out: BTreeMap<SubsetId, f64> = BTreeMap::new();
    for (x, mx) in m1.iter() {
        for (y, my) in m2.iter() {
            let p = mx * my;
            let shares = transfer.shares(x, y, p);
            let total: f64 = shares.iter().map(|(_, s)| s).sum();
            if (total - p).abs() > TRANSFER_CONSERVATION_TOL {
                return Err(Error::OracleContractBreach(format!(
                    "transfer `{}` shares sum to {total:e}, pair product is {p:e}",
                    transfer.name
                )));
            }
            for (subset, share) in shares {
                if share == 0.0 {
                    continue;
                }
                if subset.is_empty() && !transfer.allows_empty {
                    return Err(Error::OracleContractBreach(format!(
                        "transfer `{}` put mass {share:e} on the empty set",
                        transfer.name
                    )));
                }
                *out.entry(subset).or_insert(0.0) += share;
            }
        }
    }
    Ok(SubnormalMass::from_combination(m1.frame_arc().clone(), out))
}

/// Outcome of comparing two mass assignments at a tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub max_abs_diff: f64,
    pub offending_subset: Option<SubsetId>,
    pub tolerance: f64,
    pub pass: bool,
}

/// Maximum absolute per-subset difference between two assignments, with
/// absent entries read as zero. `pass` iff the maximum is within `tol`.
pub fn equivalence_report(
    a: &dyn MassAssignment,
    b: &dyn MassAssignment,
    tol: f64,
) -> Result<EquivalenceReport> {
    if a.frame() != b.frame() {
        return Err(Error::FrameMismatch);
    }
    let keys: BTreeSet<SubsetId> = a
        .entries()
        .keys()
        .chain(b.entries().keys())
        .copied()
        .collect();
    let mut max_abs_diff = 0.0f64;
    let mut offending_subset = None;
    for key in keys {
        let diff = (a.mass(key) - b.mass(key)).abs();
        if diff > max_abs_diff {
            max_abs_diff = diff;
            offending_subset = Some(key);
        }
    }
    Ok(EquivalenceReport {
        max_abs_diff,
        offending_subset,
        tolerance: tol,
        pass: max_abs_diff <= tol,
    })
}

/// Deterministic random BBA: `n_focal` distinct non-empty subsets sampled
/// uniformly by rejection, masses from normalized positive uniform draws.
pub fn random_bba(frame: &Arc<Frame>, n_focal: usize, seed: u64) -> Result<MassFunction> {
    let max = (1usize << frame.len()) - 1;
    if n_focal == 0 || n_focal > max {
        return Err(Error::BadFocalCount {
            requested: n_focal,
            max,
        });
    }
    let mut rng = SplitMix64::new(seed);
    let mut seen = BTreeSet::new();
    let mut subsets = Vec::with_capacity(n_focal);
    while subsets.len() < n_focal {
        let mask = 1 + rng.below(max as u64) as u32;
        if seen.insert(mask) {
            subsets.push(SubsetId::from_bits(mask));
        }
    }
    let draws: Vec<f64> = (0..n_focal).map(|_| rng.next_f64()).collect();
    let total: f64 = draws.iter().sum();
    let entries = subsets.into_iter().zip(draws).map(|(s, d)| (s, d / total));
    MassFunction::new(frame.clone(), entries)
}

/// Deterministic fully-conflicting sources: the frame's singletons are
/// partitioned into `count` non-empty pools and each source's focal elements
/// are drawn from its own pool, so every cross-source focal pair is disjoint.
pub fn random_disjoint_sources(
    frame: &Arc<Frame>,
    count: usize,
    seed: u64,
) -> Result<Vec<MassFunction>> {
    let n = frame.len();
    if n < count {
        return Err(Error::FrameTooSmall { n, needed: count });
    }
    let mut rng = SplitMix64::new(seed);

    // Fisher-Yates shuffle of the singleton indices.
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        order.swap(i, j);
    }
    // One guaranteed singleton per pool, the rest assigned at random.
    let mut pools = vec![0u32; count];
    for (k, pool) in pools.iter_mut().enumerate() {
        *pool |= 1 << order[k];
    }
    for &idx in &order[count..] {
        pools[rng.below(count as u64) as usize] |= 1 << idx;
    }

    let mut sources = Vec::with_capacity(count);
    for pool in pools {
        let positions: Vec<u32> = (0..n as u32).filter(|i| pool >> i & 1 == 1).collect();
        let pool_max = (1u64 << positions.len()) - 1;
        let n_focal = 1 + rng.below(pool_max.min(8)) as usize;
        let mut seen = BTreeSet::new();
        let mut subsets = Vec::with_capacity(n_focal);
        while subsets.len() < n_focal {
            let compact = 1 + rng.below(pool_max) as u32;
            if !seen.insert(compact) {
                continue;
            }
            let mut mask = 0u32;
            for (bit, pos) in positions.iter().enumerate() {
                if compact >> bit & 1 == 1 {
                    mask |= 1 << pos;
                }
            }
            subsets.push(SubsetId::from_bits(mask));
        }
        let draws: Vec<f64> = (0..n_focal).map(|_| rng.next_f64()).collect();
        let total: f64 = draws.iter().sum();
        let entries = subsets.into_iter().zip(draws).map(|(s, d)| (s, d / total));
        sources.push(MassFunction::new(frame.clone(), entries)?);
    }
    Ok(sources)
}

/// Two-source specialization of [`random_disjoint_sources`].
pub fn random_disjoint_pair(frame: &Arc<Frame>, seed: u64) -> Result<(MassFunction, MassFunction)> {
    let mut pair = random_disjoint_sources(frame, 2, seed)?;
    let second = pair.pop().expect("two sources");
    let first = pair.pop().expect("two sources");
    Ok((first, second))
}
