//! Evidence combination for belief functions.
//!
//! The crate models frames of discernment with bitmask subset algebra,
//! validated basic belief assignments, and a family of combination rules:
//! the conjunctive/disjunctive/Dempster baselines, the PCR5 and PCR6
//! proportional conflict redistributions, a mixed intersection/union split,
//! and the mass-sharing compromise schemes. A brute-force pairwise oracle,
//! equivalence reports, and seeded generators support cross-checking every
//! rule and the classical identities between them (PCR5 = PCR6 for two
//! sources, sharing = PCR5 under full conflict, and so on).
//!
//! ```
//! use evcomb::{Frame, MassFunction, MassAssignment, rules};
//!
//! let frame = Frame::shared(["rain", "sun"]).unwrap();
//! let gloomy = MassFunction::new(
//!     frame.clone(),
//!     [(frame.singleton(0), 0.7), (frame.full_set(), 0.3)],
//! )
//! .unwrap();
//! let sunny = MassFunction::new(
//!     frame.clone(),
//!     [(frame.singleton(1), 0.6), (frame.full_set(), 0.4)],
//! )
//! .unwrap();
//! let fused = rules::combine_pcr5(&gloomy, &sunny).unwrap();
//! assert!((fused.total_mass() - 1.0).abs() < 1e-12);
//! ```

pub mod checks;
pub mod doc;
pub mod error;
pub mod frame;
pub mod mass;
pub mod reference;
pub mod render;
pub mod rules;
pub mod scenarios;

pub use error::{Error, Result};
pub use frame::{Frame, SubsetId, MAX_FRAME_SIZE};
pub use mass::{MassAssignment, MassFunction, SubnormalMass, NORMALIZATION_TOL};
pub use rules::{DeltaPolicy, LambdaPolicy, RuleOutput, RuleSpec};
pub use scenarios::{comparison_report, zadeh_scenario, FusionReport, Scenario};
