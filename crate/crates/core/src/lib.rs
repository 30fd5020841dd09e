//! Deterministic scoring of how unexpected a described scenario is.
//!
//! A scenario is a structured description of one or more events: who was
//! involved, which feature values held, where and when things happened, and
//! optionally which causal hypotheses could tie them together. Two cost
//! machines replay the description. The world machine prices generating it
//! as a sequence of independent draws from a declared world model; the
//! observation machine prices the cheapest faithful retelling, free to
//! reuse, relate, and rank. The unexpectedness `U` is the gap between the
//! two minima, in bits, and `2^-U` is the probability a listener
//! intuitively assigns to the story.
//!
//! ```
//! use complexity_drop::{unexpectedness, Scenario};
//!
//! let text = r#"{
//!   "world": {
//!     "area_s_km2": 1e6,
//!     "time_window_h": 8760,
//!     "population_density_per_km2": 100
//!   },
//!   "events": [{
//!     "id": "reading",
//!     "features": [{ "name": "odometer", "value": { "digits": "66666" } }]
//!   }],
//!   "observer": {
//!     "identity": "ego",
//!     "home": { "x_km": 0, "y_km": 0, "resolution_a_km": 1 }
//!   }
//! }"#;
//! let scenario: Scenario = serde_json::from_str(text).unwrap();
//! let report = unexpectedness(&scenario).unwrap();
//! assert!((report.u_bits - 13.2877).abs() < 1e-3);
//! ```
//!
//! The `parallel` feature (on by default) runs the heavy searches over a
//! rayon pool; disable it for a fully sequential build with identical
//! results.

pub mod codec;
pub mod error;
pub mod machine;
pub mod oracle;
pub mod scenario;
pub mod score;
pub mod sequence;

pub use error::{Error, Result};
pub use machine::{
    canonical_observation_sequence, chain_cost, min_cost, min_cost_by_enumeration, CostBreakdown,
    CostEntry, MachineKind, MinCost, MIN_COST_ATOM_BOUND,
};
pub use scenario::{validate_scenario, Observer, ObserverIdentity, Scenario, Violation};
pub use score::{
    causal_filter, cognitive_probability, coincidence_score, encounter_score, explain,
    observer_adjusted, shannon_baseline, unexpectedness, weaver_baseline, CausalFilterReport,
    CoincidenceScore, Explanation, ScoreReport,
};
pub use sequence::{
    enumerate_sequences, scenario_atoms, Atom, AtomPayload, ComputationSequence,
    DEFAULT_ENUMERATION_BOUND,
};

/// Bit counts flow through the crate as plain `f64`.
pub type Bits = f64;
