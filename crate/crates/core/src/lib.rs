//! Process discovery by synthesis rules.
//!
//! Starting from the initial workflow net, activities are added one at a time.
//! Each increment is a single application of a free-choice synthesis rule,
//! optionally followed by a skip or loop pattern, restricted to the region of
//! the net that log heuristics consider relevant. Candidates are scored with
//! alignment-based fitness and escaping-edges precision, so every net the
//! engine produces is a sound free-choice workflow net.
//!
//! The main entry point is [`discovery::discover`].

pub mod conformance;
pub mod discovery;
pub mod eventlog;
pub mod net;
pub mod patterns;
pub mod synthesis;
pub mod rational;

#[cfg(any(test, feature = "testkit"))]
pub mod testkit;

pub use conformance::{
    evaluate, f1, fitness, optimal_alignment, precision, Alignment, ConformanceError, Move, MoveKind, Score,
};
pub use discovery::{
    discover, ActivityOrder, DiscoveryConfig, DiscoveryError, DiscoveryResult, IterationRecord, Ordering,
};
pub use eventlog::{Activity, CausalThreshold, EventLog, Trace};
pub use net::{
    initial_net, LabeledNet, Marking, NodeId, PlaceId, TransitionId, WorkflowNet, WorkflowRoles,
};
pub use patterns::{CandidateNet, PatternTag};
pub use rational::Rational;
pub use synthesis::{EnumerationCaps, RuleApplication, RuleError, RuleKind};
