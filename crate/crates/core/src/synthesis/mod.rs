//! Synthesis rules for sound free-choice workflow nets.
//!
//! Four rules add nodes to a net: abstraction (ψ_A) and its dual (ψ_D)
//! insert a place/transition pair into existing arcs, while the linear
//! dependent place and transition rules (ψ_P, ψ_T) add a single node whose
//! incidence row or column is a rational combination of the existing ones in
//! the short-circuited net. The extended place rule (ψ'_P) follows ψ_P by an
//! abstraction on the new place so that a labeled transition is added.

mod enumerate;
pub mod linalg;
pub(crate) mod rules;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::eventlog::Activity;
use crate::net::{LabeledNet, NodeId, PlaceId, StructureError, TransitionId};

pub use enumerate::{base_candidates, enumerate_applications, BaseCandidate, EnumerationCaps};
pub use linalg::{is_linearly_dependent_place, is_linearly_dependent_transition, DimensionMismatch};
pub use rules::{
    apply_abstraction, apply_dual_abstraction, apply_extended_place_rule, apply_place_rule,
    apply_transition_rule, Applied, HostContext,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    Abstraction,
    DualAbstraction,
    Place,
    Transition,
    ExtendedPlace,
}

/// One rule instance on a host net.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleApplication {
    /// ψ_A: arcs `R×S` are rerouted through a fresh place and transition.
    Abstraction { transitions: BTreeSet<TransitionId>, places: BTreeSet<PlaceId>, label: Option<Activity> },
    /// ψ_D: arcs `S×R` are rerouted through a fresh transition and place.
    DualAbstraction { places: BTreeSet<PlaceId>, transitions: BTreeSet<TransitionId>, label: Option<Activity> },
    /// ψ_P: a place with the given input and output transitions.
    Place { preset: BTreeSet<TransitionId>, postset: BTreeSet<TransitionId> },
    /// ψ_T: a transition with the given input and output places.
    Transition { preset: BTreeSet<PlaceId>, postset: BTreeSet<PlaceId>, label: Option<Activity> },
    /// ψ'_P: ψ_P followed by ψ_A between the new place and its preset.
    ExtendedPlace { preset: BTreeSet<TransitionId>, postset: BTreeSet<TransitionId>, label: Option<Activity> },
}

impl RuleApplication {
    pub fn kind(&self) -> RuleKind {
        match self {
            RuleApplication::Abstraction { .. } => RuleKind::Abstraction,
            RuleApplication::DualAbstraction { .. } => RuleKind::DualAbstraction,
            RuleApplication::Place { .. } => RuleKind::Place,
            RuleApplication::Transition { .. } => RuleKind::Transition,
            RuleApplication::ExtendedPlace { .. } => RuleKind::ExtendedPlace,
        }
    }

    pub fn label(&self) -> Option<&Activity> {
        match self {
            RuleApplication::Abstraction { label, .. }
            | RuleApplication::DualAbstraction { label, .. }
            | RuleApplication::Transition { label, .. }
            | RuleApplication::ExtendedPlace { label, .. } => label.as_ref(),
            RuleApplication::Place { .. } => None,
        }
    }

    /// Node sets adjacent to the new nodes, by name.
    pub fn record(&self, net: &LabeledNet) -> RuleRecord {
        fn names<I: IntoIterator<Item = NodeId>>(net: &LabeledNet, it: I) -> Vec<String> {
            it.into_iter().map(|x| net.node_name(x).to_string()).collect()
        }
        let (preset, postset) = match self {
            RuleApplication::Abstraction { transitions, places, .. } => (
                names(net, transitions.iter().map(|t| NodeId::from(*t))),
                names(net, places.iter().map(|p| NodeId::from(*p))),
            ),
            RuleApplication::DualAbstraction { places, transitions, .. } => (
                names(net, places.iter().map(|p| NodeId::from(*p))),
                names(net, transitions.iter().map(|t| NodeId::from(*t))),
            ),
            RuleApplication::Place { preset, postset }
            | RuleApplication::ExtendedPlace { preset, postset, .. } => (
                names(net, preset.iter().map(|t| NodeId::from(*t))),
                names(net, postset.iter().map(|t| NodeId::from(*t))),
            ),
            RuleApplication::Transition { preset, postset, .. } => (
                names(net, preset.iter().map(|p| NodeId::from(*p))),
                names(net, postset.iter().map(|p| NodeId::from(*p))),
            ),
        };
        RuleRecord { rule: self.kind(), preset, postset, label: self.label().map(|a| a.to_string()) }
    }
}

/// Serializable description of a rule application. For the abstraction
/// rules `preset`/`postset` are the node sets feeding and fed by the new
/// place-transition pair; otherwise they are the new node's neighbors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleRecord {
    pub rule: RuleKind,
    pub preset: Vec<String>,
    pub postset: Vec<String>,
    pub label: Option<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("the rule needs a non-empty node relation")]
    EmptyRelation,
    #[error("node is not part of the net or has the wrong kind")]
    UnknownNode,
    #[error("arc {0} -> {1} is not in the net")]
    MissingArc(String, String),
    #[error("the new node is not linearly dependent in the short-circuited net")]
    NotDependent,
    #[error("a siphon of the short-circuited net does not contain the source place")]
    SiphonWithoutSource,
    #[error("dual abstraction needs S to be the preset of R or R to be the postset of S")]
    IllegalDual,
    #[error("self-loop arcs are not allowed here")]
    SelfLoop,
    #[error("no transition is labeled `{0}`")]
    NoSuchLabel(String),
    #[error("more than one transition is labeled `{0}`")]
    AmbiguousLabel(String),
    #[error("loop construction did not terminate after rerouting")]
    LoopRecursion,
    #[error(transparent)]
    Structure(#[from] StructureError),
}
