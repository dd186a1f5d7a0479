//! Labeled Petri nets and workflow nets.
//!
//! Nodes carry stable ids that survive cloning and rule applications, and a
//! human-readable name. Fresh nodes are named `p_<k>` / `t_<k>` with `k`
//! derived from the current node count, so nets built step by step from the
//! initial net get the familiar `p_2`, `t_1`, ... names.

pub mod canonical;
pub(crate) mod compiled;
pub mod dot;
mod incidence;
mod paths;
pub mod pnml;
mod semantics;
mod siphon;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::eventlog::Activity;

pub use incidence::{incidence, IncidenceMatrix};
pub use paths::{elementary_path_nodes, elementary_path_nodes_with_budget, PATH_SEARCH_BUDGET};
pub use semantics::{
    check_soundness, enabled, fire, is_sound, Inconclusive, Marking, SoundnessVerdict,
    DEFAULT_STATE_CAP,
};
pub use siphon::max_siphon_within;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PlaceId(pub(crate) u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TransitionId(pub(crate) u32);

/// A place or a transition. Places order before transitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NodeId {
    Place(PlaceId),
    Transition(TransitionId),
}

impl From<PlaceId> for NodeId {
    fn from(p: PlaceId) -> Self {
        NodeId::Place(p)
    }
}

impl From<TransitionId> for NodeId {
    fn from(t: TransitionId) -> Self {
        NodeId::Transition(t)
    }
}

impl NodeId {
    pub fn as_place(self) -> Option<PlaceId> {
        match self {
            NodeId::Place(p) => Some(p),
            NodeId::Transition(_) => None,
        }
    }

    pub fn as_transition(self) -> Option<TransitionId> {
        match self {
            NodeId::Transition(t) => Some(t),
            NodeId::Place(_) => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetError {
    #[error("arc must connect a place and a transition")]
    NotBipartite,
    #[error("unknown node")]
    UnknownNode,
    #[error("duplicate node name `{0}`")]
    DuplicateName(String),
    #[error("transition `{0}` is not enabled")]
    NotEnabled(String),
}

#[derive(Clone, Debug)]
struct PlaceData {
    name: String,
    inputs: BTreeSet<TransitionId>,
    outputs: BTreeSet<TransitionId>,
}

#[derive(Clone, Debug)]
struct TransitionData {
    name: String,
    label: Option<Activity>,
    inputs: BTreeSet<PlaceId>,
    outputs: BTreeSet<PlaceId>,
}

/// A Petri net whose transitions may carry activity labels; unlabeled
/// transitions are silent.
#[derive(Clone, Debug, Default)]
pub struct LabeledNet {
    places: BTreeMap<PlaceId, PlaceData>,
    transitions: BTreeMap<TransitionId, TransitionData>,
    next_id: u32,
}

impl LabeledNet {
    pub fn new() -> Self {
        Self::default()
    }

    fn name_taken(&self, name: &str) -> bool {
        self.places.values().any(|p| p.name == name)
            || self.transitions.values().any(|t| t.name == name)
    }

    pub fn add_place(&mut self, name: impl Into<String>) -> Result<PlaceId, NetError> {
        let name = name.into();
        if self.name_taken(&name) {
            return Err(NetError::DuplicateName(name));
        }
        let id = PlaceId(self.next_id);
        self.next_id += 1;
        self.places.insert(
            id,
            PlaceData { name, inputs: BTreeSet::new(), outputs: BTreeSet::new() },
        );
        Ok(id)
    }

    pub fn add_transition(
        &mut self,
        name: impl Into<String>,
        label: Option<Activity>,
    ) -> Result<TransitionId, NetError> {
        let name = name.into();
        if self.name_taken(&name) {
            return Err(NetError::DuplicateName(name));
        }
        let id = TransitionId(self.next_id);
        self.next_id += 1;
        self.transitions.insert(
            id,
            TransitionData { name, label, inputs: BTreeSet::new(), outputs: BTreeSet::new() },
        );
        Ok(id)
    }

    fn fresh_name(&self, prefix: &str, mut k: usize) -> String {
        loop {
            let name = format!("{prefix}_{k}");
            if !self.name_taken(&name) {
                return name;
            }
            k += 1;
        }
    }

    /// Adds a place named `p_<k>`, `k` = number of places minus one.
    pub fn add_fresh_place(&mut self) -> PlaceId {
        let name = self.fresh_name("p", self.places.len().saturating_sub(1));
        self.add_place(name).expect("fresh name")
    }

    /// Adds a transition named `t_<k>`, `k` = number of transitions minus one.
    pub fn add_fresh_transition(&mut self, label: Option<Activity>) -> TransitionId {
        let name = self.fresh_name("t", self.transitions.len().saturating_sub(1));
        self.add_transition(name, label).expect("fresh name")
    }

    pub fn add_arc(&mut self, from: NodeId, to: NodeId) -> Result<(), NetError> {
        match (from, to) {
            (NodeId::Place(p), NodeId::Transition(t)) => self.add_input_arc(p, t),
            (NodeId::Transition(t), NodeId::Place(p)) => self.add_output_arc(t, p),
            _ => Err(NetError::NotBipartite),
        }
    }

    /// Adds the arc `p -> t`.
    pub fn add_input_arc(&mut self, p: PlaceId, t: TransitionId) -> Result<(), NetError> {
        if !self.places.contains_key(&p) || !self.transitions.contains_key(&t) {
            return Err(NetError::UnknownNode);
        }
        self.places.get_mut(&p).expect("checked").outputs.insert(t);
        self.transitions.get_mut(&t).expect("checked").inputs.insert(p);
        Ok(())
    }

    /// Adds the arc `t -> p`.
    pub fn add_output_arc(&mut self, t: TransitionId, p: PlaceId) -> Result<(), NetError> {
        if !self.places.contains_key(&p) || !self.transitions.contains_key(&t) {
            return Err(NetError::UnknownNode);
        }
        self.places.get_mut(&p).expect("checked").inputs.insert(t);
        self.transitions.get_mut(&t).expect("checked").outputs.insert(p);
        Ok(())
    }

    pub fn remove_arc(&mut self, from: NodeId, to: NodeId) -> bool {
        match (from, to) {
            (NodeId::Place(p), NodeId::Transition(t)) => {
                let a = self.places.get_mut(&p).is_some_and(|d| d.outputs.remove(&t));
                let b = self.transitions.get_mut(&t).is_some_and(|d| d.inputs.remove(&p));
                a && b
            }
            (NodeId::Transition(t), NodeId::Place(p)) => {
                let a = self.places.get_mut(&p).is_some_and(|d| d.inputs.remove(&t));
                let b = self.transitions.get_mut(&t).is_some_and(|d| d.outputs.remove(&p));
                a && b
            }
            _ => false,
        }
    }

    pub fn has_arc(&self, from: NodeId, to: NodeId) -> bool {
        match (from, to) {
            (NodeId::Place(p), NodeId::Transition(t)) => {
                self.places.get(&p).is_some_and(|d| d.outputs.contains(&t))
            }
            (NodeId::Transition(t), NodeId::Place(p)) => {
                self.transitions.get(&t).is_some_and(|d| d.outputs.contains(&p))
            }
            _ => false,
        }
    }

    pub fn places(&self) -> impl Iterator<Item = PlaceId> + '_ {
        self.places.keys().copied()
    }

    pub fn transitions(&self) -> impl Iterator<Item = TransitionId> + '_ {
        self.transitions.keys().copied()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.places().map(NodeId::Place).chain(self.transitions().map(NodeId::Transition))
    }

    pub fn num_places(&self) -> usize {
        self.places.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.places.len() + self.transitions.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.transitions.values().map(|t| t.inputs.len() + t.outputs.len()).sum()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        match node {
            NodeId::Place(p) => self.places.contains_key(&p),
            NodeId::Transition(t) => self.transitions.contains_key(&t),
        }
    }

    /// All arcs, ordered by source then target.
    pub fn arcs(&self) -> Vec<(NodeId, NodeId)> {
        let mut arcs = Vec::with_capacity(self.num_arcs());
        for (p, d) in &self.places {
            arcs.extend(d.outputs.iter().map(|t| (NodeId::Place(*p), NodeId::Transition(*t))));
        }
        for (t, d) in &self.transitions {
            arcs.extend(d.outputs.iter().map(|p| (NodeId::Transition(*t), NodeId::Place(*p))));
        }
        arcs
    }

    /// `•t`
    pub fn preset(&self, t: TransitionId) -> &BTreeSet<PlaceId> {
        &self.transitions[&t].inputs
    }

    /// `t•`
    pub fn postset(&self, t: TransitionId) -> &BTreeSet<PlaceId> {
        &self.transitions[&t].outputs
    }

    /// `•p`
    pub fn place_preset(&self, p: PlaceId) -> &BTreeSet<TransitionId> {
        &self.places[&p].inputs
    }

    /// `p•`
    pub fn place_postset(&self, p: PlaceId) -> &BTreeSet<TransitionId> {
        &self.places[&p].outputs
    }

    pub fn successors(&self, node: NodeId) -> Vec<NodeId> {
        match node {
            NodeId::Place(p) => self.places[&p].outputs.iter().map(|t| (*t).into()).collect(),
            NodeId::Transition(t) => {
                self.transitions[&t].outputs.iter().map(|p| (*p).into()).collect()
            }
        }
    }

    pub fn predecessors(&self, node: NodeId) -> Vec<NodeId> {
        match node {
            NodeId::Place(p) => self.places[&p].inputs.iter().map(|t| (*t).into()).collect(),
            NodeId::Transition(t) => {
                self.transitions[&t].inputs.iter().map(|p| (*p).into()).collect()
            }
        }
    }

    pub fn label(&self, t: TransitionId) -> Option<&Activity> {
        self.transitions[&t].label.as_ref()
    }

    pub fn is_silent(&self, t: TransitionId) -> bool {
        self.transitions[&t].label.is_none()
    }

    pub fn set_label(&mut self, t: TransitionId, label: Option<Activity>) {
        if let Some(d) = self.transitions.get_mut(&t) {
            d.label = label;
        }
    }

    pub fn place_name(&self, p: PlaceId) -> &str {
        &self.places[&p].name
    }

    pub fn transition_name(&self, t: TransitionId) -> &str {
        &self.transitions[&t].name
    }

    pub fn node_name(&self, node: NodeId) -> &str {
        match node {
            NodeId::Place(p) => self.place_name(p),
            NodeId::Transition(t) => self.transition_name(t),
        }
    }

    pub fn find_place(&self, name: &str) -> Option<PlaceId> {
        self.places.iter().find(|(_, d)| d.name == name).map(|(id, _)| *id)
    }

    pub fn find_transition(&self, name: &str) -> Option<TransitionId> {
        self.transitions.iter().find(|(_, d)| d.name == name).map(|(id, _)| *id)
    }

    pub fn find_node(&self, name: &str) -> Option<NodeId> {
        self.find_place(name)
            .map(NodeId::Place)
            .or_else(|| self.find_transition(name).map(NodeId::Transition))
    }

    pub fn transitions_labeled<'a>(
        &'a self,
        label: &'a Activity,
    ) -> impl Iterator<Item = TransitionId> + 'a {
        self.transitions
            .iter()
            .filter(move |(_, d)| d.label.as_ref() == Some(label))
            .map(|(id, _)| *id)
    }

    pub fn labels(&self) -> BTreeSet<Activity> {
        self.transitions.values().filter_map(|d| d.label.clone()).collect()
    }

    /// Nodes reachable from `start` along arcs (forward) or against them.
    fn reach(&self, start: NodeId, forward: bool) -> BTreeSet<NodeId> {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let next = if forward { self.successors(x) } else { self.predecessors(x) };
            for y in next {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    pub fn reachable_from(&self, start: NodeId) -> BTreeSet<NodeId> {
        self.reach(start, true)
    }

    pub fn coreachable_to(&self, target: NodeId) -> BTreeSet<NodeId> {
        self.reach(target, false)
    }
}

/// Pairs of transitions whose presets overlap without being equal.
pub fn free_choice_violations(net: &LabeledNet) -> Vec<(TransitionId, TransitionId)> {
    let ts: Vec<TransitionId> = net.transitions().collect();
    let mut out = Vec::new();
    for (i, &a) in ts.iter().enumerate() {
        for &b in &ts[i + 1..] {
            let (pa, pb) = (net.preset(a), net.preset(b));
            if pa != pb && !pa.is_disjoint(pb) {
                out.push((a, b));
            }
        }
    }
    out
}

pub fn is_free_choice(net: &LabeledNet) -> bool {
    // transitions sharing an input place must have identical presets
    net.places.values().all(|p| {
        let mut outs = p.outputs.iter();
        match outs.next() {
            Some(first) => {
                let pre = net.preset(*first);
                outs.all(|t| net.preset(*t) == pre)
            }
            None => true,
        }
    })
}

/// Designated source/sink places and start/end transitions of a workflow net.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WorkflowRoles {
    pub source: PlaceId,
    pub sink: PlaceId,
    pub start: TransitionId,
    pub end: TransitionId,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("role refers to a node that is not in the net")]
    MissingRoleNode,
    #[error("source place `{0}` has incoming arcs")]
    SourceHasInputs(String),
    #[error("sink place `{0}` has outgoing arcs")]
    SinkHasOutputs(String),
    #[error("start transition must be the only output of the source and consume only from it")]
    BadStart,
    #[error("end transition must be the only input of the sink and produce only into it")]
    BadEnd,
    #[error("start and end transitions must be silent")]
    LabeledBoundary,
    #[error("`{0}` is not on a path from the source to the sink")]
    NotOnPath(String),
    #[error("cannot identify a unique {0}")]
    AmbiguousRole(&'static str),
    #[error("not free-choice: {}", .0.iter().map(|(a, b)| format!("({a}, {b})")).collect::<Vec<_>>().join(", "))]
    NotFreeChoice(Vec<(String, String)>),
}

/// Checks the workflow-net conditions for `net` under `roles`.
pub fn check_workflow(net: &LabeledNet, roles: &WorkflowRoles) -> Result<(), StructureError> {
    let WorkflowRoles { source, sink, start, end } = *roles;
    if !net.places.contains_key(&source)
        || !net.places.contains_key(&sink)
        || !net.transitions.contains_key(&start)
        || !net.transitions.contains_key(&end)
    {
        return Err(StructureError::MissingRoleNode);
    }
    if !net.place_preset(source).is_empty() {
        return Err(StructureError::SourceHasInputs(net.place_name(source).into()));
    }
    if !net.place_postset(sink).is_empty() {
        return Err(StructureError::SinkHasOutputs(net.place_name(sink).into()));
    }
    if net.preset(start) != &BTreeSet::from([source])
        || net.place_postset(source) != &BTreeSet::from([start])
    {
        return Err(StructureError::BadStart);
    }
    if net.postset(end) != &BTreeSet::from([sink])
        || net.place_preset(sink) != &BTreeSet::from([end])
    {
        return Err(StructureError::BadEnd);
    }
    if !net.is_silent(start) || !net.is_silent(end) {
        return Err(StructureError::LabeledBoundary);
    }
    let from_source = net.reachable_from(source.into());
    let to_sink = net.coreachable_to(sink.into());
    if let Some(x) = net.nodes().find(|x| !from_source.contains(x) || !to_sink.contains(x)) {
        return Err(StructureError::NotOnPath(net.node_name(x).into()));
    }
    Ok(())
}

pub fn is_workflow_net(net: &LabeledNet, roles: &WorkflowRoles) -> bool {
    check_workflow(net, roles).is_ok()
}

/// A labeled net together with valid workflow roles.
#[derive(Clone, Debug)]
pub struct WorkflowNet {
    net: LabeledNet,
    roles: WorkflowRoles,
}

impl WorkflowNet {
    pub fn new(net: LabeledNet, roles: WorkflowRoles) -> Result<Self, StructureError> {
        check_workflow(&net, &roles)?;
        Ok(WorkflowNet { net, roles })
    }

    /// Identifies the roles structurally: the unique place without inputs,
    /// the unique place without outputs, and their single neighbors.
    pub fn from_net(net: LabeledNet) -> Result<Self, StructureError> {
        let unique = |candidates: Vec<PlaceId>, what| match candidates.as_slice() {
            [p] => Ok(*p),
            _ => Err(StructureError::AmbiguousRole(what)),
        };
        let source =
            unique(net.places().filter(|p| net.place_preset(*p).is_empty()).collect(), "source")?;
        let sink =
            unique(net.places().filter(|p| net.place_postset(*p).is_empty()).collect(), "sink")?;
        let start = match net.place_postset(source).iter().collect::<Vec<_>>().as_slice() {
            [t] => **t,
            _ => return Err(StructureError::BadStart),
        };
        let end = match net.place_preset(sink).iter().collect::<Vec<_>>().as_slice() {
            [t] => **t,
            _ => return Err(StructureError::BadEnd),
        };
        WorkflowNet::new(net, WorkflowRoles { source, sink, start, end })
    }

    /// Builds without validation; callers re-check with [`WorkflowNet::validate`].
    pub(crate) fn from_parts_unchecked(net: LabeledNet, roles: WorkflowRoles) -> Self {
        WorkflowNet { net, roles }
    }

    pub fn validate(&self) -> Result<(), StructureError> {
        check_workflow(&self.net, &self.roles)
    }

    /// Workflow-net and free-choice conditions together.
    pub fn validate_free_choice(&self) -> Result<(), StructureError> {
        self.validate()?;
        let violations = free_choice_violations(&self.net);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(StructureError::NotFreeChoice(
                violations
                    .into_iter()
                    .map(|(a, b)| {
                        (self.net.transition_name(a).into(), self.net.transition_name(b).into())
                    })
                    .collect(),
            ))
        }
    }

    pub fn net(&self) -> &LabeledNet {
        &self.net
    }

    pub(crate) fn net_mut(&mut self) -> &mut LabeledNet {
        &mut self.net
    }

    pub fn into_net(self) -> LabeledNet {
        self.net
    }

    pub fn roles(&self) -> &WorkflowRoles {
        &self.roles
    }

    pub fn source(&self) -> PlaceId {
        self.roles.source
    }

    pub fn sink(&self) -> PlaceId {
        self.roles.sink
    }

    pub fn start(&self) -> TransitionId {
        self.roles.start
    }

    pub fn end(&self) -> TransitionId {
        self.roles.end
    }

    pub fn initial_marking(&self) -> Marking {
        Marking::from_places([self.roles.source])
    }

    pub fn final_marking(&self) -> Marking {
        Marking::from_places([self.roles.sink])
    }

    /// The unique transition labeled `a`, if there is exactly one.
    pub fn unique_transition_labeled(&self, a: &Activity) -> Option<TransitionId> {
        let mut it = self.net.transitions_labeled(a);
        match (it.next(), it.next()) {
            (Some(t), None) => Some(t),
            _ => None,
        }
    }
}

/// `p_s -> ⊤ -> p_1 -> ⊥ -> p_e` with both transitions silent.
pub fn initial_net() -> WorkflowNet {
    let mut net = LabeledNet::new();
    let source = net.add_place("p_s").expect("fresh");
    let p1 = net.add_place("p_1").expect("fresh");
    let sink = net.add_place("p_e").expect("fresh");
    let start = net.add_transition("t_start", None).expect("fresh");
    let end = net.add_transition("t_end", None).expect("fresh");
    net.add_input_arc(source, start).expect("nodes exist");
    net.add_output_arc(start, p1).expect("nodes exist");
    net.add_input_arc(p1, end).expect("nodes exist");
    net.add_output_arc(end, sink).expect("nodes exist");
    WorkflowNet::new(net, WorkflowRoles { source, sink, start, end }).expect("initial net is valid")
}

/// The short-circuited net and its feedback transition.
#[derive(Clone, Debug)]
pub struct ShortCircuit {
    pub net: LabeledNet,
    pub feedback: TransitionId,
}

/// Adds a silent transition consuming from the sink and producing into the
/// source, closing the workflow net into a cycle.
pub fn short_circuit(w: &WorkflowNet) -> ShortCircuit {
    let mut net = w.net.clone();
    let feedback = net.add_fresh_transition(None);
    net.add_input_arc(w.sink(), feedback).expect("nodes exist");
    net.add_output_arc(feedback, w.source()).expect("nodes exist");
    ShortCircuit { net, feedback }
}

impl fmt::Display for WorkflowNet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let net = &self.net;
        for (from, to) in net.arcs() {
            let show = |n: NodeId| match n {
                NodeId::Transition(t) => match net.label(t) {
                    Some(a) => format!("{}[{a}]", net.transition_name(t)),
                    None => net.transition_name(t).to_string(),
                },
                NodeId::Place(p) => net.place_name(p).to_string(),
            };
            writeln!(f, "{} -> {}", show(from), show(to))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_net_structure() {
        let w = initial_net();
        let net = w.net();
        assert_eq!(net.num_places(), 3);
        assert_eq!(net.num_transitions(), 2);
        assert_eq!(net.num_arcs(), 4);
        let p1 = net.find_place("p_1").unwrap();
        assert!(net.has_arc(w.start().into(), p1.into()));
        assert!(net.has_arc(p1.into(), w.end().into()));
        assert!(is_free_choice(net));
        assert!(is_workflow_net(net, w.roles()));
    }

    #[test]
    fn fresh_names_follow_node_counts() {
        let mut net = initial_net().into_net();
        let p = net.add_fresh_place();
        assert_eq!(net.place_name(p), "p_2");
        let t = net.add_fresh_transition(None);
        assert_eq!(net.transition_name(t), "t_1");
        let p = net.add_fresh_place();
        assert_eq!(net.place_name(p), "p_3");
    }

    #[test]
    fn partial_preset_overlap_is_not_free_choice() {
        let mut net = LabeledNet::new();
        let p1 = net.add_place("p1").unwrap();
        let p2 = net.add_place("p2").unwrap();
        let t1 = net.add_transition("t1", None).unwrap();
        let t2 = net.add_transition("t2", None).unwrap();
        net.add_input_arc(p1, t1).unwrap();
        net.add_input_arc(p1, t2).unwrap();
        net.add_input_arc(p2, t2).unwrap();
        assert!(!is_free_choice(&net));
        assert_eq!(free_choice_violations(&net), vec![(t1, t2)]);
    }

    #[test]
    fn missing_arc_breaks_workflow_condition() {
        let w = initial_net();
        let roles = *w.roles();
        let mut net = w.into_net();
        let p1 = net.find_place("p_1").unwrap();
        net.remove_arc(p1.into(), roles.end.into());
        assert!(!is_workflow_net(&net, &roles));
    }

    #[test]
    fn isolated_place_breaks_workflow_condition() {
        let w = initial_net();
        let roles = *w.roles();
        let mut net = w.into_net();
        net.add_place("orphan").unwrap();
        assert_eq!(
            check_workflow(&net, &roles),
            Err(StructureError::NotOnPath("orphan".into()))
        );
    }

    #[test]
    fn short_circuit_routes_through_sink_and_source() {
        let w = initial_net();
        let sc = short_circuit(&w);
        assert_eq!(sc.net.num_transitions(), w.net().num_transitions() + 1);
        assert!(sc.net.has_arc(w.sink().into(), sc.feedback.into()));
        assert!(sc.net.has_arc(sc.feedback.into(), w.source().into()));
        assert!(sc.net.is_silent(sc.feedback));
    }

    #[test]
    fn roles_are_inferred_structurally() {
        let w = initial_net();
        let again = WorkflowNet::from_net(w.net().clone()).unwrap();
        assert_eq!(again.roles(), w.roles());
    }

    #[test]
    fn arcs_must_be_bipartite() {
        let mut net = LabeledNet::new();
        let a = net.add_place("a").unwrap();
        let b = net.add_place("b").unwrap();
        assert_eq!(net.add_arc(a.into(), b.into()), Err(NetError::NotBipartite));
        assert_eq!(net.add_place("a"), Err(NetError::DuplicateName("a".into())));
    }
}
