use std::collections::BTreeSet;

use super::linalg::SpanTest;
use super::{RuleApplication, RuleError};
use crate::eventlog::Activity;
use crate::net::{
    incidence, max_siphon_within, short_circuit, LabeledNet, NodeId, PlaceId, TransitionId,
    WorkflowNet,
};

/// Per-host data shared by many rule applications: the incidence row and
/// column spaces of the short-circuited host net.
#[derive(Clone, Debug)]
pub struct HostContext<'a> {
    host: &'a WorkflowNet,
    sc_transitions: Vec<TransitionId>,
    sc_places: Vec<PlaceId>,
    rows: SpanTest,
    columns: SpanTest,
}

impl<'a> HostContext<'a> {
    pub fn new(host: &'a WorkflowNet) -> Self {
        let sc = short_circuit(host);
        let n = incidence(&sc.net);
        let columns: Vec<Vec<i8>> = (0..n.num_columns()).map(|j| n.column(j)).collect();
        HostContext {
            host,
            rows: SpanTest::from_integer_vectors(n.rows(), n.num_columns()),
            columns: SpanTest::from_integer_vectors(&columns, n.num_rows()),
            sc_transitions: n.transitions,
            sc_places: n.places,
        }
    }

    pub fn host(&self) -> &'a WorkflowNet {
        self.host
    }

    /// Whether a new place with these input/output transitions would be
    /// linearly dependent in the short-circuited extended net. Adding a place
    /// leaves the other rows unchanged, so the host's row space decides.
    pub fn place_is_dependent(&self, preset: &BTreeSet<TransitionId>, postset: &BTreeSet<TransitionId>) -> bool {
        let row: Vec<i8> = self
            .sc_transitions
            .iter()
            .map(|t| i8::from(preset.contains(t)) - i8::from(postset.contains(t)))
            .collect();
        self.rows.contains_small(&row).expect("row has one entry per column")
    }

    /// Column-space analogue of [`HostContext::place_is_dependent`].
    pub fn transition_is_dependent(&self, preset: &BTreeSet<PlaceId>, postset: &BTreeSet<PlaceId>) -> bool {
        let column: Vec<i8> = self
            .sc_places
            .iter()
            .map(|p| i8::from(postset.contains(p)) - i8::from(preset.contains(p)))
            .collect();
        self.columns.contains_small(&column).expect("column has one entry per row")
    }
}

/// Result of a rule application: the new net and the transition it added,
/// if any.
#[derive(Clone, Debug)]
pub struct Applied {
    pub net: WorkflowNet,
    pub transition: Option<TransitionId>,
    pub place: Option<PlaceId>,
}

fn check_places(net: &LabeledNet, places: &BTreeSet<PlaceId>) -> Result<(), RuleError> {
    if places.iter().all(|p| net.contains((*p).into())) {
        Ok(())
    } else {
        Err(RuleError::UnknownNode)
    }
}

fn check_transitions(net: &LabeledNet, ts: &BTreeSet<TransitionId>) -> Result<(), RuleError> {
    if ts.iter().all(|t| net.contains((*t).into())) {
        Ok(())
    } else {
        Err(RuleError::UnknownNode)
    }
}

fn require_arc(net: &LabeledNet, from: NodeId, to: NodeId) -> Result<(), RuleError> {
    if net.has_arc(from, to) {
        Ok(())
    } else {
        Err(RuleError::MissingArc(net.node_name(from).into(), net.node_name(to).into()))
    }
}

fn finish(w: &WorkflowNet, net: LabeledNet) -> Result<WorkflowNet, RuleError> {
    let out = WorkflowNet::from_parts_unchecked(net, *w.roles());
    out.validate_free_choice()?;
    Ok(out)
}

pub(crate) fn abstraction(
    w: &WorkflowNet,
    r: &BTreeSet<TransitionId>,
    s: &BTreeSet<PlaceId>,
    label: Option<Activity>,
) -> Result<Applied, RuleError> {
    if r.is_empty() || s.is_empty() {
        return Err(RuleError::EmptyRelation);
    }
    check_transitions(w.net(), r)?;
    check_places(w.net(), s)?;
    for t in r {
        for p in s {
            require_arc(w.net(), (*t).into(), (*p).into())?;
        }
    }
    let mut net = w.net().clone();
    for t in r {
        for p in s {
            net.remove_arc((*t).into(), (*p).into());
        }
    }
    let p = net.add_fresh_place();
    let t = net.add_fresh_transition(label);
    for x in r {
        net.add_output_arc(*x, p).expect("nodes exist");
    }
    net.add_input_arc(p, t).expect("nodes exist");
    for y in s {
        net.add_output_arc(t, *y).expect("nodes exist");
    }
    Ok(Applied { net: finish(w, net)?, transition: Some(t), place: Some(p) })
}

pub(crate) fn dual_abstraction(
    w: &WorkflowNet,
    s: &BTreeSet<PlaceId>,
    r: &BTreeSet<TransitionId>,
    label: Option<Activity>,
) -> Result<Applied, RuleError> {
    if r.is_empty() || s.is_empty() {
        return Err(RuleError::EmptyRelation);
    }
    let host = w.net();
    check_transitions(host, r)?;
    check_places(host, s)?;
    for p in s {
        for t in r {
            require_arc(host, (*p).into(), (*t).into())?;
        }
    }
    let preset_of_r: BTreeSet<PlaceId> = r.iter().flat_map(|t| host.preset(*t).iter().copied()).collect();
    let postset_of_s: BTreeSet<TransitionId> =
        s.iter().flat_map(|p| host.place_postset(*p).iter().copied()).collect();
    if *s != preset_of_r && *r != postset_of_s {
        return Err(RuleError::IllegalDual);
    }
    let mut net = host.clone();
    for p in s {
        for t in r {
            net.remove_arc((*p).into(), (*t).into());
        }
    }
    let t = net.add_fresh_transition(label);
    let p = net.add_fresh_place();
    for x in s {
        net.add_input_arc(*x, t).expect("nodes exist");
    }
    net.add_output_arc(t, p).expect("nodes exist");
    for y in r {
        net.add_input_arc(p, *y).expect("nodes exist");
    }
    Ok(Applied { net: finish(w, net)?, transition: Some(t), place: Some(p) })
}

pub(crate) fn place_rule(
    ctx: &HostContext<'_>,
    preset: &BTreeSet<TransitionId>,
    postset: &BTreeSet<TransitionId>,
) -> Result<Applied, RuleError> {
    let w = ctx.host;
    if preset.is_empty() && postset.is_empty() {
        return Err(RuleError::EmptyRelation);
    }
    check_transitions(w.net(), preset)?;
    check_transitions(w.net(), postset)?;
    if !ctx.place_is_dependent(preset, postset) {
        return Err(RuleError::NotDependent);
    }
    let mut net = w.net().clone();
    let p = net.add_fresh_place();
    for t in preset {
        net.add_output_arc(*t, p).expect("nodes exist");
    }
    for t in postset {
        net.add_input_arc(p, *t).expect("nodes exist");
    }
    let out = finish(w, net)?;
    let sc = short_circuit(&out);
    let allowed: BTreeSet<PlaceId> = sc.net.places().filter(|x| *x != w.source()).collect();
    if !max_siphon_within(&sc.net, &allowed).is_empty() {
        return Err(RuleError::SiphonWithoutSource);
    }
    Ok(Applied { net: out, transition: None, place: Some(p) })
}

pub(crate) fn transition_rule(
    ctx: &HostContext<'_>,
    preset: &BTreeSet<PlaceId>,
    postset: &BTreeSet<PlaceId>,
    label: Option<Activity>,
) -> Result<Applied, RuleError> {
    let w = ctx.host;
    if preset.is_empty() && postset.is_empty() {
        return Err(RuleError::EmptyRelation);
    }
    check_places(w.net(), preset)?;
    check_places(w.net(), postset)?;
    if !ctx.transition_is_dependent(preset, postset) {
        return Err(RuleError::NotDependent);
    }
    let mut net = w.net().clone();
    let t = net.add_fresh_transition(label);
    for p in preset {
        net.add_input_arc(*p, t).expect("nodes exist");
    }
    for p in postset {
        net.add_output_arc(t, *p).expect("nodes exist");
    }
    Ok(Applied { net: finish(w, net)?, transition: Some(t), place: None })
}

pub(crate) fn extended_place_rule(
    ctx: &HostContext<'_>,
    preset: &BTreeSet<TransitionId>,
    postset: &BTreeSet<TransitionId>,
    label: Option<Activity>,
) -> Result<Applied, RuleError> {
    if preset.is_empty() {
        return Err(RuleError::EmptyRelation);
    }
    let with_place = place_rule(ctx, preset, postset)?;
    let p = with_place.place.expect("place rule adds a place");
    let mut done = abstraction(&with_place.net, preset, &BTreeSet::from([p]), label)?;
    done.place = Some(p);
    Ok(done)
}

impl RuleApplication {
    pub fn apply(&self, ctx: &HostContext<'_>) -> Result<Applied, RuleError> {
        match self {
            RuleApplication::Abstraction { transitions, places, label } => {
                abstraction(ctx.host, transitions, places, label.clone())
            }
            RuleApplication::DualAbstraction { places, transitions, label } => {
                dual_abstraction(ctx.host, places, transitions, label.clone())
            }
            RuleApplication::Place { preset, postset } => place_rule(ctx, preset, postset),
            RuleApplication::Transition { preset, postset, label } => {
                transition_rule(ctx, preset, postset, label.clone())
            }
            RuleApplication::ExtendedPlace { preset, postset, label } => {
                extended_place_rule(ctx, preset, postset, label.clone())
            }
        }
    }
}

/// ψ_A with `R = r`, `S = s`; the new transition carries `label`.
pub fn apply_abstraction(
    w: &WorkflowNet,
    r: &BTreeSet<TransitionId>,
    s: &BTreeSet<PlaceId>,
    label: Option<Activity>,
) -> Result<WorkflowNet, RuleError> {
    abstraction(w, r, s, label).map(|a| a.net)
}

/// ψ_D with `S = s`, `R = r`. Only the two shapes known to keep the net
/// free-choice are accepted: `S = •R` or `R = S•` in the host net.
pub fn apply_dual_abstraction(
    w: &WorkflowNet,
    s: &BTreeSet<PlaceId>,
    r: &BTreeSet<TransitionId>,
    label: Option<Activity>,
) -> Result<WorkflowNet, RuleError> {
    dual_abstraction(w, s, r, label).map(|a| a.net)
}

pub fn apply_place_rule(
    w: &WorkflowNet,
    preset: &BTreeSet<TransitionId>,
    postset: &BTreeSet<TransitionId>,
) -> Result<WorkflowNet, RuleError> {
    place_rule(&HostContext::new(w), preset, postset).map(|a| a.net)
}

pub fn apply_transition_rule(
    w: &WorkflowNet,
    preset: &BTreeSet<PlaceId>,
    postset: &BTreeSet<PlaceId>,
    label: Option<Activity>,
) -> Result<WorkflowNet, RuleError> {
    transition_rule(&HostContext::new(w), preset, postset, label).map(|a| a.net)
}

pub fn apply_extended_place_rule(
    w: &WorkflowNet,
    preset: &BTreeSet<TransitionId>,
    postset: &BTreeSet<TransitionId>,
    label: Option<Activity>,
) -> Result<WorkflowNet, RuleError> {
    extended_place_rule(&HostContext::new(w), preset, postset, label).map(|a| a.net)
}
