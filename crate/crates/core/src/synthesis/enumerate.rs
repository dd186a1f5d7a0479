use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::rules::HostContext;
use super::RuleApplication;
use crate::eventlog::Activity;
use crate::net::canonical::canonical_form;
use crate::net::{LabeledNet, NodeId, PlaceId, TransitionId, WorkflowNet};

/// Bounds on the rule instances considered per iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationCaps {
    /// Largest `R` and `S` for the abstraction rules.
    pub max_abstraction_set: usize,
    /// Largest preset and postset of a node added by ψ_T or ψ'_P.
    pub max_arc_set: usize,
    /// Candidate nets kept per iteration, in canonical order.
    pub max_candidates: usize,
    pub allow_self_loops: bool,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        EnumerationCaps {
            max_abstraction_set: 4,
            max_arc_set: 3,
            max_candidates: 5_000,
            allow_self_loops: false,
        }
    }
}

/// Non-empty subsets of `items` with at most `k` elements, by size and then
/// lexicographically.
pub(crate) fn subsets_up_to<T: Copy + Ord>(items: &[T], k: usize) -> Vec<BTreeSet<T>> {
    fn go<T: Copy + Ord>(items: &[T], size: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<BTreeSet<T>>) {
        if cur.len() == size {
            out.push(cur.iter().copied().collect());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for size in 1..=k.min(items.len()) {
        go(items, size, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Clusters of a free-choice net: groups of transitions sharing a preset.
fn clusters(net: &LabeledNet) -> BTreeMap<BTreeSet<PlaceId>, BTreeSet<TransitionId>> {
    let mut out: BTreeMap<BTreeSet<PlaceId>, BTreeSet<TransitionId>> = BTreeMap::new();
    for t in net.transitions() {
        out.entry(net.preset(t).clone()).or_default().insert(t);
    }
    out
}

/// Rule instances that add one transition labeled `a` and touch only nodes
/// of `v`. Cheap structural filters are applied here; linear dependence,
/// siphon and free-choice conditions are checked when applying.
pub fn enumerate_applications(
    w: &WorkflowNet,
    v: &BTreeSet<NodeId>,
    a: &Activity,
    caps: &EnumerationCaps,
) -> Vec<RuleApplication> {
    let net = w.net();
    let label = Some(a.clone());
    let in_v = |x: NodeId| v.contains(&x);
    let v_places: Vec<PlaceId> = net.places().filter(|p| in_v((*p).into())).collect();
    let v_transitions: Vec<TransitionId> = net.transitions().filter(|t| in_v((*t).into())).collect();
    let mut out = Vec::new();

    // ψ_A: R ⊆ •s for every s ∈ S
    let mut rs: BTreeSet<BTreeSet<TransitionId>> = BTreeSet::new();
    for p in &v_places {
        let feeding: Vec<TransitionId> =
            net.place_preset(*p).iter().copied().filter(|t| in_v((*t).into())).collect();
        rs.extend(subsets_up_to(&feeding, caps.max_abstraction_set));
    }
    for r in rs {
        let common: Vec<PlaceId> = v_places
            .iter()
            .copied()
            .filter(|p| r.iter().all(|t| net.postset(*t).contains(p)))
            .collect();
        for s in subsets_up_to(&common, caps.max_abstraction_set) {
            out.push(RuleApplication::Abstraction { transitions: r.clone(), places: s, label: label.clone() });
        }
    }

    let clusters = clusters(net);

    // ψ'_P: any preset in V, postset a whole cluster in V
    let feeders: Vec<TransitionId> = v_transitions.iter().copied().filter(|t| *t != w.end()).collect();
    let presets = subsets_up_to(&feeders, caps.max_arc_set);
    for (cluster_places, cluster) in &clusters {
        if cluster.contains(&w.start())
            || cluster_places.is_empty()
            || cluster.len() > caps.max_arc_set
            || !cluster.iter().all(|t| in_v((*t).into()))
        {
            continue;
        }
        for u in &presets {
            if !caps.allow_self_loops && !u.is_disjoint(cluster) {
                continue;
            }
            out.push(RuleApplication::ExtendedPlace {
                preset: u.clone(),
                postset: cluster.clone(),
                label: label.clone(),
            });
        }
    }

    // ψ_T: preset an existing cluster preset, postset inner places
    let targets: Vec<PlaceId> =
        v_places.iter().copied().filter(|p| *p != w.source() && *p != w.sink()).collect();
    let postsets = subsets_up_to(&targets, caps.max_arc_set);
    for cluster_places in clusters.keys() {
        if cluster_places.is_empty()
            || cluster_places.contains(&w.source())
            || cluster_places.len() > caps.max_arc_set
            || !cluster_places.iter().all(|p| in_v((*p).into()))
        {
            continue;
        }
        for post in &postsets {
            if !caps.allow_self_loops && !post.is_disjoint(cluster_places) {
                continue;
            }
            out.push(RuleApplication::Transition {
                preset: cluster_places.clone(),
                postset: post.clone(),
                label: label.clone(),
            });
        }
    }

    // ψ_D: S ⊆ cluster places with R the whole cluster, or S the whole
    // cluster preset with R ⊆ cluster
    let mut duals: BTreeSet<(BTreeSet<PlaceId>, BTreeSet<TransitionId>)> = BTreeSet::new();
    for (cluster_places, cluster) in &clusters {
        if cluster_places.is_empty() {
            continue;
        }
        let places_in_v: Vec<PlaceId> =
            cluster_places.iter().copied().filter(|p| in_v((*p).into())).collect();
        let transitions_in_v: Vec<TransitionId> =
            cluster.iter().copied().filter(|t| in_v((*t).into())).collect();
        if cluster.len() <= caps.max_abstraction_set && transitions_in_v.len() == cluster.len() {
            for s in subsets_up_to(&places_in_v, caps.max_abstraction_set) {
                duals.insert((s, cluster.clone()));
            }
        }
        if cluster_places.len() <= caps.max_abstraction_set && places_in_v.len() == cluster_places.len() {
            for r in subsets_up_to(&transitions_in_v, caps.max_abstraction_set) {
                duals.insert((cluster_places.clone(), r));
            }
        }
    }
    for (s, r) in duals {
        out.push(RuleApplication::DualAbstraction { places: s, transitions: r, label: label.clone() });
    }
    out
}

/// A net produced by one rule application, with its canonical form.
#[derive(Clone, Debug)]
pub struct BaseCandidate {
    pub application: RuleApplication,
    pub net: WorkflowNet,
    pub transition: TransitionId,
    pub canonical: String,
}

/// Applies every enumerated rule instance, keeps the nets that pass all rule
/// conditions, removes isomorphic duplicates (the first instance in
/// enumeration order wins) and truncates to `caps.max_candidates` in
/// canonical order.
pub fn base_candidates(
    w: &WorkflowNet,
    v: &BTreeSet<NodeId>,
    a: &Activity,
    caps: &EnumerationCaps,
) -> Vec<BaseCandidate> {
    if caps.max_candidates == 0 {
        return Vec::new();
    }
    let ctx = HostContext::new(w);
    let applications = enumerate_applications(w, v, a, caps);
    let built: Vec<BaseCandidate> = applications
        .into_par_iter()
        .filter_map(|app| {
            let applied = app.apply(&ctx).ok()?;
            let canonical = canonical_form(&applied.net);
            Some(BaseCandidate {
                transition: applied.transition?,
                net: applied.net,
                application: app,
                canonical,
            })
        })
        .collect();
    let mut seen = HashSet::new();
    let mut unique: Vec<BaseCandidate> = built.into_iter().filter(|c| seen.insert(c.canonical.clone())).collect();
    unique.sort_by(|x, y| x.canonical.cmp(&y.canonical));
    unique.truncate(caps.max_candidates);
    unique
}
