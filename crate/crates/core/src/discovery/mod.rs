//! The discovery loop: order the activities, then add them one at a time,
//! each time choosing the best-scoring candidate net on the projected log.

mod ordering;

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::conformance::{ConformanceError, Replayer, Score};
use crate::eventlog::{Activity, CausalThreshold, EventLog};
use crate::net::canonical::canonical_form;
use crate::net::{elementary_path_nodes, initial_net, NodeId, WorkflowNet, DEFAULT_STATE_CAP};
use crate::patterns::{candidate_set, skip, loop_strict, CandidateNet, PatternTag, Provenance};
use crate::rational::{ratio, serialize_exact, Rational};
use crate::synthesis::{rules, EnumerationCaps, HostContext, RuleApplication, RuleError};

pub use ordering::{
    bfs_blocks, order, order_bfs, order_frequency, projected_log, sort_preceded, ActivityOrder, Ordering,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiscoveryError {
    #[error("the event log is empty")]
    EmptyLog,
    #[error("activity index {index} is out of range for an order of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("iteration {iteration}: {source}")]
    Conformance { iteration: usize, source: ConformanceError },
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscoveryConfig {
    /// Minimum fitness of the selected net on the projected log.
    #[serde(serialize_with = "serialize_exact")]
    pub theta: Rational,
    #[serde(serialize_with = "serialize_threshold")]
    pub causal_threshold: CausalThreshold,
    pub ordering: Ordering,
    pub caps: EnumerationCaps,
    /// Bound on explored states per alignment or closure search.
    pub state_cap: usize,
}

fn serialize_threshold<S: serde::Serializer>(c: &CausalThreshold, s: S) -> Result<S::Ok, S::Error> {
    serialize_exact(c.value(), s)
}

impl Default for DiscoveryConfig {
    fn default() -> Self {
        DiscoveryConfig {
            theta: ratio(19, 20),
            causal_threshold: CausalThreshold::default(),
            ordering: Ordering::Bfs,
            caps: EnumerationCaps::default(),
            state_cap: DEFAULT_STATE_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FallThrough {
    None,
    /// Candidates were regenerated without the pruning set.
    Unconstrained,
    /// No candidate passed; the activity was added as a concurrent,
    /// optional and repeatable branch.
    Guaranteed,
}

#[derive(Clone, Debug, Serialize)]
pub struct IterationRecord {
    pub index: usize,
    pub activity: Activity,
    pub variants: usize,
    pub pruning_set_size: usize,
    pub net_size: usize,
    #[serde(serialize_with = "serialize_exact")]
    pub pruning_ratio: Rational,
    pub candidates: usize,
    pub selected: Provenance,
    pub scores: Score,
    pub fall_through: FallThrough,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct DiscoveryResult {
    pub net: WorkflowNet,
    pub order: ActivityOrder,
    pub iterations: Vec<IterationRecord>,
}

/// Nodes on elementary paths from the transitions of the causal predecessors
/// of `a` to those of its causal successors. Without predecessors in the net
/// the start transition is used, without successors the end transition. If
/// no path connects them, every node is returned.
pub fn pruning_set(w: &WorkflowNet, log_i: &EventLog, a: &Activity, c: &CausalThreshold) -> BTreeSet<NodeId> {
    let stats = log_i.statistics();
    let net = w.net();
    let transitions_of = |acts: BTreeSet<Activity>| -> BTreeSet<NodeId> {
        acts.iter().flat_map(|x| net.transitions_labeled(x).map(NodeId::from).collect::<Vec<_>>()).collect()
    };
    let mut from = transitions_of(stats.preceding_set(a, c));
    if from.is_empty() {
        from.insert(w.start().into());
    }
    let mut to = transitions_of(stats.following_set(a, c));
    if to.is_empty() {
        to.insert(w.end().into());
    }
    let v = elementary_path_nodes(net, &from, &to);
    if v.is_empty() {
        net.nodes().collect()
    } else {
        v
    }
}

/// Scores all candidates on `log_i` and returns the one with the highest F1
/// among those with fitness at least `theta`. Ties go to the smaller net,
/// then to the smaller canonical form.
pub fn select_best(
    candidates: Vec<CandidateNet>,
    log_i: &EventLog,
    theta: &Rational,
    state_cap: usize,
) -> Result<Option<CandidateNet>, ConformanceError> {
    let scored: Vec<Option<CandidateNet>> = candidates
        .into_par_iter()
        .map(|mut c| {
            let replayer = Replayer::new(&c.net, state_cap)?;
            Ok(replayer.score_above(log_i, theta)?.map(|s| {
                c.scores = Some(s);
                c
            }))
        })
        .collect::<Result<_, ConformanceError>>()?;
    let better = |x: &CandidateNet, y: &CandidateNet| {
        let (fx, fy) = (&x.scores.as_ref().expect("scored").f1, &y.scores.as_ref().expect("scored").f1);
        fx.cmp(fy)
            .then_with(|| y.net.net().num_nodes().cmp(&x.net.net().num_nodes()))
            .then_with(|| y.canonical.cmp(&x.canonical))
    };
    Ok(scored.into_iter().flatten().max_by(better))
}

/// Adds `a` on a fresh branch between the start and end transitions that
/// may run any number of times, concurrently with the rest of the net.
///
/// If the end transition shares its input places with other transitions, a
/// silent dual abstraction first gives it an input place of its own so that
/// the new branch keeps the net free-choice.
pub fn guaranteed_extension(w: &WorkflowNet, a: &Activity) -> Result<WorkflowNet, RuleError> {
    let net = w.net();
    let end_preset = net.preset(w.end()).clone();
    let shared = end_preset.iter().any(|p| net.place_postset(*p).len() > 1);
    let base = if shared {
        rules::dual_abstraction(w, &end_preset, &BTreeSet::from([w.end()]), None)?.net
    } else {
        w.clone()
    };
    let ctx = HostContext::new(&base);
    let start = BTreeSet::from([base.start()]);
    let end = BTreeSet::from([base.end()]);
    let branch = rules::extended_place_rule(&ctx, &start, &end, Some(a.clone()))?.net;
    skip(&loop_strict(&branch, a)?, a)
}

fn guaranteed_candidate(w: &WorkflowNet, a: &Activity) -> CandidateNet {
    let net = guaranteed_extension(w, a).expect("the guaranteed construction applies to every workflow net");
    let application = RuleApplication::ExtendedPlace {
        preset: BTreeSet::from([w.start()]),
        postset: BTreeSet::from([w.end()]),
        label: Some(a.clone()),
    };
    CandidateNet {
        canonical: canonical_form(&net),
        provenance: Provenance { rule: application.record(w.net()), pattern: PatternTag::SkipLoop },
        net,
        scores: None,
    }
}

/// Runs the discovery loop.
pub fn discover(log: &EventLog, config: &DiscoveryConfig) -> Result<DiscoveryResult, DiscoveryError> {
    discover_with(log, config, |_| {})
}

/// Like [`discover`], calling `on_iteration` after every iteration.
pub fn discover_with(
    log: &EventLog,
    config: &DiscoveryConfig,
    mut on_iteration: impl FnMut(&IterationRecord),
) -> Result<DiscoveryResult, DiscoveryError> {
    let gamma = order(log, config.ordering)?;
    let mut w = initial_net();
    let mut iterations = Vec::with_capacity(gamma.len());
    for i in 1..=gamma.len() {
        let started = Instant::now();
        let a = gamma.get(i - 1).expect("in range").clone();
        let log_i = projected_log(log, &gamma, i)?;
        let err = |source| DiscoveryError::Conformance { iteration: i, source };
        let all: BTreeSet<NodeId> = w.net().nodes().collect();
        let v = if i == 1 { all.clone() } else { pruning_set(&w, &log_i, &a, &config.causal_threshold) };

        let candidates = candidate_set(&w, &v, &a, &config.caps);
        let mut considered = candidates.len();
        let mut fall_through = FallThrough::None;
        let mut best = select_best(candidates, &log_i, &config.theta, config.state_cap).map_err(err)?;
        if best.is_none() && v != all {
            fall_through = FallThrough::Unconstrained;
            let candidates = candidate_set(&w, &all, &a, &config.caps);
            considered += candidates.len();
            best = select_best(candidates, &log_i, &config.theta, config.state_cap).map_err(err)?;
        }
        let chosen = match best {
            Some(c) => c,
            None => {
                fall_through = FallThrough::Guaranteed;
                let mut c = guaranteed_candidate(&w, &a);
                c.scores = Some(Replayer::new(&c.net, config.state_cap).and_then(|r| r.score(&log_i)).map_err(err)?);
                c
            }
        };
        log::info!(
            "iteration {i}: added {a} ({} candidates, |V| = {} of {})",
            considered,
            v.len(),
            all.len()
        );
        let record = IterationRecord {
            index: i,
            activity: a,
            variants: log_i.num_variants(),
            pruning_set_size: v.len(),
            net_size: all.len(),
            pruning_ratio: ratio(v.len() as i64, all.len() as i64),
            candidates: considered,
            selected: chosen.provenance.clone(),
            scores: chosen.scores.clone().expect("selected candidates are scored"),
            fall_through,
            wall_time_ms: Some(started.elapsed().as_secs_f64() * 1000.0),
        };
        on_iteration(&record);
        iterations.push(record);
        w = chosen.net;
    }
    Ok(DiscoveryResult { net: w, order: gamma, iterations })
}
