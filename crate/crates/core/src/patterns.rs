//! Skip and loop patterns around a labeled transition, and assembly of the
//! per-iteration candidate set.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::conformance::Score;
use crate::eventlog::Activity;
use crate::net::canonical::canonical_form;
use crate::net::{NodeId, TransitionId, WorkflowNet};
use crate::synthesis::{base_candidates, EnumerationCaps, HostContext, RuleError, RuleRecord};
use crate::synthesis::rules;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PatternTag {
    #[serde(rename = "none")]
    None,
    #[serde(rename = "skip")]
    Skip,
    #[serde(rename = "loop_strict")]
    LoopStrict,
    #[serde(rename = "loop_tau")]
    LoopTau,
    #[serde(rename = "skip+loop")]
    SkipLoop,
}

impl PatternTag {
    pub const ALL: [PatternTag; 5] =
        [PatternTag::None, PatternTag::Skip, PatternTag::LoopStrict, PatternTag::LoopTau, PatternTag::SkipLoop];

    pub fn apply(self, w: &WorkflowNet, a: &Activity) -> Result<WorkflowNet, RuleError> {
        match self {
            PatternTag::None => Ok(w.clone()),
            PatternTag::Skip => skip(w, a),
            PatternTag::LoopStrict => loop_strict(w, a),
            PatternTag::LoopTau => loop_tau(w, a),
            PatternTag::SkipLoop => skip(&loop_strict(w, a)?, a),
        }
    }
}

/// How a candidate was built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    #[serde(flatten)]
    pub rule: RuleRecord,
    pub pattern: PatternTag,
}

/// A candidate net for one iteration.
#[derive(Clone, Debug)]
pub struct CandidateNet {
    pub net: WorkflowNet,
    pub provenance: Provenance,
    pub canonical: String,
    pub scores: Option<Score>,
}

fn labeled(w: &WorkflowNet, a: &Activity) -> Result<TransitionId, RuleError> {
    let mut it = w.net().transitions_labeled(a);
    match (it.next(), it.next()) {
        (Some(t), None) => Ok(t),
        (None, _) => Err(RuleError::NoSuchLabel(a.to_string())),
        _ => Err(RuleError::AmbiguousLabel(a.to_string())),
    }
}

/// Adds a silent transition with the preset and postset of `t_a`, making `a`
/// optional. If such a transition already exists the net is returned as is.
pub fn skip(w: &WorkflowNet, a: &Activity) -> Result<WorkflowNet, RuleError> {
    let ta = labeled(w, a)?;
    let net = w.net();
    let (pre, post) = (net.preset(ta), net.postset(ta));
    if net.transitions().any(|t| t != ta && net.is_silent(t) && net.preset(t) == pre && net.postset(t) == post) {
        return Ok(w.clone());
    }
    let ctx = HostContext::new(w);
    Ok(rules::transition_rule(&ctx, pre, post, None)?.net)
}

/// Builds the loop back to `t_a` and returns the net, `t_a` and the silent
/// back transition.
fn loop_back(w: &WorkflowNet, a: &Activity) -> Result<(WorkflowNet, TransitionId, TransitionId), RuleError> {
    let mut current = w.clone();
    for _ in 0..2 {
        let ta = labeled(&current, a)?;
        let net = current.net();
        let out = net.postset(ta).clone();
        let blocked = out.iter().flat_map(|p| net.place_postset(*p).iter()).any(|t| {
            let pre = net.preset(*t);
            pre.len() > 1 && !pre.is_subset(&out)
        });
        if !blocked {
            let ctx = HostContext::new(&current);
            let applied = rules::transition_rule(&ctx, &out, net.preset(ta), None)?;
            let back = applied.transition.expect("transition rule adds a transition");
            return Ok((applied.net, ta, back));
        }
        // reroute all of t_a's outputs through a fresh silent step
        current = rules::abstraction(&current, &BTreeSet::from([ta]), &out, None)?.net;
    }
    Err(RuleError::LoopRecursion)
}

/// Makes `a` repeatable: a silent transition leads from the postset of `t_a`
/// back to its preset.
pub fn loop_strict(w: &WorkflowNet, a: &Activity) -> Result<WorkflowNet, RuleError> {
    loop_back(w, a).map(|(net, _, _)| net)
}

/// Like [`loop_strict`] with the labels of `t_a` and the back transition
/// exchanged, so `a` is executed on the way back.
pub fn loop_tau(w: &WorkflowNet, a: &Activity) -> Result<WorkflowNet, RuleError> {
    let (w2, ta, back) = loop_back(w, a)?;
    let mut out = w2;
    let net = out.net_mut();
    net.set_label(ta, None);
    net.set_label(back, Some(a.clone()));
    out.validate_free_choice()?;
    Ok(out)
}

/// Base candidates plus every pattern applied to each of them. Nets failing
/// a pattern are dropped; duplicates are removed by canonical form and the
/// set is truncated to `caps.max_candidates` in canonical order.
pub fn candidate_set(
    w: &WorkflowNet,
    v: &BTreeSet<NodeId>,
    a: &Activity,
    caps: &EnumerationCaps,
) -> Vec<CandidateNet> {
    let base = base_candidates(w, v, a, caps);
    let built: Vec<Vec<CandidateNet>> = base
        .par_iter()
        .map(|b| {
            let rule = b.application.record(w.net());
            PatternTag::ALL
                .iter()
                .filter_map(|tag| {
                    let net = match tag {
                        PatternTag::None => b.net.clone(),
                        _ => tag.apply(&b.net, a).ok()?,
                    };
                    let canonical = match tag {
                        PatternTag::None => b.canonical.clone(),
                        _ => canonical_form(&net),
                    };
                    Some(CandidateNet {
                        net,
                        provenance: Provenance { rule: rule.clone(), pattern: *tag },
                        canonical,
                        scores: None,
                    })
                })
                .collect()
        })
        .collect();
    let mut seen = HashSet::new();
    let mut out: Vec<CandidateNet> =
        built.into_iter().flatten().filter(|c| seen.insert(c.canonical.clone())).collect();
    out.sort_by(|x, y| x.canonical.cmp(&y.canonical));
    out.truncate(caps.max_candidates);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{initial_net, is_sound, DEFAULT_STATE_CAP};
    use crate::synthesis::apply_abstraction;

    fn seq_a() -> WorkflowNet {
        let w = initial_net();
        let p1 = w.net().find_place("p_1").unwrap();
        apply_abstraction(&w, &BTreeSet::from([w.start()]), &BTreeSet::from([p1]), Some(Activity::new("a"))).unwrap()
    }

    #[test]
    fn skip_adds_one_silent_transition() {
        let w = seq_a();
        let a = Activity::new("a");
        let s = skip(&w, &a).unwrap();
        assert_eq!(s.net().num_transitions(), w.net().num_transitions() + 1);
        assert_eq!(s.net().num_places(), w.net().num_places());
        assert!(is_sound(&s, DEFAULT_STATE_CAP).unwrap());
        let again = skip(&s, &a).unwrap();
        assert_eq!(canonical_form(&again), canonical_form(&s));
    }

    #[test]
    fn missing_label_is_an_error() {
        assert_eq!(skip(&initial_net(), &Activity::new("a")).unwrap_err(), RuleError::NoSuchLabel("a".into()));
        assert!(loop_strict(&initial_net(), &Activity::new("a")).is_err());
        assert!(loop_tau(&initial_net(), &Activity::new("a")).is_err());
    }

    #[test]
    fn isolated_sequence_loops_directly() {
        let w = seq_a();
        let l = loop_strict(&w, &Activity::new("a")).unwrap();
        assert_eq!(l.net().num_transitions(), w.net().num_transitions() + 1);
        assert_eq!(l.net().num_places(), w.net().num_places());
        assert!(is_sound(&l, DEFAULT_STATE_CAP).unwrap());
    }

    #[test]
    fn loop_tau_moves_the_label_to_the_back_transition() {
        let w = seq_a();
        let a = Activity::new("a");
        let l = loop_tau(&w, &a).unwrap();
        let ta = l.net().find_transition("t_1").unwrap();
        assert!(l.net().is_silent(ta));
        assert_eq!(l.net().transitions_labeled(&a).count(), 1);
        assert!(is_sound(&l, DEFAULT_STATE_CAP).unwrap());
    }

    #[test]
    fn candidate_set_on_initial_net_is_non_empty_and_unique() {
        let w = initial_net();
        let v: BTreeSet<NodeId> = w.net().nodes().collect();
        let c = candidate_set(&w, &v, &Activity::new("a"), &EnumerationCaps::default());
        assert!(!c.is_empty());
        let forms: HashSet<&String> = c.iter().map(|x| &x.canonical).collect();
        assert_eq!(forms.len(), c.len());
        let zero = EnumerationCaps { max_candidates: 0, ..Default::default() };
        assert!(candidate_set(&w, &v, &Activity::new("a"), &zero).is_empty());
    }
}
