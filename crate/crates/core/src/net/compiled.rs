//! Dense index-based view of a workflow net for state-space searches.

use std::collections::BTreeMap;

use super::{PlaceId, TransitionId, WorkflowNet};
use crate::eventlog::Activity;

pub(crate) type DenseMarking = Box<[u16]>;

#[derive(Clone, Debug)]
pub(crate) struct CompiledNet {
    pub places: Vec<PlaceId>,
    pub transitions: Vec<TransitionId>,
    pub pre: Vec<Vec<usize>>,
    pub post: Vec<Vec<usize>>,
    /// Index into `label_names`, `None` for silent transitions.
    pub labels: Vec<Option<usize>>,
    pub label_names: Vec<Activity>,
    pub source: usize,
    pub sink: usize,
}

impl CompiledNet {
    pub fn new(w: &WorkflowNet) -> Self {
        let net = w.net();
        let places: Vec<PlaceId> = net.places().collect();
        let transitions: Vec<TransitionId> = net.transitions().collect();
        let place_index: BTreeMap<PlaceId, usize> =
            places.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let label_names: Vec<Activity> = net.labels().into_iter().collect();
        let pre = transitions
            .iter()
            .map(|t| net.preset(*t).iter().map(|p| place_index[p]).collect())
            .collect();
        let post = transitions
            .iter()
            .map(|t| net.postset(*t).iter().map(|p| place_index[p]).collect())
            .collect();
        let labels = transitions
            .iter()
            .map(|t| net.label(*t).map(|a| label_names.binary_search(a).expect("collected")))
            .collect();
        CompiledNet {
            source: place_index[&w.source()],
            sink: place_index[&w.sink()],
            places,
            transitions,
            pre,
            post,
            labels,
            label_names,
        }
    }

    pub fn label_index(&self, a: &Activity) -> Option<usize> {
        self.label_names.binary_search(a).ok()
    }

    pub fn initial(&self) -> DenseMarking {
        let mut m = vec![0u16; self.places.len()];
        m[self.source] = 1;
        m.into_boxed_slice()
    }

    pub fn is_final(&self, m: &[u16]) -> bool {
        m.iter().enumerate().all(|(i, c)| *c == u16::from(i == self.sink))
    }

    pub fn is_enabled(&self, m: &[u16], t: usize) -> bool {
        self.pre[t].iter().all(|p| m[*p] > 0)
    }

    pub fn fire(&self, m: &[u16], t: usize) -> DenseMarking {
        let mut next: Vec<u16> = m.to_vec();
        for p in &self.pre[t] {
            next[*p] -= 1;
        }
        for p in &self.post[t] {
            next[*p] = next[*p].saturating_add(1);
        }
        next.into_boxed_slice()
    }
}
