//! Cheapest alignments by 0-1 breadth-first search over the synchronous
//! product of a compiled net and a trace.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use crate::net::compiled::{CompiledNet, DenseMarking};

use super::{ConformanceError, MoveKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Step {
    pub kind: MoveKind,
    pub transition: Option<usize>,
    /// Index of the consumed trace event.
    pub event: Option<usize>,
}

struct Node {
    marking: DenseMarking,
    pos: usize,
    dist: u64,
    parent: Option<(usize, Step)>,
    done: bool,
}

/// Trace events as label indices of `net`; `None` for unknown activities.
pub(crate) type EncodedTrace = [Option<usize>];

pub(crate) fn align(
    net: &CompiledNet,
    trace: &EncodedTrace,
    state_cap: usize,
) -> Result<(u64, Vec<Step>), ConformanceError> {
    let mut nodes: Vec<Node> = Vec::new();
    let mut index: HashMap<(DenseMarking, usize), usize> = HashMap::new();
    let start = net.initial();
    index.insert((start.clone(), 0), 0);
    nodes.push(Node { marking: start, pos: 0, dist: 0, parent: None, done: false });
    let mut queue = VecDeque::from([0usize]);
    let mut successors: Vec<(Step, u64, Option<usize>)> = Vec::new();

    while let Some(i) = queue.pop_front() {
        if nodes[i].done {
            continue;
        }
        nodes[i].done = true;
        let (pos, dist) = (nodes[i].pos, nodes[i].dist);
        if pos == trace.len() && net.is_final(&nodes[i].marking) {
            return Ok((dist, backtrack(&nodes, i)));
        }

        successors.clear();
        let marking = nodes[i].marking.clone();
        let next_label = trace.get(pos).copied();
        let enabled: Vec<usize> =
            (0..net.transitions.len()).filter(|t| net.is_enabled(&marking, *t)).collect();
        if let Some(Some(l)) = next_label {
            for t in enabled.iter().filter(|t| net.labels[**t] == Some(l)) {
                let step = Step { kind: MoveKind::Synchronous, transition: Some(*t), event: Some(pos) };
                successors.push((step, 0, Some(*t)));
            }
        }
        for t in enabled.iter().filter(|t| net.labels[**t].is_none()) {
            let step = Step { kind: MoveKind::ModelSilent, transition: Some(*t), event: None };
            successors.push((step, 0, Some(*t)));
        }
        for t in enabled.iter().filter(|t| net.labels[**t].is_some()) {
            let step = Step { kind: MoveKind::ModelVisible, transition: Some(*t), event: None };
            successors.push((step, 1, Some(*t)));
        }
        if next_label.is_some() {
            let step = Step { kind: MoveKind::LogMove, transition: None, event: Some(pos) };
            successors.push((step, 1, None));
        }

        // zero-cost successors go to the front in reverse, so the first one
        // listed is expanded first and silent moves are taken only when
        // nothing synchronous is possible
        let mut zero = Vec::new();
        for (step, cost, fired) in successors.drain(..) {
            let next_marking = match fired {
                Some(t) => net.fire(&marking, t),
                None => marking.clone(),
            };
            let next_pos = pos + usize::from(step.event.is_some());
            let nd = dist + cost;
            let j = match index.entry((next_marking, next_pos)) {
                Entry::Occupied(e) => {
                    let j = *e.get();
                    if nodes[j].done || nodes[j].dist <= nd {
                        continue;
                    }
                    nodes[j].dist = nd;
                    nodes[j].parent = Some((i, step));
                    j
                }
                Entry::Vacant(e) => {
                    if nodes.len() >= state_cap {
                        return Err(ConformanceError::Inconclusive { cap: state_cap });
                    }
                    let j = nodes.len();
                    nodes.push(Node {
                        marking: e.key().0.clone(),
                        pos: next_pos,
                        dist: nd,
                        parent: Some((i, step)),
                        done: false,
                    });
                    e.insert(j);
                    j
                }
            };
            if cost == 0 {
                zero.push(j);
            } else {
                queue.push_back(j);
            }
        }
        for j in zero.into_iter().rev() {
            queue.push_front(j);
        }
    }
    Err(ConformanceError::NoCompletion)
}

fn backtrack(nodes: &[Node], mut i: usize) -> Vec<Step> {
    let mut steps = Vec::new();
    while let Some((parent, step)) = nodes[i].parent {
        steps.push(step);
        i = parent;
    }
    steps.reverse();
    steps
}

/// Visible label indices executable next from `m`, looking through any
/// number of silent firings.
pub(crate) fn visible_closure(
    net: &CompiledNet,
    m: &[u16],
    state_cap: usize,
) -> Result<Vec<usize>, ConformanceError> {
    let mut seen: std::collections::HashSet<DenseMarking> = std::collections::HashSet::new();
    let mut labels = vec![false; net.label_names.len()];
    let start: DenseMarking = m.into();
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        for t in 0..net.transitions.len() {
            if !net.is_enabled(&cur, t) {
                continue;
            }
            match net.labels[t] {
                Some(l) => labels[l] = true,
                None => {
                    let next = net.fire(&cur, t);
                    if !seen.contains(&next) {
                        if seen.len() >= state_cap {
                            return Err(ConformanceError::Inconclusive { cap: state_cap });
                        }
                        seen.insert(next.clone());
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Ok(labels.iter().enumerate().filter(|(_, on)| **on).map(|(l, _)| l).collect())
}
