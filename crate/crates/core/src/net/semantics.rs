use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::compiled::{CompiledNet, DenseMarking};
use super::{LabeledNet, NetError, PlaceId, TransitionId, WorkflowNet};

pub const DEFAULT_STATE_CAP: usize = 100_000;

/// A multiset of places.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Marking(BTreeMap<PlaceId, u32>);

impl Marking {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_places(places: impl IntoIterator<Item = PlaceId>) -> Self {
        let mut m = Marking::new();
        for p in places {
            m.add(p, 1);
        }
        m
    }

    pub fn tokens(&self, p: PlaceId) -> u32 {
        self.0.get(&p).copied().unwrap_or(0)
    }

    pub fn add(&mut self, p: PlaceId, n: u32) {
        if n > 0 {
            *self.0.entry(p).or_default() += n;
        }
    }

    pub fn remove(&mut self, p: PlaceId, n: u32) -> bool {
        match self.0.get_mut(&p) {
            Some(c) if *c >= n => {
                *c -= n;
                if *c == 0 {
                    self.0.remove(&p);
                }
                true
            }
            _ => n == 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (PlaceId, u32)> + '_ {
        self.0.iter().map(|(p, c)| (*p, *c))
    }

    pub fn total(&self) -> u64 {
        self.0.values().map(|c| u64::from(*c)).sum()
    }

    pub fn display<'a>(&'a self, net: &'a LabeledNet) -> impl fmt::Display + 'a {
        MarkingDisplay { marking: self, net }
    }
}

struct MarkingDisplay<'a> {
    marking: &'a Marking,
    net: &'a LabeledNet,
}

impl fmt::Display for MarkingDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (p, c)) in self.marking.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.net.place_name(p))?;
            if c > 1 {
                write!(f, "^{c}")?;
            }
        }
        write!(f, "]")
    }
}

pub fn enabled(w: &WorkflowNet, m: &Marking) -> Vec<TransitionId> {
    let net = w.net();
    net.transitions().filter(|t| net.preset(*t).iter().all(|p| m.tokens(*p) > 0)).collect()
}

pub fn fire(w: &WorkflowNet, m: &Marking, t: TransitionId) -> Result<Marking, NetError> {
    let net = w.net();
    if !net.contains(t.into()) {
        return Err(NetError::UnknownNode);
    }
    let mut next = m.clone();
    for p in net.preset(t) {
        if !next.remove(*p, 1) {
            return Err(NetError::NotEnabled(net.transition_name(t).to_string()));
        }
    }
    for p in net.postset(t) {
        next.add(*p, 1);
    }
    Ok(next)
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("state space exceeds the cap of {cap} states")]
pub struct Inconclusive {
    pub cap: usize,
}

/// Outcome of the reachability-based soundness check, with the first reason
/// found when the net is not sound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SoundnessVerdict {
    Sound,
    Unsafe { marking: String },
    CannotComplete { marking: String },
    DeadTransition { transition: String },
}

impl SoundnessVerdict {
    pub fn is_sound(&self) -> bool {
        matches!(self, SoundnessVerdict::Sound)
    }
}

impl fmt::Display for SoundnessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SoundnessVerdict::Sound => write!(f, "sound"),
            SoundnessVerdict::Unsafe { marking } => {
                write!(f, "not safe: reachable marking {marking} has a place with 2 tokens")
            }
            SoundnessVerdict::CannotComplete { marking } => {
                write!(f, "no option to complete from reachable marking {marking}")
            }
            SoundnessVerdict::DeadTransition { transition } => {
                write!(f, "transition {transition} can never fire")
            }
        }
    }
}

fn dense_to_marking(c: &CompiledNet, m: &[u16]) -> Marking {
    let mut out = Marking::new();
    for (i, n) in m.iter().enumerate() {
        out.add(c.places[i], u32::from(*n));
    }
    out
}

/// Explores the reachability graph from the source marking.
pub fn check_soundness(w: &WorkflowNet, state_cap: usize) -> Result<SoundnessVerdict, Inconclusive> {
    let c = CompiledNet::new(w);
    let describe = |m: &[u16]| dense_to_marking(&c, m).display(w.net()).to_string();

    let mut index: HashMap<DenseMarking, usize> = HashMap::new();
    let mut states: Vec<DenseMarking> = Vec::new();
    let mut reverse: Vec<Vec<usize>> = Vec::new();
    let mut fired = vec![false; c.transitions.len()];
    let mut queue = VecDeque::new();

    let init = c.initial();
    index.insert(init.clone(), 0);
    states.push(init);
    reverse.push(Vec::new());
    queue.push_back(0usize);

    while let Some(s) = queue.pop_front() {
        let m = states[s].clone();
        for t in 0..c.transitions.len() {
            if !c.is_enabled(&m, t) {
                continue;
            }
            fired[t] = true;
            let next = c.fire(&m, t);
            if next.iter().any(|n| *n > 1) {
                return Ok(SoundnessVerdict::Unsafe { marking: describe(&next) });
            }
            let id = match index.get(&next) {
                Some(id) => *id,
                None => {
                    if states.len() >= state_cap {
                        return Err(Inconclusive { cap: state_cap });
                    }
                    let id = states.len();
                    index.insert(next.clone(), id);
                    states.push(next);
                    reverse.push(Vec::new());
                    queue.push_back(id);
                    id
                }
            };
            reverse[id].push(s);
        }
    }

    let mut can_complete = vec![false; states.len()];
    let mut queue: VecDeque<usize> =
        (0..states.len()).filter(|s| c.is_final(&states[*s])).collect();
    for s in &queue {
        can_complete[*s] = true;
    }
    while let Some(s) = queue.pop_front() {
        for r in &reverse[s] {
            if !can_complete[*r] {
                can_complete[*r] = true;
                queue.push_back(*r);
            }
        }
    }
    if let Some(s) = (0..states.len()).find(|s| !can_complete[*s]) {
        return Ok(SoundnessVerdict::CannotComplete { marking: describe(&states[s]) });
    }
    if let Some(t) = fired.iter().position(|f| !f) {
        return Ok(SoundnessVerdict::DeadTransition {
            transition: w.net().transition_name(c.transitions[t]).to_string(),
        });
    }
    Ok(SoundnessVerdict::Sound)
}

pub fn is_sound(w: &WorkflowNet, state_cap: usize) -> Result<bool, Inconclusive> {
    check_soundness(w, state_cap).map(|v| v.is_sound())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{initial_net, WorkflowRoles};

    #[test]
    fn initial_net_fires_start_then_end() {
        let w = initial_net();
        let m0 = w.initial_marking();
        assert_eq!(enabled(&w, &m0), vec![w.start()]);
        let m1 = fire(&w, &m0, w.start()).unwrap();
        let p1 = w.net().find_place("p_1").unwrap();
        assert_eq!(m1, Marking::from_places([p1]));
        assert_eq!(fire(&w, &m1, w.end()).unwrap(), w.final_marking());
        assert!(fire(&w, &m0, w.end()).is_err());
    }

    #[test]
    fn initial_net_is_sound() {
        assert_eq!(check_soundness(&initial_net(), DEFAULT_STATE_CAP), Ok(SoundnessVerdict::Sound));
    }

    #[test]
    fn two_producers_in_parallel_are_unsafe() {
        // start forks into two branches that both feed the same place
        let mut net = LabeledNet::new();
        let ps = net.add_place("ps").unwrap();
        let a = net.add_place("a").unwrap();
        let b = net.add_place("b").unwrap();
        let q = net.add_place("q").unwrap();
        let pe = net.add_place("pe").unwrap();
        let start = net.add_transition("start", None).unwrap();
        let ta = net.add_transition("ta", None).unwrap();
        let tb = net.add_transition("tb", None).unwrap();
        let end = net.add_transition("end", None).unwrap();
        net.add_input_arc(ps, start).unwrap();
        net.add_output_arc(start, a).unwrap();
        net.add_output_arc(start, b).unwrap();
        net.add_input_arc(a, ta).unwrap();
        net.add_input_arc(b, tb).unwrap();
        net.add_output_arc(ta, q).unwrap();
        net.add_output_arc(tb, q).unwrap();
        net.add_input_arc(q, end).unwrap();
        net.add_output_arc(end, pe).unwrap();
        let w = WorkflowNet::new(net, WorkflowRoles { source: ps, sink: pe, start, end }).unwrap();
        assert!(matches!(
            check_soundness(&w, DEFAULT_STATE_CAP),
            Ok(SoundnessVerdict::Unsafe { .. })
        ));
    }

    #[test]
    fn tiny_cap_is_inconclusive() {
        assert_eq!(is_sound(&initial_net(), 1), Err(Inconclusive { cap: 1 }));
    }
}
