//! Alignment-based fitness, escaping-edges precision and their F1 score.

mod align;

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::eventlog::{Activity, EventLog, Trace};
use crate::net::compiled::{CompiledNet, DenseMarking};
use crate::net::{TransitionId, WorkflowNet};
use crate::rational::{from_u64, serialize_exact, Rational};

use align::{align, visible_closure, Step};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum ConformanceError {
    #[error("state space exceeds the cap of {cap} states")]
    Inconclusive { cap: usize },
    #[error("the final marking is not reachable")]
    NoCompletion,
}

/// Kinds in the order used to break ties between equally cheap alignments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MoveKind {
    #[serde(rename = "synchronous")]
    Synchronous,
    #[serde(rename = "model_move_silent")]
    ModelSilent,
    #[serde(rename = "model_move_visible")]
    ModelVisible,
    #[serde(rename = "log_move")]
    LogMove,
}

impl MoveKind {
    pub fn cost(self) -> u64 {
        match self {
            MoveKind::Synchronous | MoveKind::ModelSilent => 0,
            MoveKind::ModelVisible | MoveKind::LogMove => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Move {
    pub kind: MoveKind,
    pub activity: Option<Activity>,
    pub transition: Option<TransitionId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Alignment {
    pub moves: Vec<Move>,
    pub cost: u64,
}

impl Alignment {
    /// Log activities in order; equals the aligned trace.
    pub fn log_projection(&self) -> Vec<Activity> {
        self.moves
            .iter()
            .filter(|m| matches!(m.kind, MoveKind::Synchronous | MoveKind::LogMove))
            .filter_map(|m| m.activity.clone())
            .collect()
    }

    /// Fired transitions in order.
    pub fn model_projection(&self) -> Vec<TransitionId> {
        self.moves.iter().filter_map(|m| m.transition).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Score {
    #[serde(serialize_with = "serialize_exact")]
    pub fitness: Rational,
    #[serde(serialize_with = "serialize_exact")]
    pub precision: Rational,
    #[serde(serialize_with = "serialize_exact")]
    pub f1: Rational,
}

impl Score {
    pub fn new(fitness: Rational, precision: Rational) -> Self {
        let f1 = f1(&fitness, &precision);
        Score { fitness, precision, f1 }
    }
}

/// Harmonic mean, 0 when both inputs are 0.
pub fn f1(fitness: &Rational, precision: &Rational) -> Rational {
    let sum = fitness + precision;
    if sum.is_zero() {
        return Rational::zero();
    }
    Rational::from_integer(2.into()) * fitness * precision / sum
}

/// Compiled net plus the cost of its cheapest empty-trace alignment.
pub(crate) struct Replayer {
    net: CompiledNet,
    state_cap: usize,
    empty_cost: u64,
}

struct VariantAlignment<'a> {
    trace: &'a Trace,
    weight: u64,
    cost: u64,
    steps: Vec<Step>,
}

impl Replayer {
    pub fn new(w: &WorkflowNet, state_cap: usize) -> Result<Self, ConformanceError> {
        let net = CompiledNet::new(w);
        let (empty_cost, _) = align(&net, &[], state_cap)?;
        Ok(Replayer { net, state_cap, empty_cost })
    }

    fn encode(&self, trace: &Trace) -> Vec<Option<usize>> {
        trace.iter().map(|a| self.net.label_index(a)).collect()
    }

    fn align(&self, trace: &Trace) -> Result<(u64, Vec<Step>), ConformanceError> {
        align(&self.net, &self.encode(trace), self.state_cap)
    }

    fn trace_fitness(&self, len: usize, cost: u64) -> Rational {
        let denom = len as u64 + self.empty_cost;
        if denom == 0 {
            return Rational::one();
        }
        Rational::one() - from_u64(cost) / from_u64(denom)
    }

    fn align_all<'a>(&self, log: &'a EventLog) -> Result<Vec<VariantAlignment<'a>>, ConformanceError> {
        let variants: Vec<(&Trace, u64)> = log.variants().collect();
        variants
            .par_iter()
            .map(|(trace, weight)| {
                let (cost, steps) = self.align(trace)?;
                Ok(VariantAlignment { trace, weight: *weight, cost, steps })
            })
            .collect()
    }

    /// Aligns variants by descending weight and stops as soon as the
    /// fitness is certain to end below `theta`.
    fn align_above<'a>(
        &self,
        log: &'a EventLog,
        theta: &Rational,
    ) -> Result<Option<Vec<VariantAlignment<'a>>>, ConformanceError> {
        let mut variants: Vec<(&Trace, u64)> = log.variants().collect();
        variants.sort_by(|x, y| y.1.cmp(&x.1).then_with(|| x.0.cmp(y.0)));
        let total = from_u64(log.num_traces());
        let budget = (Rational::one() - theta) * &total;
        let mut lost = Rational::zero();
        let mut out = Vec::with_capacity(variants.len());
        for (trace, weight) in variants {
            let (cost, steps) = self.align(trace)?;
            if cost > 0 {
                lost += from_u64(weight) * (Rational::one() - self.trace_fitness(trace.len(), cost));
                if lost > budget {
                    return Ok(None);
                }
            }
            out.push(VariantAlignment { trace, weight, cost, steps });
        }
        Ok(Some(out))
    }

    fn fitness_of(&self, aligned: &[VariantAlignment<'_>]) -> Rational {
        let total: u64 = aligned.iter().map(|v| v.weight).sum();
        if total == 0 {
            return Rational::one();
        }
        let sum = aligned.iter().fold(Rational::zero(), |acc, v| {
            acc + from_u64(v.weight) * self.trace_fitness(v.trace.len(), v.cost)
        });
        sum / from_u64(total)
    }

    fn precision_of(&self, aligned: &[VariantAlignment<'_>]) -> Result<Rational, ConformanceError> {
        let net = &self.net;
        // state: visible prefix fired so far and the marking right after it
        let mut states: HashMap<(Vec<usize>, DenseMarking), (u64, Vec<bool>)> = HashMap::new();
        let fresh = || (0u64, vec![false; net.label_names.len()]);
        for v in aligned {
            let mut m = net.initial();
            let mut state = (Vec::new(), m.clone());
            states.entry(state.clone()).or_insert_with(fresh).0 += v.weight;
            for t in v.steps.iter().filter_map(|s| s.transition) {
                m = net.fire(&m, t);
                if let Some(l) = net.labels[t] {
                    states.get_mut(&state).expect("visited").1[l] = true;
                    let mut prefix = state.0.clone();
                    prefix.push(l);
                    state = (prefix, m.clone());
                    states.entry(state.clone()).or_insert_with(fresh).0 += v.weight;
                }
            }
        }
        let mut closures: HashMap<&DenseMarking, Vec<usize>> = HashMap::new();
        let mut escaping = 0u128;
        let mut allowed = 0u128;
        for ((_, m), (weight, observed)) in &states {
            let enabled = match closures.get(m) {
                Some(e) => e,
                None => closures.entry(m).or_insert(visible_closure(net, m, self.state_cap)?),
            };
            let missed = enabled.iter().filter(|l| !observed[**l]).count();
            escaping += u128::from(*weight) * missed as u128;
            allowed += u128::from(*weight) * enabled.len() as u128;
        }
        if allowed == 0 {
            return Ok(Rational::one());
        }
        Ok(Rational::one() - Rational::new(escaping.into(), allowed.into()))
    }

    pub fn score(&self, log: &EventLog) -> Result<Score, ConformanceError> {
        let aligned = self.align_all(log)?;
        Ok(Score::new(self.fitness_of(&aligned), self.precision_of(&aligned)?))
    }

    /// Scores `log`, or `None` when fitness is below `theta`.
    pub fn score_above(&self, log: &EventLog, theta: &Rational) -> Result<Option<Score>, ConformanceError> {
        let Some(aligned) = self.align_above(log, theta)? else {
            return Ok(None);
        };
        let fitness = self.fitness_of(&aligned);
        if fitness < *theta {
            return Ok(None);
        }
        Ok(Some(Score::new(fitness, self.precision_of(&aligned)?)))
    }
}

/// A cheapest alignment of `trace` with a complete firing sequence of `w`.
/// Activities without a transition in `w` become log moves.
pub fn optimal_alignment(
    w: &WorkflowNet,
    trace: &Trace,
    state_cap: usize,
) -> Result<Alignment, ConformanceError> {
    let net = CompiledNet::new(w);
    let encoded: Vec<Option<usize>> = trace.iter().map(|a| net.label_index(a)).collect();
    let (cost, steps) = align(&net, &encoded, state_cap)?;
    let moves = steps
        .iter()
        .map(|s| Move {
            kind: s.kind,
            activity: s.event.map(|i| trace.events()[i].clone()),
            transition: s.transition.map(|t| net.transitions[t]),
        })
        .collect();
    Ok(Alignment { moves, cost })
}

/// Multiplicity-weighted mean of per-trace fitness
/// `1 - cost / (|trace| + cost of the empty trace)`. Traces where both terms
/// of the fraction are zero count as fitting; an empty log has fitness 1.
pub fn fitness(w: &WorkflowNet, log: &EventLog, state_cap: usize) -> Result<Rational, ConformanceError> {
    let r = Replayer::new(w, state_cap)?;
    Ok(r.fitness_of(&r.align_all(log)?))
}

/// Escaping-edges precision. Each state is a prefix of visible model moves
/// of an optimal alignment together with the marking it reaches; activities
/// enabled there but never taken next in the log escape. An empty log has
/// precision 1.
pub fn precision(w: &WorkflowNet, log: &EventLog, state_cap: usize) -> Result<Rational, ConformanceError> {
    let r = Replayer::new(w, state_cap)?;
    r.precision_of(&r.align_all(log)?)
}

/// Fitness, precision and F1 in one pass over the log.
pub fn evaluate(w: &WorkflowNet, log: &EventLog, state_cap: usize) -> Result<Score, ConformanceError> {
    Replayer::new(w, state_cap)?.score(log)
}
