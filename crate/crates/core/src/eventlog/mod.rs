//! Event logs as multisets of activity sequences.
//!
//! Besides the data model this module holds the log statistics used to order
//! activities and to locate where a new activity belongs: occurrence and
//! directly-follows counts, the causal strength between two activities, and
//! the threshold-based preceding/following sets.

mod csv_io;
pub(crate) mod xes;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Rational};

pub use csv_io::{parse_csv, write_csv};
pub use xes::parse_xes;

#[derive(Debug, Error)]
pub enum LogError {
    #[error("malformed XML at line {line}, column {column}: {message}")]
    Xml { line: usize, column: usize, message: String },
    #[error("empty document")]
    EmptyDocument,
    #[error("not an XES log: {0}")]
    NotXes(String),
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("row {row}: cannot parse order value `{value}`")]
    BadOrderValue { row: usize, value: String },
    #[error("row {row}: empty activity")]
    EmptyActivity { row: usize },
    #[error("csv: {0}")]
    Csv(#[from] ::csv::Error),
    #[error("empty activity name")]
    EmptyName,
}

/// An activity label. Names are compared case-sensitively.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Activity(String);

impl Activity {
    /// # Panics
    /// If `name` is empty.
    pub fn new(name: impl Into<String>) -> Self {
        Self::parse(name).expect("activity names are non-empty")
    }

    pub fn parse(name: impl Into<String>) -> Result<Self, LogError> {
        let name = name.into();
        if name.is_empty() {
            return Err(LogError::EmptyName);
        }
        Ok(Activity(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite sequence of activities; possibly empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Trace(Vec<Activity>);

impl Trace {
    pub fn new(events: Vec<Activity>) -> Self {
        Trace(events)
    }

    /// Convenience constructor from activity names.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        Trace(names.iter().map(|n| Activity::new(n.as_ref())).collect())
    }

    pub fn events(&self) -> &[Activity] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Activity> {
        self.0.iter()
    }

    pub fn first(&self) -> Option<&Activity> {
        self.0.first()
    }

    pub fn last(&self) -> Option<&Activity> {
        self.0.last()
    }

    /// Keeps only the activities in `keep`, preserving order.
    pub fn project(&self, keep: &BTreeSet<Activity>) -> Trace {
        Trace(self.0.iter().filter(|a| keep.contains(*a)).cloned().collect())
    }
}

impl FromIterator<Activity> for Trace {
    fn from_iter<I: IntoIterator<Item = Activity>>(iter: I) -> Self {
        Trace(iter.into_iter().collect())
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(">")
    }
}

/// A multiset of traces. Immutable once built; every stored count is positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EventLog {
    variants: BTreeMap<Trace, u64>,
}

impl EventLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_variants<I>(variants: I) -> Self
    where
        I: IntoIterator<Item = (Trace, u64)>,
    {
        let mut log = EventLog::new();
        for (trace, count) in variants {
            log.add(trace, count);
        }
        log
    }

    /// Adds `count` copies of `trace`; zero counts are ignored.
    pub fn add(&mut self, trace: Trace, count: u64) {
        if count > 0 {
            *self.variants.entry(trace).or_insert(0) += count;
        }
    }

    pub fn variants(&self) -> impl Iterator<Item = (&Trace, u64)> + '_ {
        self.variants.iter().map(|(t, c)| (t, *c))
    }

    pub fn multiplicity(&self, trace: &Trace) -> u64 {
        self.variants.get(trace).copied().unwrap_or(0)
    }

    pub fn num_variants(&self) -> usize {
        self.variants.len()
    }

    pub fn num_traces(&self) -> u64 {
        self.variants.values().sum()
    }

    pub fn num_events(&self) -> u64 {
        self.variants.iter().map(|(t, c)| t.len() as u64 * c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.variants.is_empty()
    }

    pub fn activities(&self) -> BTreeSet<Activity> {
        self.variants.keys().flat_map(|t| t.iter().cloned()).collect()
    }

    /// Restricts every trace to `keep`. Traces that become equal merge their
    /// counts; traces that lose all events remain as the empty trace.
    pub fn project(&self, keep: &BTreeSet<Activity>) -> EventLog {
        EventLog::from_variants(self.variants.iter().map(|(t, c)| (t.project(keep), *c)))
    }

    pub fn count_activity(&self, a: &Activity) -> u64 {
        self.variants
            .iter()
            .map(|(t, c)| t.iter().filter(|x| *x == a).count() as u64 * c)
            .sum()
    }

    pub fn count_directly_follows(&self, a: &Activity, b: &Activity) -> u64 {
        self.variants
            .iter()
            .map(|(t, c)| {
                t.events().windows(2).filter(|w| &w[0] == a && &w[1] == b).count() as u64 * c
            })
            .sum()
    }

    /// Causal strength of `a` followed by `b`, in (-1, 1].
    pub fn causality(&self, a: &Activity, b: &Activity) -> Rational {
        let ab = self.count_directly_follows(a, b);
        if a == b {
            causality_from_counts(ab, ab, true)
        } else {
            causality_from_counts(ab, self.count_directly_follows(b, a), false)
        }
    }

    /// Activities `x` of the log with `caus(x, a) >= c`.
    pub fn preceding_set(&self, a: &Activity, c: &CausalThreshold) -> BTreeSet<Activity> {
        self.statistics().preceding_set(a, c)
    }

    /// Activities `x` of the log with `caus(a, x) >= c`.
    pub fn following_set(&self, a: &Activity, c: &CausalThreshold) -> BTreeSet<Activity> {
        self.statistics().following_set(a, c)
    }

    pub fn start_activities(&self) -> BTreeSet<Activity> {
        self.variants.keys().filter_map(|t| t.first().cloned()).collect()
    }

    pub fn end_activities(&self) -> BTreeSet<Activity> {
        self.variants.keys().filter_map(|t| t.last().cloned()).collect()
    }

    /// Counts for every activity and directly-follows pair, in one pass.
    pub fn statistics(&self) -> LogStatistics {
        LogStatistics::new(self)
    }

    /// Keeps the most frequent variants until at least `coverage` of all
    /// traces is retained. Equal counts are ordered by trace, lexicographically.
    pub fn filter_variant_coverage(&self, coverage: &Rational) -> EventLog {
        let total = self.num_traces();
        let needed = coverage * Rational::from_integer(BigInt::from(total));
        let mut ranked: Vec<(&Trace, u64)> = self.variants().collect();
        ranked.sort_by(|(ta, ca), (tb, cb)| cb.cmp(ca).then_with(|| ta.cmp(tb)));
        let mut kept = EventLog::new();
        let mut covered = 0u64;
        for (trace, count) in ranked {
            if rational::from_u64(covered) >= needed {
                break;
            }
            kept.add(trace.clone(), count);
            covered += count;
        }
        kept
    }
}

fn causality_from_counts(ab: u64, ba: u64, same: bool) -> Rational {
    if same {
        Rational::new(BigInt::from(ab), BigInt::from(ab + 1))
    } else {
        Rational::new(
            BigInt::from(ab) - BigInt::from(ba),
            BigInt::from(ab) + BigInt::from(ba) + 1,
        )
    }
}

/// Occurrence and directly-follows counts of a log.
#[derive(Clone, Debug, Default)]
pub struct LogStatistics {
    activity_counts: BTreeMap<Activity, u64>,
    directly_follows: BTreeMap<(Activity, Activity), u64>,
}

impl LogStatistics {
    pub fn new(log: &EventLog) -> Self {
        let mut stats = LogStatistics::default();
        for (trace, count) in log.variants() {
            for a in trace.iter() {
                *stats.activity_counts.entry(a.clone()).or_insert(0) += count;
            }
            for w in trace.events().windows(2) {
                *stats.directly_follows.entry((w[0].clone(), w[1].clone())).or_insert(0) += count;
            }
        }
        stats
    }

    pub fn activities(&self) -> impl Iterator<Item = &Activity> + '_ {
        self.activity_counts.keys()
    }

    pub fn count(&self, a: &Activity) -> u64 {
        self.activity_counts.get(a).copied().unwrap_or(0)
    }

    pub fn directly_follows(&self, a: &Activity, b: &Activity) -> u64 {
        self.directly_follows.get(&(a.clone(), b.clone())).copied().unwrap_or(0)
    }

    pub fn causality(&self, a: &Activity, b: &Activity) -> Rational {
        let ab = self.directly_follows(a, b);
        if a == b {
            causality_from_counts(ab, ab, true)
        } else {
            causality_from_counts(ab, self.directly_follows(b, a), false)
        }
    }

    pub fn preceding_set(&self, a: &Activity, c: &CausalThreshold) -> BTreeSet<Activity> {
        self.activities().filter(|x| self.causality(x, a) >= *c.value()).cloned().collect()
    }

    pub fn following_set(&self, a: &Activity, c: &CausalThreshold) -> BTreeSet<Activity> {
        self.activities().filter(|x| self.causality(a, x) >= *c.value()).cloned().collect()
    }
}

/// Threshold on causal strength, in [0, 1].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalThreshold(Rational);

impl CausalThreshold {
    pub fn new(value: Rational) -> Option<Self> {
        let zero = rational::ratio(0, 1);
        let one = rational::ratio(1, 1);
        (value >= zero && value <= one).then_some(CausalThreshold(value))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }
}

impl Default for CausalThreshold {
    fn default() -> Self {
        CausalThreshold(rational::ratio(9, 10))
    }
}

impl Serialize for CausalThreshold {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        rational::serialize_exact(&self.0, serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn a(name: &str) -> Activity {
        Activity::new(name)
    }

    fn log(variants: &[(&[&str], u64)]) -> EventLog {
        EventLog::from_variants(variants.iter().map(|(t, c)| (Trace::from_names(t), *c)))
    }

    fn set(names: &[&str]) -> BTreeSet<Activity> {
        names.iter().map(|n| a(n)).collect()
    }

    #[test]
    fn projection_example_from_preliminaries() {
        let l = log(&[(&["a", "b", "a"], 6), (&["a", "b", "c"], 6), (&["b", "a", "c"], 2)]);
        let projected = l.project(&set(&["b", "c"]));
        assert_eq!(projected, log(&[(&["b"], 6), (&["b", "c"], 8)]));
    }

    #[test]
    fn projection_onto_nothing_keeps_empty_traces() {
        let l = log(&[(&["a", "b"], 3), (&["c"], 2)]);
        assert_eq!(l.project(&BTreeSet::new()), log(&[(&[], 5)]));
    }

    #[test]
    fn counts_and_causality_on_small_logs() {
        let aa = log(&[(&["a", "a"], 3)]);
        assert_eq!(aa.count_activity(&a("a")), 6);
        assert_eq!(aa.count_activity(&a("x")), 0);
        assert_eq!(log(&[(&["a", "a", "a"], 1)]).count_directly_follows(&a("a"), &a("a")), 2);
        assert_eq!(log(&[(&["a", "a"], 1)]).causality(&a("a"), &a("a")), ratio(1, 2));
    }

    #[test]
    fn zero_threshold_includes_direct_predecessors() {
        let l = log(&[(&["b", "a"], 1)]);
        let c = CausalThreshold::new(ratio(0, 1)).unwrap();
        assert!(l.preceding_set(&a("a"), &c).contains(&a("b")));
        assert!(EventLog::new().following_set(&a("a"), &CausalThreshold::default()).is_empty());
    }

    #[test]
    fn start_and_end_skip_empty_traces() {
        let l = log(&[(&[], 1)]);
        assert!(l.start_activities().is_empty());
        assert!(l.end_activities().is_empty());
    }

    #[test]
    fn threshold_bounds() {
        assert!(CausalThreshold::new(ratio(3, 2)).is_none());
        assert!(CausalThreshold::new(ratio(-1, 2)).is_none());
        assert_eq!(CausalThreshold::default().value(), &ratio(9, 10));
    }

    #[test]
    fn variant_coverage_keeps_most_frequent_first() {
        let l = log(&[(&["a"], 50), (&["b"], 30), (&["c"], 15), (&["d"], 5)]);
        let kept = l.filter_variant_coverage(&ratio(95, 100));
        assert_eq!(kept, log(&[(&["a"], 50), (&["b"], 30), (&["c"], 15)]));
        assert_eq!(l.filter_variant_coverage(&ratio(1, 1)), l);
        // ties: lexicographic trace order decides which variant goes first
        let tied = log(&[(&["y"], 1), (&["x"], 1)]);
        assert_eq!(tied.filter_variant_coverage(&ratio(1, 2)), log(&[(&["x"], 1)]));
    }
}
