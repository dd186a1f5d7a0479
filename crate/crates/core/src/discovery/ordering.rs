use std::collections::BTreeSet;

use serde::Serialize;

use super::DiscoveryError;
use crate::eventlog::{Activity, EventLog, LogStatistics};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ordering {
    Frequency,
    #[default]
    Bfs,
}

impl std::str::FromStr for Ordering {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "frequency" => Ok(Ordering::Frequency),
            "bfs" => Ok(Ordering::Bfs),
            other => Err(format!("unknown ordering `{other}` (expected bfs or frequency)")),
        }
    }
}

/// The order in which activities are added to the net.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ActivityOrder(Vec<Activity>);

impl ActivityOrder {
    pub fn new(activities: Vec<Activity>) -> Option<Self> {
        let distinct: BTreeSet<&Activity> = activities.iter().collect();
        (distinct.len() == activities.len()).then_some(ActivityOrder(activities))
    }

    pub fn as_slice(&self) -> &[Activity] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Activity> {
        self.0.get(i)
    }

    /// The first `i` activities.
    pub fn prefix(&self, i: usize) -> BTreeSet<Activity> {
        self.0.iter().take(i).cloned().collect()
    }
}

fn by_count(stats: &LogStatistics, mut xs: Vec<Activity>) -> Vec<Activity> {
    xs.sort_by(|a, b| stats.count(b).cmp(&stats.count(a)).then_with(|| a.cmp(b)));
    xs
}

/// Activities by descending number of occurrences, ties by name.
pub fn order_frequency(log: &EventLog) -> Result<ActivityOrder, DiscoveryError> {
    if log.is_empty() {
        return Err(DiscoveryError::EmptyLog);
    }
    let stats = log.statistics();
    Ok(ActivityOrder(by_count(&stats, stats.activities().cloned().collect())))
}

/// Activities directly preceding `a` at least once, most frequent first,
/// ties by name.
pub fn sort_preceded(a: &Activity, log: &EventLog) -> Vec<Activity> {
    preceded(&log.statistics(), a)
}

fn preceded(stats: &LogStatistics, a: &Activity) -> Vec<Activity> {
    let mut xs: Vec<(u64, Activity)> = stats
        .activities()
        .map(|b| (stats.directly_follows(b, a), b.clone()))
        .filter(|(n, _)| *n > 0)
        .collect();
    xs.sort_by(|x, y| y.0.cmp(&x.0).then_with(|| x.1.cmp(&y.1)));
    xs.into_iter().map(|(_, b)| b).collect()
}

/// The blocks of the breadth-first ordering: end activities by frequency,
/// then for each placed activity in turn its unplaced direct predecessors.
/// There is one block per activity. When no placed activity is left to
/// expand, the unplaced rest follows as one block by frequency.
pub fn bfs_blocks(log: &EventLog) -> Result<Vec<Vec<Activity>>, DiscoveryError> {
    if log.is_empty() {
        return Err(DiscoveryError::EmptyLog);
    }
    let stats = log.statistics();
    let all: BTreeSet<Activity> = stats.activities().cloned().collect();
    let ends: Vec<Activity> = log.end_activities().into_iter().collect();
    let first = by_count(&stats, ends);
    let mut placed: BTreeSet<Activity> = first.iter().cloned().collect();
    let mut gamma = first.clone();
    let mut blocks = vec![first];
    let mut k = 0;
    while blocks.len() < all.len() {
        let block: Vec<Activity> = if k < gamma.len() {
            k += 1;
            preceded(&stats, &gamma[k - 1]).into_iter().filter(|b| !placed.contains(b)).collect()
        } else {
            by_count(&stats, all.difference(&placed).cloned().collect())
        };
        placed.extend(block.iter().cloned());
        gamma.extend(block.iter().cloned());
        blocks.push(block);
    }
    Ok(blocks)
}

pub fn order_bfs(log: &EventLog) -> Result<ActivityOrder, DiscoveryError> {
    Ok(ActivityOrder(bfs_blocks(log)?.into_iter().flatten().collect()))
}

pub fn order(log: &EventLog, strategy: Ordering) -> Result<ActivityOrder, DiscoveryError> {
    match strategy {
        Ordering::Frequency => order_frequency(log),
        Ordering::Bfs => order_bfs(log),
    }
}

/// The log restricted to the first `i` activities of `gamma`.
pub fn projected_log(log: &EventLog, gamma: &ActivityOrder, i: usize) -> Result<EventLog, DiscoveryError> {
    if i == 0 || i > gamma.len() {
        return Err(DiscoveryError::IndexOutOfRange { index: i, len: gamma.len() });
    }
    Ok(log.project(&gamma.prefix(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eventlog::Trace;

    fn log(variants: &[(&str, u64)]) -> EventLog {
        EventLog::from_variants(variants.iter().map(|(s, n)| {
            let names: Vec<String> = s.chars().map(String::from).collect();
            (Trace::from_names(&names), *n)
        }))
    }

    fn names(xs: &[Activity]) -> String {
        xs.iter().map(|a| a.as_str()).collect()
    }

    #[test]
    fn frequency_order_breaks_ties_by_name() {
        assert_eq!(names(order_frequency(&log(&[("aab", 1)])).unwrap().as_slice()), "ab");
        assert_eq!(names(order_frequency(&log(&[("dgh", 76), ("gdh", 24)])).unwrap().as_slice()), "dgh");
        assert_eq!(names(order_frequency(&log(&[("q", 2)])).unwrap().as_slice()), "q");
        assert!(order_frequency(&EventLog::new()).is_err());
    }

    #[test]
    fn preceded_counts() {
        let l = log(&[("dgh", 76), ("gdh", 24)]);
        assert_eq!(names(&sort_preceded(&Activity::new("h"), &l)), "gd");
        assert!(sort_preceded(&Activity::new("d"), &log(&[("dgh", 1)])).is_empty());
        assert_eq!(names(&sort_preceded(&Activity::new("a"), &log(&[("aa", 1)]))), "a");
    }

    #[test]
    fn bfs_on_small_logs() {
        assert_eq!(names(order_bfs(&log(&[("ab", 1)])).unwrap().as_slice()), "ba");
        let blocks = bfs_blocks(&log(&[("ab", 3), ("xb", 1), ("ba", 1)])).unwrap();
        let flat: Vec<Activity> = blocks.iter().flatten().cloned().collect();
        assert_eq!(names(&flat), "bax");
        assert_eq!(blocks.len(), 3);
    }

    #[test]
    fn projection_bounds() {
        let l = log(&[("ab", 1)]);
        let g = order_bfs(&l).unwrap();
        assert_eq!(projected_log(&l, &g, 2).unwrap(), l);
        assert!(projected_log(&l, &g, 0).is_err());
        assert!(projected_log(&l, &g, 3).is_err());
        assert!(ActivityOrder::new(vec![Activity::new("a"), Activity::new("a")]).is_none());
    }
}
