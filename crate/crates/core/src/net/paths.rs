use std::collections::BTreeSet;

use super::{LabeledNet, NodeId};

/// Default number of search steps per (source, target) pair.
pub const PATH_SEARCH_BUDGET: usize = 2_000_000;

/// Union of the nodes on elementary paths from any source to any target.
///
/// Deciding whether a node lies on a simple path between two others is hard
/// on general digraphs, so the search enumerates simple paths depth-first,
/// restricted to nodes that can still reach the target. If a pair exhausts
/// the step budget, the nodes reachable from the source and co-reachable to
/// the target are added instead, which over-approximates the exact answer.
pub fn elementary_path_nodes(
    net: &LabeledNet,
    sources: &BTreeSet<NodeId>,
    targets: &BTreeSet<NodeId>,
) -> BTreeSet<NodeId> {
    elementary_path_nodes_with_budget(net, sources, targets, PATH_SEARCH_BUDGET)
}

pub fn elementary_path_nodes_with_budget(
    net: &LabeledNet,
    sources: &BTreeSet<NodeId>,
    targets: &BTreeSet<NodeId>,
    budget: usize,
) -> BTreeSet<NodeId> {
    let nodes: Vec<NodeId> = net.nodes().collect();
    let index = |x: NodeId| nodes.binary_search(&x).ok();
    let succ: Vec<Vec<usize>> = nodes
        .iter()
        .map(|x| net.successors(*x).into_iter().filter_map(index).collect())
        .collect();

    let mut found = vec![false; nodes.len()];
    for s in sources.iter().filter_map(|x| index(*x)) {
        for t in targets.iter().filter_map(|x| index(*x)) {
            if s == t {
                found[s] = true;
                continue;
            }
            let from_s = net.reachable_from(nodes[s]);
            let to_t = net.coreachable_to(nodes[t]);
            let relevant: Vec<bool> =
                nodes.iter().map(|x| from_s.contains(x) && to_t.contains(x)).collect();
            if !relevant[s] {
                continue;
            }
            let exhausted = !search_pair(&succ, s, t, &relevant, &mut found, budget);
            if exhausted {
                log::debug!("path search budget exhausted; over-approximating");
                for (i, r) in relevant.iter().enumerate() {
                    found[i] |= *r;
                }
            }
        }
    }
    nodes.iter().zip(found).filter(|(_, f)| *f).map(|(x, _)| *x).collect()
}

/// Returns false if the budget ran out.
fn search_pair(
    succ: &[Vec<usize>],
    s: usize,
    t: usize,
    relevant: &[bool],
    found: &mut [bool],
    budget: usize,
) -> bool {
    let mut on_stack = vec![false; succ.len()];
    // (node, next successor index)
    let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
    on_stack[s] = true;
    let mut steps = 0usize;
    let target_total = relevant.iter().filter(|r| **r).count();
    while let Some(&mut (x, ref mut next)) = stack.last_mut() {
        steps += 1;
        if steps > budget {
            return false;
        }
        if *next < succ[x].len() {
            let y = succ[x][*next];
            *next += 1;
            if on_stack[y] || !relevant[y] {
                continue;
            }
            if y == t {
                found[t] = true;
                for (z, _) in &stack {
                    found[*z] = true;
                }
                if relevant.iter().zip(found.iter()).filter(|(r, f)| **r && **f).count()
                    == target_total
                {
                    return true;
                }
                continue;
            }
            on_stack[y] = true;
            stack.push((y, 0));
        } else {
            on_stack[x] = false;
            stack.pop();
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::initial_net;

    #[test]
    fn single_node_path() {
        let w = initial_net();
        let x: NodeId = w.start().into();
        let s = BTreeSet::from([x]);
        assert_eq!(elementary_path_nodes(w.net(), &s, &s), s);
    }

    #[test]
    fn disconnected_pair_is_empty() {
        let w = initial_net();
        let from = BTreeSet::from([NodeId::from(w.end())]);
        let to = BTreeSet::from([NodeId::from(w.start())]);
        assert!(elementary_path_nodes(w.net(), &from, &to).is_empty());
    }

    #[test]
    fn sequence_covers_every_node_between() {
        let w = initial_net();
        let from = BTreeSet::from([NodeId::from(w.source())]);
        let to = BTreeSet::from([NodeId::from(w.sink())]);
        assert_eq!(elementary_path_nodes(w.net(), &from, &to).len(), 5);
    }

    #[test]
    fn budget_exhaustion_over_approximates() {
        let w = initial_net();
        let from = BTreeSet::from([NodeId::from(w.source())]);
        let to = BTreeSet::from([NodeId::from(w.sink())]);
        assert_eq!(elementary_path_nodes_with_budget(w.net(), &from, &to, 1).len(), 5);
    }
}
