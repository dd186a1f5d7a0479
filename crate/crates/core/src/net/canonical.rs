//! Canonical serialization of workflow nets up to renaming of nodes.
//!
//! Node colors start from (kind, role, label) and are refined by the colors
//! of in- and out-neighbors until stable. Remaining ties are broken by
//! individualizing each member of the first non-singleton class in turn and
//! keeping the smallest serialization. The branching is bounded by
//! [`LEAF_BUDGET`]; beyond it the first member is taken, which keeps the
//! result deterministic but may separate isomorphic nets with large
//! automorphism groups.

use std::collections::BTreeMap;

use super::{NodeId, WorkflowNet};

pub const LEAF_BUDGET: usize = 64;

struct Graph {
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    desc: Vec<String>,
}

/// Serialization that is equal for two nets iff they are isomorphic under a
/// label- and role-preserving renaming (exact within the leaf budget).
pub fn canonical_form(w: &WorkflowNet) -> String {
    let net = w.net();
    let nodes: Vec<NodeId> = net.nodes().collect();
    let index: BTreeMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, x)| (*x, i)).collect();
    let roles = w.roles();
    let desc: Vec<String> = nodes
        .iter()
        .map(|x| match x {
            NodeId::Place(p) => {
                let role = if *p == roles.source {
                    "s"
                } else if *p == roles.sink {
                    "e"
                } else {
                    ""
                };
                format!("P{role}")
            }
            NodeId::Transition(t) => {
                let role = if *t == roles.start {
                    "s"
                } else if *t == roles.end {
                    "e"
                } else {
                    ""
                };
                match net.label(*t) {
                    Some(a) => format!("T{role}{:?}", a.as_str()),
                    None => format!("T{role}"),
                }
            }
        })
        .collect();
    let out = nodes.iter().map(|x| net.successors(*x).iter().map(|y| index[y]).collect()).collect();
    let inc =
        nodes.iter().map(|x| net.predecessors(*x).iter().map(|y| index[y]).collect()).collect();
    let g = Graph { out, inc, desc };

    let initial = rank(&g.desc);
    let colors = refine(&g, initial);
    let mut best: Option<String> = None;
    let mut leaves = 0usize;
    search(&g, colors, &mut best, &mut leaves);
    best.expect("at least one leaf")
}

/// Dense ranks of arbitrary ordered keys.
fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).expect("present")).collect()
}

fn num_classes(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn refine(g: &Graph, mut colors: Vec<usize>) -> Vec<usize> {
    let mut classes = num_classes(&colors);
    loop {
        let keys: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..colors.len())
            .map(|i| {
                let mut o: Vec<usize> = g.out[i].iter().map(|j| colors[*j]).collect();
                let mut n: Vec<usize> = g.inc[i].iter().map(|j| colors[*j]).collect();
                o.sort_unstable();
                n.sort_unstable();
                (colors[i], o, n)
            })
            .collect();
        let next = rank(&keys);
        let next_classes = num_classes(&next);
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

fn search(g: &Graph, colors: Vec<usize>, best: &mut Option<String>, leaves: &mut usize) {
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, c) in colors.iter().enumerate() {
        members.entry(*c).or_default().push(i);
    }
    let Some(cell) = members.values().find(|m| m.len() > 1) else {
        *leaves += 1;
        let s = serialize(g, &colors);
        if best.as_ref().map_or(true, |b| s < *b) {
            *best = Some(s);
        }
        return;
    };
    for (k, v) in cell.iter().enumerate() {
        if k > 0 && *leaves >= LEAF_BUDGET {
            break;
        }
        // v keeps the class color, the rest of its class moves just above
        let keys: Vec<(usize, bool)> =
            colors.iter().enumerate().map(|(i, c)| (*c, cell.contains(&i) && i != *v)).collect();
        let split = refine(g, rank(&keys));
        search(g, split, best, leaves);
    }
}

fn serialize(g: &Graph, colors: &[usize]) -> String {
    let mut order: Vec<usize> = (0..colors.len()).collect();
    order.sort_by_key(|i| colors[*i]);
    let pos: Vec<usize> = {
        let mut pos = vec![0; order.len()];
        for (k, i) in order.iter().enumerate() {
            pos[*i] = k;
        }
        pos
    };
    let mut s = String::new();
    for i in &order {
        s.push_str(&g.desc[*i]);
        s.push(';');
    }
    let mut arcs: Vec<(usize, usize)> = Vec::new();
    for i in 0..order.len() {
        for j in &g.out[i] {
            arcs.push((pos[i], pos[*j]));
        }
    }
    arcs.sort_unstable();
    s.push('|');
    for (a, b) in arcs {
        s.push_str(&format!("{a}>{b},"));
    }
    s
}
