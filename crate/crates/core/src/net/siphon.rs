use std::collections::BTreeSet;

use super::{LabeledNet, PlaceId};

/// The largest siphon contained in `allowed`. Places with an input
/// transition that does not consume from the candidate set are removed until
/// nothing changes; the union of all siphons inside `allowed` survives.
pub fn max_siphon_within(net: &LabeledNet, allowed: &BTreeSet<PlaceId>) -> BTreeSet<PlaceId> {
    let mut q: BTreeSet<PlaceId> = allowed.iter().copied().filter(|p| net.contains((*p).into())).collect();
    loop {
        let violating: Vec<PlaceId> = q
            .iter()
            .copied()
            .filter(|p| {
                net.place_preset(*p).iter().any(|t| net.preset(*t).is_disjoint(&q))
            })
            .collect();
        if violating.is_empty() {
            return q;
        }
        for p in violating {
            q.remove(&p);
        }
    }
}
