use serde::Serialize;

use super::{LabeledNet, PlaceId, TransitionId};

/// Place-by-transition token-flow matrix. Rows and columns follow id order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceMatrix {
    pub places: Vec<PlaceId>,
    pub transitions: Vec<TransitionId>,
    entries: Vec<Vec<i8>>,
}

impl IncidenceMatrix {
    pub fn get(&self, row: usize, column: usize) -> i8 {
        self.entries[row][column]
    }

    pub fn row(&self, row: usize) -> &[i8] {
        &self.entries[row]
    }

    pub fn column(&self, column: usize) -> Vec<i8> {
        self.entries.iter().map(|r| r[column]).collect()
    }

    pub fn rows(&self) -> &[Vec<i8>] {
        &self.entries
    }

    pub fn num_rows(&self) -> usize {
        self.places.len()
    }

    pub fn num_columns(&self) -> usize {
        self.transitions.len()
    }

    pub fn place_row(&self, p: PlaceId) -> Option<&[i8]> {
        self.places.iter().position(|x| *x == p).map(|i| self.row(i))
    }

    pub fn transition_column(&self, t: TransitionId) -> Option<Vec<i8>> {
        self.transitions.iter().position(|x| *x == t).map(|j| self.column(j))
    }

    pub fn from_entries(
        places: Vec<PlaceId>,
        transitions: Vec<TransitionId>,
        entries: Vec<Vec<i8>>,
    ) -> Self {
        assert_eq!(entries.len(), places.len());
        assert!(entries.iter().all(|r| r.len() == transitions.len()));
        IncidenceMatrix { places, transitions, entries }
    }
}

pub fn incidence(net: &LabeledNet) -> IncidenceMatrix {
    let places: Vec<PlaceId> = net.places().collect();
    let transitions: Vec<TransitionId> = net.transitions().collect();
    let entries = places
        .iter()
        .map(|p| {
            transitions
                .iter()
                .map(|t| {
                    let consumes = net.preset(*t).contains(p);
                    let produces = net.postset(*t).contains(p);
                    match (consumes, produces) {
                        (true, false) => -1,
                        (false, true) => 1,
                        _ => 0,
                    }
                })
                .collect()
        })
        .collect();
    IncidenceMatrix { places, transitions, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::initial_net;

    #[test]
    fn initial_net_rows() {
        let w = initial_net();
        let n = incidence(w.net());
        let p1 = w.net().find_place("p_1").unwrap();
        let col = |t| n.transitions.iter().position(|x| *x == t).unwrap();
        let row = n.place_row(p1).unwrap();
        assert_eq!(row[col(w.start())], 1);
        assert_eq!(row[col(w.end())], -1);
        let ps = n.place_row(w.source()).unwrap();
        assert_eq!(ps[col(w.start())], -1);
        assert_eq!(ps[col(w.end())], 0);
    }

    #[test]
    fn self_loop_is_zero() {
        let mut net = LabeledNet::new();
        let p = net.add_place("p").unwrap();
        let t = net.add_transition("t", None).unwrap();
        net.add_input_arc(p, t).unwrap();
        net.add_output_arc(t, p).unwrap();
        assert_eq!(incidence(&net).get(0, 0), 0);
    }
}
