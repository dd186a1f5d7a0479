use std::collections::BTreeSet;

use proptest::prelude::*;
use synthminer_core::net::canonical::canonical_form;
use synthminer_core::net::{is_free_choice, is_sound, DEFAULT_STATE_CAP};
use synthminer_core::patterns::{candidate_set, loop_strict, loop_tau, skip};
use synthminer_core::synthesis::EnumerationCaps;
use synthminer_core::testkit::{act, net_gh, net_dgh, language, random_net_sequence, rng};
use synthminer_core::{Activity, NodeId, WorkflowNet};

fn names(net: &WorkflowNet) -> (BTreeSet<String>, BTreeSet<String>) {
    let n = net.net();
    (
        n.places().map(|p| n.place_name(p).to_string()).collect(),
        n.transitions().map(|t| n.transition_name(t).to_string()).collect(),
    )
}

fn arcs(w: &WorkflowNet, t: &str) -> (BTreeSet<String>, BTreeSet<String>) {
    let n = w.net();
    let t = n.find_transition(t).unwrap();
    (
        n.preset(t).iter().map(|p| n.place_name(*p).to_string()).collect(),
        n.postset(t).iter().map(|p| n.place_name(*p).to_string()).collect(),
    )
}

fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn skip_adds_t4_next_to_t3() {
    let a = net_dgh();
    let b = skip(&a, &act("d")).unwrap();
    let (pa, ta) = names(&a);
    let (pb, tb) = names(&b);
    assert_eq!(pa, pb);
    assert_eq!(tb.difference(&ta).collect::<Vec<_>>(), vec!["t_4"]);
    assert_eq!(arcs(&b, "t_4"), arcs(&b, "t_3"));
    assert!(b.net().is_silent(b.net().find_transition("t_4").unwrap()));
}

#[test]
fn strict_loop_adds_p6_t4_and_t5() {
    let a = net_dgh();
    let d = loop_strict(&a, &act("d")).unwrap();
    let (pa, ta) = names(&a);
    let (pd, td) = names(&d);
    assert_eq!(pd.difference(&pa).cloned().collect::<BTreeSet<_>>(), set(&["p_6"]));
    assert_eq!(td.difference(&ta).cloned().collect::<BTreeSet<_>>(), set(&["t_4", "t_5"]));
    assert_eq!(arcs(&d, "t_3"), (set(&["p_5"]), set(&["p_6"])));
    assert_eq!(arcs(&d, "t_4"), (set(&["p_6"]), set(&["p_4"])));
    assert_eq!(arcs(&d, "t_5"), (set(&["p_6"]), set(&["p_5"])));
    assert!(is_sound(&d, DEFAULT_STATE_CAP).unwrap());
}

#[test]
fn loop_tau_swaps_labels_of_t3_and_t5() {
    let a = net_dgh();
    let s = loop_strict(&a, &act("d")).unwrap();
    let t = loop_tau(&a, &act("d")).unwrap();
    let label = |w: &WorkflowNet, n: &str| w.net().label(w.net().find_transition(n).unwrap()).cloned();
    assert_eq!(label(&s, "t_3"), Some(act("d")));
    assert_eq!(label(&s, "t_5"), None);
    assert_eq!(label(&t, "t_3"), None);
    assert_eq!(label(&t, "t_5"), Some(act("d")));
    for n in ["t_1", "t_2", "t_4"] {
        assert_eq!(label(&s, n), label(&t, n));
    }
}

#[test]
fn loop_tau_makes_the_activity_repeatable_from_zero() {
    let w = net_dgh();
    let t = loop_tau(&w, &act("d")).unwrap();
    let words = language(&t, 10, 100_000).unwrap();
    let count_d = |u: &Vec<Activity>| u.iter().filter(|x| x.as_str() == "d").count();
    let counts: BTreeSet<usize> = words.iter().map(count_d).collect();
    assert!(counts.is_superset(&BTreeSet::from([0, 1, 2, 3])), "{counts:?}");
}

#[test]
fn iteration_three_candidates_include_skip_and_loop() {
    let c = net_gh();
    let v: BTreeSet<NodeId> =
        ["t_start", "p_3", "t_2", "p_2", "t_1"].iter().map(|n| c.net().find_node(n).unwrap()).collect();
    let d = act("d");
    let cands = candidate_set(&c, &v, &d, &EnumerationCaps::default());
    let forms: BTreeSet<String> = cands.iter().map(|x| x.canonical.clone()).collect();
    let skipped = skip(&net_dgh(), &d).unwrap();
    let looped = loop_strict(&net_dgh(), &d).unwrap();
    assert!(forms.contains(&canonical_form(&net_dgh())));
    assert!(forms.contains(&canonical_form(&skipped)));
    assert!(forms.contains(&canonical_form(&looped)));
    for cand in &cands {
        assert!(is_free_choice(cand.net.net()));
        assert_eq!(cand.net.net().transitions_labeled(&d).count(), 1);
    }
}

fn last_label(w: &WorkflowNet, labels: &[Activity]) -> Option<Activity> {
    labels.iter().rev().find(|a| w.net().transitions_labeled(a).next().is_some()).cloned()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn patterns_keep_nets_sound_and_change_sizes_as_expected(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let labels: Vec<Activity> = "abcde".chars().map(|c| act(&c.to_string())).collect();
        let nets = random_net_sequence(&mut rng, 4, &labels, 0.0);
        let w = nets.last().unwrap();
        let Some(a) = last_label(w, &labels) else { return Ok(()) };
        if w.net().transitions_labeled(&a).count() != 1 {
            return Ok(());
        }
        let (np, nt) = (w.net().num_places(), w.net().num_transitions());
        let silent = w.net().transitions().filter(|t| w.net().is_silent(*t)).count();

        if let Ok(s) = skip(w, &a) {
            prop_assert!(is_sound(&s, DEFAULT_STATE_CAP).unwrap());
            prop_assert_eq!(s.net().num_places(), np);
            let added = s.net().num_transitions() - nt;
            prop_assert!(added <= 1);
            if added == 1 {
                let now = s.net().transitions().filter(|t| s.net().is_silent(*t)).count();
                prop_assert_eq!(now, silent + 1);
            }
        }
        for strict in [true, false] {
            let r = if strict { loop_strict(w, &a) } else { loop_tau(w, &a) };
            let Ok(l) = r else { continue };
            prop_assert!(is_sound(&l, DEFAULT_STATE_CAP).unwrap());
            let shape = (l.net().num_places() - np, l.net().num_transitions() - nt);
            prop_assert!(shape == (0, 1) || shape == (1, 2), "{:?}", shape);
            prop_assert_eq!(l.net().transitions_labeled(&a).count(), 1);
            prop_assert_eq!(l.net().labels(), w.net().labels());
        }
    }

    #[test]
    fn skip_and_loop_only_add_behaviour(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let labels: Vec<Activity> = "abcd".chars().map(|c| act(&c.to_string())).collect();
        let nets = random_net_sequence(&mut rng, 3, &labels, 0.0);
        let w = nets.last().unwrap();
        let Some(a) = last_label(w, &labels) else { return Ok(()) };
        let Some(before) = language(w, 8, 200_000) else { return Ok(()) };
        for patterned in [skip(w, &a), loop_strict(w, &a)].into_iter().flatten() {
            let Some(after) = language(&patterned, 8, 200_000) else { continue };
            prop_assert!(before.is_subset(&after));
        }
    }
}
