use std::collections::BTreeSet;

use num_traits::One;
use synthminer_core::conformance::{evaluate, optimal_alignment};
use synthminer_core::discovery::{bfs_blocks, discover, order_bfs, pruning_set, DiscoveryConfig, FallThrough};
use synthminer_core::net::{is_free_choice, is_sound, DEFAULT_STATE_CAP};
use synthminer_core::testkit::{act, net_gh, log_from, running_example_log, trace};
use synthminer_core::{Activity, CausalThreshold, NodeId, Rational};

fn names(xs: &[Activity]) -> String {
    xs.iter().map(|a| a.as_str()).collect()
}

#[test]
fn bfs_order_and_blocks() {
    let l = running_example_log();
    assert_eq!(names(order_bfs(&l).unwrap().as_slice()), "hgdfceba");
    let blocks: Vec<String> = bfs_blocks(&l).unwrap().iter().map(|b| names(b)).collect();
    assert_eq!(blocks, vec!["h", "gd", "f", "ce", "", "b", "a", ""]);
}

#[test]
fn projection_onto_three_activities() {
    let keep: BTreeSet<Activity> = ["h", "g", "d"].into_iter().map(act).collect();
    assert_eq!(running_example_log().project(&keep), log_from(&[("dgh", 76), ("gdh", 24)]));
}

#[test]
fn third_iteration_pruning_set() {
    let w = net_gh();
    let l3 = log_from(&[("dgh", 76), ("gdh", 24)]);
    let c = CausalThreshold::default();
    let stats = l3.statistics();
    assert!(stats.preceding_set(&act("d"), &c).is_empty());
    assert_eq!(stats.following_set(&act("d"), &c), BTreeSet::from([act("h")]));
    let v = pruning_set(&w, &l3, &act("d"), &c);
    let expected: BTreeSet<NodeId> =
        ["t_start", "p_3", "t_2", "p_2", "t_1"].iter().map(|n| w.net().find_node(n).unwrap()).collect();
    assert_eq!(v, expected);
}

#[test]
fn discovery_reproduces_the_running_example() {
    let l = running_example_log();
    let result = discover(&l, &DiscoveryConfig::default()).unwrap();
    let w = &result.net;
    assert!(is_free_choice(w.net()));
    w.validate().unwrap();
    assert!(is_sound(w, DEFAULT_STATE_CAP).unwrap());
    let score = evaluate(w, &l, DEFAULT_STATE_CAP).unwrap();
    assert_eq!(score.fitness, Rational::one());
    assert_eq!(optimal_alignment(w, &trace("abcdefgh"), DEFAULT_STATE_CAP).unwrap().cost, 0);
    assert!(result.iterations.iter().all(|it| it.fall_through == FallThrough::None));
}
