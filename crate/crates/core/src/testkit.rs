//! Fixtures, random generators and brute-force oracles shared by the test
//! suites and benchmarks.

use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eventlog::{write_csv, Activity, EventLog, Trace};
use crate::net::{initial_net, LabeledNet, Marking, NodeId, PlaceId, TransitionId, WorkflowNet, WorkflowRoles};
use crate::patterns::PatternTag;
use crate::synthesis::{
    apply_abstraction, apply_extended_place_rule, apply_place_rule, enumerate_applications, EnumerationCaps,
    HostContext, RuleApplication,
};

pub const RUNNING_EXAMPLE: [(&str, u64); 13] = [
    ("abcdfgh", 22),
    ("abcfdgh", 14),
    ("aebcdfgh", 13),
    ("aebcfdgh", 13),
    ("aebcfgdh", 10),
    ("abcfgdh", 10),
    ("abecdfgh", 6),
    ("abecfgdh", 3),
    ("abecfdgh", 3),
    ("abcdefgh", 2),
    ("abcedfgh", 2),
    ("abcefgdh", 1),
    ("abcefdgh", 1),
];

/// A log from single-character activity strings.
pub fn log_from(variants: &[(&str, u64)]) -> EventLog {
    EventLog::from_variants(variants.iter().map(|(s, n)| (trace(s), *n)))
}

pub fn trace(s: &str) -> Trace {
    let names: Vec<String> = s.chars().map(String::from).collect();
    Trace::from_names(&names)
}

pub fn act(s: &str) -> Activity {
    Activity::new(s)
}

/// The 100-trace running example.
pub fn running_example_log() -> EventLog {
    log_from(&RUNNING_EXAMPLE)
}

/// The running example as a `case,activity,index` table.
pub fn running_example_csv() -> String {
    let mut out = Vec::new();
    write_csv(&running_example_log(), &mut out).expect("writing to memory");
    String::from_utf8(out).expect("utf-8")
}

fn singleton<T: Ord>(x: T) -> BTreeSet<T> {
    BTreeSet::from([x])
}

/// `⊤ → p_2 → t_1[h] → p_1 → ⊥`.
pub fn net_h() -> WorkflowNet {
    let w = initial_net();
    let p1 = w.net().find_place("p_1").expect("initial net");
    apply_abstraction(&w, &singleton(w.start()), &singleton(p1), Some(act("h"))).expect("applicable")
}

/// `⊤ → p_3 → t_2[g] → p_2 → t_1[h] → p_1 → ⊥`.
pub fn net_gh() -> WorkflowNet {
    let b = net_h();
    let p2 = b.net().find_place("p_2").expect("net_h");
    apply_abstraction(&b, &singleton(b.start()), &singleton(p2), Some(act("g"))).expect("applicable")
}

/// `net_gh` plus the dependent place `p_4` from `⊤` to `t_1`.
pub fn net_gh_extra_place() -> WorkflowNet {
    let c = net_gh();
    let t1 = c.net().find_transition("t_1").expect("net_gh");
    apply_place_rule(&c, &singleton(c.start()), &singleton(t1)).expect("dependent")
}

/// `net_gh` with `d` added concurrently to `g`: places `p_4`, `p_5` and
/// transition `t_3[d]`.
pub fn net_dgh() -> WorkflowNet {
    let c = net_gh();
    let t1 = c.net().find_transition("t_1").expect("net_gh");
    apply_extended_place_rule(&c, &singleton(c.start()), &singleton(t1), Some(act("d"))).expect("applicable")
}

/// A hand-built net for the running example: `e` is optional and concurrent
/// with `b, c`, `d` runs concurrently with `f, g`, and `f` waits for both
/// `c` and the `e` branch.
pub fn reference_net() -> WorkflowNet {
    let mut net = LabeledNet::new();
    let place = |net: &mut LabeledNet, n: &str| net.add_place(n).expect("fresh");
    let source = place(&mut net, "p_s");
    let sink = place(&mut net, "p_e");
    let names = ["q0", "q1", "q2", "q3", "q4", "q5", "q6", "q7", "q8", "q9", "q10"];
    let q: Vec<PlaceId> = names.iter().map(|n| place(&mut net, n)).collect();
    let start = net.add_transition("t_start", None).expect("fresh");
    let end = net.add_transition("t_end", None).expect("fresh");
    let t = |net: &mut LabeledNet, name: &str, label: Option<&str>, pre: &[PlaceId], post: &[PlaceId]| {
        let id = net.add_transition(name, label.map(act)).expect("fresh");
        for p in pre {
            net.add_input_arc(*p, id).expect("nodes exist");
        }
        for p in post {
            net.add_output_arc(id, *p).expect("nodes exist");
        }
    };
    net.add_input_arc(source, start).expect("nodes exist");
    net.add_output_arc(start, q[0]).expect("nodes exist");
    t(&mut net, "a", Some("a"), &[q[0]], &[q[1], q[2]]);
    t(&mut net, "e", Some("e"), &[q[1]], &[q[6]]);
    t(&mut net, "skip_e", None, &[q[1]], &[q[6]]);
    t(&mut net, "b", Some("b"), &[q[2]], &[q[3]]);
    t(&mut net, "c", Some("c"), &[q[3]], &[q[4], q[5]]);
    t(&mut net, "d", Some("d"), &[q[4]], &[q[8]]);
    t(&mut net, "f", Some("f"), &[q[5], q[6]], &[q[7]]);
    t(&mut net, "g", Some("g"), &[q[7]], &[q[9]]);
    t(&mut net, "h", Some("h"), &[q[8], q[9]], &[q[10]]);
    net.add_input_arc(q[10], end).expect("nodes exist");
    net.add_output_arc(end, sink).expect("nodes exist");
    WorkflowNet::new(net, WorkflowRoles { source, sink, start, end }).expect("valid workflow net")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One random rule application adding a transition labeled `label` (or a
/// silent one when `None`), with a random pattern afterwards when labeled.
/// Now and then a plain dependent place is tried first. Returns `None` if no
/// attempt succeeded.
pub fn random_step<R: Rng>(rng: &mut R, w: &WorkflowNet, label: Option<&Activity>) -> Option<WorkflowNet> {
    let caps = EnumerationCaps::default();
    let all: BTreeSet<NodeId> = w.net().nodes().collect();
    if rng.gen_bool(0.2) {
        let ts: Vec<TransitionId> = w.net().transitions().collect();
        let ctx = HostContext::new(w);
        for _ in 0..20 {
            let pre = random_subset(rng, &ts, 2);
            let post = random_subset(rng, &ts, 2);
            if let Ok(applied) = (RuleApplication::Place { preset: pre, postset: post }).apply(&ctx) {
                return Some(applied.net);
            }
        }
    }
    let placeholder = act("\u{0}random");
    let a = label.cloned().unwrap_or_else(|| placeholder.clone());
    let mut apps = enumerate_applications(w, &all, &a, &caps);
    apps.shuffle(rng);
    let ctx = HostContext::new(w);
    let applied = apps.iter().take(200).find_map(|app| app.apply(&ctx).ok())?;
    let mut next = applied.net;
    if label.is_none() {
        let t = applied.transition?;
        let mut net = next.clone().into_net();
        net.set_label(t, None);
        next = WorkflowNet::new(net, *next.roles()).ok()?;
        return Some(next);
    }
    let tag = *PatternTag::ALL.choose(rng).expect("non-empty");
    if let Ok(patterned) = tag.apply(&next, &a) {
        next = patterned;
    }
    Some(next)
}

fn random_subset<R: Rng, T: Copy + Ord>(rng: &mut R, items: &[T], max: usize) -> BTreeSet<T> {
    let k = rng.gen_range(1..=max.min(items.len()).max(1));
    items.choose_multiple(rng, k).copied().collect()
}

/// A random net built from `steps` rule applications, with labels taken in
/// order from `labels` (silent steps mixed in with probability
/// `silent_share`). Returns every intermediate net, starting with the
/// initial net.
pub fn random_net_sequence<R: Rng>(
    rng: &mut R,
    steps: usize,
    labels: &[Activity],
    silent_share: f64,
) -> Vec<WorkflowNet> {
    let mut nets = vec![initial_net()];
    let mut next_label = 0;
    for _ in 0..steps {
        let silent = next_label >= labels.len() || rng.gen_bool(silent_share);
        let label = (!silent).then(|| &labels[next_label]);
        let current = nets.last().expect("non-empty");
        if let Some(w) = random_step(rng, current, label) {
            if !silent && w.net().transitions_labeled(&labels[next_label]).next().is_some() {
                next_label += 1;
            }
            nets.push(w);
        }
    }
    nets
}

/// A random complete run of `w`, choosing uniformly among enabled
/// transitions. Runs longer than `max_firings` are discarded and retried.
pub fn play_out<R: Rng>(rng: &mut R, w: &WorkflowNet, max_firings: usize) -> Option<Trace> {
    let net = w.net();
    let final_marking = w.final_marking();
    for _ in 0..100 {
        let mut m = w.initial_marking();
        let mut events = Vec::new();
        for _ in 0..max_firings {
            if m == final_marking {
                return Some(Trace::new(events));
            }
            let enabled: Vec<TransitionId> = crate::net::enabled(w, &m);
            let Some(t) = enabled.choose(rng) else { break };
            m = crate::net::fire(w, &m, *t).expect("enabled");
            if let Some(a) = net.label(*t) {
                events.push(a.clone());
            }
        }
        if m == final_marking {
            return Some(Trace::new(events));
        }
    }
    None
}

/// A log of `traces` random runs of a random 8-activity net, reproducible
/// from `seed`.
pub fn synthetic_log(traces: usize, seed: u64) -> EventLog {
    let mut rng = rng(seed);
    let labels: Vec<Activity> = "abcdefgh".chars().map(|c| act(&c.to_string())).collect();
    loop {
        let nets = random_net_sequence(&mut rng, 12, &labels, 0.0);
        let w = nets.last().expect("non-empty");
        if w.net().labels().len() < labels.len() {
            continue;
        }
        let mut log = EventLog::new();
        for _ in 0..traces {
            if let Some(t) = play_out(&mut rng, w, 200) {
                log.add(t, 1);
            }
        }
        if log.activities().len() == labels.len() && log.num_traces() == traces as u64 {
            return log;
        }
    }
}

/// A small random log over at most `max_activities` activities and at most
/// `max_traces` traces. Half of the logs are runs of a random net with some
/// events swapped or dropped, the other half are uniform noise.
pub fn random_small_log<R: Rng>(rng: &mut R, max_activities: usize, max_traces: usize) -> EventLog {
    let k = rng.gen_range(1..=max_activities.clamp(1, 26));
    let labels: Vec<Activity> = (b'a'..).take(k).map(|c| act(&(c as char).to_string())).collect();
    let n = rng.gen_range(1..=max_traces.max(1));
    let mut log = EventLog::new();
    if rng.gen_bool(0.5) {
        let nets = random_net_sequence(rng, k + 2, &labels, 0.1);
        let w = nets.last().expect("non-empty").clone();
        for _ in 0..n {
            let Some(t) = play_out(rng, &w, 40) else { continue };
            let mut events = t.events().to_vec();
            if events.len() > 1 && rng.gen_bool(0.2) {
                let i = rng.gen_range(0..events.len() - 1);
                events.swap(i, i + 1);
            }
            if !events.is_empty() && rng.gen_bool(0.1) {
                events.remove(rng.gen_range(0..events.len()));
            }
            log.add(Trace::new(events), 1);
        }
    }
    while log.num_traces() < n as u64 {
        let len = rng.gen_range(1..=6);
        log.add(Trace::new((0..len).map(|_| labels.choose(rng).expect("non-empty").clone()).collect()), 1);
    }
    if log.activities().is_empty() {
        log.add(Trace::new(vec![labels[0].clone()]), 1);
    }
    log
}

/// An unstructured net with up to `max_places` places and `max_transitions`
/// silent transitions, each place-transition pair getting an input arc, an
/// output arc or nothing.
pub fn random_net<R: Rng>(rng: &mut R, max_places: usize, max_transitions: usize) -> LabeledNet {
    let mut net = LabeledNet::new();
    let places: Vec<PlaceId> =
        (0..rng.gen_range(1..=max_places)).map(|i| net.add_place(format!("p{i}")).expect("fresh")).collect();
    for i in 0..rng.gen_range(1..=max_transitions) {
        let t = net.add_transition(format!("t{i}"), None).expect("fresh");
        for p in &places {
            match rng.gen_range(0..6) {
                0 => net.add_input_arc(*p, t).expect("valid"),
                1 => net.add_output_arc(t, *p).expect("valid"),
                _ => {}
            }
        }
    }
    net
}

/// Whether `v` lies in the span of `rows`, by comparing ranks.
pub fn rank_dependent(rows: &[Vec<i64>], v: &[i64]) -> bool {
    let mut extended = rows.to_vec();
    extended.push(v.to_vec());
    bareiss_rank(&extended) == bareiss_rank(rows)
}

/// A query vector for dependence checks: half the time a small integer
/// combination of `basis`, otherwise entries from {-1, 0, 1}.
pub fn dependence_query<R: Rng>(rng: &mut R, basis: &[Vec<i64>], len: usize) -> Vec<i64> {
    if !basis.is_empty() && rng.gen_bool(0.5) {
        let mut v = vec![0i64; len];
        for b in basis {
            let k = rng.gen_range(-2..=2);
            for (x, y) in v.iter_mut().zip(b) {
                *x += k * y;
            }
        }
        v
    } else {
        (0..len).map(|_| rng.gen_range(-1..=1)).collect()
    }
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|x| i128::from(*x)).collect()).collect();
    let width = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev: i128 = 1;
    for c in 0..width {
        let Some(k) = (rank..m.len()).find(|k| m[*k][c] != 0) else { continue };
        m.swap(rank, k);
        for i in rank + 1..m.len() {
            for j in c + 1..width {
                m[i][j] = (m[rank][c] * m[i][j] - m[i][c] * m[rank][j]) / prev;
            }
            m[i][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Visible words of complete runs with at most `max_len` visible events.
/// Returns `None` if more than `state_cap` (marking, word) states are seen.
pub fn language(w: &WorkflowNet, max_len: usize, state_cap: usize) -> Option<BTreeSet<Vec<Activity>>> {
    let net = w.net();
    let final_marking = w.final_marking();
    let start = (w.initial_marking(), Vec::<Activity>::new());
    let mut seen: HashSet<(Marking, Vec<Activity>)> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut words = BTreeSet::new();
    while let Some((m, word)) = queue.pop_front() {
        if m == final_marking {
            words.insert(word.clone());
        }
        for t in crate::net::enabled(w, &m) {
            let mut next_word = word.clone();
            if let Some(a) = net.label(t) {
                if word.len() == max_len {
                    continue;
                }
                next_word.push(a.clone());
            }
            let next = (crate::net::fire(w, &m, t).expect("enabled"), next_word);
            if seen.insert(next.clone()) {
                if seen.len() > state_cap {
                    return None;
                }
                queue.push_back(next);
            }
        }
    }
    Some(words)
}

pub fn lcs_len(x: &[Activity], y: &[Activity]) -> usize {
    let mut dp = vec![vec![0usize; y.len() + 1]; x.len() + 1];
    for i in 1..=x.len() {
        for j in 1..=y.len() {
            dp[i][j] = if x[i - 1] == y[j - 1] { dp[i - 1][j - 1] + 1 } else { dp[i - 1][j].max(dp[i][j - 1]) };
        }
    }
    dp[x.len()][y.len()]
}

/// Cheapest alignment cost by exhaustive search over the net's language: a
/// word `u` aligns with `trace` at cost `|trace| + |u| - 2 LCS`. Words longer
/// than `2|trace|` plus the shortest word cannot be optimal.
pub fn brute_force_alignment_cost(w: &WorkflowNet, trace: &Trace, state_cap: usize) -> Option<u64> {
    let mut shortest = None;
    for k in 0..=32 {
        if let Some(m) = language(w, k, state_cap)?.iter().map(Vec::len).min() {
            shortest = Some(m);
            break;
        }
    }
    let shortest = shortest?;
    let bound = 2 * trace.len() + shortest;
    let words = language(w, bound, state_cap)?;
    words
        .iter()
        .map(|u| (trace.len() + u.len() - 2 * lcs_len(trace.events(), u)) as u64)
        .min()
}

/// Nodes on some simple path from a node of `sources` to a node of
/// `targets`, by enumerating all simple paths.
pub fn brute_force_path_nodes(
    net: &LabeledNet,
    sources: &BTreeSet<NodeId>,
    targets: &BTreeSet<NodeId>,
) -> BTreeSet<NodeId> {
    fn go(
        net: &LabeledNet,
        cur: NodeId,
        targets: &BTreeSet<NodeId>,
        path: &mut Vec<NodeId>,
        out: &mut BTreeSet<NodeId>,
    ) {
        if targets.contains(&cur) {
            out.extend(path.iter().copied());
        }
        for n in net.successors(cur) {
            if !path.contains(&n) {
                path.push(n);
                go(net, n, targets, path, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for s in sources {
        go(net, *s, targets, &mut vec![*s], &mut out);
    }
    out
}

/// Union of all siphons inside `allowed`, by checking every subset.
pub fn brute_force_max_siphon(net: &LabeledNet, allowed: &BTreeSet<PlaceId>) -> BTreeSet<PlaceId> {
    let places: Vec<PlaceId> = allowed.iter().copied().collect();
    assert!(places.len() <= 16, "too many places for subset enumeration");
    let mut union = BTreeSet::new();
    for mask in 1u32..(1 << places.len()) {
        let s: BTreeSet<PlaceId> =
            places.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, p)| *p).collect();
        let is_siphon =
            s.iter().all(|p| net.place_preset(*p).iter().all(|t| !net.preset(*t).is_disjoint(&s)));
        if is_siphon {
            union.extend(s);
        }
    }
    union
}
