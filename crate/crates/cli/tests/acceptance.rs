//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::collections::BTreeSet;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use synthminer_core::conformance::{fitness, optimal_alignment};
use synthminer_core::discovery::{bfs_blocks, discover, order_bfs, projected_log, pruning_set, DiscoveryConfig};
use synthminer_core::eventlog::write_csv;
use synthminer_core::net::pnml::read_workflow_net;
use synthminer_core::net::{
    check_workflow, incidence, is_free_choice, is_sound, short_circuit, IncidenceMatrix, WorkflowNet,
};
use synthminer_core::rational::{ratio, to_decimal_string};
use synthminer_core::synthesis::{is_linearly_dependent_place, is_linearly_dependent_transition};
use synthminer_core::testkit::{
    act, brute_force_alignment_cost, dependence_query, net_gh, net_gh_extra_place, log_from, random_net, random_net_sequence,
    random_small_log, rank_dependent, rng, running_example_csv, running_example_log, synthetic_log, trace,
};
use synthminer_core::{f1, Activity, CausalThreshold, EventLog, NodeId, Rational, Trace};
use tempfile::TempDir;

const STATE_CAP: usize = 100_000;

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn names(xs: &[Activity]) -> String {
    xs.iter().map(Activity::as_str).collect()
}

fn synthminer(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_synthminer")).args(args).output().map_err(|e| e.to_string())
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

fn structurally_sound(w: &WorkflowNet) -> Result<(), String> {
    ensure(is_free_choice(w.net()), || "not free-choice".into())?;
    check_workflow(w.net(), w.roles()).map_err(|e| e.to_string())?;
    ensure(is_sound(w, STATE_CAP).map_err(|e| e.to_string())?, || "not sound".into())
}

fn running_example(dir: &TempDir) -> Verdict {
    let csv = dir.path().join("running_example.csv");
    fs::write(&csv, running_example_csv()).map_err(|e| e.to_string())?;
    let pnml = dir.path().join("running_example.pnml");
    let started = Instant::now();
    let out = synthminer(&["discover", path(&csv), "--variant-coverage", "1", "--out-pnml", path(&pnml)])?;
    let elapsed = started.elapsed();
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    ensure(elapsed <= Duration::from_secs(300), || format!("took {elapsed:?}"))?;
    let w = read_workflow_net(&fs::read(&pnml).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    structurally_sound(&w)?;
    let log = running_example_log();
    let f = fitness(&w, &log, STATE_CAP).map_err(|e| e.to_string())?;
    ensure(f == ratio(1, 1), || format!("fitness {f}"))?;
    let cost = optimal_alignment(&w, &trace("abcdefgh"), STATE_CAP).map_err(|e| e.to_string())?.cost;
    ensure(cost == 0, || format!("<a,b,c,d,e,f,g,h> costs {cost}"))?;

    // the same run with the default 95% variant filter, for reference
    let filtered = synthminer(&["discover", path(&csv)])?;
    let fitness_line = String::from_utf8_lossy(&filtered.stdout)
        .lines()
        .find(|l| l.starts_with("fitness"))
        .map(|l| l.split_whitespace().last().unwrap_or("?").to_string())
        .unwrap_or_else(|| "?".into());
    Ok(format!(
        "fitness 1, <a,b,c,d,e,f,g,h> cost 0, sound free-choice WF-net, {:.2}s; \
         with --variant-coverage 0.95 the full-log fitness is {fitness_line}",
        elapsed.as_secs_f64()
    ))
}

fn ordering_fixture() -> Verdict {
    let l = running_example_log();
    let gamma = names(order_bfs(&l).map_err(|e| e.to_string())?.as_slice());
    ensure(gamma == "hgdfceba", || format!("order {gamma}"))?;
    let blocks: Vec<String> = bfs_blocks(&l).map_err(|e| e.to_string())?.iter().map(|b| names(b)).collect();
    ensure(blocks == ["h", "gd", "f", "ce", "", "b", "a", ""], || format!("blocks {blocks:?}"))?;
    Ok(format!("<{gamma}> with blocks {blocks:?}"))
}

fn projection_fixtures() -> Verdict {
    let keep: BTreeSet<Activity> = ["h", "g", "d"].into_iter().map(act).collect();
    let got = running_example_log().project(&keep);
    ensure(got == log_from(&[("dgh", 76), ("gdh", 24)]), || format!("{got:?}"))?;
    let gamma = order_bfs(&running_example_log()).map_err(|e| e.to_string())?;
    let l3 = projected_log(&running_example_log(), &gamma, 3).map_err(|e| e.to_string())?;
    ensure(l3 == got, || "projected_log(L, gamma, 3) differs".into())?;
    let small = log_from(&[("aba", 6), ("abc", 6), ("bac", 2)]);
    let keep: BTreeSet<Activity> = ["b", "c"].into_iter().map(act).collect();
    let projected = small.project(&keep);
    ensure(projected == log_from(&[("b", 6), ("bc", 8)]), || format!("{projected:?}"))?;
    Ok("[<d,g,h>^76, <g,d,h>^24] and [<b>^6, <b,c>^8]".into())
}

fn pruning_fixture() -> Verdict {
    let w = net_gh();
    let l3 = log_from(&[("dgh", 76), ("gdh", 24)]);
    let c = CausalThreshold::default();
    let d = act("d");
    let stats = l3.statistics();
    ensure(stats.preceding_set(&d, &c).is_empty(), || "A^pre not empty".into())?;
    ensure(stats.following_set(&d, &c) == BTreeSet::from([act("h")]), || "A^fol is not {h}".into())?;
    let v = pruning_set(&w, &l3, &d, &c);
    let expected: BTreeSet<NodeId> = ["t_start", "p_3", "t_2", "p_2", "t_1"]
        .iter()
        .map(|n| w.net().find_node(n).expect("fixture node"))
        .collect();
    ensure(v == expected, || {
        format!("V = {:?}", v.iter().map(|n| w.net().node_name(*n)).collect::<Vec<_>>())
    })?;
    Ok("V = {t_start, p_3, t_2, p_2, t_1}, A^pre = {}, A^fol = {h}".into())
}

fn soundness_suite() -> Verdict {
    let labels: Vec<Activity> = "abcdefgh".chars().map(|c| act(&c.to_string())).collect();
    let mut nets = 0usize;
    for seed in 0..1000u64 {
        let mut r = rng(seed);
        let steps = r.gen_range(1..=8);
        for w in random_net_sequence(&mut r, steps, &labels, 0.2) {
            structurally_sound(&w).map_err(|e| format!("sequence {seed}: {e}\n{w}"))?;
            nets += 1;
        }
    }
    Ok(format!("1000 sequences, {nets} nets checked, 0 failures"))
}

fn to_i64(rows: &[Vec<i8>]) -> Vec<Vec<i64>> {
    rows.iter().map(|r| r.iter().map(|x| i64::from(*x)).collect()).collect()
}

fn columns(m: &IncidenceMatrix) -> Vec<Vec<i64>> {
    (0..m.num_columns()).map(|j| m.column(j).into_iter().map(i64::from).collect()).collect()
}

fn rationals(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|x| ratio(*x, 1)).collect()
}

fn dependence_oracle() -> Verdict {
    let mut queries = 0usize;
    for seed in 0..500u64 {
        let mut r = rng(seed);
        let net = random_net(&mut r, 8, 8);
        let m = incidence(&net);
        let rows = to_i64(m.rows());
        let cols = columns(&m);
        for _ in 0..4 {
            let v = dependence_query(&mut r, &rows, m.num_columns());
            let got = is_linearly_dependent_place(&m, &rationals(&v)).map_err(|e| e.to_string())?;
            ensure(got == rank_dependent(&rows, &v), || format!("net {seed}: row {v:?}"))?;
            let c = dependence_query(&mut r, &cols, m.num_rows());
            let got = is_linearly_dependent_transition(&m, &rationals(&c)).map_err(|e| e.to_string())?;
            ensure(got == rank_dependent(&cols, &c), || format!("net {seed}: column {c:?}"))?;
            queries += 2;
        }
    }
    let before = incidence(&short_circuit(&net_gh()).net);
    let after = incidence(&short_circuit(&net_gh_extra_place()).net);
    let d = net_gh_extra_place();
    let row = |m: &IncidenceMatrix, name: &str| -> Vec<i64> {
        let p = d.net().find_place(name).expect("fixture place");
        m.place_row(p).expect("row").iter().map(|x| i64::from(*x)).collect()
    };
    let p4 = row(&after, "p_4");
    let sum: Vec<i64> = row(&before, "p_2").iter().zip(row(&before, "p_3")).map(|(a, b)| a + b).collect();
    ensure(p4 == sum, || format!("row(p_4) = {p4:?}, row(p_2) + row(p_3) = {sum:?}"))?;
    let dep = is_linearly_dependent_place(&before, &rationals(&p4)).map_err(|e| e.to_string())?;
    ensure(dep, || "extra place not dependent".into())?;
    Ok(format!("500 nets, {queries} queries agree with the rank oracle; row(p_4) = row(p_2) + row(p_3)"))
}

fn fitness_guarantee() -> Verdict {
    let mut iterations = 0usize;
    let mut forced = 0usize;
    for seed in 0..100u64 {
        let log = random_small_log(&mut rng(seed), 6, 50);
        let mut configs = vec![DiscoveryConfig::default()];
        let mut starved = DiscoveryConfig::default();
        starved.caps.max_candidates = if seed % 2 == 0 { 0 } else { 3 };
        configs.push(starved);
        for config in &configs {
            let result = discover(&log, config).map_err(|e| format!("log {seed}: {e}"))?;
            for rec in &result.iterations {
                let li = projected_log(&log, &result.order, rec.index).map_err(|e| e.to_string())?;
                ensure(rec.scores.fitness >= config.theta, || format!("log {seed}, iteration {}", rec.index))?;
                iterations += 1;
                forced += usize::from(rec.fall_through != synthminer_core::discovery::FallThrough::None);
                if rec.index == result.order.len() {
                    let f = fitness(&result.net, &li, STATE_CAP).map_err(|e| e.to_string())?;
                    ensure(f >= config.theta, || format!("log {seed}: final fitness {f}"))?;
                }
            }
        }
    }
    ensure(forced > 0, || "no fall-through case was exercised".into())?;
    Ok(format!("100 logs, {iterations} iterations all >= 0.95, {forced} of them via fall-through"))
}

fn small_net(seed: u64) -> Option<WorkflowNet> {
    let mut r = rng(seed);
    let labels: Vec<Activity> = "abc".chars().map(|c| act(&c.to_string())).collect();
    let steps = r.gen_range(1..=3);
    random_net_sequence(&mut r, steps, &labels, 0.2).into_iter().rev().find(|w| w.net().num_nodes() <= 10)
}

fn conformance_oracle() -> Verdict {
    let alphabet = ["a", "b", "c", "x"];
    let mut cases = 0usize;
    let mut seed = 0u64;
    while cases < 200 {
        seed += 1;
        let Some(w) = small_net(seed) else { continue };
        let mut r = rng(seed ^ 0xa11c);
        let len = r.gen_range(0..=6);
        let t = Trace::new((0..len).map(|_| act(alphabet.choose(&mut r).expect("non-empty"))).collect());
        let got = optimal_alignment(&w, &t, STATE_CAP).map_err(|e| e.to_string())?.cost;
        let oracle = brute_force_alignment_cost(&w, &t, 500_000).ok_or("oracle gave up")?;
        ensure(got == oracle, || format!("case {seed}: {got} vs {oracle}"))?;
        cases += 1;
    }
    let v = to_decimal_string(&f1(&ratio(989, 1000), &ratio(935, 1000)), 3);
    ensure(v == "0.961", || format!("f1 = {v}"))?;
    Ok(format!("{cases} cases match exhaustive search; f1(0.989, 0.935) = {v}"))
}

fn synthetic_run(dir: &TempDir) -> Verdict {
    let log: EventLog = synthetic_log(1000, 7);
    ensure(log.num_traces() == 1000 && log.activities().len() == 8, || "bad synthetic log".into())?;
    let csv = dir.path().join("synthetic.csv");
    let mut bytes = Vec::new();
    write_csv(&log, &mut bytes).map_err(|e| e.to_string())?;
    fs::write(&csv, bytes).map_err(|e| e.to_string())?;
    let jsonl = dir.path().join("iterations.jsonl");
    let started = Instant::now();
    let out = synthminer(&["discover", path(&csv), "--order-column", "index", "--iterations-jsonl", path(&jsonl)])?;
    let elapsed = started.elapsed();
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    ensure(elapsed <= Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    let text = fs::read_to_string(&jsonl).map_err(|e| e.to_string())?;
    let mut series = Vec::new();
    for line in text.lines() {
        let rec: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        let decimal = rec["pruning_ratio"]["decimal"].as_str().ok_or("record without pruning ratio")?;
        let value: f64 = decimal.parse().map_err(|_| format!("bad ratio {decimal}"))?;
        ensure(value > 0.0 && value <= 1.0, || format!("ratio {value} out of range"))?;
        series.push(format!("{value:.3}"));
    }
    ensure(series.len() == 8, || format!("{} records", series.len()))?;
    Ok(format!("{:.1}s, pruning ratios [{}]", elapsed.as_secs_f64(), series.join(", ")))
}

fn main() -> ExitCode {
    let dir = TempDir::new().expect("temporary directory");
    let criteria: Vec<(&str, Box<dyn FnOnce() -> Verdict + '_>)> = vec![
        ("running example via the CLI", Box::new(|| running_example(&dir))),
        ("BFS ordering fixture", Box::new(ordering_fixture)),
        ("projection fixtures", Box::new(projection_fixtures)),
        ("pruning fixture", Box::new(pruning_fixture)),
        ("soundness preservation", Box::new(soundness_suite)),
        ("linear dependence oracle", Box::new(dependence_oracle)),
        ("fitness guarantee", Box::new(fitness_guarantee)),
        ("alignment oracle and F1", Box::new(conformance_oracle)),
        ("synthetic 1000-trace log via the CLI", Box::new(|| synthetic_run(&dir))),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into()))
        });
        let secs = started.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {}: PASS  {title}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {title}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
