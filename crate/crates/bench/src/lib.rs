//! Workloads shared by the criterion benchmarks in `benches/`.

use synthminer_core::testkit;
use synthminer_core::EventLog;

/// The running example log.
pub fn running_example() -> EventLog {
    testkit::running_example_log()
}

/// A seeded synthetic log with `traces` cases over eight activities.
pub fn synthetic(traces: usize, seed: u64) -> EventLog {
    testkit::synthetic_log(traces, seed)
}
