//! Writes a seeded synthetic 8-activity log as CSV to standard output.
//!
//! `cargo run -p synthminer-core --features testkit --example synthetic_log -- 1000 7`

fn main() {
    let mut args = std::env::args().skip(1);
    let traces = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let log = synthminer_core::testkit::synthetic_log(traces, seed);
    synthminer_core::eventlog::write_csv(&log, std::io::stdout().lock()).expect("writing to stdout");
}
