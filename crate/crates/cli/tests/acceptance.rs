//! One line per acceptance criterion. Criteria 1 to 9 run in process; 10
//! runs the `demo` binary twice and compares the bytes.

use std::process::Command;
use std::time::{Duration, Instant};

use atiyah_cli::criteria::{self, Criterion};

const SEED: u64 = 0;

fn demo_run() -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_atiyah"))
        .args(["--seed", &SEED.to_string(), "demo"])
        .output()
        .expect("demo binary runs");
    (out.status.code(), out.stdout)
}

#[test]
fn acceptance() {
    let mut results: Vec<Criterion> = criteria::run_all(SEED);

    let start = Instant::now();
    let (code_a, out_a) = demo_run();
    let (code_b, out_b) = demo_run();
    let elapsed = start.elapsed();
    let passed = code_a == Some(0) && code_b == Some(0) && out_a == out_b && elapsed < Duration::from_secs(15 * 60);
    results.push(Criterion {
        id: 10,
        name: "demo end to end",
        passed,
        detail: format!(
            "exit codes {code_a:?} {code_b:?}, outputs {}",
            if out_a == out_b { "identical" } else { "differ" }
        ),
    });

    for c in &results {
        println!("{}", c.line());
    }
    let failed: Vec<u8> = results.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
