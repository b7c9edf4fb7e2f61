//! Acceptance suite. Runs every criterion, prints one line each, and exits
//! non-zero if any criterion fails or overruns its time budget.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use phaselock_cli::report::{self, CheckResult};
use phaselock_cli::DEFAULT_SEED;

const SEED: u64 = DEFAULT_SEED;

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

/// Byte-identical `report` output across repeated runs and pool sizes.
fn determinism() -> CheckResult {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_phaselock"))
            .args([
                "report",
                "--format",
                "json",
                "--seed",
                &SEED.to_string(),
                "--threads",
                threads,
            ])
            .output()
            .expect("phaselock binary runs");
        (out.status.code(), out.stdout)
    };
    let runs = [run("1"), run("1"), run("2"), run("8")];
    let identical = runs.iter().filter(|r| r.1 == runs[0].1).count();
    let status_ok = runs.iter().filter(|r| r.0 == Some(0)).count();
    let m = vec![
        report::Measurement::within(
            "runs byte-identical to the first",
            identical as f64,
            runs.len() as f64,
            0.0,
        ),
        report::Measurement::within("runs exiting with status 0", status_ok as f64, runs.len() as f64, 0.0),
        report::Measurement::above("report bytes", runs[0].1.len() as f64, 0.0),
    ];
    CheckResult {
        id: 12,
        name: "report determinism",
        passed: m.iter().all(|m| m.passed),
        measurements: m,
    }
}

fn main() -> ExitCode {
    let criteria: Vec<(Duration, Box<dyn Fn() -> CheckResult>)> = vec![
        (secs(1), Box::new(report::check_tau)),
        (secs(1), Box::new(report::check_exact_volumes)),
        (secs(60), Box::new(|| report::check_poke_n4(SEED))),
        (secs(300), Box::new(|| report::check_true_volume(SEED))),
        (secs(600), Box::new(|| report::check_table1_ratios(SEED))),
        (secs(600), Box::new(|| report::check_table2(SEED))),
        (secs(30), Box::new(report::check_postnikov)),
        (secs(300), Box::new(|| report::check_oracles(SEED))),
        (secs(1), Box::new(report::check_three_oscillators)),
        (secs(120), Box::new(|| report::check_sandwich(SEED))),
        (secs(600), Box::new(|| report::check_evs(SEED))),
        (secs(600), Box::new(determinism)),
    ];
    let mut failed = 0;
    for (limit, check) in &criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let ok = result.passed && elapsed <= *limit;
        failed += usize::from(!ok);
        println!(
            "criterion {:>2} {} {} ({:.2} s, limit {} s)",
            result.id,
            if ok { "PASS" } else { "FAIL" },
            result.name,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        for m in result.measurements.iter().filter(|m| !m.passed) {
            println!(
                "    {}: measured {} target {} tolerance {} ({:?})",
                m.name, m.measured, m.target, m.tolerance, m.rule
            );
        }
        if elapsed > *limit {
            println!("    over time budget");
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
