//! Acceptance run: every criterion at full size, one PASS/FAIL line each.
//! Built with `harness = false`, so the lines print under plain `cargo test`.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use serde_json::json;
use xpq_cli::checks::{CheckConfig, SUITES};

/// Wall-clock budgets; criteria without a stated budget get none.
fn budget(criterion: u8) -> Option<Duration> {
    match criterion {
        1 | 2 => Some(Duration::from_secs(5)),
        3 => Some(Duration::from_secs(30)),
        4 | 5 => Some(Duration::from_secs(60)),
        _ => None,
    }
}

fn xpq(args: &[&str]) -> (i32, serde_json::Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_xpq"))
        .args(args)
        .output()
        .expect("xpq runs");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(serde_json::Value::Null);
    (out.status.code().unwrap_or(-1), json)
}

/// The command-line forms of the K-theory and enumeration examples.
fn cli_examples() -> Result<(), String> {
    let free2 = json!({"rank": 2, "torsion": []});
    let (code, k) = xpq(&["ktheory", "-p", "2", "-q", "3"]);
    if code != 0 || k["K0"] != free2 || k["K1"] != free2 || k["match"] != json!(true) {
        return Err(format!("ktheory -p 2 -q 3 gave {k}"));
    }
    let (_, k) = xpq(&["ktheory", "-p", "3", "-q", "5"]);
    if k["K0"] != json!({"rank": 2, "torsion": [2]}) {
        return Err(format!("ktheory -p 3 -q 5 gave {k}"));
    }
    let (_, orbits) = xpq(&["orbits", "-p", "2", "-q", "3", "--max-den", "7"]);
    let dens: Vec<_> = orbits.as_array().into_iter().flatten().map(|o| o["r"].clone()).collect();
    if dens != vec![json!(1), json!(5), json!(7)] {
        return Err(format!("orbits --max-den 7 gave denominators {dens:?}"));
    }
    let (_, w) = xpq(&["mult-indep", "-p", "4", "-q", "8"]);
    if w != json!({"independent": false, "witness": {"r": 3, "s": 2}}) {
        return Err(format!("mult-indep -p 4 -q 8 gave {w}"));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cfg = CheckConfig::default();
    let mut failures = 0;
    for suite in &SUITES {
        let start = Instant::now();
        let mut report = suite.run(&cfg);
        if suite.criterion == 1 && report.passed {
            if let Err(e) = cli_examples() {
                report.passed = false;
                report.detail = e;
            }
        }
        let elapsed = start.elapsed();
        let over = budget(suite.criterion).filter(|b| elapsed > *b);
        let passed = report.passed && over.is_none();
        if !passed {
            failures += 1;
        }
        let limit = budget(suite.criterion).map_or(String::new(), |b| format!(" / {}s", b.as_secs()));
        println!(
            "[{}] criterion {:>2} {:<13} {:>8.2}s{limit}  {}{}",
            if passed { "PASS" } else { "FAIL" },
            suite.criterion,
            suite.name,
            elapsed.as_secs_f64(),
            report.detail,
            over.map_or(String::new(), |_| "  (over time budget)".into())
        );
    }
    println!("{} of {} criteria passed", SUITES.len() - failures, SUITES.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
