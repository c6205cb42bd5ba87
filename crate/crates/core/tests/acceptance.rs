//! Acceptance criteria 1-9: one PASS/FAIL line per criterion, with the
//! individual checks listed underneath. Exits non-zero if any criterion fails.
//!
//! A criterion passes only if every check attached to it passes, including
//! comparisons with stated values. The single exception is criterion 7's
//! `|X||df|` term, where the criterion itself asks for a discrepancy record
//! instead of agreement.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use wres_core::oracle::DEFAULT_SEED;
use wres_core::verify::{run_suite, Check, Suite, SuiteReport, VerifyConfig};

/// Monte-Carlo sample count for criteria 7 and 8.
const MC_SAMPLES: usize = 10_000_000;
/// Sample count of the repeated runs used to check determinism.
const DETERMINISM_SAMPLES: usize = 100_000;

const BUDGET_CLIFFORD: Duration = Duration::from_secs(5);
const BUDGET_PARAMETRIX: Duration = Duration::from_secs(30);
const BUDGET_MOMENTS: Duration = Duration::from_secs(60);
const BUDGET_ALL: Duration = Duration::from_secs(60);

const TITLES: [&str; 9] = [
    "Clifford trace identities and random words",
    "parametrix identity, tabulated sigma_-2/-3/-4",
    "half-plane projection and contour integrals",
    "boundary densities, operator A",
    "boundary densities, operator B",
    "interior density, operator B",
    "interior density, operator A",
    "sphere moments against Monte Carlo",
    "full verification run: time and determinism",
];

/// Checks that criterion 7 explicitly exempts: it asks for the deviation
/// to be reported, not for agreement.
fn exempt(c: &Check) -> bool {
    c.criterion == 7 && c.name == "A: M8 + M9 as stated"
}

fn timed(suite: Suite, cfg: &VerifyConfig) -> (SuiteReport, Duration) {
    let t = Instant::now();
    let r = run_suite(suite, cfg).unwrap_or_else(|e| panic!("suite {suite} errored: {e}"));
    (r, t.elapsed())
}

fn line(ok: bool, text: &str) {
    println!("    {} {text}", if ok { "pass" } else { "FAIL" });
}

fn main() -> ExitCode {
    let cfg = VerifyConfig { mc_samples: MC_SAMPLES, seed: DEFAULT_SEED };
    let mut reports = Vec::new();
    let mut times = Vec::new();
    for s in Suite::ALL {
        let (r, t) = timed(s, &cfg);
        reports.push(r);
        times.push((s, t));
    }
    let time_of = |s: Suite| times.iter().find(|(x, _)| *x == s).map(|(_, t)| *t).unwrap_or_default();
    let total: Duration = times.iter().map(|(_, t)| *t).sum();

    // extra, non-suite checks: (criterion, passed, text)
    let mut extra: Vec<(u8, bool, String)> = vec![
        (1, time_of(Suite::Clifford) < BUDGET_CLIFFORD, format!("runtime {:.2?} < {BUDGET_CLIFFORD:?}", time_of(Suite::Clifford))),
        (2, time_of(Suite::Parametrix) < BUDGET_PARAMETRIX, format!("runtime {:.2?} < {BUDGET_PARAMETRIX:?}", time_of(Suite::Parametrix))),
        (8, time_of(Suite::Moments) < BUDGET_MOMENTS, format!("runtime {:.2?} < {BUDGET_MOMENTS:?}", time_of(Suite::Moments))),
        (9, total < BUDGET_ALL, format!("all suites at {MC_SAMPLES} samples in {total:.2?} < {BUDGET_ALL:?}")),
    ];
    let quick = VerifyConfig { mc_samples: DETERMINISM_SAMPLES, seed: DEFAULT_SEED };
    for s in [Suite::Clifford, Suite::Moments, Suite::Halfplane] {
        let a = serde_json::to_string(&run_suite(s, &quick).expect("suite runs")).expect("serializes");
        let b = serde_json::to_string(&run_suite(s, &quick).expect("suite runs")).expect("serializes");
        extra.push((9, a == b, format!("suite {s} is byte-identical across two runs with the same seed")));
    }
    let all_required = reports.iter().all(|r| r.passed(false));
    extra.push((9, all_required, "every oracle-backed (required) check passes".into()));

    let checks: Vec<&Check> = reports.iter().flat_map(|r| &r.checks).collect();
    let mut failed = Vec::new();
    for (k, title) in TITLES.iter().enumerate() {
        let n = k as u8 + 1;
        let mine: Vec<&&Check> = checks.iter().filter(|c| c.criterion == n).collect();
        let ex: Vec<&(u8, bool, String)> = extra.iter().filter(|e| e.0 == n).collect();
        let ok = mine.iter().all(|c| c.passed || exempt(c)) && ex.iter().all(|e| e.1);
        println!("criterion {n}: {} ({title})", if ok { "PASS" } else { "FAIL" });
        for c in &mine {
            let tag = if !c.passed && exempt(c) { " [reported as discrepancy]" } else { "" };
            let detail = if c.detail.is_empty() || c.detail.len() > 160 { String::new() } else { format!(": {}", c.detail) };
            line(c.passed || exempt(c), &format!("{}{detail}{tag}", c.name));
        }
        for e in &ex {
            line(e.1, &e.2);
        }
        if !ok {
            failed.push(n);
        }
    }
    for r in &reports {
        for d in &r.discrepancies {
            println!("discrepancy [{}] {}: engine {} | stated {}", r.suite, d.term_id, short(&d.engine_value), short(&d.paper_value));
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: criteria {failed:?} fail");
        ExitCode::FAILURE
    }
}

fn short(s: &str) -> String {
    if s.len() > 200 {
        format!("{}...", &s[..s.char_indices().nth(200).map_or(s.len(), |(i, _)| i)])
    } else {
        s.to_string()
    }
}
