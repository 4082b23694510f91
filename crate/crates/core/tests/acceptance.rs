//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p orbibraid --test acceptance`; pass criterion
//! numbers after `--` to run a subset, e.g. `-- 2 7`.
//!
//! Tolerances are exact: every criterion requires zero failing cases, plus
//! the wall-clock budgets stated on criteria 1 and 7.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use orbibraid::verify::{self, SuiteReport};
use orbibraid::Surface;

const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    summary: String,
    details: Vec<String>,
}

/// Folds many reports into per-check totals, keeping one example each.
fn tally(reports: &[SuiteReport]) -> (usize, usize, Vec<String>) {
    let mut by_check: BTreeMap<String, (usize, usize, usize, Option<String>)> = BTreeMap::new();
    for r in reports {
        for c in &r.checks {
            let e = by_check.entry(c.name.clone()).or_default();
            e.0 += c.cases;
            e.1 += c.failures;
            if c.failures > 0 {
                e.2 += 1;
                if e.3.is_none() {
                    e.3 = c.examples.first().map(|x| format!("[{}] {x}", r.config));
                }
            }
        }
    }
    let cases = by_check.values().map(|v| v.0).sum();
    let failures = by_check.values().map(|v| v.1).sum();
    let details = by_check
        .into_iter()
        .map(|(name, (cases, failures, configs, ex))| {
            let mut line = format!("{name}: {cases} cases, {failures} failures");
            if failures > 0 {
                line += &format!(" in {configs} configurations; e.g. {}", ex.unwrap_or_default());
            }
            line
        })
        .collect();
    (cases, failures, details)
}

fn from_reports(reports: Vec<SuiteReport>, elapsed: Duration, budget: Option<Duration>) -> Outcome {
    let (cases, failures, mut details) = tally(&reports);
    let in_budget = budget.map_or(true, |b| elapsed <= b);
    let mut summary = format!("{} suites, {cases} cases, {failures} failures, {:.1}s", reports.len(), elapsed.as_secs_f64());
    if let Some(b) = budget {
        summary += &format!(" (budget {}s)", b.as_secs());
    }
    for r in &reports {
        for n in &r.notes {
            if !details.contains(n) && !n.starts_with("no ") {
                details.push(format!("[{}] {n}", r.config));
            }
        }
    }
    Outcome {
        passed: failures == 0 && in_budget,
        summary,
        details,
    }
}

fn grid(max_n: usize) -> Vec<(Surface, usize)> {
    verify::surfaces(2, 2, &[2, 3, 4])
        .into_iter()
        .flat_map(|s| (1..=max_n).map(move |n| (s.clone(), n)))
        .collect()
}

fn timed(f: impl FnOnce() -> orbibraid::Result<Vec<SuiteReport>>, budget: Option<Duration>) -> Outcome {
    let start = Instant::now();
    match f() {
        Ok(reports) => from_reports(reports, start.elapsed(), budget),
        Err(e) => Outcome {
            passed: false,
            summary: format!("error: {e}"),
            details: Vec::new(),
        },
    }
}

/// Split sequence and comb invariance, n ≤ 4, k ≤ 2, m ≤ 2, q ∈ {2,3,4}.
fn criterion_1() -> Outcome {
    timed(
        || {
            grid(4)
                .iter()
                .map(|(s, n)| verify::esg_splitting(s, *n, 1000, 4, SEED))
                .collect()
        },
        Some(Duration::from_secs(300)),
    )
}

/// `is_identity(X[i,r]^d) ⇔ q_r | d`, q_r ∈ {2..6}, |d| ≤ 12.
fn criterion_2() -> Outcome {
    timed(
        || {
            let mut out = Vec::new();
            for k in 0..=1 {
                let s = Surface::new(k, vec![2, 3, 4, 5, 6])?;
                for n in 1..=3 {
                    out.push(verify::torsion(&s, n, 12)?);
                }
            }
            Ok(out)
        },
        None,
    )
}

/// Strand traces of `B_{iN}` form a free basis, N ≤ 6, 10³ products each.
fn criterion_3() -> Outcome {
    timed(|| Ok(vec![verify::fnf(6, 1000, SEED)?]), None)
}

/// Conjugation tables complete on the criterion-1 grid.
fn criterion_4() -> Outcome {
    timed(
        || {
            grid(4)
                .iter()
                .filter(|(_, n)| *n >= 2)
                .map(|(s, n)| verify::normality(s, *n))
                .collect()
        },
        None,
    )
}

/// `equal` agrees with the Artin oracle when m = 0, n ≤ 4, k ≤ 2.
fn criterion_5() -> Outcome {
    timed(
        || {
            let mut out = Vec::new();
            for k in 0..=2 {
                let s = Surface::new(k, vec![])?;
                for n in 1..=4 {
                    out.push(verify::classical(&s, n, 1000, 4, SEED)?);
                }
            }
            Ok(out)
        },
        None,
    )
}

/// Configuration groupoids of ≥ 50 random translation groupoids.
fn criterion_6() -> Outcome {
    timed(|| Ok(vec![verify::groupoid_axioms(60, 8, 4, 3, SEED)?]), None)
}

/// Falk witness iff n ≥ 4 (n ≤ 6, k ≤ 3); supersolvability shadow.
fn criterion_7() -> Outcome {
    timed(
        || Ok(vec![verify::falk(None, 6, 3)?, verify::supersolvability(5)?]),
        Some(Duration::from_secs(600)),
    )
}

/// Combed coordinates live in the poly-VF signatures.
fn criterion_8() -> Outcome {
    timed(
        || {
            grid(4)
                .iter()
                .map(|(s, n)| verify::polyvf(s, *n, 200, 4, SEED))
                .collect()
        },
        None,
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 8] = [
        (1, "split exact sequence and comb invariance", criterion_1),
        (2, "torsion orders", criterion_2),
        (3, "free basis of strand traces", criterion_3),
        (4, "normality of the kernel", criterion_4),
        (5, "classical consistency", criterion_5),
        (6, "configuration groupoids", criterion_6),
        (7, "arrangement shadow", criterion_7),
        (8, "poly-VF series", criterion_8),
    ];
    let wanted: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut all_passed = true;
    for (id, title, run) in criteria {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let out = run();
        all_passed &= out.passed;
        println!(
            "criterion {id} ({title}): {} — {}",
            if out.passed { "PASS" } else { "FAIL" },
            out.summary
        );
        for d in &out.details {
            println!("    {d}");
        }
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
