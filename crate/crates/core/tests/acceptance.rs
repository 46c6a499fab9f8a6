//! Acceptance criteria 1-8, one line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use slodowy::verify::{self, SuiteReport};

const SEED: u64 = 20240601;

struct Criterion {
    number: usize,
    title: &'static str,
    reports: Vec<SuiteReport>,
    budget: Duration,
    elapsed: Duration,
}

impl Criterion {
    fn run(
        number: usize,
        title: &'static str,
        budget: Duration,
        suites: impl FnOnce() -> Vec<SuiteReport>,
    ) -> Self {
        let start = Instant::now();
        let reports = suites();
        let elapsed = start.elapsed();
        Criterion {
            number,
            title,
            reports,
            budget,
            elapsed,
        }
    }

    fn correct(&self) -> bool {
        self.reports.iter().all(SuiteReport::passed)
    }

    fn in_budget(&self) -> bool {
        self.elapsed <= self.budget
    }

    fn line(&self) -> String {
        let checks: usize = self.reports.iter().map(|r| r.checks).sum();
        let status = if self.correct() && self.in_budget() {
            "PASS"
        } else {
            "FAIL"
        };
        let mut line = format!(
            "criterion {}: {status}  {} ({checks} checks, {:.3?} of {:?})",
            self.number, self.title, self.elapsed, self.budget
        );
        if !self.in_budget() {
            line.push_str("  over time budget");
        }
        for r in self.reports.iter().filter(|r| !r.passed()) {
            line.push_str(&format!(
                "\n    {}: {} failures, first: {}",
                r.name,
                r.failures.len(),
                r.failures[0]
            ));
        }
        line
    }
}

/// Best of several runs, for the sub-millisecond criteria.
fn fastest(runs: usize, f: impl Fn() -> Vec<SuiteReport>) -> (Vec<SuiteReport>, Duration) {
    let mut best = Duration::MAX;
    let mut last = Vec::new();
    for _ in 0..runs {
        let start = Instant::now();
        last = f();
        best = best.min(start.elapsed());
    }
    (last, best)
}

fn quick(number: usize, title: &'static str, f: impl Fn() -> Vec<SuiteReport>) -> Criterion {
    let (reports, elapsed) = fastest(20, f);
    Criterion {
        number,
        title,
        reports,
        budget: Duration::from_millis(1),
        elapsed,
    }
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: Vec<Box<dyn Fn() -> Criterion>> = vec![
        Box::new(move || {
            quick(
                1,
                "two-factor decomposition by both methods, count 12",
                || vec![verify::two_factor_example()],
            )
        }),
        Box::new(move || {
            quick(
                2,
                "one-factor decomposition, count 3, ambient count 60",
                || vec![verify::one_factor_example()],
            )
        }),
        Box::new(move || {
            quick(
                3,
                "six chambers of [3,2,1], (1,1) in (3,2,1), hexagon of flops",
                || vec![verify::hexagon_example()],
            )
        }),
        Box::new(move || {
            Criterion::run(
                4,
                "young = quiver on all pairs N <= 12 and 10^4 random N <= 30",
                secs(60),
                || vec![verify::oracle_equivalence(12, 10_000, 30, SEED)],
            )
        }),
        Box::new(move || {
            Criterion::run(
                5,
                "quiver suite on 10^3 random tilde reps N <= 8",
                secs(120),
                || vec![verify::quiver_suite(1000, 8, SEED)],
            )
        }),
        Box::new(move || {
            Criterion::run(
                6,
                "reflection suite on 200 random stable reps N <= 7",
                secs(120),
                || vec![verify::reflection_suite(200, 7, SEED)],
            )
        }),
        Box::new(move || {
            Criterion::run(
                7,
                "sl2 triples, transversality, centralizers for N <= 7",
                secs(120),
                || vec![verify::lie_suite(7)],
            )
        }),
        Box::new(move || {
            Criterion::run(
                8,
                "counts, product chambers N <= 10, tilde vectors N <= 12",
                secs(120),
                || {
                    vec![
                        verify::two_factor_example(),
                        verify::one_factor_example(),
                        verify::product_chamber_suite(10),
                        verify::tilde_consistency_suite(12),
                    ]
                },
            )
        }),
    ];
    let mut ok = true;
    for run in &criteria {
        let c = run();
        println!("{}", c.line());
        ok &= c.correct() && c.in_budget();
    }
    if ok {
        println!("acceptance: all 8 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: some criteria fail");
        ExitCode::FAILURE
    }
}
