//! Acceptance suite: one line per criterion.
//!
//! Criterion 12 is expensive and runs only with `CHORDLINK_STRETCH=1`.
//! Criteria listed in `KNOWN_FAILURES` are still evaluated and printed; the
//! run fails if one of them unexpectedly passes or any other one fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use chordlink::relations::{RelationBasis, RelationSet, Ring};
use chordlink::verify::{self, ShareScope};
use chordlink::{diagram_count, enumerate_diagrams, Limits};

/// Criteria whose statement is contradicted by exhaustive computation.
/// Criterion 5: a light bough of an unmarked vertex need not be a share,
/// e.g. bough {a,b} of c in `k=2 [a][b c a c b]`.
/// Criterion 12: part (b) holds, but five untrimmed tree classes at degree 5
/// do not collapse even over the rationals, so part (a) fails.
const KNOWN_FAILURES: &[u8] = &[5, 12];

struct Outcome {
    passed: bool,
    note: String,
}

fn outcome(passed: bool, note: impl Into<String>) -> Outcome {
    Outcome { passed, note: note.into() }
}

fn double_factorial_odd(n: u128) -> u128 {
    (1..=n).map(|i| 2 * i - 1).product()
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn limits() -> Limits {
    Limits::new(1_000_000)
}

fn c1() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=5usize {
        for k in 1..=3usize {
            let expected = double_factorial_odd(n as u128) * binomial(2 * n as u128 + k as u128 - 1, k as u128 - 1);
            let got = enumerate_diagrams(n, k, &limits()).map(|v| v.len() as u128).unwrap_or(0);
            if got != expected || diagram_count(n, k) != expected {
                bad.push(format!("({n},{k}) {got} vs {expected}"));
            }
        }
    }
    let d52 = enumerate_diagrams(5, 2, &limits()).map(|v| v.len()).unwrap_or(0);
    outcome(bad.is_empty() && d52 == 10395, format!("(5,2) -> {d52}; mismatches: {bad:?}"))
}

fn c2() -> Outcome {
    let dims = |rels: RelationSet| -> Vec<usize> {
        (1..=4)
            .map(|n| RelationBasis::build(n, 1, rels, Ring::Rational, &limits()).map_or(usize::MAX, |b| b.dimension()))
            .collect()
    };
    let four = dims(RelationSet::FOUR_TERM);
    let both = dims(RelationSet::ONE_AND_FOUR_TERM);
    outcome(four == [1, 2, 3, 6] && both == [0, 1, 1, 3], format!("4T {four:?}, 1T+4T {both:?}"))
}

fn report(r: chordlink::Result<verify::VerifyReport>) -> Outcome {
    match r {
        Ok(r) => {
            let fails = r.failures().count();
            let first = r.failures().next().map(|c| format!("; first failure {}: {}", c.subject, c.detail)).unwrap_or_default();
            outcome(r.passed, format!("{} cases, {fails} failing certificates{first}", r.cases))
        }
        Err(e) => outcome(false, format!("error: {e}")),
    }
}

fn c9() -> Outcome {
    let a = verify::realizability_agreement(4, 3, &limits());
    let b = verify::round_trip(5, 3, &limits());
    let (a, b) = (report(a), report(b));
    outcome(a.passed && b.passed, format!("agreement: {}; round trip: {}", a.note, b.note))
}

fn c12() -> Outcome {
    let collapse = report(verify::tree_collapse(5, 2, &limits()));
    let probe = verify::torsion_probe(5, 2, &limits());
    let (factor_two, pair_note, pairs_ok) = match &probe {
        Ok(p) => {
            let two = p.report.invariant_factors.iter().any(|f| f == "2");
            let pair = p.pairs.iter().find(|x| x.order == "2");
            let note = match pair {
                Some(x) => format!("order-2 pair {} vs {} ({} pairs total)", x.first, x.second, p.pairs.len()),
                None => format!("no order-2 pair among {} classes", p.classes),
            };
            (two, note, pair.is_some())
        }
        Err(e) => (false, format!("error: {e}"), false),
    };
    let factors = probe.as_ref().map(|p| p.report.invariant_factors.clone()).unwrap_or_default();
    outcome(
        collapse.passed && factor_two && pairs_ok,
        format!("(a) {}; (b) invariant factors {factors:?}, {pair_note}", collapse.note),
    )
}

fn main() -> ExitCode {
    let stretch = std::env::var("CHORDLINK_STRETCH").is_ok_and(|v| v == "1");
    type Check = fn() -> Outcome;
    let criteria: Vec<(u8, &str, Duration, Check)> = vec![
        (1, "enumeration counts", Duration::from_secs(10), c1),
        (2, "knot dimensions", Duration::from_secs(30), c2),
        (3, "Hopf compatibility", Duration::from_secs(5), || report(verify::hopf(2, 2, &limits()))),
        (4, "connected sum well defined", Duration::from_secs(60), || {
            report(verify::connect_sum_well_defined(2, &limits()))
        }),
        (5, "light bough iff share", Duration::from_secs(300), || {
            report(verify::lemma_share(4, ShareScope::AllVertices, &limits()))
        }),
        (6, "orbit equals class", Duration::from_secs(300), || report(verify::prop_orbit(4, &limits()))),
        (7, "two-strand trimmed classes collapse", Duration::from_secs(600), || {
            report(verify::thm_2comp(4, &limits()))
        }),
        (8, "three-strand tree classes collapse", Duration::from_secs(1800), || {
            report(verify::thm_ncomp(4, 3, &limits()))
        }),
        (9, "realizability and reconstruction", Duration::from_secs(1800), c9),
        (10, "generalized 4T", Duration::from_secs(300), || report(verify::gen4t(4, &limits()))),
        (11, "centrality of stars", Duration::from_secs(600), || {
            report(verify::centrality(2, 2, 4, &limits()))
        }),
        (12, "degree-5 torsion (stretch)", Duration::from_secs(4 * 3600), c12),
    ];
    let mut ok = true;
    for (id, name, budget, check) in criteria {
        if id == 12 && !stretch {
            println!("criterion {id:>2} SKIP {name}: set CHORDLINK_STRETCH=1 to run");
            continue;
        }
        let t = Instant::now();
        let o = check();
        let elapsed = t.elapsed();
        let in_time = elapsed <= budget;
        let passed = o.passed && in_time;
        let verdict = if passed { "PASS" } else { "FAIL" };
        let known = KNOWN_FAILURES.contains(&id);
        let tag = if known { " [known failure]" } else { "" };
        println!(
            "criterion {id:>2} {verdict} {name} ({:.2}s of {}s){tag}: {}",
            elapsed.as_secs_f64(),
            budget.as_secs(),
            o.note
        );
        if passed == known {
            ok = false;
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
