//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::io::Write;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use common::*;
use sgkat::fuzz::{crosscheck, GenConfig, Report};
use sgkat::search::decide;
use sgkat::{
    all_atoms, check, member, parse_expr, Alphabet, Atom, GuardedString, ListSequent, ProgId,
    RuleName, SearchConfig, Verdict,
};

const SEARCH_TIME_LIMIT: Duration = Duration::from_secs(1);
const FUZZ_PAIRS: usize = 10_000;
const FUZZ_SIZE: usize = 12;
const PROPERTY_CASES: u32 = 1_000;
const MUTATIONS: usize = 5;

/// Written straight to stdout so the line shows even when output is captured.
fn report(n: u32, ok: bool, what: &str) {
    let line = format!("{} criterion {n}: {what}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stdout().write_all(line.as_bytes());
    assert!(ok, "criterion {n} failed: {what}");
}

/// Nodes on the tree path from `from` up to `to` (inclusive).
fn path_up(p: &sgkat::Proof, from: usize, to: usize) -> Vec<usize> {
    let mut parent = vec![None; p.nodes.len()];
    for n in &p.nodes {
        for &c in &n.children {
            parent[c] = Some(n.id);
        }
    }
    let mut out = vec![from];
    let mut u = from;
    while u != to {
        u = parent[u].expect("target is an ancestor");
        out.push(u);
    }
    out
}

#[test]
fn criterion_1_worked_example_is_valid() {
    let al = Alphabet::new(&["b", "c"], &["p"]).unwrap();
    let e = parse_expr("(c;p)^[b]", &al).unwrap();
    let f = parse_expr("(p;(c;p +[b] 1))^[b]", &al).unwrap();
    let start = Instant::now();
    let v = decide(&e, &f, &all_atoms(&al), &al, &SearchConfig::default()).unwrap();
    let took = start.elapsed();
    let Verdict::Valid(p) = v else {
        return report(1, false, "verdict is not valid");
    };
    let checked = check(&p).is_ok();
    let backedges: Vec<_> = p
        .nodes
        .iter()
        .filter_map(|n| n.backedge.map(|t| (n.id, t)))
        .collect();
    let fair = backedges.iter().all(|&(leaf, t)| {
        path_up(&p, leaf, t)
            .iter()
            .any(|&u| p.nodes[u].rule == Some(RuleName::WhileL))
    });
    let ok = checked && backedges.len() >= 2 && fair && took < SEARCH_TIME_LIMIT;
    report(
        1,
        ok,
        &format!(
            "valid, check {}, {} back-edges (need >= 2), all through (b)-l: {fair}, {took:?}",
            if checked { "OK" } else { "failed" },
            backedges.len()
        ),
    );
}

#[test]
fn criterion_2_non_proof_example_is_invalid() {
    let al = Alphabet::new(&["b"], &["p"]).unwrap();
    let e = parse_expr("p", &al).unwrap();
    let f = parse_expr("(1^[b]);p", &al).unwrap();
    let start = Instant::now();
    let v = decide(&e, &f, &all_atoms(&al), &al, &SearchConfig::default()).unwrap();
    let took = start.elapsed();
    let Verdict::Invalid { witness, .. } = v else {
        return report(2, false, "verdict is not invalid");
    };
    let b = sgkat::parse_test("b", &al).unwrap();
    let shape =
        witness.len() == 1 && witness.progs() == [ProgId(0)] && witness.first().satisfies(&b);
    let verified = member(&witness, &e, &al).unwrap() && !member(&witness, &f, &al).unwrap();
    report(
        2,
        shape && verified && took < SEARCH_TIME_LIMIT,
        &format!(
            "witness `{}`, shape ok: {shape}, verified: {verified}, {took:?}",
            witness.to_text(&al)
        ),
    );
}

#[test]
fn criterion_3_membership_golden_table() {
    let al = Alphabet::new(&["a", "b"], &["p", "q"]).unwrap();
    let e = parse_expr("(p +[b] q)^[a]", &al).unwrap();
    let t = |s: &str| sgkat::parse_test(s, &al).unwrap();
    let (first, second, third) = (t("a & b"), t("a & !b"), t("!a"));
    let mut agree = 0;
    for x in 0..4 {
        for y in 0..4 {
            for z in 0..4 {
                let (x, y, z) = (Atom(x), Atom(y), Atom(z));
                let w = GuardedString::new(vec![x, y, z], vec![ProgId(0), ProgId(1)]).unwrap();
                let want = x.satisfies(&first) && y.satisfies(&second) && z.satisfies(&third);
                if member(&w, &e, &al).unwrap() == want {
                    agree += 1;
                }
            }
        }
    }
    report(3, agree == 64, &format!("{agree}/64 atom triples agree"));
}

fn fuzz_run() -> &'static Report {
    static RUN: OnceLock<Report> = OnceLock::new();
    RUN.get_or_init(|| {
        let al = Alphabet::new(&["b", "c"], &["p", "q"]).unwrap();
        let cfg = GenConfig {
            trials: FUZZ_PAIRS,
            max_size: FUZZ_SIZE,
            ..GenConfig::new(al, 2024)
        };
        crosscheck(&cfg, None)
    })
}

#[test]
fn criterion_4_differential_fuzz() {
    let r = fuzz_run();
    let ok = r.trials >= FUZZ_PAIRS && r.discrepancies.is_empty();
    report(
        4,
        ok,
        &format!(
            "{} pairs ({} valid, {} invalid), {} discrepancies, oracle {}",
            r.trials,
            r.valid,
            r.invalid,
            r.discrepancies.len(),
            r.oracle_bound_rule
        ),
    );
}

#[test]
fn criterion_5_regularity_bounds() {
    let r = fuzz_run();
    let bad = r.results.iter().filter(|t| !t.regularity_ok()).count();
    report(
        5,
        bad == 0 && r.regularity_violations.is_empty(),
        &format!(
            "{bad} proofs exceed |T_e|+1 antecedents or |T_f|+2 succedents over {} pairs",
            r.trials
        ),
    );
}

#[test]
fn criterion_6_complexity_counters() {
    let r = fuzz_run();
    let s2 = r.results.iter().filter(|t| !t.stage2_ok()).count();
    let br = r.results.iter().filter(|t| !t.branch_ok()).count();
    report(
        6,
        s2 == 0 && br == 0,
        &format!(
            "{s2} stage-2 violations (longest {}), {br} branch violations (longest failing branch {})",
            r.max_stage2_segment, r.max_failing_branch_len
        ),
    );
}

fn run_property<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

#[test]
fn criterion_7_property_suites() {
    let seq =
        (arb_cedent(2), arb_atoms(), arb_cedent(2)).prop_map(|(gamma, atoms, delta)| ListSequent {
            gamma,
            atoms,
            delta,
        });
    let results = [
        run_property(
            "powers",
            (arb_expr(), 1usize..=3, 0usize..=3),
            |(e, k, n)| power_unfolds_left(&e, k, n),
        ),
        run_property(
            "cancellation",
            (arb_expr(), arb_expr(), 1usize..=3),
            |(e, f, k)| prog_prefix_cancels(&e, &f, k),
        ),
        run_property(
            "exposed first atom",
            (arb_exposed(), 0usize..=3),
            |(g, k)| exposed_ignores_first_atom(&g, k),
        ),
        run_property(
            "exposed validity",
            (arb_exposed(), arb_exposed(), arb_nonempty_atoms()),
            |(g, d, a)| exposed_validity_atom_independent(&g, &d, &a, 3),
        ),
        run_property(
            "choice split",
            (
                arb_test(),
                arb_expr(),
                arb_expr(),
                arb_cedent(1),
                0usize..=3,
            ),
            |(b, e, f, t, k)| choice_splits(&b, &e, &f, &t, k),
        ),
        run_property(
            "while unroll",
            (arb_test(), arb_expr(), arb_cedent(1), 0usize..=3),
            |(b, e, t, k)| while_unrolls(&b, &e, &t, k),
        ),
        run_property(
            "approximant height",
            (arb_expr(), arb_test(), arb_cedent(2), 0usize..=4),
            |(e, b, g, n)| approximant_lowers_wwh(&e, &b, &g, n),
        ),
        run_property("determinacy", (arb_expr(), 0usize..=4), |(e, k)| {
            determinacy(&e, k)
        }),
        run_property("rule uniqueness", seq, |s| rule_instances_unique(&s)),
    ];
    let failed: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    report(
        7,
        failed.is_empty(),
        &format!(
            "{} suites x {PROPERTY_CASES} cases, {} failed{}",
            results.len(),
            failed.len(),
            failed.iter().map(|f| format!("; {f}")).collect::<String>()
        ),
    );
}

#[test]
fn criterion_8_certificate_robustness() {
    let base_ok = check(&pi1()).is_ok();
    let mutations = pi1_mutations();
    let rejected: Vec<&str> = mutations
        .iter()
        .filter(|(_, p, code)| rejects_with(p, *code))
        .map(|(what, ..)| *what)
        .collect();
    report(
        8,
        base_ok && mutations.len() == MUTATIONS && rejected.len() == MUTATIONS,
        &format!(
            "{}/{MUTATIONS} mutations rejected with the matching code ({})",
            rejected.len(),
            rejected.join(", ")
        ),
    );
}
