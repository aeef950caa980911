#![allow(dead_code)]

use std::collections::HashMap;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use sgkat::rules::applicable_lists;
use sgkat::semantics::{enumerate, fusion, BoundedLanguage};
use sgkat::syntax::{approximant, wwh};
use sgkat::{Alphabet, Atom, AtomSet, Expr, GuardedString, ListSequent, ProgId, Test, TestId};

pub fn alphabet() -> Alphabet {
    Alphabet::new(&["b", "c"], &["p", "q"]).unwrap()
}

pub const WIDTH: usize = 2;

pub fn arb_test() -> impl Strategy<Value = Test> {
    let leaf = prop_oneof![
        Just(Test::Zero),
        Just(Test::One),
        (0u8..WIDTH as u8).prop_map(|i| Test::prim(TestId(i))),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Test::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.or(b)),
        ]
    })
}

/// Expressions over tests {b,c} and programs {p,q}.
pub fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        1 => arb_test().prop_map(Expr::test),
        2 => (0u16..2).prop_map(|i| Expr::prog(ProgId(i))),
    ];
    leaf.prop_recursive(3, 10, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(e, f)| Expr::seq(e, f)),
            (arb_test(), inner.clone(), inner.clone()).prop_map(|(b, e, f)| Expr::choice(b, e, f)),
            (arb_test(), inner).prop_map(|(b, e)| Expr::while_loop(b, e)),
        ]
    })
}

pub fn arb_cedent(max: usize) -> impl Strategy<Value = Vec<Expr>> {
    prop::collection::vec(arb_expr(), 0..=max)
}

/// Cedents that are empty or start with a primitive program.
pub fn arb_exposed() -> impl Strategy<Value = Vec<Expr>> {
    prop_oneof![
        1 => Just(Vec::new()),
        4 => ((0u16..2), arb_cedent(2)).prop_map(|(p, rest)| {
            let mut v = vec![Expr::prog(ProgId(p))];
            v.extend(rest);
            v
        }),
    ]
}

pub fn arb_atoms() -> impl Strategy<Value = AtomSet> {
    (0u32..(1 << (1 << WIDTH))).prop_map(|mask| {
        AtomSet::from_atoms(
            WIDTH,
            (0..1u32 << WIDTH).filter(|a| mask >> a & 1 == 1).map(Atom),
        )
    })
}

pub fn arb_nonempty_atoms() -> impl Strategy<Value = AtomSet> {
    arb_atoms().prop_filter("nonempty", |a| !a.is_empty())
}

pub fn lang(e: &Expr, k: usize) -> BoundedLanguage {
    enumerate(e, k, &alphabet()).expect("enumeration within budget")
}

pub fn lang_cedent(c: &[Expr], k: usize) -> BoundedLanguage {
    lang(&Expr::fold(c), k)
}

fn full() -> AtomSet {
    AtomSet::full(WIDTH)
}

/// Bounded counterexample to `Γ ⇒_A Δ` by enumerating the antecedent, used as
/// a second oracle independent of the product search.
pub fn enum_counterexample(s: &ListSequent, k: usize) -> Option<GuardedString> {
    let d = lang_cedent(&s.delta, k);
    lang_cedent(&s.gamma, k)
        .restrict_first(&s.atoms)
        .strings()
        .iter()
        .find(|w| !d.contains(w))
        .cloned()
}

pub fn power_unfolds_left(e: &Expr, k: usize, n: usize) -> Result<(), TestCaseError> {
    let l = lang(e, k);
    let lhs = l.power(n + 1, WIDTH);
    let rhs = fusion(&l, &l.power(n, WIDTH));
    prop_assert_eq!(lhs.strings(), rhs.strings());
    Ok(())
}

/// Left cancellation by a primitive program: `⟦p⟧⋄L = ⟦p⟧⋄K` iff `L = K`
/// (compared one program below the bound).
pub fn prog_prefix_cancels(e: &Expr, f: &Expr, k: usize) -> Result<(), TestCaseError> {
    let pl = lang(&Expr::prog(ProgId(0)), 1);
    let pl = BoundedLanguage::new(pl.strings().iter().cloned(), k);
    let l = lang(e, k);
    let m = lang(f, k);
    let lhs = fusion(&pl, &l);
    let rhs = fusion(&pl, &m);
    let l1 = l.truncate(k - 1);
    let m1 = m.truncate(k - 1);
    prop_assert_eq!(lhs.strings() == rhs.strings(), l1.strings() == m1.strings());
    Ok(())
}

/// For exposed Γ, membership does not depend on the first atom.
pub fn exposed_ignores_first_atom(gamma: &[Expr], k: usize) -> Result<(), TestCaseError> {
    let l = lang_cedent(gamma, k);
    for w in l.strings() {
        for b in 0..1u32 << WIDTH {
            let v = w.with_first(Atom(b));
            prop_assert!(
                l.contains(&v),
                "{} in, {} out",
                w.to_text(&alphabet()),
                v.to_text(&alphabet())
            );
        }
    }
    Ok(())
}

/// For exposed Γ, Δ: validity under At equals validity under any nonempty A.
pub fn exposed_validity_atom_independent(
    gamma: &[Expr],
    delta: &[Expr],
    a: &AtomSet,
    k: usize,
) -> Result<(), TestCaseError> {
    let at = ListSequent {
        gamma: gamma.to_vec(),
        atoms: full(),
        delta: delta.to_vec(),
    };
    let sub = ListSequent {
        atoms: a.clone(),
        ..at.clone()
    };
    prop_assert_eq!(
        enum_counterexample(&at, k).is_some(),
        enum_counterexample(&sub, k).is_some()
    );
    Ok(())
}

pub fn choice_splits(
    b: &Test,
    e: &Expr,
    f: &Expr,
    theta: &[Expr],
    k: usize,
) -> Result<(), TestCaseError> {
    let mut lhs = vec![Expr::choice(b.clone(), e.clone(), f.clone())];
    lhs.extend_from_slice(theta);
    let mut left = vec![e.clone()];
    left.extend_from_slice(theta);
    let mut right = vec![f.clone()];
    right.extend_from_slice(theta);
    let bs = AtomSet::of_test(WIDTH, b);
    let expect = lang_cedent(&left, k)
        .restrict_first(&bs)
        .union(&lang_cedent(&right, k).restrict_first(&bs.complement()));
    let got = lang_cedent(&lhs, k);
    prop_assert_eq!(got.strings(), expect.strings());
    Ok(())
}

pub fn while_unrolls(b: &Test, e: &Expr, theta: &[Expr], k: usize) -> Result<(), TestCaseError> {
    let w = Expr::while_loop(b.clone(), e.clone());
    let mut lhs = vec![w.clone()];
    lhs.extend_from_slice(theta);
    let mut body = vec![e.clone(), w];
    body.extend_from_slice(theta);
    let bs = AtomSet::of_test(WIDTH, b);
    let expect = lang_cedent(&body, k)
        .restrict_first(&bs)
        .union(&lang_cedent(theta, k).restrict_first(&bs.complement()));
    let got = lang_cedent(&lhs, k);
    prop_assert_eq!(got.strings(), expect.strings());
    Ok(())
}

pub fn approximant_lowers_wwh(
    e: &Expr,
    b: &Test,
    gamma: &[Expr],
    n: usize,
) -> Result<(), TestCaseError> {
    let mut approx = vec![approximant(e, b, n)];
    approx.extend_from_slice(gamma);
    let mut loop_ = vec![Expr::while_loop(b.clone(), e.clone())];
    loop_.extend_from_slice(gamma);
    prop_assert!(wwh(&approx) < wwh(&loop_));
    Ok(())
}

/// For `xαy, xαz` in the language, `y` and `z` are both empty or start with
/// the same program.
pub fn determinacy(e: &Expr, k: usize) -> Result<(), TestCaseError> {
    let l = lang(e, k);
    let mut next: HashMap<(Vec<Atom>, Vec<ProgId>), Option<ProgId>> = HashMap::new();
    for w in l.strings() {
        for i in 0..w.atoms().len() {
            let key = (w.atoms()[..=i].to_vec(), w.progs()[..i].to_vec());
            let succ = w.progs().get(i).copied();
            if let Some(prev) = next.insert(key, succ) {
                prop_assert_eq!(prev, succ, "in {}", e.display(&alphabet()));
            }
        }
    }
    Ok(())
}

/// At most one instance of each rule per conclusion.
pub fn rule_instances_unique(s: &ListSequent) -> Result<(), TestCaseError> {
    let mut seen = HashMap::new();
    for r in applicable_lists(s) {
        let n = seen.entry(r.name).or_insert(0);
        *n += 1;
        prop_assert!(
            *n <= 1,
            "{} twice at {}",
            r.name.as_str(),
            s.text(&alphabet())
        );
    }
    Ok(())
}

pub const PI1_JSON: &str = include_str!("../fixtures/pi1.json");

pub fn pi1() -> sgkat::Proof {
    sgkat::proof::import_json(PI1_JSON).expect("fixture parses")
}

/// One-field corruptions of the worked-example fixture, each with the error code it must
/// trigger.
pub fn pi1_mutations() -> Vec<(&'static str, sgkat::Proof, sgkat::ErrorCode)> {
    use sgkat::{parse_cedent, ErrorCode, RuleName};
    let al = sgkat::Alphabet::new(&["b", "c"], &["p"]).unwrap();
    let base = pi1();
    let mut out = Vec::new();

    let mut p = base.clone();
    assert_eq!(p.nodes[5].rule, Some(RuleName::K));
    p.nodes[5].rule = Some(RuleName::K0);
    out.push(("rule name", p, ErrorCode::RuleMismatch));

    let mut p = base.clone();
    assert_eq!(p.nodes[11].rule, Some(RuleName::BR));
    p.nodes[11].sequent.atoms = AtomSet::of_test(2, &Test::prim(TestId(0)));
    out.push(("atom set", p, ErrorCode::SideCondition));

    let mut p = base.clone();
    p.nodes[12].sequent.delta = parse_cedent("p", &al).unwrap();
    out.push(("child sequent", p, ErrorCode::RuleMismatch));

    let mut p = base.clone();
    assert_eq!(p.nodes[13].backedge, Some(0));
    p.nodes[13].backedge = Some(6);
    out.push(("back-edge target", p, ErrorCode::BadBackedge));

    let mut p = base;
    for u in [0, 6] {
        assert_eq!(p.nodes[u].rule, Some(RuleName::WhileL));
        p.nodes[u].rule = None;
    }
    out.push(("delete (b)-l", p, ErrorCode::UnfairCycle));
    out
}

pub fn rejects_with(p: &sgkat::Proof, code: sgkat::ErrorCode) -> bool {
    match sgkat::check(p) {
        Ok(()) => false,
        Err(errs) => errs.iter().any(|e| e.code == code),
    }
}
