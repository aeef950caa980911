mod common;

use std::collections::HashSet;

use proptest::prelude::*;

use common::*;
use sgkat::proof::{cedents_tail_generated, export_json, import_json};
use sgkat::rules::applicable_lists;
use sgkat::search::decide;
use sgkat::semantics::{enumerate, member};
use sgkat::syntax::approximant;
use sgkat::{
    check, parse_expr, Atom, AtomSet, Expr, GuardedString, ListSequent, ProgId, RuleName,
    SearchConfig, SyntaxTree, Verdict,
};

fn all_strings(max_progs: usize) -> Vec<GuardedString> {
    let atoms: Vec<Atom> = (0..1u32 << WIDTH).map(Atom).collect();
    let mut layer: Vec<GuardedString> = atoms.iter().map(|&a| GuardedString::atom(a)).collect();
    let mut out = layer.clone();
    for _ in 0..max_progs {
        let mut next = Vec::new();
        for w in &layer {
            for p in 0..2 {
                for &a in &atoms {
                    next.push(w.prepend(a, ProgId(p)));
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn arb_sequent() -> impl Strategy<Value = ListSequent> {
    (arb_cedent(2), arb_atoms(), arb_cedent(2)).prop_map(|(gamma, atoms, delta)| ListSequent {
        gamma,
        atoms,
        delta,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn powers_unfold_on_the_left(e in arb_expr(), k in 1usize..=3, n in 0usize..=3) {
        power_unfolds_left(&e, k, n)?;
    }

    #[test]
    fn program_prefix_cancels(e in arb_expr(), f in arb_expr(), k in 1usize..=3) {
        prog_prefix_cancels(&e, &f, k)?;
    }

    #[test]
    fn exposed_cedents_ignore_first_atom(g in arb_exposed(), k in 0usize..=3) {
        exposed_ignores_first_atom(&g, k)?;
    }

    #[test]
    fn exposed_validity_is_atom_independent(g in arb_exposed(), d in arb_exposed(), a in arb_nonempty_atoms()) {
        exposed_validity_atom_independent(&g, &d, &a, 3)?;
    }

    #[test]
    fn guarded_choice_splits_on_guard(b in arb_test(), e in arb_expr(), f in arb_expr(), t in arb_cedent(1), k in 0usize..=3) {
        choice_splits(&b, &e, &f, &t, k)?;
    }

    #[test]
    fn while_unrolls_once(b in arb_test(), e in arb_expr(), t in arb_cedent(1), k in 0usize..=3) {
        while_unrolls(&b, &e, &t, k)?;
    }

    #[test]
    fn approximants_lower_while_height(e in arb_expr(), b in arb_test(), g in arb_cedent(2), n in 0usize..=4) {
        approximant_lowers_wwh(&e, &b, &g, n)?;
    }

    #[test]
    fn languages_are_deterministic(e in arb_expr(), k in 0usize..=4) {
        determinacy(&e, k)?;
    }

    #[test]
    fn at_most_one_instance_per_rule(s in arb_sequent()) {
        rule_instances_unique(&s)?;
    }

    #[test]
    fn member_agrees_with_enumeration(e in arb_expr()) {
        let al = alphabet();
        let l = enumerate(&e, 2, &al).unwrap();
        for w in all_strings(2) {
            prop_assert_eq!(member(&w, &e, &al).unwrap(), l.contains(&w), "{}", w.to_text(&al));
        }
    }

    #[test]
    fn print_then_parse_is_identity(e in arb_expr()) {
        let al = alphabet();
        let text = e.display(&al).to_string();
        prop_assert_eq!(parse_expr(&text, &al).unwrap(), e, "{}", text);
    }

    #[test]
    fn tails_are_tail_generated(e in arb_expr()) {
        let t = SyntaxTree::build(&e);
        for n in t.nodes() {
            let tail = t.tail(n.id).unwrap();
            if let Some(&v) = tail.first() {
                prop_assert_eq!(&tail[1..], t.tail(v).unwrap());
            }
            let mut labels = vec![t.label(n.id).clone()];
            labels.extend(tail.iter().map(|&v| t.label(v).clone()));
            prop_assert_eq!(t.realize_from(n.id), labels);
        }
        prop_assert_eq!(t.realize_from(t.root()), vec![e.clone()]);
        // one per node, plus the empty cedent: at most m+1
        prop_assert!(t.tail_generated_realisations().len() <= t.len());
    }

    #[test]
    fn while_is_union_of_approximants(e in arb_expr(), b in arb_test(), k in 0usize..=2) {
        let al = alphabet();
        let lhs = enumerate(&Expr::while_loop(b.clone(), e.clone()), k, &al).unwrap();
        let mut rhs = lang(&approximant(&e, &b, 0), k);
        for n in 1..=k + 1 {
            rhs = rhs.union(&lang(&approximant(&e, &b, n), k));
        }
        prop_assert_eq!(lhs.strings(), rhs.strings());
    }

    #[test]
    fn rules_are_sound(s in arb_sequent()) {
        let k = 3;
        if enum_counterexample(&s, k).is_some() {
            for r in applicable_lists(&s) {
                prop_assert!(
                    r.premises.iter().any(|p| enum_counterexample(p, k).is_some()),
                    "{} is unsound at {}", r.name.as_str(), s.text(&alphabet())
                );
            }
        }
    }

    #[test]
    fn priority_instances_are_invertible(s in arb_sequent()) {
        let k = 2;
        let rules = applicable_lists(&s);
        let top = rules.iter().map(|r| r.name).min();
        for r in &rules {
            let has_priority = Some(r.name) == top;
            if !has_priority && matches!(r.name, RuleName::K | RuleName::K0) {
                continue;
            }
            if r.premises.iter().any(|p| enum_counterexample(p, k).is_some()) {
                prop_assert!(
                    enum_counterexample(&s, k + 1).is_some(),
                    "{} not invertible at {}", r.name.as_str(), s.text(&alphabet())
                );
            }
        }
    }

    #[test]
    fn search_agrees_with_enumeration(e in arb_expr(), f in arb_expr()) {
        let al = alphabet();
        let at = AtomSet::full(WIDTH);
        let s = ListSequent { gamma: vec![e.clone()], atoms: at.clone(), delta: vec![f.clone()] };
        let v = decide(&e, &f, &at, &al, &SearchConfig::default()).unwrap();
        match &v {
            Verdict::Valid(p) => {
                prop_assert!(check(p).is_ok());
                prop_assert!(enum_counterexample(&s, 3).is_none());
            }
            Verdict::Invalid { witness, .. } => {
                prop_assert!(member(witness, &e, &al).unwrap());
                prop_assert!(!member(witness, &f, &al).unwrap());
            }
            Verdict::Unproved { .. } => prop_assert!(false, "unproved with k0 enabled"),
        }
    }

    #[test]
    fn search_is_deterministic(e in arb_expr(), f in arb_expr(), a in arb_atoms()) {
        let al = alphabet();
        let cfg = SearchConfig::default();
        let v1 = decide(&e, &f, &a, &al, &cfg).unwrap();
        let v2 = decide(&e, &f, &a, &al, &cfg).unwrap();
        prop_assert_eq!(&v1, &v2);
        let plain = decide(&e, &f, &a, &al, &SearchConfig { memoize: false, ..cfg }).unwrap();
        prop_assert_eq!(v1.is_valid(), plain.is_valid());
        if let Verdict::Valid(p) = plain {
            prop_assert!(check(&p).is_ok());
        }
    }

    #[test]
    fn proofs_use_tail_generated_cedents_and_round_trip(e in arb_expr(), f in arb_expr()) {
        let al = alphabet();
        let at = AtomSet::full(WIDTH);
        if let Verdict::Valid(p) = decide(&e, &f, &at, &al, &SearchConfig::default()).unwrap() {
            prop_assert!(cedents_tail_generated(&p));
            let ants: HashSet<_> = p.nodes.iter().map(|n| &n.sequent.gamma).collect();
            let sucs: HashSet<_> = p.nodes.iter().map(|n| &n.sequent.delta).collect();
            prop_assert!(ants.len() <= e.size() + 1);
            prop_assert!(sucs.len() <= f.size() + 2);
            prop_assert_eq!(import_json(&export_json(&p)).unwrap(), p);
        }
    }

    #[test]
    fn applied_rules_follow_priority(e in arb_expr(), f in arb_expr()) {
        let al = alphabet();
        let at = AtomSet::full(WIDTH);
        if let Verdict::Valid(p) = decide(&e, &f, &at, &al, &SearchConfig::default()).unwrap() {
            for n in &p.nodes {
                let Some(rule) = n.rule else { continue };
                if matches!(rule, RuleName::Bot | RuleName::K0) {
                    continue;
                }
                let top = applicable_lists(&n.sequent).iter().map(|r| r.name).min();
                prop_assert_eq!(Some(rule), top, "at {}", n.sequent.text(&al));
            }
        }
    }
}
