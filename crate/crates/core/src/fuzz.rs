//! Random expressions and differential testing of proof search against the
//! bounded oracle.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::alphabet::{Alphabet, ProgId, TestId};
use crate::atoms::all_atoms;
use crate::oracle::{default_bound, inclusion_bounded, Inclusion};
use crate::parse::parse_expr;
use crate::proof::{cedents_tail_generated, check, export_json, import_json, stats};
use crate::rules::applicable_lists;
use crate::search::{decide_with_stats, SearchConfig, Verdict};
use crate::semantics::member_unchecked;
use crate::syntax::{Expr, Test};

/// Relative constructor weights. Must sum to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    pub test: f64,
    pub prog: f64,
    pub seq: f64,
    pub choice: f64,
    pub while_loop: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            test: 0.2,
            prog: 0.3,
            seq: 0.2,
            choice: 0.15,
            while_loop: 0.15,
        }
    }
}

impl Weights {
    pub fn is_valid(&self) -> bool {
        let all = [self.test, self.prog, self.seq, self.choice, self.while_loop];
        all.iter().all(|w| *w >= 0.0) && (all.iter().sum::<f64>() - 1.0).abs() < 1e-9
    }
}

#[derive(Debug, Clone)]
pub struct GenConfig {
    pub seed: u64,
    pub max_size: usize,
    pub alphabet: Alphabet,
    pub weights: Weights,
    pub trials: usize,
}

impl GenConfig {
    pub fn new(alphabet: Alphabet, seed: u64) -> GenConfig {
        GenConfig {
            seed,
            max_size: 12,
            alphabet,
            weights: Weights::default(),
            trials: 100,
        }
    }
}

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A random expression with at most `cfg.max_size` nodes, determined by the
/// seed.
pub fn random_expr(cfg: &GenConfig) -> Expr {
    gen_expr(
        &mut rng_for(cfg.seed, 0),
        cfg.max_size.max(1),
        &cfg.weights,
        &cfg.alphabet,
    )
}

pub fn random_test<R: Rng>(rng: &mut R, alphabet: &Alphabet) -> Test {
    let prim = |rng: &mut R| Test::Prim(TestId(rng.gen_range(0..alphabet.test_count()) as u8));
    match rng.gen_range(0..10) {
        0 => Test::Zero,
        1 => Test::One,
        2..=5 => prim(rng),
        6 | 7 => prim(rng).not(),
        8 => prim(rng).and(prim(rng)),
        _ => prim(rng).or(prim(rng).not()),
    }
}

pub fn gen_expr<R: Rng>(rng: &mut R, budget: usize, w: &Weights, alphabet: &Alphabet) -> Expr {
    let mut choices = vec![(0, w.test), (1, w.prog)];
    if budget >= 2 {
        choices.push((4, w.while_loop));
    }
    if budget >= 3 {
        choices.push((2, w.seq));
        choices.push((3, w.choice));
    }
    let kind = choices
        .choose_weighted(rng, |c| c.1)
        .map(|c| c.0)
        .unwrap_or(1);
    match kind {
        0 => Expr::Test(random_test(rng, alphabet)),
        1 => Expr::Prog(ProgId(rng.gen_range(0..alphabet.progs().len()) as u16)),
        4 => {
            let b = random_test(rng, alphabet);
            Expr::while_loop(b, gen_expr(rng, budget - 1, w, alphabet))
        }
        k => {
            let left = rng.gen_range(1..budget - 1);
            let x = gen_expr(rng, left, w, alphabet);
            let y = gen_expr(rng, budget - 1 - x.size(), w, alphabet);
            if k == 2 {
                Expr::seq(x, y)
            } else {
                Expr::choice(random_test(rng, alphabet), x, y)
            }
        }
    }
}

/// All subexpression positions, pre-order.
fn positions(e: &Expr) -> Vec<Vec<u8>> {
    fn go(e: &Expr, at: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        out.push(at.clone());
        let kids: Vec<&Expr> = match e {
            Expr::Test(_) | Expr::Prog(_) => vec![],
            Expr::Seq(x, y) | Expr::Choice(_, x, y) => vec![x, y],
            Expr::While(_, x) => vec![x],
        };
        for (i, k) in kids.into_iter().enumerate() {
            at.push(i as u8);
            go(k, at, out);
            at.pop();
        }
    }
    let mut out = Vec::new();
    go(e, &mut Vec::new(), &mut out);
    out
}

fn subexpr<'e>(e: &'e Expr, at: &[u8]) -> &'e Expr {
    match (e, at.split_first()) {
        (_, None) => e,
        (Expr::Seq(x, y) | Expr::Choice(_, x, y), Some((i, rest))) => {
            subexpr(if *i == 0 { x } else { y }, rest)
        }
        (Expr::While(_, x), Some((_, rest))) => subexpr(x, rest),
        _ => e,
    }
}

fn replace(e: &Expr, at: &[u8], with: &Expr) -> Expr {
    let Some((i, rest)) = at.split_first() else {
        return with.clone();
    };
    match e {
        Expr::Seq(x, y) if *i == 0 => Expr::seq(replace(x, rest, with), (**y).clone()),
        Expr::Seq(x, y) => Expr::seq((**x).clone(), replace(y, rest, with)),
        Expr::Choice(b, x, y) if *i == 0 => {
            Expr::choice(b.clone(), replace(x, rest, with), (**y).clone())
        }
        Expr::Choice(b, x, y) => Expr::choice(b.clone(), (**x).clone(), replace(y, rest, with)),
        Expr::While(b, x) => Expr::while_loop(b.clone(), replace(x, rest, with)),
        leaf => leaf.clone(),
    }
}

/// Unfolds the first while loop once: `e^[b]` becomes `(e;e^[b]) +[b] 1`.
fn unfold_first_loop(e: &Expr) -> Option<Expr> {
    positions(e)
        .into_iter()
        .find_map(|at| match subexpr(e, &at) {
            Expr::While(b, body) => {
                let w = Expr::While(b.clone(), body.clone());
                let unfolded = Expr::choice(b.clone(), Expr::seq((**body).clone(), w), Expr::one());
                Some(replace(e, &at, &unfolded))
            }
            _ => None,
        })
}

/// The pair examined in trial `index`.
pub fn trial_pair(cfg: &GenConfig, index: usize) -> (Expr, Expr) {
    let al = &cfg.alphabet;
    let fixed = |e: &str, f: &str| Some((parse_expr(e, al).ok()?, parse_expr(f, al).ok()?));
    let pinned = match index {
        0 => fixed("(c;p)^[b]", "(p;(c;p +[b] 1))^[b]"),
        1 => fixed("p", "(1^[b]);p"),
        _ => None,
    };
    if let Some(pair) = pinned {
        return pair;
    }
    let mut rng = rng_for(cfg.seed, index as u64 + 1);
    let budget = cfg.max_size.max(1);
    let e = gen_expr(&mut rng, budget, &cfg.weights, al);
    let f = match rng.gen_range(0..4) {
        0 => gen_expr(&mut rng, budget, &cfg.weights, al),
        1 => unfold_first_loop(&e).unwrap_or_else(|| e.clone()),
        2 => {
            // Replace one subexpression with a small random one.
            let spots = positions(&e);
            let at = spots.choose(&mut rng).unwrap();
            let small = gen_expr(&mut rng, 3, &cfg.weights, al);
            let f = replace(&e, at, &small);
            if f.size() <= budget {
                f
            } else {
                e.clone()
            }
        }
        _ => {
            let g = gen_expr(
                &mut rng,
                budget.saturating_sub(e.size() + 1).max(1),
                &cfg.weights,
                al,
            );
            Expr::choice(random_test(&mut rng, al), e.clone(), g)
        }
    };
    let f = if f.size() <= budget {
        f
    } else {
        gen_expr(&mut rng, budget, &cfg.weights, al)
    };
    if rng.gen_bool(0.5) {
        (e, f)
    } else {
        (f, e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialResult {
    pub index: usize,
    pub left: String,
    pub right: String,
    pub verdict: &'static str,
    pub te: usize,
    pub tf: usize,
    pub atoms: usize,
    pub distinct_antecedents: Option<usize>,
    pub distinct_succedents: Option<usize>,
    pub distinct_sequents: Option<usize>,
    pub longest_stage2_segment: usize,
    pub stage2_cap: usize,
    pub failing_branch_len: Option<usize>,
    pub branch_bound: usize,
    pub oracle_bound: usize,
    pub problems: Vec<String>,
}

impl TrialResult {
    pub fn regularity_ok(&self) -> bool {
        self.distinct_antecedents.is_none_or(|n| n <= self.te + 1)
            && self.distinct_succedents.is_none_or(|n| n <= self.tf + 2)
    }

    pub fn stage2_ok(&self) -> bool {
        self.longest_stage2_segment <= self.stage2_cap
    }

    pub fn branch_ok(&self) -> bool {
        self.failing_branch_len
            .is_none_or(|n| n <= self.branch_bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub index: usize,
    pub left: String,
    pub right: String,
    pub shrunk_left: String,
    pub shrunk_right: String,
    pub problems: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub trials: usize,
    pub valid: usize,
    pub invalid: usize,
    pub oracle_bound_rule: String,
    pub discrepancies: Vec<Discrepancy>,
    pub regularity_violations: Vec<usize>,
    pub stage2_violations: Vec<usize>,
    pub branch_violations: Vec<usize>,
    pub max_failing_branch_len: usize,
    pub max_stage2_segment: usize,
    pub max_distinct_sequents: usize,
    #[serde(skip)]
    pub results: Vec<TrialResult>,
}

impl Report {
    /// One JSON object per line: each discrepancy, then a summary.
    pub fn json_lines(&self) -> String {
        let mut out = String::new();
        for d in &self.discrepancies {
            out.push_str(&serde_json::to_string(&serde_json::json!({"discrepancy": d})).unwrap());
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&serde_json::json!({"summary": self})).unwrap());
        out.push('\n');
        out
    }
}

/// Runs one pair through search, the checker and the oracle, returning the
/// problems found (empty when everything agrees).
pub fn examine(
    e: &Expr,
    f: &Expr,
    alphabet: &Alphabet,
    oracle_k: Option<usize>,
    index: usize,
) -> TrialResult {
    let at = all_atoms(alphabet);
    let k = oracle_k.unwrap_or_else(|| default_bound(e, f));
    let mut r = TrialResult {
        index,
        left: e.display(alphabet).to_string(),
        right: f.display(alphabet).to_string(),
        verdict: "error",
        te: e.size(),
        tf: f.size(),
        atoms: alphabet.atom_count(),
        distinct_antecedents: None,
        distinct_succedents: None,
        distinct_sequents: None,
        longest_stage2_segment: 0,
        stage2_cap: 0,
        failing_branch_len: None,
        branch_bound: 0,
        oracle_bound: k,
        problems: Vec::new(),
    };
    let out = match decide_with_stats(e, f, &at, alphabet, &SearchConfig::default()) {
        Ok(o) => o,
        Err(err) => {
            r.problems.push(format!("search error: {err}"));
            return r;
        }
    };
    r.longest_stage2_segment = out.stats.longest_stage2_segment;
    r.stage2_cap = out.stats.stage2_cap;
    r.failing_branch_len = out.stats.failing_branch_len;
    r.branch_bound = out.stats.branch_bound;
    match out.verdict {
        Verdict::Valid(p) => {
            r.verdict = "valid";
            if let Err(errs) = check(&p) {
                r.problems
                    .push(format!("checker rejected the proof: {}", errs[0]));
            }
            if !cedents_tail_generated(&p) {
                r.problems
                    .push("proof has a cedent that is not tail-generated".into());
            }
            for n in &p.nodes {
                let inst = applicable_lists(&n.sequent);
                let mut names: Vec<_> = inst.iter().map(|i| i.name).collect();
                names.dedup();
                if names.len() != inst.len() {
                    r.problems
                        .push("two instances of one rule share a conclusion".into());
                }
            }
            match import_json(&export_json(&p)) {
                Ok(q) if q == p => {}
                _ => r.problems.push("JSON round trip changed the proof".into()),
            }
            let s = stats(&p);
            r.distinct_antecedents = Some(s.distinct_antecedents);
            r.distinct_succedents = Some(s.distinct_succedents);
            r.distinct_sequents = Some(s.distinct_sequents);
            match inclusion_bounded(e, f, &at, k, alphabet) {
                Ok(Inclusion::Ok { .. }) => {}
                Ok(Inclusion::Counterexample(w)) => r.problems.push(format!(
                    "proved, but the oracle refutes it with {}",
                    w.to_text(alphabet)
                )),
                Err(err) => r.problems.push(format!("oracle error: {err}")),
            }
        }
        Verdict::Invalid { witness, .. } => {
            r.verdict = "invalid";
            let ok = at.contains(witness.first())
                && member_unchecked(&witness, e)
                && !member_unchecked(&witness, f);
            if !ok {
                r.problems.push(format!(
                    "witness {} does not verify",
                    witness.to_text(alphabet)
                ));
            }
        }
        Verdict::Unproved { .. } => {
            r.verdict = "unproved";
            r.problems.push("search gave up with k0 enabled".into());
        }
    }
    r
}

/// Greedily replaces subexpressions by `0`, `1` or a leaf while the problem
/// persists.
pub fn shrink(e: &Expr, f: &Expr, alphabet: &Alphabet, oracle_k: Option<usize>) -> (Expr, Expr) {
    let fails = |e: &Expr, f: &Expr| !examine(e, f, alphabet, oracle_k, 0).problems.is_empty();
    let (mut e, mut f) = (e.clone(), f.clone());
    let mut replacements = vec![Expr::zero(), Expr::one()];
    replacements.extend((0..alphabet.progs().len()).map(|i| Expr::Prog(ProgId(i as u16))));
    loop {
        let mut progress = false;
        for side in 0..2 {
            let cur = if side == 0 { &e } else { &f };
            'spots: for at in positions(cur) {
                let cur = if side == 0 { &e } else { &f };
                let here = subexpr(cur, &at);
                let mut options = replacements.clone();
                match here {
                    Expr::Seq(x, y) | Expr::Choice(_, x, y) => {
                        options.push((**x).clone());
                        options.push((**y).clone());
                    }
                    Expr::While(_, x) => options.push((**x).clone()),
                    _ => {}
                }
                for r in options {
                    if r.size() >= here.size() && r != Expr::zero() && r != Expr::one() {
                        continue;
                    }
                    if &r == here {
                        continue;
                    }
                    let cand = replace(cur, &at, &r);
                    let (ce, cf) = if side == 0 {
                        (cand.clone(), f.clone())
                    } else {
                        (e.clone(), cand.clone())
                    };
                    if ce.size() + cf.size() < e.size() + f.size() && fails(&ce, &cf) {
                        e = ce;
                        f = cf;
                        progress = true;
                        break 'spots;
                    }
                }
            }
        }
        if !progress {
            return (e, f);
        }
    }
}

/// Runs `cfg.trials` pairs in parallel. `oracle_k = None` uses
/// `(|T_e|+1)·(|T_f|+1)` per pair.
pub fn crosscheck(cfg: &GenConfig, oracle_k: Option<usize>) -> Report {
    let results: Vec<TrialResult> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let (e, f) = trial_pair(cfg, i);
            examine(&e, &f, &cfg.alphabet, oracle_k, i)
        })
        .collect();
    let mut report = Report {
        trials: cfg.trials,
        oracle_bound_rule: match oracle_k {
            Some(k) => format!("k = {k}"),
            None => "k = (|T_e|+1)*(|T_f|+1)".into(),
        },
        ..Report::default()
    };
    for r in &results {
        match r.verdict {
            "valid" => report.valid += 1,
            "invalid" => report.invalid += 1,
            _ => {}
        }
        if !r.regularity_ok() {
            report.regularity_violations.push(r.index);
        }
        if !r.stage2_ok() {
            report.stage2_violations.push(r.index);
        }
        if !r.branch_ok() {
            report.branch_violations.push(r.index);
        }
        report.max_failing_branch_len = report
            .max_failing_branch_len
            .max(r.failing_branch_len.unwrap_or(0));
        report.max_stage2_segment = report.max_stage2_segment.max(r.longest_stage2_segment);
        report.max_distinct_sequents = report
            .max_distinct_sequents
            .max(r.distinct_sequents.unwrap_or(0));
        if !r.problems.is_empty() {
            let (e, f) = trial_pair(cfg, r.index);
            let (se, sf) = shrink(&e, &f, &cfg.alphabet, oracle_k);
            report.discrepancies.push(Discrepancy {
                index: r.index,
                left: r.left.clone(),
                right: r.right.clone(),
                shrunk_left: se.display(&cfg.alphabet).to_string(),
                shrunk_right: sf.display(&cfg.alphabet).to_string(),
                problems: r.problems.clone(),
            });
        }
    }
    report.results = results;
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> GenConfig {
        GenConfig::new(Alphabet::new(&["b", "c"], &["p", "q"]).unwrap(), 7)
    }

    #[test]
    fn budget_one_gives_a_leaf() {
        for seed in 0..50 {
            let c = GenConfig {
                max_size: 1,
                seed,
                ..cfg()
            };
            assert_eq!(random_expr(&c).size(), 1);
        }
    }

    #[test]
    fn deterministic_and_bounded() {
        let c = cfg();
        assert_eq!(random_expr(&c), random_expr(&c));
        for seed in 0..300 {
            let c = GenConfig { seed, ..cfg() };
            assert!(random_expr(&c).size() <= 12);
            let (e, f) = trial_pair(&c, 5);
            assert!(e.size() <= 12 && f.size() <= 12);
        }
    }

    #[test]
    fn zero_trials() {
        let r = crosscheck(&GenConfig { trials: 0, ..cfg() }, None);
        assert_eq!(r.trials, 0);
        assert!(r.discrepancies.is_empty() && r.results.is_empty());
    }

    #[test]
    fn pinned_pairs() {
        let r = crosscheck(&GenConfig { trials: 2, ..cfg() }, None);
        assert_eq!(r.results[0].verdict, "valid");
        assert_eq!(r.results[1].verdict, "invalid");
        assert!(r.discrepancies.is_empty());
    }

    #[test]
    fn unfolding_is_equivalent() {
        let al = cfg().alphabet;
        let e = parse_expr("(p;c)^[b];q", &al).unwrap();
        let f = unfold_first_loop(&e).unwrap();
        assert_eq!(f.display(&al).to_string(), "(p;c;(p;c)^[b] +[b] 1);q");
    }
}
