//! Bounded inclusion oracle.
//!
//! GKAT programs are deterministic: a continuation (a stack of expressions
//! still to run) and the current atom determine whether the program accepts,
//! fails, or emits one program letter and moves to a new continuation. The
//! oracle explores pairs of continuations of `e` and `f` breadth-first by the
//! number of program letters read, which finds the shortest string of `⟦e⟧`
//! missing from `⟦f⟧` without listing the languages. This is independent of
//! the syntax-tree and rule machinery used by proof search.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::alphabet::{Alphabet, ProgId};
use crate::atoms::{Atom, AtomSet};
use crate::error::SemanticsError;
use crate::semantics::{member_unchecked, GuardedString};
use crate::syntax::Expr;

/// Default cap on explored continuation pairs.
pub const DEFAULT_STATE_BUDGET: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inclusion {
    /// No counterexample with at most `bound` program letters.
    Ok {
        bound: usize,
    },
    Counterexample(GuardedString),
}

impl Inclusion {
    pub fn is_ok(&self) -> bool {
        matches!(self, Inclusion::Ok { .. })
    }
}

/// Front of the vector is the next expression to run.
type Stack = Vec<Expr>;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Step {
    Accept,
    Emit(ProgId, Stack),
    Fail,
}

/// Runs a continuation on one atom up to its next program letter.
fn run(stack: &[Expr], a: Atom) -> Step {
    // Stored reversed so the top is at the end.
    let mut rev: Vec<Expr> = stack.iter().rev().cloned().collect();
    let mut seen: HashSet<Vec<Expr>> = HashSet::new();
    loop {
        let Some(top) = rev.pop() else {
            return Step::Accept;
        };
        match top {
            Expr::Test(b) => {
                if !a.satisfies(&b) {
                    return Step::Fail;
                }
            }
            Expr::Prog(p) => {
                rev.reverse();
                return Step::Emit(p, rev);
            }
            Expr::Seq(x, y) => {
                rev.push(*y);
                rev.push(*x);
            }
            Expr::Choice(b, x, y) => rev.push(if a.satisfies(&b) { *x } else { *y }),
            Expr::While(b, x) => {
                if a.satisfies(&b) {
                    // A loop body that returns to the same configuration
                    // without emitting never terminates.
                    let mut key = rev.clone();
                    key.push(Expr::While(b.clone(), x.clone()));
                    if !seen.insert(key) {
                        return Step::Fail;
                    }
                    rev.push(Expr::While(b, x.clone()));
                    rev.push(*x);
                }
            }
        }
    }
}

struct Ctx {
    width: usize,
    budget: usize,
    completions: HashMap<Stack, Option<GuardedString>>,
}

impl Ctx {
    fn atoms(&self) -> impl Iterator<Item = Atom> {
        (0..1u32 << self.width).map(Atom)
    }

    /// Shortest, then least, member of the continuation's language.
    fn completion(&mut self, start: &Stack) -> Result<Option<GuardedString>, SemanticsError> {
        if let Some(c) = self.completions.get(start) {
            return Ok(c.clone());
        }
        let mut seen: HashSet<Stack> = HashSet::new();
        seen.insert(start.clone());
        // (stack, atoms so far, programs so far)
        let mut layer: Vec<(Stack, Vec<Atom>, Vec<ProgId>)> =
            vec![(start.clone(), Vec::new(), Vec::new())];
        let mut found = None;
        'outer: while !layer.is_empty() {
            let mut next = Vec::new();
            for (s, atoms, progs) in &layer {
                for a in self.atoms() {
                    match run(s, a) {
                        Step::Accept => {
                            let mut atoms = atoms.clone();
                            atoms.push(a);
                            found = GuardedString::new(atoms, progs.clone());
                            break 'outer;
                        }
                        Step::Emit(p, s2) => {
                            if seen.insert(s2.clone()) {
                                if seen.len() > self.budget {
                                    return Err(SemanticsError::ResourceLimit(self.budget));
                                }
                                let mut atoms = atoms.clone();
                                atoms.push(a);
                                let mut progs = progs.clone();
                                progs.push(p);
                                next.push((s2, atoms, progs));
                            }
                        }
                        Step::Fail => {}
                    }
                }
            }
            layer = next;
        }
        self.completions.insert(start.clone(), found.clone());
        Ok(found)
    }
}

fn glue(
    atoms: &[Atom],
    progs: &[ProgId],
    a: Atom,
    p: ProgId,
    rest: &GuardedString,
) -> GuardedString {
    let mut all_atoms = atoms.to_vec();
    all_atoms.push(a);
    all_atoms.extend_from_slice(rest.atoms());
    let mut all_progs = progs.to_vec();
    all_progs.push(p);
    all_progs.extend_from_slice(rest.progs());
    GuardedString::new(all_atoms, all_progs).expect("alternating shape")
}

/// Searches `{w ∈ ⟦e⟧ : first atom in A, at most k programs}` for some
/// `w ∉ ⟦f⟧`. Returns the shortest, then least, such string. `Ok` only
/// certifies the absence of counterexamples up to `k`.
pub fn inclusion_bounded(
    e: &Expr,
    f: &Expr,
    a: &AtomSet,
    k: usize,
    alphabet: &Alphabet,
) -> Result<Inclusion, SemanticsError> {
    inclusion_bounded_with_budget(e, f, a, k, alphabet, DEFAULT_STATE_BUDGET)
}

pub fn inclusion_bounded_with_budget(
    e: &Expr,
    f: &Expr,
    a: &AtomSet,
    k: usize,
    alphabet: &Alphabet,
    budget: usize,
) -> Result<Inclusion, SemanticsError> {
    if !e.fits(alphabet) || !f.fits(alphabet) {
        return Err(SemanticsError::AlphabetMismatch("expression".into()));
    }
    if a.width() != alphabet.test_count() {
        return Err(SemanticsError::AlphabetMismatch("atom set".into()));
    }
    let mut ctx = Ctx {
        width: alphabet.test_count(),
        budget,
        completions: HashMap::new(),
    };
    let start = (vec![e.clone()], vec![f.clone()]);
    let mut seen: HashSet<(Stack, Stack)> = HashSet::new();
    seen.insert(start.clone());
    let mut layer: VecDeque<((Stack, Stack), Vec<Atom>, Vec<ProgId>)> =
        VecDeque::from([(start, Vec::new(), Vec::new())]);
    let mut best: Option<GuardedString> = None;
    let mut depth = 0;

    while !layer.is_empty() && depth <= k {
        if best.as_ref().is_some_and(|b| b.len() <= depth) {
            break;
        }
        let mut next = VecDeque::new();
        for ((se, sf), atoms, progs) in layer {
            let firsts: Vec<Atom> = if depth == 0 {
                a.iter().collect()
            } else {
                ctx.atoms().collect()
            };
            for alpha in firsts {
                let candidate = match (run(&se, alpha), run(&sf, alpha)) {
                    (Step::Fail, _) | (Step::Accept, Step::Accept) => None,
                    (Step::Accept, _) => {
                        let mut atoms = atoms.clone();
                        atoms.push(alpha);
                        GuardedString::new(atoms, progs.clone())
                    }
                    (Step::Emit(p, se2), Step::Emit(q, sf2)) if p == q => {
                        let state = (se2, sf2);
                        if seen.insert(state.clone()) {
                            if seen.len() > budget {
                                return Err(SemanticsError::ResourceLimit(budget));
                            }
                            let mut atoms = atoms.clone();
                            atoms.push(alpha);
                            let mut progs = progs.clone();
                            progs.push(p);
                            next.push_back((state, atoms, progs));
                        }
                        None
                    }
                    (Step::Emit(p, se2), _) => ctx
                        .completion(&se2)?
                        .map(|rest| glue(&atoms, &progs, alpha, p, &rest)),
                };
                if let Some(w) = candidate {
                    if w.len() <= k && best.as_ref().is_none_or(|b| w < *b) {
                        best = Some(w);
                    }
                }
            }
        }
        layer = next;
        depth += 1;
    }

    match best {
        Some(w) => {
            // Exact confirmation against the denotational membership check.
            debug_assert!(member_unchecked(&w, e) && !member_unchecked(&w, f));
            if !(a.contains(w.first()) && member_unchecked(&w, e) && !member_unchecked(&w, f)) {
                return Err(SemanticsError::AlphabetMismatch(
                    "oracle candidate failed membership confirmation".into(),
                ));
            }
            Ok(Inclusion::Counterexample(w))
        }
        None => Ok(Inclusion::Ok { bound: k }),
    }
}

/// Default oracle bound `(|T_e|+1)·(|T_f|+1)`.
pub fn default_bound(e: &Expr, f: &Expr) -> usize {
    (e.size() + 1) * (f.size() + 1)
}
