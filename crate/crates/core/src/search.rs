//! Four-stage bottom-up proof search.
//!
//! Each branch runs through these stages:
//! 1. left rules until the antecedent is exposed, closing repeats as
//!    back-edges;
//! 2. right rules, watching for a non-productive repetition of a while loop
//!    in the succedent;
//! 3. after such a repetition, `k0` (or `⊥`, or a failing leaf);
//! 4. `id`, `⊥`, `k` or `k0`, or a failing leaf.
//!
//! Every step taken is invertible, so the first failing leaf refutes the
//! root. The refutation is turned into a guarded string by walking back up
//! the branch, and confirmed by exact membership before it is returned.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::alphabet::Alphabet;
use crate::atoms::{Atom, AtomSet};
use crate::proof::Proof;
use crate::rules::{applicable, is_exposed, Context, ListSequent, RuleInstance, RuleName, Sequent};
use crate::semantics::{member_unchecked, GuardedString};
use crate::syntax::{Expr, Test};
use crate::tree::Origin;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Hard cap on branch length; `None` means `4·|T_e|·|At|·|T_f|`.
    pub max_branch_steps: Option<usize>,
    /// Expected stage-2 segment bound; `None` means `2·|At|·|T_f|`. Segments
    /// longer than this are reported in [`SearchStats`].
    pub stage2_cap: Option<usize>,
    pub enable_k0: bool,
    pub memoize: bool,
    pub trace: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_branch_steps: None,
            stage2_cap: None,
            enable_k0: true,
            memoize: true,
            trace: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    S1,
    S2,
    S3,
    S4,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            Stage::S1 => 1,
            Stage::S2 => 2,
            Stage::S3 => 3,
            Stage::S4 => 4,
        };
        write!(f, "S{n}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid(Proof),
    Invalid {
        witness: GuardedString,
        failing_branch: Vec<ListSequent>,
    },
    /// Only produced with `enable_k0 = false`, where a failing leaf need not
    /// refute the root.
    Unproved {
        failing_branch: Vec<ListSequent>,
    },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid(_))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: usize,
    pub memo_hits: usize,
    pub backedges: usize,
    pub longest_stage2_segment: usize,
    pub stage2_cap: usize,
    pub branch_bound: usize,
    /// Rule applications from the root to the failing leaf.
    pub failing_branch_len: Option<usize>,
}

impl SearchStats {
    pub fn stage2_within_cap(&self) -> bool {
        self.longest_stage2_segment <= self.stage2_cap
    }

    pub fn failing_branch_within_bound(&self) -> bool {
        self.failing_branch_len
            .is_none_or(|n| n <= self.branch_bound)
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub verdict: Verdict,
    pub stats: SearchStats,
    /// `depth stage rule sequent`, one line per step, when tracing.
    pub trace: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("expression or atom set does not fit the alphabet")]
    AlphabetMismatch,
    #[error("branch exceeded {limit} steps; last sequents:\n{}", branch.join("\n"))]
    StepBudget { limit: usize, branch: Vec<String> },
    #[error("internal error: extracted counterexample `{witness}` does not refute the root")]
    WitnessRejected { witness: String },
    #[error("internal error: back-edge without (b)-l on its cycle at `{sequent}`")]
    UnfairBackedge { sequent: String },
}

struct SNode {
    seq: Sequent,
    rule: Option<RuleName>,
    children: Vec<usize>,
    backedge: Option<usize>,
    reference: Option<usize>,
}

struct PathEntry {
    seq: Sequent,
    node: usize,
    rule: Option<RuleName>,
}

enum Res {
    /// `low` is the least depth targeted by a back-edge in the subtree.
    Closed {
        node: usize,
        low: usize,
    },
    Failed,
}

enum LeafKind {
    Stage3,
    Stage4,
}

struct Search<'c> {
    ctx: &'c Context,
    cfg: &'c SearchConfig,
    budget: usize,
    arena: Vec<SNode>,
    path: Vec<PathEntry>,
    on_path: HashMap<Sequent, Vec<usize>>,
    memo: HashMap<Sequent, usize>,
    stats: SearchStats,
    trace: Vec<String>,
    failure: Option<Failure>,
}

enum Failure {
    Refuted {
        witness: GuardedString,
        branch: Vec<ListSequent>,
    },
    Unproved {
        branch: Vec<ListSequent>,
    },
}

type History = Vec<(Sequent, bool)>;

impl<'c> Search<'c> {
    fn log(&mut self, stage: Stage, what: &str, seq: &Sequent) {
        if self.cfg.trace {
            let on_path = self.path.last().is_some_and(|e| e.seq == *seq);
            let depth = self.path.len() - usize::from(on_path);
            let line = format!("{} {} {} {}", depth, stage, what, self.ctx.text(seq));
            self.trace.push(line);
        }
    }

    fn leaf(&mut self, seq: &Sequent) -> usize {
        self.arena.push(SNode {
            seq: seq.clone(),
            rule: None,
            children: Vec::new(),
            backedge: None,
            reference: None,
        });
        self.stats.nodes += 1;
        self.arena.len() - 1
    }

    fn prove(&mut self, seq: Sequent, stage: Stage, hist: History) -> Result<Res, SearchError> {
        let depth = self.path.len();
        if depth > self.budget {
            let branch = self
                .path
                .iter()
                .rev()
                .take(12)
                .map(|e| self.ctx.text(&e.seq))
                .collect();
            return Err(SearchError::StepBudget {
                limit: self.budget,
                branch,
            });
        }
        if self.cfg.memoize {
            if let Some(&target) = self.memo.get(&seq) {
                self.log(stage, "ref", &seq);
                let node = self.leaf(&seq);
                self.arena[node].reference = Some(target);
                self.stats.memo_hits += 1;
                return Ok(Res::Closed {
                    node,
                    low: usize::MAX,
                });
            }
        }
        if stage == Stage::S1 {
            if let Some(&anc) = self.on_path.get(&seq).and_then(|v| v.last()) {
                if !self.path[anc..]
                    .iter()
                    .any(|e| e.rule == Some(RuleName::WhileL))
                {
                    return Err(SearchError::UnfairBackedge {
                        sequent: self.ctx.text(&seq),
                    });
                }
                self.log(stage, "backedge", &seq);
                let node = self.leaf(&seq);
                self.arena[node].backedge = Some(self.path[anc].node);
                self.stats.backedges += 1;
                return Ok(Res::Closed { node, low: anc });
            }
        }
        let node = self.leaf(&seq);
        if seq.atoms.is_empty() {
            self.log(stage, RuleName::Bot.as_str(), &seq);
            self.arena[node].rule = Some(RuleName::Bot);
            return Ok(Res::Closed {
                node,
                low: usize::MAX,
            });
        }

        self.path.push(PathEntry {
            seq: seq.clone(),
            node,
            rule: None,
        });
        self.on_path.entry(seq.clone()).or_default().push(depth);
        let res = self.expand(node, &seq, stage, hist);
        self.path.pop();
        let v = self.on_path.get_mut(&seq).unwrap();
        v.pop();
        if v.is_empty() {
            self.on_path.remove(&seq);
        }

        if let Ok(Res::Closed { low, .. }) = &res {
            if self.cfg.memoize && *low >= depth {
                self.memo.insert(seq, node);
            }
        }
        res
    }

    fn apply(
        &mut self,
        node: usize,
        inst: RuleInstance,
        stage: Stage,
        next: Stage,
        hist: &History,
    ) -> Result<Res, SearchError> {
        self.log(stage, inst.name.as_str(), &inst.conclusion);
        self.arena[node].rule = Some(inst.name);
        self.path.last_mut().unwrap().rule = Some(inst.name);
        let mut low = usize::MAX;
        let mut children = Vec::with_capacity(inst.premises.len());
        let was_while_r = inst.name == RuleName::WhileR;
        for prem in inst.premises {
            let h = if next == Stage::S2 {
                let mut h = hist.clone();
                h.push((inst.conclusion.clone(), was_while_r));
                h
            } else {
                Vec::new()
            };
            match self.prove(prem, next, h)? {
                Res::Failed => return Ok(Res::Failed),
                Res::Closed { node: c, low: l } => {
                    children.push(c);
                    low = low.min(l);
                }
            }
        }
        self.arena[node].children = children;
        Ok(Res::Closed { node, low })
    }

    fn expand(
        &mut self,
        node: usize,
        seq: &Sequent,
        mut stage: Stage,
        hist: History,
    ) -> Result<Res, SearchError> {
        let ctx = self.ctx;
        loop {
            match stage {
                Stage::S1 => {
                    debug_assert_eq!(seq.gamma.origin(), Origin::Left);
                    if is_exposed(&ctx.left, &seq.gamma) {
                        stage = Stage::S2;
                        continue;
                    }
                    let inst = applicable(ctx, seq)
                        .into_iter()
                        .next()
                        .expect("a left rule applies");
                    debug_assert!(inst.name.is_left());
                    return self.apply(node, inst, stage, Stage::S1, &Vec::new());
                }
                Stage::S2 => {
                    if self.repeats(seq, &hist) {
                        self.note_segment(hist.len());
                        stage = Stage::S3;
                        continue;
                    }
                    match applicable(ctx, seq).into_iter().find(|i| i.name.is_right()) {
                        Some(inst) => {
                            self.note_segment(hist.len() + 1);
                            return self.apply(node, inst, stage, Stage::S2, &hist);
                        }
                        None => {
                            self.note_segment(hist.len());
                            stage = Stage::S4;
                        }
                    }
                }
                Stage::S3 => {
                    if seq.gamma.is_empty() {
                        return self.fail(seq, LeafKind::Stage3, stage);
                    }
                    if !self.cfg.enable_k0 {
                        return self.fail(seq, LeafKind::Stage3, stage);
                    }
                    let inst = applicable(ctx, seq)
                        .into_iter()
                        .find(|i| i.name == RuleName::K0)
                        .expect("exposed non-empty antecedent admits k0");
                    return self.apply(node, inst, stage, Stage::S1, &Vec::new());
                }
                Stage::S4 => {
                    let rules = applicable(ctx, seq);
                    let pick = rules.into_iter().find(|i| match i.name {
                        RuleName::Id | RuleName::K => true,
                        RuleName::K0 => self.cfg.enable_k0,
                        _ => false,
                    });
                    return match pick {
                        Some(inst) if inst.name == RuleName::Id => {
                            self.log(stage, "id", seq);
                            self.arena[node].rule = Some(RuleName::Id);
                            Ok(Res::Closed {
                                node,
                                low: usize::MAX,
                            })
                        }
                        Some(inst) => self.apply(node, inst, stage, Stage::S1, &Vec::new()),
                        None => self.fail(seq, LeafKind::Stage4, stage),
                    };
                }
            }
        }
    }

    fn note_segment(&mut self, len: usize) {
        self.stats.longest_stage2_segment = self.stats.longest_stage2_segment.max(len);
    }

    /// An earlier stage-2 sequent equal to `seq` that concluded `(b)-r`, with
    /// its succedent a final segment of every succedent since.
    fn repeats(&self, seq: &Sequent, hist: &History) -> bool {
        if !matches!(seq.delta.head_expr(&self.ctx.right), Some(Expr::While(..)))
            || seq.delta.is_zero()
        {
            return false;
        }
        hist.iter().enumerate().any(|(n, (s, was_while_r))| {
            *was_while_r
                && s == seq
                && hist[n..].iter().all(|(si, _)| {
                    self.ctx
                        .right
                        .is_final_segment(s.delta.head(), si.delta.head())
                })
        })
    }

    fn fail(&mut self, seq: &Sequent, kind: LeafKind, stage: Stage) -> Result<Res, SearchError> {
        self.log(stage, "fail", seq);
        let branch: Vec<ListSequent> = self
            .path
            .iter()
            .map(|e| self.ctx.realize(&e.seq).unwrap())
            .collect();
        self.stats.failing_branch_len = Some(self.path.len() - 1);
        if !self.cfg.enable_k0 && !seq.gamma.is_empty() {
            self.failure = Some(Failure::Unproved { branch });
            return Ok(Res::Failed);
        }
        match self.extract(seq, kind, &branch) {
            Ok(witness) => self.failure = Some(Failure::Refuted { witness, branch }),
            Err(_) if !self.cfg.enable_k0 => self.failure = Some(Failure::Unproved { branch }),
            Err(e) => return Err(e),
        }
        Ok(Res::Failed)
    }

    /// Builds a root counterexample from a failing leaf by walking the branch
    /// upwards. Only `k` and `k0` change the witness, by prefixing `α p`.
    fn extract(
        &self,
        leaf: &Sequent,
        _kind: LeafKind,
        branch: &[ListSequent],
    ) -> Result<GuardedString, SearchError> {
        let leaf_list = branch.last().unwrap();
        debug_assert_eq!(self.ctx.realize(leaf).unwrap(), *leaf_list);
        let mut w = GuardedString::atom(preferred_atom(&leaf_list.atoms, &leaf_list.delta));
        for (entry, conc) in self.path.iter().zip(branch).rev().skip(1) {
            if !matches!(entry.rule, Some(RuleName::K | RuleName::K0)) {
                continue;
            }
            let Some(Expr::Prog(p)) = conc.gamma.first() else {
                unreachable!("k and k0 have a program on the left");
            };
            let g = Expr::fold(&conc.gamma);
            let d = Expr::fold(&conc.delta);
            let first = preferred_atom(&conc.atoms, &conc.delta);
            let candidates = std::iter::once(first).chain(conc.atoms.iter());
            let mut chosen = w.prepend(first, *p);
            for a in candidates {
                let cand = w.prepend(a, *p);
                if member_unchecked(&cand, &g) && !member_unchecked(&cand, &d) {
                    chosen = cand;
                    break;
                }
            }
            w = chosen;
        }
        let root = &branch[0];
        let ok = root.atoms.contains(w.first())
            && member_unchecked(&w, &Expr::fold(&root.gamma))
            && !member_unchecked(&w, &Expr::fold(&root.delta));
        if ok {
            Ok(w)
        } else {
            Err(SearchError::WitnessRejected {
                witness: w.to_text(&self.ctx.alphabet),
            })
        }
    }
}

/// An atom of `A` falsifying the succedent's head test when there is one.
fn preferred_atom(a: &AtomSet, delta: &[Expr]) -> Atom {
    if let Some(Expr::Test(b)) = delta.first() {
        if let Some(x) = a.restrict(&Test::not(b.clone())).first() {
            return x;
        }
    }
    a.first()
        .expect("failing sequents have a non-empty atom set")
}

/// Decides `A ⋄ ⟦e⟧ ⊆ ⟦f⟧`.
pub fn decide(
    e: &Expr,
    f: &Expr,
    a: &AtomSet,
    alphabet: &Alphabet,
    cfg: &SearchConfig,
) -> Result<Verdict, SearchError> {
    decide_with_stats(e, f, a, alphabet, cfg).map(|o| o.verdict)
}

pub fn decide_with_stats(
    e: &Expr,
    f: &Expr,
    a: &AtomSet,
    alphabet: &Alphabet,
    cfg: &SearchConfig,
) -> Result<Outcome, SearchError> {
    if !e.fits(alphabet) || !f.fits(alphabet) || a.width() != alphabet.test_count() {
        return Err(SearchError::AlphabetMismatch);
    }
    let ctx = Context::new(alphabet, e, f);
    let atom_count = alphabet.atom_count();
    let (te, tf) = (ctx.left.len(), ctx.right.len());
    let branch_bound = 4 * te * atom_count * tf;
    let stage2_cap = cfg.stage2_cap.unwrap_or(2 * atom_count * tf);
    let mut s = Search {
        ctx: &ctx,
        cfg,
        budget: cfg.max_branch_steps.unwrap_or(branch_bound),
        arena: Vec::new(),
        path: Vec::new(),
        on_path: HashMap::new(),
        memo: HashMap::new(),
        stats: SearchStats {
            stage2_cap,
            branch_bound,
            ..SearchStats::default()
        },
        trace: Vec::new(),
        failure: None,
    };
    let root = ctx.root_sequent(a.clone());
    let verdict = match s.prove(root, Stage::S1, Vec::new())? {
        Res::Closed { node, .. } => {
            debug_assert_eq!(node, 0);
            let mut proof = Proof::new(alphabet, e.clone(), f.clone());
            for n in &s.arena {
                let id = proof.push(
                    ctx.realize(&n.seq)
                        .expect("search cedents come from the trees"),
                );
                proof.nodes[id].rule = n.rule;
                proof.nodes[id].children = n.children.clone();
                proof.nodes[id].backedge = n.backedge;
                proof.nodes[id].reference = n.reference;
            }
            proof.root = node;
            Verdict::Valid(proof)
        }
        Res::Failed => match s.failure.take().expect("failure recorded") {
            Failure::Refuted { witness, branch } => Verdict::Invalid {
                witness,
                failing_branch: branch,
            },
            Failure::Unproved { branch } => Verdict::Unproved {
                failing_branch: branch,
            },
        },
    };
    Ok(Outcome {
        verdict,
        stats: s.stats,
        trace: s.trace,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `e ≤ f` fails.
    LeftToRight,
    /// `f ≤ e` fails.
    RightToLeft,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent(Proof, Proof),
    Inequivalent {
        direction: Direction,
        witness: GuardedString,
    },
    Unproved {
        direction: Direction,
    },
}

/// Decides `A ⋄ ⟦e⟧ = A ⋄ ⟦f⟧` by two inclusion checks, run in parallel.
pub fn equiv(
    e: &Expr,
    f: &Expr,
    a: &AtomSet,
    alphabet: &Alphabet,
    cfg: &SearchConfig,
) -> Result<Equivalence, SearchError> {
    let (lr, rl) = rayon::join(
        || decide(e, f, a, alphabet, cfg),
        || decide(f, e, a, alphabet, cfg),
    );
    let (lr, rl) = (lr?, rl?);
    Ok(match (lr, rl) {
        (Verdict::Valid(p), Verdict::Valid(q)) => Equivalence::Equivalent(p, q),
        (Verdict::Invalid { witness, .. }, _) => Equivalence::Inequivalent {
            direction: Direction::LeftToRight,
            witness,
        },
        (_, Verdict::Invalid { witness, .. }) => Equivalence::Inequivalent {
            direction: Direction::RightToLeft,
            witness,
        },
        (Verdict::Unproved { .. }, _) => Equivalence::Unproved {
            direction: Direction::LeftToRight,
        },
        (_, Verdict::Unproved { .. }) => Equivalence::Unproved {
            direction: Direction::RightToLeft,
        },
    })
}
