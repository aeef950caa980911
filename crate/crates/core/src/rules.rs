//! Sequents and the rules of SGKAT.
//!
//! Rules act on the leftmost expression of a cedent only. Two views are
//! provided: [`applicable`] works on tail-generated node cedents and drives
//! proof search; [`applicable_lists`] works on plain expression lists and
//! drives the certificate checker.

use std::fmt;
use std::str::FromStr;

use crate::alphabet::Alphabet;
use crate::atoms::AtomSet;
use crate::error::TreeError;
use crate::syntax::{cedent_text, Expr, Test, ZERO_EXPR};
use crate::tree::{realize_on, NodeCedent, Origin, SyntaxTree};

/// Rule names in priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleName {
    BL,
    PlusBL,
    DotL,
    WhileL,
    BR,
    PlusBR,
    DotR,
    WhileR,
    Id,
    Bot,
    K,
    K0,
}

impl RuleName {
    pub const ALL: [RuleName; 12] = [
        RuleName::BL,
        RuleName::PlusBL,
        RuleName::DotL,
        RuleName::WhileL,
        RuleName::BR,
        RuleName::PlusBR,
        RuleName::DotR,
        RuleName::WhileR,
        RuleName::Id,
        RuleName::Bot,
        RuleName::K,
        RuleName::K0,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RuleName::BL => "b-l",
            RuleName::PlusBL => "+b-l",
            RuleName::DotL => ".-l",
            RuleName::WhileL => "(b)-l",
            RuleName::BR => "b-r",
            RuleName::PlusBR => "+b-r",
            RuleName::DotR => ".-r",
            RuleName::WhileR => "(b)-r",
            RuleName::Id => "id",
            RuleName::Bot => "bot",
            RuleName::K => "k",
            RuleName::K0 => "k0",
        }
    }

    pub fn is_left(self) -> bool {
        self <= RuleName::WhileL
    }

    pub fn is_right(self) -> bool {
        RuleName::BR <= self && self <= RuleName::WhileR
    }

    pub fn is_axiom(self) -> bool {
        matches!(self, RuleName::Id | RuleName::Bot)
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleName::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// `Γ ⇒_A Δ` with tail-generated cedents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub gamma: NodeCedent,
    pub atoms: AtomSet,
    pub delta: NodeCedent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleInstance {
    pub name: RuleName,
    pub conclusion: Sequent,
    pub premises: Vec<Sequent>,
}

/// The syntax trees of `e` and `f` for a sequent `e ⇒ f`.
#[derive(Debug, Clone)]
pub struct Context {
    pub alphabet: Alphabet,
    pub left: SyntaxTree,
    pub right: SyntaxTree,
}

impl Context {
    pub fn new(alphabet: &Alphabet, e: &Expr, f: &Expr) -> Context {
        Context {
            alphabet: alphabet.clone(),
            left: SyntaxTree::build(e),
            right: SyntaxTree::build(f),
        }
    }

    pub fn width(&self) -> usize {
        self.alphabet.test_count()
    }

    /// `e ⇒_A f` at the tree roots.
    pub fn root_sequent(&self, atoms: AtomSet) -> Sequent {
        Sequent {
            gamma: NodeCedent::at(Origin::Left, self.left.root()),
            atoms,
            delta: NodeCedent::at(Origin::Right, self.right.root()),
        }
    }

    pub fn realize(&self, s: &Sequent) -> Result<ListSequent, TreeError> {
        Ok(ListSequent {
            gamma: realize_on(&self.left, Origin::Left, s.gamma)?,
            atoms: s.atoms.clone(),
            delta: realize_on(&self.right, Origin::Right, s.delta)?,
        })
    }

    pub fn text(&self, s: &Sequent) -> String {
        match self.realize(s) {
            Ok(l) => l.text(&self.alphabet),
            Err(e) => format!("<{e}>"),
        }
    }
}

/// All rule instances with conclusion `seq`, at most one per rule, in
/// priority order. Premise cedents are computed on the node representation.
pub fn applicable(ctx: &Context, seq: &Sequent) -> Vec<RuleInstance> {
    let (lt, rt) = (&ctx.left, &ctx.right);
    let a = &seq.atoms;
    let full = AtomSet::full(ctx.width());
    let mut out = Vec::new();
    let mut push = |name: RuleName, premises: Vec<Sequent>| {
        out.push(RuleInstance {
            name,
            conclusion: seq.clone(),
            premises,
        });
    };
    let mk = |gamma: NodeCedent, atoms: AtomSet, delta: NodeCedent| Sequent {
        gamma,
        atoms,
        delta,
    };

    let g_head = seq.gamma.head();
    let g_expr = seq.gamma.head_expr(lt);
    let d_expr = seq.delta.head_expr(rt);

    if let (Some(u), Some(ge)) = (g_head, g_expr) {
        let kids = lt.children(u);
        match ge {
            Expr::Test(b) => push(
                RuleName::BL,
                vec![mk(seq.gamma.pop(lt), a.restrict(b), seq.delta)],
            ),
            Expr::Choice(b, ..) => push(
                RuleName::PlusBL,
                vec![
                    mk(seq.gamma.descend(kids[0]), a.restrict(b), seq.delta),
                    mk(
                        seq.gamma.descend(kids[1]),
                        a.restrict(&b.clone().not()),
                        seq.delta,
                    ),
                ],
            ),
            Expr::Seq(..) => push(
                RuleName::DotL,
                vec![mk(seq.gamma.descend(kids[0]), a.clone(), seq.delta)],
            ),
            Expr::While(b, _) => push(
                RuleName::WhileL,
                vec![
                    mk(seq.gamma.descend(kids[0]), a.restrict(b), seq.delta),
                    mk(seq.gamma.pop(lt), a.restrict(&b.clone().not()), seq.delta),
                ],
            ),
            Expr::Prog(_) => {}
        }
    }

    if let Some(de) = d_expr {
        // The zero cedent has no node; it only admits b-r.
        let kids = seq.delta.head().map(|v| rt.children(v)).unwrap_or(&[]);
        match de {
            Expr::Test(b) => {
                if a.restrict(b) == *a {
                    push(
                        RuleName::BR,
                        vec![mk(seq.gamma, a.clone(), seq.delta.pop(rt))],
                    );
                }
            }
            Expr::Choice(b, ..) => push(
                RuleName::PlusBR,
                vec![
                    mk(seq.gamma, a.restrict(b), seq.delta.descend(kids[0])),
                    mk(
                        seq.gamma,
                        a.restrict(&b.clone().not()),
                        seq.delta.descend(kids[1]),
                    ),
                ],
            ),
            Expr::Seq(..) => push(
                RuleName::DotR,
                vec![mk(seq.gamma, a.clone(), seq.delta.descend(kids[0]))],
            ),
            Expr::While(b, _) => push(
                RuleName::WhileR,
                vec![
                    mk(seq.gamma, a.restrict(b), seq.delta.descend(kids[0])),
                    mk(seq.gamma, a.restrict(&b.clone().not()), seq.delta.pop(rt)),
                ],
            ),
            Expr::Prog(_) => {}
        }
    }

    if seq.gamma.is_empty() && seq.delta.is_empty() {
        push(RuleName::Id, vec![]);
    }
    if a.is_empty() {
        push(RuleName::Bot, vec![]);
    }
    if let Some(Expr::Prog(p)) = g_expr {
        if d_expr == Some(&Expr::Prog(*p)) {
            push(
                RuleName::K,
                vec![mk(seq.gamma.pop(lt), full.clone(), seq.delta.pop(rt))],
            );
        }
        push(
            RuleName::K0,
            vec![mk(seq.gamma.pop(lt), full, NodeCedent::zero())],
        );
    }
    out
}

/// Highest-priority applicable instance.
pub fn priority_rule(ctx: &Context, seq: &Sequent) -> Option<RuleInstance> {
    applicable(ctx, seq).into_iter().next()
}

/// Empty, or headed by a primitive program.
pub fn is_exposed(tree: &SyntaxTree, c: &NodeCedent) -> bool {
    match c.head_expr(tree) {
        None => true,
        Some(e) => e.is_prog(),
    }
}

/// `Γ ⇒_A Δ` over plain expression lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ListSequent {
    pub gamma: Vec<Expr>,
    pub atoms: AtomSet,
    pub delta: Vec<Expr>,
}

impl ListSequent {
    /// Text form `Γ |-[A] Δ`; `A` prints as `*` for all atoms.
    pub fn text(&self, alphabet: &Alphabet) -> String {
        format!(
            "{} |-[{}] {}",
            cedent_text(&self.gamma, alphabet),
            self.atoms.to_test_text(alphabet),
            cedent_text(&self.delta, alphabet)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListRuleInstance {
    pub name: RuleName,
    pub premises: Vec<ListSequent>,
}

fn with_head(head: Vec<Expr>, rest: &[Expr]) -> Vec<Expr> {
    let mut v = head;
    v.extend_from_slice(rest);
    v
}

/// All rule instances with conclusion `seq` over expression lists, following
/// the rule schemas literally.
pub fn applicable_lists(seq: &ListSequent) -> Vec<ListRuleInstance> {
    let a = &seq.atoms;
    let full = AtomSet::full(a.width());
    let mut out = Vec::new();
    let mut push = |name: RuleName, premises: Vec<ListSequent>| {
        out.push(ListRuleInstance { name, premises });
    };
    let mk = |gamma: Vec<Expr>, atoms: AtomSet, delta: Vec<Expr>| ListSequent {
        gamma,
        atoms,
        delta,
    };
    let not = |b: &Test| b.clone().not();

    if let Some((g, gs)) = seq.gamma.split_first() {
        let d = seq.delta.clone();
        match g {
            Expr::Test(b) => push(RuleName::BL, vec![mk(gs.to_vec(), a.restrict(b), d)]),
            Expr::Choice(b, e, f) => push(
                RuleName::PlusBL,
                vec![
                    mk(with_head(vec![(**e).clone()], gs), a.restrict(b), d.clone()),
                    mk(with_head(vec![(**f).clone()], gs), a.restrict(&not(b)), d),
                ],
            ),
            Expr::Seq(e, f) => push(
                RuleName::DotL,
                vec![mk(
                    with_head(vec![(**e).clone(), (**f).clone()], gs),
                    a.clone(),
                    d,
                )],
            ),
            Expr::While(b, e) => push(
                RuleName::WhileL,
                vec![
                    mk(
                        with_head(vec![(**e).clone(), g.clone()], gs),
                        a.restrict(b),
                        d.clone(),
                    ),
                    mk(gs.to_vec(), a.restrict(&not(b)), d),
                ],
            ),
            Expr::Prog(_) => {}
        }
    }

    if let Some((h, hs)) = seq.delta.split_first() {
        let g = seq.gamma.clone();
        match h {
            Expr::Test(b) => {
                if a.restrict(b) == *a {
                    push(RuleName::BR, vec![mk(g, a.clone(), hs.to_vec())]);
                }
            }
            Expr::Choice(b, e, f) => push(
                RuleName::PlusBR,
                vec![
                    mk(g.clone(), a.restrict(b), with_head(vec![(**e).clone()], hs)),
                    mk(g, a.restrict(&not(b)), with_head(vec![(**f).clone()], hs)),
                ],
            ),
            Expr::Seq(e, f) => push(
                RuleName::DotR,
                vec![mk(
                    g,
                    a.clone(),
                    with_head(vec![(**e).clone(), (**f).clone()], hs),
                )],
            ),
            Expr::While(b, e) => push(
                RuleName::WhileR,
                vec![
                    mk(
                        g.clone(),
                        a.restrict(b),
                        with_head(vec![(**e).clone(), h.clone()], hs),
                    ),
                    mk(g, a.restrict(&not(b)), hs.to_vec()),
                ],
            ),
            Expr::Prog(_) => {}
        }
    }

    if seq.gamma.is_empty() && seq.delta.is_empty() {
        push(RuleName::Id, vec![]);
    }
    if a.is_empty() {
        push(RuleName::Bot, vec![]);
    }
    if let Some((Expr::Prog(p), gs)) = seq.gamma.split_first() {
        if let Some((Expr::Prog(q), hs)) = seq.delta.split_first() {
            if p == q {
                push(
                    RuleName::K,
                    vec![mk(gs.to_vec(), full.clone(), hs.to_vec())],
                );
            }
        }
        push(
            RuleName::K0,
            vec![mk(gs.to_vec(), full, vec![ZERO_EXPR.clone()])],
        );
    }
    out
}
