//! Syntax trees with node identities, the `tail` function, and tail-generated
//! cedents.
//!
//! Every cedent reachable in a proof of `e ⇒ f` is `u, tail(u)` for a node `u`
//! of the syntax tree of `e` (or of `f`), so a cedent is represented by its
//! head node alone.

use std::collections::HashMap;

use crate::error::TreeError;
use crate::syntax::{Expr, ZERO_EXPR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub label: Expr,
    pub children: Vec<NodeId>,
    pub parent: Option<NodeId>,
}

/// Labelled ordered tree of an expression. Nodes are numbered in pre-order,
/// so the root is `NodeId(0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxTree {
    nodes: Vec<Node>,
    tails: Vec<Vec<NodeId>>,
}

impl SyntaxTree {
    pub fn build(e: &Expr) -> SyntaxTree {
        let mut nodes = Vec::with_capacity(e.size());
        fn go(e: &Expr, parent: Option<NodeId>, nodes: &mut Vec<Node>) -> NodeId {
            let id = NodeId(nodes.len() as u32);
            nodes.push(Node {
                id,
                label: e.clone(),
                children: Vec::new(),
                parent,
            });
            let kids: Vec<&Expr> = match e {
                Expr::Test(_) | Expr::Prog(_) => vec![],
                Expr::Seq(x, y) | Expr::Choice(_, x, y) => vec![x, y],
                Expr::While(_, x) => vec![x],
            };
            let ids: Vec<NodeId> = kids.into_iter().map(|k| go(k, Some(id), nodes)).collect();
            nodes[id.0 as usize].children = ids;
            id
        }
        go(e, None, &mut nodes);

        // Parents precede children in pre-order, so one forward pass suffices.
        let mut tails: Vec<Vec<NodeId>> = vec![Vec::new(); nodes.len()];
        for i in 0..nodes.len() {
            let u = &nodes[i];
            let tu = tails[i].clone();
            match (&u.label, u.children.as_slice()) {
                (Expr::Seq(..), [u1, u2]) => {
                    let mut t1 = vec![*u2];
                    t1.extend_from_slice(&tu);
                    tails[u1.0 as usize] = t1;
                    tails[u2.0 as usize] = tu;
                }
                (Expr::Choice(..), [u1, u2]) => {
                    tails[u1.0 as usize] = tu.clone();
                    tails[u2.0 as usize] = tu;
                }
                (Expr::While(..), [v]) => {
                    let mut tv = vec![u.id];
                    tv.extend_from_slice(&tu);
                    tails[v.0 as usize] = tv;
                }
                _ => {}
            }
        }
        SyntaxTree { nodes, tails }
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, u: NodeId) -> Result<&Node, TreeError> {
        self.nodes
            .get(u.0 as usize)
            .ok_or(TreeError::UnknownNode(u.0))
    }

    pub fn label(&self, u: NodeId) -> &Expr {
        &self.nodes[u.0 as usize].label
    }

    pub fn children(&self, u: NodeId) -> &[NodeId] {
        &self.nodes[u.0 as usize].children
    }

    pub fn tail(&self, u: NodeId) -> Result<&[NodeId], TreeError> {
        self.tails
            .get(u.0 as usize)
            .map(Vec::as_slice)
            .ok_or(TreeError::UnknownNode(u.0))
    }

    /// First element of `tail(u)`: the head of the cedent left after
    /// removing `u` from `u, tail(u)`.
    pub fn next(&self, u: NodeId) -> Option<NodeId> {
        self.tails[u.0 as usize].first().copied()
    }

    /// Realisation of `u, tail(u)`.
    pub fn realize_from(&self, u: NodeId) -> Vec<Expr> {
        std::iter::once(u)
            .chain(self.tails[u.0 as usize].iter().copied())
            .map(|v| self.label(v).clone())
            .collect()
    }

    /// Length of the cedent `u, tail(u)`.
    pub fn cedent_len(&self, u: NodeId) -> usize {
        1 + self.tails[u.0 as usize].len()
    }

    /// Whether the cedent headed by `outer` is a final segment of the cedent
    /// headed by `inner` (as node lists).
    pub fn is_final_segment(&self, outer: Option<NodeId>, inner: Option<NodeId>) -> bool {
        match (outer, inner) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(o), Some(i)) => o == i || self.tails[i.0 as usize].contains(&o),
        }
    }

    /// Finds a node whose tail-generated cedent realises exactly `cedent`.
    pub fn resolve(&self, cedent: &[Expr]) -> Option<NodeId> {
        let first = cedent.first()?;
        self.nodes
            .iter()
            .filter(|n| n.label == *first)
            .map(|n| n.id)
            .find(|&u| self.cedent_len(u) == cedent.len() && self.realize_from(u) == cedent)
    }

    /// Distinct realisations of all tail-generated cedents, including ε.
    pub fn tail_generated_realisations(&self) -> HashMap<Vec<Expr>, NodeId> {
        let mut out = HashMap::new();
        for n in &self.nodes {
            out.entry(self.realize_from(n.id)).or_insert(n.id);
        }
        out
    }
}

/// Which tree a cedent is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Origin {
    /// The antecedent tree `T_e`.
    Left,
    /// The succedent tree `T_f`.
    Right,
    /// The one-element cedent `0` introduced by `k0`.
    Zero,
}

/// A tail-generated cedent, identified by its head node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeCedent {
    origin: Origin,
    head: Option<NodeId>,
}

impl NodeCedent {
    pub fn empty(origin: Origin) -> NodeCedent {
        let origin = if origin == Origin::Zero {
            Origin::Right
        } else {
            origin
        };
        NodeCedent { origin, head: None }
    }

    pub fn at(origin: Origin, head: NodeId) -> NodeCedent {
        debug_assert!(origin != Origin::Zero);
        NodeCedent {
            origin,
            head: Some(head),
        }
    }

    pub fn zero() -> NodeCedent {
        NodeCedent {
            origin: Origin::Zero,
            head: None,
        }
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn head(&self) -> Option<NodeId> {
        self.head
    }

    pub fn is_zero(&self) -> bool {
        self.origin == Origin::Zero
    }

    /// True for ε (the zero cedent is not empty).
    pub fn is_empty(&self) -> bool {
        self.head.is_none() && !self.is_zero()
    }

    /// Leftmost expression, if any.
    pub fn head_expr<'t>(&self, tree: &'t SyntaxTree) -> Option<&'t Expr> {
        match (self.origin, self.head) {
            (Origin::Zero, _) => Some(&ZERO_EXPR),
            (_, Some(u)) => Some(tree.label(u)),
            (_, None) => None,
        }
    }

    /// Drops the leftmost expression.
    pub fn pop(&self, tree: &SyntaxTree) -> NodeCedent {
        match (self.origin, self.head) {
            (Origin::Zero, _) => NodeCedent::empty(Origin::Right),
            (o, Some(u)) => NodeCedent {
                origin: o,
                head: tree.next(u),
            },
            (o, None) => NodeCedent {
                origin: o,
                head: None,
            },
        }
    }

    /// Replaces the leftmost expression by the cedent headed by `child`.
    pub fn descend(&self, child: NodeId) -> NodeCedent {
        NodeCedent {
            origin: self.origin,
            head: Some(child),
        }
    }

    pub fn len(&self, tree: &SyntaxTree) -> usize {
        match (self.origin, self.head) {
            (Origin::Zero, _) => 1,
            (_, Some(u)) => tree.cedent_len(u),
            (_, None) => 0,
        }
    }
}

/// Realisation of a node cedent as a list of expressions.
pub fn realize(tree: &SyntaxTree, c: NodeCedent) -> Result<Vec<Expr>, TreeError> {
    match (c.origin, c.head) {
        (Origin::Zero, _) => Ok(vec![ZERO_EXPR.clone()]),
        (_, None) => Ok(Vec::new()),
        (_, Some(u)) => {
            tree.node(u)?;
            Ok(tree.realize_from(u))
        }
    }
}

/// Realisation that also checks the cedent's origin against the tree's side.
pub fn realize_on(tree: &SyntaxTree, side: Origin, c: NodeCedent) -> Result<Vec<Expr>, TreeError> {
    match c.origin {
        Origin::Zero if side == Origin::Right => realize(tree, c),
        o if o == side => realize(tree, c),
        _ => Err(TreeError::OriginMismatch),
    }
}
