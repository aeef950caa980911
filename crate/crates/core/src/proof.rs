//! Cyclic proofs: finite trees whose open leaves point back to an ancestor
//! with the same sequent. Includes the certificate checker, statistics, and
//! JSON, DOT and ASCII exporters.

use std::collections::{HashMap, HashSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alphabet::Alphabet;
use crate::atoms::{Atom, AtomSet};
use crate::error::{AlphabetError, ParseError};
use crate::parse::{parse_cedent, parse_expr, parse_test};
use crate::rules::{applicable_lists, ListSequent, RuleName};
use crate::syntax::{cedent_text, Expr, ZERO_EXPR};
use crate::tree::SyntaxTree;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofNode {
    pub id: usize,
    pub sequent: ListSequent,
    pub rule: Option<RuleName>,
    pub children: Vec<usize>,
    /// Target of a back-edge leaf.
    pub backedge: Option<usize>,
    /// Target of a leaf that reuses a closed subproof elsewhere in the tree.
    pub reference: Option<usize>,
}

/// A proof of `left ⇒ right` (possibly under a restricted root atom set).
/// Node ids are indices into `nodes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub alphabet: Alphabet,
    pub left: Expr,
    pub right: Expr,
    pub nodes: Vec<ProofNode>,
    pub root: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ErrorCode {
    RuleMismatch,
    SideCondition,
    NotLeftmost,
    BadBackedge,
    UnfairCycle,
    OpenLeaf,
    /// Not a tree, dangling ids, or a node with several roles.
    Malformed,
}

impl ErrorCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::RuleMismatch => "RULE_MISMATCH",
            ErrorCode::SideCondition => "SIDE_CONDITION",
            ErrorCode::NotLeftmost => "NOT_LEFTMOST",
            ErrorCode::BadBackedge => "BAD_BACKEDGE",
            ErrorCode::UnfairCycle => "UNFAIR_CYCLE",
            ErrorCode::OpenLeaf => "OPEN_LEAF",
            ErrorCode::Malformed => "MALFORMED",
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("node {node}: {code}: {message}")]
pub struct CheckError {
    pub node: usize,
    pub code: ErrorCode,
    pub message: String,
}

impl Proof {
    pub fn new(alphabet: &Alphabet, left: Expr, right: Expr) -> Proof {
        Proof {
            alphabet: alphabet.clone(),
            left,
            right,
            nodes: Vec::new(),
            root: 0,
        }
    }

    /// Appends a node with no role yet and returns its id.
    pub fn push(&mut self, sequent: ListSequent) -> usize {
        let id = self.nodes.len();
        self.nodes.push(ProofNode {
            id,
            sequent,
            rule: None,
            children: Vec::new(),
            backedge: None,
            reference: None,
        });
        id
    }

    pub fn node(&self, id: usize) -> &ProofNode {
        &self.nodes[id]
    }

    pub fn root_sequent(&self) -> &ListSequent {
        &self.nodes[self.root].sequent
    }

    fn parents(&self) -> Vec<Option<usize>> {
        let mut parents = vec![None; self.nodes.len()];
        for n in &self.nodes {
            for &c in &n.children {
                if c < parents.len() {
                    parents[c] = Some(n.id);
                }
            }
        }
        parents
    }

    /// Nodes of the subtree at `id`, in pre-order.
    pub fn subtree(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.nodes[u].children.iter().rev());
        }
        out
    }

    pub fn backedge_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.backedge.is_some()).count()
    }

    /// Replaces every reference leaf by a copy of the referenced subtree.
    pub fn expand_refs(&self) -> Proof {
        let mut out = Proof::new(&self.alphabet, self.left.clone(), self.right.clone());
        fn copy(src: &Proof, u: usize, out: &mut Proof, map: &mut HashMap<usize, usize>) -> usize {
            let n = &src.nodes[u];
            if let Some(t) = n.reference {
                return copy(src, t, out, &mut HashMap::new());
            }
            let id = out.push(n.sequent.clone());
            map.insert(u, id);
            out.nodes[id].rule = n.rule;
            out.nodes[id].backedge = n.backedge.map(|t| map[&t]);
            let kids: Vec<usize> = n.children.iter().map(|&c| copy(src, c, out, map)).collect();
            out.nodes[id].children = kids;
            id
        }
        out.root = copy(self, self.root, &mut out, &mut HashMap::new());
        out
    }
}

/// Checks a certificate. Returns every violation found.
pub fn check(p: &Proof) -> Result<(), Vec<CheckError>> {
    let mut errs = Vec::new();
    let err = |errs: &mut Vec<CheckError>, node: usize, code: ErrorCode, message: String| {
        errs.push(CheckError {
            node,
            code,
            message,
        });
    };
    let n = p.nodes.len();
    if n == 0 || p.root >= n {
        err(
            &mut errs,
            p.root,
            ErrorCode::Malformed,
            "missing root".into(),
        );
        return Err(errs);
    }

    // Shape: ids, a single tree rooted at `root`.
    let mut parent_count = vec![0usize; n];
    for (i, node) in p.nodes.iter().enumerate() {
        if node.id != i {
            err(
                &mut errs,
                i,
                ErrorCode::Malformed,
                format!("stored id {} at index {i}", node.id),
            );
        }
        if node.sequent.atoms.width() != p.alphabet.test_count() {
            err(
                &mut errs,
                i,
                ErrorCode::Malformed,
                "atom set width differs from the alphabet".into(),
            );
        }
        for &c in &node.children {
            if c >= n {
                err(
                    &mut errs,
                    i,
                    ErrorCode::Malformed,
                    format!("child {c} does not exist"),
                );
            } else {
                parent_count[c] += 1;
            }
        }
    }
    for (i, &count) in parent_count.iter().enumerate() {
        if count > 1 || (i == p.root && count > 0) {
            err(
                &mut errs,
                i,
                ErrorCode::Malformed,
                "node has several parents".into(),
            );
        }
    }
    if !errs.is_empty() {
        return Err(errs);
    }
    let reachable: HashSet<usize> = p.subtree(p.root).into_iter().collect();
    for i in 0..n {
        if !reachable.contains(&i) {
            err(
                &mut errs,
                i,
                ErrorCode::Malformed,
                "node is unreachable from the root".into(),
            );
        }
    }
    if !errs.is_empty() {
        return Err(errs);
    }

    let parents = p.parents();
    let is_strict_ancestor = |anc: usize, mut u: usize| {
        while let Some(q) = parents[u] {
            if q == anc {
                return true;
            }
            u = q;
        }
        false
    };

    for node in &p.nodes {
        let i = node.id;
        let roles = [
            node.rule.is_some(),
            node.backedge.is_some(),
            node.reference.is_some(),
        ]
        .iter()
        .filter(|b| **b)
        .count();
        if roles > 1 {
            err(
                &mut errs,
                i,
                ErrorCode::Malformed,
                "node has more than one role".into(),
            );
            continue;
        }
        if let Some(rule) = node.rule {
            check_rule(p, node, rule, &mut errs);
        } else if let Some(t) = node.backedge {
            if !node.children.is_empty() {
                err(
                    &mut errs,
                    i,
                    ErrorCode::Malformed,
                    "back-edge leaf has children".into(),
                );
            }
            if t >= n || !is_strict_ancestor(t, i) {
                err(
                    &mut errs,
                    i,
                    ErrorCode::BadBackedge,
                    format!("target {t} is not a strict ancestor"),
                );
                continue;
            }
            if p.nodes[t].sequent != node.sequent {
                err(
                    &mut errs,
                    i,
                    ErrorCode::BadBackedge,
                    format!("target {t} has a different sequent"),
                );
            }
            let mut u = parents[i];
            let mut fair = false;
            while let Some(q) = u {
                if p.nodes[q].rule == Some(RuleName::WhileL) {
                    fair = true;
                    break;
                }
                if q == t {
                    break;
                }
                u = parents[q];
            }
            if !fair {
                err(
                    &mut errs,
                    i,
                    ErrorCode::UnfairCycle,
                    format!("no (b)-l between node {t} and this back-edge"),
                );
            }
        } else if let Some(t) = node.reference {
            if !node.children.is_empty() {
                err(
                    &mut errs,
                    i,
                    ErrorCode::Malformed,
                    "reference leaf has children".into(),
                );
            }
            if t >= n || t == i || is_strict_ancestor(t, i) {
                err(
                    &mut errs,
                    i,
                    ErrorCode::BadBackedge,
                    format!("reference target {t} is not a closed subproof elsewhere"),
                );
                continue;
            }
            if p.nodes[t].sequent != node.sequent {
                err(
                    &mut errs,
                    i,
                    ErrorCode::BadBackedge,
                    format!("reference target {t} has a different sequent"),
                );
            }
            let inside: HashSet<usize> = p.subtree(t).into_iter().collect();
            for &u in &inside {
                if let Some(b) = p.nodes[u].backedge {
                    if !inside.contains(&b) {
                        err(
                            &mut errs,
                            i,
                            ErrorCode::BadBackedge,
                            format!("referenced subproof {t} is not closed"),
                        );
                        break;
                    }
                }
            }
        } else {
            err(
                &mut errs,
                i,
                ErrorCode::OpenLeaf,
                "leaf is neither an axiom nor a back-edge".into(),
            );
        }
    }

    // Reference leaves expand to subtrees; the expansion must terminate.
    let refs: Vec<usize> = p
        .nodes
        .iter()
        .filter(|x| x.reference.is_some_and(|t| t < n))
        .map(|x| x.id)
        .collect();
    let mut succ: HashMap<usize, Vec<usize>> = HashMap::new();
    for &r in &refs {
        let t = p.nodes[r].reference.unwrap();
        let inner: Vec<usize> = p
            .subtree(t)
            .into_iter()
            .filter(|u| p.nodes[*u].reference.is_some())
            .collect();
        succ.insert(r, inner);
    }
    let mut state: HashMap<usize, u8> = HashMap::new();
    fn dfs(u: usize, succ: &HashMap<usize, Vec<usize>>, state: &mut HashMap<usize, u8>) -> bool {
        match state.get(&u) {
            Some(1) => return false,
            Some(_) => return true,
            None => {}
        }
        state.insert(u, 1);
        for &v in succ.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
            if !dfs(v, succ, state) {
                return false;
            }
        }
        state.insert(u, 2);
        true
    }
    for &r in &refs {
        if !dfs(r, &succ, &mut state) {
            err(
                &mut errs,
                r,
                ErrorCode::BadBackedge,
                "references expand forever".into(),
            );
            break;
        }
    }

    if errs.is_empty() {
        Ok(())
    } else {
        errs.sort_by_key(|e| (e.node, e.code));
        Err(errs)
    }
}

fn check_rule(p: &Proof, node: &ProofNode, rule: RuleName, errs: &mut Vec<CheckError>) {
    let s = &node.sequent;
    let Some(inst) = applicable_lists(s).into_iter().find(|r| r.name == rule) else {
        let code = diagnose(s, rule);
        errs.push(CheckError {
            node: node.id,
            code,
            message: format!("{rule} does not apply to {}", s.text(&p.alphabet)),
        });
        return;
    };
    if inst.premises.len() != node.children.len() {
        errs.push(CheckError {
            node: node.id,
            code: ErrorCode::RuleMismatch,
            message: format!(
                "{rule} has {} premises, node has {} children",
                inst.premises.len(),
                node.children.len()
            ),
        });
        return;
    }
    for (k, (prem, &c)) in inst.premises.iter().zip(&node.children).enumerate() {
        if p.nodes[c].sequent != *prem {
            errs.push(CheckError {
                node: node.id,
                code: ErrorCode::RuleMismatch,
                message: format!(
                    "premise {k} should be {}, child {c} is {}",
                    prem.text(&p.alphabet),
                    p.nodes[c].sequent.text(&p.alphabet)
                ),
            });
        }
    }
}

/// Classifies why a rule does not apply.
fn diagnose(s: &ListSequent, rule: RuleName) -> ErrorCode {
    let shape = |e: &Expr| -> Option<RuleName> {
        match e {
            Expr::Test(_) => Some(RuleName::BL),
            Expr::Choice(..) => Some(RuleName::PlusBL),
            Expr::Seq(..) => Some(RuleName::DotL),
            Expr::While(..) => Some(RuleName::WhileL),
            Expr::Prog(_) => None,
        }
    };
    let right_of = |r: RuleName| match r {
        RuleName::BL => RuleName::BR,
        RuleName::PlusBL => RuleName::PlusBR,
        RuleName::DotL => RuleName::DotR,
        _ => RuleName::WhileR,
    };
    if rule == RuleName::BR {
        if let Some(Expr::Test(b)) = s.delta.first() {
            if s.atoms.restrict(b) != s.atoms {
                return ErrorCode::SideCondition;
            }
        }
    }
    let deeper = |cedent: &[Expr], want: &dyn Fn(&Expr) -> bool| cedent.iter().skip(1).any(want);
    let hit = if rule.is_left() {
        deeper(&s.gamma, &|e| shape(e) == Some(rule))
    } else if rule.is_right() {
        deeper(&s.delta, &|e| shape(e).map(right_of) == Some(rule))
    } else if matches!(rule, RuleName::K | RuleName::K0) {
        deeper(&s.gamma, &Expr::is_prog)
    } else {
        false
    };
    if hit {
        ErrorCode::NotLeftmost
    } else {
        ErrorCode::RuleMismatch
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProofStats {
    pub distinct_sequents: usize,
    pub distinct_antecedents: usize,
    pub distinct_succedents: usize,
    pub node_count: usize,
    pub backedge_count: usize,
    pub max_depth: usize,
}

pub fn stats(p: &Proof) -> ProofStats {
    let seqs: HashSet<&ListSequent> = p.nodes.iter().map(|n| &n.sequent).collect();
    let ants: HashSet<&Vec<Expr>> = p.nodes.iter().map(|n| &n.sequent.gamma).collect();
    let sucs: HashSet<&Vec<Expr>> = p.nodes.iter().map(|n| &n.sequent.delta).collect();
    let mut max_depth = 0;
    let mut stack = vec![(p.root, 0usize)];
    while let Some((u, d)) = stack.pop() {
        max_depth = max_depth.max(d);
        for &c in &p.nodes[u].children {
            stack.push((c, d + 1));
        }
    }
    ProofStats {
        distinct_sequents: seqs.len(),
        distinct_antecedents: ants.len(),
        distinct_succedents: sucs.len(),
        node_count: p.nodes.len(),
        backedge_count: p.backedge_count(),
        max_depth,
    }
}

/// Whether every antecedent realises a tail-generated cedent of the tree of
/// `left`, and every succedent one of `right` or the zero cedent.
pub fn cedents_tail_generated(p: &Proof) -> bool {
    let lt = SyntaxTree::build(&p.left);
    let rt = SyntaxTree::build(&p.right);
    let zero = [ZERO_EXPR.clone()];
    p.nodes.iter().all(|n| {
        let g = &n.sequent.gamma;
        let d = &n.sequent.delta;
        (g.is_empty() || lt.resolve(g).is_some())
            && (d.is_empty() || d.as_slice() == zero || rt.resolve(d).is_some())
    })
}

#[derive(Debug, Error)]
pub enum ProofFormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("{field}: {source}")]
    Parse { field: String, source: ParseError },
    #[error("node {node}: bad atom set: {message}")]
    Atoms { node: usize, message: String },
    #[error("node {node}: {message}")]
    Rule { node: usize, message: String },
    #[error("unknown node id {0}")]
    BadId(usize),
    #[error("duplicate node id {0}")]
    DuplicateId(usize),
}

#[derive(Debug, Serialize, Deserialize)]
struct AlphabetJson {
    tests: Vec<String>,
    progs: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeJson {
    id: usize,
    gamma: String,
    atoms: AtomsJson,
    delta: String,
    rule: Option<String>,
    #[serde(default)]
    children: Vec<usize>,
    #[serde(default)]
    backedge: Option<usize>,
    #[serde(default, rename = "ref")]
    reference: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum AtomsJson {
    Bitstrings(Vec<String>),
    Test(String),
}

#[derive(Debug, Serialize, Deserialize)]
struct ProofJson {
    alphabet: AlphabetJson,
    left: String,
    right: String,
    nodes: Vec<NodeJson>,
    root: usize,
}

pub fn export_json(p: &Proof) -> String {
    let al = &p.alphabet;
    let doc = ProofJson {
        alphabet: AlphabetJson {
            tests: al.tests().to_vec(),
            progs: al.progs().to_vec(),
        },
        left: p.left.display(al).to_string(),
        right: p.right.display(al).to_string(),
        nodes: p
            .nodes
            .iter()
            .map(|n| NodeJson {
                id: n.id,
                gamma: cedent_text(&n.sequent.gamma, al),
                atoms: AtomsJson::Bitstrings(n.sequent.atoms.to_bitstrings()),
                delta: cedent_text(&n.sequent.delta, al),
                rule: n.rule.map(|r| r.as_str().to_string()),
                children: n.children.clone(),
                backedge: n.backedge,
                reference: n.reference,
            })
            .collect(),
        root: p.root,
    };
    serde_json::to_string_pretty(&doc).expect("proof serialises")
}

/// Reads a certificate. Ids may be arbitrary; they are renumbered densely in
/// file order.
pub fn import_json(text: &str) -> Result<Proof, ProofFormatError> {
    let doc: ProofJson = serde_json::from_str(text)?;
    let al = Alphabet::new(&doc.alphabet.tests, &doc.alphabet.progs)?;
    let parse_field = |field: String, s: &str| {
        parse_expr(s, &al).map_err(|source| ProofFormatError::Parse { field, source })
    };
    let left = parse_field("left".into(), &doc.left)?;
    let right = parse_field("right".into(), &doc.right)?;
    let mut index = HashMap::new();
    for (i, n) in doc.nodes.iter().enumerate() {
        if index.insert(n.id, i).is_some() {
            return Err(ProofFormatError::DuplicateId(n.id));
        }
    }
    let map = |id: usize| index.get(&id).copied().ok_or(ProofFormatError::BadId(id));
    let width = al.test_count();
    let mut proof = Proof::new(&al, left, right);
    for (i, n) in doc.nodes.iter().enumerate() {
        let cedent = |field: &str, s: &str| {
            parse_cedent(s, &al).map_err(|source| ProofFormatError::Parse {
                field: format!("node {}: {field}", n.id),
                source,
            })
        };
        let atoms = match &n.atoms {
            AtomsJson::Bitstrings(v) => {
                let mut set = AtomSet::empty(width);
                for s in v {
                    let a: Atom =
                        Atom::parse_bitstring(s, width).map_err(|e| ProofFormatError::Atoms {
                            node: n.id,
                            message: e.to_string(),
                        })?;
                    set.insert(a);
                }
                set
            }
            AtomsJson::Test(s) if s.trim() == "*" => AtomSet::full(width),
            AtomsJson::Test(s) => {
                let b = parse_test(s, &al).map_err(|source| ProofFormatError::Parse {
                    field: format!("node {}: atoms", n.id),
                    source,
                })?;
                AtomSet::of_test(width, &b)
            }
        };
        let sequent = ListSequent {
            gamma: cedent("gamma", &n.gamma)?,
            atoms,
            delta: cedent("delta", &n.delta)?,
        };
        let id = proof.push(sequent);
        debug_assert_eq!(id, i);
        proof.nodes[i].rule = match &n.rule {
            None => None,
            Some(r) => Some(r.parse().map_err(|message| ProofFormatError::Rule {
                node: n.id,
                message,
            })?),
        };
        proof.nodes[i].children = n
            .children
            .iter()
            .map(|&c| map(c))
            .collect::<Result<_, _>>()?;
        proof.nodes[i].backedge = n.backedge.map(map).transpose()?;
        proof.nodes[i].reference = n.reference.map(map).transpose()?;
    }
    proof.root = map(doc.root)?;
    Ok(proof)
}

pub fn export_dot(p: &Proof) -> String {
    let al = &p.alphabet;
    let mut out = String::from("digraph proof {\n  node [shape=box, fontname=\"monospace\"];\n");
    for n in &p.nodes {
        let tag = match (n.rule, n.backedge, n.reference) {
            (Some(r), ..) => r.as_str().to_string(),
            (_, Some(t), _) => format!("(•) #{t}"),
            (_, _, Some(t)) => format!("ref #{t}"),
            _ => "open".to_string(),
        };
        let label = format!("#{} {}\\n{}", n.id, tag, escape(&n.sequent.text(al)));
        let style = if n.rule == Some(RuleName::WhileL) {
            ", style=filled, fillcolor=\"#ffe08a\""
        } else {
            ""
        };
        let _ = writeln!(out, "  n{} [label=\"{}\"{}];", n.id, label, style);
    }
    for n in &p.nodes {
        for &c in &n.children {
            let _ = writeln!(out, "  n{} -> n{};", n.id, c);
        }
        if let Some(t) = n.backedge {
            let _ = writeln!(
                out,
                "  n{} -> n{} [style=dashed, constraint=false];",
                n.id, t
            );
        }
        if let Some(t) = n.reference {
            let _ = writeln!(
                out,
                "  n{} -> n{} [style=dotted, constraint=false];",
                n.id, t
            );
        }
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Indented rendering, one node per line, root first.
pub fn render_ascii(p: &Proof) -> String {
    let al = &p.alphabet;
    let mut out = String::new();
    let mut stack = vec![(p.root, 0usize)];
    while let Some((u, depth)) = stack.pop() {
        let n = &p.nodes[u];
        let tag = match (n.rule, n.backedge, n.reference) {
            (Some(r), ..) => format!("[{r}]"),
            (_, Some(t), _) => format!("(•) -> #{t}"),
            (_, _, Some(t)) => format!("(ref) -> #{t}"),
            _ => "[open]".to_string(),
        };
        let _ = writeln!(
            out,
            "{}#{} {}   {}",
            "  ".repeat(depth),
            n.id,
            n.sequent.text(al),
            tag
        );
        for &c in n.children.iter().rev() {
            stack.push((c, depth + 1));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::all_atoms;

    fn axiom() -> Proof {
        let al = Alphabet::new(&["b"], &["p"]).unwrap();
        let mut p = Proof::new(&al, Expr::one(), Expr::one());
        let id = p.push(ListSequent {
            gamma: vec![],
            atoms: all_atoms(&al),
            delta: vec![],
        });
        p.nodes[id].rule = Some(RuleName::Id);
        p
    }

    #[test]
    fn single_axiom() {
        let p = axiom();
        assert_eq!(check(&p), Ok(()));
        assert_eq!(
            stats(&p),
            ProofStats {
                distinct_sequents: 1,
                distinct_antecedents: 1,
                distinct_succedents: 1,
                node_count: 1,
                backedge_count: 0,
                max_depth: 0
            }
        );
        let text = render_ascii(&p);
        assert_eq!(text.lines().count(), 1);
        assert!(text.contains("[id]"));
        assert_eq!(import_json(&export_json(&p)).unwrap(), p);
    }

    #[test]
    fn open_leaf_and_wrong_axiom() {
        let mut p = axiom();
        p.nodes[0].rule = None;
        assert_eq!(check(&p).unwrap_err()[0].code, ErrorCode::OpenLeaf);
        p.nodes[0].rule = Some(RuleName::Bot);
        assert_eq!(check(&p).unwrap_err()[0].code, ErrorCode::RuleMismatch);
    }

    #[test]
    fn atoms_accept_test_text() {
        let p = axiom();
        let json =
            export_json(&p).replace("[\n        \"0\",\n        \"1\"\n      ]", "\"b | !b\"");
        assert!(json.contains("b | !b"));
        assert_eq!(import_json(&json).unwrap(), p);
    }
}
