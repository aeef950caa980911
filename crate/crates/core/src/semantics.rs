//! Guarded strings, exact membership, and bounded enumeration of the
//! guarded-string language of an expression.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::alphabet::{Alphabet, ProgId};
use crate::atoms::{Atom, AtomSet};
use crate::error::{ParseErrorKind, SemanticsError};
use crate::syntax::{Expr, Test};

/// `α1 p1 α2 ... pn αn+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GuardedString {
    atoms: Vec<Atom>,
    progs: Vec<ProgId>,
}

impl GuardedString {
    pub fn atom(a: Atom) -> GuardedString {
        GuardedString {
            atoms: vec![a],
            progs: Vec::new(),
        }
    }

    pub fn new(atoms: Vec<Atom>, progs: Vec<ProgId>) -> Option<GuardedString> {
        (atoms.len() == progs.len() + 1).then_some(GuardedString { atoms, progs })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn progs(&self) -> &[ProgId] {
        &self.progs
    }

    pub fn first(&self) -> Atom {
        self.atoms[0]
    }

    pub fn last(&self) -> Atom {
        *self.atoms.last().unwrap()
    }

    /// Number of program letters.
    pub fn len(&self) -> usize {
        self.progs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.progs.is_empty()
    }

    /// `α · p · self`.
    pub fn prepend(&self, a: Atom, p: ProgId) -> GuardedString {
        let mut atoms = Vec::with_capacity(self.atoms.len() + 1);
        atoms.push(a);
        atoms.extend_from_slice(&self.atoms);
        let mut progs = Vec::with_capacity(self.progs.len() + 1);
        progs.push(p);
        progs.extend_from_slice(&self.progs);
        GuardedString { atoms, progs }
    }

    /// Fusion `xα ⋄ αy = xαy`; `None` if the boundary atoms differ.
    pub fn fuse(&self, other: &GuardedString) -> Option<GuardedString> {
        if self.last() != other.first() {
            return None;
        }
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms[1..]);
        let mut progs = self.progs.clone();
        progs.extend_from_slice(&other.progs);
        Some(GuardedString { atoms, progs })
    }

    pub fn with_first(&self, a: Atom) -> GuardedString {
        let mut g = self.clone();
        g.atoms[0] = a;
        g
    }

    pub fn fits(&self, alphabet: &Alphabet) -> bool {
        let n = alphabet.atom_count() as u32;
        self.atoms.iter().all(|a| a.0 < n) && self.progs.iter().all(|p| alphabet.has_prog(*p))
    }

    /// Serialises as `α1 p1 α2 ...`, atoms as bitstrings.
    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        let w = alphabet.test_count();
        let mut out = self.atoms[0].bitstring(w);
        for (p, a) in self.progs.iter().zip(&self.atoms[1..]) {
            out.push(' ');
            out.push_str(alphabet.prog_name(*p));
            out.push(' ');
            out.push_str(&a.bitstring(w));
        }
        out
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<GuardedString, ParseErrorKind> {
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.len().is_multiple_of(2) {
            return Err(ParseErrorKind::BadAtom(text.to_string()));
        }
        let w = alphabet.test_count();
        let mut atoms = Vec::new();
        let mut progs = Vec::new();
        for (i, t) in toks.iter().enumerate() {
            if i % 2 == 0 {
                atoms.push(Atom::parse_bitstring(t, w)?);
            } else {
                progs.push(
                    alphabet
                        .prog_id(t)
                        .ok_or_else(|| ParseErrorKind::UnknownIdent(t.to_string()))?,
                );
            }
        }
        Ok(GuardedString { atoms, progs })
    }

    fn interleaved(&self) -> impl Iterator<Item = u32> + '_ {
        self.atoms.iter().enumerate().flat_map(move |(i, a)| {
            std::iter::once(a.0).chain(self.progs.get(i).map(|p| p.0 as u32))
        })
    }
}

impl Ord for GuardedString {
    /// Shorter strings first, then lexicographic in declared atom/program order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.progs
            .len()
            .cmp(&other.progs.len())
            .then_with(|| self.interleaved().cmp(other.interleaved()))
    }
}

impl PartialOrd for GuardedString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dense boolean relation over atom positions `0..n`.
#[derive(Clone)]
struct Rel {
    n: usize,
    bits: Vec<bool>,
}

impl Rel {
    fn new(n: usize) -> Rel {
        Rel {
            n,
            bits: vec![false; n * n],
        }
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.n + j] = true;
    }

    fn compose(&self, other: &Rel) -> Rel {
        let mut out = Rel::new(self.n);
        for i in 0..self.n {
            for k in i..self.n {
                if self.get(i, k) {
                    for j in k..self.n {
                        if other.get(k, j) {
                            out.set(i, j);
                        }
                    }
                }
            }
        }
        out
    }
}

/// `(i, j)` holds iff the substring of `w` from atom `i` to atom `j` is in `⟦e⟧`.
fn relation(e: &Expr, w: &GuardedString) -> Rel {
    let n = w.atoms.len();
    let holds = |b: &Test, i: usize| w.atoms[i].satisfies(b);
    match e {
        Expr::Test(b) => {
            let mut r = Rel::new(n);
            for i in 0..n {
                if holds(b, i) {
                    r.set(i, i);
                }
            }
            r
        }
        Expr::Prog(p) => {
            let mut r = Rel::new(n);
            for i in 0..n.saturating_sub(1) {
                if w.progs[i] == *p {
                    r.set(i, i + 1);
                }
            }
            r
        }
        Expr::Seq(x, y) => relation(x, w).compose(&relation(y, w)),
        Expr::Choice(b, x, y) => {
            let rx = relation(x, w);
            let ry = relation(y, w);
            let mut r = Rel::new(n);
            for i in 0..n {
                let src = if holds(b, i) { &rx } else { &ry };
                for j in i..n {
                    if src.get(i, j) {
                        r.set(i, j);
                    }
                }
            }
            r
        }
        Expr::While(b, body) => {
            let rb = relation(body, w);
            // Reflexive-transitive closure of Step = {(i,k) : α_i ≤ b, (i,k) ∈ ⟦body⟧}.
            let mut closure = Rel::new(n);
            for i in 0..n {
                closure.set(i, i);
                if holds(b, i) {
                    for k in i..n {
                        if rb.get(i, k) {
                            closure.set(i, k);
                        }
                    }
                }
            }
            for k in 0..n {
                for i in 0..n {
                    if closure.get(i, k) {
                        for j in 0..n {
                            if closure.get(k, j) {
                                closure.set(i, j);
                            }
                        }
                    }
                }
            }
            let mut r = Rel::new(n);
            for i in 0..n {
                for j in i..n {
                    if closure.get(i, j) && !holds(b, j) {
                        r.set(i, j);
                    }
                }
            }
            r
        }
    }
}

/// Exact membership `w ∈ ⟦e⟧`.
pub fn member(w: &GuardedString, e: &Expr, alphabet: &Alphabet) -> Result<bool, SemanticsError> {
    if !w.fits(alphabet) {
        return Err(SemanticsError::AlphabetMismatch(format!("{w:?}")));
    }
    if !e.fits(alphabet) {
        return Err(SemanticsError::AlphabetMismatch("expression".into()));
    }
    Ok(member_unchecked(w, e))
}

pub(crate) fn member_unchecked(w: &GuardedString, e: &Expr) -> bool {
    relation(e, w).get(0, w.atoms.len() - 1)
}

/// `w ∈ ⟦e1 ⋯ en⟧` for a cedent.
pub fn member_cedent(
    w: &GuardedString,
    cedent: &[Expr],
    alphabet: &Alphabet,
) -> Result<bool, SemanticsError> {
    member(w, &Expr::fold(cedent), alphabet)
}

/// Default guard on enumeration sizes.
pub const DEFAULT_LANGUAGE_BUDGET: usize = 2_000_000;

/// All members of a language with at most `bound` program letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedLanguage {
    strings: BTreeSet<GuardedString>,
    bound: usize,
}

impl BoundedLanguage {
    pub fn new(strings: impl IntoIterator<Item = GuardedString>, bound: usize) -> BoundedLanguage {
        BoundedLanguage {
            strings: strings.into_iter().filter(|s| s.len() <= bound).collect(),
            bound,
        }
    }

    pub fn empty(bound: usize) -> BoundedLanguage {
        BoundedLanguage {
            strings: BTreeSet::new(),
            bound,
        }
    }

    /// `⟦B⟧` as a language: the lone atoms of `B`.
    pub fn of_atoms(atoms: &AtomSet, bound: usize) -> BoundedLanguage {
        BoundedLanguage::new(atoms.iter().map(GuardedString::atom), bound)
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn strings(&self) -> &BTreeSet<GuardedString> {
        &self.strings
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn contains(&self, w: &GuardedString) -> bool {
        self.strings.contains(w)
    }

    pub fn truncate(&self, bound: usize) -> BoundedLanguage {
        BoundedLanguage::new(self.strings.iter().cloned(), bound.min(self.bound))
    }

    pub fn union(&self, other: &BoundedLanguage) -> BoundedLanguage {
        let bound = self.bound.min(other.bound);
        BoundedLanguage::new(self.strings.iter().chain(&other.strings).cloned(), bound)
    }

    /// `B ⋄ L`: members whose first atom is in `B`.
    pub fn restrict_first(&self, atoms: &AtomSet) -> BoundedLanguage {
        BoundedLanguage {
            strings: self
                .strings
                .iter()
                .filter(|w| atoms.contains(w.first()))
                .cloned()
                .collect(),
            bound: self.bound,
        }
    }

    /// `L^n` with `L^0 = At` and `L^(n+1) = L^n ⋄ L`.
    pub fn power(&self, n: usize, width: usize) -> BoundedLanguage {
        let mut acc = BoundedLanguage::of_atoms(&AtomSet::full(width), self.bound);
        for _ in 0..n {
            acc = fusion(&acc, self);
        }
        acc
    }
}

/// `L ⋄ K = {xαy : xα ∈ L, αy ∈ K}`, truncated at the smaller bound.
pub fn fusion(l: &BoundedLanguage, k: &BoundedLanguage) -> BoundedLanguage {
    let bound = l.bound.min(k.bound);
    let mut by_first: HashMap<Atom, Vec<&GuardedString>> = HashMap::new();
    for y in &k.strings {
        by_first.entry(y.first()).or_default().push(y);
    }
    let mut out = BTreeSet::new();
    for x in &l.strings {
        if let Some(ys) = by_first.get(&x.last()) {
            for y in ys {
                if x.len() + y.len() <= bound {
                    out.insert(x.fuse(y).unwrap());
                }
            }
        }
    }
    BoundedLanguage {
        strings: out,
        bound,
    }
}

/// `L +_B K = (B ⋄ L) ∪ (B̄ ⋄ K)`.
pub fn guarded_union(b: &AtomSet, l: &BoundedLanguage, k: &BoundedLanguage) -> BoundedLanguage {
    l.restrict_first(b)
        .union(&k.restrict_first(&b.complement()))
}

fn check_budget(l: &BoundedLanguage, budget: usize) -> Result<(), SemanticsError> {
    if l.len() > budget {
        Err(SemanticsError::ResourceLimit(budget))
    } else {
        Ok(())
    }
}

/// `{w ∈ ⟦e⟧ : w has at most k program letters}`.
pub fn enumerate(
    e: &Expr,
    k: usize,
    alphabet: &Alphabet,
) -> Result<BoundedLanguage, SemanticsError> {
    enumerate_with_budget(e, k, alphabet, DEFAULT_LANGUAGE_BUDGET)
}

pub fn enumerate_with_budget(
    e: &Expr,
    k: usize,
    alphabet: &Alphabet,
    budget: usize,
) -> Result<BoundedLanguage, SemanticsError> {
    if !e.fits(alphabet) {
        return Err(SemanticsError::AlphabetMismatch("expression".into()));
    }
    enum_rec(e, k, alphabet.test_count(), budget)
}

fn enum_rec(
    e: &Expr,
    k: usize,
    width: usize,
    budget: usize,
) -> Result<BoundedLanguage, SemanticsError> {
    let out = match e {
        Expr::Test(b) => BoundedLanguage::of_atoms(&AtomSet::of_test(width, b), k),
        Expr::Prog(p) => {
            if k == 0 {
                BoundedLanguage::empty(k)
            } else {
                let n = 1u32 << width;
                let strings = (0..n).flat_map(|a| {
                    (0..n).map(move |b| GuardedString {
                        atoms: vec![Atom(a), Atom(b)],
                        progs: vec![*p],
                    })
                });
                BoundedLanguage::new(strings, k)
            }
        }
        Expr::Seq(x, y) => {
            let lx = enum_rec(x, k, width, budget)?;
            let ly = enum_rec(y, k, width, budget)?;
            fusion(&lx, &ly)
        }
        Expr::Choice(b, x, y) => {
            let lx = enum_rec(x, k, width, budget)?;
            let ly = enum_rec(y, k, width, budget)?;
            guarded_union(&AtomSet::of_test(width, b), &lx, &ly)
        }
        Expr::While(b, body) => {
            let guard = AtomSet::of_test(width, b);
            let exit = BoundedLanguage::of_atoms(&guard.complement(), k);
            let step = enum_rec(body, k, width, budget)?.restrict_first(&guard);
            // Least fixpoint of L = trunc_k(B ⋄ ⟦body⟧ ⋄ L) ∪ B̄.
            let mut acc = exit.clone();
            loop {
                let next = fusion(&step, &acc).union(&exit);
                check_budget(&next, budget)?;
                if next == acc {
                    break acc;
                }
                acc = next;
            }
        }
    };
    check_budget(&out, budget)?;
    Ok(out)
}

impl fmt::Display for BoundedLanguage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} strings, bound {}>", self.strings.len(), self.bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    fn alpha() -> Alphabet {
        Alphabet::new(&["a", "b"], &["p", "q"]).unwrap()
    }

    fn gs(text: &str, al: &Alphabet) -> GuardedString {
        GuardedString::parse(text, al).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let al = alpha();
        let w = gs("10 p 01 q 11", &al);
        assert_eq!(w.len(), 2);
        assert_eq!(w.to_text(&al), "10 p 01 q 11");
        assert!(GuardedString::parse("10 p", &al).is_err());
        assert!(GuardedString::parse("10 r 01", &al).is_err());
    }

    #[test]
    fn member_basics() {
        let al = alpha();
        let one = parse_expr("1", &al).unwrap();
        for a in 0..4 {
            assert!(member(&GuardedString::atom(Atom(a)), &one, &al).unwrap());
        }
        let loop1 = parse_expr("1^[b]", &al).unwrap();
        // b is bit 1.
        for a in 0..4u32 {
            let lone = GuardedString::atom(Atom(a));
            assert_eq!(member(&lone, &loop1, &al).unwrap(), a & 2 == 0);
        }
        assert!(!member(&gs("00 p 00", &al), &loop1, &al).unwrap());
        assert!(member(&gs("00 p 11", &al), &parse_expr("p", &al).unwrap(), &al).unwrap());
        assert!(!member(&gs("00 q 11", &al), &parse_expr("p", &al).unwrap(), &al).unwrap());
    }

    #[test]
    fn member_rejects_foreign_strings() {
        let al = alpha();
        let w = GuardedString::new(vec![Atom(9)], vec![]).unwrap();
        assert!(member(&w, &Expr::one(), &al).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let al = alpha();
        let p = enumerate(&parse_expr("p", &al).unwrap(), 1, &al).unwrap();
        assert_eq!(p.len(), 16);
        assert!(enumerate(&Expr::zero(), 3, &al).unwrap().is_empty());
        for k in 0..4 {
            let l = enumerate(&parse_expr("1^[b]", &al).unwrap(), k, &al).unwrap();
            let expected: BTreeSet<_> = (0..4)
                .filter(|a| a & 2 == 0)
                .map(|a| GuardedString::atom(Atom(a)))
                .collect();
            assert_eq!(l.strings(), &expected);
        }
    }

    #[test]
    fn enumerate_respects_budget() {
        let al = alpha();
        let e = parse_expr("(p +[a] q)^[b]", &al).unwrap();
        assert_eq!(
            enumerate_with_budget(&e, 6, &al, 100),
            Err(SemanticsError::ResourceLimit(100))
        );
    }

    #[test]
    fn fusion_laws() {
        let al = alpha();
        let at = BoundedLanguage::of_atoms(&AtomSet::full(2), 3);
        let l = enumerate(&parse_expr("(p +[a] q)^[b]", &al).unwrap(), 3, &al).unwrap();
        assert_eq!(fusion(&at, &l), l);
        assert_eq!(fusion(&l, &at), l);
        let k = enumerate(&parse_expr("q;p", &al).unwrap(), 3, &al).unwrap();
        assert_eq!(guarded_union(&AtomSet::empty(2), &l, &k), k);
        // Left cancellation by ⟦p⟧ distinguishes L from K.
        let p = enumerate(&parse_expr("p", &al).unwrap(), 3, &al).unwrap();
        assert_ne!(fusion(&p, &l.truncate(2)), fusion(&p, &k.truncate(2)));
    }

    #[test]
    fn shortest_first_ordering() {
        let al = alpha();
        let mut v = [
            gs("00 p 00", &al),
            gs("11", &al),
            gs("00", &al),
            gs("00 p 00 p 00", &al),
        ];
        v.sort();
        let shown: Vec<String> = v.iter().map(|w| w.to_text(&al)).collect();
        assert_eq!(shown, ["00", "11", "00 p 00", "00 p 00 p 00"]);
    }
}
