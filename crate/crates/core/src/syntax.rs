//! Tests, expressions, the pretty printer, and the while-height measures.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::alphabet::{Alphabet, ProgId, TestId};

/// Boolean tests over the primitive tests.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Test {
    Zero,
    One,
    Prim(TestId),
    Not(Box<Test>),
    Or(Box<Test>, Box<Test>),
    And(Box<Test>, Box<Test>),
}

/// GKAT expressions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Test(Test),
    Prog(ProgId),
    Seq(Box<Expr>, Box<Expr>),
    /// `e +[b] f`: run `e` if `b` holds, else `f`.
    Choice(Test, Box<Expr>, Box<Expr>),
    /// `e^[b]`: while `b` do `e`.
    While(Test, Box<Expr>),
}

/// The expression `0`, used for the distinguished zero succedent.
pub static ZERO_EXPR: Expr = Expr::Test(Test::Zero);

impl Test {
    pub fn prim(id: TestId) -> Test {
        Test::Prim(id)
    }

    pub fn not(self) -> Test {
        Test::Not(Box::new(self))
    }

    pub fn or(self, other: Test) -> Test {
        Test::Or(Box::new(self), Box::new(other))
    }

    pub fn and(self, other: Test) -> Test {
        Test::And(Box::new(self), Box::new(other))
    }

    /// Truth of the test under an atom, given as a bitvector over the tests.
    pub fn eval(&self, atom: u32) -> bool {
        match self {
            Test::Zero => false,
            Test::One => true,
            Test::Prim(t) => atom >> t.0 & 1 == 1,
            Test::Not(b) => !b.eval(atom),
            Test::Or(b, c) => b.eval(atom) || c.eval(atom),
            Test::And(b, c) => b.eval(atom) && c.eval(atom),
        }
    }

    pub fn max_test_id(&self) -> Option<TestId> {
        match self {
            Test::Zero | Test::One => None,
            Test::Prim(t) => Some(*t),
            Test::Not(b) => b.max_test_id(),
            Test::Or(b, c) | Test::And(b, c) => b.max_test_id().max(c.max_test_id()),
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> TestDisplay<'a> {
        TestDisplay {
            test: self,
            alphabet,
        }
    }
}

impl Expr {
    pub fn test(t: Test) -> Expr {
        Expr::Test(t)
    }

    pub fn prog(p: ProgId) -> Expr {
        Expr::Prog(p)
    }

    pub fn zero() -> Expr {
        Expr::Test(Test::Zero)
    }

    pub fn one() -> Expr {
        Expr::Test(Test::One)
    }

    pub fn seq(e: Expr, f: Expr) -> Expr {
        Expr::Seq(Box::new(e), Box::new(f))
    }

    pub fn choice(b: Test, e: Expr, f: Expr) -> Expr {
        Expr::Choice(b, Box::new(e), Box::new(f))
    }

    pub fn while_loop(b: Test, e: Expr) -> Expr {
        Expr::While(b, Box::new(e))
    }

    /// Folds a cedent `e1, ..., en` into the right-nested product
    /// `e1;(e2;(...;en))`. The empty cedent folds to `1`.
    pub fn fold(cedent: &[Expr]) -> Expr {
        match cedent.split_last() {
            None => Expr::one(),
            Some((last, init)) => init
                .iter()
                .rev()
                .fold(last.clone(), |acc, e| Expr::seq(e.clone(), acc)),
        }
    }

    /// Number of syntax-tree nodes (subexpression occurrences; guards excluded).
    pub fn size(&self) -> usize {
        match self {
            Expr::Test(_) | Expr::Prog(_) => 1,
            Expr::Seq(e, f) | Expr::Choice(_, e, f) => 1 + e.size() + f.size(),
            Expr::While(_, e) => 1 + e.size(),
        }
    }

    pub fn is_prog(&self) -> bool {
        matches!(self, Expr::Prog(_))
    }

    pub fn contains_while(&self) -> bool {
        match self {
            Expr::Test(_) | Expr::Prog(_) => false,
            Expr::Seq(e, f) | Expr::Choice(_, e, f) => e.contains_while() || f.contains_while(),
            Expr::While(..) => true,
        }
    }

    /// Checks every identifier index against the alphabet.
    pub fn fits(&self, alphabet: &Alphabet) -> bool {
        let test_ok = |b: &Test| match b.max_test_id() {
            Some(t) => (t.0 as usize) < alphabet.test_count(),
            None => true,
        };
        match self {
            Expr::Test(b) => test_ok(b),
            Expr::Prog(p) => alphabet.has_prog(*p),
            Expr::Seq(e, f) => e.fits(alphabet) && f.fits(alphabet),
            Expr::Choice(b, e, f) => test_ok(b) && e.fits(alphabet) && f.fits(alphabet),
            Expr::While(b, e) => test_ok(b) && e.fits(alphabet),
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> ExprDisplay<'a> {
        ExprDisplay {
            expr: self,
            alphabet,
        }
    }
}

/// Maximal nesting depth of while loops.
pub fn while_height(e: &Expr) -> usize {
    match e {
        Expr::Test(_) | Expr::Prog(_) => 0,
        Expr::Seq(e, f) | Expr::Choice(_, e, f) => while_height(e).max(while_height(f)),
        Expr::While(_, e) => while_height(e) + 1,
    }
}

/// The n-th unrolling of `e^[b]`: `!b` for n = 0, and `b;(e;[e^[b]]^(n-1))`
/// otherwise (right-nested).
pub fn approximant(e: &Expr, b: &Test, n: usize) -> Expr {
    let mut acc = Expr::Test(b.clone().not());
    for _ in 0..n {
        acc = Expr::seq(Expr::Test(b.clone()), Expr::seq(e.clone(), acc));
    }
    acc
}

/// Multiset of while-heights of a cedent, ordered by the Dershowitz–Manna
/// ordering for linear orders.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WhileHeightMultiset {
    counts: BTreeMap<usize, usize>,
}

impl WhileHeightMultiset {
    pub fn count(&self, height: usize) -> usize {
        self.counts.get(&height).copied().unwrap_or(0)
    }

    pub fn insert(&mut self, height: usize) {
        *self.counts.entry(height).or_insert(0) += 1;
    }
}

impl FromIterator<usize> for WhileHeightMultiset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut m = WhileHeightMultiset::default();
        for h in iter {
            m.insert(h);
        }
        m
    }
}

impl PartialOrd for WhileHeightMultiset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WhileHeightMultiset {
    /// `N < M` iff `N != M` and at the greatest height where they differ,
    /// `N` has fewer occurrences.
    fn cmp(&self, other: &Self) -> Ordering {
        let top = self.counts.keys().chain(other.counts.keys()).copied().max();
        let Some(top) = top else {
            return Ordering::Equal;
        };
        for n in (0..=top).rev() {
            match self.count(n).cmp(&other.count(n)) {
                Ordering::Equal => continue,
                unequal => return unequal,
            }
        }
        Ordering::Equal
    }
}

/// Weighted while-height of a cedent.
pub fn wwh(cedent: &[Expr]) -> WhileHeightMultiset {
    cedent.iter().map(while_height).collect()
}

// Precedence levels shared by the printer and parser.
const LVL_CHOICE: u8 = 0;
const LVL_SEQ: u8 = 1;
const LVL_POSTFIX: u8 = 2;
const LVL_ATOM: u8 = 3;

const TLVL_OR: u8 = 0;
const TLVL_AND: u8 = 1;
const TLVL_UNARY: u8 = 2;

pub struct TestDisplay<'a> {
    test: &'a Test,
    alphabet: &'a Alphabet,
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    alphabet: &'a Alphabet,
}

fn write_test(f: &mut fmt::Formatter<'_>, t: &Test, a: &Alphabet, lvl: u8) -> fmt::Result {
    let own = match t {
        Test::Or(..) => TLVL_OR,
        Test::And(..) => TLVL_AND,
        _ => TLVL_UNARY,
    };
    if own < lvl {
        f.write_str("(")?;
    }
    match t {
        Test::Zero => f.write_str("0")?,
        Test::One => f.write_str("1")?,
        Test::Prim(id) => f.write_str(a.test_name(*id))?,
        Test::Not(b) => {
            f.write_str("!")?;
            write_test(f, b, a, TLVL_UNARY)?;
        }
        Test::Or(b, c) => {
            write_test(f, b, a, TLVL_OR)?;
            f.write_str("|")?;
            write_test(f, c, a, TLVL_AND)?;
        }
        Test::And(b, c) => {
            write_test(f, b, a, TLVL_AND)?;
            f.write_str("&")?;
            write_test(f, c, a, TLVL_UNARY)?;
        }
    }
    if own < lvl {
        f.write_str(")")?;
    }
    Ok(())
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, a: &Alphabet, lvl: u8) -> fmt::Result {
    let own = match e {
        Expr::Choice(..) => LVL_CHOICE,
        Expr::Seq(..) => LVL_SEQ,
        Expr::While(..) => LVL_POSTFIX,
        // Binary tests are always parenthesised in expression position.
        Expr::Test(Test::Or(..) | Test::And(..)) => LVL_CHOICE,
        Expr::Test(_) | Expr::Prog(_) => LVL_ATOM,
    };
    let parens = own < lvl || matches!(e, Expr::Test(Test::Or(..) | Test::And(..)));
    if parens {
        f.write_str("(")?;
    }
    match e {
        Expr::Test(t) => write_test(f, t, a, TLVL_OR)?,
        Expr::Prog(p) => f.write_str(a.prog_name(*p))?,
        Expr::Seq(x, y) => {
            write_expr(f, x, a, LVL_SEQ)?;
            f.write_str(";")?;
            write_expr(f, y, a, LVL_POSTFIX)?;
        }
        Expr::Choice(b, x, y) => {
            write_expr(f, x, a, LVL_CHOICE)?;
            f.write_str(" +[")?;
            write_test(f, b, a, TLVL_OR)?;
            f.write_str("] ")?;
            write_expr(f, y, a, LVL_SEQ)?;
        }
        Expr::While(b, x) => {
            write_expr(f, x, a, LVL_POSTFIX)?;
            f.write_str("^[")?;
            write_test(f, b, a, TLVL_OR)?;
            f.write_str("]")?;
        }
    }
    if parens {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for TestDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_test(f, self.test, self.alphabet, TLVL_OR)
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self.expr, self.alphabet, LVL_CHOICE)
    }
}

/// Renders a cedent as comma-separated expressions (`ε` when empty).
pub fn cedent_text(cedent: &[Expr], alphabet: &Alphabet) -> String {
    if cedent.is_empty() {
        return "ε".to_string();
    }
    cedent
        .iter()
        .map(|e| e.display(alphabet).to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(&["b", "c"], &["p", "q"]).unwrap()
    }

    fn b() -> Test {
        Test::Prim(TestId(0))
    }

    fn p() -> Expr {
        Expr::Prog(ProgId(0))
    }

    #[test]
    fn while_height_examples() {
        assert_eq!(while_height(&p()), 0);
        let c = Test::Prim(TestId(1));
        let nested = Expr::while_loop(c.clone(), Expr::while_loop(b(), p()));
        assert_eq!(while_height(&nested), 2);
        let cp = Expr::while_loop(b(), Expr::seq(Expr::Test(c), p()));
        assert_eq!(while_height(&cp), 1);
    }

    #[test]
    fn approximant_unfolds() {
        let a = ab();
        assert_eq!(approximant(&p(), &b(), 0), Expr::Test(b().not()));
        let one = approximant(&p(), &b(), 1);
        assert_eq!(
            one,
            Expr::seq(Expr::Test(b()), Expr::seq(p(), Expr::Test(b().not())))
        );
        assert_eq!(one.display(&a).to_string(), "b;(p;!b)");
    }

    #[test]
    fn dershowitz_manna_examples() {
        let q = Expr::Prog(ProgId(1));
        let lp = Expr::while_loop(b(), p());
        assert_eq!(
            wwh(&[p()]).cmp(&wwh(std::slice::from_ref(&lp))),
            Ordering::Less
        );
        assert_eq!(wwh(&[]).cmp(&wwh(&[])), Ordering::Equal);
        let lhs = wwh(&[approximant(&p(), &b(), 2), q.clone()]);
        let rhs = wwh(&[lp, q]);
        assert_eq!(lhs.cmp(&rhs), Ordering::Less);
        // {0,0,0} < {1}: one element at the top height outweighs any number below.
        let many_low: WhileHeightMultiset = [0, 0, 0].into_iter().collect();
        let one_high: WhileHeightMultiset = [1].into_iter().collect();
        assert!(many_low < one_high);
    }

    #[test]
    fn fold_is_right_nested() {
        let q = Expr::Prog(ProgId(1));
        assert_eq!(Expr::fold(&[]), Expr::one());
        assert_eq!(Expr::fold(&[p()]), p());
        assert_eq!(
            Expr::fold(&[p(), q.clone(), p()]),
            Expr::seq(p(), Expr::seq(q, p()))
        );
    }

    #[test]
    fn eval_truth_table() {
        let c = Test::Prim(TestId(1));
        let t = b().and(c.not());
        // bit 0 = b, bit 1 = c
        assert!(t.eval(0b01));
        assert!(!t.eval(0b11));
        assert!(!t.eval(0b00));
        assert!(Test::One.eval(0));
        assert!(!Test::Zero.eval(3));
    }
}
