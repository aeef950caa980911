//! Concrete syntax for tests, expressions and cedents.
//!
//! Tests: `0 1 ident !b b&c b|c (b)`, precedence `!` > `&` > `|`.
//! Expressions: `0 1 ident e;f e +[b] f e^[b] (e)`, precedence postfix
//! `^[b]` > `;` > `+[b]`, both infix operators left-associative. Sugar:
//! `if b then e else f`, `while b do e`, `skip`, `fail`. The bodies of
//! `then`, `else` and `do` extend as far to the right as possible.

use crate::alphabet::{is_keyword, Alphabet, Symbol};
use crate::error::{ParseError, ParseErrorKind};
use crate::syntax::{Expr, Test};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    LBrack,
    RBrack,
    Semi,
    Plus,
    Caret,
    Bang,
    Amp,
    Bar,
    Zero,
    One,
    Ident(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Zero => "`0`".into(),
            Tok::One => "`1`".into(),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            c if c.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            ';' => Tok::Semi,
            '+' => Tok::Plus,
            '^' => Tok::Caret,
            '!' => Tok::Bang,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            '0' => Tok::Zero,
            '1' => Tok::One,
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i + 1;
                while j < bytes.len()
                    && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_' || bytes[j] == b'\'')
                {
                    j += 1;
                }
                let tok = Tok::Ident(text[i..j].to_string());
                out.push((tok, start));
                i = j;
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or(c);
                return Err(ParseError {
                    pos: i,
                    kind: ParseErrorKind::BadChar(ch),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn new(text: &str, alphabet: &'a Alphabet) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
            alphabet,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError {
            pos: self.pos(),
            kind: ParseErrorKind::Unexpected {
                found: self.peek().describe(),
                expected,
            },
        }
    }

    fn expect(&mut self, t: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn expect_keyword(&mut self, kw: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(self.unexpected(kw)),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    // ---- tests ----

    fn test_or(&mut self) -> Result<Test, ParseError> {
        let mut acc = self.test_and()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.test_and()?;
            acc = acc.or(rhs);
        }
        Ok(acc)
    }

    fn test_and(&mut self) -> Result<Test, ParseError> {
        let mut acc = self.test_unary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.test_unary()?;
            acc = acc.and(rhs);
        }
        Ok(acc)
    }

    fn test_unary(&mut self) -> Result<Test, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Bang => Ok(self.test_unary()?.not()),
            Tok::Zero => Ok(Test::Zero),
            Tok::One => Ok(Test::One),
            Tok::LParen => {
                let t = self.test_or()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::Ident(name) => self.resolve_test(&name, pos),
            other => {
                self.at -= usize::from(other != Tok::Eof);
                Err(self.unexpected("a test"))
            }
        }
    }

    fn resolve_test(&self, name: &str, pos: usize) -> Result<Test, ParseError> {
        match self.alphabet.resolve(name) {
            Some(Symbol::Test(t)) => Ok(Test::Prim(t)),
            Some(Symbol::Prog(_)) => Err(ParseError {
                pos,
                kind: ParseErrorKind::ProgramInTest(name.to_string()),
            }),
            None => match name {
                "skip" => Ok(Test::One),
                "fail" => Ok(Test::Zero),
                _ => Err(ParseError {
                    pos,
                    kind: ParseErrorKind::UnknownIdent(name.to_string()),
                }),
            },
        }
    }

    /// Continues a test that started in expression position: `b & c | d`.
    fn test_rest(&mut self, left: Test) -> Result<Test, ParseError> {
        let mut acc = left;
        while self.eat(&Tok::Amp) {
            let rhs = self.test_unary()?;
            acc = acc.and(rhs);
        }
        while self.eat(&Tok::Bar) {
            let rhs = self.test_and()?;
            acc = acc.or(rhs);
        }
        Ok(acc)
    }

    // ---- expressions ----

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.seq()?;
        while self.eat(&Tok::Plus) {
            self.expect(Tok::LBrack, "`[` after `+`")?;
            let b = self.test_or()?;
            self.expect(Tok::RBrack, "`]`")?;
            let rhs = self.seq()?;
            acc = Expr::choice(b, acc, rhs);
        }
        Ok(acc)
    }

    fn seq(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.postfix()?;
        while self.eat(&Tok::Semi) {
            let rhs = self.postfix()?;
            acc = Expr::seq(acc, rhs);
        }
        Ok(acc)
    }

    fn postfix(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.atom()?;
        while self.eat(&Tok::Caret) {
            self.expect(Tok::LBrack, "`[` after `^`")?;
            let b = self.test_or()?;
            self.expect(Tok::RBrack, "`]`")?;
            acc = Expr::while_loop(b, acc);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        let e = match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                e
            }
            Tok::Zero => {
                self.bump();
                Expr::Test(Test::Zero)
            }
            Tok::One => {
                self.bump();
                Expr::Test(Test::One)
            }
            Tok::Bang => {
                self.bump();
                Expr::Test(self.test_unary()?.not())
            }
            Tok::Ident(name) if is_keyword(&name) => {
                self.bump();
                match name.as_str() {
                    "skip" => Expr::one(),
                    "fail" => Expr::zero(),
                    "if" => {
                        let b = self.test_or()?;
                        self.expect_keyword("then")?;
                        let e = self.expr()?;
                        self.expect_keyword("else")?;
                        let f = self.expr()?;
                        return Ok(Expr::choice(b, e, f));
                    }
                    "while" => {
                        let b = self.test_or()?;
                        self.expect_keyword("do")?;
                        let e = self.expr()?;
                        return Ok(Expr::while_loop(b, e));
                    }
                    _ => {
                        self.at -= 1;
                        return Err(self.unexpected("an expression"));
                    }
                }
            }
            Tok::Ident(name) => {
                self.bump();
                match self.alphabet.resolve(&name) {
                    Some(Symbol::Test(t)) => Expr::Test(Test::Prim(t)),
                    Some(Symbol::Prog(p)) => Expr::Prog(p),
                    None => {
                        return Err(ParseError {
                            pos,
                            kind: ParseErrorKind::UnknownIdent(name),
                        })
                    }
                }
            }
            _ => return Err(self.unexpected("an expression")),
        };
        match e {
            Expr::Test(t) if matches!(self.peek(), Tok::Amp | Tok::Bar) => {
                Ok(Expr::Test(self.test_rest(t)?))
            }
            e => Ok(e),
        }
    }
}

pub fn parse_expr(text: &str, alphabet: &Alphabet) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text, alphabet)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_test(text: &str, alphabet: &Alphabet) -> Result<Test, ParseError> {
    let mut p = Parser::new(text, alphabet)?;
    let t = p.test_or()?;
    p.finish()?;
    Ok(t)
}

/// Parses a comma-separated cedent. Empty text and `ε` denote the empty cedent.
pub fn parse_cedent(text: &str, alphabet: &Alphabet) -> Result<Vec<Expr>, ParseError> {
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed == "ε" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        let e = parse_expr(part, alphabet).map_err(|err| ParseError {
            pos: err.pos + offset,
            kind: err.kind,
        })?;
        out.push(e);
        offset += part.len() + 1;
    }
    Ok(out)
}
