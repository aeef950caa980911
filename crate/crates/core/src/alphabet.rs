//! Declared primitive tests and primitive programs.
//!
//! Identifiers in expressions are resolved against an [`Alphabet`]: a name is
//! a test if it is declared under `tests`, a program if declared under
//! `progs`. The two sorts must be disjoint.

use std::fmt;

use crate::error::AlphabetError;

/// Default upper bound on the number of primitive tests. Atom sets are
/// bitsets of `2^|tests|` bits, so this keeps them at 8 KiB or less.
pub const DEFAULT_TEST_CAP: usize = 16;

/// Hard ceiling for an explicitly raised cap.
pub const MAX_TEST_CAP: usize = 20;

const KEYWORDS: &[&str] = &["if", "then", "else", "while", "do", "skip", "fail"];

/// Index of a primitive test in the alphabet's test list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TestId(pub u8);

/// Index of a primitive program in the alphabet's program list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProgId(pub u16);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    tests: Vec<String>,
    progs: Vec<String>,
}

/// What an identifier resolves to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    Test(TestId),
    Prog(ProgId),
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(tests: &[S], progs: &[S]) -> Result<Self, AlphabetError> {
        Self::with_cap(tests, progs, DEFAULT_TEST_CAP)
    }

    pub fn with_cap<S: AsRef<str>>(
        tests: &[S],
        progs: &[S],
        cap: usize,
    ) -> Result<Self, AlphabetError> {
        let tests: Vec<String> = tests.iter().map(|s| s.as_ref().to_string()).collect();
        let progs: Vec<String> = progs.iter().map(|s| s.as_ref().to_string()).collect();
        if tests.is_empty() {
            return Err(AlphabetError::NoTests);
        }
        if progs.is_empty() {
            return Err(AlphabetError::NoPrograms);
        }
        let cap = cap.min(MAX_TEST_CAP);
        if tests.len() > cap {
            return Err(AlphabetError::TooManyTests {
                count: tests.len(),
                cap,
            });
        }
        if progs.len() > u16::MAX as usize {
            return Err(AlphabetError::TooManyPrograms(progs.len()));
        }
        for name in tests.iter().chain(progs.iter()) {
            if !is_identifier(name) {
                return Err(AlphabetError::BadName(name.clone()));
            }
        }
        for (i, name) in tests.iter().enumerate() {
            if tests[..i].contains(name) {
                return Err(AlphabetError::Duplicate(name.clone()));
            }
            if progs.contains(name) {
                return Err(AlphabetError::BothSorts(name.clone()));
            }
        }
        for (i, name) in progs.iter().enumerate() {
            if progs[..i].contains(name) {
                return Err(AlphabetError::Duplicate(name.clone()));
            }
        }
        Ok(Alphabet { tests, progs })
    }

    /// Parses a declaration such as `tests a,b,c; progs p,q;`.
    pub fn parse_decl(text: &str) -> Result<Self, AlphabetError> {
        let mut tests: Option<Vec<String>> = None;
        let mut progs: Option<Vec<String>> = None;
        for clause in text.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            let (kw, rest) = clause
                .split_once(char::is_whitespace)
                .unwrap_or((clause, ""));
            let names: Vec<String> = rest
                .split(',')
                .map(str::trim)
                .filter(|n| !n.is_empty())
                .map(str::to_string)
                .collect();
            let slot = match kw {
                "tests" => &mut tests,
                "progs" => &mut progs,
                other => return Err(AlphabetError::BadDeclaration(other.to_string())),
            };
            if slot.is_some() {
                return Err(AlphabetError::BadDeclaration(format!(
                    "repeated `{kw}` clause"
                )));
            }
            *slot = Some(names);
        }
        Alphabet::new(&tests.unwrap_or_default(), &progs.unwrap_or_default())
    }

    pub fn tests(&self) -> &[String] {
        &self.tests
    }

    pub fn progs(&self) -> &[String] {
        &self.progs
    }

    pub fn test_count(&self) -> usize {
        self.tests.len()
    }

    /// `|At| = 2^|tests|`.
    pub fn atom_count(&self) -> usize {
        1usize << self.tests.len()
    }

    pub fn test_id(&self, name: &str) -> Option<TestId> {
        self.tests
            .iter()
            .position(|t| t == name)
            .map(|i| TestId(i as u8))
    }

    pub fn prog_id(&self, name: &str) -> Option<ProgId> {
        self.progs
            .iter()
            .position(|p| p == name)
            .map(|i| ProgId(i as u16))
    }

    pub fn resolve(&self, name: &str) -> Option<Symbol> {
        self.test_id(name)
            .map(Symbol::Test)
            .or_else(|| self.prog_id(name).map(Symbol::Prog))
    }

    pub fn test_name(&self, id: TestId) -> &str {
        &self.tests[id.0 as usize]
    }

    pub fn prog_name(&self, id: ProgId) -> &str {
        &self.progs[id.0 as usize]
    }

    pub fn has_prog(&self, id: ProgId) -> bool {
        (id.0 as usize) < self.progs.len()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "tests {}; progs {};",
            self.tests.join(","),
            self.progs.join(",")
        )
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'') && !KEYWORDS.contains(&name)
}

pub(crate) fn is_keyword(name: &str) -> bool {
    KEYWORDS.contains(&name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declaration_round_trip() {
        let a = Alphabet::parse_decl("tests a,b,c; progs p,q;").unwrap();
        assert_eq!(a.tests(), ["a", "b", "c"]);
        assert_eq!(a.progs(), ["p", "q"]);
        assert_eq!(Alphabet::parse_decl(&a.to_string()).unwrap(), a);
        assert_eq!(a.atom_count(), 8);
    }

    #[test]
    fn rejects_bad_alphabets() {
        assert_eq!(
            Alphabet::new::<&str>(&[], &["p"]),
            Err(AlphabetError::NoTests)
        );
        assert_eq!(Alphabet::new(&["b"], &[]), Err(AlphabetError::NoPrograms));
        assert!(matches!(
            Alphabet::new(&["b", "b"], &["p"]),
            Err(AlphabetError::Duplicate(_))
        ));
        assert!(matches!(
            Alphabet::new(&["b"], &["b"]),
            Err(AlphabetError::BothSorts(_))
        ));
        assert!(matches!(
            Alphabet::new(&["while"], &["p"]),
            Err(AlphabetError::BadName(_))
        ));
        let many: Vec<String> = (0..17).map(|i| format!("t{i}")).collect();
        assert!(matches!(
            Alphabet::new(&many, &["p".to_string()]),
            Err(AlphabetError::TooManyTests { count: 17, cap: 16 })
        ));
        assert!(Alphabet::with_cap(&many[..3], &["p".to_string()], 2).is_err());
    }
}
