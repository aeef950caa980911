use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("the set of primitive tests must be non-empty")]
    NoTests,
    #[error("the set of primitive programs must be non-empty")]
    NoPrograms,
    #[error("{count} primitive tests exceed the cap of {cap}")]
    TooManyTests { count: usize, cap: usize },
    #[error("{0} primitive programs is too many")]
    TooManyPrograms(usize),
    #[error("`{0}` is not a valid identifier")]
    BadName(String),
    #[error("`{0}` is declared twice")]
    Duplicate(String),
    #[error("`{0}` is declared both as a test and as a program")]
    BothSorts(String),
    #[error("bad alphabet declaration: {0}")]
    BadDeclaration(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {kind}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    BadChar(char),
    #[error("unexpected {found}, expected {expected}")]
    Unexpected {
        found: String,
        expected: &'static str,
    },
    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),
    #[error("`{0}` is a program, but a test is required here")]
    ProgramInTest(String),
    #[error("bad atom `{0}`")]
    BadAtom(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("node {0} does not belong to this syntax tree")]
    UnknownNode(u32),
    #[error("cedent origin does not match the syntax tree")]
    OriginMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("guarded string does not fit the alphabet: {0}")]
    AlphabetMismatch(String),
    #[error("language exceeded the budget of {0} guarded strings")]
    ResourceLimit(usize),
}
