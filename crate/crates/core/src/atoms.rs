//! Atoms (total truth assignments) and sets of atoms.

use std::fmt;

use crate::alphabet::Alphabet;
use crate::error::ParseErrorKind;
use crate::syntax::Test;

/// A truth assignment to all primitive tests; bit `i` is the value of test `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(pub u32);

impl Atom {
    /// `α ≤ b`.
    pub fn satisfies(self, b: &Test) -> bool {
        b.eval(self.0)
    }

    /// Bitstring over the declared test order, first test first.
    pub fn bitstring(self, width: usize) -> String {
        (0..width)
            .map(|i| if self.0 >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn parse_bitstring(s: &str, width: usize) -> Result<Atom, ParseErrorKind> {
        if s.len() != width || !s.bytes().all(|c| c == b'0' || c == b'1') {
            return Err(ParseErrorKind::BadAtom(s.to_string()));
        }
        Ok(Atom(
            s.bytes()
                .enumerate()
                .filter(|(_, c)| *c == b'1')
                .fold(0, |acc, (i, _)| acc | 1 << i),
        ))
    }
}

/// `α ≤ b`.
pub fn eval_test(b: &Test, atom: Atom) -> bool {
    atom.satisfies(b)
}

/// A subset of `At`, stored as a bitset of `2^width` bits.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomSet {
    width: u8,
    words: Vec<u64>,
}

impl AtomSet {
    fn words_for(width: usize) -> usize {
        (1usize << width).div_ceil(64)
    }

    pub fn empty(width: usize) -> AtomSet {
        AtomSet {
            width: width as u8,
            words: vec![0; Self::words_for(width)],
        }
    }

    pub fn full(width: usize) -> AtomSet {
        let mut s = AtomSet::empty(width);
        let n = 1usize << width;
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * 64;
            let bits = (n - lo).min(64);
            *w = if bits == 64 {
                u64::MAX
            } else {
                (1u64 << bits) - 1
            };
        }
        s
    }

    /// `⟦b⟧` as an atom set.
    pub fn of_test(width: usize, b: &Test) -> AtomSet {
        AtomSet::full(width).restrict(b)
    }

    pub fn from_atoms(width: usize, atoms: impl IntoIterator<Item = Atom>) -> AtomSet {
        let mut s = AtomSet::empty(width);
        for a in atoms {
            s.insert(a);
        }
        s
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn universe_size(&self) -> usize {
        1 << self.width
    }

    pub fn contains(&self, a: Atom) -> bool {
        let i = a.0 as usize;
        i < self.universe_size() && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, a: Atom) {
        let i = a.0 as usize;
        assert!(i < self.universe_size(), "atom outside the universe");
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn is_full(&self) -> bool {
        *self == AtomSet::full(self.width())
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = Atom> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| Atom((i * 64 + b) as u32))
        })
    }

    pub fn first(&self) -> Option<Atom> {
        self.iter().next()
    }

    /// `A ↾ b = {α ∈ A : α ≤ b}`.
    pub fn restrict(&self, b: &Test) -> AtomSet {
        let mut out = self.clone();
        for (i, w) in out.words.iter_mut().enumerate() {
            let mut m = *w;
            while m != 0 {
                let bit = m.trailing_zeros();
                m &= m - 1;
                if !b.eval((i * 64) as u32 + bit) {
                    *w &= !(1u64 << bit);
                }
            }
        }
        out
    }

    pub fn intersect(&self, other: &AtomSet) -> AtomSet {
        AtomSet {
            width: self.width,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        AtomSet {
            width: self.width,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn complement(&self) -> AtomSet {
        let full = AtomSet::full(self.width());
        AtomSet {
            width: self.width,
            words: self
                .words
                .iter()
                .zip(&full.words)
                .map(|(a, f)| !a & f)
                .collect(),
        }
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Sorted bitstrings of the members.
    pub fn to_bitstrings(&self) -> Vec<String> {
        let mut v: Vec<String> = self.iter().map(|a| a.bitstring(self.width())).collect();
        v.sort();
        v
    }

    /// `*` for `At`, `0` for `∅`, otherwise a disjunction of atom minterms.
    pub fn to_test_text(&self, alphabet: &Alphabet) -> String {
        if self.is_full() {
            return "*".to_string();
        }
        if self.is_empty() {
            return "0".to_string();
        }
        self.iter()
            .map(|a| {
                alphabet
                    .tests()
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        if a.0 >> i & 1 == 1 {
                            t.clone()
                        } else {
                            format!("!{t}")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("&")
            })
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_bitstrings().join(","))
    }
}

/// `At` for the alphabet.
pub fn all_atoms(alphabet: &Alphabet) -> AtomSet {
    AtomSet::full(alphabet.test_count())
}
