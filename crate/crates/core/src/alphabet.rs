use std::fmt;

use smallvec::SmallVec;

use crate::error::{Result, SpecError};

/// An ordered, duplicate-free, nonempty set of action symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet(Vec<String>);

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        symbols.sort();
        symbols.dedup();
        if symbols.is_empty() {
            return Err(SpecError::EmptyAlphabet);
        }
        Ok(Alphabet(symbols))
    }

    /// `a`, `b`, `c`, ... of the given size.
    pub fn letters(size: usize) -> Result<Self> {
        Alphabet::new((0..size).map(letter))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.0
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.0[index]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.0.binary_search_by(|s| s.as_str().cmp(symbol)).ok()
    }

    pub(crate) fn check_same(&self, other: &Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(SpecError::AlphabetMismatch)
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join(","))
    }
}

/// Name of the `i`-th generated action: `a`..`z`, then `a26`, `a27`, ...
pub fn letter(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("a{i}")
    }
}

/// Fresh state names `q0..qn` used by every constructed result.
pub(crate) fn fresh_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Bit set of state indices. Inline for up to 128 states.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet(SmallVec<[u64; 2]>);

impl StateSet {
    pub fn new() -> Self {
        StateSet(SmallVec::new())
    }

    pub fn insert(&mut self, i: usize) {
        let (w, b) = (i / 64, i % 64);
        if self.0.len() <= w {
            self.0.resize(w + 1, 0);
        }
        self.0[w] |= 1 << b;
    }

    pub fn contains(&self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        self.0.get(w).is_some_and(|word| word & (1 << b) != 0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    pub fn intersects(&self, other: &StateSet) -> bool {
        self.0.iter().zip(other.0.iter()).any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, word)| {
            (0..64).filter(move |b| word & (1 << b) != 0).map(move |b| w * 64 + b)
        })
    }

    /// Drops trailing zero words so equal sets compare and hash equal.
    fn normalize(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }
}

impl FromIterator<usize> for StateSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut set = StateSet::new();
        for i in iter {
            set.insert(i);
        }
        set.normalize();
        set
    }
}
