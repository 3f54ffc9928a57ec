//! Christoffel words, the `A`/`B` modified word and its run profile.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid index {a}/{b}: {reason}")]
    InvalidIndex { a: u64, b: u64, reason: &'static str },
    #[error("cannot parse {0:?} as a rational a/b")]
    Parse(String),
    #[error("malformed word: beta at position {0} is not preceded by an alpha")]
    MalformedWord(usize),
}

/// Coprime `a/b` with `1 <= a <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalIndex {
    a: u64,
    b: u64,
}

impl RationalIndex {
    pub fn new(a: u64, b: u64) -> Result<Self, WordError> {
        if a == 0 {
            return Err(WordError::InvalidIndex { a, b, reason: "numerator must be positive" });
        }
        if a > b {
            return Err(WordError::InvalidIndex { a, b, reason: "index must lie in (0, 1]" });
        }
        if a.gcd(&b) != 1 {
            return Err(WordError::InvalidIndex { a, b, reason: "numerator and denominator must be coprime" });
        }
        Ok(RationalIndex { a, b })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// `a + b - 1`: the numerator degree and the number of labeled tiles.
    pub fn degree(&self) -> u64 {
        self.a + self.b - 1
    }

    /// Every valid index with `a + b <= max_sum`, ordered by `(a + b, a)`.
    pub fn all_up_to(max_sum: u64) -> Vec<RationalIndex> {
        let mut out = Vec::new();
        for s in 2..=max_sum {
            for a in 1..=s / 2 {
                if let Ok(r) = RationalIndex::new(a, s - a) {
                    out.push(r);
                }
            }
        }
        out
    }

    /// File-name friendly form `a_b`.
    pub fn file_stem(&self) -> String {
        format!("{}_{}", self.a, self.b)
    }
}

impl fmt::Display for RationalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.b)
    }
}

impl FromStr for RationalIndex {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.trim().split_once('/').ok_or_else(|| WordError::Parse(s.to_string()))?;
        let a = a.trim().parse().map_err(|_| WordError::Parse(s.to_string()))?;
        let b = b.trim().parse().map_err(|_| WordError::Parse(s.to_string()))?;
        RationalIndex::new(a, b)
    }
}

impl Serialize for RationalIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Christoffel letter: `Alpha` is a horizontal step, `Beta` a vertical one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    Alpha,
    Beta,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChristoffelWord(Vec<Letter>);

impl ChristoffelWord {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, l: Letter) -> usize {
        self.0.iter().filter(|&&c| c == l).count()
    }

    /// The word with its first and last letters removed.
    pub fn interior(&self) -> &[Letter] {
        if self.0.len() < 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    /// Parses the ASCII form (`a` = alpha, `b` = beta).
    pub fn from_ascii(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                'a' => Some(Letter::Alpha),
                'b' => Some(Letter::Beta),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(ChristoffelWord)
    }
}

/// ASCII rendering, `a` for alpha and `b` for beta.
impl fmt::Display for ChristoffelWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::Alpha => "a",
                Letter::Beta => "b",
            })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModLetter {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModifiedWord(Vec<ModLetter>);

impl ModifiedWord {
    pub fn letters(&self) -> &[ModLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, l: ModLetter) -> usize {
        self.0.iter().filter(|&&c| c == l).count()
    }
}

impl fmt::Display for ModifiedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                ModLetter::A => "A",
                ModLetter::B => "B",
            })?;
        }
        Ok(())
    }
}

/// `runs[k]` is the length of the `B`-run after the `(k+1)`-th `A`, with the
/// run that ends the word shortened by one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct RunProfile(Vec<u64>);

impl RunProfile {
    pub fn runs(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

/// Lower Christoffel word of the segment from `(0,0)` to `(b,a)`.
pub fn christoffel_word(rho: RationalIndex) -> ChristoffelWord {
    let (a, b) = (rho.a, rho.b);
    let (mut p, mut q) = (0u64, 0u64);
    let mut w = Vec::with_capacity((a + b) as usize);
    while (p, q) != (b, a) {
        if (q + 1) * b <= a * p {
            w.push(Letter::Beta);
            q += 1;
        } else {
            w.push(Letter::Alpha);
            p += 1;
        }
    }
    ChristoffelWord(w)
}

/// Rewrites `ab -> B`, then the remaining `a -> A`, scanning left to right.
pub fn modify_word(w: &ChristoffelWord) -> Result<ModifiedWord, WordError> {
    let l = w.letters();
    let mut out = Vec::new();
    let mut i = 0;
    while i < l.len() {
        match (l[i], l.get(i + 1)) {
            (Letter::Alpha, Some(Letter::Beta)) => {
                out.push(ModLetter::B);
                i += 2;
            }
            (Letter::Alpha, _) => {
                out.push(ModLetter::A);
                i += 1;
            }
            (Letter::Beta, _) => return Err(WordError::MalformedWord(i)),
        }
    }
    Ok(ModifiedWord(out))
}

pub fn run_profile(m: &ModifiedWord) -> RunProfile {
    let mut runs: Vec<u64> = Vec::new();
    for l in m.letters() {
        match l {
            ModLetter::A => runs.push(0),
            ModLetter::B => {
                if let Some(last) = runs.last_mut() {
                    *last += 1;
                }
            }
        }
    }
    // The final B closes on the last corner of the path and has no tile of its own.
    if m.letters().last() == Some(&ModLetter::B) {
        if let Some(last) = runs.last_mut() {
            *last -= 1;
        }
    }
    RunProfile(runs)
}

/// Convenience: word, modified word and runs for `rho`.
pub fn word_data(rho: RationalIndex) -> (ChristoffelWord, ModifiedWord, RunProfile) {
    let w = christoffel_word(rho);
    let m = modify_word(&w).expect("Christoffel words with a <= b have no leading beta");
    let r = run_profile(&m);
    (w, m, r)
}
