//! Two-letter words, substitution morphisms and their fixed points.
//!
//! The period-doubling morphism sends a ↦ ab, b ↦ aa; the Prouhet–Thue–Morse
//! morphism sends a ↦ ab, b ↦ ba. `w_n` builds the palindromic prefix words
//! through the folding identity W_{n+1} = W_n · ε_n · W_n instead of repeated
//! substitution; the two constructions are cross-checked in tests.

use crate::error::{Error, Result};
use crate::gf2poly::Poly2;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::A),
            'b' => Some(Letter::B),
            _ => None,
        }
    }
}

/// The alternating letter: a for even n, b for odd n.
pub fn epsilon(n: usize) -> Letter {
    if n % 2 == 0 {
        Letter::A
    } else {
        Letter::B
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Drop the first letter (empty stays empty).
    pub fn drop_first(&self) -> Word {
        Word(self.0.get(1..).unwrap_or(&[]).to_vec())
    }

    /// Drop the last letter (empty stays empty).
    pub fn drop_last(&self) -> Word {
        Word(self.0[..self.0.len().saturating_sub(1)].to_vec())
    }

    pub fn reverse(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        s.chars()
            .enumerate()
            .map(|(pos, c)| Letter::from_char(c).ok_or(Error::WordParse { pos, found: c }))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

/// A substitution on the two-letter alphabet.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Morphism {
    image_a: Word,
    image_b: Word,
}

impl Morphism {
    pub fn new(image_a: Word, image_b: Word) -> Result<Self> {
        if image_a.is_empty() || image_b.is_empty() {
            return Err(Error::EmptyMorphismImage);
        }
        Ok(Morphism { image_a, image_b })
    }

    /// a ↦ ab, b ↦ aa
    pub fn period_doubling() -> Self {
        Morphism {
            image_a: Word(vec![Letter::A, Letter::B]),
            image_b: Word(vec![Letter::A, Letter::A]),
        }
    }

    /// a ↦ ab, b ↦ ba
    pub fn thue_morse() -> Self {
        Morphism {
            image_a: Word(vec![Letter::A, Letter::B]),
            image_b: Word(vec![Letter::B, Letter::A]),
        }
    }

    pub fn image(&self, l: Letter) -> &Word {
        match l {
            Letter::A => &self.image_a,
            Letter::B => &self.image_b,
        }
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Vec::with_capacity(w.len() * 2);
        for &l in w.letters() {
            out.extend_from_slice(self.image(l).letters());
        }
        Word(out)
    }

    /// The prefix of length `min_length` of the fixed point starting with a.
    /// Requires image(a) to start with a and have length ≥ 2.
    pub fn fixed_point_prefix(&self, min_length: usize) -> Result<Word> {
        if self.image_a.letters().first() != Some(&Letter::A) || self.image_a.len() < 2 {
            return Err(Error::NonProlongable);
        }
        let mut w = Word(vec![Letter::A]);
        while w.len() < min_length {
            w = self.apply(&w);
        }
        w.0.truncate(min_length);
        Ok(w)
    }
}

impl FromStr for Morphism {
    type Err = Error;

    /// Grammar: `a->ab,b->aa`
    fn from_str(s: &str) -> Result<Morphism> {
        let mut image_a = None;
        let mut image_b = None;
        for part in s.split(',') {
            let part = part.trim();
            let (lhs, rhs) = part.split_once("->").ok_or_else(|| Error::MorphismParse {
                detail: format!("expected letter->word, got {part:?}"),
            })?;
            let word: Word = rhs.trim().parse()?;
            match lhs.trim() {
                "a" => image_a = Some(word),
                "b" => image_b = Some(word),
                other => {
                    return Err(Error::MorphismParse {
                        detail: format!("unknown letter {other:?}"),
                    })
                }
            }
        }
        match (image_a, image_b) {
            (Some(a), Some(b)) => Morphism::new(a, b),
            _ => Err(Error::MorphismParse { detail: "need images for both a and b".into() }),
        }
    }
}

/// The word (σⁿ(a))'' of length 2ⁿ−1, built by folding:
/// W_0 = ∅ and W_{n+1} = W_n · ε_n · W_n.
pub fn w_n(n: usize) -> Word {
    let mut w = Vec::new();
    for k in 0..n {
        let mut next = Vec::with_capacity(2 * w.len() + 1);
        next.extend_from_slice(&w);
        next.push(epsilon(k));
        next.extend_from_slice(&w);
        w = next;
    }
    Word(w)
}

/// Polynomial values for the two letters: distinct and non-constant.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LetterAssignment {
    a: Poly2,
    b: Poly2,
}

impl LetterAssignment {
    pub fn new(a: Poly2, b: Poly2) -> Result<Self> {
        if a.degree().unwrap_or(0) < 1 || b.degree().unwrap_or(0) < 1 {
            return Err(Error::InvalidAssignment { reason: "letter values must be non-constant" });
        }
        if a == b {
            return Err(Error::InvalidAssignment { reason: "letter values must be distinct" });
        }
        Ok(LetterAssignment { a, b })
    }

    pub fn a(&self) -> &Poly2 {
        &self.a
    }

    pub fn b(&self) -> &Poly2 {
        &self.b
    }

    pub fn value(&self, l: Letter) -> &Poly2 {
        match l {
            Letter::A => &self.a,
            Letter::B => &self.b,
        }
    }

    pub fn swapped(&self) -> LetterAssignment {
        LetterAssignment { a: self.b.clone(), b: self.a.clone() }
    }

    /// Every valid ordered pair with deg a + deg b ≤ max_total_deg.
    pub fn enumerate_pairs(max_total_deg: usize) -> Vec<LetterAssignment> {
        let mut out = Vec::new();
        let polys_of_degree = |d: usize| -> Vec<Poly2> {
            (0..1u64 << d).map(|low| Poly2::from_words(vec![low | (1 << d)])).collect()
        };
        for da in 1..max_total_deg {
            for db in 1..=max_total_deg.saturating_sub(da) {
                for a in polys_of_degree(da) {
                    for b in polys_of_degree(db) {
                        if a != b {
                            out.push(LetterAssignment { a: a.clone(), b });
                        }
                    }
                }
            }
        }
        out
    }
}

/// The two sequences with built-in verifier support.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NamedSequence {
    PeriodDoubling,
    ProuhetThueMorse,
}

impl NamedSequence {
    pub fn morphism(self) -> Morphism {
        match self {
            NamedSequence::PeriodDoubling => Morphism::period_doubling(),
            NamedSequence::ProuhetThueMorse => Morphism::thue_morse(),
        }
    }
}

impl fmt::Display for NamedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedSequence::PeriodDoubling => write!(f, "pd"),
            NamedSequence::ProuhetThueMorse => write!(f, "ptm"),
        }
    }
}

impl FromStr for NamedSequence {
    type Err = Error;
    fn from_str(s: &str) -> Result<NamedSequence> {
        match s {
            "pd" => Ok(NamedSequence::PeriodDoubling),
            "ptm" => Ok(NamedSequence::ProuhetThueMorse),
            _ => Err(Error::MorphismParse { detail: format!("unknown sequence {s:?} (expected pd or ptm)") }),
        }
    }
}
