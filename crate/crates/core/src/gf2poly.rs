//! Polynomials over the two-element field, bit-packed into machine words.
//!
//! Bit `i` holds the coefficient of `t^i`; addition is XOR and products are
//! carry-less. Values are immutable and canonical (no high zero words), so
//! equality is bitwise. The zero polynomial has no degree — `degree()` returns
//! `None` rather than a sentinel integer.

use crate::bits;
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Shl};
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    words: Vec<u64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { words: Vec::new() }
    }

    pub fn one() -> Self {
        Poly2 { words: vec![1] }
    }

    /// The generator t.
    pub fn t() -> Self {
        Poly2 { words: vec![2] }
    }

    /// t^k
    pub fn monomial(k: usize) -> Self {
        let mut words = vec![0u64; bits::words_for(k + 1)];
        bits::set(&mut words, k);
        Poly2 { words }
    }

    /// Build from words, least significant first. High zero words are trimmed.
    pub fn from_words(mut words: Vec<u64>) -> Self {
        bits::trim(&mut words);
        Poly2 { words }
    }

    /// XOR together the given monomials (a repeated exponent cancels).
    pub fn from_exponents(exponents: &[usize]) -> Self {
        let top = match exponents.iter().max() {
            Some(&m) => m,
            None => return Poly2::zero(),
        };
        let mut words = vec![0u64; bits::words_for(top + 1)];
        for &e in exponents {
            words[e / 64] ^= 1 << (e % 64);
        }
        Poly2::from_words(words)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        bits::top_bit(&self.words)
    }

    pub fn coeff(&self, i: usize) -> bool {
        bits::get(&self.words, i)
    }

    /// Set exponents, highest first.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (j, &w) in self.words.iter().enumerate().rev() {
            let mut w = w;
            while w != 0 {
                let top = 63 - w.leading_zeros() as usize;
                out.push(j * 64 + top);
                w ^= 1 << top;
            }
        }
        out
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let (long, short) = if self.words.len() >= other.words.len() {
            (&self.words, &other.words)
        } else {
            (&other.words, &self.words)
        };
        let mut words = long.clone();
        bits::xor_into(&mut words, short);
        Poly2::from_words(words)
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        if self.is_zero() || other.is_zero() {
            return Poly2::zero();
        }
        Poly2::from_words(bits::clmul(&self.words, &other.words))
    }

    /// Product with an explicit Karatsuba switch-over, for cross-checking the
    /// default threshold.
    pub fn mul_with_threshold(&self, other: &Poly2, threshold_words: usize) -> Poly2 {
        if self.is_zero() || other.is_zero() {
            return Poly2::zero();
        }
        Poly2::from_words(bits::clmul_threshold(&self.words, &other.words, threshold_words))
    }

    pub fn square(&self) -> Poly2 {
        Poly2::from_words(bits::square_bits(&self.words))
    }

    pub fn shl(&self, k: usize) -> Poly2 {
        if self.is_zero() {
            return Poly2::zero();
        }
        Poly2::from_words(bits::shifted_left(&self.words, k))
    }

    /// Quotient and remainder with deg(rem) < deg(divisor).
    pub fn divmod(&self, divisor: &Poly2) -> Result<(Poly2, Poly2)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let mut rem = self.words.clone();
        let quot_bits = match self.degree() {
            Some(dp) if dp >= dd => dp - dd + 1,
            _ => return Ok((Poly2::zero(), self.clone())),
        };
        let mut quot = vec![0u64; bits::words_for(quot_bits)];
        while let Some(dr) = bits::top_bit(&rem) {
            if dr < dd {
                break;
            }
            let shift = dr - dd;
            bits::set(&mut quot, shift);
            bits::xor_shl(&mut rem, &divisor.words, shift);
        }
        Ok((Poly2::from_words(quot), Poly2::from_words(rem)))
    }

    /// Formal derivative: odd-exponent terms shift down, the rest vanish.
    pub fn derivative(&self) -> Poly2 {
        // exponent parity equals bit-position parity, so words are independent
        let words = self
            .words
            .iter()
            .map(|&w| (w & 0xaaaa_aaaa_aaaa_aaaa) >> 1)
            .collect();
        Poly2::from_words(words)
    }

    /// True iff every odd-exponent coefficient is zero.
    pub fn is_square(&self) -> bool {
        !bits::has_odd_bit(&self.words)
    }

    pub fn sqrt(&self) -> Result<Poly2> {
        if !self.is_square() {
            return Err(Error::NotASquare);
        }
        Ok(Poly2::from_words(bits::even_bits(&self.words)))
    }

    pub fn gcd(&self, other: &Poly2) -> Poly2 {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a
    }
}

impl Add<&Poly2> for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        Poly2::add(self, rhs)
    }
}

impl Mul<&Poly2> for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        Poly2::mul(self, rhs)
    }
}

impl Shl<usize> for &Poly2 {
    type Output = Poly2;
    fn shl(self, k: usize) -> Poly2 {
        Poly2::shl(self, k)
    }
}

/// Numeric order on the coefficient bit pattern (zero first).
impl Ord for Poly2 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for Poly2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for e in self.exponents() {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match e {
                0 => write!(f, "1")?,
                1 => write!(f, "t")?,
                _ => write!(f, "t^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2({self})")
    }
}

impl FromStr for Poly2 {
    type Err = Error;

    /// Accepts sums of "t^K", "t", "1" and "0" in any order; repeated terms
    /// cancel. Surrounding whitespace per term is ignored.
    fn from_str(s: &str) -> Result<Poly2> {
        let mut acc = Poly2::zero();
        let mut pos = 0usize;
        for raw in s.split('+') {
            let term = raw.trim();
            let term_pos = pos + (raw.len() - raw.trim_start().len());
            let err = || Error::PolyParse { pos: term_pos, found: term.to_string() };
            let e = match term {
                "0" => None,
                "1" => Some(0),
                "t" => Some(1),
                _ => {
                    let k = term.strip_prefix("t^").ok_or_else(err)?;
                    if k.is_empty() || !k.bytes().all(|b| b.is_ascii_digit()) {
                        return Err(err());
                    }
                    Some(k.parse::<usize>().map_err(|_| err())?)
                }
            };
            if let Some(e) = e {
                acc = acc.add(&Poly2::monomial(e));
            }
            pos += raw.len() + 1;
        }
        Ok(acc)
    }
}
