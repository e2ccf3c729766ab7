//! Truncated formal Laurent series in 1/t over F₂, with explicit
//! guaranteed-precision windows.
//!
//! A value represents an element x of F₂((1/t)) through the coefficients it
//! certifies: every exponent above the stored window is known to be zero, the
//! window itself is stored bit-for-bit, and below the window the coefficients
//! are unknown — unless the series is `exact`, in which case they are all zero
//! and the value is a Laurent polynomial known completely.
//!
//! Every operation recomputes the certified window pessimistically:
//!
//!   * add keeps exponents down to the higher of the two floors,
//!   * a product of windows of widths w₁, w₂ certifies min(w₁, w₂)
//!     coefficients below its leading exponent,
//!   * inverse preserves width, square doubles the whole window (Frobenius),
//!     derivative shifts it down by one.
//!
//! Precision loss is never silent: a result whose window cannot certify what
//! a caller asks for is an error, and a window in which every known
//! coefficient vanishes stays distinct from the exact zero.

use crate::bits;
use crate::error::{Error, Result};
use crate::gf2poly::Poly2;
use std::fmt;
use std::ops::{Add, Mul};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    /// Exponent of bit 0 of `words`.
    lo: i64,
    /// Window width in bits; 0 means no stored coefficients.
    width: usize,
    /// Bit k holds the coefficient of t^(lo+k). Canonical: top bit set when
    /// width > 0; for exact series bit 0 is set too (lo trimmed up).
    words: Vec<u64>,
    /// All coefficients below `lo` are zero (the series is a known Laurent
    /// polynomial). Exact zero is width 0 with this flag set.
    exact: bool,
}

/// Outcome of scanning a window for its leading coefficient.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Leading {
    /// Leading nonzero coefficient sits at this exponent.
    Nonzero(i64),
    /// Every certified coefficient vanishes: |x| ≤ |t|^(lo-1), with lo the
    /// lowest certified exponent. Cannot be distinguished from zero at this
    /// precision.
    ZeroToPrecision(i64),
    /// Exactly zero.
    Zero,
}

fn normalized(lo: i64, mut words: Vec<u64>, width_hint: usize, exact: bool) -> Series {
    bits::mask_above(&mut words, width_hint);
    match bits::top_bit(&words) {
        None => {
            if exact {
                Series { lo: 0, width: 0, words: Vec::new(), exact: true }
            } else {
                Series { lo, width: 0, words: Vec::new(), exact: false }
            }
        }
        Some(top) => {
            let mut lo = lo;
            let mut width = top + 1;
            if exact {
                let tz = bits::lowest_bit(&words).unwrap();
                if tz > 0 {
                    words = bits::shifted_right(&words, tz);
                    lo += tz as i64;
                    width -= tz;
                }
            }
            words.truncate(bits::words_for(width));
            Series { lo, width, words, exact }
        }
    }
}

impl Series {
    /// The exact zero.
    pub fn zero() -> Self {
        Series { lo: 0, width: 0, words: Vec::new(), exact: true }
    }

    /// A series certified to vanish at every exponent ≥ lo, unknown below.
    pub fn zero_to_precision(lo: i64) -> Self {
        Series { lo, width: 0, words: Vec::new(), exact: false }
    }

    /// Exact monomial t^e.
    pub fn monomial(e: i64) -> Self {
        Series { lo: e, width: 1, words: vec![1], exact: true }
    }

    /// Exact embedding of a polynomial.
    pub fn from_poly(p: &Poly2) -> Self {
        normalized(0, p.words().to_vec(), p.degree().map_or(0, |d| d + 1), true)
    }

    /// Expansion of num/den with the top `precision` coefficients certified.
    /// The result is exact when the expansion terminates.
    pub fn from_rational(num: &Poly2, den: &Poly2, precision: usize) -> Result<Self> {
        let dd = den.degree().ok_or(Error::DivisionByZero)?;
        if precision == 0 {
            return Err(Error::PrecisionTooSmall { required: 1 });
        }
        let dn = match num.degree() {
            Some(d) => d,
            None => return Ok(Series::zero()),
        };
        let hi = dn as i64 - dd as i64;
        // lowest wanted exponent is hi - precision + 1 = -s
        let s = precision as i64 - 1 - hi;
        let (q, r) = if s >= 0 {
            num.shl(s as usize).divmod(den)?
        } else {
            num.divmod(&den.shl((-s) as usize))?
        };
        Ok(normalized(-s, q.words().to_vec(), q.degree().map_or(0, |d| d + 1), r.is_zero()))
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact && self.width == 0
    }

    /// Window width in coefficients (0 for exact zero and all-zero windows).
    pub fn width(&self) -> usize {
        self.width
    }

    /// Exponent of the leading (nonzero) coefficient, if one is certified.
    pub fn leading_exponent(&self) -> Option<i64> {
        (self.width > 0).then(|| self.lo + self.width as i64 - 1)
    }

    /// Lowest certified exponent; None when the series is exact (everything
    /// below is a certified zero).
    pub fn known_floor(&self) -> Option<i64> {
        (!self.exact).then_some(self.lo)
    }

    /// Highest exponent that could carry a nonzero coefficient; None for the
    /// exact zero.
    pub fn upper_bound(&self) -> Option<i64> {
        if self.width > 0 {
            self.leading_exponent()
        } else if self.exact {
            None
        } else {
            Some(self.lo - 1)
        }
    }

    /// Coefficient of t^e, or None when e lies below the certified window.
    pub fn coeff(&self, e: i64) -> Option<bool> {
        if self.width > 0 && e >= self.lo {
            let k = (e - self.lo) as usize;
            Some(k < self.width && bits::get(&self.words, k))
        } else if e >= self.lo || self.exact {
            Some(false)
        } else {
            None
        }
    }

    pub fn leading(&self) -> Leading {
        if self.width > 0 {
            Leading::Nonzero(self.leading_exponent().unwrap())
        } else if self.exact {
            Leading::Zero
        } else {
            Leading::ZeroToPrecision(self.lo)
        }
    }

    /// |x| < 1, i.e. membership in the unit ball P. For an all-zero window
    /// this is certified only when the window reaches exponent 0.
    pub fn is_fractional(&self) -> bool {
        match self.leading() {
            Leading::Nonzero(e) => e < 0,
            Leading::ZeroToPrecision(lo) => lo <= 0,
            Leading::Zero => true,
        }
    }

    /// The two series certify the same coefficient wherever both windows are
    /// defined.
    pub fn agrees_on_known(&self, other: &Series) -> bool {
        let hi = match (self.upper_bound(), other.upper_bound()) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => return true,
        };
        let lo = match (self.known_floor(), other.known_floor()) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => self.lo.min(other.lo),
        };
        (lo..=hi).all(|e| match (self.coeff(e), other.coeff(e)) {
            (Some(x), Some(y)) => x == y,
            _ => true,
        })
    }

    pub fn add(&self, other: &Series) -> Series {
        if self.is_exact_zero() {
            return other.clone();
        }
        if other.is_exact_zero() {
            return self.clone();
        }
        let exact = self.exact && other.exact;
        let base_lo = match (self.known_floor(), other.known_floor()) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => self.lo.min(other.lo),
        };
        let hi = match (self.upper_bound(), other.upper_bound()) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!("exact zeros handled above"),
        };
        if hi < base_lo {
            return Series { lo: base_lo, width: 0, words: Vec::new(), exact };
        }
        let width = (hi - base_lo + 1) as usize;
        let mut words = vec![0u64; bits::words_for(width)];
        for s in [self, other] {
            if s.width == 0 {
                continue;
            }
            let shift = s.lo - base_lo;
            if shift >= 0 {
                bits::xor_shl(&mut words, &s.words, shift as usize);
            } else {
                bits::xor_into(&mut words, &bits::shifted_right(&s.words, (-shift) as usize));
            }
        }
        normalized(base_lo, words, width, exact)
    }

    pub fn mul(&self, other: &Series) -> Series {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Series::zero();
        }
        let exact = self.exact && other.exact;
        if self.width == 0 || other.width == 0 {
            // at least one factor is an all-zero window; the product vanishes
            // above floor(x) + upper(y) resp. upper(x) + floor(y)
            let k = [
                self.known_floor().zip(other.upper_bound()).map(|(k, u)| k + u),
                other.known_floor().zip(self.upper_bound()).map(|(k, u)| k + u),
            ]
            .into_iter()
            .flatten()
            .max()
            .expect("a zero-window factor always has a finite floor");
            return Series::zero_to_precision(k);
        }
        let prod_lo = self.lo + other.lo;
        let words = bits::clmul(&self.words, &other.words);
        let width = self.width + other.width - 1;
        let floor = match (self.known_floor(), other.known_floor()) {
            (None, None) => prod_lo,
            (Some(k), None) => k + other.leading_exponent().unwrap(),
            (None, Some(k)) => k + self.leading_exponent().unwrap(),
            (Some(kx), Some(ky)) => (kx + other.leading_exponent().unwrap())
                .max(ky + self.leading_exponent().unwrap()),
        };
        let drop = (floor - prod_lo) as usize;
        let words = if drop == 0 { words } else { bits::shifted_right(&words, drop) };
        normalized(floor, words, width - drop, exact)
    }

    /// Frobenius square: exponents double, so the whole window is certified.
    pub fn square(&self) -> Series {
        if self.width == 0 {
            return if self.exact {
                Series::zero()
            } else {
                Series::zero_to_precision(2 * self.lo - 1)
            };
        }
        let words = bits::square_bits(&self.words);
        normalized(2 * self.lo, words, 2 * (self.width - 1) + 1, self.exact)
    }

    /// Multiplicative inverse, certified to the same window width.
    pub fn inverse(&self) -> Result<Series> {
        if self.width == 0 {
            return Err(if self.exact {
                Error::DivisionByZero
            } else {
                Error::PrecisionExhausted { context: "inverse of a series with all-zero window" }
            });
        }
        let hi = self.leading_exponent().unwrap();
        if self.exact && self.width == 1 {
            return Ok(Series::monomial(-hi));
        }
        // 1/x = t^(-lo) / M with M the window polynomial of degree width-1;
        // the top `width` reciprocal coefficients are floor(t^(2(width-1)) / M)
        let mantissa = Poly2::from_words(self.words.clone());
        let (q, _) = Poly2::monomial(2 * (self.width - 1)).divmod(&mantissa)?;
        let lo = -hi - (self.width as i64 - 1);
        Ok(normalized(lo, q.words().to_vec(), self.width, false))
    }

    /// Formal derivative: t^e ↦ (e mod 2)·t^(e-1).
    pub fn derivative(&self) -> Series {
        if self.width == 0 {
            return if self.exact { Series::zero() } else { Series::zero_to_precision(self.lo - 1) };
        }
        // keep bits at odd exponents; exponent parity of bit k is parity of lo+k
        let mask = if self.lo.rem_euclid(2) == 0 {
            0xaaaa_aaaa_aaaa_aaaa_u64
        } else {
            0x5555_5555_5555_5555_u64
        };
        let words = self.words.iter().map(|&w| w & mask).collect();
        normalized(self.lo - 1, words, self.width, self.exact)
    }

    /// Square root of a square, certified on the halved window. Fails if a
    /// certified odd-exponent coefficient is nonzero or the leading exponent
    /// is odd.
    pub fn sqrt(&self) -> Result<Series> {
        if self.width == 0 {
            return Ok(if self.exact {
                Series::zero()
            } else {
                // y^2 = x and |x| ≤ t^(lo-1) force |y| ≤ t^(ceil((lo-1)/2))
                Series::zero_to_precision((self.lo + 1).div_euclid(2))
            });
        }
        let hi = self.leading_exponent().unwrap();
        if hi % 2 != 0 {
            return Err(Error::NotASquare);
        }
        // root coefficient at m comes from exponent 2m; certified for 2m ≥ lo
        let root_lo = (self.lo + 1).div_euclid(2);
        let drop = (2 * root_lo - self.lo) as usize;
        let words = if drop == 0 {
            self.words.clone()
        } else {
            bits::shifted_right(&self.words, drop)
        };
        if bits::has_odd_bit(&words) {
            return Err(Error::NotASquare);
        }
        let width = (hi / 2 - root_lo + 1) as usize;
        Ok(normalized(root_lo, bits::even_bits(&words), width, self.exact))
    }

    /// Sum of the terms with exponent ≥ 0. Errors when the window cannot
    /// certify all of them.
    pub fn polynomial_part(&self) -> Result<Poly2> {
        match self.leading() {
            Leading::Zero => Ok(Poly2::zero()),
            Leading::ZeroToPrecision(lo) => {
                if lo <= 0 {
                    Ok(Poly2::zero())
                } else {
                    Err(Error::PrecisionExhausted {
                        context: "polynomial part not covered by the window",
                    })
                }
            }
            Leading::Nonzero(hi) => {
                if hi < 0 {
                    return Ok(Poly2::zero());
                }
                if self.lo > 0 && !self.exact {
                    return Err(Error::PrecisionExhausted {
                        context: "polynomial part not covered by the window",
                    });
                }
                let mut words = vec![0u64; bits::words_for(hi as usize + 1)];
                for e in 0..=hi {
                    if self.coeff(e) == Some(true) {
                        bits::set(&mut words, e as usize);
                    }
                }
                Ok(Poly2::from_words(words))
            }
        }
    }

    /// x − polynomial_part(x); lies in the unit ball.
    pub fn fractional_part(&self) -> Result<Series> {
        let p = self.polynomial_part()?;
        Ok(self.add(&Series::from_poly(&p)))
    }

    /// For exact series only: the value as num/den with den a power of t.
    pub fn to_rational(&self) -> Option<(Poly2, Poly2)> {
        if !self.exact {
            return None;
        }
        if self.width == 0 {
            return Some((Poly2::zero(), Poly2::one()));
        }
        let p = Poly2::from_words(self.words.clone());
        if self.lo >= 0 {
            Some((p.shl(self.lo as usize), Poly2::one()))
        } else {
            Some((p, Poly2::monomial((-self.lo) as usize)))
        }
    }
}

impl Add<&Series> for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        Series::add(self, rhs)
    }
}

impl Mul<&Series> for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        Series::mul(self, rhs)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: i64) -> fmt::Result {
    match e {
        0 => write!(f, "1"),
        1 => write!(f, "t"),
        _ => write!(f, "t^{e}"),
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.width == 0 {
            return if self.exact { write!(f, "0") } else { write!(f, "O(t^{})", self.lo - 1) };
        }
        let mut first = true;
        for k in (0..self.width).rev() {
            if bits::get(&self.words, k) {
                if !first {
                    write!(f, "+")?;
                }
                first = false;
                write_monomial(f, self.lo + k as i64)?;
            }
        }
        if !self.exact {
            write!(f, "+O(t^{})", self.lo - 1)?;
        }
        Ok(())
    }
}
