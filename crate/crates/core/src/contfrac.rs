//! Continuants, convergents and continued-fraction expansion.
//!
//! For a word W = w₁,…,w_n of polynomial values the continuant ⟨W⟩ satisfies
//! ⟨∅⟩ = 1, ⟨w⟩ = w and ⟨W⟩ = w₁⟨W'⟩ + ⟨(W')'⟩, and the finite continued
//! fraction takes the value [W] = ⟨W⟩/⟨W'⟩. The classical identities
//!
//!   ⟨X·Y⟩ = ⟨X⟩⟨Y⟩ + ⟨X''⟩⟨Y'⟩          (concatenation)
//!   ⟨W⟩⟨(W')''⟩ + ⟨W'⟩⟨W''⟩ = 1          (determinant, characteristic 2)
//!   ⟨W*⟩ = ⟨W⟩                            (mirror)
//!
//! drive both the doubling recurrence u_{n+1} = ε_n·u_n², v_{n+1} = ε_n·u_n·v_n + 1
//! for the folded prefix words and the expansion algorithms below.

use crate::error::{Error, Result};
use crate::gf2poly::Poly2;
use crate::laurent::{Leading, Series};
use crate::words::{epsilon, LetterAssignment, Morphism, Word};
use std::fmt;

/// A convergent u/v = [W] with u = ⟨W⟩ and v = ⟨W'⟩.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Convergent {
    pub u: Poly2,
    pub v: Poly2,
}

fn continuant_pair(word: &Word, assign: &LetterAssignment) -> (Poly2, Poly2) {
    // right-to-left over suffixes: (⟨s_k⟩, ⟨s_{k+1}⟩)
    let mut cur = Poly2::one();
    let mut prev = Poly2::zero();
    for &l in word.letters().iter().rev() {
        let next = &(assign.value(l) * &cur) + &prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// ⟨W⟩ under the assignment.
pub fn continuant(word: &Word, assign: &LetterAssignment) -> Poly2 {
    continuant_pair(word, assign).0
}

/// ⟨X·Y⟩ computed through the concatenation identity
/// ⟨X⟩⟨Y⟩ + ⟨X''⟩⟨Y'⟩ (an empty operand short-circuits to the other side).
pub fn concat_continuant(x: &Word, y: &Word, assign: &LetterAssignment) -> Poly2 {
    if x.is_empty() {
        return continuant(y, assign);
    }
    if y.is_empty() {
        return continuant(x, assign);
    }
    let (cy, cy_tail) = continuant_pair(y, assign); // (⟨Y⟩, ⟨Y'⟩)
    let cx = continuant(x, assign);
    let cx_head = continuant(&x.drop_last(), assign);
    &(&cx * &cy) + &(&cx_head * &cy_tail)
}

/// (⟨W⟩, ⟨W'⟩) for a nonempty word.
pub fn eval_cf(word: &Word, assign: &LetterAssignment) -> Result<Convergent> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    let (u, v) = continuant_pair(word, assign);
    Ok(Convergent { u, v })
}

/// Convergents (u_n, v_n) of the folded words W_n for n = 1..=n_max, by the
/// doubling recurrence u_{n+1} = ε_n·u_n², v_{n+1} = ε_n·u_n·v_n + 1 with
/// u₁ = a, v₁ = 1.
pub fn uv_sequence(assign: &LetterAssignment, n_max: usize) -> Vec<Convergent> {
    let mut out = Vec::with_capacity(n_max);
    if n_max == 0 {
        return out;
    }
    let mut u = assign.a().clone();
    let mut v = Poly2::one();
    out.push(Convergent { u: u.clone(), v: v.clone() });
    for n in 1..n_max {
        let e = assign.value(epsilon(n));
        let nu = e * &u.square();
        let nv = &(e * &(&u * &v)) + &Poly2::one();
        u = nu;
        v = nv;
        out.push(Convergent { u: u.clone(), v: v.clone() });
    }
    out
}

/// Partial quotients [a₀; a₁, a₂, …]: the leading quotient may be any
/// polynomial, tail quotients have degree ≥ 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialQuotients {
    pub leading: Poly2,
    pub tail: Vec<Poly2>,
}

impl PartialQuotients {
    pub fn len(&self) -> usize {
        1 + self.tail.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All quotients in order, starting with the leading one.
    pub fn iter(&self) -> impl Iterator<Item = &Poly2> {
        std::iter::once(&self.leading).chain(self.tail.iter())
    }

    /// Fold the quotients back into a convergent (u, v) via the two-term
    /// continuant recurrence.
    pub fn evaluate(&self) -> Convergent {
        let mut u = self.leading.clone();
        let mut u_prev = Poly2::one();
        let mut v = Poly2::one();
        let mut v_prev = Poly2::zero();
        for q in &self.tail {
            let nu = &(q * &u) + &u_prev;
            let nv = &(q * &v) + &v_prev;
            u_prev = u;
            v_prev = v;
            u = nu;
            v = nv;
        }
        Convergent { u, v }
    }
}

impl fmt::Display for PartialQuotients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.leading)?;
        for (i, q) in self.tail.iter().enumerate() {
            if i == 0 {
                write!(f, "; {q}")?;
            } else {
                write!(f, ", {q}")?;
            }
        }
        write!(f, "]")
    }
}

/// Finite continued fraction of num/den by the Euclidean algorithm. Tail
/// quotients automatically have degree ≥ 1 because remainder degrees strictly
/// decrease.
pub fn expand_rational(num: &Poly2, den: &Poly2) -> Result<PartialQuotients> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (leading, mut rem) = num.divmod(den)?;
    let mut prev = den.clone();
    let mut tail = Vec::new();
    while !rem.is_zero() {
        let (q, r) = prev.divmod(&rem)?;
        debug_assert!(q.degree().unwrap_or(0) >= 1);
        tail.push(q);
        prev = rem;
        rem = r;
    }
    Ok(PartialQuotients { leading, tail })
}

/// Why a series expansion stopped.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExpansionStop {
    /// The remainder reached exact zero: the expansion is complete.
    Complete,
    /// The requested number of quotients was emitted.
    QuotientBudget,
    /// The window could no longer certify the next quotient.
    PrecisionExhausted,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeriesExpansion {
    pub quotients: PartialQuotients,
    pub stop: ExpansionStop,
}

impl SeriesExpansion {
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Expand a series into partial quotients. A quotient is emitted only when
/// the certified window pins it down completely; running out of window is a
/// reported stop, never a wrong quotient. `max_quotients` must be ≥ 1.
pub fn expand_series(x: &Series, max_quotients: usize) -> Result<SeriesExpansion> {
    assert!(max_quotients >= 1, "must request at least one quotient");
    let mut out: Vec<Poly2> = Vec::new();
    let mut cur = x.clone();
    let stop = loop {
        if out.len() == max_quotients {
            break ExpansionStop::QuotientBudget;
        }
        let q = match cur.polynomial_part() {
            Ok(q) => q,
            Err(_) => break ExpansionStop::PrecisionExhausted,
        };
        debug_assert!(out.is_empty() || q.degree().unwrap_or(0) >= 1);
        let frac = cur.add(&Series::from_poly(&q));
        out.push(q);
        match frac.leading() {
            Leading::Zero => break ExpansionStop::Complete,
            Leading::ZeroToPrecision(_) => break ExpansionStop::PrecisionExhausted,
            Leading::Nonzero(e) => {
                debug_assert!(e < 0);
                if frac.is_exact() {
                    // an exact fractional remainder is a rational tail: finish
                    // it off with the Euclidean algorithm
                    let (num, den) = frac.to_rational().expect("exact series");
                    let rest = expand_rational(&num, &den)?;
                    debug_assert!(rest.leading.is_zero());
                    let mut budget_hit = false;
                    for q in rest.tail {
                        if out.len() == max_quotients {
                            budget_hit = true;
                            break;
                        }
                        out.push(q);
                    }
                    break if budget_hit {
                        ExpansionStop::QuotientBudget
                    } else {
                        ExpansionStop::Complete
                    };
                }
                cur = frac.inverse()?;
            }
        }
    };
    let mut it = out.into_iter();
    let leading = it.next().ok_or(Error::PrecisionExhausted {
        context: "window cannot certify even the polynomial part",
    })?;
    Ok(SeriesExpansion {
        quotients: PartialQuotients { leading, tail: it.collect() },
        stop,
    })
}

/// The continued-fraction value of the morphism's fixed point, as a series
/// with `precision` certified coefficients: letters are consumed until the
/// convergent pins the window down, then the convergent is expanded.
pub fn fixed_point_cf_series(
    morphism: &Morphism,
    assign: &LetterAssignment,
    precision: usize,
) -> Result<Series> {
    if precision == 0 {
        return Err(Error::PrecisionTooSmall { required: 1 });
    }
    // each letter raises deg v by at least 1, so this prefix always suffices
    let word = morphism.fixed_point_prefix(precision + 10)?;
    let letters = word.letters();
    let target = precision + 8;
    let mut u = assign.value(letters[0]).clone();
    let mut u_prev = Poly2::one();
    let mut v = Poly2::one();
    let mut v_prev = Poly2::zero();
    for &l in &letters[1..] {
        let q = assign.value(l);
        let nu = &(q * &u) + &u_prev;
        let nv = &(q * &v) + &v_prev;
        u_prev = u;
        v_prev = v;
        u = nu;
        v = nv;
        if v.degree().unwrap_or(0) > target {
            break;
        }
    }
    debug_assert!(v.degree().unwrap_or(0) > target);
    Series::from_rational(&u, &v, precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Poly2 {
        s.parse().unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn worked_pair() -> LetterAssignment {
        LetterAssignment::new(p("t^3"), p("t^2+t+1")).unwrap()
    }

    /// Direct recursion ⟨W⟩ = w₁⟨W'⟩ + ⟨(W')'⟩ as an independent oracle.
    fn continuant_recursive(word: &Word, assign: &LetterAssignment) -> Poly2 {
        match word.len() {
            0 => Poly2::one(),
            1 => assign.value(word.letters()[0]).clone(),
            _ => {
                let tail = word.drop_first();
                let head = assign.value(word.letters()[0]);
                &(head * &continuant_recursive(&tail, assign))
                    + &continuant_recursive(&tail.drop_first(), assign)
            }
        }
    }

    fn random_word(rng: &mut impl Rng, len: usize) -> Word {
        Word::new(
            (0..len)
                .map(|_| if rng.random::<bool>() { crate::words::Letter::A } else { crate::words::Letter::B })
                .collect(),
        )
    }

    fn random_assignment(rng: &mut impl Rng, max_deg: usize) -> LetterAssignment {
        loop {
            let da = rng.random_range(1..=max_deg);
            let db = rng.random_range(1..=max_deg);
            let a = Poly2::from_words(vec![(rng.random::<u64>() & ((1 << da) - 1)) | (1 << da)]);
            let b = Poly2::from_words(vec![(rng.random::<u64>() & ((1 << db) - 1)) | (1 << db)]);
            if let Ok(assign) = LetterAssignment::new(a, b) {
                return assign;
            }
        }
    }

    #[test]
    fn continuant_base_cases() {
        let assign = worked_pair();
        assert_eq!(continuant(&Word::empty(), &assign), Poly2::one());
        assert_eq!(continuant(&w("a"), &assign), p("t^3"));
        assert_eq!(continuant(&w("b"), &assign), p("t^2+t+1"));
    }

    #[test]
    fn continuant_aba_is_a_squared_b() {
        let assign = worked_pair();
        let direct = continuant(&w("aba"), &assign);
        let expected = &assign.a().square() * assign.b();
        assert_eq!(direct, expected);
        assert_eq!(direct, p("t^8+t^7+t^6"));
        assert_eq!(direct, continuant_recursive(&w("aba"), &assign));
    }

    #[test]
    fn eval_cf_examples() {
        let assign = worked_pair();
        let c = eval_cf(&w("a"), &assign).unwrap();
        assert_eq!((c.u, c.v), (p("t^3"), Poly2::one()));

        // [t, t, t] = t^3/(t^2+1), hand-nested
        let tt = LetterAssignment::new(p("t"), p("t+1")).unwrap();
        let c = eval_cf(&w("aaa"), &tt).unwrap();
        assert_eq!((c.u, c.v), (p("t^3"), p("t^2+1")));

        let c = eval_cf(&w("aba"), &assign).unwrap();
        assert_eq!(c.u, &assign.a().square() * assign.b());
        assert_eq!(c.v, &(assign.a() * assign.b()) + &Poly2::one());

        assert_eq!(eval_cf(&Word::empty(), &assign), Err(Error::EmptyWord));
    }

    #[test]
    fn concat_identity_examples() {
        let assign = worked_pair();
        assert_eq!(
            concat_continuant(&Word::empty(), &w("ba"), &assign),
            continuant(&w("ba"), &assign)
        );
        assert_eq!(
            concat_continuant(&w("a"), &w("ba"), &assign),
            continuant(&w("aba"), &assign)
        );
        assert_eq!(
            concat_continuant(&w("ab"), &Word::empty(), &assign),
            continuant(&w("ab"), &assign)
        );
    }

    #[test]
    fn uv_sequence_first_terms() {
        let assign = worked_pair();
        let uv = uv_sequence(&assign, 3);
        assert_eq!((uv[0].u.clone(), uv[0].v.clone()), (p("t^3"), Poly2::one()));
        // u2 = b·a², v2 = b·a + 1
        assert_eq!(uv[1].u, p("t^8+t^7+t^6"));
        assert_eq!(uv[1].v, p("t^5+t^4+t^3+1"));
        // u3 = a·u2², v3 = a·u2·v2 + 1
        assert_eq!(uv[2].u, assign.a() * &uv[1].u.square());
        assert_eq!(uv[2].v, &(assign.a() * &(&uv[1].u * &uv[1].v)) + &Poly2::one());
    }

    #[test]
    fn uv_sequence_matches_direct_continuants() {
        for assign in [worked_pair(), LetterAssignment::new(p("t"), p("t+1")).unwrap()] {
            let uv = uv_sequence(&assign, 8);
            for (i, conv) in uv.iter().enumerate() {
                let wn = crate::words::w_n(i + 1);
                let direct = eval_cf(&wn, &assign).unwrap();
                assert_eq!(conv, &direct, "n = {}", i + 1);
            }
        }
    }

    #[test]
    fn expand_rational_examples() {
        let pq = expand_rational(&p("t^3"), &p("t^2+1")).unwrap();
        assert_eq!(pq.leading, p("t"));
        assert_eq!(pq.tail, vec![p("t"), p("t")]);
        assert_eq!(pq.to_string(), "[t; t, t]");

        let pq = expand_rational(&p("t^5+t^2"), &Poly2::one()).unwrap();
        assert_eq!(pq.leading, p("t^5+t^2"));
        assert!(pq.tail.is_empty());

        assert_eq!(expand_rational(&p("t"), &Poly2::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn expand_rational_recovers_word_letters() {
        // the convergent of W_3 = abaaaba expands back to its letter values
        let assign = worked_pair();
        let uv = uv_sequence(&assign, 3);
        let pq = expand_rational(&uv[2].u, &uv[2].v).unwrap();
        let expected: Vec<Poly2> = crate::words::w_n(3)
            .letters()
            .iter()
            .map(|&l| assign.value(l).clone())
            .collect();
        let got: Vec<Poly2> = pq.iter().cloned().collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn evaluate_inverts_expand() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let nbits = rng.random_range(1..12);
            let num = Poly2::from_words(vec![rng.random::<u64>() & ((1 << nbits) - 1)]);
            let den = Poly2::from_words(vec![(rng.random::<u64>() & ((1 << nbits) - 1)) | (1 << nbits)]);
            let pq = expand_rational(&num, &den).unwrap();
            let back = pq.evaluate();
            // equals num/den in lowest terms
            let g = num.gcd(&den);
            if num.is_zero() {
                assert!(back.u.is_zero());
                assert!(back.v.is_one());
            } else {
                assert_eq!(back.u, num.divmod(&g).unwrap().0);
                assert_eq!(back.v, den.divmod(&g).unwrap().0);
            }
        }
    }

    #[test]
    fn expand_series_matches_rational_route() {
        let x = Series::from_rational(&p("t^3"), &p("t^2+1"), 24).unwrap();
        let e = expand_series(&x, 16).unwrap();
        assert_eq!(e.quotients.leading, p("t"));
        assert_eq!(e.quotients.tail, vec![p("t"), p("t")]);
        // a window can never certify termination, only an exact series can
        assert_eq!(e.stop, ExpansionStop::PrecisionExhausted);

        // the same value as an exact series does terminate
        let exact = expand_rational(&p("t^3"), &p("t^2+1")).unwrap();
        assert_eq!(exact.iter().cloned().collect::<Vec<_>>(), vec![p("t"), p("t"), p("t")]);
    }

    #[test]
    fn expand_series_on_exact_polynomial() {
        let x = Series::from_poly(&p("t^4+t"));
        let e = expand_series(&x, 10).unwrap();
        assert_eq!(e.quotients.leading, p("t^4+t"));
        assert!(e.quotients.tail.is_empty());
        assert_eq!(e.stop, ExpansionStop::Complete);
    }

    #[test]
    fn expand_series_respects_budget_and_precision() {
        let assign = worked_pair();
        let x = fixed_point_cf_series(&Morphism::period_doubling(), &assign, 64).unwrap();
        let e = expand_series(&x, 5).unwrap();
        assert_eq!(e.stop, ExpansionStop::QuotientBudget);
        assert_eq!(e.len(), 5);
        // a generous budget runs the window dry instead of guessing
        let e = expand_series(&x, 1000).unwrap();
        assert_eq!(e.stop, ExpansionStop::PrecisionExhausted);
        assert!(e.len() > 5);
    }

    #[test]
    fn expanded_quotients_spell_the_fixed_point() {
        // first 2^8 - 1 quotients of the convergent of W_8 spell W_8
        let assign = worked_pair();
        let uv = uv_sequence(&assign, 8);
        let conv = &uv[7];
        let pq = expand_rational(&conv.u, &conv.v).unwrap();
        let expected: Vec<Poly2> = crate::words::w_n(8)
            .letters()
            .iter()
            .map(|&l| assign.value(l).clone())
            .collect();
        assert_eq!(pq.iter().cloned().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn fixed_point_series_agrees_with_deeper_run() {
        let assign = worked_pair();
        let m = Morphism::period_doubling();
        let shallow = fixed_point_cf_series(&m, &assign, 32).unwrap();
        let deep = fixed_point_cf_series(&m, &assign, 128).unwrap();
        assert!(shallow.agrees_on_known(&deep));
        assert_eq!(shallow.leading_exponent(), Some(3));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// determinant identity, characteristic-2 form:
        /// ⟨W⟩⟨(W')''⟩ + ⟨W'⟩⟨W''⟩ = 1 for |W| ≥ 2
        #[test]
        fn determinant_identity(seed in any::<u64>(), len in 2usize..12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let assign = random_assignment(&mut rng, 4);
            let word = random_word(&mut rng, len);
            let u = continuant(&word, &assign);
            let v = continuant(&word.drop_first(), &assign);
            let inner = continuant(&word.drop_first().drop_last(), &assign);
            let head = continuant(&word.drop_last(), &assign);
            prop_assert_eq!(&(&u * &inner) + &(&v * &head), Poly2::one());
        }

        #[test]
        fn mirror_identity(seed in any::<u64>(), len in 0usize..12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let assign = random_assignment(&mut rng, 4);
            let word = random_word(&mut rng, len);
            prop_assert_eq!(
                continuant(&word.reverse(), &assign),
                continuant(&word, &assign)
            );
        }

        #[test]
        fn concatenation_identity(seed in any::<u64>(), len in 0usize..10, cut in 0usize..10) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let assign = random_assignment(&mut rng, 4);
            let word = random_word(&mut rng, len);
            let cut = cut.min(len);
            let (x, y) = (
                Word::new(word.letters()[..cut].to_vec()),
                Word::new(word.letters()[cut..].to_vec()),
            );
            prop_assert_eq!(
                concat_continuant(&x, &y, &assign),
                continuant(&word, &assign)
            );
        }

        #[test]
        fn iterative_continuant_matches_recursion(seed in any::<u64>(), len in 0usize..10) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let assign = random_assignment(&mut rng, 4);
            let word = random_word(&mut rng, len);
            prop_assert_eq!(
                continuant(&word, &assign),
                continuant_recursive(&word, &assign)
            );
        }
    }
}
