//! Relation mining: find polynomial relations Σ cᵢ(t)·xⁱ = 0 satisfied by a
//! truncated series, by exact linear algebra over F₂.
//!
//! Each unknown c_{i,j} multiplies the monomial tʲ·xⁱ; one linear constraint
//! per certified exponent of the combined window forces the coefficient there
//! to vanish. The null space of the resulting bit matrix is computed by
//! Gauss–Jordan elimination on packed words. A candidate must out-survive its
//! unknown count by the configured certification margin and is re-certified
//! by evaluating the relation at the series through ordinary window
//! arithmetic, independent of the solve.

use crate::bits;
use crate::error::{Error, Result};
use crate::gf2poly::Poly2;
use crate::laurent::{Leading, Series};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MinerConfig {
    /// Highest power of x allowed in a relation.
    pub max_deg_x: usize,
    /// Highest t-degree allowed in the coefficients.
    pub max_deg_coeff: usize,
    /// Extra vanishing coefficients demanded beyond the unknown count.
    pub certification_margin: usize,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig { max_deg_x: 4, max_deg_coeff: 8, certification_margin: 64 }
    }
}

/// A certified relation Σ cᵢ·xⁱ = 0, content-normalized (gcd of the
/// coefficients is 1) with a nonzero leading coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Relation {
    /// Index i holds the coefficient of xⁱ; length is degree_x + 1.
    pub coefficients: Vec<Poly2>,
    pub degree_x: usize,
    /// Floor of the all-zero evaluation window; None when the residual is
    /// exactly zero.
    pub residual_valuation: Option<i64>,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        write!(f, " = 0")
    }
}

/// Basis of the null space of the rows (each row a packed bit vector over
/// `ncols` columns).
fn null_space_basis(mut rows: Vec<Vec<u64>>, ncols: usize) -> Vec<Vec<u64>> {
    let nrows = rows.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut rank = 0usize;
    for c in 0..ncols {
        let Some(pr) = (rank..nrows).find(|&i| bits::get(&rows[i], c)) else {
            continue;
        };
        rows.swap(rank, pr);
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && bits::get(row, c) {
                bits::xor_into(row, &pivot_row);
            }
        }
        pivot_of_col[c] = Some(rank);
        rank += 1;
    }
    let words = bits::words_for(ncols);
    let mut basis = Vec::new();
    for f in 0..ncols {
        if pivot_of_col[f].is_some() {
            continue;
        }
        let mut v = vec![0u64; words];
        bits::set(&mut v, f);
        for c in 0..ncols {
            if let Some(i) = pivot_of_col[c] {
                if bits::get(&rows[i], f) {
                    bits::set(&mut v, c);
                }
            }
        }
        basis.push(v);
    }
    basis
}

struct Linearization {
    powers: Vec<Series>,
}

impl Linearization {
    fn new(x: &Series, max_deg_x: usize) -> Self {
        let mut powers = Vec::with_capacity(max_deg_x + 1);
        powers.push(Series::from_poly(&Poly2::one()));
        if max_deg_x >= 1 {
            powers.push(x.clone());
        }
        for i in 2..=max_deg_x {
            // even powers via Frobenius keep the deepest window
            let p = if i % 2 == 0 { powers[i / 2].square() } else { powers[i - 1].mul(x) };
            powers.push(p);
        }
        Linearization { powers }
    }

    /// Highest exponent any monomial tʲ·xⁱ (i ≤ d, j ≤ m) can touch.
    fn row_top(&self, d: usize, m: usize) -> Option<i64> {
        self.powers[..=d]
            .iter()
            .filter_map(|p| p.upper_bound())
            .max()
            .map(|u| u + m as i64)
    }

    /// Lowest exponent at which every monomial of the (d, m) system is
    /// certified.
    fn row_floor(&self, d: usize, m: usize) -> Option<i64> {
        let windowed = self.powers[..=d].iter().filter_map(|p| p.known_floor()).max();
        match windowed {
            Some(k) => Some(k + m as i64),
            None => {
                // everything exact: constraints stop mattering below the
                // lowest content exponent
                self.powers[..=d]
                    .iter()
                    .filter_map(|p| {
                        p.leading_exponent().map(|hi| hi - p.width() as i64 + 1)
                    })
                    .min()
                    .or(Some(0))
            }
        }
    }

    /// Null-space basis of the (d, m) system, or None when it is trivial.
    fn solve(&self, d: usize, m: usize) -> Option<Vec<Vec<u64>>> {
        let ncols = (d + 1) * (m + 1);
        let top = self.row_top(d, m)?;
        let floor = self.row_floor(d, m)?;
        if top < floor {
            return None;
        }
        let words = bits::words_for(ncols);
        let mut rows = Vec::with_capacity((top - floor + 1) as usize);
        for e in (floor..=top).rev() {
            let mut row = vec![0u64; words];
            for (i, p) in self.powers[..=d].iter().enumerate() {
                for j in 0..=m {
                    let coeff = p
                        .coeff(e - j as i64)
                        .expect("row exponent within every certified window");
                    if coeff {
                        bits::set(&mut row, i * (m + 1) + j);
                    }
                }
            }
            rows.push(row);
        }
        let basis = null_space_basis(rows, ncols);
        (!basis.is_empty()).then_some(basis)
    }

    fn candidates(&self, d: usize, m: usize, basis: Vec<Vec<u64>>) -> Vec<Vec<Poly2>> {
        let unpack = |v: &[u64]| -> Vec<Poly2> {
            (0..=d)
                .map(|i| {
                    let mut words = vec![0u64; bits::words_for(m + 1)];
                    for j in 0..=m {
                        if bits::get(v, i * (m + 1) + j) {
                            bits::set(&mut words, j);
                        }
                    }
                    Poly2::from_words(words)
                })
                .collect()
        };
        let mut cands: Vec<Vec<Poly2>> = if basis.len() <= 10 {
            // enumerate the whole null space to honor the minimality order
            let words = bits::words_for((d + 1) * (m + 1));
            (1u64..1 << basis.len())
                .map(|mask| {
                    let mut v = vec![0u64; words];
                    for (b, base) in basis.iter().enumerate() {
                        if mask >> b & 1 == 1 {
                            bits::xor_into(&mut v, base);
                        }
                    }
                    unpack(&v)
                })
                .collect()
        } else {
            basis.iter().map(|v| unpack(v)).collect()
        };
        cands.sort_by(|x, y| {
            let key = |c: &[Poly2]| {
                (
                    c.iter().rev().position(|q| !q.is_zero()).map(|k| c.len() - k),
                    c.iter().filter_map(|q| q.degree()).max(),
                )
            };
            key(x).cmp(&key(y)).then_with(|| x.cmp(y))
        });
        cands
    }

    /// Evaluate Σ cᵢ·xⁱ through series arithmetic.
    fn evaluate(&self, coefficients: &[Poly2]) -> Series {
        let mut acc = Series::zero();
        for (i, c) in coefficients.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&Series::from_poly(c).mul(&self.powers[i]));
            }
        }
        acc
    }
}

fn content_normalize(mut coefficients: Vec<Poly2>) -> Vec<Poly2> {
    let mut g = Poly2::zero();
    for c in &coefficients {
        g = g.gcd(c);
    }
    if !g.is_zero() && !g.is_one() {
        for c in coefficients.iter_mut() {
            let (q, r) = c.divmod(&g).expect("nonzero gcd");
            debug_assert!(r.is_zero());
            *c = q;
        }
    }
    coefficients
}

/// Search for the minimal relation the window supports: smallest degree in
/// x first, then smallest coefficient degree bound. Returns None when the
/// full system has a trivial null space or no candidate survives
/// certification.
pub fn mine(x: &Series, cfg: &MinerConfig) -> Result<Option<Relation>> {
    if cfg.max_deg_x == 0 {
        return Err(Error::InvalidConfig { reason: "max_deg_x must be >= 1" });
    }
    if cfg.certification_margin == 0 {
        return Err(Error::InvalidConfig { reason: "certification_margin must be >= 1" });
    }
    let lin = Linearization::new(x, cfg.max_deg_x);
    let unknowns = (cfg.max_deg_x + 1) * (cfg.max_deg_coeff + 1);

    if !x.is_exact() {
        let available = match (
            lin.row_top(cfg.max_deg_x, cfg.max_deg_coeff),
            lin.row_floor(cfg.max_deg_x, cfg.max_deg_coeff),
        ) {
            (Some(top), Some(floor)) => (top - floor + 1).max(0) as usize,
            _ => 0,
        };
        let required = unknowns + cfg.certification_margin;
        if available < required {
            return Err(Error::WindowTooSmall { required, available });
        }
    }

    // a trivial null space at the full bounds rules out every sub-system
    // (sub-system rows are a superset after embedding)
    if lin.solve(cfg.max_deg_x, cfg.max_deg_coeff).is_none() {
        return Ok(None);
    }

    for d in 1..=cfg.max_deg_x {
        if lin.solve(d, cfg.max_deg_coeff).is_none() {
            continue;
        }
        // nontriviality is monotone in the coefficient bound
        let mut lo = 0usize;
        let mut hi = cfg.max_deg_coeff;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if lin.solve(d, mid).is_some() {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        for m in lo..=cfg.max_deg_coeff {
            let Some(basis) = lin.solve(d, m) else { continue };
            for cand in lin.candidates(d, m, basis) {
                let coefficients = content_normalize(cand);
                let degree_x = match coefficients.iter().rposition(|c| !c.is_zero()) {
                    Some(k) => k,
                    None => continue,
                };
                let mut coefficients = coefficients;
                coefficients.truncate(degree_x + 1);
                // independent certification: the relation must vanish on the
                // full evaluation window, which can reach deeper than the
                // solved rows
                match lin.evaluate(&coefficients).leading() {
                    Leading::Zero => {
                        return Ok(Some(Relation {
                            coefficients,
                            degree_x,
                            residual_valuation: None,
                        }))
                    }
                    Leading::ZeroToPrecision(k) => {
                        return Ok(Some(Relation {
                            coefficients,
                            degree_x,
                            residual_valuation: Some(k),
                        }))
                    }
                    Leading::Nonzero(_) => continue,
                }
            }
        }
    }
    Ok(None)
}

/// Bounded search for a rational value: a relation c₁·x + c₀ = 0 gives
/// x = c₀/c₁.
pub fn rational_root_search(x: &Series, max_deg: usize) -> Result<Option<(Poly2, Poly2)>> {
    let cfg = MinerConfig {
        max_deg_x: 1,
        max_deg_coeff: max_deg,
        certification_margin: MinerConfig::default().certification_margin,
    };
    Ok(mine(x, &cfg)?.and_then(|rel| {
        if rel.degree_x == 1 {
            let mut it = rel.coefficients.into_iter();
            let c0 = it.next().unwrap();
            let c1 = it.next().unwrap();
            Some((c0, c1))
        } else {
            None
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contfrac::fixed_point_cf_series;
    use crate::verifier::build_quartic;
    use crate::words::{LetterAssignment, Morphism};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> Poly2 {
        s.parse().unwrap()
    }

    fn worked_pair() -> LetterAssignment {
        LetterAssignment::new(p("t^3"), p("t^2+t+1")).unwrap()
    }

    fn pd_series(assign: &LetterAssignment, precision: usize) -> Series {
        fixed_point_cf_series(&Morphism::period_doubling(), assign, precision).unwrap()
    }

    #[test]
    fn recovers_worked_pair_quartic() {
        let assign = worked_pair();
        let x = pd_series(&assign, 256);
        let cfg = MinerConfig { max_deg_x: 4, max_deg_coeff: 8, certification_margin: 64 };
        let rel = mine(&x, &cfg).unwrap().expect("quartic relation");
        let q = build_quartic(&assign);
        assert_eq!(rel.degree_x, 4);
        assert_eq!(
            rel.coefficients,
            vec![Poly2::one(), Poly2::zero(), q.c2, q.c3, q.c4]
        );
        assert!(rel.residual_valuation.is_some());
    }

    #[test]
    fn no_quadratic_relation() {
        let assign = worked_pair();
        let x = pd_series(&assign, 256);
        let cfg = MinerConfig { max_deg_x: 2, max_deg_coeff: 8, certification_margin: 64 };
        assert_eq!(mine(&x, &cfg).unwrap(), None);
    }

    #[test]
    fn window_too_small_is_reported() {
        let assign = worked_pair();
        let x = pd_series(&assign, 64);
        let cfg = MinerConfig { max_deg_x: 4, max_deg_coeff: 12, certification_margin: 64 };
        match mine(&x, &cfg) {
            Err(Error::WindowTooSmall { required, available }) => {
                assert_eq!(required, 5 * 13 + 64);
                assert!(available < required);
            }
            other => panic!("expected WindowTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn rational_root_of_rational_series() {
        let x = Series::from_rational(&p("t^3"), &p("t^2+1"), 128).unwrap();
        let (num, den) = rational_root_search(&x, 10).unwrap().expect("rational witness");
        assert_eq!((num, den), (p("t^3"), p("t^2+1")));
    }

    #[test]
    fn rational_root_of_polynomial_series() {
        let q = p("t^4+t+1");
        let x = Series::from_poly(&q);
        let (num, den) = rational_root_search(&x, 6).unwrap().expect("polynomial witness");
        assert_eq!((num, den), (q, Poly2::one()));
    }

    #[test]
    fn no_rational_root_for_pd_series() {
        let assign = worked_pair();
        let x = pd_series(&assign, 256);
        assert_eq!(rational_root_search(&x, 10).unwrap(), None);
    }

    #[test]
    fn random_series_yield_no_relation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let cfg = MinerConfig::default();
        let mut found = 0;
        for _ in 0..100 {
            let mut words = vec![0u64; 4];
            for w in words.iter_mut() {
                *w = rng.random();
            }
            let x = Series::from_rational(&Poly2::from_words(words), &Poly2::monomial(256), 255)
                .unwrap();
            if mine(&x, &cfg).unwrap().is_some() {
                found += 1;
            }
        }
        assert!(found <= 1, "{found}/100 spurious relations");
    }

    #[test]
    fn normalization_is_idempotent() {
        let g = p("t^2+t");
        let coeffs = vec![&p("t+1") * &g, Poly2::zero(), &p("t^3") * &g];
        let once = content_normalize(coeffs);
        let twice = content_normalize(once.clone());
        assert_eq!(once, twice);
        assert_eq!(once, vec![p("t+1"), Poly2::zero(), p("t^3")]);
    }

    #[test]
    fn mined_relation_matches_closed_form_for_small_pairs() {
        // a slice of the degree-sum ≤ 7 regression, full sweep in acceptance
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pairs = LetterAssignment::enumerate_pairs(5);
        let cfg = MinerConfig { max_deg_x: 4, max_deg_coeff: 13, certification_margin: 64 };
        for _ in 0..12 {
            let assign = &pairs[rng.random_range(0..pairs.len())];
            let x = pd_series(assign, 192);
            let rel = mine(&x, &cfg).unwrap().expect("relation");
            let q = build_quartic(assign);
            assert_eq!(
                rel.coefficients,
                vec![Poly2::one(), Poly2::zero(), q.c2.clone(), q.c3.clone(), q.c4.clone()],
                "pair a={} b={}",
                assign.a(),
                assign.b()
            );
        }
    }

    #[test]
    fn thue_morse_relation_is_found_and_riccati_consistent() {
        // the Thue-Morse continued fraction is also algebraic of degree 4;
        // its minimal relations have five terms. The mined relation must
        // certify, and the same series must satisfy the Riccati equation.
        use crate::verifier::riccati_residual;
        use crate::laurent::Leading;
        for (a, b, dc) in [("t", "t+1", 8), ("t^2", "t+1", 12), ("t^2+t", "t^3", 16)] {
            let assign = LetterAssignment::new(p(a), p(b)).unwrap();
            let x = fixed_point_cf_series(&Morphism::thue_morse(), &assign, 256).unwrap();
            let cfg = MinerConfig { max_deg_x: 4, max_deg_coeff: dc, certification_margin: 64 };
            let rel = mine(&x, &cfg).unwrap().unwrap_or_else(|| panic!("no relation for ({a}, {b})"));
            assert_eq!(rel.degree_x, 4, "({a}, {b})");
            assert!(rel.residual_valuation.is_some());
            assert!(matches!(
                riccati_residual(&x, &assign).leading(),
                Leading::Zero | Leading::ZeroToPrecision(_)
            ));
        }
    }

    #[test]
    fn relation_display() {
        let rel = Relation {
            coefficients: vec![Poly2::one(), Poly2::zero(), p("t^2+t")],
            degree_x: 2,
            residual_valuation: Some(-40),
        };
        assert_eq!(rel.to_string(), "(t^2+t)*x^2 + (1) = 0");
    }

    #[test]
    fn invalid_config_is_rejected() {
        let x = Series::from_poly(&p("t"));
        assert!(matches!(
            mine(&x, &MinerConfig { max_deg_x: 0, max_deg_coeff: 4, certification_margin: 4 }),
            Err(Error::InvalidConfig { .. })
        ));
        assert!(matches!(
            mine(&x, &MinerConfig { max_deg_x: 2, max_deg_coeff: 4, certification_margin: 0 }),
            Err(Error::InvalidConfig { .. })
        ));
    }
}
