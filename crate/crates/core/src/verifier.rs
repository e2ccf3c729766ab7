//! Theorem-level checks for the period-doubling continued fraction.
//!
//! The quartic relation A·x⁴ + B·x³ + C·x² + 1 = 0 with
//!
//!   A = ab + b² + 1,   B = ab(a+b),   C = ab
//!
//! annihilates the continued fraction whose partial quotients follow the
//! period-doubling sequence on (a, b). Two independent verification routes
//! are implemented: the exact route checks X_n + 1 = ε_{n-1}·u_n²·(a+b) for
//! the convergents of the folded words together with a strictly growing
//! valuation gap, and the series route evaluates the quartic at a truncated
//! expansion and demands an all-zero certified window. The differential
//! criteria — the Riccati equation (ab(a+b)·x)' = (ab)'(1 + x²) and the
//! Baum–Sweet degree-one characterization — round out the checks.

use crate::contfrac::{expand_series, fixed_point_cf_series, uv_sequence, Convergent};
use crate::error::{Error, Result};
use crate::gf2poly::Poly2;
use crate::laurent::{Leading, Series};
use crate::words::{epsilon, Letter, LetterAssignment, NamedSequence};
use std::fmt;

/// One verification step: name, parameters, outcome and a witness rendered in
/// the polynomial grammar.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckRecord {
    pub check: String,
    pub params: String,
    pub pass: bool,
    pub witness: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn add(&mut self, check: &str, params: String, pass: bool, witness: String) {
        self.records.push(CheckRecord { check: check.to_string(), params, pass, witness });
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(
                f,
                "{} {} [{}] {}",
                if r.pass { "PASS" } else { "FAIL" },
                r.check,
                r.params,
                r.witness
            )?;
        }
        Ok(())
    }
}

/// The quartic A·x⁴ + B·x³ + C·x² + 1 attached to the assignment that
/// produced it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Quartic {
    /// coefficient of x⁴: ab + b² + 1
    pub c4: Poly2,
    /// coefficient of x³: ab(a+b)
    pub c3: Poly2,
    /// coefficient of x²: ab
    pub c2: Poly2,
    assign: LetterAssignment,
}

/// The closed-form coefficients for the assignment.
pub fn build_quartic(assign: &LetterAssignment) -> Quartic {
    let (a, b) = (assign.a(), assign.b());
    let ab = a * b;
    Quartic {
        c4: &(&ab + &b.square()) + &Poly2::one(),
        c3: &ab * &(a + b),
        c2: ab,
        assign: assign.clone(),
    }
}

impl Quartic {
    /// Assemble a quartic with explicit coefficients (for sensitivity
    /// experiments that perturb A, B or C).
    pub fn with_coefficients(assign: &LetterAssignment, c4: Poly2, c3: Poly2, c2: Poly2) -> Self {
        Quartic { c4, c3, c2, assign: assign.clone() }
    }

    pub fn assignment(&self) -> &LetterAssignment {
        &self.assign
    }

    /// A·u⁴ + B·u³v + C·u²v² + v⁴, term by term.
    pub fn x_n_value(&self, conv: &Convergent) -> Poly2 {
        let u2 = conv.u.square();
        let v2 = conv.v.square();
        let u3v = &(&u2 * &conv.u) * &conv.v;
        let t4 = &self.c4 * &u2.square();
        let t3 = &self.c3 * &u3v;
        let t2 = &self.c2 * &(&u2 * &v2);
        &(&(&t4 + &t3) + &t2) + &v2.square()
    }

    /// The same numerator through Horner's scheme,
    /// ((A·u + B·v)·u + C·v²)·u² + v⁴ — an independent computation route.
    fn x_n_horner(&self, conv: &Convergent) -> Poly2 {
        let v2 = conv.v.square();
        let inner = &(&(&self.c4 * &conv.u) + &(&self.c3 * &conv.v)) * &conv.u;
        let inner = &inner + &(&self.c2 * &v2);
        &(&inner * &conv.u.square()) + &v2.square()
    }

    /// Evaluate A·x⁴ + B·x³ + C·x² + 1 in series arithmetic.
    pub fn eval_series(&self, x: &Series) -> Series {
        let x2 = x.square();
        let x3 = x2.mul(x);
        let x4 = x2.square();
        Series::from_poly(&self.c4)
            .mul(&x4)
            .add(&Series::from_poly(&self.c3).mul(&x3))
            .add(&Series::from_poly(&self.c2).mul(&x2))
            .add(&Series::from_poly(&Poly2::one()))
    }
}

/// X_n = A·u_n⁴ + B·u_n³v_n + C·u_n²v_n² + v_n⁴ for the n-th convergent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct XnValue {
    pub n: usize,
    pub value: Poly2,
}

pub fn x_n(assign: &LetterAssignment, n: usize) -> XnValue {
    assert!(n >= 1);
    let q = build_quartic(assign);
    let uv = uv_sequence(assign, n);
    XnValue { n, value: q.x_n_value(&uv[n - 1]) }
}

fn params_of(assign: &LetterAssignment) -> String {
    format!("a={} b={}", assign.a(), assign.b())
}

/// Polynomials too long for a report line collapse to a degree summary.
fn shown(p: &Poly2) -> String {
    let s = p.to_string();
    if s.len() <= 96 {
        s
    } else {
        format!("<degree {} polynomial>", p.degree().unwrap_or(0))
    }
}

/// Exact route: for each n ≤ n_max check X_n + 1 = ε_{n-1}·u_n²·(a+b) (term
/// route and Horner route separately) and that the valuation gap
/// 4·deg v_n − deg X_n strictly increases.
pub fn check_theorem_exact(assign: &LetterAssignment, n_max: usize) -> Report {
    check_theorem_exact_for(&build_quartic(assign), n_max)
}

pub fn check_theorem_exact_for(q: &Quartic, n_max: usize) -> Report {
    let assign = q.assignment();
    let a_plus_b = assign.a() + assign.b();
    let uv = uv_sequence(assign, n_max);
    let mut report = Report::new();
    let mut gaps: Vec<Option<i64>> = Vec::new();
    for (idx, conv) in uv.iter().enumerate() {
        let n = idx + 1;
        let params = format!("{} n={}", params_of(assign), n);
        let rhs = &(assign.value(epsilon(n - 1)) * &conv.u.square()) * &a_plus_b;
        let xn = q.x_n_value(conv);
        let x2_holds = &xn + &Poly2::one() == rhs;
        report.add(
            "eq_x2",
            params.clone(),
            x2_holds,
            if x2_holds {
                format!("X_{n}+1 = {}", shown(&rhs))
            } else {
                format!("X_{n}+1 = {}, expected {}", shown(&(&xn + &Poly2::one())), shown(&rhs))
            },
        );
        let horner = q.x_n_horner(conv);
        let quotient_holds = horner == &rhs + &Poly2::one();
        report.add(
            "quotient_form",
            params.clone(),
            quotient_holds,
            if quotient_holds {
                format!("P(u_{n}/v_{n}) has numerator X_{n} and denominator v_{n}^4")
            } else {
                format!("numerator mismatch: {} vs {}", shown(&horner), shown(&(&rhs + &Poly2::one())))
            },
        );
        gaps.push(match xn.degree() {
            Some(dx) => Some(4 * conv.v.degree().unwrap_or(0) as i64 - dx as i64),
            None => None,
        });
    }
    let increasing = gaps.iter().all(|g| g.is_some())
        && gaps.windows(2).all(|w| w[0].unwrap() < w[1].unwrap());
    let shown: Vec<String> = gaps
        .iter()
        .map(|g| g.map_or("deg(0)".to_string(), |v| v.to_string()))
        .collect();
    report.add(
        "valuation_gap",
        format!("{} n_max={}", params_of(assign), n_max),
        increasing,
        format!("g(1..{}) = {}", n_max, shown.join(", ")),
    );
    report
}

/// Smallest n whose valuation gap exceeds precision + 16, from the degree
/// recurrences alone.
fn series_check_depth(assign: &LetterAssignment, precision: usize) -> usize {
    let da = assign.a().degree().unwrap() as i64;
    let db = assign.b().degree().unwrap() as i64;
    let dab = (assign.a() + assign.b()).degree().unwrap_or(0) as i64;
    let deg_eps = |n: usize| match epsilon(n) {
        Letter::A => da,
        Letter::B => db,
    };
    let mut du = da;
    let mut dv = 0i64;
    let mut n = 1usize;
    loop {
        let gap = 4 * dv - (deg_eps(n - 1) + 2 * du + dab);
        if gap > precision as i64 + 16 {
            return n;
        }
        let e = deg_eps(n);
        dv += e + du;
        du = e + 2 * du;
        n += 1;
    }
}

/// Series route: build the expansion to `precision` certified coefficients
/// from a convergent deep enough that the gap covers the window, evaluate the
/// quartic and require every certified coefficient to vanish.
pub fn check_theorem_series(assign: &LetterAssignment, precision: usize) -> Result<Report> {
    check_theorem_series_for(&build_quartic(assign), precision)
}

pub fn check_theorem_series_for(q: &Quartic, precision: usize) -> Result<Report> {
    if precision < 32 {
        return Err(Error::PrecisionTooSmall { required: 32 });
    }
    let assign = q.assignment();
    let n = series_check_depth(assign, precision);
    let uv = uv_sequence(assign, n);
    let conv = uv.last().expect("n >= 1");
    let alpha = Series::from_rational(&conv.u, &conv.v, precision)?;
    let value = q.eval_series(&alpha);
    let mut report = Report::new();
    let (pass, witness) = describe_vanishing("P(α)", &value);
    report.add(
        "series_vanishing",
        format!("{} precision={} n={}", params_of(assign), precision, n),
        pass,
        witness,
    );
    Ok(report)
}

fn describe_vanishing(label: &str, value: &Series) -> (bool, String) {
    match value.leading() {
        Leading::Zero => (true, format!("{label} is exactly zero")),
        Leading::ZeroToPrecision(lo) => (
            true,
            format!("{label} vanishes on the whole certified window (floor t^{lo})"),
        ),
        Leading::Nonzero(e) => (false, format!("{label} has a nonzero coefficient at t^{e}")),
    }
}

/// (ab(a+b)·x)' + (ab)'·(1 + x²) on the certified window.
pub fn riccati_residual(x: &Series, assign: &LetterAssignment) -> Series {
    let ab = assign.a() * assign.b();
    let b_coef = &ab * &(assign.a() + assign.b());
    let lhs = Series::from_poly(&b_coef).mul(x).derivative();
    let rhs = Series::from_poly(&ab.derivative())
        .mul(&Series::from_poly(&Poly2::one()).add(&x.square()));
    lhs.add(&rhs)
}

/// Build the named sequence's continued fraction and test the Riccati
/// residual for an all-zero window.
pub fn check_riccati(
    assign: &LetterAssignment,
    seq: NamedSequence,
    precision: usize,
) -> Result<Report> {
    let x = fixed_point_cf_series(&seq.morphism(), assign, precision)?;
    let residual = riccati_residual(&x, assign);
    let mut report = Report::new();
    let (pass, witness) = describe_vanishing("(ab(a+b)x)' + (ab)'(1+x²)", &residual);
    report.add(
        "riccati_residual",
        format!("{} seq={} precision={}", params_of(assign), seq, precision),
        pass,
        witness,
    );
    Ok(report)
}

/// The polynomial identities behind the Riccati reduction: A' = C' = (ab)'.
pub fn riccati_from_quartic(q: &Quartic) -> Report {
    let assign = q.assignment();
    let da = q.c4.derivative();
    let dc = q.c2.derivative();
    let dab = (assign.a() * assign.b()).derivative();
    let mut report = Report::new();
    report.add(
        "riccati_coeff_a_eq_c",
        params_of(assign),
        da == dc,
        format!("A' = {da}, C' = {dc}"),
    );
    report.add(
        "riccati_coeff_c_eq_ab",
        params_of(assign),
        dc == dab,
        format!("C' = {dc}, (ab)' = {dab}"),
    );
    report
}

/// The three degree-one-quotient checks for a fractional series x:
/// (i) (x·t(t+1))' + x² + 1 vanishes on the window, (ii) the witness
/// β = sqrt((x² + tx + 1)/(1+t)) exists and is fractional, (iii) every
/// certified partial quotient has degree one.
pub fn baum_sweet_check(x: &Series) -> Result<Report> {
    if !x.is_fractional() {
        return Err(Error::NotFractional);
    }
    let mut report = Report::new();
    let params = format!("width={}", x.width());

    let t_t1 = Poly2::from_exponents(&[2, 1]); // t(t+1)
    let residual = Series::from_poly(&t_t1)
        .mul(x)
        .derivative()
        .add(&x.square())
        .add(&Series::from_poly(&Poly2::one()));
    let (pass, witness) = describe_vanishing("(x·t(t+1))' + x² + 1", &residual);
    report.add("baum_sweet_residual", params.clone(), pass, witness);

    let numerator = x
        .square()
        .add(&Series::from_poly(&Poly2::t()).mul(x))
        .add(&Series::from_poly(&Poly2::one()));
    let inv_1t = Series::from_rational(&Poly2::one(), &"t+1".parse().unwrap(), x.width().max(8) + 8)?;
    let quotient = numerator.mul(&inv_1t);
    let (pass, witness) = match quotient.sqrt() {
        Ok(beta) => {
            if beta.is_fractional() {
                (true, format!("β = {}", beta_summary(&beta)))
            } else {
                (false, "β exists but is not fractional".to_string())
            }
        }
        Err(_) => (false, "(x² + tx + 1)/(1+t) is not a square on its window".to_string()),
    };
    report.add("baum_sweet_beta", params.clone(), pass, witness);

    let expansion = expand_series(x, x.width().max(4))?;
    debug_assert!(expansion.quotients.leading.is_zero());
    let bad = expansion
        .quotients
        .tail
        .iter()
        .enumerate()
        .find(|(_, q)| q.degree() != Some(1));
    let certified = expansion.quotients.tail.len();
    let (pass, witness) = match bad {
        None => (
            true,
            format!("{certified} certified partial quotients, all of degree 1 (stop: {:?})", expansion.stop),
        ),
        Some((i, q)) => (
            false,
            format!("partial quotient #{} is {} (degree {:?})", i + 1, q, q.degree()),
        ),
    };
    report.add("baum_sweet_quotients", params, pass, witness);
    Ok(report)
}

fn beta_summary(beta: &Series) -> String {
    match beta.leading() {
        Leading::Nonzero(e) => format!("series with leading exponent {e}"),
        Leading::ZeroToPrecision(lo) => format!("zero to precision t^{lo}"),
        Leading::Zero => "0".to_string(),
    }
}
