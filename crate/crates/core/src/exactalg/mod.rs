//! Exact arithmetic: rationals, univariate and sparse multivariate Laurent
//! polynomials, and the handful of combinatorial numbers the pipeline needs.
//!
//! Nothing in this module touches floating point.

mod laurent;
mod unipoly;

pub use laurent::{Exponents, MultiLaurent};
pub use unipoly::{UniPoly, UniPolyK};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// `p/q`, or just `p` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Inverse of [`format_rational`]; accepts `p`, `-p` and `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            (!q.is_zero()).then(|| Rational::new(p, q))
        }
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Generalized harmonic number `H^{(r)}_m = sum_{i=1..m} i^{-r}`.
pub fn harmonic(r: u32, m: u64) -> Rational {
    let mut acc = Rational::zero();
    for i in 1..=m {
        acc += Rational::new(BigInt::one(), num_traits::pow(BigInt::from(i), r as usize));
    }
    acc
}

/// Bernoulli numbers `B_0 ..= B_m` with `B_1 = -1/2`.
///
/// Uses the Akiyama-Tanigawa transform, which natively produces `B_1 = +1/2`;
/// the sign of that single entry is flipped afterwards.
pub fn bernoulli_table(m: usize) -> Vec<Rational> {
    let mut a: Vec<Rational> = Vec::with_capacity(m + 1);
    let mut out = Vec::with_capacity(m + 1);
    for i in 0..=m {
        a.push(Rational::new(BigInt::one(), BigInt::from(i + 1)));
        for j in (1..=i).rev() {
            let d = &a[j - 1] - &a[j];
            a[j - 1] = d * BigInt::from(j);
        }
        out.push(a[0].clone());
    }
    if m >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

pub fn bernoulli(m: usize) -> Rational {
    bernoulli_table(m).pop().expect("table is non-empty")
}

/// `binom(k + N - 1, N - 1) = (k+1)(k+2)...(k+N-1) / (N-1)!` as a polynomial in `k`.
pub fn binomial_poly(pole_order: u32) -> Result<UniPolyK> {
    if pole_order == 0 {
        return Err(Error::OutOfRange("binomial_poly requires N >= 1".into()));
    }
    let mut p = UniPoly::one();
    for i in 1..pole_order {
        p = &p * &UniPoly::linear(int(i as i64));
    }
    let denom = Rational::from_integer(factorial(pole_order as u64 - 1));
    Ok(p.scale(&denom.recip()))
}

/// Expands `P(1 - y_1, ..., 1 - y_n)`.
pub fn substitute_one_minus(p: &MultiLaurent) -> Result<MultiLaurent> {
    if !p.is_polynomial() {
        return Err(Error::NotPolynomial);
    }
    Ok(one_minus_expand(p, None))
}

/// Like [`substitute_one_minus`] but discards every term of total degree
/// above `max_degree`. Used where only the low-order part matters.
pub(crate) fn substitute_one_minus_truncated(p: &MultiLaurent, max_degree: i64) -> MultiLaurent {
    one_minus_expand(p, Some(max_degree))
}

fn one_minus_expand(p: &MultiLaurent, max_degree: Option<i64>) -> MultiLaurent {
    let n = p.nvars();
    let mut cur = p.clone();
    // Substitute one variable at a time; positions < i already hold y-exponents.
    for i in 0..n {
        let mut next = MultiLaurent::zero(n);
        for (e, c) in cur.terms() {
            let done: i64 = e[..i].iter().map(|&x| x as i64).sum();
            let d = e[i] as u64;
            let mut row = BigInt::one();
            for s in 0..=d {
                if let Some(m) = max_degree {
                    if done + s as i64 > m {
                        break;
                    }
                }
                let mut f = e.clone();
                f[i] = s as i32;
                let sign = if s % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                next.add_term(f, c * Rational::from_integer(&row * sign));
                row = row * (d - s) / (s + 1);
            }
        }
        cur = next;
    }
    cur
}

/// `(x_1 ... x_n)^m * P(1/x_1, ..., 1/x_n)`.
pub fn invert_substitute(p: &MultiLaurent, m: i32) -> MultiLaurent {
    MultiLaurent::from_terms(
        p.nvars(),
        p.terms().map(|(e, c)| (e.iter().map(|&x| m - x).collect(), c.clone())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> MultiLaurent {
        MultiLaurent::var(n, i)
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(1, 1), int(1));
        assert_eq!(harmonic(1, 2), rat(3, 2));
        assert_eq!(harmonic(2, 2), rat(5, 4));
        assert_eq!(harmonic(3, 0), int(0));
    }

    /// `B_m` from `sum_{j=0..m} binom(m+1, j) B_j = 0`, independent of the
    /// Akiyama-Tanigawa route used by the implementation.
    fn bernoulli_by_recurrence(m: usize) -> Vec<Rational> {
        let mut b = vec![int(1)];
        for i in 1..=m {
            let s: Rational = (0..i)
                .map(|j| Rational::from_integer(binomial(i as u64 + 1, j as u64)) * &b[j])
                .sum();
            b.push(-s / int(i as i64 + 1));
        }
        b
    }

    #[test]
    fn bernoulli_examples() {
        let oracle = bernoulli_by_recurrence(12);
        assert_eq!(oracle[2], rat(1, 6));
        assert_eq!(oracle[12], rat(-691, 2730));
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        assert_eq!(bernoulli_table(30), bernoulli_by_recurrence(30));
    }

    #[test]
    fn bernoulli_recurrence_vanishes() {
        let b = bernoulli_table(21);
        for m in 1..=20u64 {
            let s: Rational =
                (0..=m).map(|j| Rational::from_integer(binomial(m + 1, j)) * &b[j as usize]).sum();
            assert!(s.is_zero(), "m = {m}");
        }
    }

    #[test]
    fn binomial_poly_examples() {
        assert_eq!(binomial_poly(1).unwrap(), UniPoly::one());
        assert_eq!(binomial_poly(2).unwrap(), UniPoly::from_ints(&[1, 1]));
        assert_eq!(binomial_poly(3).unwrap(), UniPoly::from_ints(&[2, 3, 1]).scale(&rat(1, 2)));
        assert!(binomial_poly(0).is_err());
    }

    #[test]
    fn one_minus_examples() {
        let one = MultiLaurent::one(2);
        assert_eq!(substitute_one_minus(&x(1, 0)).unwrap(), &MultiLaurent::one(1) - &x(1, 0));
        let prod = &x(2, 0) * &x(2, 1);
        let expect = &(&(&one - &x(2, 0)) - &x(2, 1)) + &prod;
        assert_eq!(substitute_one_minus(&prod).unwrap(), expect);
        let expect = &(&x(2, 0) + &x(2, 1)) - &prod;
        assert_eq!(substitute_one_minus(&(&one - &prod)).unwrap(), expect);
        let laurent = MultiLaurent::monomial(1, vec![-1], int(1));
        assert!(matches!(substitute_one_minus(&laurent), Err(Error::NotPolynomial)));
    }

    #[test]
    fn truncated_expansion_keeps_low_degrees() {
        let p = (&MultiLaurent::one(3) + &(&x(3, 0) * &x(3, 2))).pow(3);
        let full = substitute_one_minus(&p).unwrap();
        let trunc = substitute_one_minus_truncated(&p, 2);
        let expect = MultiLaurent::from_terms(
            3,
            full.terms()
                .filter(|(e, _)| e.iter().sum::<i32>() <= 2)
                .map(|(e, c)| (e.clone(), c.clone())),
        );
        assert_eq!(trunc, expect);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(invert_substitute(&x(1, 0), 0), MultiLaurent::monomial(1, vec![-1], int(1)));
        let p = &MultiLaurent::one(2) + &(&x(2, 0) * &x(2, 1));
        assert_eq!(invert_substitute(&p, 1), p);
        let q = MultiLaurent::monomial(2, vec![2, 1], int(1));
        assert_eq!(invert_substitute(&q, 2), x(2, 1));
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rational(&rat(-3, 6)), "-1/2");
        assert_eq!(format_rational(&int(7)), "7");
        assert_eq!(parse_rational("-1/2"), Some(rat(-1, 2)));
        assert_eq!(parse_rational("4/0"), None);
    }
}
