//! Sparse multivariate Laurent polynomials over the rationals.
//!
//! Variables are addressed by zero-based index `0..nvars`; they print as
//! `x1 ... xn`. Exponent vectors may hold negative entries, which is how
//! images under the inversion `x -> 1/x` are represented.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{format_rational, Rational, UniPoly};

pub type Exponents = Vec<i32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiLaurent {
    nvars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiLaurent {
    pub fn zero(nvars: usize) -> Self {
        MultiLaurent { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn monomial(nvars: usize, exps: Exponents, c: Rational) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length must equal nvars");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MultiLaurent { nvars, terms }
    }

    /// The variable `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, Rational::one())
    }

    /// `(x1 * ... * xn)^m`.
    pub fn product_power(nvars: usize, m: i32) -> Self {
        Self::monomial(nvars, vec![m; nvars], Rational::one())
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Evaluates a univariate polynomial at the product `x1 * ... * xn`.
    pub fn from_product_poly(nvars: usize, p: &UniPoly) -> Self {
        Self::from_terms(
            nvars,
            p.coeffs().iter().enumerate().map(|(i, c)| (vec![i as i32; nvars], c.clone())),
        )
    }

    /// Univariate polynomial in the variable `x_{i+1}`, other variables absent.
    pub fn from_univariate(nvars: usize, i: usize, p: &UniPoly) -> Self {
        Self::from_terms(
            nvars,
            p.coeffs().iter().enumerate().map(|(d, c)| {
                let mut e = vec![0; nvars];
                e[i] = d as i32;
                (e, c.clone())
            }),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[i32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// True when no exponent is negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.nvars])
    }

    /// Maximum exponent of variable `i` over all terms (0 for the zero polynomial).
    pub fn degree_in(&self, i: usize) -> i32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Smallest total degree of a term, `None` for the zero polynomial.
    pub fn min_total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as i64).sum()).min()
    }

    pub fn add_term(&mut self, exps: Exponents, c: Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiLaurent {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    /// Multiplies every term by the monomial with exponent vector `shift`.
    pub fn shift_exponents(&self, shift: &[i32]) -> Self {
        MultiLaurent {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to `x_{i+1}`.
    pub fn partial_derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] != 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * Rational::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Substitutes `x_{i+1} = value` and drops that variable, reindexing the rest.
    ///
    /// Panics if `value` is zero and some term has a negative power of that variable.
    pub fn substitute_drop(&self, i: usize, value: &Rational) -> Self {
        let mut out = Self::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            let p = e[i];
            let factor = if p >= 0 {
                num_traits::pow(value.clone(), p as usize)
            } else {
                assert!(!value.is_zero(), "negative power evaluated at zero");
                num_traits::pow(value.recip(), (-p) as usize)
            };
            let mut f = e.clone();
            f.remove(i);
            out.add_term(f, c * factor);
        }
        out
    }

    /// Inserts a new variable at index `i` (no term depends on it).
    pub fn insert_var(&self, i: usize) -> Self {
        MultiLaurent {
            nvars: self.nvars + 1,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = e.clone();
                    f.insert(i, 0);
                    (f, c.clone())
                })
                .collect(),
        }
    }

    /// Groups terms by the power of `x_{i+1}`: `self = sum_p x_{i+1}^p * C_p`,
    /// where each `C_p` no longer involves that variable (and has `nvars - 1` variables).
    pub fn collect_in(&self, i: usize) -> BTreeMap<i32, MultiLaurent> {
        let mut out: BTreeMap<i32, MultiLaurent> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let p = f.remove(i);
            out.entry(p)
                .or_insert_with(|| MultiLaurent::zero(self.nvars - 1))
                .add_term(f, c.clone());
        }
        out
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &p) in point.iter().zip(e) {
                t *= if p >= 0 {
                    num_traits::pow(x.clone(), p as usize)
                } else {
                    num_traits::pow(x.recip(), (-p) as usize)
                };
            }
            acc += t;
        }
        acc
    }
}

impl Add for &MultiLaurent {
    type Output = MultiLaurent;
    fn add(self, rhs: &MultiLaurent) -> MultiLaurent {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiLaurent {
    type Output = MultiLaurent;
    fn sub(self, rhs: &MultiLaurent) -> MultiLaurent {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &MultiLaurent {
    type Output = MultiLaurent;
    fn mul(self, rhs: &MultiLaurent) -> MultiLaurent {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiLaurent::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiLaurent {
    type Output = MultiLaurent;
    fn neg(self) -> MultiLaurent {
        self.scale(&-Rational::one())
    }
}

impl Neg for MultiLaurent {
    type Output = MultiLaurent;
    fn neg(self) -> MultiLaurent {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiLaurent {
            type Output = MultiLaurent;
            fn $m(self, rhs: MultiLaurent) -> MultiLaurent {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn format_monomial(e: &[i32]) -> String {
    let mut parts = Vec::new();
    for (i, &p) in e.iter().enumerate() {
        match p {
            0 => {}
            1 => parts.push(format!("x{}", i + 1)),
            _ => parts.push(format!("x{}^{}", i + 1, p)),
        }
    }
    parts.join("*")
}

/// Terms print in descending lexicographic order of exponent vectors, using
/// the grammar accepted by the command-line parser (`3/2*x1^2*x2 - x1^-1 + 1`).
impl fmt::Display for MultiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono = format_monomial(e);
            if mono.is_empty() {
                f.write_str(&format_rational(&abs))?;
            } else if abs.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), mono)?;
            }
        }
        Ok(())
    }
}
