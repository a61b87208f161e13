//! From forms to linear forms in zeta values.
//!
//! A monomial `x^{a-1} / (1 - x1*...*xn)^N` integrates termwise to
//! `sum_k binom(k+N-1, N-1) / prod_i (k + a_i)`; the summand is sent into
//! [`VElement`] and the value read off from its class modulo differences.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{bernoulli, factorial, format_rational, int, MultiLaurent, Rational, UniPoly};
use crate::forms::{is_integrable, tau_symmetry, TauSymmetry, ZetaIntegrand};
use crate::series_space::{beta, constant_term_r0, partial_fractions, VElement};

/// The summand `R(k)` of the series expansion of the integral.
///
/// The image of a monomial only depends on the multiset of its exponents, so
/// monomials are grouped by sorted exponent vector first. Numerator factors
/// `(k + i)` that coincide with a pole are cancelled before the partial
/// fraction step.
pub fn phi(form: &ZetaIntegrand) -> Result<VElement> {
    let p = form.numerator();
    if !p.is_polynomial() {
        return Err(Error::NotPolynomial);
    }
    let big_n = form.pole_order();
    if big_n == 0 {
        return Ok(VElement::zero());
    }
    let mut groups: BTreeMap<Vec<i32>, Rational> = BTreeMap::new();
    for (e, c) in p.terms() {
        let mut key = e.clone();
        key.sort_unstable();
        *groups.entry(key).or_insert_with(Rational::zero) += c;
    }
    let norm = Rational::from_integer(factorial(big_n as u64 - 1)).recip();
    let mut out = VElement::zero();
    for (key, c) in groups {
        if c.is_zero() {
            continue;
        }
        let r = key_summand(&key, big_n)?;
        out.add_scaled(&r, &(&c * &norm));
    }
    Ok(out)
}

const SUMMAND_CACHE_MAX: usize = 1 << 16;

thread_local! {
    static SUMMAND_CACHE: RefCell<HashMap<(Vec<i32>, u32), VElement>> = RefCell::new(HashMap::new());
}

/// Empties this thread's memo of partial fraction expansions.
pub fn clear_summand_cache() {
    SUMMAND_CACHE.with(|c| c.borrow_mut().clear());
}

/// `prod_{i<N} (k+i) / prod_i (k + key_i + 1)` in partial fractions, memoized.
fn key_summand(key: &[i32], big_n: u32) -> Result<VElement> {
    let id = (key.to_vec(), big_n);
    if let Some(r) = SUMMAND_CACHE.with(|c| c.borrow().get(&id).cloned()) {
        return Ok(r);
    }
    let mut poles: BTreeMap<u32, u32> = BTreeMap::new();
    for &e in key {
        *poles.entry(e as u32 + 1).or_insert(0) += 1;
    }
    let mut numer = UniPoly::one();
    for i in 1..big_n {
        match poles.get_mut(&i) {
            Some(m) if *m > 0 => *m -= 1,
            _ => numer = &numer * &UniPoly::linear(int(i as i64)),
        }
    }
    let r = partial_fractions(&numer, &poles)?;
    SUMMAND_CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= SUMMAND_CACHE_MAX {
            c.clear();
        }
        c.insert(id, r.clone());
    });
    Ok(r)
}

/// `a0 + sum_r a_r zeta(r)`, with `a_r` stored for `r` in `2..=n` when nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaCoefficients {
    n: usize,
    a0: Rational,
    a: BTreeMap<u32, Rational>,
}

impl ZetaCoefficients {
    pub fn new(n: usize, a0: Rational, a: BTreeMap<u32, Rational>) -> Result<Self> {
        if let Some(&r) = a.keys().find(|&&r| r < 2 || r as usize > n) {
            return Err(Error::OutOfRange(format!("zeta({r}) coefficient out of range for n = {n}")));
        }
        Ok(ZetaCoefficients { n, a0, a: a.into_iter().filter(|(_, c)| !c.is_zero()).collect() })
    }

    pub fn zero(n: usize) -> Self {
        ZetaCoefficients { n, a0: Rational::zero(), a: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a0(&self) -> &Rational {
        &self.a0
    }

    /// Nonzero `zeta(r)` coefficients.
    pub fn zeta_coeffs(&self) -> &BTreeMap<u32, Rational> {
        &self.a
    }

    /// `a_r` for `r >= 2` (zero when absent), and `a_0` for `r = 0`.
    pub fn get(&self, r: u32) -> Rational {
        if r == 0 {
            return self.a0.clone();
        }
        self.a.get(&r).cloned().unwrap_or_else(Rational::zero)
    }

    /// Indices `k >= 2` with `a_k = 0`.
    pub fn vanishing(&self) -> BTreeSet<u32> {
        (2..=self.n as u32).filter(|r| !self.a.contains_key(r)).collect()
    }
}

impl fmt::Display for ZetaCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "a0 = {}", format_rational(&self.a0))?;
        for r in 2..=self.n as u32 {
            writeln!(f, "a{r} = {}", format_rational(&self.get(r)))?;
        }
        Ok(())
    }
}

/// Exact coefficients of `int_{[0,1]^n} form`.
pub fn coefficients(form: &ZetaIntegrand) -> Result<ZetaCoefficients> {
    if !is_integrable(form)? {
        return Err(Error::NotIntegrable);
    }
    let n = form.n();
    if form.pole_order() == 0 {
        let mut a0 = Rational::zero();
        for (e, c) in form.numerator().terms() {
            let denom: BigInt = e.iter().map(|&x| BigInt::from(x + 1)).product();
            a0 += c / Rational::from_integer(denom);
        }
        return Ok(ZetaCoefficients { n, a0, a: BTreeMap::new() });
    }
    let r = phi(form)?;
    if !r.poly_part().is_zero() {
        return Err(Error::InternalInconsistency(format!(
            "integrable form has a polynomial part {} in its series",
            r.poly_part()
        )));
    }
    let b = beta(&r);
    if !b.get(1).is_zero() {
        return Err(Error::InternalInconsistency(format!(
            "integrable form has beta_1 = {}",
            format_rational(&b.get(1))
        )));
    }
    if b.entries().len() > n {
        return Err(Error::InternalInconsistency(format!(
            "series has pole order {} above the dimension {n}",
            b.entries().len()
        )));
    }
    let a0 = constant_term_r0(&r).map_err(|e| Error::InternalInconsistency(e.to_string()))?;
    let a = (2..=b.entries().len() as u32).map(|r| (r, b.get(r))).collect();
    ZetaCoefficients::new(n, a0, a)
}

/// Indices forced to vanish by (anti-)invariance under inversion: even
/// `k >= 2` for `plus`, odd `k >= 3` for `minus`, nothing otherwise.
pub fn predict_vanishing(form: &ZetaIntegrand) -> BTreeSet<u32> {
    let n = form.n() as u32;
    match tau_symmetry(form) {
        TauSymmetry::Plus => (2..=n).filter(|k| k % 2 == 0).collect(),
        TauSymmetry::Minus => (3..=n).filter(|k| k % 2 == 1).collect(),
        TauSymmetry::None => BTreeSet::new(),
    }
}

/// The top coefficient `a_n` by a residue computation in `x_n`.
///
/// Taking the residue of the integrand at `x_n = 1/(x1*...*x_{n-1})` gives the
/// Laurent polynomial `r(x') = (-1)^N (x')^{-N} / (N-1)! * d^{N-1}P/dx_n^{N-1}`
/// evaluated there; `a_n` is minus the constant term of `r(x') * x1*...*x_{n-1}`.
/// The sign is normalised so that `dx / (1 - x1*...*xn)` gives 1.
pub fn highest_coeff_residue(form: &ZetaIntegrand) -> Result<Rational> {
    if !is_integrable(form)? {
        return Err(Error::NotIntegrable);
    }
    let n = form.n();
    let big_n = form.pole_order();
    if n == 1 || big_n == 0 {
        return Ok(Rational::zero());
    }
    let last = n - 1;
    let mut d = form.numerator().clone();
    for _ in 1..big_n {
        d = d.partial_derivative(last);
    }
    // Term x'^{e'} x_n^m of d becomes x'^{e' - m}; the constant term of r * prod x'
    // collects exponents e' - m = N - 1.
    let target = big_n as i32 - 1;
    let mut acc = Rational::zero();
    for (e, c) in d.terms() {
        let m = e[last];
        if e[..last].iter().all(|&x| x - m == target) {
            acc += c;
        }
    }
    let sign = if big_n.is_multiple_of(2) { int(1) } else { int(-1) };
    let scale = sign / Rational::from_integer(factorial(big_n as u64 - 1));
    Ok(-(acc * scale))
}

/// The residue Laurent polynomial `r(x')` itself, for display and testing.
pub fn residue_laurent(form: &ZetaIntegrand) -> Result<MultiLaurent> {
    let p = form.numerator();
    if !p.is_polynomial() {
        return Err(Error::NotPolynomial);
    }
    let n = form.n();
    let big_n = form.pole_order();
    if n == 1 || big_n == 0 {
        return Ok(MultiLaurent::zero(n.saturating_sub(1).max(1)));
    }
    let last = n - 1;
    let mut d = p.clone();
    for _ in 1..big_n {
        d = d.partial_derivative(last);
    }
    let sign = if big_n.is_multiple_of(2) { int(1) } else { int(-1) };
    let scale = sign / Rational::from_integer(factorial(big_n as u64 - 1));
    let terms = d.terms().map(|(e, c)| {
        let m = e[last];
        (e[..last].iter().map(|&x| x - m - big_n as i32).collect(), c * &scale)
    });
    Ok(MultiLaurent::from_terms(n - 1, terms))
}

/// `lambda_{2k} = -B_{2k} / (2 (2k)!)`, so that `zeta(2k) = lambda_{2k} (2 pi i)^{2k}`.
pub fn even_zeta_rational(k: u32) -> Rational {
    assert!(k >= 1, "even zeta values start at zeta(2)");
    let b = bernoulli(2 * k as usize);
    -b / Rational::from_integer(factorial(2 * k as u64) * 2)
}

/// `q_{2k} = (-1)^k 4^k lambda_{2k}`, so that `zeta(2k) = q_{2k} pi^{2k}`.
pub fn even_zeta_q(k: u32) -> Rational {
    let four_k = Rational::from_integer(num_traits::pow(BigInt::from(4), k as usize));
    let s = if k.is_multiple_of(2) { int(1) } else { int(-1) };
    s * four_k * even_zeta_rational(k)
}

/// A value written as `sum_m t_m T^m + sum_{r odd} z_r zeta(r)` with `T = 2 pi i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedScalar {
    t_coeffs: BTreeMap<u32, Rational>,
    odd_zeta: BTreeMap<u32, Rational>,
}

impl GradedScalar {
    pub fn t_coeffs(&self) -> &BTreeMap<u32, Rational> {
        &self.t_coeffs
    }

    pub fn odd_zeta(&self) -> &BTreeMap<u32, Rational> {
        &self.odd_zeta
    }

    pub fn is_zero(&self) -> bool {
        self.t_coeffs.is_empty() && self.odd_zeta.is_empty()
    }

    /// Inverse rewriting back to zeta coefficients in dimension `n`.
    pub fn to_zeta_coefficients(&self, n: usize) -> Result<ZetaCoefficients> {
        let mut a = BTreeMap::new();
        let mut a0 = Rational::zero();
        for (&m, c) in &self.t_coeffs {
            if m == 0 {
                a0 = c.clone();
            } else if m % 2 == 0 {
                a.insert(m, c / even_zeta_rational(m / 2));
            } else {
                return Err(Error::OutOfRange(format!("odd power T^{m} has no zeta counterpart")));
            }
        }
        for (&r, c) in &self.odd_zeta {
            a.insert(r, c.clone());
        }
        ZetaCoefficients::new(n, a0, a)
    }
}

impl fmt::Display for GradedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        for (&m, c) in &self.t_coeffs {
            parts.push(match m {
                0 => format_rational(c),
                _ => format!("{}*T^{m}", format_rational(c)),
            });
        }
        for (&r, c) in &self.odd_zeta {
            parts.push(format!("{}*zeta({r})", format_rational(c)));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Absorbs even zeta values into powers of `T = 2 pi i`.
pub fn odd_basis_decomposition(c: &ZetaCoefficients) -> GradedScalar {
    let mut g = GradedScalar::default();
    if !c.a0.is_zero() {
        g.t_coeffs.insert(0, c.a0.clone());
    }
    for (&r, a) in &c.a {
        if r % 2 == 0 {
            g.t_coeffs.insert(r, a * even_zeta_rational(r / 2));
        } else {
            g.odd_zeta.insert(r, a.clone());
        }
    }
    g
}

/// The integral of a Ball-Rivoal form as a hypergeometric series
/// `prefactor * sum_k (N)_k prod (u_i)_k / (k! prod (u_i + v_i)_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypergeometricParams {
    pub upper: Vec<u32>,
    pub lower: Vec<u32>,
    pub prefactor: Rational,
    pub well_poised: bool,
}

impl HypergeometricParams {
    /// The `k`-th term of the series.
    pub fn term(&self, k: u64) -> Rational {
        let rising = |a: u32| -> BigInt { (0..k).map(|i| BigInt::from(a as u64 + i)).product() };
        let num: BigInt = self.upper.iter().map(|&a| rising(a)).product();
        let den: BigInt = self.lower.iter().map(|&b| rising(b)).product::<BigInt>() * factorial(k);
        &self.prefactor * Rational::new(num, den)
    }
}

pub fn hypergeometric_params(u: &[u32], v: &[u32], pole_order: u32) -> Result<HypergeometricParams> {
    if u.len() != v.len() || u.is_empty() || u.iter().chain(v).any(|&a| a < 1) {
        return Err(Error::OutOfRange("u, v must be equal-length lists of positive integers".into()));
    }
    let mut upper = u.to_vec();
    upper.push(pole_order);
    let lower = u.iter().zip(v).map(|(a, b)| a + b).collect();
    let prefactor = u
        .iter()
        .zip(v)
        .map(|(&a, &b)| {
            Rational::new(
                factorial(a as u64 - 1) * factorial(b as u64 - 1),
                factorial((a + b) as u64 - 1),
            )
        })
        .fold(Rational::one(), |acc, x| acc * x);
    let well_poised = u.iter().zip(v).all(|(&a, &b)| 2 * a + b == pole_order + 1);
    Ok(HypergeometricParams { upper, lower, prefactor, well_poised })
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::exactalg::rat;
    use crate::forms::{
        ball_rivoal_form, derivative_form, eulerian_form, reduce_dimension, restrict, tau_form, PartialForm,
    };
    use crate::periods::eulerian_poly;
    use crate::series_space::mod_delta_equal;
    use proptest::prelude::*;

    fn small_poly(n: usize, max_exp: i32, max_terms: usize) -> impl Strategy<Value = MultiLaurent> {
        let term = (proptest::collection::vec(0..=max_exp, n), -6i64..=6, 1i64..=3);
        proptest::collection::vec(term, 1..=max_terms).prop_map(move |ts| {
            MultiLaurent::from_terms(n, ts.into_iter().map(|(e, a, b)| (e, rat(a, b))))
        })
    }

    /// `f * prod (1 - x_i)^{w_i}` with `sum w_i >= N + 1 - n`, which is integrable.
    fn integrable_form(min_n: usize) -> impl Strategy<Value = ZetaIntegrand> {
        (min_n..=4usize, 0u32..=5).prop_flat_map(|(n, big_n)| {
            (small_poly(n, 2, 4), proptest::collection::vec(0u32..=2, n)).prop_map(move |(f, mut w)| {
                let need = (big_n as i64 + 1 - n as i64).max(0) as u32;
                let have: u32 = w.iter().sum();
                if have < need {
                    w[0] += need - have;
                }
                let mut p = f;
                for (i, &wi) in w.iter().enumerate() {
                    let lin = &MultiLaurent::one(n) - &MultiLaurent::var(n, i);
                    p = &p * &lin.pow(wi);
                }
                ZetaIntegrand::new(p, big_n)
            })
        })
    }

    fn partial_form() -> impl Strategy<Value = PartialForm> {
        (2usize..=4, 0u32..=4).prop_flat_map(|(n, big_n)| {
            (small_poly(n, 4, 4), 1..=n).prop_map(move |(p, j)| PartialForm::new(p, j, big_n).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn integrable_forms_have_no_harmonic_part(w in integrable_form(1)) {
            prop_assert!(is_integrable(&w).unwrap());
            let r = phi(&w).unwrap();
            prop_assert!(r.poly_part().is_zero());
            prop_assert!(beta(&r).get(1).is_zero());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn phi_ignores_common_factors(p in (1usize..=4).prop_flat_map(|n| small_poly(n, 3, 5)), big_n in 0u32..=4) {
            let n = p.nvars();
            let lifted = &p * &(&MultiLaurent::one(n) - &MultiLaurent::product_power(n, 1));
            let a = phi(&ZetaIntegrand::new(p, big_n)).unwrap();
            let b = phi(&ZetaIntegrand::new(lifted, big_n + 1)).unwrap();
            prop_assert!(mod_delta_equal(&a, &b));
        }

        #[test]
        fn exact_forms_reduce_to_the_boundary(eta in partial_form()) {
            let s = if eta.omitted_index() % 2 == 1 { int(1) } else { int(-1) };
            let lhs = phi(&derivative_form(&eta)).unwrap();
            let rhs = phi(&restrict(&eta, 1).unwrap()).unwrap().scale(&s);
            prop_assert!(mod_delta_equal(&lhs, &rhs));
        }

        #[test]
        fn inversion_flips_even_orders(
            form in (1usize..=4, 2u32..=5).prop_flat_map(|(n, big_n)| {
                small_poly(n, big_n as i32 - 2, 5).prop_map(move |p| ZetaIntegrand::new(p, big_n))
            })
        ) {
            let image = tau_form(&form);
            prop_assert!(image.numerator().is_polynomial());
            let b = beta(&phi(&form).unwrap());
            let bt = beta(&phi(&image).unwrap());
            for r in 1..=(form.n() as u32 + 1) {
                let s = if r % 2 == 1 { int(1) } else { int(-1) };
                prop_assert_eq!(bt.get(r), s * b.get(r));
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]

        #[test]
        fn residue_matches_pipeline(w in integrable_form(2)) {
            let c = coefficients(&w).unwrap();
            prop_assert_eq!(highest_coeff_residue(&w).unwrap(), c.get(w.n() as u32));
        }
    }

    #[test]
    fn eulerian_forms_give_unit_vectors() {
        for n in 2..=8 {
            for k in 2..=n {
                let c = coefficients(&eulerian_form(n, k).unwrap()).unwrap();
                assert!(c.a0().is_zero(), "({n},{k})");
                let expect = BTreeMap::from([(k as u32, int(1))]);
                assert_eq!(c.zeta_coeffs(), &expect, "({n},{k})");
            }
        }
    }

    #[test]
    fn eulerian_forms_are_exact_derivatives() {
        for n in 2..=8usize {
            let s = if n % 2 == 1 { int(1) } else { int(-1) };
            for k in 2..n {
                let e = eulerian_poly((n - 1 - k) as u32);
                let p = &MultiLaurent::var(n, n - 1) * &MultiLaurent::from_product_poly(n, &e);
                let eta = PartialForm::new(p, n, (n - k) as u32).unwrap();
                let d = derivative_form(&eta);
                let d = ZetaIntegrand::new(d.numerator().scale(&s), d.pole_order());
                assert_eq!(d, eulerian_form(n, k).unwrap(), "({n},{k})");
            }
            let eta = PartialForm::new(MultiLaurent::var(n, n - 1), n, 0).unwrap();
            let d = derivative_form(&eta);
            assert_eq!(d.numerator().scale(&s), MultiLaurent::one(n));
            assert_eq!(d.pole_order(), 0);
        }
    }

    #[test]
    fn weight_drop_and_reduction() {
        for (u, v, big_n) in [
            (vec![1, 1], vec![2, 1], 2),
            (vec![2, 1, 1], vec![1, 2, 2], 3),
            (vec![1, 2, 1], vec![2, 1, 3], 4),
            (vec![2, 2, 2], vec![2, 1, 2], 4),
        ] {
            let w = ball_rivoal_form(&u, &v, big_n).unwrap();
            let c = coefficients(&w).unwrap();
            let n = u.len();
            assert!(c.get(n as u32).is_zero(), "{u:?} {v:?} {big_n}");
            let i = (0..n).find(|&i| u[i] + v[i] <= big_n).unwrap() + 1;
            let red = reduce_dimension(&w, i).unwrap();
            let cr = coefficients(&red).unwrap();
            assert_eq!(cr.a0(), c.a0());
            for r in 2..n as u32 {
                assert_eq!(cr.get(r), c.get(r));
            }
        }
    }

    #[test]
    fn well_poised_parity() {
        for n in 2..=4usize {
            for big_n in 1..=5u32 {
                let max_u = big_n / 2;
                if max_u == 0 {
                    continue;
                }
                for u in itertools::Itertools::multi_cartesian_product((0..n).map(|_| 1..=max_u)) {
                    let v: Vec<u32> = u.iter().map(|&a| big_n + 1 - 2 * a).collect();
                    let w = ball_rivoal_form(&u, &v, big_n).unwrap();
                    if !is_integrable(&w).unwrap() {
                        continue;
                    }
                    let c = coefficients(&w).unwrap();
                    let predicted = predict_vanishing(&w);
                    let odd = ((n + 1) as u32 * (big_n + 1)) % 2 == 1;
                    assert_eq!(tau_symmetry(&w), if odd { TauSymmetry::Plus } else { TauSymmetry::Minus });
                    for k in &predicted {
                        assert!(c.get(*k).is_zero(), "{u:?} {v:?} {big_n}: a{k} != 0");
                    }
                }
            }
        }
    }
}
