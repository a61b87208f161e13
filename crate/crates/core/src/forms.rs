//! Differential forms `P / (1 - x1*...*xn)^N dx1...dxn` and `(n-1)`-forms
//! with one differential omitted.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{
    binomial, int, invert_substitute, substitute_one_minus_truncated, MultiLaurent, Rational, UniPoly,
};
use crate::periods::eulerian_poly;

/// The top-degree form `numerator / (1 - x1*...*xn)^pole_order dx1...dxn`.
///
/// Numerators may be Laurent polynomials (images under inversion); the
/// coefficient pipeline rejects those.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZetaIntegrand {
    numerator: MultiLaurent,
    pole_order: u32,
}

impl ZetaIntegrand {
    pub fn new(numerator: MultiLaurent, pole_order: u32) -> Self {
        assert!(numerator.nvars() >= 1, "forms need at least one variable");
        ZetaIntegrand { numerator, pole_order }
    }

    pub fn n(&self) -> usize {
        self.numerator.nvars()
    }

    pub fn numerator(&self) -> &MultiLaurent {
        &self.numerator
    }

    pub fn pole_order(&self) -> u32 {
        self.pole_order
    }
}

/// Prints in the expression syntax accepted by the command-line parser.
///
/// The denominator is dropped when `N = 0` and the numerator already
/// mentions `xn`, since then nothing is lost.
impl fmt::Display for ZetaIntegrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.numerator.to_string();
        let n = self.n();
        let reveals_n = self.numerator.terms().any(|(e, _)| e[n - 1] != 0);
        if self.pole_order == 0 && reveals_n {
            return f.write_str(&num);
        }
        let bare = !num.contains([' ', '/', '-']);
        let prod: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        if bare {
            write!(f, "{num}")?;
        } else {
            write!(f, "({num})")?;
        }
        write!(f, "/(1-{})", prod.join("*"))?;
        if self.pole_order != 1 {
            write!(f, "^{}", self.pole_order)?;
        }
        Ok(())
    }
}

/// The `(n-1)`-form `numerator / (1 - x1*...*xn)^N dx1 ... (dx_j omitted) ... dxn`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialForm {
    omitted_index: usize,
    numerator: MultiLaurent,
    pole_order: u32,
}

impl PartialForm {
    /// `omitted_index` is one-based, in `1..=n`, and `n >= 2`.
    pub fn new(numerator: MultiLaurent, omitted_index: usize, pole_order: u32) -> Result<Self> {
        let n = numerator.nvars();
        if n < 2 || omitted_index < 1 || omitted_index > n {
            return Err(Error::OutOfRange(format!(
                "omitted index {omitted_index} invalid for an (n-1)-form with n = {n}"
            )));
        }
        Ok(PartialForm { omitted_index, numerator, pole_order })
    }

    pub fn n(&self) -> usize {
        self.numerator.nvars()
    }

    pub fn omitted_index(&self) -> usize {
        self.omitted_index
    }

    pub fn numerator(&self) -> &MultiLaurent {
        &self.numerator
    }

    pub fn pole_order(&self) -> u32 {
        self.pole_order
    }
}

/// Absolute convergence over the unit cube.
///
/// Writing `x_i = 1 - y_i`, the form is integrable exactly when every
/// monomial of the expanded numerator has total degree `>= N + 1 - n`.
pub fn is_integrable(form: &ZetaIntegrand) -> Result<bool> {
    let p = form.numerator();
    if !p.is_polynomial() {
        return Err(Error::NotPolynomial);
    }
    let need = form.pole_order() as i64 + 1 - form.n() as i64;
    if need <= 0 || p.is_zero() {
        return Ok(true);
    }
    Ok(substitute_one_minus_truncated(p, need - 1).is_zero())
}

fn sign(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Pullback under `x_i -> 1/x_i`.
pub fn tau_form(form: &ZetaIntegrand) -> ZetaIntegrand {
    let n = form.n() as i64;
    let big_n = form.pole_order() as i64;
    let image = invert_substitute(form.numerator(), big_n as i32 - 2).scale(&sign(big_n + n));
    ZetaIntegrand::new(image, form.pole_order())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TauSymmetry {
    Plus,
    Minus,
    None,
}

impl TauSymmetry {
    pub fn as_str(self) -> &'static str {
        match self {
            TauSymmetry::Plus => "plus",
            TauSymmetry::Minus => "minus",
            TauSymmetry::None => "none",
        }
    }
}

impl fmt::Display for TauSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn tau_symmetry(form: &ZetaIntegrand) -> TauSymmetry {
    let image = tau_form(form);
    if image.numerator() == form.numerator() {
        TauSymmetry::Plus
    } else if &-image.numerator() == form.numerator() {
        TauSymmetry::Minus
    } else {
        TauSymmetry::None
    }
}

/// `E_{n-k}(x1*...*xn) / (1 - x1*...*xn)^{n-k+1}`, whose integral is `zeta(k)`.
pub fn eulerian_form(n: usize, k: usize) -> Result<ZetaIntegrand> {
    if n < 2 || k < 2 || k > n {
        return Err(Error::OutOfRange(format!("Eulerian form needs 2 <= k <= n, got n = {n}, k = {k}")));
    }
    let e = eulerian_poly((n - k) as u32);
    Ok(ZetaIntegrand::new(MultiLaurent::from_product_poly(n, &e), (n - k + 1) as u32))
}

/// `prod_i x_i^{u_i - 1} (1 - x_i)^{v_i - 1} / (1 - x1*...*xn)^N`.
pub fn ball_rivoal_form(u: &[u32], v: &[u32], pole_order: u32) -> Result<ZetaIntegrand> {
    if u.len() != v.len() || u.is_empty() {
        return Err(Error::OutOfRange("u and v must be non-empty and of equal length".into()));
    }
    if u.iter().chain(v).any(|&a| a < 1) {
        return Err(Error::OutOfRange("Ball-Rivoal parameters start at 1".into()));
    }
    let n = u.len();
    let mut p = MultiLaurent::one(n);
    for (i, (&ui, &vi)) in u.iter().zip(v).enumerate() {
        p = &p * &MultiLaurent::from_univariate(n, i, &beta_kernel(ui, vi));
    }
    Ok(ZetaIntegrand::new(p, pole_order))
}

/// `x^{u-1} (1-x)^{v-1}` as a univariate polynomial.
fn beta_kernel(u: u32, v: u32) -> UniPoly {
    let mut c = vec![Rational::zero(); (u + v - 1) as usize];
    for s in 0..v {
        let b = Rational::from_integer(binomial((v - 1) as u64, s as u64));
        c[(u - 1 + s) as usize] = if s % 2 == 0 { b } else { -b };
    }
    UniPoly::new(c)
}

/// `d(eta)` as a top-degree form, wedge sign included.
pub fn derivative_form(pf: &PartialForm) -> ZetaIntegrand {
    let n = pf.n();
    let i = pf.omitted_index() - 1;
    let s = sign(i as i64);
    let p = pf.numerator();
    let dp = p.partial_derivative(i);
    let big_n = pf.pole_order();
    if big_n == 0 {
        return ZetaIntegrand::new(dp.scale(&s), 0);
    }
    let one_minus = &MultiLaurent::one(n) - &MultiLaurent::product_power(n, 1);
    let mut others = vec![1; n];
    others[i] = 0;
    let cofactor = MultiLaurent::monomial(n, others, int(big_n as i64));
    let g = &(&one_minus * &dp) + &(p * &cofactor);
    ZetaIntegrand::new(g.scale(&s), big_n + 1)
}

/// Boundary value `x_j = value` with `value` in `{0, 1}`.
///
/// At `x_j = 1` the pole restricts to `(1 - product of the rest)^N`; at
/// `x_j = 0` it restricts to 1, so the pole order becomes 0.
pub fn restrict(pf: &PartialForm, value: u8) -> Result<ZetaIntegrand> {
    let i = pf.omitted_index() - 1;
    match value {
        1 => Ok(ZetaIntegrand::new(pf.numerator().substitute_drop(i, &Rational::one()), pf.pole_order())),
        0 => {
            if pf.numerator().terms().any(|(e, _)| e[i] < 0) {
                return Err(Error::NotPolynomial);
            }
            Ok(ZetaIntegrand::new(pf.numerator().substitute_drop(i, &Rational::zero()), 0))
        }
        _ => Err(Error::OutOfRange(format!("boundary value must be 0 or 1, got {value}"))),
    }
}

/// The polynomial `P(t)` with
/// `int_0^1 x^{u-1} (1-x)^{v-1} / (1 - t x)^N dx = P(t) / (1-t)^{N-v}`.
///
/// With `y = 1 - t x` the integrand becomes a finite sum of powers `y^{k-N}`,
/// each integrated in closed form. Polynomiality of the result is checked by
/// exact division rather than assumed.
pub fn partial_integrate(u: u32, v: u32, pole_order: u32) -> Result<UniPoly> {
    if u < 1 || v < 1 || u + v > pole_order {
        return Err(Error::LemmaInapplicable { u, v, pole_order });
    }
    let big_n = pole_order as i64;
    let one_minus_t = UniPoly::from_ints(&[1, -1]);
    // (1 - y)^{u-1} (y + (t - 1))^{v-1} = sum_k a_k(t) y^k
    let mut a: Vec<UniPoly> = vec![UniPoly::one()];
    let times = |a: &[UniPoly], c0: &UniPoly, c1: &UniPoly| -> Vec<UniPoly> {
        let mut out = vec![UniPoly::zero(); a.len() + 1];
        for (k, ak) in a.iter().enumerate() {
            out[k] = &out[k] + &(ak * c0);
            out[k + 1] = &out[k + 1] + &(ak * c1);
        }
        out
    };
    for _ in 1..u {
        a = times(&a, &UniPoly::one(), &UniPoly::constant(-Rational::one()));
    }
    for _ in 1..v {
        a = times(&a, &UniPoly::from_ints(&[-1, 1]), &UniPoly::one());
    }
    // The t^{-(u+v-1)} prefactor and (1-t)^{N-1} are cleared below.
    let top = one_minus_t.pow(pole_order - 1);
    let mut s = UniPoly::zero();
    for (k, ak) in a.iter().enumerate() {
        let diff = &one_minus_t.pow(k as u32) - &top;
        let w = Rational::from_integer((big_n - k as i64 - 1).into()).recip();
        s = &s + &(ak * &diff).scale(&w);
    }
    let shift = (u + v - 1) as usize;
    if s.coeffs().iter().take(shift).any(|c| !c.is_zero()) {
        return Err(Error::InternalInconsistency(format!(
            "partial integration ({u}, {v}, {pole_order}) left a pole at t = 0"
        )));
    }
    let mut q = UniPoly::new(s.coeffs().iter().skip(shift).cloned().collect());
    for _ in 1..v {
        q = q.div_linear_exact(&Rational::one()).ok_or_else(|| {
            Error::InternalInconsistency(format!(
                "partial integration ({u}, {v}, {pole_order}) is not divisible by (1-t)^{}",
                v - 1
            ))
        })?;
    }
    // Division was by (t - 1); restore the sign of (1 - t)^{v-1}.
    Ok(q.scale(&sign(v as i64 - 1)))
}

/// Splits `P = c x_i^{u-1} (1 - x_i)^{v-1} Q(other variables)`; `i` is zero-based.
fn split_variable(p: &MultiLaurent, i: usize) -> Option<(u32, u32, MultiLaurent)> {
    let groups = p.collect_in(i);
    let (_, base) = groups.iter().next()?;
    let (base_key, base_c) = base.terms().next()?;
    let mut univariate = vec![];
    for (&pow, c) in &groups {
        if pow < 0 {
            return None;
        }
        let ratio = c.coeff(base_key) / base_c;
        if &base.scale(&ratio) != c {
            return None;
        }
        univariate.push((pow as usize, ratio));
    }
    let low = univariate[0].0;
    let mut f = vec![Rational::zero(); univariate.last()?.0 - low + 1];
    for (pow, c) in univariate {
        f[pow - low] = c;
    }
    let mut f = UniPoly::new(f);
    let mut v = 1;
    while f.degree() > Some(0) {
        f = f.div_linear_exact(&Rational::one())?;
        v += 1;
    }
    // f is now the constant c * (-1)^{v-1}; fold it into Q.
    let c = f.coeff(0) * sign(v as i64 - 1);
    Some((low as u32 + 1, v, base.scale(&c)))
}

/// Integrates out `x_i` (one-based) from a form whose numerator splits as
/// `x_i^{u-1} (1-x_i)^{v-1} Q` with `u + v <= N`, leaving an `(n-1)`-form with
/// the same value.
pub fn reduce_dimension(form: &ZetaIntegrand, i: usize) -> Result<ZetaIntegrand> {
    let n = form.n();
    if n < 2 || i < 1 || i > n {
        return Err(Error::OutOfRange(format!("cannot integrate out x{i} from an n = {n} form")));
    }
    let (u, v, q) = split_variable(form.numerator(), i - 1).ok_or(Error::NotFactorable { var: i })?;
    let big_n = form.pole_order();
    if u + v > big_n {
        return Err(Error::LemmaInapplicable { u, v, pole_order: big_n });
    }
    let p = partial_integrate(u, v, big_n)?;
    let numer = &q * &MultiLaurent::from_product_poly(n - 1, &p);
    Ok(ZetaIntegrand::new(numer, big_n - v))
}
