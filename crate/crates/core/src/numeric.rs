//! Certified numerics: decimal intervals, zeta values by Euler-Maclaurin with
//! an explicit remainder bound, and interval verification of computed
//! linear forms against their defining series.
//!
//! Every quantity is carried as exact rational bounds until it is rounded
//! outward into a fixed-point [`DecimalInterval`].

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{bernoulli_table, int, Rational};
use crate::forms::{is_integrable, ZetaIntegrand};
use crate::series_space::{tail_bound, VElement};
use crate::zeta_coeffs::{phi, ZetaCoefficients};

/// The interval `[mid - rad, mid + rad] * 10^{-scale}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecimalInterval {
    mid: BigInt,
    rad: BigInt,
    scale: u32,
}

fn pow10(s: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), s as usize)
}

fn floor_rat(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

fn ceil_rat(q: &Rational) -> BigInt {
    -(-q.numer()).div_floor(q.denom())
}

impl DecimalInterval {
    /// Smallest interval at `scale` containing `[lo, hi]`.
    pub fn from_bounds(lo: &Rational, hi: &Rational, scale: u32) -> Self {
        assert!(lo <= hi, "empty interval");
        let p = Rational::from_integer(pow10(scale));
        let lo_i = floor_rat(&(lo * &p));
        let hi_i = ceil_rat(&(hi * &p));
        // mid = floor((lo+hi)/2), rad = hi - mid >= mid - lo.
        let mid: BigInt = (&lo_i + &hi_i).div_floor(&BigInt::from(2));
        let rad = &hi_i - &mid;
        DecimalInterval { mid, rad, scale }
    }

    pub fn from_rational(q: &Rational, scale: u32) -> Self {
        Self::from_bounds(q, q, scale)
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn lower(&self) -> Rational {
        Rational::new(&self.mid - &self.rad, pow10(self.scale))
    }

    pub fn upper(&self) -> Rational {
        Rational::new(&self.mid + &self.rad, pow10(self.scale))
    }

    pub fn midpoint(&self) -> Rational {
        Rational::new(self.mid.clone(), pow10(self.scale))
    }

    pub fn radius(&self) -> Rational {
        Rational::new(self.rad.clone(), pow10(self.scale))
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lower() <= q && q <= &self.upper()
    }

    pub fn intersects(&self, other: &DecimalInterval) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// True when the interval meets `[p, p + 10^{-d}]`, the set of reals whose
    /// decimal expansion starts with the `d`-decimal string `p`.
    pub fn contains_decimal_prefix(&self, prefix: &str) -> Result<bool> {
        let (lo, d) = parse_decimal(prefix)?;
        let step = Rational::new(BigInt::one(), pow10(d));
        let hi = if lo.is_negative() { &lo - &step } else { &lo + &step };
        let (a, b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        Ok(self.lower() <= b && a <= self.upper())
    }

    /// `lo + hi` interval sum; the result uses the finer scale.
    pub fn add(&self, other: &DecimalInterval) -> Self {
        let s = self.scale.max(other.scale);
        Self::from_bounds(&(self.lower() + other.lower()), &(self.upper() + other.upper()), s)
    }

    /// Multiplication by an exact rational.
    pub fn mul_rational(&self, c: &Rational) -> Self {
        let a = self.lower() * c;
        let b = self.upper() * c;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        Self::from_bounds(&lo, &hi, self.scale)
    }

    /// Midpoint printed with `places` decimals (truncated toward zero).
    pub fn midpoint_string(&self, places: u32) -> String {
        let places = places.min(self.scale);
        let m = &self.mid / pow10(self.scale - places);
        format_fixed(&m, places)
    }

    /// Radius rounded up to three significant digits, in scientific notation.
    pub fn radius_string(&self) -> String {
        if self.rad.is_zero() {
            return "0".to_string();
        }
        let digits = self.rad.to_string();
        let exp = digits.len() as i64 - 1 - self.scale as i64;
        let head: u64 = digits[..digits.len().min(3)].parse().expect("decimal digits");
        let rest_nonzero = digits.len() > 3 && digits[3..].bytes().any(|b| b != b'0');
        let mut head = head + u64::from(rest_nonzero);
        let mut exp = exp;
        let width = digits.len().min(3) as u32;
        if head >= 10u64.pow(width) {
            head /= 10;
            exp += 1;
        }
        let h = head.to_string();
        let frac = h[1..].trim_end_matches('0');
        if frac.is_empty() {
            format!("{}e{exp}", &h[..1])
        } else {
            format!("{}.{frac}e{exp}", &h[..1])
        }
    }
}

impl fmt::Display for DecimalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let places = self.scale.saturating_sub(10).max(1);
        write!(f, "{} +/- {}", self.midpoint_string(places), self.radius_string())
    }
}

fn format_fixed(m: &BigInt, places: u32) -> String {
    let neg = m.sign() == Sign::Minus;
    let s = m.abs().to_string();
    let places = places as usize;
    let s = if s.len() <= places { format!("{}{}", "0".repeat(places + 1 - s.len()), s) } else { s };
    let (int_part, frac) = s.split_at(s.len() - places);
    let sign = if neg { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

/// Parses `[-]digits[.digits]` into an exact rational and its number of decimals.
fn parse_decimal(s: &str) -> Result<(Rational, u32)> {
    let s = s.trim();
    let bad = || Error::OutOfRange(format!("not a decimal number: {s:?}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() || !ip.bytes().all(|b| b.is_ascii_digit()) || !fp.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{ip}{fp}").parse().map_err(|_| bad())?;
    let d = fp.len() as u32;
    let q = Rational::new(if neg { -digits } else { digits }, pow10(d));
    Ok((q, d))
}

/// Guard digits carried beyond the requested accuracy.
const GUARD: u32 = 10;

/// `zeta(r)` to within `10^{-digits}`, by Euler-Maclaurin summation
/// `sum_{k<M} k^{-r} + M^{1-r}/(r-1) + M^{-r}/2 + sum_j B_{2j}/(2j)! (r)_{2j-1} M^{1-r-2j}`
/// with remainder at most `|B_{2p}|/(2p)! (r)_{2p-1} M^{1-r-2p}`.
pub fn zeta_numeric(r: u32, digits: u32) -> Result<DecimalInterval> {
    if r < 2 {
        return Err(Error::OutOfRange(format!("zeta({r}) diverges")));
    }
    let (value, err) = zeta_euler_maclaurin(r, digits + 5);
    let scale = digits + GUARD;
    Ok(DecimalInterval::from_bounds(&(&value - &err), &(&value + &err), scale))
}

/// Exact approximation and remainder bound with error below `10^{-target}`.
fn zeta_euler_maclaurin(r: u32, target: u32) -> (Rational, Rational) {
    let m = (target as u64).max(10);
    let mq = int(m as i64);
    let tol = Rational::new(BigInt::one(), pow10(target));
    let rising = |len: u32| -> BigInt { (0..len).map(|i| BigInt::from(r + i)).product() };
    let m_pow = |e: u32| -> Rational { num_traits::pow(mq.clone(), e as usize).recip() };

    let mut value: Rational = (1..m)
        .map(|k| Rational::new(BigInt::one(), num_traits::pow(BigInt::from(k), r as usize)))
        .sum();
    value += m_pow(r - 1) / int(r as i64 - 1);
    value += m_pow(r) / int(2);

    let mut bern = bernoulli_table(64);
    let mut fact = BigInt::one(); // (2j)!
    let mut j = 1u32;
    loop {
        if (2 * j) as usize >= bern.len() {
            bern = bernoulli_table(bern.len() * 2);
        }
        fact *= BigInt::from(2 * j - 1) * BigInt::from(2 * j);
        let term = &bern[2 * j as usize] / Rational::from_integer(fact.clone())
            * Rational::from_integer(rising(2 * j - 1))
            * m_pow(r + 2 * j - 1);
        // With p = j, the remainder after terms 1..j-1 is bounded by |term|.
        if term.abs() < tol {
            return (value, term.abs());
        }
        value += term;
        j += 1;
    }
}

/// `pi` to within `10^{-digits}` via `16 atan(1/5) - 4 atan(1/239)`.
pub fn pi_interval(digits: u32) -> DecimalInterval {
    let (value, err) = pi_rational(digits + 5);
    DecimalInterval::from_bounds(&(&value - &err), &(&value + &err), digits + GUARD)
}

fn pi_rational(target: u32) -> (Rational, Rational) {
    let tol = Rational::new(BigInt::one(), pow10(target + 2));
    // Alternating series with decreasing terms: the first omitted term bounds the error.
    let atan_inv = |x: i64| -> (Rational, Rational) {
        let x2 = int(x * x);
        let mut pow = int(x);
        let mut sum = Rational::zero();
        let mut k = 0i64;
        loop {
            let term = (int(2 * k + 1) * &pow).recip();
            if term < tol {
                return (sum, term);
            }
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            pow *= &x2;
            k += 1;
        }
    };
    let (a, ea) = atan_inv(5);
    let (b, eb) = atan_inv(239);
    (int(16) * a - int(4) * b, int(16) * ea + int(4) * eb)
}

/// Outcome of comparing the series side with the zeta side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub lhs: DecimalInterval,
    pub rhs: DecimalInterval,
    pub pass: bool,
    pub k_terms: u64,
    pub digits: u32,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "series  = {}", self.lhs)?;
        writeln!(f, "zeta    = {}", self.rhs)?;
        writeln!(f, "K = {}, digits = {}", self.k_terms, self.digits)?;
        write!(f, "{}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Rational bounds on `sum_{k<K} R(k)` for an element without polynomial part.
///
/// Harmonic-type sums are accumulated in fixed point at `10^{-scale}`; each
/// floored term is short by less than one unit, so a block of `K` terms is
/// off by less than `K` units, always in the same direction.
pub fn partial_sum_bounds(r: &VElement, k_terms: u64, scale: u32) -> Result<(Rational, Rational)> {
    if !r.poly_part().is_zero() {
        return Err(Error::NotSummable("nonzero polynomial part".into()));
    }
    let one = pow10(scale);
    let unit = Rational::new(BigInt::one(), one.clone());
    let len = (k_terms + r.max_shift() as u64) as usize;
    let orders: std::collections::BTreeSet<u32> = r.pole_coeffs().keys().map(|&(_, o)| o).collect();
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    for ord in orders {
        // h[m] = sum_{i=1..m} floor(10^scale / i^ord)
        let mut h = Vec::with_capacity(len);
        h.push(BigInt::zero());
        let mut acc = BigInt::zero();
        for i in 1..len {
            acc += &one / num_traits::pow(BigInt::from(i), ord as usize);
            h.push(acc.clone());
        }
        for (&(j, o), c) in r.pole_coeffs() {
            if o != ord {
                continue;
            }
            let j = j as usize;
            let block = &h[k_terms as usize + j - 1] - &h[j - 1];
            let a = c * Rational::from_integer(block.clone()) * &unit;
            let b = c * Rational::from_integer(block + BigInt::from(k_terms)) * &unit;
            if a <= b {
                lo += a;
                hi += b;
            } else {
                lo += b;
                hi += a;
            }
        }
    }
    Ok((lo, hi))
}

/// Checks `sum_k R(k) = a0 + sum a_r zeta(r)` numerically, where `R` is the
/// series of `form`. Both sides are certified enclosures; the check passes
/// when they overlap.
pub fn verify_linear_form(
    form: &ZetaIntegrand,
    c: &ZetaCoefficients,
    k_terms: u64,
    digits: u32,
) -> Result<VerificationReport> {
    if !is_integrable(form)? {
        return Err(Error::NotIntegrable);
    }
    if form.pole_order() == 0 {
        return Err(Error::OutOfRange("forms with N = 0 are checked exactly, not numerically".into()));
    }
    let scale = digits + GUARD;
    let r = phi(form)?;
    let (lo, hi) = partial_sum_bounds(&r, k_terms, scale)?;
    let tail = tail_bound(&r, k_terms)?;
    let lhs = DecimalInterval::from_bounds(&(lo - &tail), &(hi + &tail), scale);

    let mut zlo = c.a0().clone();
    let mut zhi = c.a0().clone();
    for (&ord, a) in c.zeta_coeffs() {
        let z = zeta_numeric(ord, digits)?;
        let (p, q) = (a * z.lower(), a * z.upper());
        if p <= q {
            zlo += p;
            zhi += q;
        } else {
            zlo += q;
            zhi += p;
        }
    }
    let rhs = DecimalInterval::from_bounds(&zlo, &zhi, scale);
    let pass = lhs.intersects(&rhs);
    Ok(VerificationReport { lhs, rhs, pass, k_terms, digits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::forms::{ball_rivoal_form, eulerian_form};
    use crate::series_space::partial_sum;
    use crate::zeta_coeffs::{coefficients, even_zeta_q};

    const ZETA3: &str = "1.2020569031595942853997381615114499907649862923404988817922715553";

    #[test]
    fn interval_basics() {
        let i = DecimalInterval::from_bounds(&rat(1, 3), &rat(1, 2), 4);
        assert!(i.contains(&rat(1, 3)) && i.contains(&rat(1, 2)));
        assert!(!i.contains(&rat(6, 10)));
        let p = DecimalInterval::from_rational(&rat(-1, 7), 6);
        assert!(p.contains(&rat(-1, 7)));
        assert!(p.radius() <= rat(1, 1_000_000));
        assert_eq!(DecimalInterval::from_rational(&rat(5, 4), 2).radius(), int(0));
        assert!(p.contains_decimal_prefix("-0.142857").unwrap());
        assert!(!p.contains_decimal_prefix("-0.143").unwrap());
        assert!(parse_decimal("1.2.3").is_err());
    }

    #[test]
    fn interval_formatting() {
        let i = DecimalInterval::from_bounds(&rat(65198, 1_000_000), &rat(65200, 1_000_000), 12);
        assert_eq!(i.midpoint_string(6), "0.065199");
        assert_eq!(i.radius_string(), "1e-6");
        let j = DecimalInterval::from_bounds(&rat(-3, 2), &rat(-3, 2), 3);
        assert_eq!(j.midpoint_string(3), "-1.500");
        assert_eq!(j.radius_string(), "0");
    }

    #[test]
    fn zeta_examples() {
        let z2 = zeta_numeric(2, 10).unwrap();
        assert!(z2.contains_decimal_prefix("1.6449340668").unwrap());
        assert!(z2.radius() <= rat(1, 10_000_000_000));
        let z3 = zeta_numeric(3, 15).unwrap();
        assert!(z3.contains_decimal_prefix("1.202056903159594").unwrap());
        let z10 = zeta_numeric(10, 10).unwrap();
        assert!(z10.contains_decimal_prefix("1.0009945751").unwrap());
        assert!(zeta_numeric(1, 5).is_err());
    }

    #[test]
    fn zeta3_to_fifty_digits() {
        let z3 = zeta_numeric(3, 50).unwrap();
        assert!(z3.radius() <= Rational::new(BigInt::one(), pow10(50)));
        assert!(z3.contains_decimal_prefix(&ZETA3[..52]).unwrap());
        // the full 64-decimal reference sits within the radius of the midpoint
        let (q, _) = parse_decimal(ZETA3).unwrap();
        let gap = (z3.midpoint() - q).abs();
        assert!(gap <= z3.radius() + Rational::new(BigInt::one(), pow10(64)));
    }

    /// Direct summation with the integral-test tail `[1/((r-1)(K)^{r-1}) - ..]`
    /// bracket, independent of Euler-Maclaurin.
    #[test]
    fn zeta_agrees_with_direct_summation() {
        for r in [3u32, 4, 7] {
            let k = 2000u64;
            let head: Rational =
                (1..=k).map(|i| Rational::new(BigInt::one(), num_traits::pow(BigInt::from(i), r as usize))).sum();
            // sum_{i>K} i^{-r} in [1/((r-1)(K+1)^{r-1}), 1/((r-1)K^{r-1})]
            let t_lo = (int(r as i64 - 1) * num_traits::pow(int(k as i64 + 1), r as usize - 1)).recip();
            let t_hi = (int(r as i64 - 1) * num_traits::pow(int(k as i64), r as usize - 1)).recip();
            let z = zeta_numeric(r, 20).unwrap();
            assert!(z.lower() <= &head + &t_hi && &head + &t_lo <= z.upper(), "zeta({r})");
        }
    }

    #[test]
    fn pi_digits() {
        let p = pi_interval(40);
        assert!(p.contains_decimal_prefix("3.1415926535897932384626433832795028841971").unwrap());
        assert!(p.radius() <= Rational::new(BigInt::one(), pow10(40)));
    }

    #[test]
    fn even_zeta_values_match_powers_of_pi() {
        let p = pi_interval(45);
        for k in 1..=5u32 {
            let q = even_zeta_q(k);
            let lo = &q * num_traits::pow(p.lower(), 2 * k as usize);
            let hi = &q * num_traits::pow(p.upper(), 2 * k as usize);
            let z = zeta_numeric(2 * k, 30).unwrap();
            let pi_side = DecimalInterval::from_bounds(&lo, &hi, 45);
            assert!(z.intersects(&pi_side), "zeta({})", 2 * k);
            assert!(pi_side.radius() < rat(1, 1_000_000_000_000_000_000));
            assert!(z.contains(&pi_side.midpoint()) || pi_side.contains(&z.midpoint()));
        }
    }

    #[test]
    fn fixed_point_bounds_bracket_exact_sum() {
        let w = ball_rivoal_form(&[2, 1, 3], &[1, 2, 2], 3).unwrap();
        let r = phi(&w).unwrap();
        let exact = partial_sum(&r, 500);
        let (lo, hi) = partial_sum_bounds(&r, 500, 25).unwrap();
        assert!(lo <= exact && exact <= hi);
        assert!(&hi - &lo < rat(1, 1_000_000_000_000_000));
    }

    #[test]
    fn verification_examples() {
        let e = eulerian_form(2, 2).unwrap();
        let rep = verify_linear_form(&e, &coefficients(&e).unwrap(), 100_000, 30).unwrap();
        assert!(rep.pass);

        let b = ball_rivoal_form(&[2, 2], &[2, 2], 2).unwrap();
        let good = ZetaCoefficients::new(2, int(5), [(2, int(-3))].into()).unwrap();
        let rep = verify_linear_form(&b, &good, 100_000, 30).unwrap();
        assert!(rep.pass);
        assert!(rep.lhs.radius() < rat(1, 10_000) && rep.rhs.radius() < rat(1, 10_000));
        assert!(rep.lhs.contains_decimal_prefix("0.06519").unwrap());

        let bad = ZetaCoefficients::new(2, int(5), [(2, int(-2))].into()).unwrap();
        assert!(!verify_linear_form(&b, &bad, 100_000, 30).unwrap().pass);

        let diverge = ZetaIntegrand::new(crate::MultiLaurent::one(2), 2);
        assert_eq!(
            verify_linear_form(&diverge, &ZetaCoefficients::zero(2), 10, 10),
            Err(Error::NotIntegrable)
        );
    }
}
