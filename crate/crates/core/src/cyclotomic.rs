//! Exact arithmetic in the cyclotomic field Q(ζ_m).
//!
//! Scalars are stored in the power basis `1, ζ, …, ζ^{φ(m)-1}` modulo the
//! m-th cyclotomic polynomial. Only the nonzero coefficients are kept, sorted by
//! power, so two scalars are equal exactly when their term lists are equal.
//! [`CycScalar::coeffs`] gives the dense vector of length φ(m).

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Integer polynomial, coefficients listed from the constant term up.
pub type IntPoly = Vec<BigInt>;

pub fn euler_phi(m: u32) -> u32 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(m: u32) -> Vec<u32> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

/// Exact division by a monic integer polynomial. Panics if the division is not exact.
fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> IntPoly {
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    if rem.len() < den.len() {
        assert!(rem.iter().all(Zero::is_zero));
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "division left a remainder");
    quot
}

/// The m-th cyclotomic polynomial: `x^m - 1` divided by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(m: u32) -> IntPoly {
    assert!(m >= 1, "cyclotomic order must be positive");
    let mut poly = vec![BigInt::zero(); m as usize + 1];
    poly[0] = -BigInt::one();
    poly[m as usize] = BigInt::one();
    for d in divisors(m) {
        if d < m {
            poly = div_exact_monic(&poly, &cyclotomic_polynomial(d));
        }
    }
    while poly.len() > 1 && poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
    poly
}

/// Shared per-order data: the reduction modulus and the canonical form of every ζ^k.
pub struct CyclotomicField {
    order: u32,
    degree: usize,
    modulus: IntPoly,
    powers: Vec<Vec<(u32, BigInt)>>,
}

static FIELDS: OnceLock<Mutex<HashMap<u32, &'static CyclotomicField>>> = OnceLock::new();

impl CyclotomicField {
    /// Field of order `m`. Instances are created once per order and live for the
    /// rest of the process.
    pub fn get(order: u32) -> &'static CyclotomicField {
        let registry = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = registry.lock().expect("field registry poisoned");
        guard
            .entry(order)
            .or_insert_with(|| Box::leak(Box::new(CyclotomicField::build(order))))
    }

    fn build(order: u32) -> Self {
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![BigInt::zero(); degree.max(1)];
        cur[0] = BigInt::one();
        for _ in 0..order {
            powers.push(
                cur.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (i as u32, c.clone()))
                    .collect(),
            );
            // multiply by x and reduce with x^deg = -(modulus[0] + ... + modulus[deg-1] x^{deg-1})
            let top = cur[degree - 1].clone();
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for i in 0..degree {
                    cur[i] -= &top * &modulus[i];
                }
            }
        }
        CyclotomicField {
            order,
            degree,
            modulus,
            powers,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// φ(m), the dimension of the field over Q.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    pub fn zero(&'static self) -> CycScalar {
        CycScalar {
            field: self,
            terms: Vec::new(),
        }
    }

    pub fn one(&'static self) -> CycScalar {
        self.from_rational(BigRational::one())
    }

    pub fn from_int(&'static self, v: i64) -> CycScalar {
        self.from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(&'static self, v: BigRational) -> CycScalar {
        let terms = if v.is_zero() { Vec::new() } else { vec![(0, v)] };
        CycScalar { field: self, terms }
    }

    /// ζ^k in canonical form; `k` is reduced modulo the order.
    pub fn zeta_pow(&'static self, k: i64) -> CycScalar {
        let idx = k.rem_euclid(self.order as i64) as usize;
        CycScalar {
            field: self,
            terms: self.powers[idx]
                .iter()
                .map(|(i, c)| (*i, BigRational::from_integer(c.clone())))
                .collect(),
        }
    }

    /// Builds a scalar from a dense coefficient vector of length at most φ(m).
    pub fn from_coeffs(&'static self, coeffs: Vec<BigRational>) -> CycScalar {
        assert!(coeffs.len() <= self.degree, "too many coefficients");
        CycScalar {
            field: self,
            terms: coeffs
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as u32, c))
                .collect(),
        }
    }

    fn units(&self) -> impl Iterator<Item = u32> + '_ {
        (1..self.order.max(2)).filter(move |k| k.gcd(&self.order) == 1)
    }
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.order)
    }
}

/// An exact element of Q(ζ_m).
#[derive(Clone)]
pub struct CycScalar {
    field: &'static CyclotomicField,
    terms: Vec<(u32, BigRational)>,
}

impl CycScalar {
    pub fn field(&self) -> &'static CyclotomicField {
        self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Nonzero `(power, coefficient)` pairs in increasing power order.
    pub fn terms(&self) -> &[(u32, BigRational)] {
        &self.terms
    }

    /// Dense coefficient vector of length φ(m).
    pub fn coeffs(&self) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.field.degree];
        for (i, c) in &self.terms {
            out[*i as usize] = c.clone();
        }
        out
    }

    /// The rational value, when the scalar lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    /// The exponent `k` in `[0, m)` with `self = ζ^k`, if there is one.
    pub fn as_zeta_power(&self) -> Option<u32> {
        let m = self.field.order;
        (0..m).find(|&k| {
            let p = &self.field.powers[k as usize];
            p.len() == self.terms.len()
                && p.iter()
                    .zip(&self.terms)
                    .all(|((i, c), (j, d))| i == j && d.denom().is_one() && d.numer() == c)
        })
    }

    fn check_same_field(&self, other: &CycScalar) {
        assert_eq!(
            self.field.order, other.field.order,
            "mixing scalars of different cyclotomic orders"
        );
    }

    pub fn scale(&self, r: &BigRational) -> CycScalar {
        if r.is_zero() {
            return self.field.zero();
        }
        CycScalar {
            field: self.field,
            terms: self.terms.iter().map(|(i, c)| (*i, c * r)).collect(),
        }
    }

    /// Galois conjugate ζ ↦ ζ^k (k coprime to m).
    pub fn galois(&self, k: u32) -> CycScalar {
        let m = self.field.order as u64;
        let mut acc = vec![BigRational::zero(); self.field.degree];
        for (i, c) in &self.terms {
            let idx = (*i as u64 * k as u64 % m) as usize;
            add_scaled_power(&mut acc, &self.field.powers[idx], c);
        }
        self.field.from_coeffs(acc)
    }

    /// Multiplicative inverse; for general elements computed as the product of the
    /// nontrivial Galois conjugates divided by the norm.
    pub fn inverse(&self) -> Result<CycScalar> {
        match self.terms.as_slice() {
            [] => Err(Error::DivisionByZero {
                order: self.field.order,
            }),
            [(i, c)] => {
                let inv_c = c.recip();
                Ok(self.field.zeta_pow(-(*i as i64)).scale(&inv_c))
            }
            _ => {
                let mut conj = self.field.one();
                for k in self.field.units().filter(|&k| k != 1) {
                    conj = &conj * &self.galois(k);
                }
                let norm = (self * &conj)
                    .as_rational()
                    .expect("norm of a cyclotomic integer combination must be rational");
                Ok(conj.scale(&norm.recip()))
            }
        }
    }

    pub fn pow(&self, e: i64) -> Result<CycScalar> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut result = self.field.one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        Ok(result)
    }
}

fn add_scaled_power(acc: &mut [BigRational], power: &[(u32, BigInt)], c: &BigRational) {
    for (t, p) in power {
        let slot = &mut acc[*t as usize];
        if p.is_one() {
            *slot += c;
        } else if (-p).is_one() {
            *slot -= c;
        } else {
            *slot += c * BigRational::from_integer(p.clone());
        }
    }
}

fn merge(a: &[(u32, BigRational)], b: &[(u32, BigRational)], negate_b: bool) -> Vec<(u32, BigRational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = if negate_b { -&b[j].1 } else { b[j].1.clone() };
            out.push((b[j].0, v));
            j += 1;
        } else {
            let v = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.terms == other.terms
    }
}

impl Eq for CycScalar {}

impl Hash for CycScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.terms.hash(state);
    }
}

impl<'a> Add<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        self.check_same_field(rhs);
        CycScalar {
            field: self.field,
            terms: merge(&self.terms, &rhs.terms, false),
        }
    }
}

impl<'a> Sub<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        self.check_same_field(rhs);
        CycScalar {
            field: self.field,
            terms: merge(&self.terms, &rhs.terms, true),
        }
    }
}

impl AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: &CycScalar) {
        self.check_same_field(rhs);
        self.terms = merge(&self.terms, &rhs.terms, false);
    }
}

impl<'a> Mul<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        self.check_same_field(rhs);
        let field = self.field;
        if self.is_zero() || rhs.is_zero() {
            return field.zero();
        }
        let m = field.order;
        if let ([(i, a)], [(j, b)]) = (self.terms.as_slice(), rhs.terms.as_slice()) {
            let ab = a * b;
            let idx = ((i + j) % m) as usize;
            let mut acc = vec![BigRational::zero(); field.degree];
            add_scaled_power(&mut acc, &field.powers[idx], &ab);
            return field.from_coeffs(acc);
        }
        let mut acc = vec![BigRational::zero(); field.degree];
        for (i, a) in &self.terms {
            for (j, b) in &rhs.terms {
                let ab = a * b;
                add_scaled_power(&mut acc, &field.powers[((i + j) % m) as usize], &ab);
            }
        }
        field.from_coeffs(acc)
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            field: self.field,
            terms: self.terms.iter().map(|(i, c)| (*i, -c)).collect(),
        }
    }
}

impl Add for CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: CycScalar) -> CycScalar {
        &self + &rhs
    }
}

impl Sub for CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: CycScalar) -> CycScalar {
        &self - &rhs
    }
}

impl Mul for CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: CycScalar) -> CycScalar {
        &self * &rhs
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        if let Some(k) = self.as_zeta_power() {
            return match k {
                0 => write!(f, "1"),
                1 => write!(f, "q"),
                _ => write!(f, "q^{k}"),
            };
        }
        for (pos, (i, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if pos == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (*i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{mag}*q^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} [Q(zeta_{})]", self.field.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> IntPoly {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cyclotomic_polynomials_small_orders() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(3), ints(&[1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(9), ints(&[1, 0, 0, 1, 0, 0, 1]));
        assert_eq!(
            cyclotomic_polynomial(25),
            ints(&[1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1])
        );
        for m in 1..40 {
            assert_eq!(cyclotomic_polynomial(m).len() as u32 - 1, euler_phi(m));
        }
    }

    #[test]
    fn zeta_powers_wrap_and_are_primitive() {
        let f = CyclotomicField::get(9);
        assert!(f.zeta_pow(0).is_one());
        assert!(f.zeta_pow(9).is_one());
        assert!(f.zeta_pow(-9).is_one());
        for k in 1..9 {
            assert!(!f.zeta_pow(k).is_one());
        }
        // ζ^6 = -1 - ζ^3 modulo x^6 + x^3 + 1
        assert_eq!(f.zeta_pow(6), f.from_coeffs(vec![rat(-1, 1), rat(0, 1), rat(0, 1), rat(-1, 1)]));
        assert!((&f.zeta_pow(4) * &f.zeta_pow(5)).is_one());
    }

    #[test]
    fn inverse_examples() {
        let f = CyclotomicField::get(3);
        let a = &f.one() + &f.zeta_pow(1);
        assert_eq!(a.inverse().unwrap(), -f.zeta_pow(1));
        assert!(f.zero().inverse().is_err());
        let z = f.zeta_pow(1);
        assert!((&z + &(-&z)).is_zero());
    }

    #[test]
    fn general_inverse_order_25() {
        let f = CyclotomicField::get(25);
        let a = f.from_coeffs(vec![rat(3, 2), rat(-1, 1), rat(0, 1), rat(5, 7), rat(2, 1)]);
        assert!((&a * &a.inverse().unwrap()).is_one());
    }

    #[test]
    fn discrete_log_and_display() {
        let f = CyclotomicField::get(25);
        for k in 0..25 {
            assert_eq!(f.zeta_pow(k).as_zeta_power(), Some(k as u32));
        }
        assert_eq!(f.from_int(2).as_zeta_power(), None);
        assert_eq!(f.zeta_pow(3).to_string(), "q^3");
    }
}
