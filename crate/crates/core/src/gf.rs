//! Arithmetic in GF(p^m).
//!
//! Elements are stored as integers in `[0, q)` whose base-p digits are the
//! coordinates in the polynomial basis `1, α, α², …` (digit `i` is the
//! coefficient of `α^i`). The modulus is a monic irreducible polynomial over
//! GF(p), given constant term first.

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

// Polynomials stored with enough room for the product of two residues.
const MAX_DEGREE: usize = 16;

/// Validated parameters of a finite field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldParams {
    p: u32,
    m: u32,
    q: u32,
    poly: Vec<u32>,
}

/// Shared handle to a field. Cloning is cheap.
#[derive(Debug, Clone)]
pub struct Field(Arc<FieldParams>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl Deref for Field {
    type Target = FieldParams;

    fn deref(&self) -> &FieldParams {
        &self.0
    }
}

/// Default modulus for the fields we ship with, constant term first.
fn builtin_poly(p: u32, m: u32) -> Option<Vec<u32>> {
    let poly: &[u32] = match (p, m) {
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (2, 4) => &[1, 1, 0, 0, 1],
        (2, 5) => &[1, 0, 1, 0, 0, 1],
        (2, 6) => &[1, 1, 0, 0, 0, 0, 1],
        (3, 2) => &[1, 0, 1],
        (3, 3) => &[1, 2, 0, 1],
        (5, 2) => &[2, 0, 1],
        (7, 2) => &[1, 0, 1],
        _ => return None,
    };
    Some(poly.to_vec())
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = (base % p) as u64;
    let p64 = p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p64;
        }
        b = b * b % p64;
        exp >>= 1;
    }
    acc as u32
}

fn trim(poly: &mut Vec<u32>) {
    while poly.len() > 1 && *poly.last().unwrap() == 0 {
        poly.pop();
    }
}

fn is_zero_poly(poly: &[u32]) -> bool {
    poly.iter().all(|&c| c == 0)
}

/// Remainder of `num` modulo `den` over GF(p). `den` must be nonzero.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut rem = num.to_vec();
    let mut den = den.to_vec();
    trim(&mut rem);
    trim(&mut den);
    let dd = den.len() - 1;
    let lead_inv = pow_mod(den[dd], p - 2, p);
    while rem.len() > dd && !is_zero_poly(&rem) {
        let shift = rem.len() - 1 - dd;
        let factor = (rem[rem.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &c) in den.iter().enumerate() {
            let sub = (factor as u64 * c as u64 % p as u64) as u32;
            rem[shift + i] = (rem[shift + i] + p - sub) % p;
        }
        trim(&mut rem);
    }
    rem
}

/// `(quotient, remainder)` of polynomial division over GF(p).
fn poly_divmod(num: &[u32], den: &[u32], p: u32) -> (Vec<u32>, Vec<u32>) {
    let mut rem = num.to_vec();
    let mut den = den.to_vec();
    trim(&mut rem);
    trim(&mut den);
    let dd = den.len() - 1;
    let lead_inv = pow_mod(den[dd], p - 2, p);
    let mut quot = vec![0u32; rem.len().saturating_sub(dd).max(1)];
    while rem.len() > dd && !is_zero_poly(&rem) {
        let shift = rem.len() - 1 - dd;
        let factor = (rem[rem.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        quot[shift] = factor;
        for (i, &c) in den.iter().enumerate() {
            let sub = (factor as u64 * c as u64 % p as u64) as u32;
            rem[shift + i] = (rem[shift + i] + p - sub) % p;
        }
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let len = a.len().max(b.len());
    let mut out: Vec<u32> = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

/// Irreducibility by trial division with every monic polynomial of degree
/// `1..=deg/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let m = poly.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut v = low;
            for _ in 0..d {
                divisor.push((v % p as u64) as u32);
                v /= p as u64;
            }
            divisor.push(1);
            if is_zero_poly(&poly_rem(poly, &divisor, p)) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds GF(p^m). When `poly` is `None`, prime fields use the placeholder
    /// modulus `x` and extension fields fall back to the built-in table.
    pub fn new(p: u32, m: u32, poly: Option<&[u32]>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= MAX_ORDER as u64)
            .ok_or(Error::FieldTooLarge { p, m })? as u32;

        let poly = match poly {
            Some(c) => c.to_vec(),
            None if m == 1 => vec![0, 1],
            None => builtin_poly(p, m).ok_or(Error::NoBuiltinPolynomial { p, m })?,
        };
        if poly.len() != m as usize + 1 {
            return Err(Error::InvalidPolynomial(format!(
                "expected {} coefficients for degree {m}, got {}",
                m + 1,
                poly.len()
            )));
        }
        if let Some(&c) = poly.iter().find(|&&c| c >= p) {
            return Err(Error::InvalidPolynomial(format!(
                "coefficient {c} is not reduced mod {p}"
            )));
        }
        if poly[m as usize] != 1 {
            return Err(Error::InvalidPolynomial("polynomial is not monic".into()));
        }
        if !is_irreducible(&poly, p) {
            return Err(Error::ReduciblePolynomial(poly));
        }
        Ok(Field(Arc::new(FieldParams { p, m, q, poly })))
    }

    /// GF(p) for a prime `p`.
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// Wraps `value` as an element of this field.
    pub fn elem(&self, value: u32) -> Result<FieldElement> {
        self.check(value)?;
        Ok(FieldElement {
            value,
            field: self.clone(),
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            value: 0,
            field: self.clone(),
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            value: 1,
            field: self.clone(),
        }
    }

    /// All elements in value order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |value| FieldElement {
            value,
            field: self.clone(),
        })
    }
}

impl FieldParams {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first.
    pub fn poly(&self) -> &[u32] {
        &self.poly
    }

    pub fn check(&self, value: u32) -> Result<()> {
        if value < self.q {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { value, q: self.q })
        }
    }

    fn digits(&self, mut v: u32) -> [u32; MAX_DEGREE] {
        let mut out = [0u32; MAX_DEGREE];
        for d in out.iter_mut().take(self.m as usize) {
            *d = v % self.p;
            v /= self.p;
        }
        out
    }

    fn pack_digits(&self, digits: &[u32]) -> u32 {
        digits[..self.m as usize]
            .iter()
            .rev()
            .fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut out = [0u32; MAX_DEGREE];
        for i in 0..self.m as usize {
            out[i] = (da[i] + db[i]) % self.p;
        }
        self.pack_digits(&out)
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let da = self.digits(a);
        let mut out = [0u32; MAX_DEGREE];
        for i in 0..self.m as usize {
            out[i] = (self.p - da[i]) % self.p;
        }
        self.pack_digits(&out)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Polynomial product reduced modulo the field polynomial.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.m == 1 {
            return (a as u64 * b as u64 % p) as u32;
        }
        let m = self.m as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..m {
            if da[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        // x^m = -(c_0 + c_1 x + ... + c_{m-1} x^{m-1})
        for deg in (m..2 * m - 1).rev() {
            let lead = prod[deg];
            if lead == 0 {
                continue;
            }
            prod[deg] = 0;
            for i in 0..m {
                let c = self.poly[i] as u64;
                prod[deg - m + i] = (prod[deg - m + i] + (p - lead) * c) % p;
            }
        }
        let mut out = [0u32; MAX_DEGREE];
        for i in 0..m {
            out[i] = prod[i] as u32;
        }
        self.pack_digits(&out)
    }

    pub fn pow(&self, a: u32, mut exp: u64) -> u32 {
        let mut acc = 1;
        let mut base = a;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm over GF(p)[x].
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let p = self.p;
        let mut a_poly: Vec<u32> = self.digits(a)[..self.m as usize].to_vec();
        trim(&mut a_poly);
        // Invariant: s_i * a ≡ r_i (mod poly).
        let (mut r0, mut r1) = (self.poly.clone(), a_poly);
        let (mut s0, mut s1) = (vec![0u32], vec![1u32]);
        while !(r1.len() == 1 && r1[0] != 0) {
            let (quot, rem) = poly_divmod(&r0, &r1, p);
            let s2 = poly_sub(&s0, &poly_mul(&quot, &s1, p), p);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant; scale s1 by its inverse.
        let scale = pow_mod(r1[0], p - 2, p);
        let mut out = [0u32; MAX_DEGREE];
        for (i, &c) in s1.iter().enumerate().take(self.m as usize) {
            out[i] = (c as u64 * scale as u64 % p as u64) as u32;
        }
        Some(self.pack_digits(&out))
    }

    /// Inverse as `a^(q-2)`.
    pub fn inv_by_pow(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.pow(a, self.q as u64 - 2))
    }

    /// Field trace `Σ_{i<m} x^{p^i}`, returned as an integer mod p.
    pub fn trace(&self, x: u32) -> u32 {
        let mut term = x;
        let mut sum = x;
        for _ in 1..self.m {
            term = self.pow(term, self.p as u64);
            sum = self.add(sum, term);
        }
        debug_assert!(sum < self.p, "trace left the prime subfield");
        sum
    }

    /// `trace(v)` for every `v` in value order.
    pub fn trace_table(&self) -> Vec<u32> {
        (0..self.q).map(|v| self.trace(v)).collect()
    }
}

impl fmt::Display for FieldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; poly=[", self.p, self.m)?;
        for (i, c) in self.poly.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("])")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An element of a specific field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldElement {
    value: u32,
    field: Field,
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn with(&self, value: u32) -> FieldElement {
        FieldElement {
            value,
            field: self.field.clone(),
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn neg(&self) -> FieldElement {
        self.with(self.field.neg(self.value))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        self.field
            .inv(self.value)
            .map(|v| self.with(v))
            .ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, exp: u64) -> FieldElement {
        self.with(self.field.pow(self.value, exp))
    }

    pub fn trace(&self) -> u32 {
        self.field.trace(self.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf4() -> Field {
        Field::new(2, 2, Some(&[1, 1, 1])).unwrap()
    }

    #[test]
    fn construction() {
        let f2 = Field::new(2, 1, None).unwrap();
        assert_eq!((f2.p(), f2.m(), f2.q()), (2, 1, 2));
        assert_eq!(gf4().q(), 4);
        assert_eq!(
            Field::new(2, 2, Some(&[1, 0, 1])),
            Err(Error::ReduciblePolynomial(vec![1, 0, 1]))
        );
        assert_eq!(Field::new(4, 1, None), Err(Error::NonPrimeCharacteristic(4)));
        assert_eq!(Field::new(1, 1, None), Err(Error::NonPrimeCharacteristic(1)));
        assert_eq!(Field::new(2, 0, None), Err(Error::ZeroDegree));
        assert_eq!(
            Field::new(2, 7, None),
            Err(Error::NoBuiltinPolynomial { p: 2, m: 7 })
        );
        assert_eq!(Field::new(2, 17, None), Err(Error::FieldTooLarge { p: 2, m: 17 }));
        assert!(matches!(
            Field::new(2, 2, Some(&[1, 1, 0])),
            Err(Error::InvalidPolynomial(_))
        ));
        assert!(matches!(
            Field::new(3, 2, Some(&[1, 3, 1])),
            Err(Error::InvalidPolynomial(_))
        ));
        // x^7 + x + 1 is irreducible over GF(2).
        assert_eq!(Field::new(2, 7, Some(&[1, 1, 0, 0, 0, 0, 0, 1])).unwrap().q(), 128);
    }

    #[test]
    fn builtin_table_is_irreducible() {
        for (p, m) in [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let f = Field::new(p, m, None).unwrap();
            assert_eq!(f.q(), p.pow(m));
        }
    }

    #[test]
    fn irreducibility_matches_root_test_for_quadratics() {
        // Degree 2 and 3 polynomials are irreducible iff they have no root.
        for p in [2u32, 3, 5] {
            for c0 in 0..p {
                for c1 in 0..p {
                    let poly = [c0, c1, 1];
                    let has_root = (0..p).any(|x| (c0 + c1 * x + x * x) % p == 0);
                    assert_eq!(is_irreducible(&poly, p), !has_root, "{poly:?} mod {p}");
                }
            }
        }
    }

    #[test]
    fn small_examples() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        let f4 = gf4();
        assert_eq!(f2.add(1, 1), 0);
        assert_eq!(f3.add(2, 2), 1);
        assert_eq!(f4.add(2, 2), 0);
        // α·α = α + 1
        assert_eq!(f4.mul(2, 2), 3);
        assert_eq!(f3.mul(2, 2), 1);
        for a in 0..4 {
            assert_eq!(f4.mul(0, a), 0);
        }
        assert_eq!(f4.inv(1), Some(1));
        assert_eq!(f4.inv(2), Some(3));
        assert_eq!(f4.inv(0), None);
        assert_eq!(f4.trace(2), 1);
        assert_eq!(f4.trace(0), 0);
        assert_eq!(f4.trace(1), 0);
        for x in 0..3 {
            assert_eq!(f3.trace(x), x);
        }
    }

    #[test]
    fn checked_elements() {
        let f4 = gf4();
        let f2 = Field::prime(2).unwrap();
        let a = f4.elem(2).unwrap();
        assert_eq!(a.add(&a).unwrap().value(), 0);
        assert_eq!(a.mul(&a).unwrap().value(), 3);
        assert_eq!(a.inv().unwrap().value(), 3);
        assert_eq!(a.trace(), 1);
        assert_eq!(f4.zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(a.add(&f2.one()), Err(Error::FieldMismatch));
        assert_eq!(f4.elem(4), Err(Error::ElementOutOfRange { value: 4, q: 4 }));
        // Same parameters built twice are the same field.
        assert_eq!(a.add(&gf4().one()).unwrap().value(), 3);
    }

    #[test]
    fn display() {
        assert_eq!(gf4().to_string(), "GF(2^2; poly=[1,1,1])");
        assert_eq!(Field::prime(5).unwrap().to_string(), "GF(5^1; poly=[0,1])");
        assert_eq!(gf4().elem(3).unwrap().to_string(), "3");
    }

    #[test]
    fn inverse_routes_agree_on_larger_fields() {
        let f = Field::new(2, 8, Some(&[1, 1, 0, 1, 1, 0, 0, 0, 1])).unwrap();
        for a in 1..f.q() {
            let i = f.inv(a).unwrap();
            assert_eq!(f.mul(a, i), 1);
            assert_eq!(Some(i), f.inv_by_pow(a));
        }
    }
}
