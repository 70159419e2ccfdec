//! The coefficient field `k_K = F_{p^m}` in a polynomial basis over `F_p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::padic::is_prime;

/// `F_p[x] / (modulus)` for a monic irreducible modulus of degree `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueField {
    p: u32,
    /// Monic modulus, coefficients low degree first; length `m + 1`.
    modulus: Vec<u32>,
}

/// Element of a [`ResidueField`]; coefficients low degree first, length `m`.
#[derive(Clone)]
pub struct KKElem {
    field: Arc<ResidueField>,
    coeffs: Vec<u32>,
}

fn mulmod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn powmod(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `m` over `F_p`.
fn poly_rem(mut a: Vec<u32>, m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    trim(&mut a);
    while a.len() > dm {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let sub = mulmod(lead, c, p);
            a[shift + i] = (a[shift + i] + p - sub) % p;
        }
        trim(&mut a);
    }
    a
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    if m <= 1 {
        return true;
    }
    // Trial division by every monic polynomial of degree 1..=m/2.
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                cand.push((x % p as u64) as u32);
                x /= p as u64;
            }
            cand.push(1);
            if poly_rem(modulus.to_vec(), &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl ResidueField {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Arc<Self>> {
        Self::new(p, vec![0, 1])
    }

    /// `F_p[x]/(modulus)`; the modulus must be monic and irreducible.
    pub fn new(p: u32, modulus: Vec<u32>) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidInput(
                "modulus must be monic of degree at least 1".into(),
            ));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidInput("modulus coefficient out of range".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidInput(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        Ok(Arc::new(ResidueField { p, modulus }))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// `p^m`.
    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.degree() as u32)
    }

    pub fn zero(self: &Arc<Self>) -> KKElem {
        KKElem {
            field: Arc::clone(self),
            coeffs: vec![0; self.degree()],
        }
    }

    pub fn one(self: &Arc<Self>) -> KKElem {
        self.from_u64(1)
    }

    /// Image of an integer under `Z → F_p ⊂ k_K`.
    pub fn from_u64(self: &Arc<Self>, x: u64) -> KKElem {
        let mut e = self.zero();
        e.coeffs[0] = (x % self.p as u64) as u32;
        e
    }

    pub fn from_i64(self: &Arc<Self>, x: i64) -> KKElem {
        let p = self.p as i64;
        self.from_u64(x.rem_euclid(p) as u64)
    }

    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[u32]) -> Result<KKElem> {
        if coeffs.len() > self.degree() || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidInput(format!(
                "{coeffs:?} is not an element of F_{}^{}",
                self.p,
                self.degree()
            )));
        }
        let mut e = self.zero();
        e.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        Ok(e)
    }

    /// All elements, in coefficient-lexicographic order.
    pub fn elements(self: &Arc<Self>) -> Vec<KKElem> {
        let m = self.degree();
        (0..self.order())
            .map(|mut idx| {
                let mut e = self.zero();
                for i in 0..m {
                    e.coeffs[i] = (idx % self.p as u64) as u32;
                    idx /= self.p as u64;
                }
                e
            })
            .collect()
    }
}

impl KKElem {
    pub fn field(&self) -> &Arc<ResidueField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn same_field(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "k_K elements from different fields"
        );
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.same_field(other);
        let p = self.field.p;
        if self.field.degree() == 1 {
            return KKElem {
                field: Arc::clone(&self.field),
                coeffs: vec![mulmod(self.coeffs[0], other.coeffs[0], p)],
            };
        }
        let m = self.field.degree();
        let mut prod = vec![0u32; 2 * m - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulmod(a, b, p)) % p;
            }
        }
        let mut coeffs = poly_rem(prod, &self.field.modulus, p);
        coeffs.resize(m, 0);
        KKElem {
            field: Arc::clone(&self.field),
            coeffs,
        }
    }

    /// Non-negative power.
    pub fn pow(&self, mut e: u64) -> Self {
        if self.field.degree() == 1 {
            return KKElem {
                field: Arc::clone(&self.field),
                coeffs: vec![powmod(self.coeffs[0], e, self.field.p)],
            };
        }
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Integer power; negative exponents need a non-zero base.
    pub fn powi(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            Some(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(self.pow(self.field.order() - 2))
    }

    /// Multiplicative order of a non-zero element.
    pub fn multiplicative_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut x = self.clone();
        let mut k = 1;
        while !x.is_one() {
            x = &x * self;
            k += 1;
        }
        Some(k)
    }
}

impl PartialEq for KKElem {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
            && self.coeffs == other.coeffs
    }
}

impl Eq for KKElem {}

impl fmt::Debug for KKElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KKElem({self})")
    }
}

/// `m = 1` elements print as an integer; otherwise as `c0,c1,…` (low degree first).
impl fmt::Display for KKElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Add<&KKElem> for &KKElem {
    type Output = KKElem;
    fn add(self, rhs: &KKElem) -> KKElem {
        self.same_field(rhs);
        let p = self.field.p;
        KKElem {
            field: Arc::clone(&self.field),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| (a + b) % p)
                .collect(),
        }
    }
}

impl Neg for &KKElem {
    type Output = KKElem;
    fn neg(self) -> KKElem {
        let p = self.field.p;
        KKElem {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|&a| (p - a) % p).collect(),
        }
    }
}

impl Sub<&KKElem> for &KKElem {
    type Output = KKElem;
    fn sub(self, rhs: &KKElem) -> KKElem {
        self + &(-rhs)
    }
}

impl Mul<&KKElem> for &KKElem {
    type Output = KKElem;
    fn mul(self, rhs: &KKElem) -> KKElem {
        self.mul_ref(rhs)
    }
}

impl Add for KKElem {
    type Output = KKElem;
    fn add(self, rhs: KKElem) -> KKElem {
        &self + &rhs
    }
}

impl Mul for KKElem {
    type Output = KKElem;
    fn mul(self, rhs: KKElem) -> KKElem {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = ResidueField::prime(5).unwrap();
        let two = f.from_u64(2);
        let three = f.from_u64(3);
        assert!((&two * &three).is_one());
        assert_eq!(two.inv().unwrap(), three);
        assert!((&two + &three).is_zero());
        assert_eq!(f.from_i64(-1), f.from_u64(4));
        assert_eq!(two.powi(-1).unwrap(), three);
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn rejects_reducible_modulus() {
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(ResidueField::new(2, vec![1, 0, 1]).is_err());
        assert!(ResidueField::new(2, vec![1, 1, 1]).is_ok());
        assert!(ResidueField::new(4, vec![0, 1]).is_err());
        assert!(ResidueField::new(3, vec![1, 2]).is_err());
    }

    #[test]
    fn f9_orders_divide_eight() {
        // x^2 + 1 is irreducible over F_3
        let f = ResidueField::new(3, vec![1, 0, 1]).unwrap();
        assert_eq!(f.order(), 9);
        for x in f.elements().into_iter().filter(|x| !x.is_zero()) {
            let ord = x.multiplicative_order().unwrap();
            assert_eq!(8 % ord, 0, "{x} has order {ord}");
            assert!((&x * &x.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn f8_distributivity() {
        let f = ResidueField::new(2, vec![1, 1, 0, 1]).unwrap();
        let els = f.elements();
        for a in &els {
            for b in &els {
                for c in els.iter().step_by(3) {
                    assert_eq!(a * &(b + c), &(a * b) + &(a * c));
                }
            }
        }
    }
}
