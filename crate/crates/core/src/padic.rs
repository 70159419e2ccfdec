//! Capped-relative-precision elements of `Q_p`.
//!
//! A non-zero value is stored as `p^val * unit + O(p^(val + prec))` where the
//! unit is an integer in `[1, p^prec)` prime to `p`. Zero is only ever known
//! to some absolute precision `A`, written `O(p^A)`.
//!
//! Precision propagation:
//!
//! * sums keep the minimum of the operands' absolute precisions, so
//!   cancellation lowers the relative precision;
//! * products keep the minimum of the relative precisions;
//! * inversion keeps the relative precision.

use std::cmp::min;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::residue::{KKElem, ResidueField};

/// Working precision used when none is configured.
pub const DEFAULT_PRECISION: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PAdic {
    p: u32,
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Zero { abs_prec: i64 },
    Nonzero { val: i64, prec: u32, unit: BigUint },
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn p_pow(p: u32, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

/// Strips every factor of `p` from `x`, returning how many were removed.
fn strip_p(x: &mut BigUint, p: u32) -> u32 {
    debug_assert!(!x.is_zero());
    let mut count = 0;
    loop {
        let (q, r) = x.div_rem(&BigUint::from(p));
        if !r.is_zero() {
            return count;
        }
        *x = q;
        count += 1;
    }
}

impl PAdic {
    /// `O(p^abs_prec)`.
    pub fn zero(p: u32, abs_prec: i64) -> Self {
        PAdic {
            p,
            repr: Repr::Zero { abs_prec },
        }
    }

    pub fn one(p: u32, prec: u32) -> Self {
        Self::from_parts(p, 0, prec.max(1), BigUint::one())
    }

    /// `p^k` to relative precision `prec`.
    pub fn p_power(p: u32, k: i64, prec: u32) -> Self {
        Self::from_parts(p, k, prec.max(1), BigUint::one())
    }

    fn from_parts(p: u32, val: i64, prec: u32, unit: BigUint) -> Self {
        debug_assert!(prec >= 1);
        debug_assert!(!(&unit % p).is_zero());
        PAdic {
            p,
            repr: Repr::Nonzero { val, prec, unit },
        }
    }

    /// The class of `num/den` with `prec` correct digits.
    pub fn from_rational(num: &BigInt, den: &BigInt, p: u32, prec: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DenominatorZero);
        }
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if prec == 0 {
            return Err(Error::InvalidInput("precision must be at least 1".into()));
        }
        if num.is_zero() {
            return Ok(Self::zero(p, prec as i64));
        }
        let mut n = num.magnitude().clone();
        let mut d = den.magnitude().clone();
        let vn = strip_p(&mut n, p) as i64;
        let vd = strip_p(&mut d, p) as i64;
        let modulus = p_pow(p, prec);
        let d_inv = d
            .modinv(&modulus)
            .expect("denominator stripped of p is invertible mod p^prec");
        let mut unit = (n % &modulus) * d_inv % &modulus;
        if (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus) {
            unit = &modulus - unit;
        }
        Ok(Self::from_parts(p, vn - vd, prec, unit))
    }

    pub fn from_i64(x: i64, p: u32, prec: u32) -> Result<Self> {
        Self::from_rational(&BigInt::from(x), &BigInt::one(), p, prec)
    }

    /// Parses `"num/den"` or `"num"`.
    pub fn parse_rational(s: &str, p: u32, prec: u32) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (
                a.trim().parse::<BigInt>().map_err(|_| bad())?,
                b.trim().parse::<BigInt>().map_err(|_| bad())?,
            ),
            None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
        };
        Self::from_rational(&num, &den, p, prec)
    }

    /// `p^val · unit` to relative precision `prec`; `unit` must be prime to `p`.
    pub fn from_unit(p: u32, val: i64, unit: &BigUint, prec: u32) -> Result<Self> {
        if prec == 0 {
            return Err(Error::InvalidInput("precision must be at least 1".into()));
        }
        if (unit % p).is_zero() {
            return Err(Error::InvalidInput(format!("{unit} is divisible by {p}")));
        }
        Ok(Self::from_parts(p, val, prec, unit % p_pow(p, prec)))
    }

    /// Builds a value from little-endian base-`p` digits attached at `val`.
    /// An empty digit list means `O(p^val)`.
    pub fn from_digits(p: u32, val: i64, digits: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= p) {
            return Err(Error::InvalidInput(format!("digit {d} out of range for p = {p}")));
        }
        let Some(lead) = digits.iter().position(|&d| d != 0) else {
            return Ok(Self::zero(p, val + digits.len() as i64));
        };
        let mut unit = BigUint::zero();
        for &d in digits[lead..].iter().rev() {
            unit = unit * p + d;
        }
        Ok(Self::from_parts(
            p,
            val + lead as i64,
            (digits.len() - lead) as u32,
            unit,
        ))
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    /// True when no non-zero digit is known, i.e. the value is `O(p^A)`.
    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    /// Exact valuation of a non-zero value; `None` for `O(p^A)`.
    pub fn valuation(&self) -> Option<i64> {
        match self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { val, .. } => Some(val),
        }
    }

    /// Exponent `A` of the `O(p^A)` error term.
    pub fn abs_prec(&self) -> i64 {
        match self.repr {
            Repr::Zero { abs_prec } => abs_prec,
            Repr::Nonzero { val, prec, .. } => val + prec as i64,
        }
    }

    /// Number of known digits; zero for `O(p^A)`.
    pub fn rel_prec(&self) -> u32 {
        match self.repr {
            Repr::Zero { .. } => 0,
            Repr::Nonzero { prec, .. } => prec,
        }
    }

    pub fn unit(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Nonzero { unit, .. } => Some(unit),
        }
    }

    /// Little-endian base-`p` digits of the unit, padded to the relative precision.
    pub fn digits(&self) -> Vec<u32> {
        let Repr::Nonzero { prec, unit, .. } = &self.repr else {
            return Vec::new();
        };
        let mut out = Vec::with_capacity(*prec as usize);
        let mut u = unit.clone();
        for _ in 0..*prec {
            let (q, r) = u.div_rem(&BigUint::from(self.p));
            out.push(r.to_u32().unwrap_or(0));
            u = q;
        }
        out
    }

    /// The rational number `unit * p^val` represented by the stored digits.
    pub fn to_rational(&self) -> (BigInt, BigInt) {
        match &self.repr {
            Repr::Zero { .. } => (BigInt::zero(), BigInt::one()),
            Repr::Nonzero { val, unit, .. } => {
                let u = BigInt::from(unit.clone());
                let pk = BigInt::from(p_pow(self.p, val.unsigned_abs() as u32));
                if *val >= 0 {
                    (u * pk, BigInt::one())
                } else {
                    (u, pk)
                }
            }
        }
    }

    /// Caps the absolute precision at `cap`.
    pub fn truncate_abs(&self, cap: i64) -> Self {
        match &self.repr {
            Repr::Zero { abs_prec } => Self::zero(self.p, min(*abs_prec, cap)),
            Repr::Nonzero { val, prec, unit } => {
                if cap <= *val {
                    Self::zero(self.p, cap)
                } else {
                    let new_prec = min(*prec as i64, cap - val) as u32;
                    if new_prec == *prec {
                        self.clone()
                    } else {
                        Self::from_parts(self.p, *val, new_prec, unit % p_pow(self.p, new_prec))
                    }
                }
            }
        }
    }

    /// Caps the relative precision at `prec` (zero values keep their bound).
    pub fn truncate_rel(&self, prec: u32) -> Self {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Nonzero { val, .. } => self.truncate_abs(val + prec.max(1) as i64),
        }
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "p-adic operands over different primes");
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.check_prime(other);
        let p = self.p;
        match (&self.repr, &other.repr) {
            (Repr::Zero { abs_prec: a }, Repr::Zero { abs_prec: b }) => Self::zero(p, min(*a, *b)),
            (Repr::Zero { abs_prec }, _) => other.truncate_abs(*abs_prec),
            (_, Repr::Zero { abs_prec }) => self.truncate_abs(*abs_prec),
            (
                Repr::Nonzero {
                    val: v1,
                    prec: n1,
                    unit: u1,
                },
                Repr::Nonzero {
                    val: v2,
                    prec: n2,
                    unit: u2,
                },
            ) => {
                let v = min(*v1, *v2);
                let abs = min(v1 + *n1 as i64, v2 + *n2 as i64);
                let k = (abs - v) as u32;
                let modulus = p_pow(p, k);
                let shifted = |u: &BigUint, s: i64| -> BigUint {
                    if s >= k as i64 {
                        BigUint::zero()
                    } else if s == 0 {
                        u.clone()
                    } else {
                        u * p_pow(p, s as u32)
                    }
                };
                let mut sum = (shifted(u1, v1 - v) + shifted(u2, v2 - v)) % &modulus;
                if sum.is_zero() {
                    return Self::zero(p, abs);
                }
                let t = strip_p(&mut sum, p);
                Self::from_parts(p, v + t as i64, k - t, sum)
            }
        }
    }

    pub fn neg_ref(&self) -> Self {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Nonzero { val, prec, unit } => {
                Self::from_parts(self.p, *val, *prec, p_pow(self.p, *prec) - unit)
            }
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        self.check_prime(other);
        let p = self.p;
        match (&self.repr, &other.repr) {
            (Repr::Zero { abs_prec: a }, Repr::Zero { abs_prec: b }) => Self::zero(p, a + b),
            (Repr::Zero { abs_prec }, Repr::Nonzero { val, .. })
            | (Repr::Nonzero { val, .. }, Repr::Zero { abs_prec }) => Self::zero(p, abs_prec + val),
            (
                Repr::Nonzero {
                    val: v1,
                    prec: n1,
                    unit: u1,
                },
                Repr::Nonzero {
                    val: v2,
                    prec: n2,
                    unit: u2,
                },
            ) => {
                let prec = min(*n1, *n2);
                let unit = (u1 * u2) % p_pow(p, prec);
                Self::from_parts(p, v1 + v2, prec, unit)
            }
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::DivisionByZero),
            Repr::Nonzero { val, prec, unit } => {
                let modulus = p_pow(self.p, *prec);
                let inv = unit
                    .modinv(&modulus)
                    .expect("units are invertible mod p^prec");
                Ok(Self::from_parts(self.p, -val, *prec, inv))
            }
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inv()?))
    }

    /// Decides `ν(self) ≥ k` from the known digits.
    pub fn valuation_at_least(&self, k: i64) -> Result<bool> {
        match self.repr {
            Repr::Nonzero { val, .. } => Ok(val >= k),
            Repr::Zero { abs_prec } if abs_prec >= k => Ok(true),
            Repr::Zero { abs_prec } => Err(Error::precision(format!(
                "value known only as O({}^{abs_prec}); cannot decide valuation >= {k}",
                self.p
            ))),
        }
    }

    /// Leading base-`p` digit of a non-zero value.
    pub fn leading_digit(&self) -> Result<u32> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::ZeroArgument),
            Repr::Nonzero { unit, .. } => Ok((unit % self.p).to_u32().unwrap_or(0)),
        }
    }

    /// The leading digit viewed in `k_K`.
    pub fn unit_residue(&self, field: &Arc<ResidueField>) -> Result<KKElem> {
        if field.characteristic() != self.p {
            return Err(Error::PrimeMismatch(self.p, field.characteristic()));
        }
        Ok(field.from_u64(self.leading_digit()? as u64))
    }

    /// True when `self − other` vanishes to the known precision.
    pub fn eq_to_precision(&self, other: &Self) -> bool {
        self.sub_ref(other).is_zero()
    }

    /// Number of digits to which `self` and `other` agree, measured from
    /// valuation `base`: the largest `d` with `self ≡ other mod p^(base+d)`,
    /// bounded by what is known about the difference.
    pub fn agreement_from(&self, other: &Self, base: i64) -> i64 {
        let diff = self.sub_ref(other);
        match diff.valuation() {
            Some(v) => v - base,
            None => diff.abs_prec() - base,
        }
    }
}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero { abs_prec } => write!(f, "O({}^{})", self.p, abs_prec),
            Repr::Nonzero { val, prec, unit } => write!(
                f,
                "{p}^{val} * {unit} + O({p}^({}))",
                val + *prec as i64,
                p = self.p
            ),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&PAdic> for &PAdic {
            type Output = PAdic;
            fn $method(self, rhs: &PAdic) -> PAdic {
                self.$inner(rhs)
            }
        }
        impl $tr<PAdic> for PAdic {
            type Output = PAdic;
            fn $method(self, rhs: PAdic) -> PAdic {
                (&self).$inner(&rhs)
            }
        }
        impl $tr<&PAdic> for PAdic {
            type Output = PAdic;
            fn $method(self, rhs: &PAdic) -> PAdic {
                (&self).$inner(rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for &PAdic {
    type Output = PAdic;
    fn neg(self) -> PAdic {
        self.neg_ref()
    }
}

impl Neg for PAdic {
    type Output = PAdic;
    fn neg(self) -> PAdic {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(num: i64, den: i64, p: u32, prec: u32) -> PAdic {
        PAdic::from_rational(&BigInt::from(num), &BigInt::from(den), p, prec).unwrap()
    }

    #[test]
    fn nine_halves_at_three() {
        // 2 * 41 = 82 ≡ 1 mod 81
        let x = q(9, 2, 3, 4);
        assert_eq!(x.valuation(), Some(2));
        assert_eq!(x.unit().unwrap(), &BigUint::from(41u32));
        assert_eq!(x.digits(), vec![2, 1, 1, 1]);
        assert_eq!(x.to_string(), "3^2 * 41 + O(3^(6))");
    }

    #[test]
    fn zero_and_one_constructors() {
        let z = q(0, 1, 5, 8);
        assert!(z.is_zero());
        assert_eq!(z.abs_prec(), 8);
        let one = q(1, 1, 3, 4);
        assert_eq!(one.valuation(), Some(0));
        assert_eq!(one.unit().unwrap(), &BigUint::one());
        assert_eq!(
            PAdic::from_rational(&BigInt::one(), &BigInt::zero(), 3, 4),
            Err(Error::DenominatorZero)
        );
    }

    #[test]
    fn negative_rationals() {
        let x = q(-1, 1, 5, 3);
        assert_eq!(x.digits(), vec![4, 4, 4]);
        let y = q(1, -2, 3, 4);
        assert!((y + q(1, 2, 3, 4)).is_zero());
    }

    #[test]
    fn ring_examples() {
        let half = q(1, 2, 3, 4);
        let s = &half + &half;
        assert_eq!(s.valuation(), Some(0));
        assert_eq!(s.unit().unwrap(), &BigUint::one());

        let prod = q(3, 1, 3, 10) * q(1, 3, 3, 10);
        assert_eq!(prod.valuation(), Some(0));
        assert_eq!(prod.unit().unwrap(), &BigUint::one());
    }

    #[test]
    fn cancellation_yields_bounded_zero() {
        let x = q(9, 2, 3, 4);
        let z = &x + &(-&x);
        assert!(z.is_zero());
        assert_eq!(z.abs_prec(), 2 + 4);
    }

    #[test]
    fn partial_cancellation_lowers_relative_precision() {
        // 1 - 10 = -9 at p = 3: two digits cancel
        let a = q(1, 1, 3, 6);
        let b = q(10, 1, 3, 6);
        let d = &a - &b;
        assert_eq!(d.valuation(), Some(2));
        assert_eq!(d.rel_prec(), 4);
        assert_eq!(d.abs_prec(), 6);
    }

    #[test]
    fn valuation_queries() {
        assert_eq!(q(9, 2, 3, 4).valuation_at_least(2), Ok(true));
        assert_eq!(q(1, 2, 3, 4).valuation_at_least(1), Ok(false));
        let z = PAdic::zero(3, 4);
        assert!(matches!(
            z.valuation_at_least(6),
            Err(Error::InsufficientPrecision(_))
        ));
        assert_eq!(z.valuation_at_least(4), Ok(true));
    }

    #[test]
    fn residues() {
        let f = ResidueField::prime(3).unwrap();
        assert_eq!(q(1, 2, 3, 4).unit_residue(&f).unwrap(), f.from_u64(2));
        assert_eq!(q(1, 1, 3, 4).unit_residue(&f).unwrap(), f.one());
        assert_eq!(q(6, 1, 3, 4).unit_residue(&f).unwrap(), f.from_u64(2));
        assert_eq!(
            PAdic::zero(3, 4).unit_residue(&f),
            Err(Error::ZeroArgument)
        );
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(PAdic::zero(5, 3).inv(), Err(Error::DivisionByZero));
        let x = q(50, 7, 5, 6);
        let y = x.inv().unwrap();
        assert_eq!(y.valuation(), Some(-2));
        assert_eq!(y.rel_prec(), 6);
    }

    #[test]
    fn digits_round_trip() {
        let x = q(-17, 25, 5, 7);
        let y = PAdic::from_digits(5, x.valuation().unwrap(), &x.digits()).unwrap();
        assert_eq!(x, y);
        let z = PAdic::from_digits(3, 2, &[0, 0, 1, 2]).unwrap();
        assert_eq!(z.valuation(), Some(4));
        assert_eq!(z.rel_prec(), 2);
        assert!(PAdic::from_digits(3, 1, &[0, 0]).unwrap().is_zero());
    }

    #[test]
    fn zero_absorbs_precision() {
        let z = PAdic::zero(3, 5);
        let x = q(1, 3, 3, 10);
        assert_eq!((&z * &x).abs_prec(), 4);
        let s = &z + &q(1, 1, 3, 10);
        assert_eq!(s.rel_prec(), 5);
        assert!((&z + &q(3i64.pow(6), 1, 3, 10)).is_zero());
    }

    #[test]
    fn parse_rational_strings() {
        assert_eq!(PAdic::parse_rational("9/2", 3, 4).unwrap(), q(9, 2, 3, 4));
        assert_eq!(PAdic::parse_rational(" -4 ", 3, 4).unwrap(), q(-4, 1, 3, 4));
        assert!(PAdic::parse_rational("x/2", 3, 4).is_err());
        assert_eq!(
            PAdic::parse_rational("1/0", 3, 4),
            Err(Error::DenominatorZero)
        );
    }
}
