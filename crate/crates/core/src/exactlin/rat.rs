//! Exact rationals with an inline `i64` representation and a big-integer
//! fallback.
//!
//! Every value is kept in canonical form: lowest terms, positive
//! denominator, and the small representation whenever both parts fit in
//! an `i64`. Equality and hashing therefore work structurally.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone)]
enum Repr {
    Small(i64, i64),
    Big(Box<BigRational>),
}

/// An exact rational number.
#[derive(Clone)]
pub struct Rat(Repr);

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseRatError {
    #[error("malformed rational {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("rational {0:?} is not in lowest terms with positive denominator")]
    NotCanonical(String),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

impl Rat {
    #[inline]
    pub const fn int(n: i64) -> Rat {
        Rat(Repr::Small(n, 1))
    }

    #[inline]
    pub const fn zero() -> Rat {
        Rat::int(0)
    }

    #[inline]
    pub const fn one() -> Rat {
        Rat::int(1)
    }

    /// Builds `n/d`; panics on `d == 0`.
    pub fn new(n: i64, d: i64) -> Rat {
        assert!(d != 0, "zero denominator");
        Rat::from_i128(n as i128, d as i128)
    }

    fn from_i128(n: i128, d: i128) -> Rat {
        debug_assert!(d != 0);
        if n == 0 {
            return Rat::zero();
        }
        let g = gcd_u128(n.unsigned_abs(), d.unsigned_abs()) as i128;
        let (mut n, mut d) = (n / g, d / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rat(Repr::Small(n, d)),
            _ => Rat(Repr::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d))))),
        }
    }

    /// Canonicalizes a big rational that is already reduced.
    fn from_reduced_big(r: BigRational) -> Rat {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            Rat(Repr::Small(n, d))
        } else {
            Rat(Repr::Big(Box::new(r)))
        }
    }

    pub fn from_big(r: BigRational) -> Rat {
        // BigRational::new reduces, but values built with new_raw may not be.
        let r = BigRational::new(r.numer().clone(), r.denom().clone());
        Rat::from_reduced_big(r)
    }

    pub fn from_bigints(n: BigInt, d: BigInt) -> Rat {
        assert!(!d.is_zero(), "zero denominator");
        Rat::from_reduced_big(BigRational::new(n, d))
    }

    pub fn from_bigint(n: BigInt) -> Rat {
        Rat::from_reduced_big(BigRational::from_integer(n))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    /// Small-representation parts, when available.
    #[inline]
    pub fn as_small(&self) -> Option<(i64, i64)> {
        match self.0 {
            Repr::Small(n, d) => Some((n, d)),
            Repr::Big(_) => None,
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => match b.numer().sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
        }
    }

    pub fn abs(&self) -> Rat {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => {
                assert!(*n != 0, "reciprocal of zero");
                Rat::from_i128(*d as i128, *n as i128)
            }
            Repr::Big(b) => Rat::from_reduced_big(b.recip()),
        }
    }

    /// Residue modulo a prime `p < 2^63`, `None` if the denominator vanishes mod `p`.
    pub fn mod_p(&self, p: u64) -> Option<u64> {
        let (n, d) = match &self.0 {
            Repr::Small(n, d) => {
                let nm = (*n as i128).rem_euclid(p as i128) as u64;
                let dm = (*d as i128).rem_euclid(p as i128) as u64;
                (nm, dm)
            }
            Repr::Big(b) => {
                let pb = BigInt::from(p);
                let nm = b.numer().mod_floor(&pb).to_u64().unwrap();
                let dm = b.denom().mod_floor(&pb).to_u64().unwrap();
                (nm, dm)
            }
        };
        if d == 0 {
            return None;
        }
        Some(crate::exactlin::modp::mul(n, crate::exactlin::modp::inv(d, p), p))
    }

    /// Bit size of numerator plus denominator; a cheap height measure used
    /// by pivot heuristics.
    pub fn height(&self) -> u64 {
        match &self.0 {
            Repr::Small(n, d) => (64 - n.unsigned_abs().leading_zeros() as u64) + (64 - d.leading_zeros() as u64),
            Repr::Big(b) => b.numer().bits() + b.denom().bits(),
        }
    }

    pub fn pow(&self, e: u32) -> Rat {
        let mut acc = Rat::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn add_impl(a: &Rat, b: &Rat) -> Rat {
        match (&a.0, &b.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
                if *ad == 1 && *bd == 1 {
                    return match an.checked_add(*bn) {
                        Some(s) => Rat(Repr::Small(s, 1)),
                        None => Rat::from_i128(*an as i128 + *bn as i128, 1),
                    };
                }
                if ad == bd {
                    return Rat::from_i128(*an as i128 + *bn as i128, *ad as i128);
                }
                let n = (*an as i128) * (*bd as i128) + (*bn as i128) * (*ad as i128);
                let d = (*ad as i128) * (*bd as i128);
                Rat::from_i128(n, d)
            }
            _ => Rat::from_reduced_big(a.to_big() + b.to_big()),
        }
    }

    fn mul_impl(a: &Rat, b: &Rat) -> Rat {
        match (&a.0, &b.0) {
            (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
                if *an == 0 || *bn == 0 {
                    return Rat::zero();
                }
                if *ad == 1 && *bd == 1 {
                    return match an.checked_mul(*bn) {
                        Some(p) => Rat(Repr::Small(p, 1)),
                        None => Rat::from_i128(*an as i128 * *bn as i128, 1),
                    };
                }
                // Cross-cancel first so the i128 products stay small.
                let g1 = gcd_u64(an.unsigned_abs(), bd.unsigned_abs()) as i64;
                let g2 = gcd_u64(bn.unsigned_abs(), ad.unsigned_abs()) as i64;
                let n = (*an / g1) as i128 * (*bn / g2) as i128;
                let d = (*ad / g2) as i128 * (*bd / g1) as i128;
                match (i64::try_from(n), i64::try_from(d)) {
                    (Ok(n), Ok(d)) => Rat(Repr::Small(n, d)),
                    _ => Rat(Repr::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d))))),
                }
            }
            _ => Rat::from_reduced_big(a.to_big() * b.to_big()),
        }
    }

    /// `self += a * b` without an intermediate allocation on the small path.
    #[inline]
    pub fn add_mul(&mut self, a: &Rat, b: &Rat) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let prod = Rat::mul_impl(a, b);
        if self.is_zero() {
            *self = prod;
        } else {
            *self = Rat::add_impl(self, &prod);
        }
    }

    /// Parses `p/q` or `p`, requiring canonical form.
    pub fn parse_canonical(s: &str) -> Result<Rat, ParseRatError> {
        let r: Rat = s.parse()?;
        if r.to_string() != s {
            return Err(ParseRatError::NotCanonical(s.to_string()));
        }
        Ok(r)
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Rat {
        Rat::int(n as i64)
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Rat) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(a), Repr::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rat {}

impl Hash for Rat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128))),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        let bad = || ParseRatError::Malformed(s.to_string());
        let valid_int = |t: &str| {
            let digits = t.strip_prefix('-').unwrap_or(t);
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        if !valid_int(n) || !valid_int(d) {
            return Err(bad());
        }
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(ParseRatError::ZeroDenominator(s.to_string()));
        }
        Ok(Rat::from_bigints(n, d))
    }
}

impl serde::Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Rat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        Rat::parse_canonical(&s).map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $imp:expr) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            #[inline]
            fn $m(self, rhs: &Rat) -> Rat {
                $imp(self, rhs)
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            #[inline]
            fn $m(self, rhs: Rat) -> Rat {
                $imp(&self, &rhs)
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            #[inline]
            fn $m(self, rhs: &Rat) -> Rat {
                $imp(&self, rhs)
            }
        }
        impl $tr<Rat> for &Rat {
            type Output = Rat;
            #[inline]
            fn $m(self, rhs: Rat) -> Rat {
                $imp(self, &rhs)
            }
        }
    };
}

fn sub_impl(a: &Rat, b: &Rat) -> Rat {
    Rat::add_impl(a, &-b)
}

fn div_impl(a: &Rat, b: &Rat) -> Rat {
    Rat::mul_impl(a, &b.recip())
}

forward_binop!(Add, add, Rat::add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, Rat::mul_impl);
forward_binop!(Div, div, div_impl);

impl Neg for &Rat {
    type Output = Rat;
    #[inline]
    fn neg(self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(m) => Rat(Repr::Small(m, *d)),
                None => Rat::from_i128(-(*n as i128), *d as i128),
            },
            Repr::Big(b) => Rat::from_reduced_big(-(**b).clone()),
        }
    }
}

impl Neg for Rat {
    type Output = Rat;
    #[inline]
    fn neg(self) -> Rat {
        -&self
    }
}

impl AddAssign<&Rat> for Rat {
    #[inline]
    fn add_assign(&mut self, rhs: &Rat) {
        *self = Rat::add_impl(self, rhs);
    }
}

impl AddAssign<Rat> for Rat {
    #[inline]
    fn add_assign(&mut self, rhs: Rat) {
        *self = Rat::add_impl(self, &rhs);
    }
}

impl SubAssign<&Rat> for Rat {
    #[inline]
    fn sub_assign(&mut self, rhs: &Rat) {
        *self = sub_impl(self, rhs);
    }
}

impl SubAssign<Rat> for Rat {
    #[inline]
    fn sub_assign(&mut self, rhs: Rat) {
        *self = sub_impl(self, &rhs);
    }
}

impl MulAssign<&Rat> for Rat {
    #[inline]
    fn mul_assign(&mut self, rhs: &Rat) {
        *self = Rat::mul_impl(self, rhs);
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(it: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    let mut l = BigInt::one();
    for r in it {
        let d = r.denom();
        if !d.is_one() {
            l = l.lcm(&d);
        }
    }
    l
}

pub fn bigint_abs(b: &BigInt) -> BigInt {
    b.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_forms() {
        assert_eq!(Rat::new(2, 4), Rat::new(1, 2));
        assert_eq!(Rat::new(3, -6).to_string(), "-1/2");
        assert_eq!(Rat::new(0, -7).to_string(), "0");
        assert_eq!(Rat::new(6, 3).to_string(), "2");
    }

    #[test]
    fn parse_rejects_non_canonical() {
        assert!(Rat::parse_canonical("2/4").is_err());
        assert!(Rat::parse_canonical("1/-2").is_err());
        assert!(Rat::parse_canonical("3/1").is_err());
        assert!(Rat::parse_canonical("1/0").is_err());
        assert!(Rat::parse_canonical("abc").is_err());
        assert_eq!(Rat::parse_canonical("-3/7").unwrap(), Rat::new(-3, 7));
        assert_eq!(Rat::parse_canonical("12").unwrap(), Rat::int(12));
    }

    #[test]
    fn overflow_promotes_to_big_and_back() {
        let big = Rat::int(i64::MAX);
        let sq = &big * &big;
        assert!(sq.as_small().is_none());
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(back.as_small().is_some());
        let m = Rat::int(i64::MIN);
        assert_eq!((-&m) + &m, Rat::zero());
    }

    #[test]
    fn mod_p_matches_field_arithmetic() {
        let p = crate::exactlin::modp::P;
        let a = Rat::new(3, 7);
        let b = Rat::new(-5, 11);
        let s = (&a + &b).mod_p(p).unwrap();
        let expect = crate::exactlin::modp::add(a.mod_p(p).unwrap(), b.mod_p(p).unwrap(), p);
        assert_eq!(s, expect);
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| Rat::new(n, d))
    }

    proptest! {
        #[test]
        fn field_laws_against_bigrational(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            let big = |r: &Rat| r.to_big();
            prop_assert_eq!((&a + &b).to_big(), big(&a) + big(&b));
            prop_assert_eq!((&a * &b).to_big(), big(&a) * big(&b));
            prop_assert_eq!((&a - &b).to_big(), big(&a) - big(&b));
            prop_assert_eq!(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)));
            if !b.is_zero() {
                prop_assert_eq!(&(&(&a / &b) * &b), &a);
            }
            prop_assert_eq!(Rat::parse_canonical(&a.to_string()).unwrap(), a.clone());
        }
    }
}
