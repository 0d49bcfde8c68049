//! Exact coefficient fields: prime fields `F_p` and the rationals.
//!
//! Scalars carry their own modulus so arithmetic never needs an ambient
//! context. Mixing scalars from different fields is a programming error and
//! panics.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_PRIME: u32 = 32003;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not a prime number")]
    NotPrime(u64),
    #[error("characteristic {0} is too large (must fit in 31 bits)")]
    TooLarge(u64),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("division by zero in scalar {0:?}")]
    DivisionByZero(String),
}

/// The coefficient field of a session.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Prime(u32),
    Rational,
}

impl Default for Field {
    fn default() -> Self {
        Field::Prime(DEFAULT_PRIME)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// `0` selects the rationals, anything else must be a prime.
    pub fn from_characteristic(c: u64) -> Result<Field, FieldError> {
        if c == 0 {
            return Ok(Field::Rational);
        }
        if c >= (1 << 31) {
            return Err(FieldError::TooLarge(c));
        }
        if !is_prime(c) {
            return Err(FieldError::NotPrime(c));
        }
        Ok(Field::Prime(c as u32))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Prime(p) => *p,
            Field::Rational => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Prime(p) => {
                let v = n.rem_euclid(*p as i64) as u32;
                Scalar::Mod { v, p: *p }
            }
            Field::Rational => Scalar::Rat(Box::new(BigRational::from_integer(BigInt::from(n)))),
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Option<Scalar> {
        if den == 0 {
            return None;
        }
        let n = self.from_i64(num);
        let d = self.from_i64(den).inv()?;
        Some(n * d)
    }

    /// Parses `"3"`, `"-2"` or `"5/7"`.
    pub fn parse(&self, s: &str) -> Result<Scalar, FieldError> {
        let s = s.trim();
        let bad = || FieldError::Parse(s.to_string());
        if let Some((a, b)) = s.split_once('/') {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            self.from_ratio(a, b)
                .ok_or_else(|| FieldError::DivisionByZero(s.to_string()))
        } else {
            let a: i64 = s.parse().map_err(|_| bad())?;
            Ok(self.from_i64(a))
        }
    }

    pub fn label(&self) -> String {
        match self {
            Field::Prime(p) => format!("GF({p})"),
            Field::Rational => "Q".to_string(),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Mod { v: u32, p: u32 },
    Rat(Box<BigRational>),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod { p, .. } => Field::Prime(*p),
            Scalar::Rat(_) => Field::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { v, .. } => *v == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { v, .. } => *v == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Mod { v, p } => Scalar::Mod { v: mod_pow(*v as u64, *p as u64 - 2, *p as u64) as u32, p: *p },
            Scalar::Rat(r) => Scalar::Rat(Box::new(r.recip())),
        })
    }

    /// Symmetric integer representative for prime fields, `None` for
    /// non-integral rationals.
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Mod { v, p } => {
                let v = *v as i64;
                let p = *p as i64;
                Some(if v > p / 2 { v - p } else { v })
            }
            Scalar::Rat(r) => {
                if r.is_integer() {
                    r.to_integer().to_i64()
                } else {
                    None
                }
            }
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

pub(crate) fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { .. } => write!(f, "{}", self.to_i64().unwrap()),
            Scalar::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.to_i64() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_str(&self.to_string()),
        }
    }
}

/// Scalar as written in JSON files: an integer or a `"p/q"` string. The
/// field is applied when the surrounding object is interpreted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Int(i64),
    Text(String),
}

impl ScalarRepr {
    pub fn interpret(&self, field: Field) -> Result<Scalar, FieldError> {
        match self {
            ScalarRepr::Int(n) => Ok(field.from_i64(*n)),
            ScalarRepr::Text(s) => field.parse(s),
        }
    }

    pub fn of(s: &Scalar) -> ScalarRepr {
        match s.to_i64() {
            Some(n) => ScalarRepr::Int(n),
            None => ScalarRepr::Text(s.to_string()),
        }
    }
}

fn mismatch() -> ! {
    panic!("arithmetic between scalars of different fields")
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, p: q }) if p == q => {
                let s = *a as u64 + *b as u64;
                Scalar::Mod { v: (s % *p as u64) as u32, p: *p }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(a.as_ref() + b.as_ref())),
            _ => mismatch(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, p: q }) if p == q => {
                let s = *a as u64 + *p as u64 - *b as u64;
                Scalar::Mod { v: (s % *p as u64) as u32, p: *p }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(a.as_ref() - b.as_ref())),
            _ => mismatch(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod { v: a, p }, Scalar::Mod { v: b, p: q }) if p == q => {
                let s = *a as u64 * *b as u64;
                Scalar::Mod { v: (s % *p as u64) as u32, p: *p }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(Box::new(a.as_ref() * b.as_ref())),
            _ => mismatch(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { v, p } => Scalar::Mod { v: if *v == 0 { 0 } else { p - v }, p: *p },
            Scalar::Rat(a) => Scalar::Rat(Box::new(-a.as_ref())),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

/// Integer determinant by fraction-free elimination.
pub fn integer_determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn is_unimodular(m: &[Vec<i64>]) -> bool {
    integer_determinant(m).abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::Prime(7);
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(&a + &b, f.from_i64(1));
        assert_eq!(&a * &b, f.from_i64(1));
        assert_eq!(&a - &b, f.from_i64(-2));
        assert_eq!(a.inv().unwrap(), b);
        assert!(f.zero().inv().is_none());
        assert_eq!(f.from_i64(-1).to_i64(), Some(-1));
    }

    #[test]
    fn rational_arithmetic() {
        let f = Field::Rational;
        let a = f.parse("2/3").unwrap();
        let b = f.parse("1/3").unwrap();
        assert!((&a + &b).is_one());
        assert_eq!(a.to_string(), "2/3");
        assert_eq!(a.inv().unwrap(), f.parse("3/2").unwrap());
    }

    #[test]
    fn characteristic_validation() {
        assert_eq!(Field::from_characteristic(0), Ok(Field::Rational));
        assert_eq!(Field::from_characteristic(32003), Ok(Field::Prime(32003)));
        assert_eq!(Field::from_characteristic(12), Err(FieldError::NotPrime(12)));
    }

    #[test]
    fn determinants() {
        assert_eq!(integer_determinant(&[vec![1, -1], vec![0, 1]]), BigInt::from(1));
        assert_eq!(integer_determinant(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(integer_determinant(&[vec![2, 0], vec![0, 3]]), BigInt::from(6));
        assert_eq!(
            integer_determinant(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]),
            BigInt::from(-3)
        );
        assert!(is_unimodular(&[vec![1, 0, 0], vec![1, 1, 0], vec![0, -1, 1]]));
    }
}
