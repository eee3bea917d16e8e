//! Exact scalars: rationals or residues modulo a prime.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The coefficient field of the ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    /// `F_p` for a prime `p < 2^32`.
    Prime(u64),
}

/// An element of a [`Field`].
///
/// Arithmetic operators panic when the operands live in different fields;
/// that is a programming error, never a data error. Division goes through
/// [`Scalar::inv`], which rejects zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Prime {
                value: v.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// Parses a canonical literal: an integer `a` or a fraction `a/b`.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::ScalarParse(text.to_string());
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match *self {
            Field::Rational => Ok(Scalar::Rational(BigRational::new(num, den))),
            Field::Prime(p) => {
                let reduce = |v: &BigInt| -> u64 {
                    let m = BigInt::from(p);
                    let r = ((v % &m) + &m) % &m;
                    u64::try_from(r).expect("residue fits in u64")
                };
                let n = Scalar::Prime {
                    value: reduce(&num),
                    modulus: p,
                };
                let d = Scalar::Prime {
                    value: reduce(&den),
                    modulus: p,
                };
                Ok(n * d.inv()?)
            }
        }
    }

    /// An element of multiplicative order exactly `order`, if one exists.
    ///
    /// Over the rationals only `1` and `-1` have finite order.
    pub fn root_of_unity(&self, order: u64) -> Option<Scalar> {
        match *self {
            Field::Rational => match order {
                1 => Some(self.one()),
                2 => Some(self.from_i64(-1)),
                _ => None,
            },
            Field::Prime(p) => {
                if order == 0 || (p - 1) % order != 0 {
                    return None;
                }
                (1..p).find_map(|g| {
                    let candidate = Scalar::Prime {
                        value: pow_mod(g, (p - 1) / order, p),
                        modulus: p,
                    };
                    (candidate.multiplicative_order() == Some(order)).then_some(candidate)
                })
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "QQ"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar> {
        if self.field() != rhs.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(self * &rhs.inv()?)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, exp: i64) -> Result<Scalar> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let e = exp.unsigned_abs();
        Ok(match base {
            Scalar::Rational(r) => {
                let mut acc = BigRational::one();
                let mut b = r;
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        acc *= &b;
                    }
                    e >>= 1;
                    if e > 0 {
                        b = &b * &b;
                    }
                }
                Scalar::Rational(acc)
            }
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: pow_mod(value, e, modulus),
                modulus,
            },
        })
    }

    /// `(-1)^k` in the field of `self`.
    pub fn sign(field: Field, k: usize) -> Scalar {
        if k % 2 == 0 {
            field.one()
        } else {
            field.from_i64(-1)
        }
    }

    /// Multiplicative order, or `None` for zero and for elements of infinite order.
    pub fn multiplicative_order(&self) -> Option<u64> {
        match self {
            Scalar::Rational(r) => {
                if r.is_one() {
                    Some(1)
                } else if (-r).is_one() {
                    Some(2)
                } else {
                    None
                }
            }
            Scalar::Prime { value, modulus } => {
                if *value == 0 {
                    return None;
                }
                let mut order = modulus - 1;
                let mut rest = order;
                let mut f = 2u64;
                while rest > 1 {
                    if f * f > rest {
                        f = rest;
                    }
                    if rest % f == 0 {
                        while rest % f == 0 {
                            rest /= f;
                        }
                        while order % f == 0 && pow_mod(*value, order / f, *modulus) == 1 {
                            order /= f;
                        }
                    }
                    f += 1;
                }
                Some(order)
            }
        }
    }

    /// Canonical literal: reduced fraction, or least nonnegative residue.
    pub fn canonical(&self) -> String {
        format!("{self}")
    }

    fn check_same(&self, rhs: &Scalar) {
        assert_eq!(
            self.field(),
            rhs.field(),
            "arithmetic on scalars from different fields"
        );
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { value: a, modulus }, Scalar::Prime { value: b, .. }) => {
                Scalar::Prime {
                    value: (a + b) % modulus,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.check_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { value: a, modulus }, Scalar::Prime { value: b, .. }) => {
                Scalar::Prime {
                    value: a * b % modulus,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
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
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

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

impl Scalar {
    /// Numerator and denominator of a rational scalar, for callers that need
    /// the integer parts. Residues report themselves over 1.
    pub fn as_fraction(&self) -> (BigInt, BigInt) {
        match self {
            Scalar::Rational(r) => (r.numer().clone(), r.denom().clone()),
            Scalar::Prime { value, .. } => (BigInt::from(*value), BigInt::one()),
        }
    }

    pub fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }
}
