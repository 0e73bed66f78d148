//! Exact scalars: arbitrary-precision Gaussian rationals, the ground field
//! for every computation in this crate.
//!
//! All identities verified downstream are algebraic, so working over Q(i)
//! instead of the complex numbers turns every check into exact equality.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// An element of Q(i): a complex number with rational real and imaginary
/// parts, both kept in canonical form (lowest terms, positive denominator).
///
/// `BigRational` normalizes on construction, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::zero(),
        }
    }

    pub fn one() -> Self {
        GaussianRational {
            re: Rational::one(),
            im: Rational::zero(),
        }
    }

    pub fn i() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn from_int(k: i64) -> Self {
        GaussianRational {
            re: Rational::from_integer(BigInt::from(k)),
            im: Rational::zero(),
        }
    }

    /// num/den as a real rational; `den` must be nonzero.
    pub fn from_frac(num: i64, den: i64) -> Self {
        GaussianRational {
            re: Rational::new(BigInt::from(num), BigInt::from(den)),
            im: Rational::zero(),
        }
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// |z|^2 = z * conj(z), a rational.
    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sq();
        Some(GaussianRational {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        match rhs.inv() {
            Some(r) => Ok(self.clone() * r),
            None => Err(Error::DivisionByZero),
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        GaussianRational {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        GaussianRational {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

/// Panics on division by zero; use `checked_div` where the divisor may vanish.
impl Div for GaussianRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self.checked_div(&rhs).expect("division by zero")
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FracRepr {
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct GaussianRepr {
    re: FracRepr,
    im: FracRepr,
}

fn frac_repr(q: &Rational) -> FracRepr {
    FracRepr {
        num: q.numer().to_string(),
        den: q.denom().to_string(),
    }
}

fn parse_frac(r: &FracRepr) -> std::result::Result<Rational, String> {
    let num: BigInt = r
        .num
        .parse()
        .map_err(|_| format!("bad integer string {:?}", r.num))?;
    let den: BigInt = r
        .den
        .parse()
        .map_err(|_| format!("bad integer string {:?}", r.den))?;
    if !den.is_positive() {
        return Err(format!("denominator must be positive, got {den}"));
    }
    if num.gcd(&den) != BigInt::one() {
        return Err(format!("fraction {num}/{den} is not in lowest terms"));
    }
    Ok(Rational::new_raw(num, den))
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GaussianRepr {
            re: frac_repr(&self.re),
            im: frac_repr(&self.im),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GaussianRepr::deserialize(d)?;
        Ok(GaussianRational {
            re: parse_frac(&repr.re).map_err(D::Error::custom)?,
            im: parse_frac(&repr.im).map_err(D::Error::custom)?,
        })
    }
}

/// The scalar interface shared by `GaussianRational` and jets, so that
/// matrices and the chart machinery can be written once and instantiated
/// with either plain scalars or (nested) jets for exact differentiation.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse, `None` when not invertible.
    fn inv(&self) -> Option<Self>;
    fn embed(c: &GaussianRational) -> Self;

    fn embed_int(k: i64) -> Self {
        Self::embed(&GaussianRational::from_int(k))
    }
}

impl Scalar for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        GaussianRational::inv(self)
    }
    fn embed(c: &GaussianRational) -> Self {
        c.clone()
    }
}
