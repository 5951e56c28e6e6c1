//! Complex scalars over expansions, with 4M and 3M multiplication.

use std::ops::{Add, Neg, Sub};

use crate::error::Result;
use crate::expansion::Expansion;

/// Complex multiplication method.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Method {
    /// Four real multiplications.
    #[serde(rename = "4m")]
    FourM,
    /// Three real multiplications and three extra additions.
    #[serde(rename = "3m")]
    ThreeM,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::FourM => "4m",
            Method::ThreeM => "3m",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "3m" => Ok(Method::ThreeM),
            "4m" => Ok(Method::FourM),
            _ => Err(crate::Error::InvalidParameter(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ComplexScalar<const K: usize> {
    pub re: Expansion<K>,
    pub im: Expansion<K>,
}

impl<const K: usize> ComplexScalar<K> {
    pub const ZERO: Self = Self { re: Expansion::ZERO, im: Expansion::ZERO };
    pub const ONE: Self = Self { re: Expansion::ONE, im: Expansion::ZERO };

    #[inline(always)]
    pub const fn new(re: Expansion<K>, im: Expansion<K>) -> Self {
        Self { re, im }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        Self::new(Expansion::from_f64(re), Expansion::from_f64(im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn convert<const J: usize>(self) -> ComplexScalar<J> {
        ComplexScalar::new(self.re.convert(), self.im.convert())
    }

    /// `|re| + |im|` on the leading components.
    #[inline]
    pub fn abs1_estimate(&self) -> f64 {
        self.re.leading().abs() + self.im.leading().abs()
    }

    /// Squared modulus `re^2 + im^2`.
    pub fn norm_sqr(&self) -> Expansion<K> {
        self.re * self.re + self.im * self.im
    }

    /// Modulus, via a Newton square root.
    pub fn modulus(&self) -> Expansion<K> {
        self.norm_sqr().sqrt()
    }

    /// `(Re a Re b - Im a Im b) + (Im a Re b + Re a Im b) i`.
    #[inline(always)]
    pub fn mul_4m(self, b: Self) -> Self {
        let re = self.re * b.re - self.im * b.im;
        let im = self.im * b.re + self.re * b.im;
        Self::new(re, im)
    }

    /// `t1 = Re a Re b`, `t2 = Im a Im b`;
    /// `(t1 - t2) + ((Re a + Im a)(Re b + Im b) - t1 - t2) i`.
    #[inline(always)]
    pub fn mul_3m(self, b: Self) -> Self {
        let t1 = self.re * b.re;
        let t2 = self.im * b.im;
        let re = t1 - t2;
        let im = (self.re + self.im) * (b.re + b.im) - t1 - t2;
        Self::new(re, im)
    }

    #[inline(always)]
    pub fn mul(self, b: Self, method: Method) -> Self {
        match method {
            Method::FourM => self.mul_4m(b),
            Method::ThreeM => self.mul_3m(b),
        }
    }

    /// `a / b` through `d = Re(b)^2 + Im(b)^2`, without scaling.
    #[allow(clippy::should_implement_trait)]
    pub fn div(self, b: Self) -> Result<Self> {
        if b.is_zero() {
            return Err(crate::Error::SingularScalarDivide);
        }
        let d = b.re * b.re + b.im * b.im;
        let re = (self.re * b.re + self.im * b.im).div(d)?;
        let im = (self.im * b.re - self.re * b.im).div(d)?;
        Ok(Self::new(re, im))
    }

    pub fn inv(self) -> Result<Self> {
        Self::ONE.div(self)
    }
}

impl<const K: usize> Add for ComplexScalar<K> {
    type Output = Self;
    #[inline(always)]
    fn add(self, b: Self) -> Self {
        Self::new(self.re + b.re, self.im + b.im)
    }
}

impl<const K: usize> Sub for ComplexScalar<K> {
    type Output = Self;
    #[inline(always)]
    fn sub(self, b: Self) -> Self {
        Self::new(self.re - b.re, self.im - b.im)
    }
}

impl<const K: usize> Neg for ComplexScalar<K> {
    type Output = Self;
    #[inline(always)]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}
