//! Decimal conversion through exact rational arithmetic.
//!
//! Format: optional sign, digits, optional `.fraction`, optional exponent
//! `e±NNN` (also `E`). Output is always scientific, `d.ddd…e±NNN`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{pow2, Expansion};
use crate::error::{Error, Result};

/// Exact value of a finite binary64.
pub(crate) fn f64_to_rational(x: f64) -> BigRational {
    if x == 0.0 {
        return BigRational::zero();
    }
    let bits = x.to_bits();
    let neg = bits >> 63 == 1;
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), biased - 1075)
    };
    let mut m = BigInt::from(mant);
    if neg {
        m = -m;
    }
    if exp >= 0 {
        BigRational::from_integer(m << exp as usize)
    } else {
        BigRational::new(m, BigInt::one() << (-exp) as usize)
    }
}

/// Binary64 nearest to `q` (ties to even). Assumes the result is normal.
pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let neg = q.is_negative();
    let num = q.numer().abs();
    let den = q.denom().clone();
    // Choose shift so that num * 2^shift / den lands in [2^52, 2^53).
    let mut shift = 53 - (num.bits() as i64 - den.bits() as i64);
    let quot = loop {
        let scaled_num = if shift >= 0 { &num << shift as usize } else { num.clone() };
        let scaled_den = if shift >= 0 { den.clone() } else { &den << (-shift) as usize };
        let (qq, rr) = scaled_num.div_rem(&scaled_den);
        let bits = qq.bits();
        if bits > 53 {
            shift -= 1;
        } else if bits < 53 {
            shift += 1;
        } else {
            let round_up = match (rr * 2u8).cmp(&scaled_den) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Less => false,
                std::cmp::Ordering::Equal => qq.is_odd(),
            };
            break if round_up { qq + 1u8 } else { qq };
        }
    };
    let mant = quot.to_u64().expect("53-bit mantissa") as f64;
    let v = scale_pow2(mant, -shift);
    if neg {
        -v
    } else {
        v
    }
}

fn scale_pow2(x: f64, e: i64) -> f64 {
    let mut v = x;
    let mut e = e;
    while e > 1000 {
        v *= pow2(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= pow2(-1000);
        e += 1000;
    }
    v * pow2(e as i32)
}

fn pow10(n: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u8), n as usize)
}

impl<const K: usize> Expansion<K> {
    /// Decimal digits needed to round-trip at this precision.
    pub const fn decimal_digits() -> usize {
        // ceil(53K * log10(2)) + 1
        (53 * K * 30103).div_ceil(100_000) + 1
    }

    /// Exact value as a rational.
    pub fn to_rational(&self) -> BigRational {
        self.0
            .iter()
            .fold(BigRational::zero(), |acc, &c| acc + f64_to_rational(c))
    }

    /// Nearest `K`-term expansion to `q`, built greedily one component at a
    /// time from the exact remainder.
    pub fn from_rational(q: &BigRational) -> Self {
        let mut rest = q.clone();
        let mut c = [0.0; K];
        for slot in c.iter_mut() {
            if rest.is_zero() {
                break;
            }
            let v = rational_to_f64(&rest);
            *slot = v;
            rest -= f64_to_rational(v);
        }
        Self(c)
    }

    /// Scientific notation with `digits` significant digits, rounded
    /// half-to-even from the exact value.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        let q = self.to_rational();
        if q.is_zero() {
            return format!("{}e+000", pad_mantissa("0", digits));
        }
        let neg = q.is_negative();
        let q = q.abs();
        let lead = self.0[0].abs();
        let mut e10 = lead.log10().floor() as i64;
        let (int, e10) = loop {
            let shift = digits as i64 - 1 - e10;
            let scaled = if shift >= 0 {
                &q * BigRational::from_integer(pow10(shift as u32))
            } else {
                &q / BigRational::from_integer(pow10((-shift) as u32))
            };
            let int = round_half_even(&scaled);
            let lo = pow10(digits as u32 - 1);
            let hi = pow10(digits as u32);
            if int >= hi {
                e10 += 1;
            } else if int < lo {
                e10 -= 1;
            } else {
                break (int, e10);
            }
        };
        let s = int.to_string();
        let sign = if neg { "-" } else { "" };
        let exp_sign = if e10 < 0 { '-' } else { '+' };
        format!("{sign}{}e{exp_sign}{:03}", pad_mantissa(&s, digits), e10.abs())
    }

    pub fn parse_decimal(s: &str) -> Result<Self> {
        parse_rational(s).map(|q| Self::from_rational(&q))
    }
}

fn pad_mantissa(digits: &str, n: usize) -> String {
    let mut d = digits.to_string();
    while d.len() < n {
        d.push('0');
    }
    let (head, tail) = d.split_at(1);
    if tail.is_empty() {
        format!("{head}.0")
    } else {
        format!("{head}.{tail}")
    }
}

fn round_half_even(q: &BigRational) -> BigInt {
    let (int, frac) = q.numer().div_mod_floor(q.denom());
    let twice = frac * 2u8;
    match twice.cmp(q.denom()) {
        std::cmp::Ordering::Greater => int + 1u8,
        std::cmp::Ordering::Less => int,
        std::cmp::Ordering::Equal => {
            if int.is_odd() {
                int + 1u8
            } else {
                int
            }
        }
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let err = || Error::Parse(s.to_string());
    let t = s.trim();
    let (neg, body) = match t.as_bytes().first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let exp: i64 = match exp {
        Some(e) => e.parse().map_err(|_| err())?,
        None => 0,
    };
    let all_digits = format!("{int_part}{frac_part}");
    let n = BigInt::parse_bytes(all_digits.as_bytes(), 10).ok_or_else(err)?;
    let n = if neg { -n } else { n };
    let e = exp - frac_part.len() as i64;
    if e.unsigned_abs() > 100_000 {
        return Err(err());
    }
    let q = if e >= 0 {
        BigRational::from_integer(n * pow10(e as u32))
    } else {
        BigRational::new(n, pow10((-e) as u32))
    };
    Ok(q)
}
