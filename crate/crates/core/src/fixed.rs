//! Binary fixed-point reals on top of `BigInt`: a value `x` at scale
//! `bits` stands for `x / 2^bits`. Every routine is pure integer
//! arithmetic, so results are reproducible bit for bit.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;

use num_traits::{One, Signed, Zero};

use crate::arith::BigRat;

pub fn one(bits: u32) -> BigInt {
    BigInt::one() << bits
}

/// `floor(x * 2^bits)`.
pub fn from_rat(x: &BigRat, bits: u32) -> BigInt {
    (x.numer() << bits).div_floor(x.denom())
}

pub fn mul(x: &BigInt, y: &BigInt, bits: u32) -> BigInt {
    (x * y) >> bits
}

pub fn sqrt(x: &BigInt, bits: u32) -> BigInt {
    assert!(!x.is_negative(), "sqrt of a negative fixed-point value");
    (x << bits).sqrt()
}

/// `sum_k x^(2k+1)/(2k+1)` for `|x| < 1`.
fn atanh_series(x: &BigInt, bits: u32) -> BigInt {
    let x2 = mul(x, x, bits);
    let mut power = x.clone();
    let mut acc = BigInt::zero();
    let mut k = 1u32;
    while !power.is_zero() {
        acc += &power / k;
        power = mul(&power, &x2, bits);
        k += 2;
    }
    acc
}

/// `sum_k (-1)^k x^(2k+1)/(2k+1)`.
fn atan_series(x: &BigInt, bits: u32) -> BigInt {
    let x2 = mul(x, x, bits);
    let mut power = x.clone();
    let mut acc = BigInt::zero();
    let mut k = 1u32;
    let mut sign = true;
    while !power.is_zero() {
        if sign {
            acc += &power / k;
        } else {
            acc -= &power / k;
        }
        power = mul(&power, &x2, bits);
        k += 2;
        sign = !sign;
    }
    acc
}

const GUARD: u32 = 32;

/// `pi` via Machin's formula.
pub fn pi(bits: u32) -> BigInt {
    let w = bits + GUARD;
    let a = atan_series(&(one(w) / 5), w);
    let b = atan_series(&(one(w) / 239), w);
    (a * 16 - b * 4) >> GUARD
}

pub fn ln2(bits: u32) -> BigInt {
    let w = bits + GUARD;
    (atanh_series(&(one(w) / 3), w) * 2) >> GUARD
}

/// Natural logarithm of a positive rational.
pub fn ln(x: &BigRat, bits: u32) -> BigInt {
    assert!(x.is_positive(), "ln of a non-positive value");
    let w = bits + GUARD;
    // x = 2^k * m with m in [1, 2)
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let shift = |k: i64| {
        if k >= 0 {
            BigRat::new(x.numer().clone(), x.denom() << k as usize)
        } else {
            BigRat::new(x.numer() << (-k) as usize, x.denom().clone())
        }
    };
    let mut m = shift(k);
    let two = BigRat::from_integer(BigInt::from(2));
    if m >= two {
        k += 1;
        m = shift(k);
    } else if m < BigRat::one() {
        k -= 1;
        m = shift(k);
    }
    let y = (&m - BigRat::one()) / (&m + BigRat::one());
    let lm = atanh_series(&from_rat(&y, w), w) * 2;
    (lm + ln2(w) * k) >> GUARD
}

/// `(cos 2 pi t, sin 2 pi t)` for rational `t`.
pub fn cos_sin_turn(t: &BigRat, bits: u32) -> (BigInt, BigInt) {
    let w = bits + GUARD;
    let frac = t - t.floor();
    // angle in [-pi, pi)
    let centered = if frac >= BigRat::new(BigInt::one(), BigInt::from(2)) {
        frac - BigRat::one()
    } else {
        frac
    };
    let theta: BigInt = (pi(w) * BigInt::from(2) * centered.numer()).div_floor(centered.denom());
    let mut cos = BigInt::zero();
    let mut sin = BigInt::zero();
    let mut term = one(w);
    let mut k = 0u32;
    while !term.is_zero() {
        // term = theta^k / k!
        let signed = if (k / 2).is_multiple_of(2) { term.clone() } else { -term.clone() };
        if k.is_multiple_of(2) {
            cos += signed;
        } else {
            sin += signed;
        }
        k += 1;
        term = mul(&term, &theta, w) / k;
    }
    (cos >> GUARD, sin >> GUARD)
}

/// Decimal rendering with `digits` fractional digits, rounded to nearest.
pub fn to_decimal(x: &BigInt, bits: u32, digits: usize) -> String {
    let neg = x.sign() == Sign::Minus;
    let scaled: BigInt = (x.abs() * BigInt::from(10u32).pow(digits as u32) + (one(bits) >> 1)) >> bits;
    let s = scaled.to_string();
    let s = if s.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
    } else {
        s
    };
    let (int_part, frac_part) = s.split_at(s.len() - digits);
    let sign = if neg && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Number of decimal digits carried by `bits` binary digits.
pub fn decimal_digits(bits: u32) -> usize {
    (bits as u64 * 30103 / 100000) as usize
}
