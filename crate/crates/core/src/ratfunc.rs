//! Integer-coefficient rational functions and Lambert-type sums
//! `sum d_i z^k_i / (1 - z^k_i)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{BigRat, PrimeSet};

pub type Poly = Vec<BigInt>;

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    if p.is_empty() {
        p.push(BigInt::zero());
    }
    p
}

pub fn poly(coeffs: &[i64]) -> Poly {
    trim(coeffs.iter().map(|&c| BigInt::from(c)).collect())
}

pub fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Poly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn poly_add(a: &[BigInt], b: &[BigInt]) -> Poly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    trim(out)
}

fn poly_neg(a: &[BigInt]) -> Poly {
    a.iter().map(|c| -c).collect()
}

fn poly_to_string(p: &[BigInt]) -> String {
    let mut out = String::new();
    for (i, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => "z".to_string(),
            _ => format!("z^{i}"),
        };
        if i == 0 || !mag.is_one() {
            out.push_str(&mag.to_string());
        }
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `num(z) / den(z)` with `den(0) != 0`; coefficients lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den[0].is_zero(), "denominator must not vanish at 0");
        RatFunc {
            num: trim(num),
            den: trim(den),
        }
    }

    /// Taylor coefficients at 0 of degree `0..len`.
    pub fn expand(&self, len: usize) -> Vec<BigRat> {
        let d0 = BigRat::from_integer(self.den[0].clone());
        let mut out: Vec<BigRat> = Vec::with_capacity(len);
        for n in 0..len {
            let mut acc = BigRat::from_integer(self.num.get(n).cloned().unwrap_or_default());
            for (k, d) in self.den.iter().enumerate().skip(1) {
                if k > n {
                    break;
                }
                if !d.is_zero() {
                    acc -= &out[n - k] * BigRat::from_integer(d.clone());
                }
            }
            out.push(acc / &d0);
        }
        out
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(poly_add(&self.num, &o.num), self.den.clone());
        }
        RatFunc::new(
            poly_add(&poly_mul(&self.num, &o.den), &poly_mul(&o.num, &self.den)),
            poly_mul(&self.den, &o.den),
        )
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&RatFunc::new(poly_neg(&o.num), o.den.clone()))
    }

    /// `z / (1 - c z)`.
    pub fn geometric(c: BigInt) -> RatFunc {
        RatFunc::new(vec![BigInt::zero(), BigInt::one()], vec![BigInt::one(), -c])
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", poly_to_string(&self.num), poly_to_string(&self.den))
    }
}

impl Serialize for RatFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let strs = |p: &Poly| p.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        let mut st = s.serialize_struct("RatFunc", 3)?;
        st.serialize_field("num", &strs(&self.num))?;
        st.serialize_field("den", &strs(&self.den))?;
        st.serialize_field("display", &self.to_string())?;
        st.end()
    }
}

/// One term `sign * z^k / (1 - z^k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LambertTerm {
    pub sign: i8,
    pub exponent: u64,
}

/// Largest common period for which the normalized form is materialized.
pub const MAX_NORMALIZED_PERIOD: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambertSum {
    pub terms: Vec<LambertTerm>,
}

impl LambertSum {
    /// Coefficient of `z^n`, `n >= 1`.
    pub fn coeff(&self, n: u64) -> i64 {
        self.terms
            .iter()
            .filter(|t| n.is_multiple_of(t.exponent))
            .map(|t| t.sign as i64)
            .sum()
    }

    /// Coefficients of `z^1 .. z^len`.
    pub fn expand(&self, len: usize) -> Vec<i64> {
        (1..=len as u64).map(|n| self.coeff(n)).collect()
    }

    /// Least common multiple of the exponents.
    pub fn period(&self) -> u64 {
        self.terms.iter().fold(1, |acc, t| acc.lcm(&t.exponent))
    }

    /// The sum over the common denominator `1 - z^P`, `P` the period;
    /// `None` when `P` exceeds [`MAX_NORMALIZED_PERIOD`].
    pub fn normalized(&self) -> Option<RatFunc> {
        let period = self.period();
        if period > MAX_NORMALIZED_PERIOD {
            return None;
        }
        let mut num = vec![BigInt::zero(); period as usize + 1];
        for t in &self.terms {
            // z^k/(1 - z^k) = (z^k + z^2k + ... + z^P)/(1 - z^P)
            let mut e = t.exponent;
            while e <= period {
                num[e as usize] += t.sign as i64;
                e += t.exponent;
            }
        }
        let mut den = vec![BigInt::zero(); period as usize + 1];
        den[0] = BigInt::one();
        den[period as usize] = -BigInt::one();
        Some(RatFunc::new(num, den))
    }
}

impl fmt::Display for LambertSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let sign = if t.sign < 0 { "-" } else { "+" };
            if i == 0 {
                if t.sign < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if t.exponent == 1 {
                write!(f, "z/(1 - z)")?;
            } else {
                write!(f, "z^{0}/(1 - z^{0})", t.exponent)?;
            }
        }
        Ok(())
    }
}

/// `H_S(z) = sum of z^n over n coprime to every prime of S`, by
/// inclusion-exclusion: the term `(mu(d), d)` for each squarefree `d`
/// dividing the product of `S`.
pub fn h_s(s: &PrimeSet) -> LambertSum {
    let mut terms: Vec<LambertTerm> = s
        .subsets()
        .into_iter()
        .map(|sub| LambertTerm {
            sign: if sub.len() % 2 == 0 { 1 } else { -1 },
            exponent: sub.iter().product(),
        })
        .collect();
    terms.sort_by_key(|t| t.exponent);
    LambertSum { terms }
}
