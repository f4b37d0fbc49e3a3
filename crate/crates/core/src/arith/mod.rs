//! Exact rational arithmetic, p-adic valuations and prime utilities.
//!
//! Everything here is exact; there is no floating point in this module.

mod factor;
mod primes;

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub use factor::{factor_u64, factorize, factorize_with_budget, Factorization, DEFAULT_RHO_BUDGET};
pub use primes::{is_prime, is_probable_prime, sieve, small_primes, smallest_prime_not_in};
pub(crate) use primes::pow_mod;

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type BigRat = BigRational;

pub fn rat(num: i64, den: i64) -> BigRat {
    BigRat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: impl Into<BigInt>) -> BigRat {
    BigRat::from_integer(n.into())
}

/// `p^(-e)` as an exact rational (`e` may be negative).
pub fn prime_power_inverse(p: u64, e: i64) -> BigRat {
    let pp = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRat::new(BigInt::one(), pp)
    } else {
        BigRat::from_integer(pp)
    }
}

/// Parses `"a/b"` or `"a"`.
pub fn parse_rat(s: &str) -> Result<BigRat> {
    let s = s.trim();
    let parse = |t: &str| {
        BigInt::from_str(t.trim()).map_err(|_| Error::Domain(format!("not a rational: {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse(d)?;
            if d.is_zero() {
                return domain(format!("zero denominator in {s:?}"));
            }
            Ok(BigRat::new(parse(n)?, d))
        }
        None => Ok(BigRat::from_integer(parse(s)?)),
    }
}

pub fn format_rat(x: &BigRat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Multiplicative height `max(|num|, |den|)`.
pub fn height(x: &BigRat) -> BigInt {
    let n = x.numer().abs();
    let d = x.denom().abs();
    if n > d {
        n
    } else {
        d
    }
}

/// Sorted, duplicate-free set of rational primes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct PrimeSet(Vec<u64>);

impl PrimeSet {
    pub fn new(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut v: Vec<u64> = primes.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if let Some(&bad) = v.iter().find(|&&p| !is_prime(p)) {
            return domain(format!("{bad} is not prime"));
        }
        Ok(PrimeSet(v))
    }

    pub fn empty() -> Self {
        PrimeSet(Vec::new())
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, other: &PrimeSet) -> PrimeSet {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        v.dedup();
        PrimeSet(v)
    }

    /// Every subset, in binary-counter order.
    pub fn subsets(&self) -> Vec<PrimeSet> {
        (0u32..(1 << self.0.len()))
            .map(|mask| {
                PrimeSet(
                    self.0
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, &p)| p)
                        .collect(),
                )
            })
            .collect()
    }
}

impl TryFrom<Vec<u64>> for PrimeSet {
    type Error = Error;
    fn try_from(v: Vec<u64>) -> Result<Self> {
        PrimeSet::new(v)
    }
}

impl From<PrimeSet> for Vec<u64> {
    fn from(s: PrimeSet) -> Vec<u64> {
        s.0
    }
}

impl FromStr for PrimeSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "{}" || s == "-" {
            return Ok(PrimeSet::empty());
        }
        let parsed: std::result::Result<Vec<u64>, _> =
            s.split(',').map(|t| t.trim().parse::<u64>()).collect();
        PrimeSet::new(parsed.map_err(|_| Error::Domain(format!("bad prime list {s:?}")))?)
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        domain(format!("{p} is not prime"))
    }
}

/// p-adic valuation of a nonzero integer.
pub fn ord_p_int(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let mag = n.magnitude();
    if p == 2 {
        return mag.trailing_zeros().unwrap_or(0);
    }
    let pb = BigUint::from(p);
    let mut rest = mag.clone();
    let mut e = 0;
    loop {
        let (q, r) = rest.div_rem(&pb);
        if !r.is_zero() {
            return e;
        }
        rest = q;
        e += 1;
    }
}

/// `ord_p(x)`: the exponent of `p` in `x`, negative when `p` divides the
/// denominator.
pub fn ord_p(x: &BigRat, p: u64) -> Result<i64> {
    check_prime(p)?;
    if x.is_zero() {
        return domain("ord_p(0) is undefined");
    }
    Ok(ord_p_int(x.numer(), p) as i64 - ord_p_int(x.denom(), p) as i64)
}

/// `|x|_p = p^(-ord_p x)`, with `|0|_p = 0`.
pub fn abs_p(x: &BigRat, p: u64) -> Result<BigRat> {
    check_prime(p)?;
    if x.is_zero() {
        return Ok(BigRat::zero());
    }
    Ok(prime_power_inverse(p, ord_p(x, p)?))
}

/// `|x|_S = prod_{p in S} |x|_p`.
pub fn abs_s(x: &BigRat, s: &PrimeSet) -> Result<BigRat> {
    if x.is_zero() {
        return domain("|0|_S is not used");
    }
    let mut acc = BigRat::one();
    for p in s.iter() {
        acc *= abs_p(x, p)?;
    }
    Ok(acc)
}

/// Checks `|x| * prod_p |x|_p == 1` over the primes dividing numerator and
/// denominator. Fails with [`Error::IncompleteFactorization`] if either
/// cannot be fully factored within budget.
pub fn product_formula_check(x: &BigRat) -> Result<bool> {
    if x.is_zero() {
        return domain("product formula needs x != 0");
    }
    let mut acc = x.abs();
    for part in [x.numer(), x.denom()] {
        let f = factorize(part.magnitude());
        if let Some(cofactor) = f.cofactor {
            return Err(Error::IncompleteFactorization { cofactor });
        }
        for p in f.factors.keys() {
            let pb = BigInt::from(p.clone());
            let e = ord_big(x.numer(), &pb) as i64 - ord_big(x.denom(), &pb) as i64;
            let pe = pb.pow(e.unsigned_abs() as u32);
            acc *= if e >= 0 {
                BigRat::new(BigInt::one(), pe)
            } else {
                BigRat::from_integer(pe)
            };
        }
    }
    Ok(acc.is_one())
}

fn ord_big(n: &BigInt, p: &BigInt) -> u64 {
    let mut rest = n.clone();
    let mut e = 0;
    loop {
        let (q, r) = rest.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        rest = q;
        e += 1;
    }
}

/// `r mod p` for `|r|_p = 1`.
pub(crate) fn residue_mod(r: &BigRat, p: u64) -> Result<u64> {
    let reduce = |n: &BigInt| -> u64 {
        let m = n.mod_floor(&BigInt::from(p));
        m.to_u64().expect("residue fits")
    };
    let a = reduce(r.numer());
    let b = reduce(r.denom());
    if a == 0 || b == 0 {
        return domain(format!("|{}|_{p} != 1", format_rat(r)));
    }
    Ok(primes::mul_mod(a, pow_mod(b, p - 2, p), p))
}

/// Order of `x` in `(Z/p)^*` for a prime `p` and `x != 0 mod p`.
pub(crate) fn order_mod_prime(x: u64, p: u64) -> u64 {
    let mut m = p - 1;
    for (q, _) in factor_u64(p - 1) {
        while m.is_multiple_of(q) && pow_mod(x, m / q, p) == 1 {
            m /= q;
        }
    }
    m
}

/// Least `m >= 1` with `ord_p(r^m - 1) > 0`.
pub fn multiplicative_order(r: &BigRat, p: u64) -> Result<u64> {
    check_prime(p)?;
    let x = residue_mod(r, p)?;
    if p == 2 {
        return Ok(1);
    }
    Ok(order_mod_prime(x, p))
}

/// Writes `r = a/b` with `a > |b| >= 1`, inverting if `|r| < 1`.
/// Returns `(a, b, inverted)`.
pub fn normalize_ratio(r: &BigRat) -> Result<(BigInt, BigInt, bool)> {
    if r.is_zero() || r.abs().is_one() {
        return domain(format!("r = {} must not be 0 or +-1", format_rat(r)));
    }
    let (x, inverted) = if r.abs() > BigRat::one() {
        (r.clone(), false)
    } else {
        (r.recip(), true)
    };
    // x = n/d with d > 0; want a > 0: a = |n|, b = sign(n) * d
    let n = x.numer().clone();
    let d = x.denom().clone();
    let (a, b) = match n.sign() {
        Sign::Minus => (-n, -d),
        _ => (n, d),
    };
    Ok((a, b, inverted))
}

/// Serde adapter writing rationals as `"a/b"` strings.
pub mod serde_rat {
    use super::{format_rat, parse_rat, BigRat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for lists of rationals.
pub mod serde_rat_vec {
    use super::{format_rat, parse_rat, BigRat};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &[BigRat], s: S) -> std::result::Result<S::Ok, S::Error> {
        xs.iter().map(format_rat).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRat>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
            .collect()
    }
}
