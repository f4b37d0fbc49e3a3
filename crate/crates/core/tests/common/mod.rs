//! Independent oracles: plain big-integer arithmetic, no library kernels.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(big(a), big(b))
}

/// Exponent of `p` in a nonzero integer.
pub fn val(x: &BigInt, p: u64) -> u64 {
    assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut e = 0;
    loop {
        let (d, r) = x.div_rem(&p);
        if !r.is_zero() {
            return e;
        }
        x = d;
        e += 1;
    }
}

/// `w_p(r^n - 1)` for `r = a/b` with `p` coprime to `ab`, read off
/// `a^n - b^n`.
pub fn w_rational(a: i64, b: i64, p: u64, n: u32) -> u64 {
    val(&(big(a).pow(n) - big(b).pow(n)), p)
}

/// `|r^n - 1|_p` for `r = a/b`, `p` coprime to `ab`.
pub fn abs_rational(a: i64, b: i64, p: u64, n: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(p).pow(w_rational(a, b, p, n) as u32))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn primes_upto(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

/// Least `m >= 1` with `a^m = b^m mod p`.
pub fn order_mod(a: i64, b: i64, p: u64) -> u64 {
    let p = p as i128;
    let a = (a as i128).rem_euclid(p);
    let b = (b as i128).rem_euclid(p);
    let (mut x, mut y) = (a, b);
    let mut m = 1;
    while x != y {
        x = x * a % p;
        y = y * b % p;
        m += 1;
    }
    m
}

/// `f(n) = (a^n - b^n) prod_{p in s} |r^n - 1|_p` for primes `p` coprime
/// to `ab`, with `a > |b|`.
pub fn f_finite(a: i64, b: i64, s: &[u64], n: u32) -> BigInt {
    let mut x = big(a).pow(n) - big(b).pow(n);
    for &p in s {
        if a % p as i64 != 0 && b % p as i64 != 0 {
            let w = val(&x, p);
            x /= BigInt::from(p).pow(w as u32);
        }
    }
    x
}

/// `f(n) = prod_{p in t} |r^n - 1|_p^(-1)`.
pub fn f_cofinite(a: i64, b: i64, t: &[u64], n: u32) -> BigInt {
    let x = big(a).pow(n) - big(b).pow(n);
    t.iter().map(|&p| BigInt::from(p).pow(val(&x, p) as u32)).product()
}

/// `t_n = xi^n + eta^n` for `x^2 - t x + N`, `n = 0..=len`.
pub fn traces(t: i64, norm: i64, len: usize) -> Vec<BigInt> {
    let mut out = vec![big(2), big(t)];
    for n in 2..=len {
        let next = big(t) * &out[n - 1] - big(norm) * &out[n - 2];
        out.push(next);
    }
    out.truncate(len + 1);
    out
}

/// `N(xi^n - 1) = N^n - t_n + 1`.
pub fn norm_xi_n_minus_1(t: i64, norm: i64, n: usize) -> BigInt {
    big(norm).pow(n as u32) - &traces(t, norm, n)[n] + big(1)
}

/// `exp(sum_{n>=1} f_n z^n / n)` to degree `len`, from `z g' = g sum f_n z^n`.
pub fn exp_log_series(f: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut g = vec![BigRational::one()];
    for m in 1..=len {
        let mut acc = BigRational::zero();
        for k in 1..=m {
            acc += &f[k - 1] * &g[m - k];
        }
        g.push(acc / BigRational::from_integer(BigInt::from(m)));
    }
    g
}

/// Taylor coefficients of `num/den`.
pub fn series_quotient(num: &[i64], den: &[i64], len: usize) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::new();
    for n in 0..len {
        let mut acc = q(*num.get(n).unwrap_or(&0), 1);
        for k in 1..den.len().min(n + 1) {
            acc -= &out[n - k] * q(den[k], 1);
        }
        out.push(acc / q(den[0], 1));
    }
    out
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap()
}
