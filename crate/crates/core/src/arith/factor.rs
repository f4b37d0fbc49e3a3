//! Integer factorization: trial division to 10^6, then Brent's variant of
//! Pollard rho under an explicit iteration budget.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::primes::{is_prime, is_probable_prime, mul_mod, small_primes};

/// Total number of rho iterations spent on one input before giving up.
pub const DEFAULT_RHO_BUDGET: u64 = 4_000_000;

/// Prime-power decomposition of a positive integer. When the rho budget
/// runs out the composite remainder is kept in `cofactor` instead of being
/// reported as prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub factors: BTreeMap<BigUint, u32>,
    pub cofactor: Option<BigUint>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_none()
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.keys()
    }

    /// Product of all prime powers and the cofactor.
    pub fn recompose(&self) -> BigUint {
        let mut acc = self.cofactor.clone().unwrap_or_else(BigUint::one);
        for (p, &e) in &self.factors {
            acc *= p.pow(e);
        }
        acc
    }

    fn push(&mut self, p: BigUint, e: u32) {
        *self.factors.entry(p).or_insert(0) += e;
    }
}

/// Factor `n` with the default rho budget.
pub fn factorize(n: &BigUint) -> Factorization {
    factorize_with_budget(n, DEFAULT_RHO_BUDGET)
}

/// Factor `n >= 1`. `factorize(0)` is treated as the empty product's
/// complement and returned as an unsplit cofactor of zero.
pub fn factorize_with_budget(n: &BigUint, rho_budget: u64) -> Factorization {
    let mut out = Factorization {
        factors: BTreeMap::new(),
        cofactor: None,
    };
    if n.is_zero() {
        out.cofactor = Some(BigUint::zero());
        return out;
    }
    let mut rest = n.clone();
    for &p in small_primes() {
        if rest.is_one() {
            return out;
        }
        if let Some(small) = rest.to_u64() {
            if p.saturating_mul(p) > small {
                break;
            }
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&BigUint::from(p));
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.push(BigUint::from(p), e);
        }
    }
    if rest.is_one() {
        return out;
    }
    let mut budget = rho_budget;
    let mut stack = vec![rest];
    let mut leftovers = BigUint::one();
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            out.push(m, 1);
            continue;
        }
        match split(&m, &mut budget) {
            Some(d) => {
                let other = &m / &d;
                stack.push(d);
                stack.push(other);
            }
            None => leftovers *= m,
        }
    }
    if !leftovers.is_one() {
        out.cofactor = Some(leftovers);
    }
    out
}

fn split(m: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if let Some(small) = m.to_u64() {
        return split_u64(small, budget).map(BigUint::from);
    }
    for c in 1u32.. {
        if *budget == 0 {
            return None;
        }
        if let Some(d) = brent_big(m, &BigUint::from(c), budget) {
            return Some(d);
        }
    }
    None
}

fn brent_big(n: &BigUint, c: &BigUint, budget: &mut u64) -> Option<BigUint> {
    let f = |x: &BigUint| (x * x + c) % n;
    let block = 128u64;
    let mut y = BigUint::from(2u32);
    let mut x;
    let mut ys;
    let mut q = BigUint::one();
    let mut r = 1u64;
    let mut g;
    loop {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        loop {
            ys = y.clone();
            let steps = block.min(r - k);
            for _ in 0..steps {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            *budget = budget.saturating_sub(steps);
            g = q.gcd(n);
            k += steps;
            if k >= r || !g.is_one() || *budget == 0 {
                break;
            }
        }
        r *= 2;
        if !g.is_one() || *budget == 0 {
            break;
        }
    }
    if g.is_one() {
        return None;
    }
    if &g == n {
        // backtrack one step at a time
        loop {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        None
    } else {
        Some(g)
    }
}

fn split_u64(n: u64, budget: &mut u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    for c in 1..n {
        if *budget == 0 {
            return None;
        }
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return Some(d);
        }
    }
    None
}

/// Convenience for small inputs: factor a `u64` into `(prime, exponent)`.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut rest = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest && p < 1 << 20 {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        if is_prime(rest) {
            out.push((rest, 1));
        } else {
            let f = factorize(&BigUint::from(rest));
            for (q, e) in f.factors {
                out.push((q.to_u64().expect("factor of u64"), e));
            }
            out.sort_unstable();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn as_pairs(f: &Factorization) -> Vec<(u64, u32)> {
        f.factors
            .iter()
            .map(|(p, &e)| (p.to_u64().unwrap(), e))
            .collect()
    }

    #[test]
    fn one_is_empty_product() {
        let f = factorize(&BigUint::one());
        assert!(f.factors.is_empty());
        assert!(f.is_complete());
    }

    #[test]
    fn mersenne_style_examples() {
        let f = factorize(&BigUint::from(4095u32));
        assert_eq!(as_pairs(&f), vec![(3, 2), (5, 1), (7, 1), (13, 1)]);
        let f = factorize(&BigUint::from((1u64 << 21) - 1));
        assert_eq!(as_pairs(&f), vec![(7, 2), (127, 1), (337, 1)]);
    }

    #[test]
    fn needs_rho_beyond_trial_division() {
        // two primes above the trial-division bound
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        let f = factorize(&(BigUint::from(p) * q));
        assert_eq!(as_pairs(&f), vec![(p, 1), (q, 1)]);
        let m = (BigUint::one() << 100u32) - 1u32;
        let f = factorize(&m);
        assert!(f.is_complete());
        assert_eq!(f.recompose(), m);
    }

    #[test]
    fn exhausted_budget_is_reported() {
        let p = BigUint::from(1_000_000_007u64);
        let q = BigUint::from(998_244_353u64);
        let f = factorize_with_budget(&(&p * &q), 1);
        assert!(!f.is_complete());
        assert_eq!(f.recompose(), &p * &q);
    }

    #[test]
    fn factor_u64_small() {
        assert_eq!(factor_u64(1), vec![]);
        assert_eq!(factor_u64(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_u64(97), vec![(97, 1)]);
    }
}
