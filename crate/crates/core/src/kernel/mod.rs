//! Per-place constants `(m_v, D_v, C_v)` that turn `|xi^n - 1|_v` into an
//! `O(log n)` table lookup, for places of Q and of real quadratic fields.
//!
//! For a place `v` above `p` with `|xi|_v = 1`:
//!
//! * `|xi^n - 1|_v = 1` when `m_v` does not divide `n`;
//! * `|xi^n - 1|_v = C_v |n|_p^f` when `m_v | n` and `ord_p(n) > D_v`,
//!   where `f` is the local degree `[K_v : Q_p]`;
//! * otherwise the value depends only on `ord_p(n)` and is read from a
//!   table of `D_v + 1` entries.
//!
//! Valuations are read off from arithmetic in `O / p^K O`, raising `K` on
//! demand. Absolute values are normalized so that the product formula
//! holds, i.e. `|x|_v = p^(-w_v(x))` with `w_v(p) = [K_v : Q_p]`.

mod local;
mod quad;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{
    abs_p, factor_u64, format_rat, int, is_prime, ord_p, prime_power_inverse, serde_rat, BigRat,
};
use crate::error::{domain, Error, Result};

pub use quad::{
    compute_kernel_quad, places_above, quad_abs_direct, PlaceKind, QuadElem, QuadField, QuadPlace,
};

/// Upper bound on `D_v`; the search is expected to stop far earlier.
pub const MAX_DEPTH: u32 = 64;
/// Initial p-adic working precision (digits).
pub const INITIAL_PRECISION: u32 = 32;
/// Working precision ceiling; beyond it a valuation is reported as a
/// resource error rather than guessed.
pub const MAX_PRECISION: u32 = 4096;
/// Bit budget for exact powers in the direct oracles.
pub const DIRECT_BIT_BUDGET: u64 = 1 << 22;

/// Evaluation constants for one place.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaceKernel {
    /// Residue characteristic.
    pub p: u64,
    /// `m_v`: order of `xi` in the residue field.
    pub order: u64,
    /// `D_v`.
    pub depth: u32,
    /// `C_v = |p|_v^(-D_v) |xi^(m_v p^D_v) - 1|_v`.
    #[serde(with = "serde_rat")]
    pub constant: BigRat,
    /// Residue degree `rho_v` (1 or 2).
    pub residue_degree: u32,
    /// Local degree `[K_v : Q_p]`, the exponent of `|n|_p` in the generic
    /// case. Equals `residue_degree` except at ramified places.
    pub local_degree: u32,
    /// `w_v(xi^(m_v p^j) - 1)` for `j = 0..=D_v`.
    weights: Vec<u64>,
}

impl PlaceKernel {
    /// `|xi^n - 1|_v` for `n >= 1` without forming `xi^n`.
    pub fn eval(&self, n: u64) -> BigRat {
        prime_power_inverse(self.p, self.weight(n) as i64)
    }

    /// `w_v(xi^n - 1)`, i.e. `-log_p |xi^n - 1|_v`.
    pub fn weight(&self, n: u64) -> u64 {
        assert!(n >= 1, "kernel evaluation needs n >= 1");
        if !n.is_multiple_of(self.order) {
            return 0;
        }
        let j = ord_u64(n, self.p);
        if j <= self.depth {
            self.weights[j as usize]
        } else {
            self.weights[self.depth as usize] + self.local_degree as u64 * (j - self.depth) as u64
        }
    }

    /// The finitely many exceptional values, indexed by `ord_p(n)` for
    /// `m_v | n`, `ord_p(n) <= D_v`.
    pub fn exceptional_values(&self) -> Vec<BigRat> {
        self.weights
            .iter()
            .map(|&w| prime_power_inverse(self.p, w as i64))
            .collect()
    }

    /// `|p|_v`.
    pub fn abs_of_p(&self) -> BigRat {
        prime_power_inverse(self.p, self.local_degree as i64)
    }
}

pub(crate) fn ord_u64(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    e
}

/// Builds a kernel from a valuation oracle.
///
/// `weight(e, k)` must return `w_v(xi^e - 1)` computed modulo `p^k`, or
/// `None` when the value is at least what precision `k` can resolve.
pub(crate) fn build_kernel<W>(
    p: u64,
    group_order: u64,
    residue_degree: u32,
    local_degree: u32,
    weight: W,
) -> Result<PlaceKernel>
where
    W: Fn(&BigUint, u32) -> Option<u64>,
{
    let divisible = |e: u64| weight(&BigUint::from(e), 1).is_none_or(|w| w > 0);
    let mut order = group_order;
    for (q, _) in factor_u64(group_order) {
        while order.is_multiple_of(q) && divisible(order / q) {
            order /= q;
        }
    }
    if !divisible(order) {
        return Err(Error::Invariant(format!(
            "group order {group_order} does not annihilate the residue of xi at p = {p}"
        )));
    }

    let exact = |e: &BigUint| -> Result<u64> {
        let mut k = INITIAL_PRECISION;
        loop {
            if let Some(w) = weight(e, k) {
                return Ok(w);
            }
            if k >= MAX_PRECISION {
                return Err(Error::Resource(format!(
                    "valuation at p = {p} exceeds {MAX_PRECISION} p-adic digits"
                )));
            }
            k = (k * 2).min(MAX_PRECISION);
        }
    };

    let mut exponent = BigUint::from(order);
    let mut weights = vec![exact(&exponent)?];
    let mut depth = None;
    for d in 0..MAX_DEPTH {
        exponent *= p;
        let next = exact(&exponent)?;
        if next == weights[d as usize] + local_degree as u64 {
            depth = Some(d);
            break;
        }
        weights.push(next);
    }
    let depth = depth.ok_or_else(|| {
        Error::Invariant(format!("no D_v <= {MAX_DEPTH} found at p = {p}"))
    })?;
    weights.truncate(depth as usize + 1);
    let exp_c = local_degree as i64 * depth as i64 - weights[depth as usize] as i64;
    Ok(PlaceKernel {
        p,
        order,
        depth,
        constant: prime_power_inverse(p, -exp_c),
        residue_degree,
        local_degree,
        weights,
    })
}

/// Kernel of `r in Q^*` at the prime `p`, requiring `|r|_p = 1`.
pub fn compute_kernel_rational(r: &BigRat, p: u64) -> Result<PlaceKernel> {
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    if r.is_zero() || ord_p(r, p)? != 0 {
        return domain(format!("|{}|_{p} != 1", format_rat(r)));
    }
    let group = if p == 2 { 1 } else { p - 1 };
    build_kernel(p, group, 1, 1, |e, k| local::rational_weight(r, p, e, k))
}

/// `|r^n - 1|_p` through the kernel.
pub fn eval_abs_fast(kernel: &PlaceKernel, n: u64) -> BigRat {
    kernel.eval(n)
}

/// `|r^n - 1|_p` by forming `r^n - 1` exactly. Independent of the kernel
/// machinery; guarded by [`DIRECT_BIT_BUDGET`].
pub fn eval_abs_direct(r: &BigRat, p: u64, n: u64) -> Result<BigRat> {
    if n == 0 {
        return domain("n must be positive");
    }
    if r.is_zero() || ord_p(r, p)? != 0 {
        return domain(format!("|{}|_{p} != 1", format_rat(r)));
    }
    check_power_budget(r, n)?;
    let x = r.pow(n as i32) - int(1);
    abs_p(&x, p)
}

pub(crate) fn check_power_budget(r: &BigRat, n: u64) -> Result<()> {
    let bits = r.numer().bits().max(r.denom().bits());
    if bits.saturating_mul(n) > DIRECT_BIT_BUDGET || n > i32::MAX as u64 {
        return Err(Error::Resource(format!(
            "{}^{n} exceeds the {DIRECT_BIT_BUDGET}-bit budget",
            format_rat(r)
        )));
    }
    Ok(())
}

/// Product of kernel evaluations `prod_v |xi^n - 1|_v`.
pub fn kernel_product(kernels: &[PlaceKernel], n: u64) -> BigRat {
    let mut acc = BigRat::one();
    for k in kernels {
        acc *= k.eval(n);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use num_bigint::BigInt;

    #[test]
    fn kernel_two_mod_seven() {
        let k = compute_kernel_rational(&int(2), 7).unwrap();
        assert_eq!((k.order, k.depth), (3, 0));
        assert_eq!(k.constant, rat(1, 7));
        assert_eq!(eval_abs_fast(&k, 5), int(1));
        assert_eq!(eval_abs_fast(&k, 21), rat(1, 49));
        assert_eq!(eval_abs_direct(&int(2), 7, 21).unwrap(), rat(1, 49));
    }

    #[test]
    fn kernel_three_mod_two_has_depth_one() {
        let k = compute_kernel_rational(&int(3), 2).unwrap();
        assert_eq!((k.order, k.depth), (1, 1));
        assert_eq!(k.constant, rat(1, 4));
        assert_eq!(eval_abs_fast(&k, 2), rat(1, 8));
        assert_eq!(eval_abs_fast(&k, 1), rat(1, 2));
        assert_eq!(eval_abs_fast(&k, 4), rat(1, 16));
        assert_eq!(k.exceptional_values(), vec![rat(1, 2), rat(1, 8)]);
    }

    #[test]
    fn kernel_two_mod_five() {
        let k = compute_kernel_rational(&int(2), 5).unwrap();
        assert_eq!((k.order, k.depth), (4, 0));
        assert_eq!(k.constant, rat(1, 5));
    }

    #[test]
    fn kernel_rejects_non_units() {
        assert!(matches!(compute_kernel_rational(&int(6), 3), Err(Error::Domain(_))));
        assert!(matches!(compute_kernel_rational(&rat(1, 2), 2), Err(Error::Domain(_))));
        assert!(matches!(compute_kernel_rational(&int(2), 9), Err(Error::Domain(_))));
    }

    #[test]
    fn direct_examples() {
        assert_eq!(eval_abs_direct(&int(2), 3, 4).unwrap(), rat(1, 3));
        assert_eq!(eval_abs_direct(&int(2), 3, 6).unwrap(), rat(1, 9));
        assert_eq!(eval_abs_direct(&int(2), 3, 1).unwrap(), int(1));
        assert!(matches!(
            eval_abs_direct(&int(3), 2, 10_000_000),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn constant_matches_definition() {
        for (r, p) in [(int(3), 2u64), (int(7), 2), (rat(5, 3), 2), (int(2), 3), (rat(3, 2), 7)] {
            let k = compute_kernel_rational(&r, p).unwrap();
            let e = k.order * p.pow(k.depth);
            let direct = eval_abs_direct(&r, p, e).unwrap();
            let p_pow = prime_power_inverse(p, -(k.depth as i64));
            assert_eq!(k.constant, p_pow * direct, "r={r} p={p}");
        }
    }

    #[test]
    fn large_valuations_raise_precision() {
        // 1 + 3^40 has |r - 1|_3 = 3^-40, beyond the initial 32 digits.
        let r = BigRat::from_integer(BigInt::from(3).pow(40u32) + 1);
        let k = compute_kernel_rational(&r, 3).unwrap();
        assert_eq!((k.order, k.depth), (1, 0));
        assert_eq!(k.eval(1), prime_power_inverse(3, 40));
        assert_eq!(k.eval(9), prime_power_inverse(3, 42));
    }
}
