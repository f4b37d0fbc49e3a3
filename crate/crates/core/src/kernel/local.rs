//! Arithmetic modulo `p^K` in `Z` and in `Z[omega]`, `omega^2 = t*omega - n`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{ord_p_int, BigRat};

pub(crate) fn modulus(p: u64, k: u32) -> BigInt {
    BigInt::from(p).pow(k)
}

/// Image of a `p`-integral rational in `Z / m`.
pub(crate) fn reduce_rat(x: &BigRat, m: &BigInt) -> BigInt {
    let num = x.numer().mod_floor(m);
    let den = x.denom().mod_floor(m);
    let inv = inverse_mod(&den, m).expect("denominator must be a unit mod p^k");
    (num * inv).mod_floor(m)
}

pub(crate) fn inverse_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if g.gcd.is_one() {
        Some(g.x.mod_floor(m))
    } else {
        None
    }
}

/// `ord_p(z)` for `z` known modulo `p^k`; `None` if `z = 0 mod p^k`.
pub(crate) fn ord_mod(z: &BigInt, p: u64) -> Option<u64> {
    if z.is_zero() {
        None
    } else {
        Some(ord_p_int(z, p))
    }
}

/// `w_p(r^e - 1)` for rational `r` with `|r|_p = 1`.
pub(crate) fn rational_weight(r: &BigRat, p: u64, e: &BigUint, k: u32) -> Option<u64> {
    let m = modulus(p, k);
    degree_one_weight(&reduce_rat(r, &m), p, e, &m)
}

pub(crate) fn degree_one_weight(x: &BigInt, p: u64, e: &BigUint, m: &BigInt) -> Option<u64> {
    let y = x.modpow(&BigInt::from(e.clone()), m);
    ord_mod(&(y - BigInt::one()).mod_floor(m), p)
}

/// `a + b*omega` modulo `p^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct QuadResidue {
    pub a: BigInt,
    pub b: BigInt,
}

/// `Z[omega] / p^k` with `omega^2 = trace*omega - norm`.
pub(crate) struct QuadRing {
    pub trace: BigInt,
    pub norm: BigInt,
    pub modulus: BigInt,
}

impl QuadRing {
    pub fn mul(&self, x: &QuadResidue, y: &QuadResidue) -> QuadResidue {
        // (a + b w)(c + d w) = ac + (ad + bc) w + bd w^2
        let bd = &x.b * &y.b;
        let a = &x.a * &y.a - &bd * &self.norm;
        let b = &x.a * &y.b + &x.b * &y.a + &bd * &self.trace;
        QuadResidue {
            a: a.mod_floor(&self.modulus),
            b: b.mod_floor(&self.modulus),
        }
    }

    pub fn pow(&self, x: &QuadResidue, e: &BigUint) -> QuadResidue {
        let mut acc = QuadResidue {
            a: BigInt::one(),
            b: BigInt::zero(),
        };
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, x);
            }
        }
        acc
    }

    pub fn minus_one(&self, x: &QuadResidue) -> QuadResidue {
        QuadResidue {
            a: (&x.a - BigInt::one()).mod_floor(&self.modulus),
            b: x.b.clone(),
        }
    }

    pub fn norm_of(&self, x: &QuadResidue) -> BigInt {
        let n = &x.a * &x.a + &x.a * &x.b * &self.trace + &x.b * &x.b * &self.norm;
        n.mod_floor(&self.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn reduction_of_fractions() {
        let m = BigInt::from(27);
        // 3/2 = 3 * 14 = 42 = 15 mod 27
        assert_eq!(reduce_rat(&rat(3, 2), &m), BigInt::from(15));
        assert_eq!(reduce_rat(&rat(-1, 1), &m), BigInt::from(26));
    }

    #[test]
    fn weights_mod_powers() {
        let e = BigUint::from(6u32);
        // 2^6 - 1 = 63 = 9 * 7
        assert_eq!(rational_weight(&rat(2, 1), 3, &e, 8), Some(2));
        assert_eq!(rational_weight(&rat(2, 1), 3, &e, 2), None);
        assert_eq!(rational_weight(&rat(2, 1), 7, &e, 1), None);
        assert_eq!(rational_weight(&rat(2, 1), 5, &e, 1), Some(0));
    }

    #[test]
    fn golden_ring_power() {
        // omega = (1 + sqrt 5)/2, omega^2 = omega + 1
        let ring = QuadRing {
            trace: BigInt::one(),
            norm: BigInt::from(-1),
            modulus: BigInt::from(1000),
        };
        let w = QuadResidue {
            a: BigInt::zero(),
            b: BigInt::one(),
        };
        // omega^10 = F_9 + F_10 omega = 34 + 55 omega
        let x = ring.pow(&w, &BigUint::from(10u32));
        assert_eq!((x.a, x.b), (BigInt::from(34), BigInt::from(55)));
        assert_eq!(ring.norm_of(&w), BigInt::from(999));
    }
}
