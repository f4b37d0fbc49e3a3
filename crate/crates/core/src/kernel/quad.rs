//! Real quadratic fields, their elements, and the finite places above a
//! rational prime.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::local::{self, degree_one_weight, modulus, reduce_rat, QuadResidue, QuadRing};
use super::{build_kernel, PlaceKernel, DIRECT_BIT_BUDGET, INITIAL_PRECISION, MAX_PRECISION};
use crate::arith::{abs_p, format_rat, int, is_prime, ord_p_int, pow_mod, prime_power_inverse, BigRat};
use crate::error::{domain, Error, Result};

/// `Q(sqrt d)` for squarefree `d > 1`, with integral basis `(1, omega)`:
/// `omega = (1 + sqrt d)/2` when `d = 1 mod 4`, else `omega = sqrt d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuadField {
    pub d: i64,
    pub disc: i64,
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self> {
        if d <= 1 {
            return domain(format!("d = {d}: only real quadratic fields (d > 1) are supported"));
        }
        let mut k = 2i64;
        while k * k <= d {
            if d % (k * k) == 0 {
                return domain(format!("d = {d} is not squarefree"));
            }
            k += 1;
        }
        let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        Ok(QuadField { d, disc })
    }

    fn omega_is_half(&self) -> bool {
        self.d.rem_euclid(4) == 1
    }

    /// `Tr(omega)`.
    pub fn omega_trace(&self) -> i64 {
        if self.omega_is_half() {
            1
        } else {
            0
        }
    }

    /// `N(omega)`.
    pub fn omega_norm(&self) -> i64 {
        if self.omega_is_half() {
            (1 - self.d) / 4
        } else {
            -self.d
        }
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt {})", self.d)
    }
}

/// `a + b*omega` with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadElem {
    pub field: QuadField,
    pub a: BigRat,
    pub b: BigRat,
}

impl QuadElem {
    pub fn new(field: QuadField, a: BigRat, b: BigRat) -> Self {
        QuadElem { field, a, b }
    }

    pub fn from_rational(field: QuadField, x: BigRat) -> Self {
        QuadElem::new(field, x, BigRat::zero())
    }

    pub fn one(field: QuadField) -> Self {
        QuadElem::from_rational(field, int(1))
    }

    /// `x + y*sqrt(d)`.
    pub fn from_sqrt_form(field: QuadField, x: BigRat, y: BigRat) -> Self {
        if field.omega_is_half() {
            // sqrt d = 2 omega - 1
            QuadElem::new(field, &x - &y, &y * int(2))
        } else {
            QuadElem::new(field, x, y)
        }
    }

    /// Coordinates `(x, y)` with `self = x + y*sqrt(d)`.
    pub fn sqrt_form(&self) -> (BigRat, BigRat) {
        if self.field.omega_is_half() {
            let half = &self.b / int(2);
            (&self.a + &half, half)
        } else {
            (self.a.clone(), self.b.clone())
        }
    }

    pub fn add(&self, o: &QuadElem) -> QuadElem {
        QuadElem::new(self.field, &self.a + &o.a, &self.b + &o.b)
    }

    pub fn sub(&self, o: &QuadElem) -> QuadElem {
        QuadElem::new(self.field, &self.a - &o.a, &self.b - &o.b)
    }

    pub fn mul(&self, o: &QuadElem) -> QuadElem {
        let t = int(self.field.omega_trace());
        let n = int(self.field.omega_norm());
        let bd = &self.b * &o.b;
        QuadElem::new(
            self.field,
            &self.a * &o.a - &bd * &n,
            &self.a * &o.b + &self.b * &o.a + &bd * &t,
        )
    }

    pub fn pow(&self, mut e: u64) -> QuadElem {
        let mut base = self.clone();
        let mut acc = QuadElem::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn conj(&self) -> QuadElem {
        let t = int(self.field.omega_trace());
        QuadElem::new(self.field, &self.a + &self.b * t, -&self.b)
    }

    pub fn trace(&self) -> BigRat {
        &self.a * int(2) + &self.b * int(self.field.omega_trace())
    }

    pub fn norm(&self) -> BigRat {
        &self.a * &self.a
            + &self.a * &self.b * int(self.field.omega_trace())
            + &self.b * &self.b * int(self.field.omega_norm())
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    pub fn is_unit(&self) -> bool {
        self.is_integral() && self.norm().abs().is_one()
    }

    fn is_p_integral(&self, p: u64) -> bool {
        let pb = BigInt::from(p);
        !(self.a.denom() % &pb).is_zero() && !(self.b.denom() % &pb).is_zero()
    }

    fn bits(&self) -> u64 {
        [self.a.numer(), self.a.denom(), self.b.numer(), self.b.denom()]
            .iter()
            .map(|x| x.bits())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.sqrt_form();
        write!(f, "{} + {}*sqrt({})", format_rat(&x), format_rat(&y), self.field.d)
    }
}

/// How a rational prime decomposes in the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlaceKind {
    /// One of the two places of a split prime; the index orders them by
    /// the residue of the corresponding root of the minimal polynomial of
    /// `omega`.
    Split(u8),
    Inert,
    Ramified,
}

impl fmt::Display for PlaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceKind::Split(i) => write!(f, "split-{}", i + 1),
            PlaceKind::Inert => write!(f, "inert"),
            PlaceKind::Ramified => write!(f, "ramified"),
        }
    }
}

impl Serialize for PlaceKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A finite place of a quadratic field. Split places carry a root of the
/// minimal polynomial of `omega` lifted to `precision` p-adic digits; the
/// lift is immutable, [`QuadPlace::relift`] returns a new value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadPlace {
    pub field: QuadField,
    pub p: u64,
    pub kind: PlaceKind,
    root: Option<BigInt>,
    precision: u32,
}

impl QuadPlace {
    pub fn residue_degree(&self) -> u32 {
        match self.kind {
            PlaceKind::Inert => 2,
            _ => 1,
        }
    }

    pub fn local_degree(&self) -> u32 {
        match self.kind {
            PlaceKind::Split(_) => 1,
            _ => 2,
        }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Root of `x^2 - Tr(omega) x + N(omega)` modulo `p^precision`
    /// (split places only).
    pub fn root_lift(&self) -> Option<&BigInt> {
        self.root.as_ref()
    }

    pub fn relift(&self, precision: u32) -> QuadPlace {
        let root = self
            .root
            .as_ref()
            .map(|r| hensel_lift(&self.field, self.p, r, precision));
        QuadPlace {
            root,
            precision,
            ..self.clone()
        }
    }

    /// Short label: `"2"` for the unique place above 2, `"11:0"` and
    /// `"11:1"` for the two places above a split 11.
    pub fn label(&self) -> String {
        match self.kind {
            PlaceKind::Split(i) => format!("{}:{}", self.p, i),
            _ => self.p.to_string(),
        }
    }

    fn root_at(&self, k: u32) -> BigInt {
        let r = self.root.as_ref().expect("split place has a root");
        hensel_lift(&self.field, self.p, r, k)
    }

    /// `w_v(x)` for `x` in the field, exact. `None` for `x = 0`.
    fn weight_exact(&self, x: &QuadElem) -> Result<Option<u64>> {
        if x.a.is_zero() && x.b.is_zero() {
            return Ok(None);
        }
        match self.kind {
            PlaceKind::Inert | PlaceKind::Ramified => {
                let n = x.norm();
                let v = ord_p_int(n.numer(), self.p) as i64 - ord_p_int(n.denom(), self.p) as i64;
                if v < 0 {
                    return domain("element is not integral at v");
                }
                Ok(Some(v as u64))
            }
            PlaceKind::Split(_) => {
                if !x.is_p_integral(self.p) {
                    return domain("element is not p-integral");
                }
                let mut k = INITIAL_PRECISION.max(self.precision);
                loop {
                    let m = modulus(self.p, k);
                    let theta = self.root_at(k);
                    let img = (reduce_rat(&x.a, &m) + reduce_rat(&x.b, &m) * theta).mod_floor(&m);
                    if let Some(w) = local::ord_mod(&img, self.p) {
                        return Ok(Some(w));
                    }
                    if k >= MAX_PRECISION {
                        return Err(Error::Resource(format!(
                            "valuation at a place above {} exceeds {MAX_PRECISION} digits",
                            self.p
                        )));
                    }
                    k = (k * 2).min(MAX_PRECISION);
                }
            }
        }
    }
}

impl fmt::Display for QuadPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} place above {} in {}", self.kind, self.p, self.field)
    }
}

impl Serialize for QuadPlace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuadPlace", 5)?;
        st.serialize_field("d", &self.field.d)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("residue_degree", &self.residue_degree())?;
        st.serialize_field("label", &self.label())?;
        st.end()
    }
}

fn hensel_lift(field: &QuadField, p: u64, root: &BigInt, k: u32) -> BigInt {
    let t = BigInt::from(field.omega_trace());
    let n = BigInt::from(field.omega_norm());
    let mut x = root.mod_floor(&BigInt::from(p));
    let mut prec = 1u32;
    while prec < k {
        prec = (prec * 2).min(k);
        let m = modulus(p, prec);
        let f = (&x * &x - &t * &x + &n).mod_floor(&m);
        let df = (&x * BigInt::from(2) - &t).mod_floor(&m);
        let inv = local::inverse_mod(&df, &m).expect("simple root");
        x = (&x - f * inv).mod_floor(&m);
    }
    x.mod_floor(&modulus(p, k))
}

fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    // Tonelli-Shanks
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul(tt, tt);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul(b, b);
        t = mul(t, c);
        r = mul(r, b);
    }
    Some(r)
}

/// The places above `p`: one ramified place if `p | disc`, two split
/// places if the minimal polynomial of `omega` has two roots mod `p`, one
/// inert place otherwise. Split places are lifted to 32 p-adic digits.
pub fn places_above(field: &QuadField, p: u64) -> Result<Vec<QuadPlace>> {
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    let place = |kind, root| QuadPlace {
        field: *field,
        p,
        kind,
        root,
        precision: if matches!(kind, PlaceKind::Split(_)) { INITIAL_PRECISION } else { 0 },
    };
    if field.disc.rem_euclid(p as i64) == 0 {
        return Ok(vec![place(PlaceKind::Ramified, None)]);
    }
    let t = field.omega_trace().rem_euclid(p as i64) as u64;
    let n = field.omega_norm().rem_euclid(p as i64) as u64;
    let roots: Vec<u64> = if p == 2 {
        (0..2u64).filter(|&x| (x * x + t * x + n).is_multiple_of(2)).collect()
    } else {
        // x = (t +- sqrt(disc)) / 2
        let disc = field.disc.rem_euclid(p as i64) as u64;
        match sqrt_mod_prime(disc, p) {
            None => Vec::new(),
            Some(s) => {
                let half = pow_mod(2, p - 2, p);
                let r1 = (((t + s) % p) as u128 * half as u128 % p as u128) as u64;
                let r2 = (((t + p - s) % p) as u128 * half as u128 % p as u128) as u64;
                let mut v = vec![r1, r2];
                v.sort_unstable();
                v
            }
        }
    };
    match roots.len() {
        0 => Ok(vec![place(PlaceKind::Inert, None)]),
        2 => Ok(roots
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                place(
                    PlaceKind::Split(i as u8),
                    Some(hensel_lift(field, p, &BigInt::from(r), INITIAL_PRECISION)),
                )
            })
            .collect()),
        _ => Err(Error::Invariant(format!("unexpected root count above {p}"))),
    }
}

/// Kernel of a unit `xi` at a finite place `v` (where `|xi|_v = 1`
/// automatically holds).
pub fn compute_kernel_quad(xi: &QuadElem, v: &QuadPlace) -> Result<PlaceKernel> {
    if xi.field != v.field {
        return domain("element and place belong to different fields");
    }
    if !xi.norm().abs().is_one() {
        return domain(format!("N({xi}) = {} is not +-1", format_rat(&xi.norm())));
    }
    if !xi.is_p_integral(v.p) {
        return domain(format!("|{xi}|_v != 1 at {v}"));
    }
    let p = v.p;
    let residue = |k: u32| -> (QuadRing, QuadResidue) {
        let m = modulus(p, k);
        let x = QuadResidue {
            a: reduce_rat(&xi.a, &m),
            b: reduce_rat(&xi.b, &m),
        };
        let ring = QuadRing {
            trace: BigInt::from(xi.field.omega_trace()),
            norm: BigInt::from(xi.field.omega_norm()),
            modulus: m,
        };
        (ring, x)
    };
    let group = if p == 2 { 1 } else { p - 1 };
    match v.kind {
        PlaceKind::Split(_) => build_kernel(p, group, 1, 1, |e: &BigUint, k| {
            let m = modulus(p, k);
            let theta = v.root_at(k);
            let img = (reduce_rat(&xi.a, &m) + reduce_rat(&xi.b, &m) * theta).mod_floor(&m);
            degree_one_weight(&img, p, e, &m)
        }),
        PlaceKind::Inert => build_kernel(p, p * p - 1, 2, 2, |e: &BigUint, k| {
            let (ring, x) = residue(k);
            let y = ring.minus_one(&ring.pow(&x, e));
            let wa = local::ord_mod(&y.a, p);
            let wb = local::ord_mod(&y.b, p);
            match (wa, wb) {
                (None, None) => None,
                (Some(a), None) => Some(2 * a),
                (None, Some(b)) => Some(2 * b),
                (Some(a), Some(b)) => Some(2 * a.min(b)),
            }
        }),
        PlaceKind::Ramified => build_kernel(p, group, 1, 2, |e: &BigUint, k| {
            let (ring, x) = residue(k);
            let y = ring.minus_one(&ring.pow(&x, e));
            local::ord_mod(&ring.norm_of(&y), p)
        }),
    }
}

/// `|xi^n - 1|_v` from the exact power `xi^n`; the oracle for
/// quadratic kernels.
pub fn quad_abs_direct(xi: &QuadElem, v: &QuadPlace, n: u64) -> Result<BigRat> {
    if n == 0 {
        return domain("n must be positive");
    }
    if xi.bits().saturating_mul(n) > DIRECT_BIT_BUDGET * 2 {
        return Err(Error::Resource(format!("{xi}^{n} exceeds the bit budget")));
    }
    let x = xi.pow(n).sub(&QuadElem::one(xi.field));
    match v.kind {
        PlaceKind::Inert | PlaceKind::Ramified => abs_p(&x.norm(), v.p),
        PlaceKind::Split(_) => match v.weight_exact(&x)? {
            None => Ok(BigRat::zero()),
            Some(w) => Ok(prime_power_inverse(v.p, w as i64)),
        },
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn golden() -> (QuadField, QuadElem) {
        let f = QuadField::new(5).unwrap();
        // (3 + sqrt 5)/2
        let xi = QuadElem::from_sqrt_form(f, rat(3, 2), rat(1, 2));
        (f, xi)
    }

    #[test]
    fn field_construction() {
        assert_eq!(QuadField::new(5).unwrap().disc, 5);
        assert_eq!(QuadField::new(2).unwrap().disc, 8);
        assert_eq!(QuadField::new(3).unwrap().disc, 12);
        assert!(QuadField::new(12).is_err());
        assert!(QuadField::new(1).is_err());
        assert!(QuadField::new(-3).is_err());
    }

    #[test]
    fn element_arithmetic() {
        let (f, xi) = golden();
        assert_eq!(xi.norm(), int(1));
        assert_eq!(xi.trace(), int(3));
        assert!(xi.is_unit());
        assert_eq!(xi.mul(&xi.conj()), QuadElem::one(f));
        // traces 3, 7, 18, 47
        let traces: Vec<BigRat> = (1..=4).map(|n| xi.pow(n).trace()).collect();
        assert_eq!(traces, vec![int(3), int(7), int(18), int(47)]);
        let (x, y) = xi.sqrt_form();
        assert_eq!((x, y), (rat(3, 2), rat(1, 2)));
        let f2 = QuadField::new(2).unwrap();
        let u = QuadElem::from_sqrt_form(f2, int(1), int(1));
        assert_eq!(u.norm(), int(-1));
        assert_eq!(u.pow(2).trace(), int(6));
    }

    #[test]
    fn splitting_types() {
        let f = QuadField::new(5).unwrap();
        let above11 = places_above(&f, 11).unwrap();
        assert_eq!(above11.len(), 2);
        assert!(above11.iter().all(|v| v.residue_degree() == 1));
        let above2 = places_above(&f, 2).unwrap();
        assert_eq!(above2.len(), 1);
        assert_eq!(above2[0].kind, PlaceKind::Inert);
        assert_eq!(above2[0].residue_degree(), 2);
        let above5 = places_above(&f, 5).unwrap();
        assert_eq!(above5[0].kind, PlaceKind::Ramified);
        assert_eq!(places_above(&f, 3).unwrap()[0].kind, PlaceKind::Inert);
        assert_eq!(places_above(&f, 19).unwrap().len(), 2);
        // d = 17 = 1 mod 8: 2 splits
        let f17 = QuadField::new(17).unwrap();
        assert_eq!(places_above(&f17, 2).unwrap().len(), 2);
        // d = 3: 2 ramifies
        let f3 = QuadField::new(3).unwrap();
        assert_eq!(places_above(&f3, 2).unwrap()[0].kind, PlaceKind::Ramified);
        assert!(places_above(&f, 9).is_err());
    }

    #[test]
    fn lifted_roots_are_roots() {
        let f = QuadField::new(5).unwrap();
        for v in places_above(&f, 11).unwrap() {
            let m = modulus(11, v.precision());
            let r = v.root_lift().unwrap();
            let val = (r * r - r - BigInt::one()).mod_floor(&m);
            assert!(val.is_zero());
            let deeper = v.relift(100);
            let m = modulus(11, 100);
            let r = deeper.root_lift().unwrap();
            assert!((r * r - r - BigInt::one()).mod_floor(&m).is_zero());
        }
    }

    #[test]
    fn golden_kernel_inert_two() {
        let (f, xi) = golden();
        let v = places_above(&f, 2).unwrap().remove(0);
        let k = compute_kernel_quad(&xi, &v).unwrap();
        assert_eq!(k.order, 3);
        assert_eq!(k.residue_degree, 2);
        // N(xi^3 - 1) = 2 - t_3 = -16
        assert_eq!(k.eval(3), rat(1, 16));
        assert_eq!(k.eval(1), int(1));
        assert_eq!(k.eval(5), int(1));
    }

    #[test]
    fn golden_kernel_split_eleven() {
        let (f, xi) = golden();
        for v in places_above(&f, 11).unwrap() {
            let k = compute_kernel_quad(&xi, &v).unwrap();
            assert_eq!(10 % k.order, 0);
            for n in 1..60 {
                assert_eq!(k.eval(n), quad_abs_direct(&xi, &v, n).unwrap(), "n={n} {v}");
            }
        }
    }

    #[test]
    fn ramified_uses_local_degree_two() {
        let (f, xi) = golden();
        let v = places_above(&f, 5).unwrap().remove(0);
        let k = compute_kernel_quad(&xi, &v).unwrap();
        assert_eq!((k.order, k.residue_degree, k.local_degree), (2, 1, 2));
        // N(xi^2 - 1) = 2 - 7 = -5, N(xi^10 - 1) = 2 - t_10 = -15125 = -5^3 * 121
        assert_eq!(k.eval(2), rat(1, 5));
        assert_eq!(k.eval(10), rat(1, 125));
    }

    #[test]
    fn kernel_rejects_bad_inputs() {
        let (f, xi) = golden();
        let v = places_above(&f, 2).unwrap().remove(0);
        let two = QuadElem::from_rational(f, int(2));
        assert!(compute_kernel_quad(&two, &v).is_err());
        let f2 = QuadField::new(2).unwrap();
        let w = places_above(&f2, 7).unwrap().remove(0);
        assert!(compute_kernel_quad(&xi, &w).is_err());
    }
}
