//! Periodic-point counts of solenoid automorphisms and of toral
//! automorphisms with a quadratic eigenvalue, their zeta functions, and
//! growth rates.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{format_rat, int, ord_p, BigRat, PrimeSet};
use crate::error::{domain, Error, Result};
use crate::fixed;
use crate::kernel::{
    compute_kernel_quad, compute_kernel_rational, kernel_product, places_above, PlaceKernel,
    QuadElem, QuadField, QuadPlace,
};

/// Bit budget for `a^n` when forming `f(n)` exactly.
pub const F_BIT_BUDGET: u64 = 1 << 26;

/// Which primes enter `|r^n - 1|_S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", content = "primes", rename_all = "lowercase")]
pub enum SMode {
    /// `S` itself is given.
    Finite(PrimeSet),
    /// `S` is the set of all primes outside the finite set `T`.
    Cofinite(PrimeSet),
}

/// The automorphism `x -> r x` of the solenoid attached to `S`.
#[derive(Debug, Clone, Serialize)]
pub struct SolenoidSpec {
    #[serde(with = "crate::arith::serde_rat")]
    r: BigRat,
    #[serde(serialize_with = "ser_display")]
    a: BigInt,
    #[serde(serialize_with = "ser_display")]
    b: BigInt,
    inverted: bool,
    #[serde(flatten)]
    mode: SMode,
    /// `S' = {p in S : |r|_p = 1}` in finite mode, `T` in cofinite mode.
    active: PrimeSet,
    #[serde(skip)]
    kernels: Vec<PlaceKernel>,
}

fn ser_display<S: serde::Serializer, T: std::fmt::Display>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl SolenoidSpec {
    /// Finite `S`. Primes dividing the numerator or denominator of `r`
    /// only contribute through `a^n - b^n`, so `S` is read as containing
    /// every prime of the denominator.
    pub fn finite(r: BigRat, s: PrimeSet) -> Result<Self> {
        let (a, b, inverted) = crate::arith::normalize_ratio(&r)?;
        let x = BigRat::new(a.clone(), b.clone());
        let mut active = Vec::new();
        for p in s.iter() {
            if ord_p(&x, p)? == 0 {
                active.push(p);
            }
        }
        let active = PrimeSet::new(active)?;
        let kernels = active
            .iter()
            .map(|p| compute_kernel_rational(&x, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(SolenoidSpec {
            r,
            a,
            b,
            inverted,
            mode: SMode::Finite(s),
            active,
            kernels,
        })
    }

    /// Cofinite `S`, described by its finite complement `T`; requires
    /// `|r|_p = 1` on `T`.
    pub fn cofinite(r: BigRat, t: PrimeSet) -> Result<Self> {
        let (a, b, inverted) = crate::arith::normalize_ratio(&r)?;
        let x = BigRat::new(a.clone(), b.clone());
        for p in t.iter() {
            if ord_p(&x, p)? != 0 {
                return domain(format!("|{}|_{p} != 1 for p in T", format_rat(&r)));
            }
        }
        let kernels = t
            .iter()
            .map(|p| compute_kernel_rational(&x, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(SolenoidSpec {
            r,
            a,
            b,
            inverted,
            mode: SMode::Cofinite(t.clone()),
            active: t,
            kernels,
        })
    }

    pub fn r(&self) -> &BigRat {
        &self.r
    }

    /// `a/b`, the normalized ratio with `a > |b| >= 1`.
    pub fn ratio(&self) -> BigRat {
        BigRat::new(self.a.clone(), self.b.clone())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// Whether `r` was replaced by `1/r`.
    pub fn inverted(&self) -> bool {
        self.inverted
    }

    pub fn mode(&self) -> &SMode {
        &self.mode
    }

    pub fn is_cofinite(&self) -> bool {
        matches!(self.mode, SMode::Cofinite(_))
    }

    /// `S'` (finite mode) or `T` (cofinite mode).
    pub fn active_primes(&self) -> &PrimeSet {
        &self.active
    }

    pub fn kernels(&self) -> &[PlaceKernel] {
        &self.kernels
    }

    /// `prod_{p in S'} |r^n - 1|_p` (or over `T`).
    pub fn kernel_factor(&self, n: u64) -> BigRat {
        kernel_product(&self.kernels, n)
    }

    pub fn describe(&self) -> String {
        match &self.mode {
            SMode::Finite(s) => format!("r={}, S={s}", format_rat(&self.r)),
            SMode::Cofinite(t) => format!("r={}, T={t}", format_rat(&self.r)),
        }
    }
}

/// A run of coefficients `c_offset, c_(offset+1), ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesPrefix {
    pub offset: u64,
    #[serde(with = "crate::arith::serde_rat_vec")]
    pub coeffs: Vec<BigRat>,
}

impl SeriesPrefix {
    pub fn new(offset: u64, coeffs: Vec<BigRat>) -> Self {
        SeriesPrefix { offset, coeffs }
    }

    pub fn from_integers(offset: u64, coeffs: Vec<BigInt>) -> Self {
        SeriesPrefix::new(offset, coeffs.into_iter().map(BigRat::from_integer).collect())
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the last coefficient.
    pub fn last_index(&self) -> u64 {
        self.offset + self.coeffs.len() as u64 - 1
    }

    pub fn get(&self, n: u64) -> Option<&BigRat> {
        n.checked_sub(self.offset)
            .and_then(|i| self.coeffs.get(i as usize))
    }

    /// `(n, c_n)` rows under a `n,<column>` header.
    pub fn to_csv(&self, column: &str) -> String {
        let mut out = format!("n,{column}\n");
        for (i, c) in self.coeffs.iter().enumerate() {
            let _ = writeln!(out, "{},{}", self.offset + i as u64, format_rat(c));
        }
        out
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rat).collect()
    }
}

fn check_budget(a: &BigInt, n: u64) -> Result<()> {
    if a.bits().saturating_mul(n) > F_BIT_BUDGET {
        return Err(Error::Resource(format!(
            "a^n with a = {a}, n = {n} exceeds the {F_BIT_BUDGET}-bit budget"
        )));
    }
    Ok(())
}

fn exact_integer(x: BigRat, what: &str) -> Result<BigInt> {
    if !x.is_integer() || !x.is_positive() {
        return Err(Error::Invariant(format!("{what} = {} is not a positive integer", format_rat(&x))));
    }
    Ok(x.to_integer())
}

/// `x * factor` for an integer `x`, by one exact division.
fn scaled(x: BigInt, factor: &BigRat, what: &str) -> Result<BigInt> {
    let (q, r) = (x * factor.numer()).div_rem(factor.denom());
    if !r.is_zero() || !q.is_positive() {
        return Err(Error::Invariant(format!("{what} is not a positive integer")));
    }
    Ok(q)
}

/// `f_S(n)`: `(a^n - b^n) prod_{p in S'} |r^n - 1|_p` in finite mode,
/// `prod_{p in T} |r^n - 1|_p^(-1)` in cofinite mode.
pub fn f_value(spec: &SolenoidSpec, n: u64) -> Result<BigInt> {
    if n == 0 {
        return domain("n must be positive");
    }
    let factor = spec.kernel_factor(n);
    match spec.mode {
        SMode::Finite(_) => {
            check_budget(&spec.a, n)?;
            let e = u32::try_from(n).map_err(|_| Error::Resource("n too large".into()))?;
            let archimedean = spec.a.pow(e) - spec.b.pow(e);
            scaled(archimedean, &factor, "f(n)")
        }
        SMode::Cofinite(_) => exact_integer(factor.recip(), "f(n)"),
    }
}

/// `f_S(1..=len)`, computed in parallel over `n`.
pub fn f_prefix(spec: &SolenoidSpec, len: u64) -> Result<SeriesPrefix> {
    if len == 0 {
        return domain("prefix length must be positive");
    }
    let vals = (1..=len)
        .into_par_iter()
        .map(|n| f_value(spec, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(SeriesPrefix::from_integers(1, vals))
}

/// `prod_v |xi^n - 1|_v` over the given kernels, for `n = 1..=len`.
pub fn kernel_prefix(kernels: &[PlaceKernel], len: u64) -> SeriesPrefix {
    SeriesPrefix::new(1, (1..=len).map(|n| kernel_product(kernels, n)).collect())
}

/// Toral automorphism with eigenvalues `xi`, `eta`: a real quadratic unit
/// and its conjugate, together with finite places `S` of `Q(xi)`.
#[derive(Debug, Clone, Serialize)]
pub struct CatmapSpec {
    pub field: QuadField,
    #[serde(serialize_with = "ser_display")]
    pub trace: BigInt,
    pub norm: i64,
    #[serde(serialize_with = "ser_display")]
    pub xi: QuadElem,
    pub places: Vec<QuadPlace>,
    #[serde(skip)]
    kernels: Vec<PlaceKernel>,
}

fn squarefree_decomposition(n: u64) -> (u64, u64) {
    // n = k^2 * d with d squarefree
    let mut k = 1u64;
    let mut d = 1u64;
    for (p, e) in crate::arith::factor_u64(n) {
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
    }
    (k, d)
}

/// Resolves `"p"` (inert or ramified `p`, or either place when only one
/// exists) and `"p:i"` (the `i`-th place above a split `p`).
pub fn resolve_place(field: &QuadField, label: &str) -> Result<QuadPlace> {
    let (p, idx) = match label.split_once(':') {
        Some((p, i)) => (p, Some(i)),
        None => (label, None),
    };
    let p: u64 = p
        .trim()
        .parse()
        .map_err(|_| Error::Domain(format!("bad place label {label:?}")))?;
    let mut above = places_above(field, p)?;
    match idx {
        None if above.len() == 1 => Ok(above.remove(0)),
        None => domain(format!("{p} splits in {field}; name a place as {p}:0 or {p}:1")),
        Some(i) => {
            let i: usize = i
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("bad place label {label:?}")))?;
            if above.len() == 1 || i >= above.len() {
                return domain(format!("no place {label:?} in {field}"));
            }
            Ok(above.remove(i))
        }
    }
}

impl CatmapSpec {
    /// The unit with minimal polynomial `x^2 - trace x + norm`, taken as
    /// the root greater than 1. Needs `norm = +-1`, `trace >= 1` and a
    /// positive non-square discriminant.
    pub fn new(trace: i64, norm: i64, places: Vec<QuadPlace>) -> Result<Self> {
        if norm.abs() != 1 {
            return domain(format!("norm {norm} is not +-1"));
        }
        if trace < 1 {
            return domain("trace must be at least 1");
        }
        let disc = trace as i128 * trace as i128 - 4 * norm as i128;
        if disc <= 0 {
            return domain(format!("x^2 - {trace}x + {norm} has non-real roots"));
        }
        let disc = u64::try_from(disc).map_err(|_| Error::Domain("trace too large".into()))?;
        let (k, d) = squarefree_decomposition(disc);
        if d == 1 {
            return domain(format!("x^2 - {trace}x + {norm} has rational roots"));
        }
        let field = QuadField::new(d as i64)?;
        let xi = QuadElem::from_sqrt_form(field, BigRat::new(trace.into(), 2.into()), BigRat::new((k as i64).into(), 2.into()));
        let mut kernels = Vec::new();
        for v in &places {
            if v.field != field {
                return domain(format!("{v} is not a place of {field}"));
            }
            kernels.push(compute_kernel_quad(&xi, v)?);
        }
        Ok(CatmapSpec {
            field,
            trace: BigInt::from(trace),
            norm,
            xi,
            places,
            kernels,
        })
    }

    /// Builds the places from labels, see [`resolve_place`].
    pub fn with_labels(trace: i64, norm: i64, labels: &[&str]) -> Result<Self> {
        let bare = CatmapSpec::new(trace, norm, Vec::new())?;
        let places = labels
            .iter()
            .map(|l| resolve_place(&bare.field, l))
            .collect::<Result<Vec<_>>>()?;
        CatmapSpec::new(trace, norm, places)
    }

    /// `[[2,1],[1,1]]`: `xi = (3 + sqrt 5)/2`, no finite places.
    pub fn cat_map() -> Self {
        CatmapSpec::new(3, 1, Vec::new()).expect("cat map is valid")
    }

    pub fn kernels(&self) -> &[PlaceKernel] {
        &self.kernels
    }

    /// `t_n = Tr(xi^n)` for `n = 0..=len`.
    pub fn traces(&self, len: u64) -> Vec<BigInt> {
        let mut t = vec![BigInt::from(2), self.trace.clone()];
        for n in 2..=len as usize {
            let next = &self.trace * &t[n - 1] - BigInt::from(self.norm) * &t[n - 2];
            t.push(next);
        }
        t.truncate(len as usize + 1);
        t
    }

    /// `|N(xi^n - 1)| = t_n - 1 - N(xi)^n`.
    fn archimedean(&self, n: u64, t_n: &BigInt) -> BigInt {
        let sign = if self.norm == -1 && n % 2 == 1 { -1 } else { 1 };
        t_n - 1 - sign
    }

    pub fn describe(&self) -> String {
        let labels: Vec<String> = self.places.iter().map(|v| v.label()).collect();
        format!("xi={} (trace {}, norm {}), S={{{}}}", self.xi, self.trace, self.norm, labels.join(","))
    }
}

/// `F(n) = |N(xi^n - 1)| prod_{v in S} |xi^n - 1|_v`.
pub fn catmap_f(spec: &CatmapSpec, n: u64) -> Result<BigInt> {
    if n == 0 {
        return domain("n must be positive");
    }
    let t = spec.traces(n);
    catmap_term(spec, n, &t[n as usize])
}

fn catmap_term(spec: &CatmapSpec, n: u64, t_n: &BigInt) -> Result<BigInt> {
    scaled(spec.archimedean(n, t_n), &kernel_product(&spec.kernels, n), "F(n)")
}

pub fn catmap_prefix(spec: &CatmapSpec, len: u64) -> Result<SeriesPrefix> {
    if len == 0 {
        return domain("prefix length must be positive");
    }
    if spec.trace.bits().saturating_mul(len) > F_BIT_BUDGET {
        return Err(Error::Resource(format!("trace sequence to n = {len} exceeds the bit budget")));
    }
    let t = spec.traces(len);
    let vals = (1..=len)
        .into_par_iter()
        .map(|n| catmap_term(spec, n, &t[n as usize]))
        .collect::<Result<Vec<_>>>()?;
    Ok(SeriesPrefix::from_integers(1, vals))
}

/// `zeta_0..zeta_N` from `F(1..N)` via `m zeta_m = sum_k F(k) zeta_(m-k)`.
pub fn zeta_coeffs(fp: &SeriesPrefix) -> Result<SeriesPrefix> {
    if fp.offset != 1 {
        return domain("counting sequence must start at n = 1");
    }
    let mut z: Vec<BigRat> = vec![BigRat::one()];
    for m in 1..=fp.len() {
        let mut acc = BigRat::zero();
        for k in 1..=m {
            let f = &fp.coeffs[k - 1];
            if !f.is_zero() {
                acc += f * &z[m - k];
            }
        }
        z.push(acc / int(m as u64));
    }
    Ok(SeriesPrefix::new(0, z))
}

/// Checks `sum n zeta_n z^n = (sum F(n) z^n)(sum zeta_n z^n)` through
/// degree `N`, as a product of truncated series.
pub fn zeta_genfun_identity_check(fp: &SeriesPrefix, zp: &SeriesPrefix) -> Result<bool> {
    if fp.offset != 1 || zp.offset != 0 || zp.len() != fp.len() + 1 {
        return domain(format!(
            "zeta prefix must cover 0..={} (got offset {} length {})",
            fp.len(),
            zp.offset,
            zp.len()
        ));
    }
    let n_max = fp.len();
    let mut product = vec![BigRat::zero(); n_max + 1];
    for (i, f) in fp.coeffs.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        for (j, z) in zp.coeffs.iter().enumerate() {
            let deg = i + 1 + j;
            if deg > n_max {
                break;
            }
            product[deg] += f * z;
        }
    }
    Ok((0..=n_max).all(|n| product[n] == &zp.coeffs[n] * int(n as u64)))
}

/// Exponential growth of the counting sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthRate {
    /// Dominant root as an exact expression.
    pub dominant: String,
    /// Radius of convergence of `F`, `1/dominant`.
    pub radius: String,
    /// `log(dominant)`, the topological entropy, in decimal.
    pub entropy: String,
    pub radius_decimal: String,
}

fn growth_from_fixed(dominant: String, x: &BigInt, bits: u32) -> GrowthRate {
    let digits = fixed::decimal_digits(bits).saturating_sub(4);
    let as_rat = BigRat::new(x.clone(), fixed::one(bits));
    let entropy = fixed::ln(&as_rat, bits);
    let radius = (fixed::one(bits) << bits) / x;
    let radius_sym = if dominant == "1" { "1".to_string() } else { format!("1/{dominant}") };
    GrowthRate {
        dominant,
        radius: radius_sym,
        entropy: fixed::to_decimal(&entropy, bits, digits),
        radius_decimal: fixed::to_decimal(&radius, bits, digits),
    }
}

/// Finite mode: dominant root `a`; cofinite mode: polynomial growth, so
/// radius 1 and entropy 0.
pub fn growth_rate(spec: &SolenoidSpec, bits: u32) -> GrowthRate {
    match spec.mode {
        SMode::Finite(_) => growth_from_fixed(spec.a.to_string(), &(spec.a.clone() << bits), bits),
        SMode::Cofinite(_) => growth_from_fixed("1".into(), &fixed::one(bits), bits),
    }
}

/// Dominant root `xi = (t + sqrt(t^2 - 4N))/2`; `xi` is a unit, so no
/// finite place contributes.
pub fn catmap_growth(spec: &CatmapSpec, bits: u32) -> GrowthRate {
    let t = spec.trace.to_i64().expect("trace fits");
    let disc = BigInt::from(t * t - 4 * spec.norm) << bits;
    let xi = ((spec.trace.clone() << bits) + fixed::sqrt(&disc, bits)) >> 1;
    let dominant = format!("({} + sqrt({}))/2", spec.trace, t * t - 4 * spec.norm);
    growth_from_fixed(dominant, &xi, bits)
}

/// `C n^rho fp(n)` with `C = prod C_v^(-1)` and `rho` the sum of the
/// local degrees; every entry must be a positive integer.
pub fn derivative_trick_transform(fp: &SeriesPrefix, kernels: &[PlaceKernel]) -> Result<Vec<BigInt>> {
    if fp.offset != 1 {
        return domain("sequence must start at n = 1");
    }
    let c: BigRat = kernels.iter().map(|k| k.constant.recip()).product();
    let rho: u32 = kernels.iter().map(|k| k.local_degree).sum();
    fp.coeffs
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let n = i as u64 + 1;
            let bad = |v: BigRat| {
                Err(Error::Invariant(format!(
                    "C n^rho f(n) = {} at n = {n} is not a positive integer",
                    format_rat(&v)
                )))
            };
            // integer arithmetic; rational products would reduce by gcd each time
            let num = c.numer() * BigInt::from(n).pow(rho) * f.numer();
            let den = c.denom() * f.denom();
            let (q, r) = num.div_rem(&den);
            if !r.is_zero() || !q.is_positive() {
                return bad(BigRat::new(num, den));
            }
            Ok(q)
        })
        .collect()
}

/// Checks `a | b` for positive integers given as rationals.
pub fn divides(a: &BigRat, b: &BigRat) -> bool {
    a.is_integer() && b.is_integer() && !a.is_zero() && b.to_integer().is_multiple_of(&a.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, PrimeSet};

    fn set(v: &[u64]) -> PrimeSet {
        PrimeSet::new(v.iter().copied()).unwrap()
    }

    fn ints(p: &SeriesPrefix) -> Vec<i64> {
        p.coeffs.iter().map(|c| c.to_integer().to_i64().unwrap()).collect()
    }

    #[test]
    fn two_with_two_three() {
        let spec = SolenoidSpec::finite(int(2), set(&[2, 3])).unwrap();
        assert_eq!(spec.active_primes(), &set(&[3]));
        let p = f_prefix(&spec, 8).unwrap();
        assert_eq!(ints(&p), vec![1, 1, 7, 5, 31, 7, 127, 85]);
    }

    #[test]
    fn two_with_two_is_mersenne() {
        let spec = SolenoidSpec::finite(int(2), set(&[2])).unwrap();
        assert_eq!(f_value(&spec, 5).unwrap(), BigInt::from(31));
    }

    #[test]
    fn cofinite_three() {
        let spec = SolenoidSpec::cofinite(int(2), set(&[3])).unwrap();
        assert_eq!(f_value(&spec, 6).unwrap(), BigInt::from(9));
        assert!(SolenoidSpec::cofinite(int(3), set(&[3])).is_err());
        let p = f_prefix(&spec, 30).unwrap();
        for c in &p.coeffs {
            let mut x = c.to_integer();
            while x.is_multiple_of(&BigInt::from(3)) {
                x /= 3;
            }
            assert!(x.is_one());
        }
    }

    #[test]
    fn normalization() {
        let spec = SolenoidSpec::finite(rat(2, 3), set(&[])).unwrap();
        assert!(spec.inverted());
        assert_eq!((spec.a().clone(), spec.b().clone()), (BigInt::from(3), BigInt::from(2)));
        assert_eq!(f_value(&spec, 2).unwrap(), BigInt::from(5));
        let neg = SolenoidSpec::finite(int(-2), set(&[])).unwrap();
        assert_eq!(f_value(&neg, 1).unwrap(), BigInt::from(3));
        assert!(SolenoidSpec::finite(int(1), set(&[])).is_err());
        assert!(SolenoidSpec::finite(int(-1), set(&[])).is_err());
        assert!(SolenoidSpec::finite(int(0), set(&[])).is_err());
    }

    #[test]
    fn catmap_counts() {
        let cat = CatmapSpec::cat_map();
        assert_eq!(cat.field.d, 5);
        let p = catmap_prefix(&cat, 6).unwrap();
        assert_eq!(ints(&p), vec![1, 5, 16, 45, 121, 320]);
        let inert = CatmapSpec::with_labels(3, 1, &["2"]).unwrap();
        assert_eq!(catmap_f(&inert, 3).unwrap(), BigInt::from(1));
        let golden = CatmapSpec::new(1, -1, Vec::new()).unwrap();
        // Lucas numbers: L_n - 1 - (-1)^n
        let p = catmap_prefix(&golden, 6).unwrap();
        assert_eq!(ints(&p), vec![1, 1, 4, 5, 11, 16]);
        assert!(CatmapSpec::new(2, 1, Vec::new()).is_err());
        assert!(CatmapSpec::new(3, 2, Vec::new()).is_err());
        assert!(CatmapSpec::with_labels(3, 1, &["11"]).is_err());
        assert!(CatmapSpec::with_labels(3, 1, &["11:0", "11:1"]).is_ok());
    }

    #[test]
    fn zeta_of_mersenne() {
        let spec = SolenoidSpec::finite(int(2), set(&[2])).unwrap();
        let fp = f_prefix(&spec, 6).unwrap();
        let z = zeta_coeffs(&fp).unwrap();
        assert_eq!(ints(&z), vec![1, 1, 2, 4, 8, 16, 32]);
        assert!(zeta_genfun_identity_check(&fp, &z).unwrap());
        let mut bad = z.clone();
        bad.coeffs[3] += int(1);
        assert!(!zeta_genfun_identity_check(&fp, &bad).unwrap());
        assert!(zeta_genfun_identity_check(&fp, &SeriesPrefix::new(0, vec![int(1)])).is_err());
    }

    #[test]
    fn zeta_of_cat_map_and_zero() {
        let fp = catmap_prefix(&CatmapSpec::cat_map(), 5).unwrap();
        let z = zeta_coeffs(&fp).unwrap();
        assert_eq!(ints(&z)[..5], [1, 1, 3, 8, 21]);
        let zero = SeriesPrefix::new(1, vec![int(0); 4]);
        assert_eq!(ints(&zeta_coeffs(&zero).unwrap()), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn growth() {
        let spec = SolenoidSpec::finite(int(2), set(&[2, 3])).unwrap();
        let g = growth_rate(&spec, 128);
        assert_eq!(g.radius, "1/2");
        assert!(g.radius_decimal.starts_with("0.5000"));
        let g = growth_rate(&SolenoidSpec::cofinite(int(2), set(&[3])).unwrap(), 128);
        assert_eq!(g.radius, "1");
        assert!(g.entropy.starts_with("0.0000"));
        let g = catmap_growth(&CatmapSpec::cat_map(), 128);
        assert!(g.entropy.starts_with("0.9624236501192068949955178268487368"), "{}", g.entropy);
    }

    #[test]
    fn derivative_trick_examples() {
        let k7 = compute_kernel_rational(&int(2), 7).unwrap();
        let fp = kernel_prefix(std::slice::from_ref(&k7), 21);
        let out = derivative_trick_transform(&fp, &[k7]).unwrap();
        assert_eq!(out[2], BigInt::from(3));
        assert_eq!(out[20], BigInt::from(3));
        assert_eq!(out[4], BigInt::from(35));
        let k3 = compute_kernel_rational(&int(2), 3).unwrap();
        let fp = kernel_prefix(std::slice::from_ref(&k3), 6);
        let out = derivative_trick_transform(&fp, &[k3]).unwrap();
        assert_eq!((out[1].clone(), out[5].clone()), (BigInt::from(2), BigInt::from(2)));
        let broken = SeriesPrefix::new(1, vec![rat(1, 9)]);
        let k7 = compute_kernel_rational(&int(2), 7).unwrap();
        assert!(matches!(derivative_trick_transform(&broken, &[k7]), Err(Error::Invariant(_))));
    }

    #[test]
    fn export() {
        let p = SeriesPrefix::from_integers(1, vec![BigInt::from(1), BigInt::from(5)]);
        assert_eq!(p.to_csv("f_n"), "n,f_n\n1,1\n2,5\n");
        assert_eq!(p.to_strings(), vec!["1", "5"]);
    }
}
