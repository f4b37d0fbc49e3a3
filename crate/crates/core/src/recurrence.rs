//! The rational/irrational dichotomy: the arithmetic criterion, exact
//! linear-recurrence detection as independent evidence, closed forms in
//! the rational case, and rigid indices in the irrational case.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{format_rat, is_prime, serde_rat, serde_rat_vec, BigRat};
use crate::error::{domain, Result};
use crate::orbit::{catmap_prefix, f_prefix, f_value, CatmapSpec, SMode, SeriesPrefix, SolenoidSpec};
use crate::ratfunc::{poly, RatFunc};

pub const SCHEMA_VERSION: u32 = 1;
/// Terms withheld from the fit and used to validate a detected recurrence.
pub const HOLDOUT: usize = 32;
/// Prefix length and order bound used when a classification carries
/// detector evidence.
pub const DETECTOR_PREFIX: u64 = 64;
pub const DETECTOR_MAX_ORDER: usize = 12;

const DETECTOR_NOTE: &str = "the verdict follows the arithmetic criterion; a missing recurrence is \
evidence of irrationality, not a proof";

/// Minimal connection polynomial `C` (with `C[0] = 1`) and linear
/// complexity `L`: `s_n + sum_{i=1..L} C[i] s_(n-i) = 0` for `L <= n`.
pub fn berlekamp_massey(s: &[BigRat]) -> (usize, Vec<BigRat>) {
    let mut c = vec![BigRat::one()];
    let mut b = vec![BigRat::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut last = BigRat::one();
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l {
            d += &c[i] * &s[n - i];
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = &d / &last;
        let prev = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, BigRat::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] -= &coef * bi;
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            last = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.resize(l + 1, BigRat::zero());
    (l, c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecurrenceResult {
    pub found: bool,
    /// Order of the detected recurrence, or the linear complexity of the
    /// whole prefix when nothing was found.
    pub order: usize,
    /// `c_1..c_L` with `s_n = sum c_i s_(n-i)`; empty unless found.
    #[serde(with = "serde_rat_vec")]
    pub coefficients: Vec<BigRat>,
    pub prefix_length: usize,
    pub max_order_searched: usize,
    pub fit_window: usize,
    pub holdout: usize,
}

/// Fits the shortest recurrence on all but the last `min(32, len - 2
/// max_order - 8)` terms and accepts it when its order is at most
/// `max_order` and it predicts every withheld term exactly.
pub fn min_recurrence(prefix: &SeriesPrefix, max_order: usize) -> Result<RecurrenceResult> {
    let len = prefix.len();
    let needed = 2 * max_order + 8;
    if len < needed {
        return domain(format!("prefix of length {len} is shorter than 2*max_order + 8 = {needed}"));
    }
    let holdout = HOLDOUT.min(len - needed);
    let window = len - holdout;
    let s = &prefix.coeffs;
    let (l, c) = berlekamp_massey(&s[..window]);
    let predicts = (window..len).all(|n| {
        let mut acc = s[n].clone();
        for i in 1..=l {
            acc += &c[i] * &s[n - i];
        }
        acc.is_zero()
    });
    let found = l <= max_order && predicts;
    let (order, coefficients) = if found {
        (l, c[1..].iter().map(|x| -x).collect())
    } else {
        (berlekamp_massey(s).0, Vec::new())
    };
    Ok(RecurrenceResult {
        found,
        order,
        coefficients,
        prefix_length: len,
        max_order_searched: max_order,
        fit_window: window,
        holdout,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Rational,
    Irrational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub system: String,
    pub verdict: Verdict,
    /// Closed form of `F = sum f(n) z^n` in the rational case.
    pub genfun: Option<RatFunc>,
    /// Closed form of the zeta function in the rational case.
    pub zeta: Option<RatFunc>,
    /// Primes (or places) whose presence forces irrationality.
    pub irrationality_witnesses: Vec<String>,
    pub detector: Option<RecurrenceResult>,
}

impl Classification {
    pub fn with_detector(mut self, prefix: &SeriesPrefix) -> Result<Self> {
        self.detector = Some(min_recurrence(prefix, DETECTOR_MAX_ORDER)?);
        Ok(self)
    }

    /// Whether the detector agrees with the verdict: a recurrence of
    /// order at most 2 (3 for quadratic systems) when rational, none
    /// of order at most 12 when irrational.
    pub fn detector_agrees(&self, rational_order: usize) -> Option<bool> {
        self.detector.as_ref().map(|d| match self.verdict {
            Verdict::Rational => d.found && d.order <= rational_order,
            Verdict::Irrational => !d.found,
        })
    }
}

impl Serialize for Classification {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let strs = |p: &[BigInt]| p.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        let mut st = s.serialize_struct("Classification", 9)?;
        st.serialize_field("schema_version", &SCHEMA_VERSION)?;
        st.serialize_field("system", &self.system)?;
        st.serialize_field("verdict", &self.verdict)?;
        st.serialize_field("witness_poly_num", &self.zeta.as_ref().map(|z| strs(&z.num)))?;
        st.serialize_field("witness_poly_den", &self.zeta.as_ref().map(|z| strs(&z.den)))?;
        st.serialize_field("zeta", &self.zeta.as_ref().map(|z| z.to_string()))?;
        st.serialize_field("genfun", &self.genfun.as_ref().map(|z| z.to_string()))?;
        st.serialize_field("irrationality_witnesses", &self.irrationality_witnesses)?;
        st.serialize_field("detector_result", &self.detector)?;
        st.serialize_field("detector_note", DETECTOR_NOTE)?;
        st.end()
    }
}

/// Rational exactly when no prime of `S` (or `T`) has `|r|_p = 1`.
pub fn classify(spec: &SolenoidSpec) -> Classification {
    let active = spec.active_primes();
    let system = spec.describe();
    if !active.is_empty() {
        return Classification {
            system,
            verdict: Verdict::Irrational,
            genfun: None,
            zeta: None,
            irrationality_witnesses: active.iter().map(|p| p.to_string()).collect(),
            detector: None,
        };
    }
    let (genfun, zeta) = match spec.mode() {
        SMode::Finite(_) => {
            // a z/(1 - a z) - b z/(1 - b z) and (1 - b z)/(1 - a z)
            let (a, b) = (spec.a().clone(), spec.b().clone());
            let genfun = RatFunc::new(
                vec![BigInt::zero(), &a - &b],
                vec![BigInt::one(), -(&a + &b), &a * &b],
            );
            let zeta = RatFunc::new(vec![BigInt::one(), -b], vec![BigInt::one(), -a]);
            (genfun, zeta)
        }
        SMode::Cofinite(_) => (RatFunc::new(poly(&[0, 1]), poly(&[1, -1])), RatFunc::new(poly(&[1]), poly(&[1, -1]))),
    };
    Classification {
        system,
        verdict: Verdict::Rational,
        genfun: Some(genfun),
        zeta: Some(zeta),
        irrationality_witnesses: Vec::new(),
        detector: None,
    }
}

/// Rational exactly when `S` is empty, since `xi` is a unit and so
/// `|xi|_v = 1` at every finite place.
pub fn classify_catmap(spec: &CatmapSpec) -> Classification {
    let system = spec.describe();
    if !spec.places.is_empty() {
        return Classification {
            system,
            verdict: Verdict::Irrational,
            genfun: None,
            zeta: None,
            irrationality_witnesses: spec.places.iter().map(|v| v.label()).collect(),
            detector: None,
        };
    }
    let t = spec.trace.clone();
    let n = BigInt::from(spec.norm);
    let den = vec![BigInt::one(), -t.clone(), n.clone()];
    // sum t_k z^k = (t z - 2 N z^2)/(1 - t z + N z^2)
    let traces = RatFunc::new(vec![BigInt::zero(), t, -(&n * BigInt::from(2))], den.clone());
    let genfun = traces
        .sub(&RatFunc::geometric(BigInt::one()))
        .sub(&RatFunc::new(vec![BigInt::zero(), n.clone()], vec![BigInt::one(), -n.clone()]));
    let zeta = RatFunc::new(vec![BigInt::one(), -(BigInt::one() + &n), n], den);
    Classification {
        system,
        verdict: Verdict::Rational,
        genfun: Some(genfun),
        zeta: Some(zeta),
        irrationality_witnesses: Vec::new(),
        detector: None,
    }
}

/// Classification plus detector evidence on the standard prefix.
pub fn classify_with_evidence(spec: &SolenoidSpec) -> Result<Classification> {
    classify(spec).with_detector(&f_prefix(spec, DETECTOR_PREFIX)?)
}

pub fn classify_catmap_with_evidence(spec: &CatmapSpec) -> Result<Classification> {
    classify_catmap(spec).with_detector(&catmap_prefix(spec, DETECTOR_PREFIX)?)
}

/// Number of multipliers `k` checked per rigid index.
pub const RIGID_SAMPLES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RigidIndex {
    pub e: u32,
    pub n: u64,
    /// `prod_{p in S'} |r^n - 1|_p` at `n = n(e)`.
    #[serde(with = "serde_rat")]
    pub factor: BigRat,
    pub f_n: String,
    pub multipliers: Vec<u64>,
    /// Whether the factor at `k n(e)` equals the factor at `n(e)` for
    /// every sampled `k`.
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RigidReport {
    pub q: u64,
    pub indices: Vec<RigidIndex>,
    pub all_stable: bool,
    pub f_values_distinct: bool,
}

/// `n(e) = q^e prod_{p in S'} m_p p^(D_p)` for `e = 1..=e_max`, with the
/// factor checked at `k n(e)` for the first ten `k >= 2` coprime to
/// `n(e)` and to every prime of `S'`.
pub fn rigid_indices(spec: &SolenoidSpec, q: u64, e_max: u32) -> Result<RigidReport> {
    let kernels = spec.kernels();
    if kernels.is_empty() {
        return domain("S' is empty: every factor is 1 and nothing is rigid");
    }
    if !is_prime(q) {
        return domain(format!("q = {q} is not prime"));
    }
    if spec.active_primes().contains(q) {
        return domain(format!("q = {q} lies in S'"));
    }
    if let Some(k) = kernels.iter().find(|k| k.order % q == 0) {
        return domain(format!("q = {q} divides m_{} = {}", k.p, k.order));
    }
    let overflow = || crate::Error::Domain("n(e) overflows u64".into());
    let mut base = 1u64;
    for k in kernels {
        let pd = k.p.checked_pow(k.depth).ok_or_else(overflow)?;
        base = base.checked_mul(k.order).and_then(|x| x.checked_mul(pd)).ok_or_else(overflow)?;
    }
    let primes: u64 = spec.active_primes().iter().product();
    let mut indices = Vec::new();
    for e in 1..=e_max {
        let n = q.checked_pow(e).and_then(|x| x.checked_mul(base)).ok_or_else(overflow)?;
        let factor = spec.kernel_factor(n);
        let guard = n.lcm(&primes);
        let multipliers: Vec<u64> = (2u64..)
            .filter(|k| k.gcd(&guard) == 1)
            .take(RIGID_SAMPLES)
            .collect();
        let stable = multipliers
            .iter()
            .all(|&k| spec.kernel_factor(k * n) == factor);
        indices.push(RigidIndex {
            e,
            n,
            factor,
            f_n: f_value(spec, n)?.to_string(),
            multipliers,
            stable,
        });
    }
    let mut fs: Vec<&String> = indices.iter().map(|i| &i.f_n).collect();
    fs.sort();
    fs.dedup();
    Ok(RigidReport {
        q,
        all_stable: indices.iter().all(|i| i.stable),
        f_values_distinct: fs.len() == indices.len(),
        indices,
    })
}

/// Human-readable one-line summary.
pub fn summary(c: &Classification) -> String {
    match c.verdict {
        Verdict::Rational => format!(
            "{}: rational, zeta = {}",
            c.system,
            c.zeta.as_ref().map(|z| z.to_string()).unwrap_or_default()
        ),
        Verdict::Irrational => format!(
            "{}: irrational (witnesses {})",
            c.system,
            c.irrationality_witnesses.join(",")
        ),
    }
}

pub fn coefficient_strings(r: &RecurrenceResult) -> Vec<String> {
    r.coefficients.iter().map(format_rat).collect()
}
