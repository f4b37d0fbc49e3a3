//! Evidence for natural boundaries: the bound `E(S)` on distinguished
//! directions, radial scans of `F(lambda e^(2 pi i delta))` in fixed-point
//! arithmetic, exact functional-equation checks, and sparsity
//! diagnostics for thin complements.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{
    format_rat, height, int, is_prime, multiplicative_order, ord_p, serde_rat, serde_rat_vec,
    smallest_prime_not_in, BigRat, PrimeSet,
};
use crate::error::{domain, Error, Result};
use crate::fixed;
use crate::kernel::{compute_kernel_rational, eval_abs_direct, PlaceKernel};
use crate::orbit::{f_value, SMode, SolenoidSpec};
use crate::ratfunc::h_s;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_PRECISION_BITS: u32 = 256;
/// Extra fixed-point bits carried beyond the reported precision.
pub const GUARD_BITS: u32 = 64;
/// Refuse scans needing more terms than this.
pub const MAX_TRUNCATION: u64 = 50_000_000;
pub const CONTROL_LABEL: &str = "control direction: no theorem applies here";

/// `E(S)` and the augmented prime set `T = S u {primes dividing some m_p}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EBound {
    pub e: u32,
    pub t_aug: PrimeSet,
}

/// `E(S) = 1 + max{ord_t(m_p) : t in T, p in S}`; requires `|r|_p = 1`
/// on `S`.
pub fn compute_e(r: &BigRat, s: &PrimeSet) -> Result<EBound> {
    let mut orders = Vec::new();
    for p in s.iter() {
        if r.is_zero() || ord_p(r, p)? != 0 {
            return domain(format!("|{}|_{p} != 1", format_rat(r)));
        }
        orders.push(multiplicative_order(r, p)?);
    }
    let mut extra = Vec::new();
    for &m in &orders {
        extra.extend(crate::arith::factor_u64(m).into_iter().map(|(t, _)| t));
    }
    let t_aug = s.union(&PrimeSet::new(extra)?);
    let mut max = 0u32;
    for t in t_aug.iter() {
        for &m in &orders {
            max = max.max(crate::kernel::ord_u64(m, t));
        }
    }
    Ok(EBound { e: 1 + max, t_aug })
}

/// Decision rule for the growth verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerdictRule {
    /// The leading and trailing `1/window_divisor` of the grid are compared.
    pub window_divisor: usize,
    /// Required ratio of the final modulus to the median of the leading
    /// window.
    pub ratio: u32,
}

impl Default for VerdictRule {
    fn default() -> Self {
        VerdictRule {
            window_divisor: 3,
            ratio: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GrowthVerdict {
    Diverging,
    Bounded,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeConfig {
    pub q: u64,
    #[serde(with = "serde_rat")]
    pub delta: BigRat,
    #[serde(with = "serde_rat_vec")]
    pub lambda_grid: Vec<BigRat>,
    /// Derived from the tail bound when absent.
    pub truncation_n: Option<u64>,
    pub precision_bits: u32,
    pub allow_weak_delta: bool,
    pub rule: VerdictRule,
}

/// `points` values `lo + i (hi - lo)/(points - 1)`.
pub fn linear_grid(lo: &BigRat, hi: &BigRat, points: usize) -> Vec<BigRat> {
    if points == 1 {
        return vec![lo.clone()];
    }
    let step = (hi - lo) / int(points as u64 - 1);
    (0..points).map(|i| lo + &step * int(i as u64)).collect()
}

/// 50 points from 9/10 to 999/1000.
pub fn default_grid() -> Vec<BigRat> {
    linear_grid(&BigRat::new(9.into(), 10.into()), &BigRat::new(999.into(), 1000.into()), 50)
}

impl ProbeConfig {
    pub fn new(q: u64, delta: BigRat) -> Self {
        ProbeConfig {
            q,
            delta,
            lambda_grid: default_grid(),
            truncation_n: None,
            precision_bits: DEFAULT_PRECISION_BITS,
            allow_weak_delta: false,
            rule: VerdictRule::default(),
        }
    }

    fn lambda_max(&self) -> Result<&BigRat> {
        self.lambda_grid
            .iter()
            .max()
            .ok_or_else(|| Error::Config("empty lambda grid".into()))
    }
}

/// Smallest `N` with `lambda^(N+1)/(1 - lambda) < 2^(-bits/2)`.
pub fn required_truncation(lambda: &BigRat, bits: u32) -> Result<u64> {
    if !lambda.is_positive() || *lambda >= BigRat::one() {
        return Err(Error::Config(format!("lambda = {} is not in (0, 1)", format_rat(lambda))));
    }
    let w = bits + GUARD_BITS;
    // N + 1 > (bits/2 ln 2 + ln(1/(1 - lambda))) / ln(1/lambda)
    let num = fixed::ln2(w) * BigInt::from(bits / 2) + fixed::ln(&(BigRat::one() - lambda).recip(), w);
    let den = fixed::ln(&lambda.recip(), w);
    let (quot, _) = num.div_rem(&den);
    let n = quot
        .to_u64()
        .ok_or_else(|| Error::Config("tail bound unsatisfiable".into()))?;
    if n > MAX_TRUNCATION {
        return Err(Error::Config(format!(
            "tail bound needs N = {n} > {MAX_TRUNCATION} terms at lambda = {}",
            format_rat(lambda)
        )));
    }
    // the estimate is off by at most one either way; settle it exactly
    // lambda = a/b: a^(n+1) b 2^(bits/2) < b^(n+1) (b - a)
    let (a, b) = (lambda.numer(), lambda.denom());
    let holds = |n: u64| {
        let e = n as u32 + 1;
        (a.pow(e) * b) << (bits / 2) < b.pow(e) * (b - a)
    };
    let mut n = n;
    while !holds(n) {
        n += 1;
    }
    while n > 0 && holds(n - 1) {
        n -= 1;
    }
    Ok(n)
}

/// Coefficients `1/d_n` of the scanned series.
#[derive(Debug, Clone)]
pub enum ProbeSeries {
    /// `prod_v |r^n - 1|_v` over the kernels.
    Kernels(Vec<PlaceKernel>),
    /// All coefficients 1: `z/(1 - z)`.
    Ones,
}

impl ProbeSeries {
    /// `d_n` for `n = 1..=len`; `None` stands for 1.
    fn denominators(&self, len: u64) -> Vec<Option<BigInt>> {
        match self {
            ProbeSeries::Ones => vec![None; len as usize],
            ProbeSeries::Kernels(ks) => (1..=len)
                .into_par_iter()
                .map(|n| {
                    let mut d = BigInt::one();
                    for k in ks {
                        let w = k.weight(n);
                        if w > 0 {
                            d *= BigInt::from(k.p).pow(w as u32);
                        }
                    }
                    if d.is_one() {
                        None
                    } else {
                        Some(d)
                    }
                })
                .collect(),
        }
    }
}

/// `(cos, sin)` of `2 pi k/den` for `k = 0..den`.
fn unit_roots(den: u64, bits: u32) -> Vec<(BigInt, BigInt)> {
    (0..den)
        .into_par_iter()
        .map(|k| fixed::cos_sin_turn(&BigRat::new(k.into(), den.into()), bits))
        .collect()
}

/// Fixed-point value of a partial sum at one grid point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointValue {
    pub lambda: BigRat,
    pub re: BigInt,
    pub im: BigInt,
    pub modulus: BigInt,
}

struct Direction {
    num: u64,
    den: u64,
    roots: Vec<(BigInt, BigInt)>,
}

impl Direction {
    fn new(delta: &BigRat, bits: u32) -> Result<Self> {
        let frac = delta - delta.floor();
        let den = frac
            .denom()
            .to_u64()
            .filter(|&d| d <= 1 << 24)
            .ok_or_else(|| Error::Config(format!("denominator of delta = {} too large", format_rat(delta))))?;
        let num = frac.numer().to_u64().expect("fraction in [0, 1)");
        Ok(Direction {
            num,
            den,
            roots: unit_roots(den, bits),
        })
    }
}

/// `sum_{n=1..N} lambda^n e^(2 pi i n delta) / d_n` at scale `bits`,
/// accumulated exactly at scale `2 bits`.
fn partial_sum(dens: &[Option<BigInt>], lambda: &BigRat, dir: &Direction, bits: u32) -> PointValue {
    let lnum = lambda.numer();
    let lden = lambda.denom();
    let mut power = fixed::one(bits);
    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    for (i, d) in dens.iter().enumerate() {
        power = (&power * lnum).div_floor(lden);
        if power.is_zero() {
            break;
        }
        let n = i as u64 + 1;
        let term = match d {
            None => power.clone(),
            Some(d) => power.div_floor(d),
        };
        let k = ((dir.num as u128 * n as u128) % dir.den as u128) as usize;
        let (c, s) = &dir.roots[k];
        re += &term * c;
        im += &term * s;
    }
    let re = re >> bits;
    let im = im >> bits;
    // re^2 + im^2 sits at scale 2 bits, so its integer root is at scale bits
    let modulus = (&re * &re + &im * &im).sqrt();
    PointValue {
        lambda: lambda.clone(),
        re,
        im,
        modulus,
    }
}

/// Scans every grid point in parallel, preserving grid order.
pub fn scan(
    series: &ProbeSeries,
    delta: &BigRat,
    grid: &[BigRat],
    truncation: u64,
    precision_bits: u32,
) -> Result<Vec<PointValue>> {
    let bits = precision_bits + GUARD_BITS;
    let dir = Direction::new(delta, bits)?;
    let dens = series.denominators(truncation);
    Ok(grid
        .par_iter()
        .map(|l| partial_sum(&dens, l, &dir, bits))
        .collect())
}

fn median(xs: &[BigInt]) -> BigInt {
    let mut v = xs.to_vec();
    v.sort();
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2].clone()
    } else {
        (&v[k / 2 - 1] + &v[k / 2]) >> 1
    }
}

/// Diverging: the trailing window is strictly increasing and the last
/// modulus exceeds `ratio` times the median of the leading window.
/// Bounded: neither holds. Inconclusive otherwise.
pub fn growth_verdict(moduli: &[BigInt], rule: &VerdictRule) -> GrowthVerdict {
    let w = moduli.len() / rule.window_divisor.max(1);
    if w < 2 {
        return GrowthVerdict::Inconclusive;
    }
    let tail = &moduli[moduli.len() - w..];
    let increasing = tail.windows(2).all(|p| p[0] < p[1]);
    let med = median(&moduli[..w]);
    let last = moduli.last().expect("nonempty");
    let large = *last > med * BigInt::from(rule.ratio);
    match (increasing, large) {
        (true, true) => GrowthVerdict::Diverging,
        (false, false) => GrowthVerdict::Bounded,
        _ => GrowthVerdict::Inconclusive,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeRecord {
    pub lambda: String,
    pub re: String,
    pub im: String,
    pub modulus: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectionReport {
    #[serde(with = "serde_rat")]
    pub delta: BigRat,
    pub label: String,
    pub records: Vec<ProbeRecord>,
    pub verdict: GrowthVerdict,
    /// Final modulus over the median of the leading window.
    pub growth_ratio: String,
    pub final_window_increasing: bool,
    #[serde(skip)]
    pub values: Vec<PointValue>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub schema_version: u32,
    pub system: String,
    pub config: ProbeConfig,
    pub series_primes: PrimeSet,
    pub e_bound: EBound,
    /// `ord_q` of the denominator of delta.
    pub delta_exponent: u32,
    pub weak_delta: bool,
    /// The order of `e^(2 pi i delta)` divides `prod_{t in T} t^E`.
    pub pole_collision: bool,
    pub truncation_n: u64,
    /// `log2` of the tail bound.
    pub tail_bound_log2: i64,
    pub target: DirectionReport,
    pub control: DirectionReport,
}

fn records(values: &[PointValue], precision_bits: u32) -> Vec<ProbeRecord> {
    let bits = precision_bits + GUARD_BITS;
    let digits = fixed::decimal_digits(precision_bits);
    values
        .iter()
        .map(|v| ProbeRecord {
            lambda: format_rat(&v.lambda),
            re: fixed::to_decimal(&v.re, bits, digits),
            im: fixed::to_decimal(&v.im, bits, digits),
            modulus: fixed::to_decimal(&v.modulus, bits, digits),
        })
        .collect()
}

fn direction_report(
    delta: BigRat,
    label: &str,
    values: Vec<PointValue>,
    cfg: &ProbeConfig,
) -> DirectionReport {
    let moduli: Vec<BigInt> = values.iter().map(|v| v.modulus.clone()).collect();
    let verdict = growth_verdict(&moduli, &cfg.rule);
    let w = (moduli.len() / cfg.rule.window_divisor.max(1)).max(1);
    let med = median(&moduli[..w.min(moduli.len())]);
    let bits = cfg.precision_bits + GUARD_BITS;
    let ratio = if med.is_zero() {
        "inf".to_string()
    } else {
        fixed::to_decimal(&((moduli.last().cloned().unwrap_or_default() << bits) / &med), bits, 6)
    };
    let tail = &moduli[moduli.len() - w.min(moduli.len())..];
    DirectionReport {
        delta,
        label: label.to_string(),
        records: records(&values, cfg.precision_bits),
        verdict,
        growth_ratio: ratio,
        final_window_increasing: tail.windows(2).all(|p| p[0] < p[1]),
        values,
    }
}

/// Validated view of `delta = c/q^e`.
fn delta_exponent(cfg: &ProbeConfig) -> Result<u32> {
    if !is_prime(cfg.q) {
        return Err(Error::Config(format!("q = {} is not prime", cfg.q)));
    }
    let den = cfg.delta.denom();
    let e = crate::arith::ord_p_int(den, cfg.q) as u32;
    if *den != BigInt::from(cfg.q).pow(e) {
        return Err(Error::Config(format!(
            "delta = {} is not of the form c/{}^e",
            format_rat(&cfg.delta),
            cfg.q
        )));
    }
    Ok(e)
}

/// Radial scan of `F(z) = sum |r^n - 1|_(S') z^n` along `delta`, and of
/// the control direction `1/q'` with `q'` the least prime outside `T`.
pub fn radial_probe(spec: &SolenoidSpec, cfg: &ProbeConfig) -> Result<ProbeReport> {
    if !matches!(spec.mode(), SMode::Finite(_)) {
        return domain("radial probes take a finite S");
    }
    let s_prime = spec.active_primes().clone();
    let eb = compute_e(&spec.ratio(), &s_prime)?;
    let series = ProbeSeries::Kernels(spec.kernels().to_vec());
    probe_series(&series, &spec.describe(), s_prime, eb, cfg)
}

/// Shared driver; `eb` supplies `E` and `T` for the delta checks.
pub fn probe_series(
    series: &ProbeSeries,
    system: &str,
    series_primes: PrimeSet,
    eb: EBound,
    cfg: &ProbeConfig,
) -> Result<ProbeReport> {
    let e = delta_exponent(cfg)?;
    let weak = e <= eb.e;
    if weak && !cfg.allow_weak_delta {
        return Err(Error::Config(format!(
            "|delta|_{q} = {q}^{e} does not exceed {q}^E = {q}^{}; pass --allow-weak-delta to probe anyway",
            eb.e,
            q = cfg.q
        )));
    }
    if cfg.precision_bits < 16 {
        return Err(Error::Config("precision below 16 bits".into()));
    }
    for l in &cfg.lambda_grid {
        if !l.is_positive() || *l >= BigRat::one() {
            return Err(Error::Config(format!("lambda = {} is not in (0, 1)", format_rat(l))));
        }
    }
    let needed = required_truncation(cfg.lambda_max()?, cfg.precision_bits)?;
    let truncation = match cfg.truncation_n {
        Some(n) if n < needed => {
            return Err(Error::Config(format!(
                "truncation N = {n} violates the tail bound (needs {needed})"
            )))
        }
        Some(n) => n,
        None => needed,
    };
    let order = {
        let frac = &cfg.delta - cfg.delta.floor();
        frac.denom().clone()
    };
    let modulus: BigInt = eb
        .t_aug
        .iter()
        .map(|t| BigInt::from(t).pow(eb.e))
        .product();
    let pole_collision = modulus.is_multiple_of(&order);

    let target = scan(series, &cfg.delta, &cfg.lambda_grid, truncation, cfg.precision_bits)?;
    let q_ctrl = smallest_prime_not_in(eb.t_aug.as_slice());
    let ctrl_delta = BigRat::new(BigInt::one(), BigInt::from(q_ctrl));
    let control = scan(series, &ctrl_delta, &cfg.lambda_grid, truncation, cfg.precision_bits)?;
    Ok(ProbeReport {
        schema_version: SCHEMA_VERSION,
        system: system.to_string(),
        config: cfg.clone(),
        series_primes,
        delta_exponent: e,
        weak_delta: weak,
        pole_collision,
        truncation_n: truncation,
        tail_bound_log2: -((cfg.precision_bits / 2) as i64),
        target: direction_report(cfg.delta.clone(), "target direction", target, cfg),
        control: direction_report(ctrl_delta, CONTROL_LABEL, control, cfg),
        e_bound: eb,
    })
}

impl ProbeReport {
    /// CSV with a `# config=` line; the control block follows the target
    /// block after a comment line.
    pub fn to_csv(&self) -> String {
        let cfg = serde_json::to_string(&self.config).unwrap_or_default();
        format!("# config={cfg}\n{}", self.csv_body())
    }

    /// The CSV without the config line.
    pub fn csv_body(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# system={} truncation_n={} verdict={:?}",
            self.system, self.truncation_n, self.target.verdict
        );
        let _ = writeln!(out, "lambda,re,im,modulus");
        for r in &self.target.records {
            let _ = writeln!(out, "{},{},{},{}", r.lambda, r.re, r.im, r.modulus);
        }
        let _ = writeln!(
            out,
            "# control delta={} ({}) verdict={:?}",
            format_rat(&self.control.delta),
            self.control.label,
            self.control.verdict
        );
        for r in &self.control.records {
            let _ = writeln!(out, "{},{},{},{}", r.lambda, r.re, r.im, r.modulus);
        }
        out
    }
}

/// Largest change of any modulus when the truncation is doubled, against
/// the tail bound `2^(-bits/2)`; both at the scan's fixed-point scale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TailCheck {
    pub truncation_n: u64,
    pub max_change: String,
    pub bound: String,
    pub within_bound: bool,
}

pub fn tail_check(series: &ProbeSeries, cfg: &ProbeConfig) -> Result<TailCheck> {
    let n = match cfg.truncation_n {
        Some(n) => n,
        None => required_truncation(cfg.lambda_max()?, cfg.precision_bits)?,
    };
    let a = scan(series, &cfg.delta, &cfg.lambda_grid, n, cfg.precision_bits)?;
    let b = scan(series, &cfg.delta, &cfg.lambda_grid, 2 * n, cfg.precision_bits)?;
    let bits = cfg.precision_bits + GUARD_BITS;
    let max = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (&x.modulus - &y.modulus).abs())
        .max()
        .unwrap_or_default();
    let bound = fixed::one(bits - cfg.precision_bits / 2);
    let digits = fixed::decimal_digits(cfg.precision_bits);
    Ok(TailCheck {
        truncation_n: n,
        within_bound: max < bound,
        max_change: fixed::to_decimal(&max, bits, digits),
        bound: fixed::to_decimal(&bound, bits, digits),
    })
}

/// `G_p(z) = sum |n|_p z^n` satisfies `G_p(z) = H_p(z) + G_p(z^p)/p`
/// through the given degree.
pub fn funceq_check_g(p: u64, degree: u64) -> Result<bool> {
    if !is_prime(p) {
        return domain(format!("{p} is not prime"));
    }
    let h = h_s(&PrimeSet::new([p])?);
    let g = |n: u64| crate::arith::abs_p(&int(n), p);
    for n in 1..=degree {
        let mut rhs = int(h.coeff(n));
        if n % p == 0 {
            rhs += g(n / p)? / int(p);
        }
        if g(n)? != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Example26Report {
    pub degree: u64,
    /// `sum |2^n - 1|_3 z^n = G_3(z^2)/3 + H_2(z)`.
    pub halving_identity: bool,
    /// The `r = 2, S = {2,3}` series equals `F(2z) - F(z)`.
    pub scaling_identity: bool,
}

impl Example26Report {
    pub fn passed(&self) -> bool {
        self.halving_identity && self.scaling_identity
    }
}

pub fn example26_decomposition(degree: u64) -> Result<Example26Report> {
    if degree < 2 {
        return domain("degree must be at least 2");
    }
    let two = int(2);
    let h2 = h_s(&PrimeSet::new([2])?);
    let spec = SolenoidSpec::finite(two.clone(), PrimeSet::new([2, 3])?)?;
    let mut halving = true;
    let mut scaling = true;
    for n in 1..=degree {
        let c = eval_abs_direct(&two, 3, n)?;
        let mut rhs = int(h2.coeff(n));
        if n % 2 == 0 {
            rhs += crate::arith::abs_p(&int(n / 2), 3)? / int(3);
        }
        halving &= c == rhs;
        let scaled = &c * (BigRat::from_integer(BigInt::from(2).pow(n as u32)) - int(1));
        scaling &= BigRat::from_integer(f_value(&spec, n)?) == scaled;
    }
    Ok(Example26Report {
        degree,
        halving_identity: halving,
        scaling_identity: scaling,
    })
}

/// Per-prime part of the sparsity diagnostic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeBound {
    pub p: u64,
    /// Least `n` with `|r^n - 1|_p < 1/2`.
    pub ell: u64,
    /// `|r^n - 1|_p^(-1) < n A^ell` for every `n <= N`.
    pub bound_holds: bool,
    pub bound_first_failure: Option<u64>,
    /// First `n` where the inequality as printed,
    /// `|r^n - 1|_p^(-1) < ((log n + ell log A)/n)^n`, fails.
    pub literal_first_failure: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SparsityReport {
    pub schema_version: u32,
    #[serde(with = "serde_rat")]
    pub r: BigRat,
    pub t: PrimeSet,
    #[serde(with = "serde_rat")]
    pub s: BigRat,
    pub n_max: u64,
    pub height: String,
    pub primes: Vec<PrimeBound>,
    /// `{n <= N : f(n) > s^n}` with `f(n) = prod_{p in T} |r^n - 1|_p^(-1)`.
    pub exceptional: Vec<u64>,
    /// `n_j / j` along the exceptional set.
    #[serde(with = "serde_rat_vec")]
    pub ratios: Vec<BigRat>,
}

pub const MAX_SPARSITY_N: u64 = 20_000;

fn ell(k: &PlaceKernel) -> u64 {
    // p^w > 2
    let need = if k.p == 2 { 2 } else { 1 };
    (1..)
        .find(|&n| k.weight(n) >= need)
        .expect("r^n - 1 eventually divisible by p^2")
}

pub fn sparsity_diagnostic(r: &BigRat, t: &PrimeSet, s: &BigRat, n_max: u64) -> Result<SparsityReport> {
    if *s <= BigRat::one() {
        return domain("s must exceed 1");
    }
    if n_max == 0 || n_max > MAX_SPARSITY_N {
        return domain(format!("N must lie in 1..={MAX_SPARSITY_N}"));
    }
    let kernels = t
        .iter()
        .map(|p| compute_kernel_rational(r, p))
        .collect::<Result<Vec<_>>>()?;
    let a = height(r);
    let a_f64 = a.to_f64().unwrap_or(f64::INFINITY);
    let mut primes = Vec::new();
    for k in &kernels {
        let l = ell(k);
        let a_pow = a.pow(l as u32);
        let mut first = None;
        let mut literal = None;
        for n in 1..=n_max {
            let w = k.weight(n);
            let lhs = BigInt::from(k.p).pow(w as u32);
            if first.is_none() && lhs >= &a_pow * BigInt::from(n) {
                first = Some(n);
            }
            if literal.is_none() {
                let base = ((n as f64).ln() + l as f64 * a_f64.ln()) / n as f64;
                let rhs_log = n as f64 * base.ln();
                if w as f64 * (k.p as f64).ln() >= rhs_log {
                    literal = Some(n);
                }
            }
        }
        primes.push(PrimeBound {
            p: k.p,
            ell: l,
            bound_holds: first.is_none(),
            bound_first_failure: first,
            literal_first_failure: literal,
        });
    }
    let (sn, sd) = (s.numer().clone(), s.denom().clone());
    let mut num_pow = BigInt::one();
    let mut den_pow = BigInt::one();
    let mut exceptional = Vec::new();
    for n in 1..=n_max {
        num_pow *= &sn;
        den_pow *= &sd;
        let mut f = BigInt::one();
        for k in &kernels {
            f *= BigInt::from(k.p).pow(k.weight(n) as u32);
        }
        if f * &den_pow > num_pow {
            exceptional.push(n);
        }
    }
    let ratios = exceptional
        .iter()
        .enumerate()
        .map(|(j, &n)| BigRat::new(BigInt::from(n), BigInt::from(j as u64 + 1)))
        .collect();
    Ok(SparsityReport {
        schema_version: SCHEMA_VERSION,
        r: r.clone(),
        t: t.clone(),
        s: s.clone(),
        n_max,
        height: a.to_string(),
        primes,
        exceptional,
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn set(v: &[u64]) -> PrimeSet {
        PrimeSet::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn e_values() {
        let eb = compute_e(&int(2), &set(&[3])).unwrap();
        assert_eq!((eb.e, eb.t_aug), (2, set(&[2, 3])));
        let eb = compute_e(&int(2), &set(&[7])).unwrap();
        assert_eq!((eb.e, eb.t_aug), (2, set(&[3, 7])));
        let eb = compute_e(&int(2), &set(&[5])).unwrap();
        assert_eq!((eb.e, eb.t_aug), (3, set(&[2, 5])));
        assert!(compute_e(&int(2), &set(&[2])).is_err());
    }

    #[test]
    fn truncation_from_tail_bound() {
        let n = required_truncation(&rat(999, 1000), 256).unwrap();
        // lambda^(N+1)/(1-lambda) < 2^-128 and not for N - 1
        let x = (128.0 * 2f64.ln() + 1000f64.ln()) / (1000.0f64 / 999.0).ln();
        assert_eq!(n, x.floor() as u64);
        assert_eq!(required_truncation(&rat(1, 2), 64).unwrap(), 33);
        assert!(required_truncation(&int(1), 256).is_err());
        assert!(required_truncation(&rat(999_999_999, 1_000_000_000), 256).is_err());
    }

    #[test]
    fn verdict_rule() {
        let v = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let rule = VerdictRule::default();
        assert_eq!(growth_verdict(&v(&[1, 1, 1, 2, 5, 30, 40, 60, 100]), &rule), GrowthVerdict::Diverging);
        assert_eq!(growth_verdict(&v(&[1, 1, 1, 2, 5, 3, 4, 6, 9]), &rule), GrowthVerdict::Inconclusive);
        assert_eq!(growth_verdict(&v(&[3, 2, 3, 2, 3, 2, 3, 2, 3]), &rule), GrowthVerdict::Bounded);
        assert_eq!(growth_verdict(&v(&[1, 2]), &rule), GrowthVerdict::Inconclusive);
    }

    #[test]
    fn geometric_series_closed_form() {
        // sum_{n>=1} w^n = w/(1 - w) at w = lambda i
        let lambda = rat(1, 2);
        let vals = scan(&ProbeSeries::Ones, &rat(1, 4), &[lambda], 200, 64).unwrap();
        let bits = 64 + GUARD_BITS;
        // w = i/2: w/(1-w) = (i/2)/(1 - i/2) = (-1/5) + (2/5) i, modulus 1/sqrt 5
        assert_eq!(fixed::to_decimal(&vals[0].re, bits, 15), "-0.200000000000000");
        assert_eq!(fixed::to_decimal(&vals[0].im, bits, 15), "0.400000000000000");
        assert_eq!(fixed::to_decimal(&vals[0].modulus, bits, 15), "0.447213595499958");
    }

    #[test]
    fn probe_validation() {
        let spec = SolenoidSpec::finite(int(2), set(&[3])).unwrap();
        let mut cfg = ProbeConfig::new(3, rat(1, 3));
        assert!(matches!(radial_probe(&spec, &cfg), Err(Error::Config(_))));
        cfg.delta = rat(1, 6);
        assert!(matches!(radial_probe(&spec, &cfg), Err(Error::Config(_))));
        cfg.delta = rat(1, 27);
        cfg.truncation_n = Some(10);
        assert!(matches!(radial_probe(&spec, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn small_probe_is_deterministic() {
        let spec = SolenoidSpec::finite(int(2), set(&[3])).unwrap();
        let mut cfg = ProbeConfig::new(3, rat(1, 3));
        cfg.allow_weak_delta = true;
        cfg.precision_bits = 64;
        cfg.lambda_grid = linear_grid(&rat(1, 2), &rat(9, 10), 6);
        let a = radial_probe(&spec, &cfg).unwrap();
        let b = radial_probe(&spec, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.weak_delta);
        assert!(a.pole_collision);
        assert_eq!(a.control.delta, rat(1, 5));
        assert!(a.to_csv().starts_with("# config={"));
    }

    #[test]
    fn functional_equations() {
        assert!(funceq_check_g(3, 243).unwrap());
        assert!(funceq_check_g(2, 64).unwrap());
        assert!(funceq_check_g(5, 3).unwrap());
        let rep = example26_decomposition(60).unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn sparsity_examples() {
        let rep = sparsity_diagnostic(&int(2), &set(&[3]), &rat(3, 2), 200).unwrap();
        assert_eq!(rep.primes[0].ell, 2);
        assert!(rep.primes[0].bound_holds);
        let rep = sparsity_diagnostic(&int(3), &set(&[2]), &rat(3, 2), 200).unwrap();
        assert_eq!(rep.primes[0].ell, 2);
        assert!(rep.primes[0].bound_holds);
        assert!(rep.exceptional.contains(&2));
    }
}
