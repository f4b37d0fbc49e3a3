//! Named self-check suites run by `solzeta verify`.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{int, is_prime, ord_p, product_formula_check, rat, BigRat, PrimeSet};
use crate::error::{Error, Result};
use crate::kernel::{compute_kernel_rational, eval_abs_direct, eval_abs_fast};
use crate::orbit::{
    catmap_prefix, derivative_trick_transform, f_prefix, zeta_coeffs, zeta_genfun_identity_check,
    CatmapSpec, SeriesPrefix, SolenoidSpec,
};
use crate::probe::{
    compute_e, example26_decomposition, funceq_check_g, radial_probe, sparsity_diagnostic, tail_check,
    GrowthVerdict, ProbeConfig, ProbeSeries,
};
use crate::recurrence::{classify, classify_catmap, classify_with_evidence, rigid_indices};

pub const SUITES: &[&str] = &[
    "product-formula",
    "kernels",
    "remarks",
    "dichotomy",
    "closed-forms",
    "identity",
    "funceq",
    "integrality",
    "e-bound",
    "sparsity",
    "rigid",
    "probe",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub checks: u64,
    pub detail: String,
}

fn result(name: &str, passed: bool, checks: u64, detail: impl Into<String>) -> SuiteResult {
    SuiteResult {
        name: name.to_string(),
        passed,
        checks,
        detail: detail.into(),
    }
}

fn set(v: &[u64]) -> PrimeSet {
    PrimeSet::new(v.iter().copied()).expect("primes")
}

/// Runs one suite; `all` is expanded by [`run_suites`].
pub fn run_suite(name: &str, precision_bits: u32) -> Result<SuiteResult> {
    match name {
        "product-formula" => product_formula(),
        "kernels" => kernels(),
        "remarks" => remarks(),
        "dichotomy" => dichotomy(),
        "closed-forms" => closed_forms(),
        "identity" => identity(),
        "funceq" => funceq(),
        "integrality" => integrality(),
        "e-bound" => e_bound(),
        "sparsity" => sparsity(),
        "rigid" => rigid(),
        "probe" => probe(precision_bits),
        _ => Err(Error::Config(format!(
            "unknown suite {name:?}; expected one of {} or all",
            SUITES.join(", ")
        ))),
    }
}

pub fn run_suites(name: &str, precision_bits: u32) -> Result<Vec<SuiteResult>> {
    if name == "all" {
        SUITES.iter().map(|s| run_suite(s, precision_bits)).collect()
    } else {
        Ok(vec![run_suite(name, precision_bits)?])
    }
}

fn product_formula() -> Result<SuiteResult> {
    let mut checks = 0;
    let mut ok = true;
    for a in -60i64..=60 {
        for b in 1i64..=60 {
            if a == 0 {
                continue;
            }
            ok &= product_formula_check(&rat(a, b))?;
            checks += 1;
        }
    }
    Ok(result("product-formula", ok, checks, "|x|_inf prod_p |x|_p = 1 on a/b, |a|, b <= 60"))
}

pub fn kernel_grid() -> Vec<(BigRat, u64)> {
    let mut out = Vec::new();
    for r in [int(2), int(3), rat(3, 2), rat(5, 2)] {
        for p in (2..=50).filter(|&p| is_prime(p)) {
            if ord_p(&r, p).ok() == Some(0) {
                out.push((r.clone(), p));
            }
        }
    }
    out
}

fn kernels() -> Result<SuiteResult> {
    const N: u64 = 1500;
    let grid = kernel_grid();
    let failures: Vec<String> = grid
        .par_iter()
        .map(|(r, p)| -> Result<Option<String>> {
            let k = compute_kernel_rational(r, *p)?;
            for n in 1..=N {
                if eval_abs_fast(&k, n) != eval_abs_direct(r, *p, n)? {
                    return Ok(Some(format!("r={r}, p={p}, n={n}")));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let checks = grid.len() as u64 * N;
    Ok(result(
        "kernels",
        failures.is_empty(),
        checks,
        if failures.is_empty() {
            format!("{} (r, p) pairs, n <= {N}", grid.len())
        } else {
            format!("mismatch at {}", failures.join("; "))
        },
    ))
}

fn remarks() -> Result<SuiteResult> {
    let mut bad = Vec::new();
    let grid = kernel_grid();
    for (r, p) in &grid {
        let k = compute_kernel_rational(r, *p)?;
        if (*p > 2 && k.depth != 0) || (*p == 2 && k.depth > 1) {
            bad.push(format!("D_{p}(r={r}) = {}", k.depth));
        }
    }
    let k = compute_kernel_rational(&int(3), 2)?;
    if k.depth != 1 || k.constant != rat(1, 4) {
        bad.push(format!("r=3, p=2: D={}, C={}", k.depth, k.constant));
    }
    Ok(result(
        "remarks",
        bad.is_empty(),
        grid.len() as u64 + 1,
        if bad.is_empty() { "D_p = 0 for p > 2, D_2 <= 1, (3, 2) gives D=1, C=1/4".into() } else { bad.join("; ") },
    ))
}

fn dichotomy() -> Result<SuiteResult> {
    let mut checks = 0;
    let mut bad = Vec::new();
    for r in [int(2), int(3), rat(3, 2), rat(5, 3)] {
        for s in set(&[2, 3, 5, 7]).subsets() {
            let spec = SolenoidSpec::finite(r.clone(), s.clone())?;
            let c = classify_with_evidence(&spec)?;
            checks += 1;
            if c.detector_agrees(2) != Some(true) {
                bad.push(format!("r={r}, S={s}"));
            }
        }
    }
    Ok(result(
        "dichotomy",
        bad.is_empty(),
        checks,
        if bad.is_empty() { "verdict and detector agree".into() } else { format!("disagree at {}", bad.join("; ")) },
    ))
}

fn closed_forms() -> Result<SuiteResult> {
    const N: u64 = 100;
    let spec = SolenoidSpec::finite(int(2), set(&[2]))?;
    let zeta = classify(&spec).zeta.ok_or_else(|| Error::Invariant("no closed form".into()))?;
    let a = zeta.expand(N as usize + 1) == zeta_coeffs(&f_prefix(&spec, N)?)?.coeffs;
    let cat = CatmapSpec::cat_map();
    let zeta = classify_catmap(&cat).zeta.ok_or_else(|| Error::Invariant("no closed form".into()))?;
    let fp = catmap_prefix(&cat, N)?;
    let head = fp.coeffs[..4] == [int(1), int(5), int(16), int(45)];
    let b = zeta.expand(N as usize + 1) == zeta_coeffs(&fp)?.coeffs;
    Ok(result(
        "closed-forms",
        a && b && head,
        2,
        format!("r=2 S={{2}}: {a}; cat map: {b}"),
    ))
}

/// Specs used by the identity suite.
pub fn identity_specs() -> Result<Vec<(String, SeriesPrefix)>> {
    const N: u64 = 200;
    let mut out = Vec::new();
    for (r, s) in [(int(2), set(&[2])), (int(2), set(&[3])), (rat(3, 2), set(&[5, 7]))] {
        let spec = SolenoidSpec::finite(r, s)?;
        out.push((spec.describe(), f_prefix(&spec, N)?));
    }
    let spec = SolenoidSpec::cofinite(int(2), set(&[3]))?;
    out.push((spec.describe(), f_prefix(&spec, N)?));
    let cat = CatmapSpec::with_labels(3, 1, &["2"])?;
    out.push((cat.describe(), catmap_prefix(&cat, N)?));
    Ok(out)
}

fn identity() -> Result<SuiteResult> {
    let specs = identity_specs()?;
    let mut bad = Vec::new();
    for (name, fp) in &specs {
        if !zeta_genfun_identity_check(fp, &zeta_coeffs(fp)?)? {
            bad.push(name.clone());
        }
    }
    Ok(result(
        "identity",
        bad.is_empty(),
        specs.len() as u64,
        if bad.is_empty() { "F = z zeta'/zeta to N = 200".into() } else { bad.join("; ") },
    ))
}

fn funceq() -> Result<SuiteResult> {
    let mut ok = true;
    for p in [2u64, 3, 5, 7] {
        ok &= funceq_check_g(p, p.pow(6))?;
    }
    let ex = example26_decomposition(500)?;
    Ok(result(
        "funceq",
        ok && ex.passed(),
        5,
        format!("G_p for p <= 7 to p^6: {ok}; r=2 decomposition to 500: {}", ex.passed()),
    ))
}

fn integrality() -> Result<SuiteResult> {
    const N: u64 = 10_000;
    let mut detail = Vec::new();
    let mut ok = true;
    for s in [set(&[7]), set(&[3, 7])] {
        let spec = SolenoidSpec::finite(int(2), s.clone())?;
        let r = derivative_trick_transform(&f_prefix(&spec, N)?, spec.kernels());
        ok &= r.is_ok();
        detail.push(format!("r=2 S={s}: {}", r.is_ok()));
    }
    let cat = CatmapSpec::with_labels(3, 1, &["2"])?;
    let r = derivative_trick_transform(&catmap_prefix(&cat, N)?, cat.kernels());
    ok &= r.is_ok();
    detail.push(format!("cat map at 2: {}", r.is_ok()));
    Ok(result("integrality", ok, 3 * N, detail.join("; ")))
}

fn e_bound() -> Result<SuiteResult> {
    let got: Vec<u32> = [3u64, 7, 5]
        .iter()
        .map(|&p| compute_e(&int(2), &set(&[p])).map(|e| e.e))
        .collect::<Result<_>>()?;
    Ok(result("e-bound", got == [2, 2, 3], 3, format!("E for r=2, S={{3}},{{7}},{{5}}: {got:?}")))
}

fn sparsity() -> Result<SuiteResult> {
    let a = sparsity_diagnostic(&int(2), &set(&[3]), &rat(3, 2), 1000)?;
    let b = sparsity_diagnostic(&int(3), &set(&[2]), &rat(3, 2), 1000)?;
    let ok = a.primes[0].bound_holds && b.primes[0].bound_holds && a.primes[0].ell == 2 && b.primes[0].ell == 2;
    Ok(result(
        "sparsity",
        ok,
        2000,
        format!(
            "ell_3(2) = {}, ell_2(3) = {}, bound holds: {}, {}",
            a.primes[0].ell, b.primes[0].ell, a.primes[0].bound_holds, b.primes[0].bound_holds
        ),
    ))
}

fn rigid() -> Result<SuiteResult> {
    let spec = SolenoidSpec::finite(int(2), set(&[3]))?;
    let rep = rigid_indices(&spec, 5, 3)?;
    let n: Vec<u64> = rep.indices.iter().map(|i| i.n).collect();
    Ok(result("rigid", rep.all_stable, 30, format!("n(e) = {n:?}, stable: {}", rep.all_stable)))
}

/// Default radial probe at `delta = 1/27` and its tail check.
pub fn probe_config(precision_bits: u32) -> ProbeConfig {
    let mut cfg = ProbeConfig::new(3, rat(1, 27));
    cfg.precision_bits = precision_bits;
    cfg
}

fn probe(precision_bits: u32) -> Result<SuiteResult> {
    let spec = SolenoidSpec::finite(int(2), set(&[3]))?;
    let cfg = probe_config(precision_bits);
    let rep = radial_probe(&spec, &cfg)?;
    let tail = tail_check(&ProbeSeries::Kernels(spec.kernels().to_vec()), &cfg)?;
    let ok = rep.target.verdict == GrowthVerdict::Diverging && tail.within_bound;
    Ok(result(
        "probe",
        ok,
        2 * cfg.lambda_grid.len() as u64,
        format!(
            "verdict {:?} (final/median {}, final third increasing: {}), tail change {} within 2^-{}: {}",
            rep.target.verdict,
            rep.target.growth_ratio,
            rep.target.final_window_increasing,
            tail.max_change,
            precision_bits / 2,
            tail.within_bound
        ),
    ))
}
