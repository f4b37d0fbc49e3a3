use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use solzeta::arith::{format_rat, int, parse_rat, rat};
use solzeta::kernel::QuadField;
use solzeta::orbit::{
    catmap_growth, catmap_prefix, derivative_trick_transform, f_prefix, growth_rate, zeta_coeffs, CatmapSpec,
    SeriesPrefix,
};
use solzeta::probe::{
    default_grid, example26_decomposition, funceq_check_g, linear_grid, radial_probe, sparsity_diagnostic,
    tail_check, ProbeSeries, VerdictRule, DEFAULT_PRECISION_BITS,
};
use solzeta::ratfunc::{h_s, poly, RatFunc};
use solzeta::recurrence::{classify_catmap, classify_with_evidence, rigid_indices, Verdict};
use solzeta::verify::run_suites;
use solzeta::{BigRat, Error, PrimeSet, ProbeConfig, SolenoidSpec};

use crate::args::*;

pub const SCHEMA_VERSION: u32 = 1;
pub const PRECISION_ENV: &str = "ZETA_PRECISION_BITS";

/// Exit status 1 (a check failed) or 2 (bad input).
#[derive(Debug)]
pub enum CliError {
    Failed(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => CliError::Failed(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// Rendered output and whether every check in it passed.
pub struct Output {
    pub text: String,
    pub passed: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, passed: true }
    }
}

/// The config echoed into every artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(flatten)]
    pub command: Command,
}

fn default_precision() -> CliResult<u32> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => match v.trim().parse::<u32>() {
            Ok(b) if b >= 16 => Ok(b),
            _ => usage(format!("{PRECISION_ENV}={v:?} is not a bit count >= 16")),
        },
        Err(_) => Ok(DEFAULT_PRECISION_BITS),
    }
}

/// Fills defaults that depend on the environment so the echo is
/// self-contained.
pub fn resolve(mut cmd: Command) -> CliResult<Command> {
    let slot = match &mut cmd {
        Command::Probe(a) => Some(&mut a.precision_bits),
        Command::Entropy(a) => Some(&mut a.precision_bits),
        Command::Verify(a) => Some(&mut a.precision_bits),
        Command::Paper(a) => Some(&mut a.precision_bits),
        _ => None,
    };
    if let Some(slot) = slot {
        if slot.is_none() {
            *slot = Some(default_precision()?);
        }
    }
    Ok(cmd)
}

fn echo(cmd: &Command) -> RunConfig {
    RunConfig {
        schema_version: SCHEMA_VERSION,
        command: cmd.clone(),
    }
}

fn json_doc(cmd: &Command, result: Value) -> String {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "config": echo(cmd),
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

fn csv_doc(cmd: &Command, body: &str) -> String {
    let cfg = serde_json::to_string(&echo(cmd)).expect("serializable");
    format!("# config={cfg}\n{body}")
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn rational(s: &str, what: &str) -> CliResult<BigRat> {
    parse_rat(s).map_err(|e| CliError::Usage(format!("--{what}: {e}")))
}

fn primes(s: &str, what: &str) -> CliResult<PrimeSet> {
    s.parse().map_err(|e: Error| CliError::Usage(format!("--{what}: {e}")))
}

fn system(a: &SystemArgs) -> CliResult<SolenoidSpec> {
    let r = rational(&a.r, "r")?;
    Ok(match (&a.s, &a.t) {
        (_, Some(t)) => SolenoidSpec::cofinite(r, primes(t, "t")?)?,
        (Some(s), None) => SolenoidSpec::finite(r, primes(s, "s")?)?,
        (None, None) => SolenoidSpec::finite(r, PrimeSet::empty())?,
    })
}

fn prefix_doc(cmd: &Command, p: &SeriesPrefix, column: &str, format: Format, system: &str) -> String {
    match format {
        Format::Csv => csv_doc(cmd, &p.to_csv(column)),
        Format::Json => json_doc(
            cmd,
            json!({"system": system, "offset": p.offset, column: p.to_strings()}),
        ),
    }
}

pub fn run(cmd: &Command) -> CliResult<Output> {
    match cmd {
        Command::Seq(a) => {
            let spec = system(&a.system)?;
            let p = f_prefix(&spec, a.n)?;
            Ok(Output::ok(prefix_doc(cmd, &p, "f_n", a.format, &spec.describe())))
        }
        Command::Classify(a) => {
            let spec = system(&a.system)?;
            let c = classify_with_evidence(&spec)?;
            let agrees = c.detector_agrees(2);
            let mut v = to_value(&c);
            v["detector_agrees"] = json!(agrees);
            Ok(Output::ok(json_doc(cmd, v)))
        }
        Command::Zeta(a) => {
            let spec = system(&a.system)?;
            if a.terms == 0 {
                return usage("--terms must be positive");
            }
            let z = zeta_coeffs(&f_prefix(&spec, a.terms)?)?;
            Ok(Output::ok(prefix_doc(cmd, &z, "zeta_n", a.format, &spec.describe())))
        }
        Command::Probe(a) => probe(cmd, a),
        Command::Hs(a) => {
            let s = primes(&a.primes, "primes")?;
            let h = h_s(&s);
            let normalized = h.normalized();
            Ok(Output::ok(json_doc(
                cmd,
                json!({
                    "primes": s,
                    "display": h.to_string(),
                    "terms": h.terms,
                    "period": h.period(),
                    "normalized": normalized,
                    "coefficients": h.expand(a.n as usize),
                }),
            )))
        }
        Command::Funceq(a) => {
            let g = funceq_check_g(a.p, a.degree)?;
            let mut result = json!({"p": a.p, "degree": a.degree, "g_equation": g});
            let mut passed = g;
            if a.decomposition {
                let rep = example26_decomposition(a.degree)?;
                passed &= rep.passed();
                result["decomposition"] = to_value(&rep);
            }
            result["passed"] = json!(passed);
            Ok(Output {
                text: json_doc(cmd, result),
                passed,
            })
        }
        Command::Catmap(a) => {
            let labels: Vec<&str> = a.places.split(',').map(str::trim).filter(|l| !l.is_empty()).collect();
            let spec = CatmapSpec::with_labels(a.trace, a.norm, &labels)?;
            if let Some(d) = a.d {
                if QuadField::new(d)? != spec.field {
                    return usage(format!("--d {d} does not match the field {}", spec.field));
                }
            }
            let p = catmap_prefix(&spec, a.n)?;
            let traces = spec.traces(a.n);
            match a.format {
                Format::Csv => {
                    let mut body = String::from("n,trace,f_n\n");
                    for (i, f) in p.coeffs.iter().enumerate() {
                        let _ = writeln!(body, "{},{},{}", i + 1, traces[i + 1], f);
                    }
                    Ok(Output::ok(csv_doc(cmd, &body)))
                }
                Format::Json => Ok(Output::ok(json_doc(
                    cmd,
                    json!({
                        "system": spec.describe(),
                        "kernels": spec.kernels(),
                        "traces": traces[1..].iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                        "f_n": p.to_strings(),
                    }),
                ))),
            }
        }
        Command::Entropy(a) => {
            let bits = a.precision_bits.unwrap_or(DEFAULT_PRECISION_BITS);
            let (system, g) = match (&a.r, a.trace, a.norm) {
                (Some(r), None, None) => {
                    let spec = system(&SystemArgs {
                        r: r.clone(),
                        s: a.s.clone(),
                        t: a.t.clone(),
                    })?;
                    (spec.describe(), growth_rate(&spec, bits))
                }
                (None, Some(t), Some(n)) => {
                    let spec = CatmapSpec::new(t, n, Vec::new())?;
                    (spec.describe(), catmap_growth(&spec, bits))
                }
                _ => return usage("give either --r or both --trace and --norm"),
            };
            let mut v = to_value(&g);
            v["system"] = json!(system);
            Ok(Output::ok(json_doc(cmd, v)))
        }
        Command::Sparsity(a) => {
            let rep = sparsity_diagnostic(&rational(&a.r, "r")?, &primes(&a.t, "t")?, &rational(&a.s, "s")?, a.n)?;
            match a.format {
                Format::Json => Ok(Output::ok(json_doc(cmd, to_value(&rep)))),
                Format::Csv => {
                    let mut body = String::from("j,n_j,ratio\n");
                    for (j, (n, q)) in rep.exceptional.iter().zip(&rep.ratios).enumerate() {
                        let _ = writeln!(body, "{},{},{}", j + 1, n, format_rat(q));
                    }
                    Ok(Output::ok(csv_doc(cmd, &body)))
                }
            }
        }
        Command::Rigid(a) => {
            let spec = SolenoidSpec::finite(rational(&a.r, "r")?, primes(&a.s, "s")?)?;
            let rep = rigid_indices(&spec, a.q, a.e_max)?;
            Ok(Output {
                passed: rep.all_stable,
                text: json_doc(cmd, to_value(&rep)),
            })
        }
        Command::Verify(a) => {
            let bits = a.precision_bits.unwrap_or(DEFAULT_PRECISION_BITS);
            let results = run_suites(&a.suite, bits)?;
            let passed = results.iter().all(|r| r.passed);
            Ok(Output {
                text: json_doc(cmd, json!({"suites": results, "passed": passed})),
                passed,
            })
        }
        Command::Paper(a) => paper(cmd, a.precision_bits.unwrap_or(DEFAULT_PRECISION_BITS)),
        Command::Replay(a) => replay(cmd, a),
    }
}

fn probe_config(a: &ProbeArgs) -> CliResult<ProbeConfig> {
    let mut cfg = ProbeConfig::new(a.q, rational(&a.delta, "delta")?);
    cfg.lambda_grid = match &a.lambda_grid {
        Some(list) => list
            .split(',')
            .map(|x| rational(x.trim(), "lambda-grid"))
            .collect::<CliResult<_>>()?,
        None if a.lambda_min == "9/10" && a.lambda_max == "999/1000" && a.points == 50 => default_grid(),
        None => {
            if a.points == 0 {
                return usage("--points must be positive");
            }
            linear_grid(&rational(&a.lambda_min, "lambda-min")?, &rational(&a.lambda_max, "lambda-max")?, a.points)
        }
    };
    cfg.truncation_n = a.truncation;
    cfg.precision_bits = a.precision_bits.unwrap_or(DEFAULT_PRECISION_BITS);
    cfg.allow_weak_delta = a.allow_weak_delta;
    if a.window_divisor < 1 {
        return usage("--window-divisor must be positive");
    }
    cfg.rule = VerdictRule {
        window_divisor: a.window_divisor,
        ratio: a.ratio,
    };
    Ok(cfg)
}

fn probe(cmd: &Command, a: &ProbeArgs) -> CliResult<Output> {
    let spec = SolenoidSpec::finite(rational(&a.r, "r")?, primes(&a.s, "s")?)?;
    let cfg = probe_config(a)?;
    let rep = radial_probe(&spec, &cfg)?;
    let tail = if a.tail_check {
        Some(tail_check(&ProbeSeries::Kernels(spec.kernels().to_vec()), &cfg)?)
    } else {
        None
    };
    let passed = tail.as_ref().is_none_or(|t| t.within_bound);
    let text = match a.format {
        Format::Json => {
            let mut v = to_value(&rep);
            v["tail_check"] = to_value(&tail);
            json_doc(cmd, v)
        }
        Format::Csv => {
            let mut body = rep.csv_body();
            if let Some(t) = &tail {
                let _ = writeln!(
                    body,
                    "# tail_check truncation_n={} max_change={} bound={} within_bound={}",
                    t.truncation_n, t.max_change, t.bound, t.within_bound
                );
            }
            let _ = writeln!(
                body,
                "# e_bound={} t_aug={} weak_delta={} pole_collision={}",
                rep.e_bound.e, rep.e_bound.t_aug, rep.weak_delta, rep.pole_collision
            );
            csv_doc(cmd, &body)
        }
    };
    Ok(Output { text, passed })
}

#[derive(Serialize)]
struct Step {
    name: &'static str,
    passed: bool,
    detail: Value,
}

fn paper(cmd: &Command, bits: u32) -> CliResult<Output> {
    let mut steps = Vec::new();

    let ex = example26_decomposition(500)?;
    steps.push(Step {
        name: "r=2, S={3} series via G_3 and H_2; r=2, S={2,3} as F(2z) - F(z)",
        passed: ex.passed(),
        detail: to_value(&ex),
    });

    let set23 = PrimeSet::new([2, 3])?;
    let spec = SolenoidSpec::finite(int(2), set23)?;
    let c = classify_with_evidence(&spec)?;
    steps.push(Step {
        name: "r=2, S={2,3} classification",
        passed: c.verdict == Verdict::Irrational && c.detector_agrees(2) == Some(true),
        detail: to_value(&c),
    });

    let mut cfg = ProbeConfig::new(3, rat(1, 27));
    cfg.precision_bits = bits;
    let rep = radial_probe(&spec, &cfg)?;
    let tail = tail_check(&ProbeSeries::Kernels(spec.kernels().to_vec()), &cfg)?;
    steps.push(Step {
        name: "r=2, S={2,3} radial probe at delta=1/27 (verdict is evidence; the tail bound is checked)",
        passed: tail.within_bound,
        detail: json!({
            "verdict": rep.target.verdict,
            "growth_ratio": rep.target.growth_ratio,
            "final_window_increasing": rep.target.final_window_increasing,
            "control_verdict": rep.control.verdict,
            "control_delta": format_rat(&rep.control.delta),
            "e_bound": rep.e_bound,
            "pole_collision": rep.pole_collision,
            "truncation_n": rep.truncation_n,
            "tail_check": tail,
        }),
    });

    let cat = CatmapSpec::cat_map();
    let zeta = classify_catmap(&cat).zeta;
    let expected = RatFunc::new(poly(&[1, -2, 1]), poly(&[1, -3, 1]));
    let fp = catmap_prefix(&cat, 100)?;
    let matches = zeta.as_ref() == Some(&expected) && expected.expand(101) == zeta_coeffs(&fp)?.coeffs;
    steps.push(Step {
        name: "cat map zeta (1 - z)^2/(1 - 3z + z^2)",
        passed: matches,
        detail: json!({"zeta": zeta.map(|z| z.to_string()), "f_head": fp.to_strings()[..6].to_vec()}),
    });

    let n = 2000;
    let inert = CatmapSpec::with_labels(3, 1, &["2"])?;
    let spec7 = SolenoidSpec::finite(int(2), PrimeSet::new([7])?)?;
    let a = derivative_trick_transform(&catmap_prefix(&inert, n)?, inert.kernels());
    let b = derivative_trick_transform(&f_prefix(&spec7, n)?, spec7.kernels());
    steps.push(Step {
        name: "derivative trick: C n^rho f(n) integral",
        passed: a.is_ok() && b.is_ok(),
        detail: json!({
            "n_max": n,
            "cat map, inert place above 2": a.as_ref().map(|v| v[..6].iter().map(|x| x.to_string()).collect::<Vec<_>>()).map_err(|e| e.to_string()),
            "r=2, S={7}": b.as_ref().map(|v| v[..6].iter().map(|x| x.to_string()).collect::<Vec<_>>()).map_err(|e| e.to_string()),
        }),
    });

    let passed = steps.iter().all(|s| s.passed);
    Ok(Output {
        text: json_doc(cmd, json!({"steps": steps, "passed": passed})),
        passed,
    })
}

/// Extracts the echoed config from a CSV or JSON artifact.
pub fn echoed_config(text: &str) -> CliResult<RunConfig> {
    let raw: Value = if let Some(rest) = text.strip_prefix("# config=") {
        let line = rest.lines().next().unwrap_or_default();
        serde_json::from_str(line).map_err(|e| CliError::Usage(format!("bad config line: {e}")))?
    } else {
        let doc: Value = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("not an artifact: {e}")))?;
        doc.get("config")
            .cloned()
            .ok_or_else(|| CliError::Usage("no config field".into()))?
    };
    serde_json::from_value(raw).map_err(|e| CliError::Usage(format!("bad config: {e}")))
}

fn replay(cmd: &Command, a: &ReplayArgs) -> CliResult<Output> {
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| CliError::Usage(format!("{}: {e}", a.input.display())))?;
    let cfg = echoed_config(&text)?;
    if cfg.schema_version != SCHEMA_VERSION {
        return usage(format!("schema version {} is not supported", cfg.schema_version));
    }
    if matches!(cfg.command, Command::Replay(_)) {
        return usage("cannot replay a replay");
    }
    let again = run(&cfg.command)?;
    let identical = again.text == text;
    let first_diff = (!identical).then(|| {
        text.lines()
            .zip(again.text.lines())
            .position(|(x, y)| x != y)
            .unwrap_or_else(|| text.lines().count().min(again.text.lines().count()))
            + 1
    });
    Ok(Output {
        text: json_doc(cmd, json!({"identical": identical, "first_differing_line": first_diff})),
        passed: identical,
    })
}
