use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use carlitz_core::carlitz::{exp_carlitz, exp_term_count, factorial_d, torsion_point};
use carlitz_core::digit::{CoeffRing, DigitPolynomial};
use carlitz_core::laurent::precision_string;
use carlitz_core::special::{capital_omega, omega, omega_product, pi_bar, zeta, zeta_cost, ZetaRequest};
use carlitz_core::suites::{run_suite, SuiteConfig, SUITES};
use carlitz_core::tate::expand_inverse_monic;
use carlitz_core::{Poly, RationalFunction, Report, Status, TateElement};

use crate::{BenchArgs, ComputeArgs, Constant, Failure, Format, Kernel, RunConfig, VerifyArgs};

fn header(cfg: &RunConfig, name: &str) -> Value {
    let f = cfg.field;
    json!({
        "name": name,
        "q": f.q(),
        "p": f.p(),
        "e": f.e(),
        "precision": precision_string(Some(cfg.precision), f.lattice_den()),
        "lattice_den": f.lattice_den(),
    })
}

fn emit(cfg: &RunConfig, name: &str, text: String, value: Value, extra: Value) {
    match cfg.format {
        Format::Json => {
            let mut h = header(cfg, name);
            h["value"] = value;
            if let (Value::Object(h), Value::Object(extra)) = (&mut h, extra) {
                h.extend(extra);
            }
            println!("{}", serde_json::to_string_pretty(&h).expect("json"));
        }
        Format::Text => {
            let f = cfg.field;
            println!(
                "# {name}: q={} N={} lattice 1/{}",
                f.q(),
                precision_string(Some(cfg.precision), f.lattice_den()),
                f.lattice_den()
            );
            if let Value::Object(extra) = extra {
                for (k, v) in extra {
                    println!("# {k}={v}");
                }
            }
            println!("{text}");
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("json")
}

pub fn compute(cfg: &RunConfig, a: &ComputeArgs) -> Result<u8, Failure> {
    let f = cfg.field;
    let n = cfg.precision;
    match a.name {
        Constant::Pi => {
            let pi = pi_bar(f, n)?;
            emit(cfg, "pi", pi.to_string(), to_value(&pi.to_json()), json!({}));
        }
        Constant::Omega => {
            let s = cfg.s.unwrap_or(1).max(1);
            let w = omega_product(f, s, n)?;
            emit(cfg, "omega", w.to_string(), to_value(&w.to_json()), json!({ "s": s }));
        }
        Constant::Zeta => {
            let req = ZetaRequest {
                n: a.n.unwrap_or(1),
                s: a.eval.as_ref().map_or(cfg.s.unwrap_or(0), |k| k.len()),
                precision: n,
                eval: a.eval.clone(),
                budget: cfg.budget,
            };
            if req.n == 0 {
                return Err(Failure::Usage("zeta needs n ≥ 1".into()));
            }
            let z = zeta(f, &req)?;
            let extra = json!({
                "n": req.n,
                "s": req.s,
                "d_max": z.d_max,
                "nominal_terms": z.nominal_terms,
                "enumerated_terms": z.enumerated_terms,
            });
            emit(cfg, "zeta", z.value.to_string(), to_value(&z.value.to_json()), extra);
        }
        Constant::Dn => {
            let k = a.n.unwrap_or(1);
            let d = factorial_d(f, k);
            emit(cfg, "dn", d.to_string(), to_value(&d.to_json()), json!({ "n": k }));
        }
        Constant::Torsion => {
            let poly = Poly::parse(f, &a.a)?;
            let s = cfg.s.unwrap_or(poly.t_vars_used());
            let lam = torsion_point(&poly, a.j, s, n)?;
            emit(cfg, "torsion", lam.to_string(), to_value(&lam.to_json()), json!({ "a": poly.to_string(), "j": a.j }));
        }
        Constant::DigitDemo => {
            let [i, j] = a.digits[..] else {
                return Err(Failure::Usage("--digits takes two indices".into()));
            };
            let one = RationalFunction::one(f);
            let yi = DigitPolynomial::monomial(CoeffRing::Constants, i, one.clone())?;
            let yj = DigitPolynomial::monomial(CoeffRing::Constants, j, one)?;
            let prod = yi.multiply(&yj)?;
            let reduced = yi.phi_to_mu().mul(&yj.phi_to_mu()).reduce_mod_p()?;
            let holds = reduced == prod.phi_to_mu();
            let text = format!(
                "<Y>^{i} = {yi}\n<Y>^{j} = {yj}\nproduct = {prod}\nphi(<Y>^{i}) = {}\nphi(<Y>^{j}) = {}\nphi product mod P = {reduced}\nphi multiplicative: {holds}",
                yi.phi_to_mu(),
                yj.phi_to_mu()
            );
            let value = json!({
                "left": yi.to_string(),
                "right": yj.to_string(),
                "product": prod.to_string(),
                "phi_product_reduced": to_value(&reduced.to_json()),
                "phi_multiplicative": holds,
            });
            emit(cfg, "digit-demo", text, value, json!({}));
        }
    }
    Ok(0)
}

fn print_report(r: &Report) {
    println!("{}: {} (q={}, N={})", r.suite, status_word(r.status), r.q, r.precision);
    for c in &r.checks {
        let mut line = format!("  {:<12} {}  [mod θ^-({})]", status_word(c.status), c.name, c.precision);
        if let Some(w) = &c.witness {
            line.push_str(&format!("  value: {w}"));
        }
        if let Some(k) = &c.first_discrepant_exponent {
            line.push_str(&format!("  first discrepancy at θ^-({k})"));
        }
        if let Some(d) = &c.detail {
            line.push_str(&format!("  ({d})"));
        }
        println!("{line}");
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Verified => "verified",
        Status::Failed => "failed",
        Status::Inconclusive => "inconclusive",
    }
}

pub fn verify(cfg: &RunConfig, a: &VerifyArgs) -> Result<u8, Failure> {
    let names: Vec<&str> = if a.suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&a.suite.as_str()) {
        vec![a.suite.as_str()]
    } else {
        return Err(Failure::Usage(format!("unknown suite `{}`; choose one of {} or all", a.suite, SUITES.join(", "))));
    };
    let sc = SuiteConfig { field: cfg.field, precision: cfg.precision, s: cfg.s, budget: cfg.budget, seed: cfg.seed, range: a.range };
    let mut reports = Vec::new();
    for name in names {
        reports.push(run_suite(name, &sc)?.report);
    }
    match cfg.format {
        Format::Json if reports.len() == 1 => println!("{}", serde_json::to_string_pretty(&reports[0]).expect("json")),
        Format::Json => println!("{}", serde_json::to_string_pretty(&reports).expect("json")),
        Format::Text => reports.iter().for_each(print_report),
    }
    let status = reports.iter().fold(Status::Verified, |s, r| s.combine(r.status));
    Ok(if status == Status::Verified { 0 } else { 1 })
}

fn sweep(cfg: &RunConfig, a: &BenchArgs) -> Result<Vec<i64>, Failure> {
    let den = cfg.field.lattice_den();
    match &a.sweep {
        None => Ok(vec![cfg.precision]),
        Some(text) => {
            let (lo, hi) = text.split_once("..").ok_or_else(|| Failure::Usage(format!("bad sweep `{text}`")))?;
            let parse = |x: &str| x.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("bad sweep `{text}`")));
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo <= 0 || hi < lo {
                return Err(Failure::Usage(format!("bad sweep `{text}`")));
            }
            Ok((lo..=hi).map(|n| n * den).collect())
        }
    }
}

#[derive(Serialize)]
struct BenchRow {
    precision: String,
    seconds: f64,
    #[serde(flatten)]
    counts: Value,
}

pub fn bench(cfg: &RunConfig, a: &BenchArgs) -> Result<u8, Failure> {
    let f = cfg.field;
    let den = f.lattice_den();
    let mut rows = Vec::new();
    for n in sweep(cfg, a)? {
        let start = Instant::now();
        let counts = match a.kernel {
            Kernel::Zeta => {
                let req = ZetaRequest { n: a.n, s: cfg.s.unwrap_or(0), precision: n, eval: None, budget: cfg.budget };
                let (nominal, enumerated, d_max) = zeta_cost(f, &req);
                let start = Instant::now();
                let status = match zeta(f, &req) {
                    Ok(_) => "ok",
                    Err(carlitz_core::Error::BudgetExceeded { .. }) => "over budget",
                    Err(e) => return Err(e.into()),
                };
                let secs = start.elapsed().as_secs_f64();
                json!({ "d_max": d_max, "nominal_terms": nominal, "enumerated_terms": enumerated, "status": status, "zeta_seconds": secs })
            }
            Kernel::Mul => {
                let x = omega(f, 1, 1, n)?;
                let y = capital_omega(f, n)?;
                let start = Instant::now();
                let z = x.mul(&y);
                let secs = start.elapsed().as_secs_f64();
                json!({ "terms": [x.num_terms(), y.num_terms(), z.num_terms()], "mul_seconds": secs })
            }
            Kernel::Exp => {
                let inv = expand_inverse_monic(&Poly::parse(f, "θ - t1")?, 1, n + f.q() as i64)?;
                let x = TateElement::from_series(1, pi_bar(f, n)?).mul_capped(&inv, Some(n));
                let i_max = exp_term_count(f, x.valuation().unwrap_or(n), n);
                let start = Instant::now();
                exp_carlitz(&x, n)?;
                json!({ "i_max": i_max, "exp_seconds": start.elapsed().as_secs_f64() })
            }
        };
        rows.push(BenchRow { precision: precision_string(Some(n), den), seconds: start.elapsed().as_secs_f64(), counts });
    }
    match cfg.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows).expect("json")),
        Format::Text => {
            println!("# bench {:?} q={}", a.kernel, f.q());
            for r in rows {
                let fields: Vec<String> = r
                    .counts
                    .as_object()
                    .map(|o| o.iter().map(|(k, v)| format!("{k}={v}")).collect())
                    .unwrap_or_default();
                println!("N={:<6} total={:.6}s  {}", r.precision, r.seconds, fields.join("  "));
            }
        }
    }
    Ok(0)
}
