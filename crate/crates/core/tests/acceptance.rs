//! Acceptance criteria, one PASS/FAIL line each.

use std::time::{Duration, Instant};

use carlitz_core::carlitz::exp_series;
use carlitz_core::special::{euler_carlitz_check, verify_theorem5, zeta_series};
use carlitz_core::suites::{precision_meta, run_suite, SuiteConfig, SUITES};
use carlitz_core::{Field, LaurentSeries, Poly, RationalFunction, Report, Status};

/// Precisions are in powers of `θ^{-1}`; the lattice index is this times `q - 1`.
const N_DEFAULT: i64 = 16;
const N_OMEGA: i64 = 20;
const N_SMALL: i64 = 12;
const LIMIT_CARLITZ: Duration = Duration::from_secs(5);
const LIMIT_THEOREM5: Duration = Duration::from_secs(60);
const LIMIT_DIGITS: Duration = Duration::from_secs(5);
const META_OFFSET: i64 = 4;

struct Outcome {
    id: u32,
    title: &'static str,
    ok: bool,
    detail: String,
}

fn field(q: u32) -> &'static Field {
    Field::for_q(q).unwrap()
}

fn cfg(q: u32, n_theta: i64) -> SuiteConfig {
    let f = field(q);
    SuiteConfig::new(f, n_theta * f.lattice_den())
}

fn suite(name: &str, c: &SuiteConfig) -> Report {
    run_suite(name, c).unwrap_or_else(|e| panic!("{name}: {e}")).report
}

fn failures(r: &Report) -> String {
    r.checks
        .iter()
        .filter(|c| c.status != Status::Verified)
        .map(|c| format!("{} [{:?}]", c.name, c.status))
        .collect::<Vec<_>>()
        .join("; ")
}

fn summarize(reports: &[Report]) -> (bool, String) {
    let ok = reports.iter().all(|r| r.status == Status::Verified);
    let checks: usize = reports.iter().map(|r| r.checks.len()).sum();
    let bad: Vec<String> = reports.iter().filter(|r| r.status != Status::Verified).map(failures).collect();
    (ok, if ok { format!("{checks} checks verified") } else { bad.join(" | ") })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    for q in [2, 3] {
        let f = field(q);
        let n = N_DEFAULT * f.lattice_den();
        let z = zeta_series(f, 1, n, 2_000_000).unwrap();
        let e = exp_series(&z, n).unwrap();
        ok &= e.eq_mod(&LaurentSeries::one(f), n) && e.precision().is_some_and(|p| p >= n);
    }
    let t = start.elapsed();
    Outcome {
        id: 1,
        title: "exp_C(zeta(1)) = 1 at q in {2,3}, N=16",
        ok: ok && t < LIMIT_CARLITZ,
        detail: format!("{t:?} (limit {LIMIT_CARLITZ:?})"),
    }
}

fn criterion_2() -> Outcome {
    let c = cfg(3, N_DEFAULT);
    let (ok, detail) = summarize(&[suite("kernel", &c), suite("torsion", &c)]);
    Outcome { id: 2, title: "kernel and torsion, q=3, N=16", ok, detail }
}

fn criterion_3() -> Outcome {
    let (ok, detail) = summarize(&[suite("omega-difference", &cfg(3, N_OMEGA))]);
    Outcome { id: 3, title: "omega relations and residue, q=3, N=20", ok, detail }
}

fn criterion_4() -> Outcome {
    let c = cfg(3, N_DEFAULT);
    let (mut ok, mut detail) = summarize(&[suite("zeta-interp", &c), suite("euler-carlitz", &c)]);
    // the z^q coefficient of exp_C is 1/(θ^q - θ); its product expansion gives -ζ(q-1)/π̃^{q-1}
    let f = field(3);
    let o = euler_carlitz_check(f, 1, c.precision, c.budget).unwrap();
    let bracket = Poly::theta(f).pow(3).sub(&Poly::theta(f));
    let want = RationalFunction::new(Poly::constant(f, f.neg(carlitz_core::Fe::ONE)), bracket).unwrap();
    let exact = o.rational.as_ref() == Some(&want);
    ok &= exact;
    detail.push_str(&format!("; ratio = {}", o.rational.map_or("none".into(), |r| r.to_string())));
    Outcome { id: 4, title: "zeta structure: mu, interpolation, Euler-Carlitz, q=3, N=16", ok, detail }
}

fn criterion_5() -> Outcome {
    let f = field(3);
    let n = N_SMALL * f.lattice_den();
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for s in 0..=3 {
        let o = verify_theorem5(f, s, n, 2_000_000).unwrap();
        ok &= o.checks.iter().all(|c| c.status == Status::Verified);
        let p = o.p_s.map_or("?".into(), |p| p.to_string());
        notes.push(format!("P_{s}={p}"));
        if s == 3 {
            ok &= p == "0";
            let b = o.b_s.map(|b| b.to_string());
            ok &= b.as_deref().is_some_and(|b| b != "0");
            notes.push(format!("B_3={}", b.unwrap_or("?".into())));
        }
    }
    let (z_ok, z_detail) = summarize(&[suite("zeta11", &cfg(3, N_SMALL))]);
    let t = start.elapsed();
    Outcome {
        id: 5,
        title: "theorem5 suite s=0..3 and zeta(1;1)(θ-t)ω = π, q=3, N=12",
        ok: ok && z_ok && t < LIMIT_THEOREM5,
        detail: format!("{}; {z_detail}; {t:?} (limit {LIMIT_THEOREM5:?})", notes.join(", ")),
    }
}

fn criterion_6() -> Outcome {
    let (ok, detail) = summarize(&[suite("hoelder", &cfg(3, N_SMALL))]);
    Outcome { id: 6, title: "Hoelder analogue i=0..3, q=3, N=12", ok, detail }
}

fn criterion_7() -> Outcome {
    let c = cfg(3, N_SMALL);
    let solve = suite("solve", &c);
    let seeded = solve.checks.iter().filter(|c| c.name.starts_with('g') && c.name.contains("τ(x) = x - τ(g)")).count();
    let (ok, detail) = summarize(&[solve, suite("polylog", &c)]);
    Outcome {
        id: 7,
        title: "solver on 5 seeded forcings and the d=2 polylog system, q=3, N=12",
        ok: ok && seeded == 5,
        detail: format!("{seeded} seeded forcings; {detail}"),
    }
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let reports: Vec<Report> = [2, 3].iter().map(|&q| suite("digit-ring", &cfg(q, N_DEFAULT))).collect();
    let t = start.elapsed();
    let (ok, detail) = summarize(&reports);
    Outcome {
        id: 8,
        title: "digit ring at p in {2,3}",
        ok: ok && t < LIMIT_DIGITS,
        detail: format!("{detail}; {t:?} (limit {LIMIT_DIGITS:?})"),
    }
}

fn criterion_9() -> Outcome {
    let mut bad = Vec::new();
    let mut total = 0;
    for name in SUITES {
        let n = match *name {
            "omega-difference" => N_OMEGA,
            "theorem5" | "zeta11" | "hoelder" | "solve" | "polylog" => N_SMALL,
            _ => N_DEFAULT,
        };
        let c = cfg(3, n);
        let check = precision_meta(name, &c, META_OFFSET).unwrap();
        total += 1;
        if check.status != Status::Verified {
            bad.push(format!("{} at {:?}", check.name, check.first_discrepant_exponent));
        }
    }
    Outcome {
        id: 9,
        title: "re-running every suite at N+4 reproduces all coefficients below N",
        ok: bad.is_empty(),
        detail: if bad.is_empty() { format!("{total} suites") } else { bad.join("; ") },
    }
}

fn criterion_10() -> Outcome {
    let (ok, detail) = summarize(&[suite("mu-poly", &cfg(3, N_DEFAULT))]);
    Outcome { id: 10, title: "mu-polynomial classification and zero sets", ok, detail }
}

#[test]
fn acceptance() {
    let outcomes = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ];
    for o in &outcomes {
        println!("{} [{:>2}] {}: {}", if o.ok { "PASS" } else { "FAIL" }, o.id, o.title, o.detail);
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.ok).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
