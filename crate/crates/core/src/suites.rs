//! Named verification suites. Each returns a [`Report`] and the values it
//! computed, so that runs at two precisions can be compared coefficientwise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::carlitz::{carlitz_action, exp_carlitz, exp_series, log_series, torsion_point};
use crate::digit::{carry_add, digits, from_digits, CoeffRing, DigitPolynomial};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::laurent::{precision_string, LaurentSeries};
use crate::mupoly::{Classification, MuPolynomial};
use crate::poly::{Poly, RationalFunction};
use crate::report::{Artifact, Check, Report, Status};
use crate::solve::{solve_polylog_system, solve_tau_inverse};
use crate::special::{
    euler_carlitz_check, euler_product, omega, omega_residue, pi_bar, verify_theorem5, zeta, zeta_direct,
    zeta_series, ZetaRequest,
};
use crate::tate::{expand_inverse_monic, TateElement};

pub const SUITES: &[&str] = &[
    "carlitz-identity",
    "omega-difference",
    "kernel",
    "torsion",
    "zeta-interp",
    "theorem5",
    "zeta11",
    "euler-carlitz",
    "hoelder",
    "solve",
    "polylog",
    "digit-ring",
    "mu-poly",
];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub field: &'static Field,
    /// Lattice precision.
    pub precision: i64,
    /// Restricts `theorem5` to one `s`.
    pub s: Option<usize>,
    pub budget: u64,
    pub seed: u64,
    /// Index range for `digit-ring`; defaults to `p^3`.
    pub range: Option<u64>,
}

impl SuiteConfig {
    pub fn new(field: &'static Field, precision: i64) -> Self {
        SuiteConfig { field, precision, s: None, budget: 2_000_000, seed: 0, range: None }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub report: Report,
    pub artifacts: Vec<Artifact>,
}

struct Ctx {
    checks: Vec<Check>,
    artifacts: Vec<Artifact>,
}

impl Ctx {
    fn new() -> Self {
        Ctx { checks: Vec::new(), artifacts: Vec::new() }
    }

    fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn keep(&mut self, name: impl Into<String>, value: TateElement) {
        self.artifacts.push(Artifact { name: name.into(), value });
    }

    fn keep_series(&mut self, name: impl Into<String>, value: &LaurentSeries) {
        self.keep(name, TateElement::from_series(0, value.clone()));
    }
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let mut ctx = Ctx::new();
    match name {
        "carlitz-identity" => carlitz_identity(cfg, &mut ctx)?,
        "omega-difference" => omega_difference(cfg, &mut ctx)?,
        "kernel" => kernel(cfg, &mut ctx)?,
        "torsion" => torsion(cfg, &mut ctx)?,
        "zeta-interp" => zeta_interp(cfg, &mut ctx)?,
        "theorem5" => theorem5(cfg, &mut ctx)?,
        "zeta11" => zeta11(cfg, &mut ctx)?,
        "euler-carlitz" => euler_carlitz(cfg, &mut ctx)?,
        "hoelder" => hoelder(cfg, &mut ctx)?,
        "solve" => solve(cfg, &mut ctx)?,
        "polylog" => polylog(cfg, &mut ctx)?,
        "digit-ring" => digit_ring(cfg, &mut ctx)?,
        "mu-poly" => mu_poly(cfg, &mut ctx)?,
        other => return Err(Error::InvalidParameter(format!("unknown suite {other}"))),
    }
    let den = cfg.field.lattice_den();
    let report = Report::new(name, cfg.field.q(), precision_string(Some(cfg.precision), den), ctx.checks);
    Ok(SuiteOutcome { report, artifacts: ctx.artifacts })
}

fn tpoly(field: &'static Field, s: usize, text: &str) -> Result<TateElement> {
    TateElement::from_poly(&Poly::parse(field, text)?, s)
}

/// Largest lattice precision at which direct enumeration stays under `limit` terms.
fn direct_precision(field: &Field, n: u32, limit: u64) -> i64 {
    let q = field.q() as u64;
    let mut total = 0u64;
    let mut d = 0u32;
    loop {
        total = total.saturating_add(q.saturating_pow(d));
        if total > limit {
            return (d as i64 * n as i64 * field.lattice_den()).max(1);
        }
        d += 1;
    }
}

fn carlitz_identity(cfg: &SuiteConfig, ctx: &mut Ctx) -> Result<()> {
    let (f, n) = (cfg.field, cfg.precision);
    let z = zeta_series(f, 1, n, cfg.budget)?;
    let e = exp_series(&z, n)?;
    ctx.check(Check::series_eq("exp_C(zeta(1)) = 1", &e, &LaurentSeries::one(f), n));
    let l = log_series(&LaurentSeries::one(f), n)?;
    ctx.check(Check::series_eq("log_C(1) = zeta(1)", &l, &z, n));
    let nd = direct_precision(f, 1, 20_000).min(n);
    let zd = zeta_direct(f, 1, 0, nd)?.constant_term();
    ctx.check(Check::series_eq("grouped zeta(1) = direct enumeration", &z, &zd, nd));
    ctx.keep_series("zeta(1)", &z);
    ctx.keep_series("exp(zeta(1))", &e);
    Ok(())
}

/// `π̃/(θ-t)^k` in `𝕋_1`, exact below `n`.
fn pi_over_power(field: &'static Field, k: u32, n: i64) -> Result<TateElement> {
    let q = field.q() as i64;
    let a = Poly::parse(field, "θ - t1")?.pow(k);
    let inv = expand_inverse_monic(&a, 1, n + q)?;
    Ok(TateElement::from_series(1, pi_bar(field, n)?).mul_capped(&inv, Some(n)))
}

fn omega_difference(cfg: &SuiteConfig, ctx: &mut Ctx) -> Result<()> {
    let (f, n) = (cfg.field, cfg.precision);
    let den = f.lattice_den();
    let w = omega(f, 1, 1, n + den)?;
    let rhs = tpoly(f, 1, "t1 - θ")?.mul(&w);
    ctx.check(Check::tate_eq("τ(ω) = (t-θ)ω", &w.tau(), &rhs, n));
    let e = exp_carlitz(&pi_over_power(f, 1, n)?, n)?;
    ctx.check(Check::tate_eq("ω (product) = exp_C(π/(θ-t))", &w, &e, n));
    let pi = pi_bar(f, n)?;
    let res = omega_residue(f, n)?;
    ctx.check(Check::series_eq("-θ(-θ)^(1/(q-1))∏(1-θ^(1-q^i))^(-1) = -π", &res, &pi.neg(), n));
    ctx.keep("omega", w.truncate(n));
    ctx.keep_series("pi", &pi);
    Ok(())
}

fn kernel(cfg: &SuiteConfig, ctx: &mut Ctx) -> Result<()> {
    let (f, n) = (cfg.field, cfg.precision);
    let den = f.lattice_den();
    for h in ["1", "θ", "θ^2 + 1", "t1", "(t1 + 1)*θ"] {
        let hp = Poly::parse(f, h)?;
        let extra = hp.theta_degree().unwrap_or(0) as i64 * den;
        let x = TateElement::from_series(1, pi_bar(f, n + extra)?).mul(&TateElement::from_poly(&hp, 1)?);
        let e = exp_carlitz(&x, n)?;
        ctx.check(Check::tate_zero(format!("exp_C(π·({h})) = 0"), &e, n));
        ctx.keep(format!("exp(pi*({h}))"), e);
    }
    Ok(())
}

fn torsion(cfg: &SuiteConfig, ctx: &mut Ctx) -> Result<()> {
    let (f, n) = (cfg.field, cfg.precision);
    let (q, den) = (f.q() as i64, f.lattice_den());
    for a in ["θ", "θ^2", "θ - t1"] {
        let ap = Poly::parse(f, a)?;
        let d = ap.theta_degree().unwrap_or(0);
        for j in 0..d {
            let lam = torsion_point(&ap, j, 1, n + d as i64 * den + q)?;
            ctx.check(Check::flag(format!("λ({a}, {j}) ≠ 0"), lam.valuation().is_some(), lam.precision(), den));
            let c = carlitz_action(&ap, &lam)?;
            ctx.check(Check::tate_zero(format!("C_({a})(λ({a}, {j})) = 0"), &c, n));
            ctx.keep(format!("torsion({a},{j})"), lam.truncate(n));
        }
    }
    Ok(())
}

fn zeta_interp(cfg: &SuiteConfig, ctx: &mut Ctx) -> Result<()> {
    let (f, n) = (cfg.field, cfg.precision);
    let (p, q, den) = (f.p(), f.q(), f.lattice_den());
    let z1 = zeta_series(f, 1, n, cfg.budget)?;
    for m in 1..=3u32 {
        let zm = zeta_series(f, m, n, cfg.budget)?;
        let zpm = zeta_series(f, p * m, n, cfg.budget)?;
        ctx.check(Check::series_eq(format!("zeta({}) = mu(zeta({m}))", p * m), &zpm, &zm.mu(1)?.truncate(n), n));
    }
    for (m, ks) in [(1u32, vec![0u32]), (1, vec![1]), (1, vec![0, 1])] {
        let w: u32 = ks.iter().map(|&k| q.pow(k)).sum();
        let req = ZetaRequest { n: m + w, s: ks.len(), precision: n, eval: Some(ks.clone()), budget: cfg.budget };
        let v = zeta(f, &req)?.value.constant_term();
        ctx.check(Check::series_eq(format!("zeta({}; {})|t=θ^(q^{ks:?}) = zeta({m})", m + w, ks.len()), &v, &z1, n));
        ctx.keep_series(format!("interp{ks:?}"), &v);
    }
    for (s, ks) in [(0usize, vec![]), (2, vec![0u32, 0]), (2, vec![0, 1])] {
        let req = ZetaRequest { n: 1, s, precision: n.min(10 * den), eval: Some(ks.clone()), budget: cfg.budget };
        let v = zeta(f, &req)?.value;
        // ζ(-k) vanishes exactly when (q-1) | k, k > 0
        let n_eff = 1 - ks.iter().map(|&k| q.pow(k) as i64).sum::<i64>();
        let trivial = n_eff <= 0 && n_eff != 0 && (-n_eff) % (q as i64 - 1) == 0;
        let label = if trivial { "is a trivial zero" } else { "is nonzero" };
        ctx.check(Check::flag(format!("zeta(1; {s}) at t=θ^(q^{ks:?}) {label}"), v.is_zero() == trivial, v.precision(), den));
    }
    for d in 1..=4u32 {
        let prec = ((d as i64 + 1) * den).min(n);
        let e = euler_product(f, 1, d, prec)?;
        ctx.check(Check::series_eq(format!("Euler product over deg ≤ {d} = zeta(1)"), &e, &z1, prec));
    }
    ctx.keep_series("zeta(1)", &z1);
    Ok(())
}

fn theorem5(cfg: &SuiteConfig, ctx: &mut Ctx) -> Result<()> {
    let ss: Vec<usize> = match cfg.s {
        Some(s) => vec![s],
        None => (0..=3).collect(),
    };
    for s in ss {
        let o = verify_theorem5(cfg.field, s, cfg.precision, cfg.budget)?;
        ctx.checks.extend(o.checks);
        ctx.keep(format!("h_{s}"), o.h);
        if let Some(b) = o.b {
            ctx.keep(format!("B_{s}"), b);
        }
    }
    Ok(())
}

fn zeta11(cfg: &SuiteConfig, ctx: &mut Ctx) -> Result<()> {
    let (f, n) = (cfg.field, cfg.precision);
    let q = f.q() as i64;
    let req = ZetaRequest { n: 1, s: 1, precision: n + q, eval: None, budget: cfg.budget };
    let z = zeta(f, &req)?.value;
    let lhs = z.mul(&tpoly(f, 1, "θ - t1")?).mul_capped(&omega(f, 1, 1, n + q)?, Some(n));
    let pi = TateElement::from_series(1, pi_bar(f, n)?);
    ctx.check(Check::tate_eq("zeta(1;1)(θ-t)ω = π", &lhs, &pi, n));
    let nd = direct_precision(f, 1, 5_000).min(n);
    ctx.check(Check::tate_eq("grouped zeta(1;1) = direct enumeration", &z, &zeta_direct(f, 1, 1, nd)?, nd));
    ctx.keep("zeta(1;1)", z.truncate(n));
    Ok(())
}

fn euler_carlitz(cfg: &SuiteConfig, ctx: &mut Ctx) -> Result<()> {
    for k in 1..=2 {
        let o = euler_carlitz_check(cfg.field, k, cfg.precision, cfg.budget)?;
        ctx.checks.extend(o.checks.into_iter().map(|mut c| {
            c.name = format!("k={k}: {}", c.name);
            c
        }));
        ctx.keep_series(format!("ratio k={k}"), &o.ratio);
    }
    Ok(())
}

fn hoelder(cfg: &SuiteConfig, ctx: &mut Ctx) -> Result<()> {
    let (f, n) = (cfg.field, cfg.precision);
    let den = f.lattice_den();
    let w = omega(f, 1, 1, n + den)?;
    let lin = tpoly(f, 1, "t1 - θ")?;
    let mut prev = TateElement::zero(f, 1);
    for i in 0..=3u32 {
        let di = w.divided_derivative(i, 1)?;
        let e = exp_carlitz(&pi_over_power(f, i + 1, n)?, n)?;
        ctx.check(Check::tate_eq(format!("exp_C(π/(θ-t)^{}) = D_{i}(ω)", i + 1), &e, &di, n));
        let rhs = lin.mul(&di).add(&prev);
        ctx.check(Check::tate_eq(format!("τ(D_{i}ω) = (t-θ)D_{i}ω + D_{}ω", i as i64 - 1), &di.tau(), &rhs, n));
        ctx.keep(format!("D_{i}(omega)"), di.truncate(n));
        prev = di;
    }
    Ok(())
}

/// A forcing term `g ∈ 𝕋_1` with `v(g) > 0`.
fn random_forcing(field: &'static Field, rng: &mut ChaCha8Rng) -> Result<TateElement> {
    let elems: Vec<Fe> = field.elements().collect();
    let terms: Vec<_> = (0..rng.gen_range(1..=3u16))
        .map(|_| {
            let m = [rng.gen_range(0..=3u16), 0, 0, 0];
            let series: Vec<(i64, Fe)> =
                (0..rng.gen_range(1..=3)).map(|_| (rng.gen_range(1..=12i64), elems[rng.gen_range(1..elems.len())])).collect();
            (m, LaurentSeries::from_terms(field, &series, None))
        })
        .collect();
    // repeated monomials are summed
    let mut g = TateElement::zero(field, 1);
    for (m, c) in terms {
        g = g.add(&TateElement::from_terms(field, 1, [(m, c)], None)?);
    }
    Ok(g)
}

fn solve(cfg: &SuiteConfig, ctx: &mut Ctx) -> Result<()> {
    let (f, n) = (cfg.field, cfg.precision);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut forcings = vec![("θ^-2".to_string(), TateElement::from_series(1, LaurentSeries::theta_pow(f, -2)))];
    while forcings.len() < 6 {
        let g = random_forcing(f, &mut rng)?;
        if !g.is_zero() {
            forcings.push((format!("g{}", forcings.len()), g));
        }
    }
    for (label, g) in forcings {
        let r = solve_tau_inverse(&g, n)?;
        for c in &r.checks {
            let mut c = c.clone();
            c.name = format!("{label}: {}", c.name);
            ctx.check(c);
        }
        // two internal truncations differ by a τ-fixed element
        let r2 = solve_tau_inverse(&g, n + 4)?;
        let diff = r.x.sub(&r2.x);
        ctx.check(Check::tate_eq(format!("{label}: runs at N and N+4 differ by a τ-fixed element"), &diff.tau(), &diff, n));
        ctx.keep(format!("x[{label}]"), r.x);
    }
    Ok(())
}

fn polylog(cfg: &SuiteConfig, ctx: &mut Ctx) -> Result<()> {
    let (f, n) = (cfg.field, cfg.precision);
    let one = RationalFunction::one(f);
    for depths in [vec![1u32], vec![1, 1]] {
        let qs = vec![one.clone(); depths.len()];
        let sol = solve_polylog_system(f, &depths, &qs, n)?;
        let label = format!("s={depths:?}");
        if let Some((i, j, e)) = &sol.failure {
            ctx.check(Check::new(format!("{label}: solve ({i},{j})"), Status::Failed, Some(n), f.lattice_den()).with_detail(e));
        }
        for c in sol.checks {
            let mut c = c;
            c.name = format!("{label}: {}", c.name);
            ctx.check(c);
        }
        for (i, row) in sol.x.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if let Some(x) = x {
                    ctx.keep(format!("{label} x[{i}][{j}]"), x.clone());
                }
            }
        }
    }
    Ok(())
}

fn digit_ring(cfg: &SuiteConfig, ctx: &mut Ctx) -> Result<()> {
    let f = cfg.field;
    let p = f.p();
    let den = f.lattice_den();
    let range = cfg.range.unwrap_or((p as u64).pow(3));
    let one = RationalFunction::one(f);
    let mono = |i: u64| DigitPolynomial::monomial(CoeffRing::Constants, i, one.clone());

    let mut bad = None;
    'outer: for i in 0..range {
        for j in 0..range {
            let (a, b) = (mono(i)?, mono(j)?);
            let lhs = a.phi_to_mu().mul(&b.phi_to_mu()).reduce_mod_p()?;
            if lhs != a.multiply(&b)?.phi_to_mu() || lhs != mono(i + j)?.phi_to_mu() {
                bad = Some((i, j));
                break 'outer;
            }
        }
    }
    let mut c = Check::flag(format!("φ(Z^i)φ(Z^j) ≡ φ(Z^(i+j)) mod P for 0 ≤ i,j < {range}"), bad.is_none(), None, den);
    if let Some((i, j)) = bad {
        c = c.with_detail(format!("fails at i={i}, j={j}"));
    }
    ctx.check(c);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut idempotent = true;
    let mut weight_kept = true;
    for _ in 0..1000 {
        let row: Vec<u32> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(0..3 * p)).collect();
        let weight = from_digits_weighted(&row, p);
        let m = MuPolynomial::monomial(1, vec![row], one.clone());
        let r = m.reduce_mod_p()?;
        idempotent &= r.reduce_mod_p()? == r;
        weight_kept &= r.terms().all(|(t, _)| from_digits_weighted(&t[0], p) == weight);
    }
    ctx.check(Check::flag("reduce_mod_P is idempotent on 1000 random monomials", idempotent, None, den));
    ctx.check(Check::flag("reduce_mod_P preserves Σ e_j p^j on 1000 random monomials", weight_kept, None, den));

    // R⟨Y⟩ → R[Z] → R⟨Y⟩, with products compared against plain index addition
    let ring_elem = |rng: &mut ChaCha8Rng| -> Result<DigitPolynomial> {
        let mut x = DigitPolynomial::zero(f, CoeffRing::RationalFunctions);
        for _ in 0..rng.gen_range(1..=6) {
            let c = RationalFunction::from_poly(Poly::parse(f, ["1", "2", "t1", "t1 + 1", "θ*t1"][rng.gen_range(0..5)])?);
            x = x.add(&DigitPolynomial::monomial(CoeffRing::RationalFunctions, rng.gen_range(0..=20), c)?)?;
        }
        Ok(x)
    };
    let mut round_trip = true;
    let mut products = true;
    for _ in 0..200 {
        let (a, b) = (ring_elem(&mut rng)?, ring_elem(&mut rng)?);
        round_trip &= DigitPolynomial::from_rz(f, CoeffRing::RationalFunctions, &a.to_rz())? == a;
        let mut rz = std::collections::BTreeMap::new();
        for (i, x) in a.to_rz() {
            for (j, y) in b.to_rz() {
                let e: &mut RationalFunction = rz.entry(i + j).or_insert_with(|| RationalFunction::constant(f, Fe::ZERO));
                *e = e.add(&x.mul(&y));
            }
        }
        rz.retain(|_, c| !c.is_zero());
        products &= a.multiply(&b)?.to_rz() == rz;
    }
    ctx.check(Check::flag("R<Y> -> R[Z] -> R<Y> round trip on 200 random elements", round_trip, None, den));
    ctx.check(Check::flag("carry product agrees with R[Z] on 200 random pairs", products, None, den));
    let carries = (0..range).all(|i| (0..range).all(|j| from_digits(&carry_add(&digits(i, p), &digits(j, p), p), p) == i + j));
    ctx.check(Check::flag("digit carries reproduce integer addition", carries, None, den));

    // evaluation is unchanged by the normal form on constants, where c^p = μ(c)
    let mut eval_ok = true;
    for text in ["X1^4", "X1^3 + X1", "2*X1^5 + m(X1)^4", "X1^9"] {
        let pm = MuPolynomial::parse(f, 1, text)?;
        let r = pm.reduce_mod_p()?;
        for c in f.elements() {
            let x = TateElement::from_series(0, LaurentSeries::constant(f, c));
            eval_ok &= pm.evaluate(&[x.clone()], den)?.eq_mod(&r.evaluate(&[x], den)?, den);
        }
    }
    ctx.check(Check::flag("P(c) = reduce_mod_P(P)(c) for all constants c", eval_ok, None, den));
    Ok(())
}

fn from_digits_weighted(row: &[u32], p: u32) -> u64 {
    row.iter().rev().fold(0u64, |acc, &e| acc * p as u64 + e as u64)
}

fn mu_poly(cfg: &SuiteConfig, ctx: &mut Ctx) -> Result<()> {
    let (f, n) = (cfg.field, cfg.precision);
    let (e, p, den) = (f.e() as usize, f.p(), f.lattice_den());
    let tau_sym = if e == 1 { "m(X1)".to_string() } else { format!("m{e}(X1)") };
    let rel = MuPolynomial::parse(f, 1, &format!("{tau_sym} - (t1 - θ) * X1"))?;
    let class = rel.classify()?;
    ctx.check(Check::flag(format!("{rel} is Tame (got {class:?})"), class == Classification::Tame, None, den));
    let w = omega(f, 1, 1, n + den)?;
    let at_w = rel.evaluate(&[w.clone()], n)?;
    ctx.check(Check::tate_zero(format!("({rel})(ω) = 0"), &at_w, n));
    let tw = rel.twist_coefficients().evaluate(&[w.mu(1)], n)?;
    ctx.check(Check::tate_zero("Z(P^μ) = μ(Z(P)) at ω", &tw, n));
    let sh = rel.shift().evaluate(&[w.clone()], n)?;
    ctx.check(Check::tate_zero("Z(μ(P)) = Z(P) at ω", &sh, n));

    let crit = MuPolynomial::parse(f, 1, &format!("m(X1) - X1^{p}"))?;
    let cc = crit.classify()?;
    ctx.check(Check::flag(format!("{crit} is CriticalCandidate (got {cc:?})"), cc == Classification::CriticalCandidate, None, den));
    let mut consts = true;
    for c in f.elements() {
        let x = TateElement::from_series(0, LaurentSeries::constant(f, c));
        consts &= crit.evaluate(&[x.clone()], n)?.is_zero();
        consts &= crit.twist_coefficients().evaluate(&[x.mu(1)], n)?.is_zero();
    }
    ctx.check(Check::flag(format!("{crit} vanishes on every constant, as does its twist at μ(c)"), consts, Some(n), den));

    let depth0 = MuPolynomial::parse(f, 1, "X1^2 + θ*X1 + 1")?;
    ctx.check(Check::flag(
        "X1^2 + θX1 + 1 is RegularByDepthZero",
        depth0.classify()? == Classification::RegularByDepthZero,
        None,
        den,
    ));

    // torsion: C_θ(X) = θX + τ(X) vanishes at λ_θ, its twist at μ(λ_θ)
    let carlitz_theta = MuPolynomial::parse(f, 1, &format!("θ * X1 + {tau_sym}"))?;
    let lam = torsion_point(&Poly::theta(f), 0, 1, n + den + f.q() as i64)?;
    ctx.check(Check::tate_zero("C_θ(λ_θ) = 0 as a μ-polynomial", &carlitz_theta.evaluate(&[lam.clone()], n)?, n));
    ctx.check(Check::tate_zero(
        "twisted C_θ vanishes at μ(λ_θ)",
        &carlitz_theta.twist_coefficients().evaluate(&[lam.mu(1)], n)?,
        n,
    ));
    for (name, x) in [("tame at omega", at_w), ("twist at mu(omega)", tw)] {
        ctx.keep(name, x);
    }
    Ok(())
}

/// Runs a suite at `N` and `N + extra` and compares every kept value below `N`.
pub fn precision_meta(name: &str, cfg: &SuiteConfig, extra: i64) -> Result<Check> {
    let base = run_suite(name, cfg)?;
    let mut bigger = cfg.clone();
    bigger.precision += extra;
    let more = run_suite(name, &bigger)?;
    let den = cfg.field.lattice_den();
    if base.artifacts.len() != more.artifacts.len() {
        return Ok(Check::flag(format!("{name}: same values at N and N+{extra}"), false, Some(cfg.precision), den));
    }
    for (a, b) in base.artifacts.iter().zip(&more.artifacts) {
        let m = a.value.precision().map_or(cfg.precision, |p| p.min(cfg.precision));
        let ja = serde_json::to_string(&a.value.truncate(m).to_json()).expect("json");
        let jb = serde_json::to_string(&b.value.truncate(m).to_json()).expect("json");
        if a.name != b.name || ja != jb {
            let d = a.value.first_discrepancy(&b.value, m);
            let mut c = Check::new(format!("{name}: {} identical below N at N+{extra}", a.name), Status::Failed, Some(m), den);
            c.first_discrepant_exponent = d.map(|k| crate::laurent::lattice_fraction(k, den));
            return Ok(c);
        }
    }
    let status = if base.report.status == more.report.status { Status::Verified } else { Status::Failed };
    Ok(Check::new(
        format!("{name}: {} values identical below N at N+{extra}", base.artifacts.len()),
        status,
        Some(cfg.precision),
        den,
    ))
}
