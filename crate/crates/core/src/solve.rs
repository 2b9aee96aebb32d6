//! Solutions of `τ^{-1}(x) = x + g` in `𝕋_1` built from `exp_C`, `log_C`
//! and `ω`, and the triangular polylogarithm system solved with them.
//!
//! Equations are checked in the twisted form `τ(x) = x - τ(g)`, which keeps
//! every series on the `1/(q-1)` lattice.

use rayon::prelude::*;
use serde::Serialize;

use crate::carlitz::{exp_carlitz, log_carlitz};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::laurent::precision_string;
use crate::poly::{Poly, RationalFunction};
use crate::report::{Check, Status};
use crate::special::{capital_omega, omega};
use crate::tate::{expand_inverse_monic, expand_rational_tate, TateElement, TateJson};

#[derive(Clone, Debug)]
pub struct SolveReport {
    /// A particular solution; the full solution set is `x + 𝔽_q(t)`.
    pub x: TateElement,
    /// The `log_C` preimage `v` with `exp_C(v) = -τ(g)(t-θ)ω`.
    pub v: TateElement,
    pub precision: i64,
    pub status: Status,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveJson {
    pub solution: TateJson,
    pub precision: String,
    pub status: Status,
    pub v: TateJson,
    pub steps: Vec<Check>,
}

impl SolveReport {
    pub fn to_json(&self) -> SolveJson {
        SolveJson {
            solution: self.x.to_json(),
            precision: precision_string(Some(self.precision), self.x.field().lattice_den()),
            status: self.status,
            v: self.v.to_json(),
            steps: self.checks.clone(),
        }
    }
}

fn theta_minus_t(field: &'static Field) -> Result<Poly> {
    Ok(Poly::theta(field).sub(&Poly::t(field, 1)?))
}

/// Solves `τ^{-1}(x) = x + g` for `g ∈ 𝕋_1`, exact below lattice index `n`.
pub fn solve_tau_inverse(g: &TateElement, n: i64) -> Result<SolveReport> {
    if g.s() != 1 {
        return Err(Error::TooManyVariables { max: 1, got: g.s() });
    }
    solve_twisted(&g.tau(), n)
}

/// As [`solve_tau_inverse`], given `τ(g)` instead of `g`.
pub fn solve_twisted(tg: &TateElement, n: i64) -> Result<SolveReport> {
    let field = tg.field();
    let q = field.q() as i64;
    let den = field.lattice_den();
    let vt = match tg.valuation() {
        None => {
            let m = tg.precision().map_or(n, |p| p.min(n));
            let x = TateElement::zero_at(field, 1, m);
            let checks = vec![Check::new("homogeneous case: x = 0", Status::Verified, Some(m), den)];
            return Ok(SolveReport { v: x.clone(), x, precision: m, status: Status::Verified, checks });
        }
        Some(v) => v,
    };
    if vt <= 0 {
        return Err(Error::OutOfConstructiveRange);
    }
    let n_e = n - 1;
    let n_v = n_e - den;
    if tg.precision().is_some_and(|p| p < n_v + q) {
        return Err(Error::InsufficientPrecision {
            required: precision_string(Some(n_v + q), den),
            available: precision_string(tg.precision(), den),
        });
    }

    let tmt = TateElement::from_poly(&theta_minus_t(field)?, 1)?;
    let w = omega(field, 1, 1, n_v - vt + den)?;
    let tw = tmt.neg().mul(&w);
    let arg = tg.mul_capped(&tw, Some(n_v)).neg();
    let v = log_carlitz(&arg, n_v)?;
    let vv = v.valuation().unwrap_or(n_v);
    let inv = expand_inverse_monic(&theta_minus_t(field)?, 1, n_e - vv)?;
    let e = exp_carlitz(&v.mul_capped(&inv, Some(n_e)), n_e)?;
    let x = match e.valuation() {
        Some(ve) => e.mul_capped(&omega(field, 1, 1, (n - ve - 2).max(1))?.invert_to(n - ve)?, Some(n)),
        None => TateElement::zero_at(field, 1, n),
    };

    let exp_v = exp_carlitz(&v, n_v)?;
    let m = tg.precision().map_or(n, |p| p.min(n));
    let checks = vec![
        Check::tate_eq("exp_C(v) = -τ(g)(t-θ)ω", &exp_v, &arg, n_v),
        omega_step(field, &tmt, n_v)?,
        Check::tate_eq("τ(E) + (θ-t)E = exp_C(v)", &e.tau().add(&tmt.mul(&e)), &exp_v, n_v),
        Check::tate_eq("τ(x) = x - τ(g)", &x.tau(), &x.sub(tg), m),
    ];
    let status = checks.iter().fold(Status::Verified, |s, c| s.combine(c.status));
    Ok(SolveReport { x, v, precision: m, status, checks })
}

fn omega_step(field: &'static Field, tmt: &TateElement, n: i64) -> Result<Check> {
    let w = omega(field, 1, 1, n + field.lattice_den())?;
    Ok(Check::tate_eq("τ(ω) = (t-θ)ω", &w.tau(), &tmt.neg().mul(&w), n))
}

/// Entries `x_{i,j}` (`0 ≤ j ≤ i ≤ d`) of the triangular system.
#[derive(Clone, Debug)]
pub struct PolylogSolution {
    pub depths: Vec<u32>,
    pub x: Vec<Vec<Option<TateElement>>>,
    pub checks: Vec<Check>,
    /// The first `(i, j)` whose forcing term left the constructive range.
    pub failure: Option<(usize, usize, String)>,
}

impl PolylogSolution {
    pub fn status(&self) -> Status {
        let s = self.checks.iter().fold(Status::Verified, |s, c| s.combine(c.status));
        if self.failure.is_some() {
            s.combine(Status::Failed)
        } else {
            s
        }
    }
}

/// Solves `τ^{-1}(y_{i,j}) = τ^{-1}(Q_i)((t-θ)Ω)^{s_i} y_{i-1,j} + y_{i,j}`
/// with `y_{j,j} = 1`, then forms `x_{i,j} = y_{i,j}Ω^{s_{i+1}+⋯+s_d}`.
pub fn solve_polylog_system(field: &'static Field, depths: &[u32], qs: &[RationalFunction], n: i64) -> Result<PolylogSolution> {
    let d = depths.len();
    if d == 0 || qs.len() != d {
        return Err(Error::InvalidParameter("need d ≥ 1 depths and as many coefficients".into()));
    }
    let q = field.q() as i64;
    let den = field.lattice_den();
    let work = n + q + den;
    // S[i] = s_i + ⋯ + s_d, 1-based, S[d+1] = 0
    let mut tail = vec![0u32; d + 2];
    for i in (1..=d).rev() {
        tail[i] = tail[i + 1] + depths[i - 1];
    }
    let big = capital_omega(field, work + q)?;
    let big_pow = |e: u32| big.pow(e as u64).truncate(work);
    let coeffs: Vec<TateElement> = qs.iter().map(|r| expand_rational_tate(r, 1, work)).collect::<Result<_>>()?;

    let columns: Vec<(Vec<Option<TateElement>>, Vec<Check>, Option<(usize, usize, String)>)> = (0..=d)
        .into_par_iter()
        .map(|j| -> Result<_> {
            let mut ys: Vec<Option<TateElement>> = vec![None; d + 1];
            ys[j] = Some(TateElement::one(field, 1));
            let mut checks = Vec::new();
            let mut failure = None;
            for i in j + 1..=d {
                let prev = ys[i - 1].as_ref().expect("solved");
                let tg = coeffs[i - 1].mul_capped(&big_pow(depths[i - 1]), Some(work)).mul_capped(&prev.tau(), Some(work));
                match solve_twisted(&tg, n) {
                    Ok(rep) => {
                        let status = rep.status;
                        checks.push(Check::new(format!("solve y[{i}][{j}]"), status, Some(rep.precision), den));
                        ys[i] = Some(rep.x);
                    }
                    Err(e @ (Error::OutOfConstructiveRange | Error::OutsideLogDomain)) => {
                        failure = Some((i, j, e.to_string()));
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            let xs = ys
                .iter()
                .enumerate()
                .map(|(i, y)| y.as_ref().map(|y| y.mul_capped(&big_pow(tail[i + 1]), Some(n))))
                .collect();
            Ok((xs, checks, failure))
        })
        .collect::<Result<_>>()?;

    let mut x = vec![vec![None; d + 1]; d + 1];
    let mut checks = Vec::new();
    let mut failure = None;
    for (j, (xs, cs, f)) in columns.into_iter().enumerate() {
        for (i, v) in xs.into_iter().enumerate() {
            x[i][j] = v;
        }
        checks.extend(cs);
        if failure.is_none() {
            failure = f;
        }
    }

    let lin = TateElement::from_poly(&Poly::t(field, 1)?.sub(&Poly::theta(field).pow(q as u32)), 1)?;
    for j in 0..=d {
        for i in j..=d {
            let Some(xij) = &x[i][j] else { continue };
            let mut rhs = lin.pow(tail[i + 1] as u64).mul(&xij.tau());
            let name = if i == j {
                format!("x[{i}][{i}] = (t-θ^q)^{} τ(x[{i}][{i}])", tail[i + 1])
            } else {
                let Some(prev) = &x[i - 1][j] else { continue };
                rhs = rhs.add(&coeffs[i - 1].mul(&lin.pow(tail[i] as u64)).mul_capped(&prev.tau(), Some(work)));
                format!("x[{i}][{j}] = Q_{i} (t-θ^q)^{} τ(x[{}][{j}]) + (t-θ^q)^{} τ(x[{i}][{j}])", tail[i], i - 1, tail[i + 1])
            };
            checks.push(Check::tate_eq(name, xij, &rhs, n));
        }
    }
    Ok(PolylogSolution { depths: depths.to_vec(), x, checks, failure })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> &'static Field {
        Field::get(3, 1).unwrap()
    }

    #[test]
    fn zero_forcing_gives_zero() {
        let r = solve_tau_inverse(&TateElement::zero(f3(), 1), 20).unwrap();
        assert!(r.x.is_zero());
        assert_eq!(r.status, Status::Verified);
    }

    #[test]
    fn theta_power_forcing() {
        let f = f3();
        let g = TateElement::from_poly(&Poly::parse(f, "θ^2").unwrap(), 1).unwrap();
        let g = g.invert().unwrap();
        let r = solve_tau_inverse(&g, 24).unwrap();
        assert_eq!(r.status, Status::Verified, "{:?}", r.checks);
        assert!(r.x.tau().eq_mod(&r.x.sub(&g.tau()), 24));
    }

    #[test]
    fn forcing_outside_the_disk_is_refused() {
        let f = f3();
        let g = TateElement::from_poly(&Poly::parse(f, "θ").unwrap(), 1).unwrap();
        assert!(matches!(solve_tau_inverse(&g, 20), Err(Error::OutOfConstructiveRange)));
    }

    #[test]
    fn depth_two_system() {
        let f = f3();
        let one = RationalFunction::one(f);
        let sol = solve_polylog_system(f, &[1, 1], &[one.clone(), one], 24).unwrap();
        assert!(sol.failure.is_none());
        assert_eq!(sol.status(), Status::Verified, "{:?}", sol.checks);
        assert_eq!(sol.checks.iter().filter(|c| c.name.starts_with("x[")).count(), 6);
    }
}
