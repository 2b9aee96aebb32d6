//! Shared inputs for the criterion benchmarks.

use carlitz_core::special::{capital_omega, omega, pi_bar};
use carlitz_core::{expand_inverse_monic, Field, Poly, Result, TateElement};

pub fn field(q: u32) -> &'static Field {
    Field::for_q(q).expect("supported q")
}

/// ω(t) and Ω(t) at lattice precision `n`.
pub fn omega_pair(f: &'static Field, n: i64) -> Result<(TateElement, TateElement)> {
    Ok((omega(f, 1, 1, n)?, capital_omega(f, n)?))
}

/// π̃/(θ - t), the argument whose exponential is the Anderson–Thakur function.
pub fn exp_argument(f: &'static Field, n: i64) -> Result<TateElement> {
    let inv = expand_inverse_monic(&Poly::parse(f, "θ - t1")?, 1, n + f.q() as i64)?;
    Ok(TateElement::from_series(1, pi_bar(f, n)?).mul_capped(&inv, Some(n)))
}
