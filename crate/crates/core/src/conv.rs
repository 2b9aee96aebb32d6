//! Dense truncated convolution over 𝔽_{q²}.
//!
//! Each operand is split into its 𝔽_p coordinate planes, the planes are
//! convolved as plain integer sequences with `u64` accumulators, and the
//! result is folded back through the modulus. Series with 𝔽_p
//! coefficients touch a single plane.

use crate::field::{Fe, Field};

fn planes(field: &Field, a: &[Fe]) -> Vec<Option<Vec<u32>>> {
    let n = 2 * field.e() as usize;
    let p = field.p();
    let mut out: Vec<Vec<u32>> = vec![vec![0; a.len()]; n];
    let mut used = vec![false; n];
    for (k, x) in a.iter().enumerate() {
        let mut v = x.0 as u32;
        let mut i = 0;
        while v > 0 {
            let d = v % p;
            if d != 0 {
                out[i][k] = d;
                used[i] = true;
            }
            v /= p;
            i += 1;
        }
    }
    out.into_iter().zip(used).map(|(pl, u)| u.then_some(pl)).collect()
}

/// First `len` coefficients of the product of `a` and `b`.
pub(crate) fn convolve(field: &Field, a: &[Fe], b: &[Fe], len: usize) -> Vec<Fe> {
    if a.is_empty() || b.is_empty() || len == 0 {
        return vec![Fe::ZERO; len];
    }
    let n = 2 * field.e() as usize;
    let p = field.p() as u64;
    let pa = planes(field, a);
    let pb = planes(field, b);
    let mut acc: Vec<Option<Vec<u64>>> = vec![None; 2 * n - 1];
    for (i, ai) in pa.iter().enumerate() {
        let Some(ai) = ai else { continue };
        for (j, bj) in pb.iter().enumerate() {
            let Some(bj) = bj else { continue };
            let r = acc[i + j].get_or_insert_with(|| vec![0u64; len]);
            for (x, &av) in ai.iter().enumerate().take(len) {
                if av == 0 {
                    continue;
                }
                let av = av as u64;
                let lim = (len - x).min(bj.len());
                for (slot, &bv) in r[x..x + lim].iter_mut().zip(&bj[..lim]) {
                    *slot += av * bv as u64;
                }
            }
        }
    }
    let mut red: Vec<Vec<u64>> = acc
        .into_iter()
        .map(|pl| pl.map(|v| v.into_iter().map(|c| c % p).collect()).unwrap_or_default())
        .collect();
    let m = field.modulus();
    for k in (n..2 * n - 1).rev() {
        if red[k].is_empty() {
            continue;
        }
        let top = std::mem::take(&mut red[k]);
        for i in 0..n {
            let mi = m[i] as u64;
            if mi == 0 {
                continue;
            }
            let target = &mut red[k - n + i];
            if target.is_empty() {
                *target = vec![0; len];
            }
            for (t, &c) in target.iter_mut().zip(&top) {
                *t = (*t + (p - mi) * c) % p;
            }
        }
    }
    let mut out = vec![0u64; len];
    for i in (0..n).rev() {
        if red[i].is_empty() {
            for o in out.iter_mut() {
                *o *= p;
            }
        } else {
            for (o, &c) in out.iter_mut().zip(&red[i]) {
                *o = *o * p + c;
            }
        }
    }
    out.into_iter().map(|x| Fe(x as u8)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(field: &Field, a: &[Fe], b: &[Fe], len: usize) -> Vec<Fe> {
        let mut out = vec![Fe::ZERO; len];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                if i + j < len {
                    out[i + j] = field.add(out[i + j], field.mul(x, y));
                }
            }
        }
        out
    }

    #[test]
    fn matches_table_convolution() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (p, e) in [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (7, 1)] {
            let f = Field::get(p, e).unwrap();
            for _ in 0..20 {
                let la = rng.gen_range(1..30);
                let lb = rng.gen_range(1..30);
                let a: Vec<Fe> = (0..la).map(|_| Fe(rng.gen_range(0..f.order()) as u8)).collect();
                let b: Vec<Fe> = (0..lb).map(|_| Fe(rng.gen_range(0..f.order()) as u8)).collect();
                let len = rng.gen_range(1..la + lb);
                assert_eq!(convolve(f, &a, &b, len), naive(f, &a, &b, len));
            }
        }
    }
}
