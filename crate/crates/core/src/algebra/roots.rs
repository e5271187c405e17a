//! Root extraction over F_p through Frobenius gcds and equal-degree splitting.
//!
//! The squarefree product of the linear factors of `f` is
//! `gcd(f, x^p - x)`, computed with `x^p mod f` by repeated squaring. That
//! product is split with random shifts `gcd(g, (x + d)^((p-1)/2) - 1)`; the
//! shifts come from a seeded ChaCha stream, so results never depend on global
//! state. Nothing here scans F_p.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::FpPolynomial;
use crate::error::{Error, Result};

/// Default seed for the randomized splitting step.
pub const DEFAULT_SPLIT_SEED: u64 = 0x5eed_c0de_2011_0003;

/// All roots of `f` in F_p with multiplicity, ascending.
pub fn roots_in_fp(f: &FpPolynomial) -> Result<Vec<u64>> {
    roots_in_fp_seeded(f, DEFAULT_SPLIT_SEED)
}

pub fn roots_in_fp_seeded(f: &FpPolynomial, seed: u64) -> Result<Vec<u64>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("finite root set"));
    }
    let distinct = distinct_roots(f, seed)?;
    let mut out = Vec::new();
    for r in distinct {
        let lin = FpPolynomial::from_roots(f.modulus(), &[r]);
        let mut g = f.clone();
        loop {
            let (q, rem) = g.div_rem(&lin)?;
            if !rem.is_zero() {
                break;
            }
            out.push(r);
            g = q;
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Distinct roots of `f` in F_p, ascending.
pub fn distinct_roots(f: &FpPolynomial, seed: u64) -> Result<Vec<u64>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("finite root set"));
    }
    let g = linear_part(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut roots = Vec::new();
    split_linear(&g, &mut rng, &mut roots)?;
    roots.sort_unstable();
    Ok(roots)
}

/// `gcd(f, x^p - x)`: the product of the distinct linear factors of `f`.
pub fn linear_part(f: &FpPolynomial) -> Result<FpPolynomial> {
    frobenius_gcd(f, 1)
}

/// `gcd(f, x^(p^k) - x)` for `k >= 1`, via `k` successive `p`-th powers of
/// `x` modulo `f`.
pub fn frobenius_gcd(f: &FpPolynomial, k: u32) -> Result<FpPolynomial> {
    let p = f.modulus();
    let fm = f.monic()?;
    if fm.degree() == Some(0) {
        return Ok(fm);
    }
    let x = FpPolynomial::x(p);
    let mut xq = x.rem(&fm)?;
    for _ in 0..k {
        xq = FpPolynomial::pow_mod(&xq, p.get(), &fm)?;
    }
    Ok(fm.gcd(&(&xq - &x)))
}

fn split_linear(g: &FpPolynomial, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) -> Result<()> {
    let p = g.modulus();
    match g.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            let m = g.monic()?;
            out.push(p.neg(m.coeff(0)));
            return Ok(());
        }
        _ => {}
    }
    let one = FpPolynomial::one(p);
    loop {
        let shift = rng.gen_range(0..p.get());
        let base = FpPolynomial::new(p, vec![shift, 1]);
        let w = FpPolynomial::pow_mod(&base, p.half(), g)?;
        let d = g.gcd(&(&w - &one));
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && Some(dd) < g.degree() {
            let (other, _) = g.div_rem(&d)?;
            split_linear(&d, rng, out)?;
            split_linear(&other, rng, out)?;
            return Ok(());
        }
    }
}
