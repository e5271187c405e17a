//! Jacobsthal-type sums `phi_k(a) = sum chi(x) chi(x^k + a)` and
//! `psi_k(a) = sum chi(x^k + a)` through binomial congruences.
//!
//! With `p = 2kf + 1`, expanding `(x^k + a)^((p-1)/2)` and summing powers of
//! `x` leaves only exponents divisible by `p - 1`. The value is certified mod
//! `p`; it is lifted to an integer only when the Weil bound places it inside
//! `(-p/2, p/2)`.

use serde::{Deserialize, Serialize};

use crate::algebra::{gcd, OddPrime};
use crate::error::{Error, Result};
use crate::value::{Method, SumValue};

/// `k`, the cofactor `f` with `p = 2kf + 1`, and `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerSumParams {
    pub k: u64,
    pub f: u64,
    pub a: u64,
    pub p: OddPrime,
}

impl PowerSumParams {
    pub fn new(k: u64, a: i64, p: OddPrime) -> Result<Self> {
        check_k_a(k, a, p)?;
        if (p.get() - 1) % (2 * k) != 0 {
            return Err(Error::NotApplicable(format!("p = {p} is not 2kf + 1 for k = {k}")));
        }
        Ok(PowerSumParams { k, f: (p.get() - 1) / (2 * k), a: p.reduce(a), p })
    }
}

fn check_k_a(k: u64, a: i64, p: OddPrime) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if p.reduce(a) == 0 {
        return Err(Error::Degenerate("a = 0 mod p".into()));
    }
    Ok(())
}

/// `C(kf, j f) mod p` for `j = 0..=k`, one inversion per step.
fn stepped_binomials(params: &PowerSumParams) -> Vec<u64> {
    let p = params.p;
    let top = params.k * params.f;
    let mut out = Vec::with_capacity(params.k as usize + 1);
    let mut cur = 1u64;
    out.push(cur);
    for j in 0..params.k {
        let (mut num, mut den) = (1u64, 1u64);
        for t in j * params.f..(j + 1) * params.f {
            num = p.mul(num, top - t);
            den = p.mul(den, t + 1);
        }
        cur = p.mul(cur, p.mul(num, p.inv(den).expect("t + 1 < p")));
        out.push(cur);
    }
    out
}

/// `(value mod p)` lifted when `bound^2 * 4 < p`, where `bound` is the
/// integer factor of the Weil bound `bound * sqrt(p)`.
fn certify(residue: u64, weil_factor: u64, p: OddPrime, method: Method) -> SumValue {
    let v = p.centered(residue);
    if 4 * weil_factor * weil_factor < p.get() {
        SumValue::exact(v, method)
    } else {
        SumValue::residue(v, method).with_note(format!("|value| <= {weil_factor} sqrt(p) does not pin the lift"))
    }
}

/// `psi_k(a)`: exactly 0 when `gcd(k, p - 1) = 1`; otherwise, for
/// `p = 2kf + 1`, `-sum_{i=1}^{k/2} C(kf, 2fi) a^(f(k - 2i)) mod p`.
pub fn psi_closed(k: u64, a: i64, p: OddPrime) -> Result<SumValue> {
    check_k_a(k, a, p)?;
    if gcd(k, p.get() - 1) == 1 {
        return Ok(SumValue::exact(0, Method::PsiBijection));
    }
    let prm = PowerSumParams::new(k, a, p)?;
    let c = stepped_binomials(&prm);
    let mut s = 0u64;
    for i in 1..=k / 2 {
        let term = p.mul(c[(2 * i) as usize], p.pow(prm.a, prm.f * (k - 2 * i)));
        s = p.add(s, term);
    }
    Ok(certify(p.neg(s), k - 1, p, Method::PsiBinomial))
}

/// `phi_k(a)`: exactly 0 when `p = k + 1 (mod 2k)`; otherwise, for
/// `p = 2kf + 1`, `-sum_{i=1}^{(k+1)/2} C(kf, (2i - 1)f) a^(f(k - 2i + 1)) mod p`.
pub fn phi_closed(k: u64, a: i64, p: OddPrime) -> Result<SumValue> {
    check_k_a(k, a, p)?;
    if p.get() % (2 * k) == (k + 1) % (2 * k) {
        return Ok(SumValue::exact(0, Method::PhiVanishing));
    }
    let prm = PowerSumParams::new(k, a, p)?;
    let c = stepped_binomials(&prm);
    let mut s = 0u64;
    for i in 1..=(k + 1) / 2 {
        let term = p.mul(c[(2 * i - 1) as usize], p.pow(prm.a, prm.f * (k + 1 - 2 * i)));
        s = p.add(s, term);
    }
    Ok(certify(p.neg(s), k, p, Method::PhiBinomial))
}

/// `S(x^(2k) + a) = phi_k(a) + psi_k(a)`.
///
/// Exact when both parts are; otherwise the sum is lifted if
/// `(2k - 1) sqrt(p) < p/2`, and reported mod `p` if not.
pub fn eval_power_2k(k: u64, a: i64, p: OddPrime) -> Result<SumValue> {
    let phi = phi_closed(k, a, p)?;
    let psi = psi_closed(k, a, p)?;
    let total = phi.value + psi.value;
    let mut v = if !phi.residue_only && !psi.residue_only {
        SumValue::exact(total, Method::PowerSum2k)
    } else if 4 * (2 * k - 1) * (2 * k - 1) < p.get() {
        SumValue::exact(p.centered(p.reduce(total)), Method::PowerSum2k)
    } else {
        SumValue::residue(total, Method::PowerSum2k)
    };
    v = v.with_part("phi", phi.value, phi.method).with_part("psi", psi.value, psi.method);
    Ok(v)
}

/// `S(x^(2k) - a)`, through `eval_power_2k` with `-a`.
pub fn eval_power_2k_minus(k: u64, a: i64, p: OddPrime) -> Result<SumValue> {
    eval_power_2k(k, -a, p)
}
