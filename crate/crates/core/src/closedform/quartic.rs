//! Sums of polynomials that split into linear factors over F_p, reduced to
//! the Legendre form `F_beta = x(x - 1)(x - beta)`.

use serde::{Deserialize, Serialize};

use super::elementary::{eval_constant, eval_linear, eval_quadratic};
use crate::algebra::{legendre_residue, roots_in_fp, FpPolynomial, OddPrime};
use crate::error::{Error, Result};
use crate::hasse::legendre_form_sum;
use crate::value::{Method, SumValue};

/// Cross-ratio data of `prod (x + a_i)` with distinct `a_i`.
///
/// `S(prod (x + a_i)) = -1 + (alpha|p) S(F_beta)`; the sum does not depend on
/// the ordering of the `a_i`, although `(alpha, beta)` does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuarticReduction {
    pub shifts: [u64; 4],
    pub alpha: u64,
    pub beta: u64,
}

impl QuarticReduction {
    pub fn new(shifts: [u64; 4], p: OddPrime) -> Result<Self> {
        let [a1, a2, a3, a4] = shifts.map(|a| a % p.get());
        let alpha = p.mul(p.sub(a1, a4), p.sub(a2, a3));
        let inv = p.inv(alpha).ok_or_else(|| Error::Degenerate("repeated root".into()))?;
        let beta = p.mul(p.mul(p.sub(a1, a3), p.sub(a2, a4)), inv);
        if beta == 0 || beta == 1 {
            return Err(Error::Degenerate("repeated root".into()));
        }
        Ok(QuarticReduction { shifts: [a1, a2, a3, a4], alpha, beta })
    }

    /// Reduction for the roots taken in ascending order of `a_i`.
    pub fn canonical(shifts: [u64; 4], p: OddPrime) -> Result<Self> {
        let mut s = shifts.map(|a| a % p.get());
        s.sort_unstable();
        Self::new(s, p)
    }

    pub fn sum(&self, p: OddPrime) -> Result<SumValue> {
        let sf = legendre_form_sum(self.beta, p)?;
        let chi = legendre_residue(self.alpha, p) as i64;
        Ok(SumValue::exact(-1 + chi * sf.value, Method::QuarticReduction)
            .with_part("alpha", self.alpha as i64, Method::QuarticReduction)
            .with_part("beta", self.beta as i64, Method::QuarticReduction)
            .with_part("S(F_beta)", sf.value, sf.method))
    }
}

/// `S(c (x - r1)(x - r2)(x - r3))` for distinct roots: the substitution
/// `x = r1 + (r2 - r1) t` gives `(c (r2 - r1) | p) S(F_beta)` with
/// `beta = (r3 - r1) / (r2 - r1)`.
pub fn split_cubic_sum(lead: u64, roots: [u64; 3], p: OddPrime) -> Result<SumValue> {
    let [r1, r2, r3] = roots;
    let d = p.sub(r2, r1);
    let inv = p.inv(d).ok_or_else(|| Error::Degenerate("repeated root".into()))?;
    let beta = p.mul(p.sub(r3, r1), inv);
    let sf = legendre_form_sum(beta, p)?;
    let chi = legendre_residue(p.mul(lead, d), p) as i64;
    Ok(SumValue::exact(chi * sf.value, Method::LegendreCubic)
        .with_part("beta", beta as i64, Method::LegendreCubic)
        .with_part("S(F_beta)", sf.value, sf.method))
}

/// Sum for `lead * prod (x - r)` over the given roots (with multiplicity),
/// `deg <= 4`. Square factors are stripped: with `h` the product over roots
/// of odd multiplicity, `S = S(h) - sum chi(h(r))` over roots of even
/// multiplicity.
pub fn split_sum(lead: u64, roots: &[u64], p: OddPrime) -> Result<SumValue> {
    if roots.len() > 4 {
        return Err(Error::NotApplicable("more than four roots".into()));
    }
    let mut distinct: Vec<(u64, usize)> = Vec::new();
    for &r in roots {
        match distinct.iter_mut().find(|(s, _)| *s == r) {
            Some(e) => e.1 += 1,
            None => distinct.push((r, 1)),
        }
    }
    let odd: Vec<u64> = distinct.iter().filter(|(_, m)| m % 2 == 1).map(|&(r, _)| r).collect();
    let even: Vec<u64> = distinct.iter().filter(|(_, m)| m % 2 == 0).map(|&(r, _)| r).collect();
    let base = squarefree_split_sum(lead, &odd, p)?;
    if even.is_empty() {
        return Ok(base);
    }
    let h = FpPolynomial::from_roots(p, &odd).scale(lead);
    let correction: i64 = even.iter().map(|&r| legendre_residue(h.eval(r), p) as i64).sum();
    Ok(SumValue::exact(base.value - correction, Method::SquareFactor)
        .with_part("S(h)", base.value, base.method)
        .with_part("correction", -correction, Method::SquareFactor))
}

fn squarefree_split_sum(lead: u64, roots: &[u64], p: OddPrime) -> Result<SumValue> {
    let c = lead as i64;
    let neg = |r: u64| p.neg(r) as i64;
    match *roots {
        [] => Ok(eval_constant(c, p)),
        [r] => Ok(eval_linear(c, p.mul(lead, p.neg(r)) as i64, p)),
        [r1, r2] => {
            let b = p.mul(lead, p.add(p.neg(r1), p.neg(r2)));
            let cc = p.mul(lead, p.mul(r1, r2));
            Ok(eval_quadratic(c, b as i64, cc as i64, p))
        }
        [r1, r2, r3] => split_cubic_sum(lead, [r1, r2, r3], p),
        [r1, r2, r3, r4] => {
            let red = QuarticReduction::new([neg(r1) as u64, neg(r2) as u64, neg(r3) as u64, neg(r4) as u64], p)?;
            let s = red.sum(p)?;
            let chi = legendre_residue(lead, p) as i64;
            Ok(SumValue { value: chi * s.value, ..s })
        }
        _ => Err(Error::NotApplicable("more than four roots".into())),
    }
}

/// Closed form for a polynomial of degree at most 4 splitting over F_p,
/// including repeated roots. `NotSplit` otherwise.
pub fn quartic_reduce(f: &FpPolynomial) -> Result<SumValue> {
    let p = f.modulus();
    let deg = f.degree().ok_or(Error::ZeroPolynomial("root set"))?;
    if deg > 4 {
        return Err(Error::NotApplicable(format!("degree {deg} > 4")));
    }
    let roots = roots_in_fp(f)?;
    if roots.len() != deg {
        return Err(Error::NotSplit);
    }
    let lead = f.leading().expect("nonzero");
    let v = split_sum(lead, &roots, p)?;
    if deg == 4 && v.method != Method::SquareFactor {
        Ok(SumValue { method: Method::QuarticReduction, ..v })
    } else {
        Ok(v)
    }
}

/// An alternative reduction:
/// `alpha = (a1 - a3)(a3 - a2)`, `beta = a3 (a2 - a4) / ((a1 - a4)(a2 - a3))`
/// and `S = -1 - (alpha|p) lift(H(beta))`. Kept only to measure how often it
/// disagrees; `None` when its `beta` is degenerate.
pub fn alternative_reduction(shifts: [u64; 4], p: OddPrime) -> Option<i64> {
    let [a1, a2, a3, a4] = shifts.map(|a| a % p.get());
    let alpha = p.mul(p.sub(a1, a3), p.sub(a3, a2));
    let den = p.inv(p.mul(p.sub(a1, a4), p.sub(a2, a3)))?;
    let beta = p.mul(p.mul(a3, p.sub(a2, a4)), den);
    if beta == 0 || beta == 1 {
        return None;
    }
    let lift = -legendre_form_sum(beta, p).ok()?.value;
    Some(-1 - legendre_residue(alpha, p) as i64 * lift)
}
