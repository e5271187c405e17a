//! The polynomial families: nine CM cubics `f_n`, their derived quartics and
//! sextics `g_n`, and the Legendre, Newton and Edwards forms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{cubic_discriminant_test, FpPolynomial, OddPrime};
use crate::cm::{check_discriminant, CM_DISCRIMINANTS};
use crate::error::{Error, Result};

/// `sign * prod(q^e) * a^a_pow * x^x_pow`, stored as written.
#[derive(Clone, Copy, Debug)]
struct Term {
    x_pow: usize,
    sign: i8,
    factors: &'static [(u64, u32)],
    a_pow: u32,
}

const fn t(x_pow: usize, sign: i8, factors: &'static [(u64, u32)], a_pow: u32) -> Term {
    Term { x_pow, sign, factors, a_pow }
}

const LEAD: Term = t(3, 1, &[], 0);

const F1: &[Term] = &[LEAD, t(1, 1, &[], 1)];
const F2: &[Term] = &[LEAD, t(2, 1, &[(2, 2)], 1), t(1, 1, &[(2, 1)], 2)];
const F3: &[Term] = &[LEAD, t(0, 1, &[], 1)];
const F7: &[Term] = &[LEAD, t(2, 1, &[(3, 1), (7, 1)], 1), t(1, 1, &[(2, 4), (7, 1)], 2)];
const F11: &[Term] = &[LEAD, t(1, -1, &[(2, 5), (3, 1), (11, 1)], 2), t(0, 1, &[(2, 4), (7, 1), (11, 2)], 3)];
const F19: &[Term] = &[LEAD, t(1, -1, &[(2, 3), (19, 1)], 2), t(0, 1, &[(2, 1), (19, 2)], 3)];
const F43: &[Term] = &[LEAD, t(1, -1, &[(2, 4), (5, 1), (43, 1)], 2), t(0, 1, &[(2, 1), (3, 1), (7, 1), (43, 2)], 3)];
const F67: &[Term] = &[
    LEAD,
    t(1, -1, &[(2, 3), (5, 1), (11, 1), (67, 1)], 2),
    t(0, 1, &[(2, 1), (7, 1), (31, 1), (67, 2)], 3),
];
const F163: &[Term] = &[
    LEAD,
    t(1, -1, &[(2, 4), (5, 1), (23, 1), (29, 1), (163, 1)], 2),
    t(0, 1, &[(2, 1), (7, 1), (11, 1), (19, 1), (127, 1), (163, 2)], 3),
];

fn cubic_terms(n: u64) -> &'static [Term] {
    match n {
        1 => F1,
        2 => F2,
        3 => F3,
        7 => F7,
        11 => F11,
        19 => F19,
        43 => F43,
        67 => F67,
        163 => F163,
        _ => &[],
    }
}

/// Families whose cubic is `x` times a quadratic.
pub fn has_linear_factor(n: u64) -> bool {
    matches!(n, 1 | 2 | 7)
}

/// Integer coefficients of `f_n` for the parameter `a`, lowest degree first.
pub fn cubic_integer_coeffs(n: u64, a: i64) -> Result<Vec<i128>> {
    check_discriminant(n)?;
    let mut c = vec![0i128; 4];
    for term in cubic_terms(n) {
        let mut v = term.sign as i128;
        for &(q, e) in term.factors {
            v = v.checked_mul((q as i128).pow(e)).ok_or_else(|| Error::InvalidArgument("coefficient overflow".into()))?;
        }
        v = v
            .checked_mul((a as i128).checked_pow(term.a_pow).ok_or_else(|| Error::InvalidArgument("a too large".into()))?)
            .ok_or_else(|| Error::InvalidArgument("coefficient overflow".into()))?;
        c[term.x_pow] += v;
    }
    Ok(c)
}

fn cubic_mod_p(n: u64, a: i64, p: OddPrime) -> FpPolynomial {
    let mut c = vec![0u64; 4];
    let ar = p.reduce(a);
    for term in cubic_terms(n) {
        let mut v = if term.sign < 0 { p.get() - 1 } else { 1 };
        for &(q, e) in term.factors {
            v = p.mul(v, p.pow(q % p.get(), e as u64));
        }
        v = p.mul(v, p.pow(ar, term.a_pow as u64));
        c[term.x_pow] = p.add(c[term.x_pow], v);
    }
    FpPolynomial::new(p, c)
}

/// `p` does not divide `2an` nor the discriminant of `f_n`.
pub fn check_good_reduction(n: u64, a: i64, p: OddPrime) -> Result<()> {
    check_discriminant(n)?;
    if p.reduce(a) == 0 {
        return Err(Error::BadReduction(format!("p = {p} divides a = {a}")));
    }
    if (2 * n) % p.get() == 0 {
        return Err(Error::BadReduction(format!("p = {p} divides 2n = {}", 2 * n)));
    }
    let f = cubic_mod_p(n, a, p);
    let c = f.coeffs();
    if cubic_discriminant_test(c[2], c[1], c[0], p).symbol == 0 {
        return Err(Error::BadReduction(format!("p = {p} divides the discriminant of f{n}")));
    }
    Ok(())
}

pub fn has_good_reduction(n: u64, a: i64, p: OddPrime) -> bool {
    check_good_reduction(n, a, p).is_ok()
}

/// `f_n` for parameter `a`, reduced mod `p`.
pub fn cubic_poly(n: u64, a: i64, p: OddPrime) -> Result<FpPolynomial> {
    check_good_reduction(n, a, p)?;
    Ok(cubic_mod_p(n, a, p))
}

/// `f_n(x) / x` for `n = 1, 2, 7`.
pub fn cubic_cofactor(n: u64, a: i64, p: OddPrime) -> Result<FpPolynomial> {
    if !has_linear_factor(n) {
        return Err(Error::NotApplicable(format!("f{n} has no factor x")));
    }
    let f = cubic_poly(n, a, p)?;
    Ok(FpPolynomial::new(p, f.coeffs()[1..].to_vec()))
}

/// `g_n`: `f_n(x^2)`, with the square factor `x^2` removed for `n = 1, 2, 7`.
pub fn derived_poly(n: u64, a: i64, p: OddPrime) -> Result<FpPolynomial> {
    if has_linear_factor(n) {
        Ok(cubic_cofactor(n, a, p)?.compose_square())
    } else {
        Ok(cubic_poly(n, a, p)?.compose_square())
    }
}

/// Parameters of the non-CM forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FormParams {
    /// `x (x - 1)(x - beta)`
    LegendreCubic { beta: i64 },
    /// `(x^2 - 1)(x^2 - beta)`
    LegendreQuartic { beta: i64 },
    /// `(k^2 x^2 - 1)(x^2 - beta)`
    Newton { k: i64, beta: i64 },
    /// `(x^2 - c^2)(c^2 d x^2 - 1)`
    Edwards { c: i64, d: i64 },
}

impl FormParams {
    /// Reject parameters violating the form's constraint mod `p`, naming it.
    pub fn check(&self, p: OddPrime) -> Result<()> {
        let fail = |what: &str| Err(Error::Degenerate(what.to_string()));
        match *self {
            FormParams::LegendreCubic { beta } | FormParams::LegendreQuartic { beta } => {
                let b = p.reduce(beta);
                if b == 0 || b == 1 {
                    return fail("beta must not be 0 or 1");
                }
            }
            FormParams::Newton { k, beta } => {
                let b = p.reduce(beta);
                let k = p.reduce(k);
                if b == 0 || b == 1 || b == p.get() - 1 {
                    return fail("beta must not be 0 or +-1");
                }
                if k == 0 {
                    return fail("k must be nonzero");
                }
                if p.mul(p.mul(k, k), b) == 1 {
                    return fail("k^2 beta = 1 gives a repeated root");
                }
            }
            FormParams::Edwards { c, d } => {
                let (c, d) = (p.reduce(c), p.reduce(d));
                let c4d = p.mul(p.pow(c, 4), d);
                if p.mul(p.mul(c, d), p.sub(1, c4d)) == 0 {
                    return fail("c d (1 - c^4 d) must be nonzero");
                }
            }
        }
        Ok(())
    }
}

pub fn form_poly(params: FormParams, p: OddPrime) -> Result<FpPolynomial> {
    params.check(p)?;
    let poly = |c: &[i64]| FpPolynomial::from_i64(p, c);
    Ok(match params {
        FormParams::LegendreCubic { beta } => FpPolynomial::from_roots(p, &[0, 1, p.reduce(beta)]),
        FormParams::LegendreQuartic { beta } => &poly(&[-1, 0, 1]) * &poly(&[-beta, 0, 1]),
        FormParams::Newton { k, beta } => {
            let k2 = p.mul(p.reduce(k), p.reduce(k));
            &FpPolynomial::new(p, vec![p.get() - 1, 0, k2]) * &poly(&[-beta, 0, 1])
        }
        FormParams::Edwards { c, d } => {
            let c2 = p.mul(p.reduce(c), p.reduce(c));
            let c2d = p.mul(c2, p.reduce(d));
            &FpPolynomial::new(p, vec![p.neg(c2), 0, 1]) * &FpPolynomial::new(p, vec![p.get() - 1, 0, c2d])
        }
    })
}

/// Family identifiers accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FamilyId {
    Cubic(u64),
    Derived(u64),
    Legendre,
    Newton,
    Edwards,
}

impl FamilyId {
    pub fn all() -> Vec<FamilyId> {
        let mut v: Vec<FamilyId> = CM_DISCRIMINANTS.iter().map(|&n| FamilyId::Cubic(n)).collect();
        v.extend(CM_DISCRIMINANTS.iter().map(|&n| FamilyId::Derived(n)));
        v.extend([FamilyId::Legendre, FamilyId::Newton, FamilyId::Edwards]);
        v
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyId::Cubic(n) => write!(f, "f{n}"),
            FamilyId::Derived(n) => write!(f, "g{n}"),
            FamilyId::Legendre => f.write_str("legendre"),
            FamilyId::Newton => f.write_str("newton"),
            FamilyId::Edwards => f.write_str("edwards"),
        }
    }
}

impl FromStr for FamilyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownFamily(s.to_string());
        match s {
            "legendre" => return Ok(FamilyId::Legendre),
            "newton" => return Ok(FamilyId::Newton),
            "edwards" => return Ok(FamilyId::Edwards),
            _ => {}
        }
        let (head, tail) = s.split_at(s.char_indices().nth(1).map(|(i, _)| i).unwrap_or(s.len()));
        let n: u64 = tail.parse().map_err(|_| unknown())?;
        if !CM_DISCRIMINANTS.contains(&n) {
            return Err(unknown());
        }
        match head {
            "f" => Ok(FamilyId::Cubic(n)),
            "g" => Ok(FamilyId::Derived(n)),
            _ => Err(unknown()),
        }
    }
}

impl TryFrom<String> for FamilyId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FamilyId> for String {
    fn from(f: FamilyId) -> String {
        f.to_string()
    }
}
