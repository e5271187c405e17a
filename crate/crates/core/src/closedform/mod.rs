//! Closed-form evaluators. Each returns a [`SumValue`] naming the formula
//! used; [`evaluate`] picks one by shape and falls back to direct summation.

mod audit;
mod cubic;
mod derived;
mod elementary;
mod jacobsthal;
mod quartic;

use serde::{Deserialize, Serialize};

pub use audit::{weil_audit, WeilAudit, WeilCase};
pub use cubic::{check_conventions, eval_cubic_cm, pin_conventions, PinningRecord, SelectorScore};
pub use derived::{eval_derived_gn, eval_form, eval_newton_k1, split_transform};
pub use elementary::{eval_constant, eval_linear, eval_quadratic};
pub use jacobsthal::{eval_power_2k, eval_power_2k_minus, phi_closed, psi_closed, PowerSumParams};
pub use quartic::{quartic_reduce, split_cubic_sum, split_sum, alternative_reduction, QuarticReduction};

use crate::algebra::{legendre_residue, FpPolynomial, OddPrime};
use crate::cm::{ConventionTable, CM_DISCRIMINANTS};
use crate::error::{Error, Result};
use crate::families::{cubic_poly, derived_poly, form_poly, has_good_reduction, FamilyId, FormParams};
use crate::oracle::{char_sum_direct, PointCount};
use crate::value::{Method, SumValue};

/// Which path `family_sum` may take.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Closed form when one applies, direct summation otherwise.
    #[default]
    Auto,
    /// Closed form only; structural failures are errors.
    Closed,
    /// Direct summation only.
    Oracle,
}

/// Closed form for an arbitrary polynomial, chosen by degree and shape.
///
/// Recognized shapes: constants, linear and quadratic polynomials, scalar
/// multiples of the CM cubics `f_n(a)`, polynomials splitting over F_p up
/// to degree 4, even polynomials `h(x^2)` whose halves are again
/// recognized, and `c (x^(2k) + a)` when the binomial value lifts exactly.
pub fn evaluate_closed(f: &FpPolynomial, conventions: &ConventionTable) -> Result<SumValue> {
    let p = f.modulus();
    let Some(deg) = f.degree() else {
        return Ok(SumValue::exact(0, Method::Constant));
    };
    let c = |i| f.coeff(i) as i64;
    match deg {
        0 => return Ok(eval_constant(c(0), p)),
        1 => return Ok(eval_linear(c(1), c(0), p)),
        2 => return Ok(eval_quadratic(c(2), c(1), c(0), p)),
        _ => {}
    }
    if deg <= 4 {
        match quartic_reduce(f) {
            Ok(v) => return Ok(v),
            Err(Error::NotSplit) => {}
            Err(e) => return Err(e),
        }
    }
    if deg == 3 {
        if let Some(v) = recognize_cm_cubic(f, conventions)? {
            return Ok(v);
        }
    }
    if let Some(h) = f.even_part() {
        if let Ok(v) = split_transform(&h, |g| evaluate_closed(g, conventions)) {
            return Ok(v);
        }
    }
    if let Some(v) = recognize_power(f)? {
        return Ok(v);
    }
    Err(Error::NotApplicable(format!("no closed form for degree {deg}")))
}

/// Closed form when available, direct summation otherwise.
pub fn evaluate(f: &FpPolynomial, conventions: &ConventionTable) -> SumValue {
    match evaluate_closed(f, conventions) {
        Ok(v) => v,
        Err(e) => char_sum_direct(f).into_fallback(e.to_string()),
    }
}

/// `lead * f_n(a)` for some `n` and `a`, evaluated as `(lead|p) S(f_n(a))`.
fn recognize_cm_cubic(f: &FpPolynomial, conventions: &ConventionTable) -> Result<Option<SumValue>> {
    let p = f.modulus();
    let lead = f.leading().expect("nonzero");
    let m = f.monic()?;
    let (c2, c1, c0) = (m.coeff(2), m.coeff(1), m.coeff(0));
    for n in CM_DISCRIMINANTS {
        let Some(a) = candidate_parameter(n, c2, c1, c0, p) else { continue };
        if !has_good_reduction(n, a as i64, p) || cubic_poly(n, a as i64, p)? != m {
            continue;
        }
        let v = eval_cubic_cm(n, a as i64, p, conventions)?;
        let chi = legendre_residue(lead, p) as i64;
        return Ok(Some(SumValue { value: chi * v.value, ..v }.with_note(format!("matched f{n} with a = {a}"))));
    }
    Ok(None)
}

/// The `a` for which `f_n(a)` could have these coefficients.
fn candidate_parameter(n: u64, c2: u64, c1: u64, c0: u64, p: OddPrime) -> Option<u64> {
    let unit = cubic_poly(n, 1, p).ok()?;
    let (u2, u1, u0) = (unit.coeff(2), unit.coeff(1), unit.coeff(0));
    match n {
        // x^3 + a x
        1 => (c2 == 0 && c0 == 0 && c1 != 0).then_some(c1),
        // x^3 + a
        3 => (c2 == 0 && c1 == 0 && c0 != 0).then_some(c0),
        // x^3 + k2 a x^2 + k1 a^2 x
        2 | 7 => (c0 == 0 && u2 != 0).then(|| p.mul(c2, p.inv(u2).unwrap())),
        // x^3 - k1 a^2 x + k0 a^3, so a = (c0 / u0) / (c1 / u1)
        _ => {
            if c2 != 0 || u0 == 0 || u1 == 0 || c1 == 0 {
                return None;
            }
            let num = p.mul(c0, p.inv(u0).unwrap());
            let den = p.mul(c1, p.inv(u1).unwrap());
            Some(p.mul(num, p.inv(den).unwrap()))
        }
    }
}

/// `c (x^(2k) + a)` with an exactly lifted binomial value.
fn recognize_power(f: &FpPolynomial) -> Result<Option<SumValue>> {
    let p = f.modulus();
    let deg = f.degree().unwrap_or(0);
    if deg < 2 || deg % 2 == 1 {
        return Ok(None);
    }
    let inner_zero = (1..deg).all(|i| f.coeff(i) == 0);
    if !inner_zero || f.coeff(0) == 0 {
        return Ok(None);
    }
    let lead = f.leading().expect("nonzero");
    let a = p.mul(f.coeff(0), p.inv(lead).unwrap());
    match eval_power_2k((deg / 2) as u64, a as i64, p) {
        Ok(v) if !v.residue_only => {
            let chi = legendre_residue(lead, p) as i64;
            Ok(Some(SumValue { value: chi * v.value, ..v }))
        }
        _ => Ok(None),
    }
}

/// A family member with its parameters; unused parameters are ignored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyQuery {
    pub family: FamilyId,
    pub a: i64,
    pub beta: i64,
    pub k: i64,
    pub c: i64,
    pub d: i64,
}

impl FamilyQuery {
    pub fn new(family: FamilyId) -> Self {
        FamilyQuery { family, a: 1, beta: 2, k: 1, c: 1, d: 2 }
    }

    pub fn with_a(mut self, a: i64) -> Self {
        self.a = a;
        self
    }

    pub fn form_params(&self) -> Option<FormParams> {
        match self.family {
            FamilyId::Legendre => Some(FormParams::LegendreCubic { beta: self.beta }),
            FamilyId::Newton => Some(FormParams::Newton { k: self.k, beta: self.beta }),
            FamilyId::Edwards => Some(FormParams::Edwards { c: self.c, d: self.d }),
            _ => None,
        }
    }

    pub fn poly(&self, p: OddPrime) -> Result<FpPolynomial> {
        match self.family {
            FamilyId::Cubic(n) => cubic_poly(n, self.a, p),
            FamilyId::Derived(n) => derived_poly(n, self.a, p),
            _ => form_poly(self.form_params().expect("form family"), p),
        }
    }
}

/// `S` of a family member along the requested path.
pub fn family_sum(q: &FamilyQuery, p: OddPrime, strategy: Strategy, conventions: &ConventionTable) -> Result<SumValue> {
    let f = q.poly(p)?;
    if strategy == Strategy::Oracle {
        return Ok(char_sum_direct(&f));
    }
    let closed = match q.family {
        FamilyId::Cubic(n) => eval_cubic_cm(n, q.a, p, conventions),
        FamilyId::Derived(n) => eval_derived_gn(n, q.a, p, conventions),
        _ => eval_form(q.form_params().expect("form family"), p),
    };
    match (closed, strategy) {
        (Ok(v), _) => Ok(v),
        (Err(e @ (Error::NotSplit | Error::NotApplicable(_))), Strategy::Auto) => {
            Ok(char_sum_direct(&f).into_fallback(e.to_string()))
        }
        (Err(e), _) => Err(e),
    }
}

/// Point counts of `y^2 = f(x)` for a family member, with the sum behind them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvePoints {
    pub affine: i64,
    pub with_infinity: i64,
    pub sum: SumValue,
}

pub fn point_count(q: &FamilyQuery, p: OddPrime, strategy: Strategy, conventions: &ConventionTable) -> Result<CurvePoints> {
    let sum = family_sum(q, p, strategy, conventions)?;
    if sum.residue_only {
        return Err(Error::Internal("point count needs an exact sum".into()));
    }
    let pc = PointCount::from_sum(p, sum.value);
    Ok(CurvePoints { affine: pc.affine, with_infinity: pc.with_infinity, sum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::odd_primes_up_to;
    use crate::oracle::{affine_point_count, CharacterTable};

    fn p(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    #[test]
    fn point_count_examples() {
        let t = ConventionTable::shipped();
        let g3 = FamilyQuery::new(FamilyId::Derived(3));
        let f1 = FamilyQuery::new(FamilyId::Cubic(1));
        let pc = point_count(&g3, p(7), Strategy::Auto, &t).unwrap();
        assert_eq!((pc.affine, pc.with_infinity), (14, 15));
        let pc = point_count(&f1, p(5), Strategy::Auto, &t).unwrap();
        assert_eq!((pc.affine, pc.with_infinity), (3, 4));
        let pc = point_count(&f1, p(7), Strategy::Closed, &t).unwrap();
        assert_eq!((pc.affine, pc.with_infinity), (7, 8));
        assert_eq!(affine_point_count(&f1.poly(p(5)).unwrap()).affine, 3);
    }

    #[test]
    fn closed_strategy_reports_not_split() {
        let t = ConventionTable::shipped();
        let mut q = FamilyQuery::new(FamilyId::Edwards);
        q.d = 3; // 3 is a non-residue mod 7
        assert_eq!(family_sum(&q, p(7), Strategy::Closed, &t), Err(Error::NotSplit));
        assert_eq!(family_sum(&q, p(7), Strategy::Auto, &t).unwrap().method, Method::OracleFallback);
    }

    #[test]
    fn dispatcher_matches_oracle_on_shapes() {
        let t = ConventionTable::shipped();
        for q in odd_primes_up_to(150) {
            let table = CharacterTable::new(q);
            let shapes: Vec<FpPolynomial> = vec![
                FpPolynomial::from_i64(q, &[3]),
                FpPolynomial::from_i64(q, &[1, 2]),
                FpPolynomial::from_i64(q, &[1, 0, 1]),
                FpPolynomial::from_i64(q, &[5, 0, 0, 2]),
                FpPolynomial::from_i64(q, &[0, 3, 0, 1]),
                FpPolynomial::from_i64(q, &[1, 0, 0, 0, 0, 0, 1]),
                FpPolynomial::from_i64(q, &[2, 0, 0, 0, 1]),
                FpPolynomial::from_i64(q, &[1, 2, 3, 4, 5, 6, 7]),
                FpPolynomial::from_roots(q, &[1, 2, 3, 4 % q.get()]),
            ];
            for f in shapes.into_iter().chain(CM_DISCRIMINANTS.iter().filter_map(|&n| cubic_poly(n, 2, q).ok().map(|g| g.scale(3)))) {
                let v = evaluate(&f, &t);
                assert!(v.agrees_with(table.sum(&f), q), "{f} mod {q}: {v}");
            }
        }
    }

    #[test]
    fn cm_shapes_are_recognized() {
        let t = ConventionTable::shipped();
        let q = p(1009);
        for n in CM_DISCRIMINANTS {
            let f = cubic_poly(n, 5, q).unwrap().scale(7);
            let v = evaluate_closed(&f, &t);
            match v {
                Ok(v) => assert!(!v.method.is_oracle()),
                Err(e) => panic!("f{n}: {e}"),
            }
        }
    }
}
