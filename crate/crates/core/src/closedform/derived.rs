//! Sums of `f(x^2)` through `S(f(x^2)) = S(x f(x)) + S(f(x))`, and the
//! quartic forms built on it.

use super::cubic::eval_cubic_cm;
use super::elementary::eval_quadratic;
use super::quartic::quartic_reduce;
use crate::algebra::{FpPolynomial, OddPrime};
use crate::cm::ConventionTable;
use crate::error::{Error, Result};
use crate::families::{check_good_reduction, cubic_cofactor, cubic_poly, form_poly, has_linear_factor, FormParams};
use crate::hasse::legendre_form_sum;
use crate::oracle::char_sum_direct;
use crate::value::{Method, SumValue};

/// `S(f(x^2)) = S(x f(x)) + S(f(x))`, each part from the supplied evaluator.
pub fn split_transform<E>(f: &FpPolynomial, mut eval: E) -> Result<SumValue>
where
    E: FnMut(&FpPolynomial) -> Result<SumValue>,
{
    let xf = eval(&f.mul_x())?;
    let plain = eval(f)?;
    let residue_only = xf.residue_only || plain.residue_only;
    let mut v = SumValue::exact(xf.value + plain.value, Method::SplitTransform)
        .with_part("S(x f(x))", xf.value, xf.method)
        .with_part("S(f(x))", plain.value, plain.method);
    v.residue_only = residue_only;
    Ok(v)
}

/// `S(g_n(a))`.
///
/// For `n = 1, 2, 7`: `A + S(f_n)` with `A` the quadratic sum of `f_n / x`.
/// Otherwise `S(x f_n) + S(f_n)`, where `S(x f_n)` comes from the split
/// quartic reduction; when `x f_n` does not split over F_p that part is
/// summed directly and the result is marked as a fallback.
pub fn eval_derived_gn(n: u64, a: i64, p: OddPrime, conventions: &ConventionTable) -> Result<SumValue> {
    check_good_reduction(n, a, p)?;
    let cm = eval_cubic_cm(n, a, p, conventions)?;
    let u = cm.parts.iter().find(|x| x.label == "u").map(|x| x.value);
    let (first_label, first) = if has_linear_factor(n) {
        let q = cubic_cofactor(n, a, p)?;
        let c = |i| q.coeff(i) as i64;
        ("A", eval_quadratic(c(2), c(1), c(0), p))
    } else {
        let xf = cubic_poly(n, a, p)?.mul_x();
        let b = match quartic_reduce(&xf) {
            Ok(v) => v,
            Err(Error::NotSplit) => char_sum_direct(&xf).into_fallback("x f_n does not split over F_p"),
            Err(e) => return Err(e),
        };
        ("B", b)
    };
    let method = if first.method.is_oracle() { Method::OracleFallback } else { Method::DerivedGn };
    let mut v = SumValue::exact(first.value + cm.value, method).with_part(first_label, first.value, first.method);
    match u {
        Some(u) => v = v.with_part("u", u, Method::CubicCm).with_part("(a|p) u", cm.value, Method::CubicCm),
        None => v = v.with_note("inert"),
    }
    Ok(v)
}

/// Closed form for the Legendre, Newton and Edwards forms; `NotSplit` when
/// the quartic has roots outside F_p.
pub fn eval_form(params: FormParams, p: OddPrime) -> Result<SumValue> {
    match params {
        FormParams::LegendreCubic { beta } => {
            params.check(p)?;
            legendre_form_sum(p.reduce(beta), p)
        }
        _ => {
            let f = form_poly(params, p)?;
            let v = quartic_reduce(&f)?;
            Ok(SumValue { method: Method::FormReduction, ..v })
        }
    }
}

/// `S((x^2 - 1)(x^2 - beta)) = A_beta + S(F_beta)`, with `A_beta = -1`, or
/// `p - 1` when `beta = 1`.
pub fn eval_newton_k1(beta: i64, p: OddPrime) -> Result<SumValue> {
    let b = p.reduce(beta);
    if b == 0 || b == 1 {
        return Err(Error::Degenerate("beta must not be 0 or 1".into()));
    }
    let a_beta = eval_quadratic(1, -(1 + beta), beta, p);
    let sf = legendre_form_sum(b, p)?;
    Ok(SumValue::exact(a_beta.value + sf.value, Method::NewtonK1)
        .with_part("A_beta", a_beta.value, a_beta.method)
        .with_part("S(F_beta)", sf.value, sf.method))
}
