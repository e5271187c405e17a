use crate::algebra::{legendre_residue, OddPrime};
use crate::value::{Method, SumValue};

/// `S(c) = p (c|p)`.
pub fn eval_constant(c: i64, p: OddPrime) -> SumValue {
    let chi = legendre_residue(p.reduce(c), p) as i64;
    SumValue::exact(p.get() as i64 * chi, Method::Constant)
}

/// `S(ax + b) = 0` for `a != 0`; a vanishing `a` falls through to the
/// constant case.
pub fn eval_linear(a: i64, b: i64, p: OddPrime) -> SumValue {
    if p.reduce(a) == 0 {
        return eval_constant(b, p);
    }
    SumValue::exact(0, Method::Linear)
}

/// `S(ax^2 + bx + c) = -(a|p)`, or `(p - 1)(a|p)` when the discriminant
/// vanishes.
pub fn eval_quadratic(a: i64, b: i64, c: i64, p: OddPrime) -> SumValue {
    let ar = p.reduce(a);
    if ar == 0 {
        return eval_linear(b, c, p);
    }
    let (br, cr) = (p.reduce(b), p.reduce(c));
    let disc = p.sub(p.mul(br, br), p.mul(4, p.mul(ar, cr)));
    let chi = legendre_residue(ar, p) as i64;
    let v = if disc == 0 { chi * (p.get() as i64 - 1) } else { -chi };
    SumValue::exact(v, Method::Quadratic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{odd_primes_up_to, FpPolynomial};
    use crate::oracle::CharacterTable;

    fn p(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(eval_linear(3, 1, p(11)).value, 0);
        assert_eq!(eval_linear(1, 0, p(7)).value, 0);
        assert_eq!(eval_linear(5, 2, p(13)).value, 0);
        assert_eq!(eval_quadratic(1, 0, 1, p(5)).value, -1);
        assert_eq!(eval_quadratic(1, 2, 1, p(7)).value, 6);
        assert_eq!(eval_quadratic(2, 0, 0, p(7)).value, 6);
        assert_eq!(eval_constant(3, p(7)).value, -7);
        assert_eq!(eval_linear(0, 2, p(7)).method, Method::Constant);
    }

    #[test]
    fn small_primes_exhaustive() {
        for q in odd_primes_up_to(40) {
            let t = CharacterTable::new(q);
            let n = q.get() as i64;
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n.min(6) {
                        let f = FpPolynomial::from_i64(q, &[c, b, a]);
                        assert_eq!(eval_quadratic(a, b, c, q).value, t.sum(&f), "{a} {b} {c} mod {q}");
                    }
                }
            }
        }
    }
}
