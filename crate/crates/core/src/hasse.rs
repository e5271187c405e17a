//! The Hasse invariant `H(x) = (-1)^m sum_k C(m, k)^2 x^k`, `m = (p-1)/2`.
//!
//! For `F_beta = x(x-1)(x-beta)` the trace of Frobenius `a_p = -S(F_beta)`
//! satisfies `H(beta) = a_p (mod p)`. Since `|a_p| <= 2 sqrt(p) < p/2` once
//! `p >= 17`, the centered lift of `H(beta)` is `a_p` exactly.

use serde::{Deserialize, Serialize};

use crate::algebra::{frobenius_gcd, gcd, isqrt, FpPolynomial, OddPrime};
use crate::error::{Error, Result};
use crate::oracle::char_sum_direct;
use crate::value::{Method, SumValue};

/// Smallest prime for which the centered lift of `H(beta)` is certified.
pub const EXACT_LIFT_MIN_P: u64 = 17;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HassePolynomial {
    p: OddPrime,
    coeffs: Vec<u64>,
}

impl HassePolynomial {
    pub fn new(p: OddPrime) -> Self {
        let m = p.half();
        let sign = if m % 2 == 0 { 1 } else { p.get() - 1 };
        let mut binom = 1u64;
        let mut coeffs = Vec::with_capacity(m as usize + 1);
        for k in 0..=m {
            coeffs.push(p.mul(sign, p.mul(binom, binom)));
            if k < m {
                let ratio = p.mul(m - k, p.inv(k + 1).expect("k + 1 < p"));
                binom = p.mul(binom, ratio);
            }
        }
        HassePolynomial { p, coeffs }
    }

    pub fn modulus(&self) -> OddPrime {
        self.p
    }

    /// `m = (p - 1) / 2`.
    pub fn m(&self) -> u64 {
        self.p.half()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> FpPolynomial {
        FpPolynomial::new(self.p, self.coeffs.clone())
    }
}

/// `H(beta) mod p` in `O(p)` multiplications and a single inversion.
///
/// Nested evaluation `1 + r_0 b (1 + r_1 b (1 + ...))` with
/// `r_k = ((m - k) / (k + 1))^2`, carried as a fraction `num / den`.
pub fn hasse_eval(beta: u64, p: OddPrime) -> u64 {
    let m = p.half();
    let b = beta % p.get();
    let (mut num, mut den) = (1u64, 1u64);
    for k in (0..m).rev() {
        let n = p.mul(m - k, m - k);
        let d = p.mul(k + 1, k + 1);
        num = p.add(p.mul(d, den), p.mul(n, p.mul(b, num)));
        den = p.mul(d, den);
    }
    let v = p.mul(num, p.inv(den).expect("denominator is a product of nonzero squares"));
    if m % 2 == 0 {
        v
    } else {
        p.neg(v)
    }
}

fn check_beta(beta: u64, p: OddPrime) -> Result<u64> {
    let b = beta % p.get();
    if b == 0 || b == 1 {
        return Err(Error::Degenerate(format!("beta = {b} gives a singular Legendre curve")));
    }
    Ok(b)
}

/// The Legendre cubic `x(x - 1)(x - beta)`.
pub fn legendre_cubic(beta: u64, p: OddPrime) -> FpPolynomial {
    FpPolynomial::from_roots(p, &[0, 1, beta % p.get()])
}

/// Exact `S(F_beta)` as minus the centered lift of `H(beta)`.
///
/// Below [`EXACT_LIFT_MIN_P`] the lift is not certified and the sum is
/// computed directly.
pub fn legendre_form_sum(beta: u64, p: OddPrime) -> Result<SumValue> {
    let b = check_beta(beta, p)?;
    let h = hasse_eval(b, p);
    let mut v = if p.get() < EXACT_LIFT_MIN_P {
        char_sum_direct(&legendre_cubic(b, p)).into_fallback("p < 17: centered lift not certified")
    } else {
        SumValue::exact(-p.centered(h), Method::LegendreHasse)
    };
    v = v.with_part("H(beta)", h as i64, Method::LegendreHasse);
    if h == 0 {
        v = v.with_note("supersingular");
    }
    Ok(v)
}

pub fn is_supersingular(beta: u64, p: OddPrime) -> Result<bool> {
    let b = check_beta(beta, p)?;
    Ok(hasse_eval(b, p) == 0)
}

/// Factor statistics of `H` over F_p next to the class number.
///
/// `n2_all` counts every irreducible quadratic factor; `n2` counts the
/// reciprocal ones `x^2 + c x + 1` (roots `lambda`, `1/lambda`), which is the
/// count the class-number formula describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorCounts {
    pub p: u64,
    #[serde(rename = "N1")]
    pub n1: u64,
    #[serde(rename = "N2")]
    pub n2: u64,
    #[serde(rename = "N2_all")]
    pub n2_all: u64,
    pub h: u64,
    pub counts_consistent: bool,
}

/// Class-number predictions `(N1, N2)` for `p > 3`.
pub fn predicted_factor_counts(p: u64, h: u64) -> (u64, Option<u64>) {
    if p % 4 == 1 {
        (0, (h % 2 == 0).then_some(h / 2))
    } else if p % 8 == 3 {
        (3 * h, Some((3 * h - 1) / 2))
    } else {
        (3 * h, Some((h - 1) / 2))
    }
}

fn require_above_three(p: OddPrime) -> Result<()> {
    if p.get() <= 3 {
        return Err(Error::InvalidArgument("p must exceed 3".into()));
    }
    Ok(())
}

/// Factor counts from Frobenius gcd degrees, never from a root scan.
pub fn factor_counts(p: OddPrime) -> Result<FactorCounts> {
    require_above_three(p)?;
    let h_poly = HassePolynomial::new(p).to_poly();
    let deg = |g: &FpPolynomial| g.degree().unwrap_or(0) as u64;
    let n1 = deg(&frobenius_gcd(&h_poly, 1)?);
    let n2_all = (deg(&frobenius_gcd(&h_poly, 2)?) - n1) / 2;
    // x^(p+1) = 1 picks out lambda^p = 1/lambda, plus the rational roots +-1.
    let x = FpPolynomial::x(p);
    let fm = h_poly.monic()?;
    let xp1 = FpPolynomial::pow_mod(&x, p.get() + 1, &fm)?;
    let recip = fm.gcd(&(&xp1 - &FpPolynomial::one(p)));
    let rational = [1, p.get() - 1].iter().filter(|&&r| h_poly.eval(r) == 0).count() as u64;
    let n2 = (deg(&recip) - rational) / 2;
    let h = class_number(p);
    let (e1, e2) = predicted_factor_counts(p.get(), h);
    Ok(FactorCounts { p: p.get(), n1, n2, n2_all, h, counts_consistent: n1 == e1 && Some(n2) == e2 })
}

/// Class number of `Q(sqrt(-p))` by counting reduced primitive forms of
/// discriminant `-p` (`p = 3 mod 4`) or `-4p` (`p = 1 mod 4`).
pub fn class_number(p: OddPrime) -> u64 {
    let d: i64 = if p.get() % 4 == 3 { -(p.get() as i64) } else { -4 * p.get() as i64 };
    class_number_of_discriminant(d)
}

/// Number of reduced primitive positive definite forms of discriminant `d < 0`.
pub fn class_number_of_discriminant(d: i64) -> u64 {
    assert!(d < 0 && d.rem_euclid(4) <= 1, "not a negative discriminant");
    let mut count = 0;
    let amax = isqrt((-d / 3) as u64) as i64;
    for a in 1..=amax {
        for b in (1 - a)..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if gcd(gcd(a as u64, b.unsigned_abs()), c as u64) == 1 {
                count += 1;
            }
        }
    }
    count
}

/// `gcd(H, H')` is constant, i.e. `H` has simple roots.
pub fn squarefree_check(p: OddPrime) -> Result<bool> {
    require_above_three(p)?;
    let h = HassePolynomial::new(p).to_poly();
    Ok(h.gcd(&h.derivative()).degree() == Some(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::odd_primes_up_to;

    fn p(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    #[test]
    fn coefficients_are_palindromic() {
        for q in odd_primes_up_to(400) {
            let h = HassePolynomial::new(q);
            let c = h.coeffs();
            assert_eq!(c.len() as u64, h.m() + 1);
            let ends = if h.m() % 2 == 0 { 1 } else { q.get() - 1 };
            assert_eq!((c[0], c[c.len() - 1]), (ends, ends));
            assert!(c.iter().eq(c.iter().rev()));
        }
        assert_eq!(HassePolynomial::new(p(5)).coeffs(), &[1, 4, 1]);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(hasse_eval(2, p(5)), 3);
        assert_eq!(hasse_eval(2, p(7)), 0);
        for q in odd_primes_up_to(50) {
            let want = if q.half() % 2 == 0 { 1 } else { q.get() - 1 };
            assert_eq!(hasse_eval(0, q), want);
        }
    }

    #[test]
    fn eval_matches_coefficient_form() {
        for q in odd_primes_up_to(300) {
            let h = HassePolynomial::new(q).to_poly();
            for b in 0..q.get().min(40) {
                assert_eq!(hasse_eval(b, q), h.eval(b));
            }
        }
    }

    #[test]
    fn legendre_form_examples() {
        let v = legendre_form_sum(2, p(5)).unwrap();
        assert_eq!((v.value, v.method), (2, Method::OracleFallback));
        assert_eq!(legendre_form_sum(3, p(7)).unwrap().value, -4);
        assert_eq!(legendre_form_sum(2, p(7)).unwrap().value, 0);
        assert!(legendre_form_sum(1, p(7)).is_err());
        assert!(legendre_form_sum(0, p(19)).is_err());
        assert_eq!(legendre_form_sum(5, p(19)).unwrap().method, Method::LegendreHasse);
    }

    #[test]
    fn supersingular_examples() {
        assert!(is_supersingular(2, p(7)).unwrap());
        assert!(!is_supersingular(2, p(5)).unwrap());
        assert!((2..13).all(|b| !is_supersingular(b, p(13)).unwrap()));
    }

    #[test]
    fn class_number_examples() {
        assert_eq!(class_number(p(7)), 1);
        assert_eq!(class_number(p(23)), 3);
        assert_eq!(class_number(p(5)), 2);
        assert_eq!(class_number_of_discriminant(-20), 2);
        assert_eq!(class_number_of_discriminant(-163), 1);
    }

    #[test]
    fn factor_count_examples() {
        let c = factor_counts(p(7)).unwrap();
        assert_eq!((c.n1, c.h), (3, 1));
        let c = factor_counts(p(5)).unwrap();
        assert_eq!((c.n1, c.n2, c.n2_all, c.h), (0, 1, 1, 2));
        assert_eq!(factor_counts(p(13)).unwrap().n1, 0);
        assert!(factor_counts(p(3)).is_err());
        assert!(squarefree_check(p(7)).unwrap() && squarefree_check(p(13)).unwrap());
    }
}
