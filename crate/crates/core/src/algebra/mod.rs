//! Prime-field scalars, residue symbols and polynomials over F_p.

mod poly;
mod prime;
mod roots;
mod sqrt;
mod symbols;

use serde::{Deserialize, Serialize};

pub use poly::FpPolynomial;
pub use prime::{
    exact_sqrt, gcd, is_prime, isqrt, isqrt_u128, odd_primes_between, odd_primes_up_to, OddPrime,
    MODULUS_CAP,
};
pub use roots::{
    distinct_roots, frobenius_gcd, linear_part, roots_in_fp, roots_in_fp_seeded,
    DEFAULT_SPLIT_SEED,
};
pub use sqrt::sqrt_mod;
pub use symbols::{jacobi, kronecker, legendre, legendre_euler, legendre_residue};

/// `sum_{x in F_p} x^t mod p`, with the convention `0^0 = 0`.
///
/// Under that convention `t = 0` sums `p - 1` ones.
pub fn power_sum(t: u64, p: OddPrime) -> u64 {
    if t % (p.get() - 1) == 0 {
        p.get() - 1
    } else {
        0
    }
}

/// Parity of the number of irreducible factors of a cubic, read off the
/// discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorParity {
    Odd,
    Even,
    /// Zero discriminant: repeated root, parity not determined.
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicDiscriminantReport {
    pub discriminant: u64,
    pub symbol: i8,
    pub parity: FactorParity,
}

/// Discriminant test for the monic cubic `x^3 + a x^2 + b x + c`.
///
/// `(D | p) = (-1)^(s+1)` where `s` counts irreducible factors over F_p.
pub fn cubic_discriminant_test(a: u64, b: u64, c: u64, p: OddPrime) -> CubicDiscriminantReport {
    let q = p.get();
    let (a, b, c) = (a % q, b % q, c % q);
    let m = |x: u64, y: u64| p.mul(x, y);
    let a2 = m(a, a);
    let b2 = m(b, b);
    let mut d = m(a2, b2);
    d = p.sub(d, m(4, m(b2, b)));
    d = p.sub(d, m(4, m(m(a2, a), c)));
    d = p.sub(d, m(27 % q, m(c, c)));
    d = p.add(d, m(18 % q, m(m(a, b), c)));
    let symbol = legendre_residue(d, p);
    let parity = match symbol {
        0 => FactorParity::Degenerate,
        1 => FactorParity::Odd,
        _ => FactorParity::Even,
    };
    CubicDiscriminantReport { discriminant: d, symbol, parity }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(power_sum(6, p(7)), 6);
        assert_eq!(power_sum(3, p(7)), 0);
        assert_eq!(power_sum(0, p(7)), 6);
    }

    #[test]
    fn power_sum_matches_literal_summation() {
        for q in odd_primes_up_to(200) {
            for t in 0..=3 * (q.get() - 1) {
                // 0^0 = 0, so x = 0 never contributes.
                let lit = (1..q.get()).fold(0, |acc, x| q.add(acc, q.pow(x, t)));
                assert_eq!(power_sum(t, q), lit, "t = {t}, p = {q}");
            }
        }
    }

    #[test]
    fn discriminant_examples() {
        let r = cubic_discriminant_test(0, 1, 1, p(5));
        assert_eq!((r.discriminant, r.symbol, r.parity), (4, 1, FactorParity::Odd));
        let r = cubic_discriminant_test(0, 6, 0, p(7));
        assert_eq!((r.discriminant, r.symbol, r.parity), (4, 1, FactorParity::Odd));
        let r = cubic_discriminant_test(0, 0, 0, p(5));
        assert_eq!(r.parity, FactorParity::Degenerate);
    }

    /// Count irreducible factors of a squarefree monic cubic by brute force:
    /// three roots -> 3, one root -> 2, none -> 1.
    fn factor_count(a: u64, b: u64, c: u64, q: OddPrime) -> u32 {
        let f = FpPolynomial::new(q, vec![c, b, a, 1]);
        match (0..q.get()).filter(|&x| f.eval(x) == 0).count() {
            0 => 1,
            1 => 2,
            3 => 3,
            n => panic!("squarefree cubic with {n} roots"),
        }
    }

    #[test]
    fn discriminant_parity_law() {
        for q in odd_primes_up_to(500).into_iter().filter(|q| q.get() > 3) {
            let step = (q.get() / 7).max(1);
            for a in (0..q.get()).step_by(step as usize) {
                for b in (0..q.get()).step_by(step as usize) {
                    for c in (0..q.get()).step_by(step as usize) {
                        let r = cubic_discriminant_test(a, b, c, q);
                        if r.symbol == 0 {
                            continue;
                        }
                        let s = factor_count(a, b, c, q);
                        let expect = if s % 2 == 1 { 1 } else { -1 };
                        assert_eq!(r.symbol, expect, "p = {q}, (a, b, c) = ({a}, {b}, {c})");
                    }
                }
            }
        }
    }
}
