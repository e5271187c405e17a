//! Quadratic residue symbols.

use super::prime::OddPrime;
use crate::error::{Error, Result};

/// Jacobi symbol `(a | n)` for odd positive `n`, by the binary reciprocity
/// algorithm.
pub fn jacobi(a: u64, n: u64) -> i8 {
    assert!(n % 2 == 1, "Jacobi symbol needs an odd denominator");
    let mut a = a % n;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        if z % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            t = -t;
        }
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        (a, n) = (n % a, a);
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Legendre symbol `(a | p)` via quadratic reciprocity.
pub fn legendre(a: i64, p: OddPrime) -> i8 {
    jacobi(p.reduce(a), p.get())
}

/// Legendre symbol of a canonical residue.
#[inline]
pub fn legendre_residue(a: u64, p: OddPrime) -> i8 {
    jacobi(a, p.get())
}

/// Legendre symbol by Euler's criterion, `a^((p-1)/2) mod p`.
pub fn legendre_euler(a: i64, p: OddPrime) -> i8 {
    let r = p.pow(p.reduce(a), p.half());
    match r {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Kronecker symbol `(a | n)` for any nonzero `n`.
///
/// Agrees with the Jacobi symbol for odd positive `n`; `(a | 2)` is `0` for
/// even `a` and `(2 | a)` otherwise; `(a | -1)` is the sign of `a`.
pub fn kronecker(a: i64, n: i64) -> Result<i8> {
    if n == 0 {
        return Err(Error::InvalidArgument("Kronecker symbol with n = 0".into()));
    }
    let mut t = 1i8;
    let mut m = n.unsigned_abs();
    if n < 0 && a < 0 {
        t = -t;
    }
    let v = m.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        let r = a.rem_euclid(8);
        if v % 2 == 1 && (r == 3 || r == 5) {
            t = -t;
        }
        m >>= v;
    }
    if m == 1 {
        return Ok(t);
    }
    let ar = a.rem_euclid(m as i64) as u64;
    Ok(t * jacobi(ar, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(4, p(7)), 1);
        assert_eq!(legendre(0, p(13)), 0);
        assert_eq!(legendre(2, p(13)), -1);
        assert_eq!(legendre(-1, p(7)), -1);
        assert_eq!(legendre(-1, p(5)), 1);
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(7, 3).unwrap(), 1);
        assert_eq!(kronecker(2, 3).unwrap(), -1);
        assert_eq!(kronecker(5, 1).unwrap(), 1);
        assert_eq!(kronecker(3, 2).unwrap(), -1);
        assert_eq!(kronecker(7, 2).unwrap(), 1);
        assert_eq!(kronecker(6, 2).unwrap(), 0);
        assert!(kronecker(1, 0).is_err());
    }

    #[test]
    fn euler_and_reciprocity_agree() {
        for q in super::super::prime::odd_primes_up_to(1000) {
            for a in 0..q.get() as i64 {
                assert_eq!(legendre(a, q), legendre_euler(a, q), "a = {a}, p = {q}");
            }
        }
    }

    #[test]
    fn kronecker_multiplicative_in_denominator() {
        for a in -40i64..40 {
            for m in 1i64..40 {
                for n in 1i64..40 {
                    let lhs = kronecker(a, m * n).unwrap();
                    let rhs = kronecker(a, m).unwrap() * kronecker(a, n).unwrap();
                    assert_eq!(lhs, rhs, "a = {a}, m = {m}, n = {n}");
                }
            }
        }
    }

    #[test]
    fn kronecker_is_multiplicative() {
        for n in [1i64, 2, 3, 7, 11, 15, 19, 43, 67, 163] {
            for a in -30i64..30 {
                for b in -30i64..30 {
                    let lhs = kronecker(a * b, n).unwrap();
                    let rhs = kronecker(a, n).unwrap() * kronecker(b, n).unwrap();
                    assert_eq!(lhs, rhs, "a = {a}, b = {b}, n = {n}");
                }
            }
        }
    }
}
