use serde::{Deserialize, Serialize};

use crate::algebra::{legendre_residue, FpPolynomial, OddPrime};
use crate::error::{Error, Result};
use crate::value::{Method, SumValue};

/// `S(f) = sum_{x=0}^{p-1} (f(x) | p)` by direct summation.
pub fn char_sum_direct(f: &FpPolynomial) -> SumValue {
    let p = f.modulus();
    let s: i64 = (0..p.get()).map(|x| legendre_residue(f.eval(x), p) as i64).sum();
    SumValue::exact(s, Method::Oracle)
}

/// Quadratic character of every residue, for repeated direct sums at one `p`.
///
/// Built by marking squares, so it never touches any closed form.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    p: OddPrime,
    chi: Vec<i8>,
}

impl CharacterTable {
    pub fn new(p: OddPrime) -> Self {
        let q = p.get() as usize;
        let mut chi = vec![-1i8; q];
        chi[0] = 0;
        for x in 1..=q / 2 {
            chi[(x * x) % q] = 1;
        }
        CharacterTable { p, chi }
    }

    pub fn modulus(&self) -> OddPrime {
        self.p
    }

    #[inline]
    pub fn chi(&self, r: u64) -> i8 {
        self.chi[r as usize]
    }

    /// Same value as [`char_sum_direct`].
    pub fn sum(&self, f: &FpPolynomial) -> i64 {
        assert_eq!(f.modulus(), self.p);
        (0..self.p.get()).map(|x| self.chi(f.eval(x)) as i64).sum()
    }

    /// `sum_x chi(prod_i (x + shifts[i]))`.
    pub fn sum_linear_product(&self, shifts: &[u64]) -> i64 {
        let p = self.p;
        (0..p.get())
            .map(|x| {
                let v = shifts.iter().fold(1, |acc, &a| p.mul(acc, p.add(x, a % p.get())));
                self.chi(v) as i64
            })
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JacobsthalKind {
    /// `phi_k(a) = sum chi(x) chi(x^k + a)`
    Phi,
    /// `psi_k(a) = sum chi(x^k + a)`
    Psi,
}

/// Jacobsthal-type sums by direct summation. No divisibility hypothesis on
/// `p - 1` is needed here.
pub fn jacobsthal_direct(kind: JacobsthalKind, k: u32, a: i64, p: OddPrime) -> Result<SumValue> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let a = p.reduce(a);
    if a == 0 {
        return Err(Error::Degenerate("a = 0 mod p".into()));
    }
    let s: i64 = (0..p.get())
        .map(|x| {
            let inner = legendre_residue(p.add(p.pow(x, k as u64), a), p) as i64;
            match kind {
                JacobsthalKind::Psi => inner,
                JacobsthalKind::Phi => legendre_residue(x, p) as i64 * inner,
            }
        })
        .sum();
    Ok(SumValue::exact(s, Method::Oracle))
}

/// Point counts of `y^2 = f(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCount {
    /// `#{(x, y) in F_p^2 : y^2 = f(x)} = p + S(f)`.
    pub affine: i64,
    /// Affine count plus one point at infinity, `p + 1 + S(f)`.
    pub with_infinity: i64,
}

impl PointCount {
    pub fn from_sum(p: OddPrime, s: i64) -> Self {
        let affine = p.get() as i64 + s;
        PointCount { affine, with_infinity: affine + 1 }
    }
}

/// Count affine points by enumerating all `(x, y)` pairs.
pub fn affine_point_count(f: &FpPolynomial) -> PointCount {
    let p = f.modulus();
    let q = p.get();
    let mut squares = vec![0i64; q as usize];
    for y in 0..q {
        squares[p.mul(y, y) as usize] += 1;
    }
    let affine: i64 = (0..q).map(|x| squares[f.eval(x) as usize]).sum();
    PointCount { affine, with_infinity: affine + 1 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::odd_primes_up_to;

    fn p(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    #[test]
    fn char_sum_examples() {
        let f = FpPolynomial::from_i64(p(5), &[0, 1, 0, 1]);
        assert_eq!(char_sum_direct(&f).value, -2);
        let f = FpPolynomial::from_i64(p(7), &[0, 1, 0, 1]);
        assert_eq!(char_sum_direct(&f).value, 0);
        let f = FpPolynomial::from_i64(p(11), &[1, 3]);
        assert_eq!(char_sum_direct(&f).value, 0);
        assert_eq!(char_sum_direct(&f).method, Method::Oracle);
    }

    #[test]
    fn jacobsthal_examples() {
        let v = |k, kind, a, q| jacobsthal_direct(kind, k, a, p(q)).unwrap().value;
        assert_eq!(v(3, JacobsthalKind::Psi, 1, 13), -2);
        assert_eq!(v(3, JacobsthalKind::Phi, 1, 13), -3);
        assert_eq!(v(2, JacobsthalKind::Phi, 1, 7), 0);
        assert!(jacobsthal_direct(JacobsthalKind::Psi, 3, 13, p(13)).is_err());
    }

    #[test]
    fn point_count_examples() {
        let f = FpPolynomial::from_i64(p(5), &[0, 1, 0, 1]);
        assert_eq!(affine_point_count(&f), PointCount { affine: 3, with_infinity: 4 });
        let f = FpPolynomial::from_i64(p(7), &[1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(affine_point_count(&f), PointCount { affine: 14, with_infinity: 15 });
        // y^2 = x^2 over F_3: (0,0), (1,1), (1,2), (2,1), (2,2)
        let f = FpPolynomial::from_i64(p(3), &[0, 0, 1]);
        assert_eq!(affine_point_count(&f).affine, 5);
    }

    #[test]
    fn affine_count_is_p_plus_sum() {
        for q in odd_primes_up_to(200) {
            for coeffs in [&[1i64, 2, 0, 1][..], &[3, 0, 5, 0, 1], &[0, 0, 1], &[2]] {
                let f = FpPolynomial::from_i64(q, coeffs);
                let s = char_sum_direct(&f).value;
                assert_eq!(affine_point_count(&f), PointCount::from_sum(q, s));
            }
        }
    }

    #[test]
    fn table_agrees_with_symbol_evaluation() {
        for q in odd_primes_up_to(300) {
            let t = CharacterTable::new(q);
            let f = FpPolynomial::from_i64(q, &[7, -3, 0, 1, 2]);
            assert_eq!(t.sum(&f), char_sum_direct(&f).value);
            assert_eq!(
                t.sum_linear_product(&[1, 2, 3]),
                char_sum_direct(&FpPolynomial::from_roots(q, &[q.neg(1), q.neg(2), q.neg(3 % q.get())])).value
            );
        }
    }
}
