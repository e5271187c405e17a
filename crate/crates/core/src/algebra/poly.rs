use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::prime::OddPrime;
use crate::error::{Error, Result};

/// Dense polynomial over F_p. `coeffs[i]` is the coefficient of `x^i`.
///
/// The coefficient vector is always trimmed, so the zero polynomial is the
/// empty vector and the last entry of a nonzero polynomial is nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPolynomial {
    modulus: OddPrime,
    coeffs: Vec<u64>,
}

impl FpPolynomial {
    pub fn new(modulus: OddPrime, coeffs: Vec<u64>) -> Self {
        let q = modulus.get();
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % q).collect();
        trim(&mut coeffs);
        FpPolynomial { modulus, coeffs }
    }

    /// Build from signed integer coefficients (low degree first).
    pub fn from_i64(modulus: OddPrime, coeffs: &[i64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| modulus.reduce(c)).collect();
        Self::new(modulus, coeffs)
    }

    pub fn from_i128(modulus: OddPrime, coeffs: &[i128]) -> Self {
        let coeffs = coeffs.iter().map(|&c| modulus.reduce_i128(c)).collect();
        Self::new(modulus, coeffs)
    }

    pub fn zero(modulus: OddPrime) -> Self {
        FpPolynomial { modulus, coeffs: Vec::new() }
    }

    pub fn constant(modulus: OddPrime, c: u64) -> Self {
        Self::new(modulus, vec![c])
    }

    pub fn one(modulus: OddPrime) -> Self {
        Self::constant(modulus, 1)
    }

    /// The polynomial `x`.
    pub fn x(modulus: OddPrime) -> Self {
        Self::new(modulus, vec![0, 1])
    }

    /// `c * x^d`
    pub fn monomial(modulus: OddPrime, c: u64, d: usize) -> Self {
        let mut coeffs = vec![0; d + 1];
        coeffs[d] = c;
        Self::new(modulus, coeffs)
    }

    /// `prod (x - r)` over the given roots.
    pub fn from_roots(modulus: OddPrime, roots: &[u64]) -> Self {
        roots.iter().fold(Self::one(modulus), |acc, &r| {
            &acc * &Self::new(modulus, vec![modulus.neg(r % modulus.get()), 1])
        })
    }

    #[inline]
    pub fn modulus(&self) -> OddPrime {
        self.modulus
    }

    #[inline]
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<u64> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.modulus;
        let x = x % p.get();
        self.coeffs.iter().rev().fold(0, |acc, &c| p.add(p.mul(acc, x), c))
    }

    pub fn scale(&self, c: u64) -> Self {
        let p = self.modulus;
        Self::new(p, self.coeffs.iter().map(|&a| p.mul(a, c % p.get())).collect())
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Result<Self> {
        let lc = self.leading().ok_or(Error::ZeroPolynomial("leading coefficient"))?;
        Ok(self.scale(self.modulus.inv(lc).expect("trimmed leading coefficient")))
    }

    pub fn derivative(&self) -> Self {
        let p = self.modulus;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| p.mul(c, i as u64 % p.get()))
            .collect();
        Self::new(p, coeffs)
    }

    /// `f(x^2)`.
    pub fn compose_square(&self) -> Self {
        let mut coeffs = vec![0; self.coeffs.len() * 2];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = c;
        }
        Self::new(self.modulus, coeffs)
    }

    /// `x * f(x)`.
    pub fn mul_x(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0);
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(self.modulus, coeffs)
    }

    /// If every odd-degree coefficient vanishes, return `h` with `f(x) = h(x^2)`.
    pub fn even_part(&self) -> Option<Self> {
        if self.coeffs.iter().skip(1).step_by(2).any(|&c| c != 0) {
            return None;
        }
        let coeffs = self.coeffs.iter().step_by(2).copied().collect();
        Some(Self::new(self.modulus, coeffs))
    }

    /// Euclidean division: `(q, r)` with `self = q * div + r`, `deg r < deg div`.
    pub fn div_rem(&self, div: &Self) -> Result<(Self, Self)> {
        self.check_same(div);
        let p = self.modulus;
        let dd = div.degree().ok_or(Error::ZeroPolynomial("inverse for division"))?;
        let inv_lc = p.inv(div.coeffs[dd]).expect("trimmed leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(p), self.clone()));
        }
        let mut quot = vec![0; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = p.mul(rem[i + dd], inv_lc);
            quot[i] = c;
            if c != 0 {
                for (j, &dc) in div.coeffs.iter().enumerate() {
                    rem[i + j] = p.sub(rem[i + j], p.mul(c, dc));
                }
            }
        }
        rem.truncate(dd);
        Ok((Self::new(p, quot), Self::new(p, rem)))
    }

    pub fn rem(&self, div: &Self) -> Result<Self> {
        Ok(self.div_rem(div)?.1)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        self.check_same(other);
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic().expect("nonzero")
        }
    }

    /// `base^exp mod modulus`.
    pub fn pow_mod(base: &Self, mut exp: u64, modulus: &Self) -> Result<Self> {
        let p = base.modulus;
        let mut acc = Self::one(p).rem(modulus)?;
        let mut b = base.rem(modulus)?;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = (&acc * &b).rem(modulus)?;
            }
            exp >>= 1;
            if exp > 0 {
                b = (&b * &b).rem(modulus)?;
            }
        }
        Ok(acc)
    }

    /// Integer coefficient vector, each entry centered into `(-p/2, p/2)`.
    pub fn centered_coeffs(&self) -> Vec<i64> {
        self.coeffs.iter().map(|&c| self.modulus.centered(c)).collect()
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.modulus, other.modulus, "polynomials over different fields");
    }
}

fn trim(c: &mut Vec<u64>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

impl Add for &FpPolynomial {
    type Output = FpPolynomial;
    fn add(self, rhs: &FpPolynomial) -> FpPolynomial {
        self.check_same(rhs);
        let p = self.modulus;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| p.add(self.coeff(i), rhs.coeff(i))).collect();
        FpPolynomial::new(p, coeffs)
    }
}

impl Sub for &FpPolynomial {
    type Output = FpPolynomial;
    fn sub(self, rhs: &FpPolynomial) -> FpPolynomial {
        self.check_same(rhs);
        let p = self.modulus;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| p.sub(self.coeff(i), rhs.coeff(i))).collect();
        FpPolynomial::new(p, coeffs)
    }
}

impl Neg for &FpPolynomial {
    type Output = FpPolynomial;
    fn neg(self) -> FpPolynomial {
        let p = self.modulus;
        FpPolynomial::new(p, self.coeffs.iter().map(|&c| p.neg(c)).collect())
    }
}

impl Mul for &FpPolynomial {
    type Output = FpPolynomial;
    fn mul(self, rhs: &FpPolynomial) -> FpPolynomial {
        self.check_same(rhs);
        let p = self.modulus;
        if self.is_zero() || rhs.is_zero() {
            return FpPolynomial::zero(p);
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = p.add(out[i + j], p.mul(a, b));
            }
        }
        FpPolynomial::new(p, out)
    }
}

impl fmt::Debug for FpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPolynomial({} mod {})", self, self.modulus)
    }
}

impl fmt::Display for FpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{c}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}
