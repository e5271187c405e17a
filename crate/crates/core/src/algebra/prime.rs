use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted by [`OddPrime::new`].
#[cfg(not(feature = "wide-moduli"))]
pub const MODULUS_CAP: u64 = 1 << 31;
#[cfg(feature = "wide-moduli")]
pub const MODULUS_CAP: u64 = 1 << 62;

/// A validated odd prime `p`, the characteristic of the ambient field F_p.
///
/// All residues handled through this type are canonical, i.e. in `[0, p)`.
/// Products go through a double-width intermediate so nothing overflows for
/// any modulus below the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct OddPrime(u64);

impl OddPrime {
    pub fn new(p: u64) -> Result<Self> {
        if p > MODULUS_CAP {
            return Err(Error::ModulusTooLarge { p, cap: MODULUS_CAP });
        }
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(OddPrime(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// `(p - 1) / 2`.
    #[inline]
    pub fn half(self) -> u64 {
        (self.0 - 1) / 2
    }

    #[inline]
    pub fn reduce(self, a: i64) -> u64 {
        a.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn reduce_i128(self, a: i128) -> u64 {
        a.rem_euclid(self.0 as i128) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        if self.0 <= u32::MAX as u64 {
            (a * b) % self.0
        } else {
            ((a as u128 * b as u128) % self.0 as u128) as u64
        }
    }

    pub fn pow(self, base: u64, mut exp: u64) -> u64 {
        let mut base = base % self.0;
        let mut acc = 1 % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(self, a: u64) -> Option<u64> {
        let a = a % self.0;
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.0 as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.reduce_i128(t0))
    }

    /// Representative of `r` in `(-p/2, p/2)`.
    #[inline]
    pub fn centered(self, r: u64) -> i64 {
        let r = r % self.0;
        if r <= self.half() {
            r as i64
        } else {
            r as i64 - self.0 as i64
        }
    }

    /// Integer square root of `p`, rounded down.
    pub fn isqrt(self) -> u64 {
        isqrt(self.0)
    }
}

impl TryFrom<u64> for OddPrime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        OddPrime::new(p)
    }
}

impl From<OddPrime> for u64 {
    fn from(p: OddPrime) -> u64 {
        p.0
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_u64(acc, b, m);
        }
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for every `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// All odd primes `p` with `lo <= p <= hi`, ascending.
pub fn odd_primes_between(lo: u64, hi: u64) -> Vec<OddPrime> {
    if hi < 3 || lo > hi {
        return Vec::new();
    }
    let n = hi as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    let mut i = 2usize;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    for (q, &c) in composite.iter().enumerate().skip(3) {
        if !c && q % 2 == 1 && q as u64 >= lo {
            out.push(OddPrime(q as u64));
        }
    }
    out
}

/// All odd primes `p <= hi`.
pub fn odd_primes_up_to(hi: u64) -> Vec<OddPrime> {
    odd_primes_between(3, hi)
}

pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r > 0 && r.checked_mul(r).map_or(true, |s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |s| s <= n) {
        r += 1;
    }
    r
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u128;
    while r > 0 && r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Exact square root of a perfect square, `None` otherwise.
pub fn exact_sqrt(n: u128) -> Option<u128> {
    let r = isqrt_u128(n);
    (r * r == n).then_some(r)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_even_and_composite() {
        assert_eq!(OddPrime::new(2), Err(Error::NotOddPrime(2)));
        assert_eq!(OddPrime::new(9), Err(Error::NotOddPrime(9)));
        assert_eq!(OddPrime::new(1), Err(Error::NotOddPrime(1)));
        assert!(OddPrime::new(3).is_ok());
        assert!(OddPrime::new(2_147_483_647).is_ok());
    }

    #[cfg(not(feature = "wide-moduli"))]
    #[test]
    fn cap_is_enforced() {
        // 2^61 - 1 is prime but above the default cap.
        assert!(matches!(
            OddPrime::new((1 << 61) - 1),
            Err(Error::ModulusTooLarge { .. })
        ));
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000u64 {
            let trial = n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "n = {n}");
        }
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn sieve_agrees_with_is_prime() {
        let ps: Vec<u64> = odd_primes_up_to(1000).into_iter().map(u64::from).collect();
        let expect: Vec<u64> = (3..=1000).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, expect);
        assert!(odd_primes_up_to(2).is_empty());
    }

    #[test]
    fn inverse_and_centered_lift() {
        let p = OddPrime::new(13).unwrap();
        for a in 1..13 {
            assert_eq!(p.mul(a, p.inv(a).unwrap()), 1);
        }
        assert_eq!(p.inv(0), None);
        assert_eq!(p.centered(6), 6);
        assert_eq!(p.centered(7), -6);
        assert_eq!(p.centered(12), -1);
    }

    #[test]
    fn wide_multiplication_path() {
        let p = OddPrime((1 << 61) - 1);
        let a = p.get() - 1;
        assert_eq!(p.mul(a, a), 1);
        assert_eq!(p.pow(3, p.get() - 1), 1);
    }
}
