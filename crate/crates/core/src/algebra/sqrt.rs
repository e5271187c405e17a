use super::prime::OddPrime;
use super::symbols::legendre_residue;

/// Square root modulo `p` by Tonelli–Shanks.
///
/// Returns the smaller of the two roots, `Some(0)` for `a = 0`, and `None`
/// when `a` is a non-residue. The auxiliary non-residue is the least one, so
/// the result is deterministic.
pub fn sqrt_mod(a: u64, p: OddPrime) -> Option<u64> {
    let q = p.get();
    let a = a % q;
    if a == 0 {
        return Some(0);
    }
    if legendre_residue(a, p) != 1 {
        return None;
    }
    let root = if q % 4 == 3 {
        p.pow(a, (q + 1) / 4)
    } else {
        let s = (q - 1).trailing_zeros();
        let odd = (q - 1) >> s;
        let z = (2..q)
            .find(|&z| legendre_residue(z, p) == -1)
            .expect("every odd prime has a non-residue");
        let mut m = s;
        let mut c = p.pow(z, odd);
        let mut t = p.pow(a, odd);
        let mut r = p.pow(a, (odd + 1) / 2);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = p.mul(t2, t2);
                i += 1;
            }
            let b = p.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = p.mul(b, b);
            t = p.mul(t, c);
            r = p.mul(r, b);
        }
        r
    };
    debug_assert_eq!(p.mul(root, root), a);
    Some(root.min(q - root))
}
