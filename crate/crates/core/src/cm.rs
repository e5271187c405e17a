//! Representations `4p = u^2 + n v^2` for the nine class-number-one
//! discriminants, and the choice of the sign of `u` that makes
//! `S(f_n) = (a|p) u`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{exact_sqrt, gcd, isqrt_u128, kronecker, legendre, sqrt_mod, OddPrime};
use crate::error::{Error, Result};

/// The `n` with `Q(sqrt(-n))` of class number one.
pub const CM_DISCRIMINANTS: [u64; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

pub fn check_discriminant(n: u64) -> Result<()> {
    if CM_DISCRIMINANTS.contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("n = {n} is not one of {CM_DISCRIMINANTS:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    /// `u^2 + n v^2 = 4p`
    FourP,
    /// `u^2 + n v^2 = p`
    P,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmRepresentation {
    pub n: u64,
    pub u: i64,
    pub v: i64,
    pub form: Form,
    pub gcd: u64,
    pub primitive: bool,
}

impl CmRepresentation {
    fn new(n: u64, u: i64, v: i64, form: Form) -> Self {
        let g = gcd(u.unsigned_abs(), v.unsigned_abs());
        let primitive = match form {
            Form::FourP => g <= 2,
            Form::P => g == 1,
        };
        CmRepresentation { n, u, v, form, gcd: g, primitive }
    }

    pub fn norm(&self) -> i128 {
        self.u as i128 * self.u as i128 + self.n as i128 * self.v as i128 * self.v as i128
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Splitting {
    Inert,
    SplitOrRamified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitStatus {
    pub n: u64,
    pub p: OddPrime,
    pub status: Splitting,
}

impl SplitStatus {
    pub fn is_inert(&self) -> bool {
        self.status == Splitting::Inert
    }
}

fn check_coprime(n: u64, p: OddPrime) -> Result<()> {
    if (2 * n) % p.get() == 0 {
        Err(Error::BadReduction(format!("p = {p} divides 2n = {}", 2 * n)))
    } else {
        Ok(())
    }
}

/// `p` is inert in `Q(sqrt(-n))` iff `(-n | p) = -1`.
pub fn is_inert(n: u64, p: OddPrime) -> Result<SplitStatus> {
    check_coprime(n, p)?;
    let status = if legendre(-(n as i64), p) == -1 { Splitting::Inert } else { Splitting::SplitOrRamified };
    Ok(SplitStatus { n, p, status })
}

fn scan(n: u64, target: u128, form: Form) -> Vec<CmRepresentation> {
    let n128 = n as u128;
    let mut out = Vec::new();
    let mut v: u128 = 0;
    while n128 * v * v <= target {
        if let Some(u) = exact_sqrt(target - n128 * v * v) {
            out.push(CmRepresentation::new(n, u as i64, v as i64, form));
        }
        v += 1;
    }
    out
}

/// Every `(u, v)` with `u, v >= 0` and `u^2 + n v^2 = 4p`, ordered by `v`.
///
/// Exhaustive scan over `v <= 2 sqrt(p / n)`.
pub fn representations_4p(n: u64, p: OddPrime) -> Result<Vec<CmRepresentation>> {
    check_coprime(n, p)?;
    Ok(scan(n, 4 * p.get() as u128, Form::FourP))
}

/// Every `(u, v)` with `u, v >= 0` and `u^2 + n v^2 = p`, ordered by `v`.
pub fn representations_p(n: u64, p: OddPrime) -> Result<Vec<CmRepresentation>> {
    check_coprime(n, p)?;
    Ok(scan(n, p.get() as u128, Form::P))
}

/// One representation of `4p` by Cornacchia's algorithm in `O(log^2 p)`,
/// `None` when `p` is inert.
///
/// For `n = 1, 2` this solves `p = x^2 + n y^2` and doubles; for
/// `n = 3 mod 4` it runs the `4p` variant directly.
pub fn cornacchia_4p(n: u64, p: OddPrime) -> Result<Option<CmRepresentation>> {
    check_coprime(n, p)?;
    check_discriminant(n)?;
    let q = p.get() as u128;
    let Some(mut x0) = sqrt_mod(p.reduce(-(n as i64)), p).map(|r| r as u128) else {
        return Ok(None);
    };
    let (mut a, bound, target) = if n <= 2 {
        if x0 < q / 2 {
            x0 = q - x0;
        }
        (q, isqrt_u128(q), q)
    } else {
        if x0 % 2 != n as u128 % 2 {
            x0 = q - x0;
        }
        (2 * q, isqrt_u128(4 * q), 4 * q)
    };
    let mut b = x0;
    while b > bound {
        (a, b) = (b, a % b);
    }
    let rest = target - b * b;
    if rest % n as u128 != 0 {
        return Ok(None);
    }
    let Some(c) = exact_sqrt(rest / n as u128) else {
        return Ok(None);
    };
    let rep = if n <= 2 {
        CmRepresentation::new(n, 2 * b as i64, 2 * c as i64, Form::FourP)
    } else {
        CmRepresentation::new(n, b as i64, c as i64, Form::FourP)
    };
    Ok(Some(rep))
}

/// Where the target value of `(u | n)` comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum SymbolTarget {
    /// `(2 | p)`
    TwoModP,
    /// A fixed sign.
    Constant(i8),
    /// `(q | p)`
    LegendreOf(i64),
}

impl SymbolTarget {
    fn eval(self, p: OddPrime) -> i8 {
        match self {
            SymbolTarget::TwoModP => legendre(2, p),
            SymbolTarget::Constant(c) => c,
            SymbolTarget::LegendreOf(q) => legendre(q, p),
        }
    }
}

/// Rule picking the signed `u` for `S(f_n(a)) = (a|p) u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "selector")]
pub enum SignSelector {
    /// `u` with `(u | n) = target` (Kronecker symbol).
    Kronecker { target: SymbolTarget },
    /// `n = 2`: with `h = u / 2`, `h = 1 (mod 4)` iff `p = 3, 9 (mod 16)`.
    HalfUMod16,
    /// `n = 1`: quartic residue character of `-a` against a primary
    /// Gaussian prime above `p`.
    QuarticResidue,
    /// `n = 3`: sextic residue character of `4a` against a primary
    /// Eisenstein prime above `p`.
    SexticResidue,
}

impl SignSelector {
    /// The uniform rule `(u | n) = (2 | p)`.
    pub const UNIFORM: SignSelector = SignSelector::Kronecker { target: SymbolTarget::TwoModP };

    /// Candidates tried during pinning, uniform rule first.
    pub fn candidates() -> Vec<SignSelector> {
        vec![
            SignSelector::UNIFORM,
            SignSelector::Kronecker { target: SymbolTarget::Constant(1) },
            SignSelector::Kronecker { target: SymbolTarget::Constant(-1) },
            SignSelector::Kronecker { target: SymbolTarget::LegendreOf(-1) },
            SignSelector::Kronecker { target: SymbolTarget::LegendreOf(3) },
            SignSelector::Kronecker { target: SymbolTarget::LegendreOf(-2) },
            SignSelector::HalfUMod16,
            SignSelector::QuarticResidue,
            SignSelector::SexticResidue,
        ]
    }

    /// Whether the selector reads the parameter `a`, not only `p`.
    pub fn depends_on_a(self) -> bool {
        matches!(self, SignSelector::QuarticResidue | SignSelector::SexticResidue)
    }

    /// Apply to a split prime. `rep` is any representation of `4p`.
    ///
    /// Returns the `u` with `S(f_n(a)) = (a|p) u`, or `NotApplicable` when the
    /// rule does not single out a sign.
    pub fn select(self, n: u64, a: i64, p: OddPrime, rep: &CmRepresentation) -> Result<i64> {
        let u = rep.u.abs();
        match self {
            SignSelector::Kronecker { target } => {
                let t = target.eval(p);
                let plus = kronecker(u, n as i64)?;
                let minus = kronecker(-u, n as i64)?;
                if plus == minus || plus == 0 {
                    return Err(Error::NotApplicable(format!("(u | {n}) does not determine the sign of u")));
                }
                Ok(if plus == t { u } else { -u })
            }
            SignSelector::HalfUMod16 => {
                if n != 2 {
                    return Err(Error::NotApplicable("half-u rule is for n = 2".into()));
                }
                let h = u / 2;
                let want = if matches!(p.get() % 16, 3 | 9) { 1 } else { 3 };
                Ok(if h.rem_euclid(4) == want { u } else { -u })
            }
            SignSelector::QuarticResidue => {
                if n != 1 {
                    return Err(Error::NotApplicable("quartic residue rule is for n = 1".into()));
                }
                let s = quartic_twist_sum(a, p, rep)?;
                Ok(legendre(a, p) as i64 * s)
            }
            SignSelector::SexticResidue => {
                if n != 3 {
                    return Err(Error::NotApplicable("sextic residue rule is for n = 3".into()));
                }
                let s = sextic_twist_sum(a, p, rep)?;
                Ok(legendre(a, p) as i64 * s)
            }
        }
    }
}

impl fmt::Display for SignSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignSelector::Kronecker { target } => match target {
                SymbolTarget::TwoModP => write!(f, "(u|n) = (2|p)"),
                SymbolTarget::Constant(c) => write!(f, "(u|n) = {c}"),
                SymbolTarget::LegendreOf(q) => write!(f, "(u|n) = ({q}|p)"),
            },
            SignSelector::HalfUMod16 => write!(f, "u/2 = 1 mod 4 iff p = 3, 9 mod 16"),
            SignSelector::QuarticResidue => write!(f, "quartic residue of -a"),
            SignSelector::SexticResidue => write!(f, "sextic residue of 4a"),
        }
    }
}

/// Index `k` in `0..order` with `g^k = e`, by trial.
fn discrete_log_small(g: u64, e: u64, order: u64, p: OddPrime) -> Result<u64> {
    let mut acc = 1;
    for k in 0..order {
        if acc == e {
            return Ok(k);
        }
        acc = p.mul(acc, g);
    }
    Err(Error::Internal(format!("{e} is not a power of {g} mod {p}")))
}

/// `S(x^3 + a x)` for `p = 1 mod 4`.
///
/// Write `p = A^2 + B^2` with `pi = A + Bi` primary (`A` odd, `B` even,
/// `A + B = 1 mod 4`). Reducing `i` to `w = -A/B mod p`, the quartic
/// character of `-a` is `i^k` with `w^k = (-a)^((p-1)/4)`, and the sum is
/// `-2 Re(i^-k pi)`.
fn quartic_twist_sum(a: i64, p: OddPrime, rep: &CmRepresentation) -> Result<i64> {
    if p.get() % 4 != 1 {
        return Ok(0);
    }
    let (mut x, mut y) = (rep.u.abs() / 2, rep.v.abs() / 2);
    if x % 2 == 0 {
        (x, y) = (y, x);
    }
    if (x + y).rem_euclid(4) != 1 {
        (x, y) = (-x, -y);
    }
    let binv = p.inv(p.reduce(y)).ok_or_else(|| Error::Internal("B = 0 mod p".into()))?;
    let w = p.mul(p.reduce(-x), binv);
    let e = p.pow(p.reduce(-a), (p.get() - 1) / 4);
    let k = discrete_log_small(w, e, 4, p)?;
    let (mut re, mut im) = (x, y);
    for _ in 0..(4 - k) % 4 {
        (re, im) = (-im, re);
    }
    Ok(-2 * re)
}

/// `S(x^3 + a)` for `p = 1 mod 3`.
///
/// Write `p = A^2 - AB + B^2` with `pi = A + B omega` primary
/// (`A = 2`, `B = 0 mod 3`). With `omega -> w = -A/B mod p` and the primitive
/// sixth root `1 + omega`, the sextic character of `4a` is `(1 + omega)^k`,
/// and the sum is `2 Re((1 + omega)^-k pi) = 2x - y` for the product
/// `x + y omega`.
fn sextic_twist_sum(a: i64, p: OddPrime, rep: &CmRepresentation) -> Result<i64> {
    if p.get() % 3 != 1 {
        return Ok(0);
    }
    let (u, v) = (rep.u, rep.v);
    if (u + v).rem_euclid(2) != 0 {
        return Err(Error::Internal("u and v of different parity".into()));
    }
    let (mut x, mut y) = ((u + v) / 2, v);
    let mut found = false;
    for _ in 0..6 {
        if x.rem_euclid(3) == 2 && y.rem_euclid(3) == 0 {
            found = true;
            break;
        }
        (x, y) = (x - y, x);
    }
    if !found {
        return Err(Error::Internal(format!("no primary associate for p = {p}")));
    }
    let binv = p.inv(p.reduce(y)).ok_or_else(|| Error::Internal("B = 0 mod p".into()))?;
    let w = p.mul(p.reduce(-x), binv);
    let z = p.add(1, w);
    let e = p.pow(p.reduce(4 * a), (p.get() - 1) / 6);
    let k = discrete_log_small(z, e, 6, p)?;
    for _ in 0..(6 - k) % 6 {
        (x, y) = (x - y, x);
    }
    Ok(2 * x - y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    /// The uniform selector `(u | n) = (2 | p)`.
    Kronecker,
    /// A rule fixed by agreement with direct summation.
    Empirical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UniformRuleStatus {
    Holds,
    Fails,
    /// `(u | n)` cannot tell `u` from `-u` (n = 1, and even `u` for n = 2).
    Vacuous,
}

/// How one family picks the sign of `u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConventionEntry {
    pub rule: RuleKind,
    pub form: Form,
    #[serde(flatten)]
    pub selector: SignSelector,
    pub uniform_rule_status: UniformRuleStatus,
    #[serde(default)]
    pub checked_p_max: u64,
    #[serde(default)]
    pub checked_a: Vec<i64>,
    #[serde(default)]
    pub mismatches: u64,
}

/// Family id (`f1`, ..., `f163`) to sign rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConventionTable {
    pub families: BTreeMap<String, ConventionEntry>,
}

const SHIPPED_CONVENTIONS: &str = include_str!("../data/conventions.json");

impl ConventionTable {
    /// The table generated by `charsum verify --pin-conventions` and shipped
    /// with the crate.
    pub fn shipped() -> Self {
        Self::from_json(SHIPPED_CONVENTIONS).expect("shipped conventions table parses")
    }

    /// The uniform rule for every family, unchecked.
    pub fn uniform() -> Self {
        let families = CM_DISCRIMINANTS
            .iter()
            .map(|&n| {
                (
                    family_key(n),
                    ConventionEntry {
                        rule: RuleKind::Kronecker,
                        form: Form::FourP,
                        selector: SignSelector::UNIFORM,
                        uniform_rule_status: UniformRuleStatus::Holds,
                        checked_p_max: 0,
                        checked_a: Vec::new(),
                        mismatches: 0,
                    },
                )
            })
            .collect();
        ConventionTable { families }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let t: ConventionTable = serde_json::from_str(s).map_err(|e| Error::Conventions(e.to_string()))?;
        for key in t.families.keys() {
            let n = key
                .strip_prefix('f')
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| Error::Conventions(format!("bad family key `{key}`")))?;
            check_discriminant(n).map_err(|e| Error::Conventions(e.to_string()))?;
        }
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("table is serializable");
        serde_json::to_string_pretty(&v).expect("value is serializable") + "\n"
    }

    pub fn entry(&self, n: u64) -> Result<&ConventionEntry> {
        self.families
            .get(&family_key(n))
            .ok_or_else(|| Error::Conventions(format!("no entry for family f{n}")))
    }
}

impl Default for ConventionTable {
    fn default() -> Self {
        Self::shipped()
    }
}

pub fn family_key(n: u64) -> String {
    format!("f{n}")
}

/// Signed `u` together with the representation and rule that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedU {
    pub u: i64,
    pub representation: CmRepresentation,
    pub rule: RuleKind,
    pub selector: SignSelector,
}

/// The `u` with `S(f_n(a)) = (a|p) u`, or `None` when `p` is inert.
///
/// Cost is dominated by one modular square root (Cornacchia).
pub fn normalized_u(n: u64, a: i64, p: OddPrime, conventions: &ConventionTable) -> Result<Option<NormalizedU>> {
    check_discriminant(n)?;
    if is_inert(n, p)?.is_inert() {
        return Ok(None);
    }
    let entry = conventions.entry(n)?;
    let rep = match entry.form {
        Form::FourP => cornacchia_4p(n, p)?,
        Form::P => representations_p(n, p)?.into_iter().next(),
    }
    .ok_or_else(|| Error::Internal(format!("split prime {p} has no representation for n = {n}")))?;
    let u = entry.selector.select(n, a, p, &rep)?;
    Ok(Some(NormalizedU { u, representation: rep, rule: entry.rule, selector: entry.selector }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::odd_primes_up_to;

    fn p(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    fn pairs(v: Vec<CmRepresentation>) -> Vec<(i64, i64)> {
        v.into_iter().map(|r| (r.u, r.v)).collect()
    }

    #[test]
    fn representation_examples() {
        assert_eq!(pairs(representations_4p(1, p(5)).unwrap()), vec![(4, 2), (2, 4)]);
        assert_eq!(pairs(representations_4p(3, p(13)).unwrap()), vec![(7, 1), (5, 3), (2, 4)]);
        assert!(representations_4p(1, p(7)).unwrap().is_empty());
        assert!(representations_4p(7, p(7)).is_err());
    }

    #[test]
    fn inert_examples() {
        assert!(is_inert(1, p(7)).unwrap().is_inert());
        assert!(!is_inert(1, p(5)).unwrap().is_inert());
        assert!(!is_inert(3, p(13)).unwrap().is_inert());
        assert!(is_inert(3, p(3)).is_err());
    }

    #[test]
    fn inert_iff_no_representation() {
        for q in odd_primes_up_to(2000) {
            for n in CM_DISCRIMINANTS {
                if (2 * n) % q.get() == 0 {
                    continue;
                }
                let reps = representations_4p(n, q).unwrap();
                assert_eq!(reps.is_empty(), is_inert(n, q).unwrap().is_inert(), "n = {n}, p = {q}");
                for r in &reps {
                    assert_eq!(r.norm(), 4 * q.get() as i128);
                    if n % 4 == 3 {
                        assert_eq!(r.u % 2, r.v % 2);
                    }
                }
            }
        }
    }

    #[test]
    fn cornacchia_agrees_with_scan() {
        for q in odd_primes_up_to(5000) {
            for n in CM_DISCRIMINANTS {
                if (2 * n) % q.get() == 0 {
                    continue;
                }
                let scan = representations_4p(n, q).unwrap();
                match cornacchia_4p(n, q).unwrap() {
                    None => assert!(scan.is_empty(), "n = {n}, p = {q}"),
                    Some(r) => assert!(scan.contains(&r), "n = {n}, p = {q}, got {r:?}"),
                }
            }
        }
    }

    #[test]
    fn uniform_rule_is_vacuous_for_n_one() {
        let rep = cornacchia_4p(1, p(5)).unwrap().unwrap();
        assert!(SignSelector::UNIFORM.select(1, 1, p(5), &rep).is_err());
    }

    #[test]
    fn table_round_trips() {
        let t = ConventionTable::shipped();
        assert_eq!(ConventionTable::from_json(&t.to_json()).unwrap(), t);
        assert_eq!(t.families.len(), 9);
        assert!(ConventionTable::from_json("{\"f5\": {}}").is_err());
    }

    #[test]
    fn normalized_u_examples() {
        let t = ConventionTable::shipped();
        assert_eq!(normalized_u(3, 1, p(13), &t).unwrap().unwrap().u, -2);
        assert_eq!(normalized_u(1, 1, p(5), &t).unwrap().unwrap().u, -2);
        assert!(normalized_u(1, 1, p(7), &t).unwrap().is_none());
        let a = normalized_u(19, 2, p(101), &t).unwrap();
        assert_eq!(a, normalized_u(19, 2, p(101), &t).unwrap());
    }
}
