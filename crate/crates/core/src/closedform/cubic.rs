//! The CM cubics `f_n`: `S(f_n(a)) = 0` at inert primes and `(a|p) u` with
//! `4p = u^2 + n v^2` otherwise.

use serde::Serialize;

use crate::algebra::{legendre, odd_primes_up_to, OddPrime};
use crate::cm::{
    cornacchia_4p, family_key, is_inert, normalized_u, ConventionEntry, ConventionTable, Form, UniformRuleStatus,
    RuleKind, SignSelector, CM_DISCRIMINANTS,
};
use crate::error::{Error, Result};
use crate::families::{check_good_reduction, cubic_poly};
use crate::oracle::{with_jobs, CharacterTable};
use crate::value::{Method, SumValue};

/// `S(f_n(a))` over F_p in `O(log^2 p)`.
pub fn eval_cubic_cm(n: u64, a: i64, p: OddPrime, conventions: &ConventionTable) -> Result<SumValue> {
    check_good_reduction(n, a, p)?;
    let chi = legendre(a, p) as i64;
    match normalized_u(n, a, p, conventions)? {
        None => Ok(SumValue::exact(0, Method::CubicCm).with_note("inert")),
        Some(nu) => Ok(SumValue::exact(chi * nu.u, Method::CubicCm)
            .with_part("u", nu.u, Method::CubicCm)
            .with_part("v", nu.representation.v, Method::CubicCm)
            .with_part("(a|p)", chi, Method::CubicCm)
            .with_note(format!("4p = u^2 + {n} v^2; sign rule: {}", nu.selector))),
    }
}

#[derive(Clone, Copy, Debug)]
struct Sample {
    n: u64,
    a: i64,
    p: OddPrime,
    oracle: i64,
}

/// Outcome of scoring one selector against the samples of one family.
#[derive(Clone, Debug, Serialize)]
pub struct SelectorScore {
    pub selector: SignSelector,
    pub mismatches: u64,
    pub undetermined: u64,
}

/// Sign-rule pinning for one family.
#[derive(Clone, Debug, Serialize)]
pub struct PinningRecord {
    pub family: String,
    pub samples: u64,
    pub scores: Vec<SelectorScore>,
    pub entry: ConventionEntry,
}

fn score(selector: SignSelector, samples: &[Sample]) -> SelectorScore {
    let mut mismatches = 0;
    let mut undetermined = 0;
    for s in samples {
        let rep = match cornacchia_4p(s.n, s.p) {
            Ok(Some(r)) => r,
            _ => continue,
        };
        match selector.select(s.n, s.a, s.p, &rep) {
            Ok(u) => {
                if legendre(s.a, s.p) as i64 * u != s.oracle {
                    mismatches += 1;
                }
            }
            Err(_) => undetermined += 1,
        }
    }
    SelectorScore { selector, mismatches, undetermined }
}

/// Fix the sign rule of every family against direct summation over all good
/// split primes `p <= p_max` and the given `a`.
///
/// The uniform rule `(u|n) = (2|p)` is kept where it never fails; otherwise
/// the first candidate with no failures is taken, or, failing that, the one
/// with the fewest.
pub fn pin_conventions(p_max: u64, a_values: &[i64], jobs: usize) -> (ConventionTable, Vec<PinningRecord>) {
    let primes = odd_primes_up_to(p_max);
    let samples: Vec<Sample> = with_jobs(jobs, || {
        use rayon::prelude::*;
        primes
            .par_iter()
            .flat_map_iter(|&p| {
                let table = CharacterTable::new(p);
                let mut out = Vec::new();
                for n in CM_DISCRIMINANTS {
                    for &a in a_values {
                        let Ok(f) = cubic_poly(n, a, p) else { continue };
                        if is_inert(n, p).map(|s| s.is_inert()).unwrap_or(true) {
                            continue;
                        }
                        out.push(Sample { n, a, p, oracle: table.sum(&f) });
                    }
                }
                out
            })
            .collect()
    });
    let mut families = std::collections::BTreeMap::new();
    let mut records = Vec::new();
    for n in CM_DISCRIMINANTS {
        let mine: Vec<Sample> = samples.iter().copied().filter(|s| s.n == n).collect();
        let scores: Vec<SelectorScore> = SignSelector::candidates().into_iter().map(|c| score(c, &mine)).collect();
        let uniform = &scores[0];
        let uniform_rule_status = if uniform.undetermined > 0 {
            UniformRuleStatus::Vacuous
        } else if uniform.mismatches == 0 {
            UniformRuleStatus::Holds
        } else {
            UniformRuleStatus::Fails
        };
        let best = scores
            .iter()
            .find(|s| s.mismatches == 0 && s.undetermined == 0)
            .or_else(|| scores.iter().min_by_key(|s| s.mismatches + s.undetermined))
            .expect("candidate list is not empty");
        let entry = ConventionEntry {
            rule: if best.selector == SignSelector::UNIFORM { RuleKind::Kronecker } else { RuleKind::Empirical },
            form: Form::FourP,
            selector: best.selector,
            uniform_rule_status,
            checked_p_max: p_max,
            checked_a: a_values.to_vec(),
            mismatches: best.mismatches + best.undetermined,
        };
        families.insert(family_key(n), entry.clone());
        records.push(PinningRecord { family: family_key(n), samples: mine.len() as u64, scores, entry });
    }
    (ConventionTable { families }, records)
}

/// Check that a table reproduces direct summation for the given range.
pub fn check_conventions(table: &ConventionTable, p_max: u64, a_values: &[i64]) -> Result<()> {
    for p in odd_primes_up_to(p_max) {
        let t = CharacterTable::new(p);
        for n in CM_DISCRIMINANTS {
            for &a in a_values {
                let Ok(f) = cubic_poly(n, a, p) else { continue };
                let v = eval_cubic_cm(n, a, p, table)?;
                let o = t.sum(&f);
                if v.value != o {
                    return Err(Error::Conventions(format!("f{n}, a = {a}, p = {p}: closed {} != oracle {o}", v.value)));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    #[test]
    fn witnesses() {
        let t = ConventionTable::shipped();
        assert_eq!(eval_cubic_cm(1, 1, p(5), &t).unwrap().value, -2);
        assert_eq!(eval_cubic_cm(1, 1, p(7), &t).unwrap().value, 0);
        assert_eq!(eval_cubic_cm(3, 1, p(13), &t).unwrap().value, -2);
        assert!(matches!(eval_cubic_cm(7, 1, p(7), &t), Err(Error::BadReduction(_))));
    }

    #[test]
    fn pinning_reproduces_shipped_selectors() {
        let (fresh, records) = pin_conventions(400, &[1, 2, 3], 2);
        let shipped = ConventionTable::shipped();
        for (key, e) in &fresh.families {
            let s = &shipped.families[key];
            assert_eq!((e.selector, e.rule, e.uniform_rule_status), (s.selector, s.rule, s.uniform_rule_status), "{key}");
            assert_eq!(e.mismatches, 0, "{key}");
        }
        assert_eq!(records.len(), 9);
        check_conventions(&shipped, 400, &[1, 2, 3, 5]).unwrap();
    }

    #[test]
    fn uniform_rule_alone_fails_somewhere() {
        let uniform = ConventionTable::uniform();
        assert!(check_conventions(&uniform, 200, &[1, 2, 3]).is_err());
    }
}
