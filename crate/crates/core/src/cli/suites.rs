//! Verification campaigns: each suite compares one closed form with direct
//! summation over a range of primes and returns a sorted report.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{gcd, legendre_residue, odd_primes_up_to, FpPolynomial, OddPrime};
use crate::closedform::{
    eval_cubic_cm, eval_derived_gn, eval_form, eval_newton_k1, eval_power_2k, eval_quadratic, evaluate, evaluate_closed,
    phi_closed, point_count, psi_closed, quartic_reduce, split_transform, alternative_reduction, weil_audit, FamilyQuery,
    QuarticReduction, Strategy,
};
use crate::cm::{family_key, ConventionTable, CM_DISCRIMINANTS};
use crate::error::Error;
use crate::families::{cubic_cofactor, cubic_poly, derived_poly, has_linear_factor, form_poly, has_good_reduction, FamilyId, FormParams};
use crate::hasse::{factor_counts, hasse_eval, legendre_cubic, legendre_form_sum, squarefree_check};
use crate::oracle::{
    affine_point_count, char_sum_direct, verify_cases, with_jobs, CaseRecord, CharacterTable, ErratumKind, Params, VerificationReport,
};
use crate::value::{Method, SumValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// `S(a x^2 + b x + c)` against direct sums.
    Quadratic,
    /// The CM cubics `f_n` under the pinned sign rules.
    CmCubic,
    /// The derived sextics `g_n`.
    Derived,
    /// `S(f(x^2)) = S(x f) + S(f)` for random `f` of degree at most 4.
    EvenSplit,
    /// Random split quartics through the cross-ratio reduction.
    SplitQuartic,
    /// `S(F_beta) = -lift(H(beta))` for every `beta`.
    HasseSign,
    /// Factor counts of `H` against the class number.
    HasseFactors,
    /// `H` has simple roots.
    Squarefree,
    /// `phi_k` and `psi_k` through binomial congruences.
    Jacobsthal,
    /// `S(x^(2k) + a) = phi_k(a) + psi_k(a)`.
    PowerSum,
    /// `|S(g_n)| / sqrt(p)` along the derived families.
    Weil,
    /// Agreement between alternative closed paths and point counts.
    Identities,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Quadratic,
        Suite::CmCubic,
        Suite::Derived,
        Suite::EvenSplit,
        Suite::SplitQuartic,
        Suite::HasseSign,
        Suite::HasseFactors,
        Suite::Squarefree,
        Suite::Jacobsthal,
        Suite::PowerSum,
        Suite::Weil,
        Suite::Identities,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Quadratic => "quadratic",
            Suite::CmCubic => "cm-cubic",
            Suite::Derived => "derived",
            Suite::EvenSplit => "even-split",
            Suite::SplitQuartic => "split-quartic",
            Suite::HasseSign => "hasse-sign",
            Suite::HasseFactors => "hasse-factors",
            Suite::Squarefree => "squarefree",
            Suite::Jacobsthal => "jacobsthal",
            Suite::PowerSum => "power-sum",
            Suite::Weil => "weil",
            Suite::Identities => "identities",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub p_max: u64,
    pub seed: u64,
    pub jobs: usize,
    pub conventions: ConventionTable,
}

impl SuiteConfig {
    pub fn new(p_max: u64) -> Self {
        SuiteConfig { p_max, seed: 1, jobs: 1, conventions: ConventionTable::shipped() }
    }

    /// Generator for prime `p`, independent of scheduling.
    fn rng(&self, p: OddPrime) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ p.get().wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> VerificationReport {
    log::info!("suite {} up to p = {}", suite.name(), cfg.p_max);
    let mut r = match suite {
        Suite::Quadratic => quadratic(cfg),
        Suite::CmCubic => cm_cubic(cfg),
        Suite::Derived => derived(cfg),
        Suite::EvenSplit => even_split(cfg),
        Suite::SplitQuartic => split_quartic(cfg),
        Suite::HasseSign => hasse_sign(cfg),
        Suite::HasseFactors => hasse_factors(cfg),
        Suite::Squarefree => squarefree(cfg),
        Suite::Jacobsthal => jacobsthal(cfg),
        Suite::PowerSum => power_sum(cfg),
        Suite::Weil => weil(cfg),
        Suite::Identities => identities(cfg),
    };
    r.family = suite.name().to_string();
    log::info!("{}", r.summary_line());
    r
}

fn params(pairs: &[(&str, i64)]) -> Params {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn get(prm: &Params, key: &str) -> i64 {
    prm[key]
}

fn coeffs_of(prm: &Params, keys: &[&str]) -> Vec<i64> {
    keys.iter().map(|k| get(prm, k)).collect()
}

fn quadratic(cfg: &SuiteConfig) -> VerificationReport {
    verify_cases(
        "quadratic",
        3,
        cfg.p_max,
        |p| {
            let n = p.get() as i64;
            let inner = n.min(10);
            if n < 100 {
                let mut v = Vec::new();
                for a in 1..n {
                    for b in 0..inner {
                        for c in 0..inner {
                            v.push(params(&[("a", a), ("b", b), ("c", c)]));
                        }
                    }
                }
                v
            } else {
                let mut rng = cfg.rng(p);
                (0..200)
                    .map(|_| {
                        let a = rng.gen_range(1..n);
                        let b = rng.gen_range(0..inner);
                        let c = rng.gen_range(0..inner);
                        params(&[("a", a), ("b", b), ("c", c)])
                    })
                    .collect()
            }
        },
        |p, prm| Ok(eval_quadratic(get(prm, "a"), get(prm, "b"), get(prm, "c"), p)),
        |t, prm| t.sum(&FpPolynomial::from_i64(t.modulus(), &coeffs_of(prm, &["c", "b", "a"]))),
        cfg.jobs,
    )
}

fn cm_params(p: OddPrime, derived: bool) -> Vec<Params> {
    let mut v = Vec::new();
    for n in CM_DISCRIMINANTS {
        for a in 1..=3 {
            let ok = if derived { derived_poly(n, a, p).is_ok() } else { has_good_reduction(n, a, p) };
            if ok {
                v.push(params(&[("n", n as i64), ("a", a)]));
            }
        }
    }
    v
}

fn cm_cubic(cfg: &SuiteConfig) -> VerificationReport {
    let run = |table: &ConventionTable, label: &str| {
        verify_cases(
            label,
            3,
            cfg.p_max,
            |p| cm_params(p, false),
            |p, prm| eval_cubic_cm(get(prm, "n") as u64, get(prm, "a"), p, table),
            |t, prm| t.sum(&cubic_poly(get(prm, "n") as u64, get(prm, "a"), t.modulus()).expect("admissible")),
            cfg.jobs,
        )
    };
    let mut report = run(&cfg.conventions, "cm-cubic");
    for (k, e) in &cfg.conventions.families {
        report.conventions.insert(k.clone(), serde_json::to_value(e).expect("serializable"));
    }
    // The uniform rule alone, for the record.
    let uniform = run(&ConventionTable::uniform(), "uniform");
    let mut per_family: BTreeMap<String, usize> = BTreeMap::new();
    for c in uniform.cases.iter().filter(|c| !c.matched) {
        *per_family.entry(family_key(c.params["n"] as u64)).or_default() += 1;
    }
    for (key, count) in &per_family {
        let n: i64 = key[1..].parse().expect("family key");
        report.push_erratum(
            ErratumKind::FormulaVariant,
            None,
            params(&[("n", n)]),
            format!("sign rule (u|n) = (2|p) fails or is undefined in {count} cases; pinned selector used instead"),
        );
    }
    report.observe("uniform_rule_failures", &per_family);
    report.finalize();
    report
}

fn derived(cfg: &SuiteConfig) -> VerificationReport {
    let mut report = verify_cases(
        "derived",
        3,
        cfg.p_max,
        |p| cm_params(p, true),
        |p, prm| eval_derived_gn(get(prm, "n") as u64, get(prm, "a"), p, &cfg.conventions),
        |t, prm| t.sum(&derived_poly(get(prm, "n") as u64, get(prm, "a"), t.modulus()).expect("admissible")),
        cfg.jobs,
    );
    let fallback = report.count_method(Method::OracleFallback);
    let closed: Vec<&CaseRecord> = report.cases.iter().filter(|c| c.method == Some(Method::DerivedGn)).collect();
    let (closed_total, closed_matched) = (closed.len(), closed.iter().filter(|c| c.matched).count());
    let inert_ok = report
        .cases
        .iter()
        .filter(|c| [1, 2, 7].contains(&c.params["n"]) && c.u_chosen.is_none() && c.error.is_none())
        .all(|c| c.matched);
    let total = report.cases.len();
    report.observe("oracle_fallback_cases", fallback);
    report.observe("oracle_fallback_fraction", if total == 0 { 0.0 } else { fallback as f64 / total as f64 });
    report.observe("closed_cases", closed_total);
    report.observe("closed_cases_matched", closed_matched);
    report.observe("inert_value_is_quadratic_part", inert_ok);
    report
}

const C5: [&str; 5] = ["c0", "c1", "c2", "c3", "c4"];

fn even_split(cfg: &SuiteConfig) -> VerificationReport {
    verify_cases(
        "even-split",
        3,
        cfg.p_max.min(299),
        |p| {
            let mut rng = cfg.rng(p);
            (0..200)
                .map(|i| {
                    let deg = rng.gen_range(0..=4usize);
                    let mut prm = params(&[("i", i)]);
                    for (j, key) in C5.iter().enumerate() {
                        let c = match j.cmp(&deg) {
                            std::cmp::Ordering::Less => rng.gen_range(0..p.get()),
                            std::cmp::Ordering::Equal => rng.gen_range(1..p.get()),
                            std::cmp::Ordering::Greater => 0,
                        };
                        prm.insert(key.to_string(), c as i64);
                    }
                    prm
                })
                .collect()
        },
        |p, prm| {
            let f = FpPolynomial::from_i64(p, &coeffs_of(prm, &C5));
            split_transform(&f, |g| Ok(evaluate(g, &cfg.conventions)))
        },
        |t, prm| t.sum(&FpPolynomial::from_i64(t.modulus(), &coeffs_of(prm, &C5)).compose_square()),
        cfg.jobs,
    )
}

const SHIFTS: [&str; 4] = ["a1", "a2", "a3", "a4"];

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let v = [a, b, c, d];
                    if (0..4).all(|i| v.contains(&i)) {
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

fn shifts_of(prm: &Params) -> [u64; 4] {
    SHIFTS.map(|k| prm[k] as u64)
}

fn split_quartic(cfg: &SuiteConfig) -> VerificationReport {
    let perms = permutations4();
    let mut report = verify_cases(
        "split-quartic",
        3,
        cfg.p_max.min(999),
        |p| {
            let mut rng = cfg.rng(p);
            (0..100)
                .map(|i| {
                    let mut prm = params(&[("i", i)]);
                    for key in SHIFTS {
                        prm.insert(key.to_string(), rng.gen_range(0..p.get()) as i64);
                    }
                    prm
                })
                .collect()
        },
        |p, prm| {
            let s = shifts_of(prm);
            let f = FpPolynomial::from_roots(p, &s.map(|a| p.neg(a)));
            let v = quartic_reduce(&f)?;
            if let Ok(base) = QuarticReduction::new(s, p) {
                for perm in &perms {
                    let r = QuarticReduction::new(perm.map(|i| s[i]), p)?;
                    let w = r.sum(p)?;
                    if w.value != v.value {
                        return Err(Error::Internal(format!(
                            "ordering {perm:?} gives {} instead of {} (beta {} vs {})",
                            w.value, v.value, r.beta, base.beta
                        )));
                    }
                }
            }
            Ok(v)
        },
        |t, prm| t.sum_linear_product(&shifts_of(prm)),
        cfg.jobs,
    );
    // The alternative reduction, scored on the same cases.
    let mut evaluated = 0usize;
    let mut disagree = Vec::new();
    for c in &report.cases {
        let p = OddPrime::new(c.p).expect("prime");
        if p.get() < 17 {
            continue;
        }
        let s = shifts_of(&c.params);
        if QuarticReduction::new(s, p).is_err() {
            continue;
        }
        if let Some(v) = alternative_reduction(s, p) {
            evaluated += 1;
            if v != c.oracle {
                disagree.push((c.p, c.params.clone(), v, c.oracle));
            }
        }
    }
    report.observe("alternative_reduction_evaluated", evaluated);
    report.observe("alternative_reduction_disagreements", disagree.len());
    if let Some((p, prm, v, o)) = disagree.first() {
        report.push_erratum(
            ErratumKind::FormulaVariant,
            Some(*p),
            prm.clone(),
            format!("alternative reduction gives {v}, direct sum {o}; cross-ratio form used"),
        );
    }
    report.finalize();
    report
}

fn hasse_sign(cfg: &SuiteConfig) -> VerificationReport {
    let mut report = verify_cases(
        "hasse-sign",
        17,
        cfg.p_max,
        |p| (2..p.get() as i64 - 1).map(|b| params(&[("beta", b)])).collect(),
        |p, prm| legendre_form_sum(get(prm, "beta") as u64, p),
        |t, prm| t.sum(&legendre_cubic(get(prm, "beta") as u64, t.modulus())),
        cfg.jobs,
    );
    // How often the unsigned congruence S = H(beta) mod p would also hold.
    let plus = report
        .cases
        .iter()
        .filter(|c| {
            let p = OddPrime::new(c.p).expect("prime");
            let h = hasse_eval(c.params["beta"] as u64, p);
            p.reduce(c.oracle) == h
        })
        .count();
    report.observe("unsigned_congruence_holds", plus);
    report.observe("cases", report.cases.len());
    report.push_erratum(
        ErratumKind::FormulaVariant,
        Some(5),
        params(&[("beta", 2)]),
        "S(F_beta) = H(beta) mod p fails: S = 2, H = 3; S = -H holds",
    );
    report.finalize();
    report
}

fn record_count(p: u64, what: i64, closed: u64, expected: Option<u64>) -> CaseRecord {
    CaseRecord {
        p,
        params: params(&[("count", what)]),
        closed: Some(closed as i64),
        oracle: expected.map(|e| e as i64).unwrap_or(-1),
        matched: expected == Some(closed),
        u_chosen: None,
        method: None,
        residue_only: false,
        error: None,
    }
}

fn hasse_factors(cfg: &SuiteConfig) -> VerificationReport {
    let primes: Vec<OddPrime> = odd_primes_up_to(cfg.p_max).into_iter().filter(|p| p.get() > 5).collect();
    let rows: Vec<_> = with_jobs(cfg.jobs, || {
        use rayon::prelude::*;
        primes.par_iter().map(|&p| factor_counts(p).expect("p > 3")).collect()
    });
    let mut report = VerificationReport::new("hasse-factors", cfg.p_max);
    let mut all_quadratic = 0;
    for fc in &rows {
        let (n1, n2) = crate::hasse::predicted_factor_counts(fc.p, fc.h);
        report.cases.push(record_count(fc.p, 1, fc.n1, Some(n1)));
        report.cases.push(record_count(fc.p, 2, fc.n2, n2));
        if Some(fc.n2_all) != n2 {
            all_quadratic += 1;
        }
    }
    report.observe("class_numbers", rows.iter().map(|fc| (fc.p.to_string(), fc.h)).collect::<BTreeMap<_, _>>());
    report.observe("all_quadratic_factor_count_disagrees", all_quadratic);
    if all_quadratic > 0 {
        report.push_erratum(
            ErratumKind::Observation,
            None,
            Params::new(),
            "the quadratic-factor count matches the class-number formula only for reciprocal factors x^2 + c x + 1",
        );
    }
    report.finalize();
    report
}

fn squarefree(cfg: &SuiteConfig) -> VerificationReport {
    let primes: Vec<OddPrime> = odd_primes_up_to(cfg.p_max).into_iter().filter(|p| p.get() > 3).collect();
    let rows: Vec<(u64, bool)> = with_jobs(cfg.jobs, || {
        use rayon::prelude::*;
        primes.par_iter().map(|&p| (p.get(), squarefree_check(p).expect("p > 3"))).collect()
    });
    let mut report = VerificationReport::new("squarefree", cfg.p_max);
    for (p, ok) in rows {
        let mut c = record_count(p, 0, ok as u64, Some(1));
        c.params = params(&[("squarefree", 1)]);
        report.cases.push(c);
    }
    report.finalize();
    report
}

/// `sum chi(x)^e chi(x^k + a)` from a character table.
fn power_sum_table(t: &CharacterTable, k: u64, a: i64, with_x: bool) -> i64 {
    let p = t.modulus();
    let a = p.reduce(a);
    (0..p.get())
        .map(|x| {
            let inner = t.chi(p.add(p.pow(x, k), a)) as i64;
            if with_x {
                t.chi(x) as i64 * inner
            } else {
                inner
            }
        })
        .sum()
}

fn jacobsthal(cfg: &SuiteConfig) -> VerificationReport {
    let mut report = verify_cases(
        "jacobsthal",
        3,
        cfg.p_max,
        |p| {
            let mut v = Vec::new();
            for k in 2..=6u64 {
                let split = (p.get() - 1) % (2 * k) == 0;
                let phi_zero = p.get() % (2 * k) == (k + 1) % (2 * k);
                let psi_zero = gcd(k, p.get() - 1) == 1;
                for a in 1..=10 {
                    if p.reduce(a) == 0 {
                        continue;
                    }
                    if split || phi_zero {
                        v.push(params(&[("k", k as i64), ("a", a), ("phi", 1)]));
                    }
                    if split || psi_zero {
                        v.push(params(&[("k", k as i64), ("a", a), ("phi", 0)]));
                    }
                }
            }
            v
        },
        |p, prm| {
            let (k, a) = (get(prm, "k") as u64, get(prm, "a"));
            if get(prm, "phi") == 1 {
                phi_closed(k, a, p)
            } else {
                psi_closed(k, a, p)
            }
        },
        |t, prm| power_sum_table(t, get(prm, "k") as u64, get(prm, "a"), get(prm, "phi") == 1),
        cfg.jobs,
    );
    let exact = report.cases.iter().filter(|c| !c.residue_only && c.matched).count();
    report.observe("exact_lifts_matched", exact);
    report.observe("residue_only_cases", report.cases.iter().filter(|c| c.residue_only).count());
    report.observe("vanishing_phi_cases", report.count_method(Method::PhiVanishing));
    report.observe("bijective_psi_cases", report.count_method(Method::PsiBijection));
    report.push_erratum(
        ErratumKind::FormulaVariant,
        Some(13),
        params(&[("k", 3), ("a", 1), ("phi", 0)]),
        "binomial sum for psi must start at i = 1: with i = 0 it gives -3, direct sum -2",
    );
    report.finalize();
    report
}

fn power_sum(cfg: &SuiteConfig) -> VerificationReport {
    let mut report = verify_cases(
        "power-sum",
        3,
        cfg.p_max,
        |p| {
            let mut v = Vec::new();
            for k in 1..=6u64 {
                if (p.get() - 1) % (2 * k) != 0 {
                    continue;
                }
                for a in 1..=10 {
                    if p.reduce(a) != 0 {
                        v.push(params(&[("k", k as i64), ("a", a)]));
                    }
                }
            }
            v
        },
        |p, prm| eval_power_2k(get(prm, "k") as u64, get(prm, "a"), p),
        |t, prm| power_sum_table(t, 2 * get(prm, "k") as u64, get(prm, "a"), false),
        cfg.jobs,
    );
    report.observe("residue_only_cases", report.cases.iter().filter(|c| c.residue_only).count());
    report
}

fn weil(cfg: &SuiteConfig) -> VerificationReport {
    let mut report = VerificationReport::new("weil", cfg.p_max);
    let mut audits = BTreeMap::new();
    for n in CM_DISCRIMINANTS {
        let audit = weil_audit(FamilyId::Derived(n), 3, cfg.p_max, &[1, 2, 3], cfg.jobs).expect("derived family");
        for c in &audit.genus_violations {
            report.push_erratum(
                ErratumKind::Unexplained,
                Some(c.p),
                params(&[("n", n as i64), ("a", c.a)]),
                format!("|S| = {} exceeds {} sqrt(p) + {}", c.sum.abs(), audit.genus_factor, audit.infinity_slack),
            );
        }
        if let Some(c) = audit.strict_violations.first() {
            report.push_erratum(
                ErratumKind::Observation,
                Some(c.p),
                params(&[("n", n as i64), ("a", c.a), ("bound", audit.genus_factor as i64)]),
                format!(
                    "|S| <= {} sqrt(p) without the point-at-infinity term fails in {} cases; first |S| = {}",
                    audit.genus_factor,
                    audit.strict_violations.len(),
                    c.sum.abs()
                ),
            );
        }
        if let Some(c) = audit.two_sqrt_p_examples.first() {
            report.push_erratum(
                ErratumKind::Observation,
                Some(c.p),
                params(&[("n", n as i64), ("a", c.a)]),
                format!(
                    "|S| <= 2 sqrt(p) fails in {} cases; first |S| = {}, ratio {:.4}",
                    audit.two_sqrt_p_violations,
                    c.sum.abs(),
                    c.ratio
                ),
            );
        }
        audits.insert(audit.family.clone(), audit);
    }
    report.observe("audits", &audits);
    report.finalize();
    report
}

/// Target parameter and sign of the Legendre-form identities: `(i)`
/// `beta -> 1/beta` with `(beta|p)`, `(ii)` `beta -> 1 - beta` with `(-1|p)`,
/// `(iii)` `beta^2 -> (1 + beta)^2 / 4 beta` with `(beta|p)`. Returns the
/// target parameter and the sign; for `(iii)` the source is `beta^2`.
fn legendre_transform(id: i64, beta: u64, p: OddPrime) -> Option<(u64, i64)> {
    let ok = |b: u64| b != 0 && b != 1;
    if !ok(beta) {
        return None;
    }
    let chi = |v: u64| legendre_residue(v, p) as i64;
    match id {
        4 => Some((p.inv(beta)?, chi(beta))),
        5 => Some((p.sub(1, beta), chi(p.get() - 1))),
        _ => {
            // beta here is the root b of the source parameter b^2
            let src = p.mul(beta, beta);
            let t = p.mul(p.pow(p.add(1, beta), 2), p.inv(p.mul(4, beta))?);
            (ok(src) && ok(t)).then_some((t, chi(beta)))
        }
    }
}

fn identities(cfg: &SuiteConfig) -> VerificationReport {
    let mut report = identity_cases(cfg);
    // Identity (i) read literally, without the symbol.
    let mut literal_failures = 0usize;
    let mut first = None;
    for c in report.cases.iter().filter(|c| c.params["identity"] == 4) {
        let p = OddPrime::new(c.p).expect("prime");
        let beta = c.params["beta"] as u64;
        let other = char_sum_direct(&legendre_cubic(p.inv(beta).expect("nonzero"), p)).value;
        if other != c.oracle {
            literal_failures += 1;
            first.get_or_insert((c.p, c.params.clone(), other, c.oracle));
        }
    }
    report.observe("reciprocal_identity_without_symbol_failures", literal_failures);
    if let Some((p, prm, other, o)) = first {
        report.push_erratum(
            ErratumKind::FormulaVariant,
            Some(p),
            prm,
            format!("S(F_beta) = S(F_1/beta) fails ({o} vs {other}); holds with the factor (beta|p)"),
        );
    }
    report.finalize();
    report
}

fn identity_cases(cfg: &SuiteConfig) -> VerificationReport {
    let t = &cfg.conventions;
    verify_cases(
        "identities",
        3,
        cfg.p_max,
        |p| {
            let mut v = Vec::new();
            for prm in cm_params(p, true) {
                let mut a = prm.clone();
                a.insert("identity".into(), 1);
                v.push(a);
                if p.get() < 200 {
                    let mut b = prm;
                    b.insert("identity".into(), 3);
                    v.push(b);
                }
            }
            if p.get() < 500 {
                v.extend((2..p.get() as i64 - 1).map(|b| params(&[("identity", 2), ("beta", b)])));
            }
            if p.get() < 300 {
                for b in 2..p.get() {
                    for id in 4..=6 {
                        if legendre_transform(id, b, p).is_some() {
                            v.push(params(&[("identity", id), ("beta", b as i64)]));
                        }
                    }
                }
            }
            v
        },
        |p, prm| match get(prm, "identity") {
            // g_n via the generic split transform, against the derived formula
            1 => {
                let (n, a) = (get(prm, "n") as u64, get(prm, "a"));
                let half = if has_linear_factor(n) { cubic_cofactor(n, a, p)? } else { cubic_poly(n, a, p)? };
                let generic = split_transform(&half, |g| evaluate_closed(g, t));
                let direct = eval_derived_gn(n, a, p, t)?;
                match generic {
                    Ok(v) if direct.method == Method::DerivedGn && v.value != direct.value => Err(Error::Internal(
                        format!("split transform {} != derived formula {}", v.value, direct.value),
                    )),
                    Ok(v) => Ok(v),
                    Err(_) => Ok(direct.with_note("split transform not closed here")),
                }
            }
            // quartic Legendre form: dedicated formula against the generic reduction
            2 => {
                let beta = get(prm, "beta");
                let k1 = eval_newton_k1(beta, p)?;
                match eval_form(FormParams::Newton { k: 1, beta }, p) {
                    Ok(v) if v.value != k1.value => {
                        Err(Error::Internal(format!("form reduction {} != dedicated {}", v.value, k1.value)))
                    }
                    _ => Ok(k1),
                }
            }
            // F_beta against a transformed parameter
            id @ 4..=6 => {
                let beta = get(prm, "beta") as u64;
                let (target, sign) = legendre_transform(id, beta, p).expect("generated");
                let s = char_sum_direct(&legendre_cubic(target, p)).value;
                Ok(SumValue::exact(sign * s, Method::Oracle).with_part("S(F_target)", s, Method::Oracle))
            }
            // affine point count from the closed form
            _ => {
                let q = FamilyQuery::new(FamilyId::Derived(get(prm, "n") as u64)).with_a(get(prm, "a"));
                let pc = point_count(&q, p, Strategy::Auto, t)?;
                Ok(SumValue { value: pc.affine, ..pc.sum })
            }
        },
        |tab, prm| {
            let p = tab.modulus();
            match get(prm, "identity") {
                1 => tab.sum(&derived_poly(get(prm, "n") as u64, get(prm, "a"), p).expect("admissible")),
                4 | 5 => tab.sum(&legendre_cubic(get(prm, "beta") as u64, p)),
                6 => {
                    let b = get(prm, "beta") as u64;
                    tab.sum(&legendre_cubic(p.mul(b, b), p))
                }
                2 => tab.sum(&form_poly(FormParams::Newton { k: 1, beta: get(prm, "beta") }, p).expect("valid")),
                _ => affine_point_count(&derived_poly(get(prm, "n") as u64, get(prm, "a"), p).expect("admissible")).affine,
            }
        },
        cfg.jobs,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_on_a_small_range() {
        let cfg = SuiteConfig { jobs: 2, ..SuiteConfig::new(60) };
        for s in Suite::ALL {
            let r = run_suite(s, &cfg);
            assert!(r.passed(), "{}: {:?}", s.name(), r.errata.iter().find(|e| e.kind == ErratumKind::Unexplained));
        }
    }

    #[test]
    fn tiny_range_is_empty() {
        let cfg = SuiteConfig::new(3);
        for s in Suite::ALL {
            assert!(run_suite(s, &cfg).passed());
        }
    }

    #[test]
    fn reports_do_not_depend_on_jobs() {
        let one = SuiteConfig { jobs: 1, ..SuiteConfig::new(80) };
        let four = SuiteConfig { jobs: 4, ..SuiteConfig::new(80) };
        for s in [Suite::Quadratic, Suite::SplitQuartic, Suite::CmCubic] {
            assert_eq!(run_suite(s, &one).to_json(), run_suite(s, &four).to_json());
        }
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations4().len(), 24);
    }
}
