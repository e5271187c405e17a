//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary so the lines always reach the output. Exits
//! nonzero when a criterion fails, unless it is listed in `KNOWN_FAILURES`
//! and the failure is exactly the documented one.

use std::time::{Duration, Instant};

use charsum::algebra::{FpPolynomial, OddPrime};
use charsum::cli::bench::bench_family;
use charsum::cli::suites::{run_suite, Suite, SuiteConfig};
use charsum::closedform::{
    eval_cubic_cm, eval_derived_gn, eval_power_2k, phi_closed, pin_conventions, psi_closed, quartic_reduce,
    weil_audit, FamilyQuery,
};
use charsum::cm::{ConventionTable, CM_DISCRIMINANTS};
use charsum::families::{has_linear_factor, FamilyId};
use charsum::hasse::{class_number_of_discriminant, hasse_eval, is_supersingular, legendre_form_sum};
use charsum::oracle::VerificationReport;
use charsum::value::Method;

/// Tolerances, pinned.
const QUADRATIC_BUDGET: Duration = Duration::from_secs(120);
const CM_EVAL_BUDGET: Duration = Duration::from_millis(50);
const MIN_SPEEDUP: f64 = 1e3;
const WEIL_SEXTIC_FACTOR: f64 = 4.0;

/// Criteria that fail as stated, each with the check that the failure is the
/// documented one.
const KNOWN_FAILURES: [u32; 1] = [10];

struct Outcome {
    pass: bool,
    detail: String,
    /// For known failures: whether the failure matches the documentation.
    documented: bool,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into(), documented: false }
}

fn p(n: u64) -> OddPrime {
    OddPrime::new(n).unwrap()
}

fn jobs() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn cfg(p_max: u64) -> SuiteConfig {
    SuiteConfig { jobs: jobs(), ..SuiteConfig::new(p_max) }
}

fn clean(r: &VerificationReport) -> bool {
    r.passed() && r.mismatches() == 0 && !r.cases.is_empty()
}

fn quadratic() -> Outcome {
    let start = Instant::now();
    let r = run_suite(Suite::Quadratic, &cfg(1999));
    let t = start.elapsed();
    ok(clean(&r) && t < QUADRATIC_BUDGET, format!("{} in {:.1}s", r.summary_line(), t.as_secs_f64()))
}

fn cm_cubic() -> Outcome {
    let (pinned, _) = pin_conventions(1999, &[1, 2, 3], jobs());
    let shipped = ConventionTable::shipped();
    let same = pinned.families.iter().all(|(k, e)| shipped.families[k].selector == e.selector);
    let r = run_suite(Suite::CmCubic, &SuiteConfig { conventions: pinned.clone(), ..cfg(1999) });
    let w = |n, a, q| eval_cubic_cm(n, a, p(q), &pinned).unwrap().value;
    let witnesses = w(1, 1, 5) == -2 && w(1, 1, 7) == 0 && w(3, 1, 13) == -2;
    ok(clean(&r) && witnesses && same, format!("{}; witnesses {witnesses}; pinned = shipped {same}", r.summary_line()))
}

fn derived() -> Outcome {
    let r = run_suite(Suite::Derived, &cfg(1999));
    let fallback = r.count_method(Method::OracleFallback);
    let closed_ok = r.cases.iter().filter(|c| c.method == Some(Method::DerivedGn)).all(|c| c.matched);
    let t = ConventionTable::shipped();
    let w = |n, a, q| eval_derived_gn(n, a, p(q), &t).unwrap().value;
    let witnesses = w(1, 1, 5) == -3 && w(1, 1, 7) == -1 && w(3, 1, 7) == 7;
    ok(
        clean(&r) && closed_ok && witnesses,
        format!(
            "{}; fallback fraction {:.3}; witnesses {witnesses}",
            r.summary_line(),
            fallback as f64 / r.cases.len() as f64
        ),
    )
}

fn even_split() -> Outcome {
    let r = run_suite(Suite::EvenSplit, &cfg(299));
    ok(clean(&r), r.summary_line())
}

fn split_quartic() -> Outcome {
    let r = run_suite(Suite::SplitQuartic, &cfg(999));
    let q = p(7);
    let f = FpPolynomial::from_roots(q, &[0, 6, 5, 4]);
    let witness = quartic_reduce(&f).unwrap().value == -1;
    ok(clean(&r) && witness, format!("{}; witness {witness}", r.summary_line()))
}

fn hasse_sign() -> Outcome {
    let r = run_suite(Suite::HasseSign, &cfg(999));
    let s = |b, q| legendre_form_sum(b, p(q)).unwrap().value;
    let witnesses = s(2, 5) == 2
        && hasse_eval(2, p(5)) == 3
        && s(3, 7) == -4
        && hasse_eval(3, p(7)) == 4
        && s(2, 7) == 0
        && is_supersingular(2, p(7)).unwrap();
    let min_p = r.cases.iter().map(|c| c.p).min().unwrap_or(0);
    ok(clean(&r) && witnesses && min_p == 17, format!("{}; witnesses {witnesses}", r.summary_line()))
}

fn hasse_factors() -> Outcome {
    let r = run_suite(Suite::HasseFactors, &cfg(299));
    let sq = run_suite(Suite::Squarefree, &cfg(999));
    let h = [(-7, 1), (-23, 3), (-20, 2)].iter().all(|&(d, h)| class_number_of_discriminant(d) == h);
    ok(clean(&r) && clean(&sq) && h, format!("{}; {}; class numbers {h}", r.summary_line(), sq.summary_line()))
}

fn jacobsthal() -> Outcome {
    let r = run_suite(Suite::Jacobsthal, &cfg(1999));
    let regress = psi_closed(3, 1, p(13)).unwrap().value == -2 && phi_closed(3, 1, p(13)).unwrap().value == -3;
    let zeros = r.cases.iter().filter(|c| c.method == Some(Method::PhiVanishing)).count();
    let exact = r.cases.iter().filter(|c| !c.residue_only).count();
    ok(
        clean(&r) && regress && zeros > 0,
        format!("{}; {exact} exact lifts; {zeros} vanishing cases; regressions {regress}", r.summary_line()),
    )
}

fn power_sum() -> Outcome {
    let r = run_suite(Suite::PowerSum, &cfg(1999));
    let v = eval_power_2k(2, 1, p(5)).unwrap();
    let parts: Vec<i64> = v.parts.iter().map(|x| x.value).collect();
    let witness = v.value == -3 && parts == [-2, -1];
    ok(clean(&r) && witness, format!("{}; witness {witness}", r.summary_line()))
}

fn weil() -> Outcome {
    let mut worst = (0.0f64, 0u64, 0i64, 0u64, 0i64);
    let mut literal = Vec::new();
    let mut corrected_ok = true;
    for n in CM_DISCRIMINANTS.into_iter().filter(|&n| !has_linear_factor(n)) {
        let a = weil_audit(FamilyId::Derived(n), 3, 1999, &[1, 2, 3], jobs()).unwrap();
        corrected_ok &= a.genus_bound_holds();
        for c in &a.strict_violations {
            literal.push((n, c.p, c.a, c.sum));
        }
        if a.max_ratio > worst.0 {
            let c = a.argmax.unwrap();
            worst = (c.ratio, n, c.a, c.p, c.sum);
        }
    }
    let f7 = weil_audit(FamilyId::Derived(3), 7, 7, &[1], 1).unwrap();
    let f7_ratio = f7.max_ratio;
    let pass = literal.is_empty();
    // Documented: only x^6 + a exceeds 4 sqrt(p), by less than the point at
    // infinity allows, with p = 103, a = 1, S = -41 among the cases.
    let documented = !pass
        && corrected_ok
        && literal.iter().all(|&(n, ..)| n == 3)
        && literal.contains(&(3, 103, 1, -41))
        && (f7_ratio - 7f64.sqrt()).abs() < 1e-9;
    let detail = format!(
        "|S| <= {WEIL_SEXTIC_FACTOR} sqrt(p) fails in {} sextic cases (first g{} p = {} a = {} S = {}); \
         |S| <= 4 sqrt(p) + 1 holds: {corrected_ok}; max ratio {:.4} (g{} a = {} p = {}); \
         2 sqrt(p) counter-witness x^6 + 1 over F_7 ratio {f7_ratio:.4}",
        literal.len(),
        literal.first().map(|x| x.0).unwrap_or(0),
        literal.first().map(|x| x.1).unwrap_or(0),
        literal.first().map(|x| x.2).unwrap_or(0),
        literal.first().map(|x| x.3).unwrap_or(0),
        worst.0,
        worst.1,
        worst.2,
        worst.3,
    );
    Outcome { pass, detail, documented }
}

fn performance() -> Outcome {
    let t = ConventionTable::shipped();
    let q = FamilyQuery::new(FamilyId::Cubic(1));
    let rows = bench_family(&q, 30, Duration::from_millis(500), &t).unwrap();
    let last = rows.last().unwrap();
    let single = {
        let start = Instant::now();
        let v = eval_cubic_cm(1, 1, p(last.p), &t).unwrap();
        (start.elapsed(), v.value)
    };
    let pass = single.0 < CM_EVAL_BUDGET && last.speedup > MIN_SPEEDUP;
    ok(
        pass,
        format!(
            "p = {} (2^{}): one evaluation {:.3} ms, mean {:.3e} s, oracle {} {:.2} s, speedup {:.2e}",
            last.p,
            last.bits,
            single.0.as_secs_f64() * 1e3,
            last.t_closed,
            if last.oracle_extrapolated { "extrapolated" } else { "measured" },
            last.t_oracle,
            last.speedup
        ),
    )
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "quadratic sums", quadratic),
        (2, "CM cubics under pinned sign rules", cm_cubic),
        (3, "derived sextics", derived),
        (4, "even split identity", even_split),
        (5, "split quartics and root orderings", split_quartic),
        (6, "Hasse sign law", hasse_sign),
        (7, "Hasse factor counts and class numbers", hasse_factors),
        (8, "Jacobsthal congruences", jacobsthal),
        (9, "binomial power sums", power_sum),
        (10, "Weil audit", weil),
        (11, "performance at p near 2^30", performance),
    ];
    let mut unexpected = Vec::new();
    for (id, name, check) in criteria {
        let start = Instant::now();
        let o = check();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("{status} criterion {id:>2} ({name}): {} [{:.1}s]", o.detail, start.elapsed().as_secs_f64());
        if !o.pass {
            if KNOWN_FAILURES.contains(&id) && o.documented {
                println!("     criterion {id:>2} failure matches the documented counterexample");
            } else {
                unexpected.push(id);
            }
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: no unexpected failures");
    } else {
        println!("acceptance: unexpected failures in criteria {unexpected:?}");
        std::process::exit(1);
    }
}
