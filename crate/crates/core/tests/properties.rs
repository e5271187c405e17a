use charsum::algebra::{odd_primes_up_to, FpPolynomial, OddPrime};
use charsum::closedform::{
    eval_cubic_cm, eval_quadratic, evaluate, family_sum, point_count, quartic_reduce, split_transform, FamilyQuery,
    QuarticReduction, Strategy as Path,
};
use charsum::cm::{ConventionTable, CM_DISCRIMINANTS};
use charsum::families::{cubic_poly, FamilyId};
use charsum::hasse::{hasse_eval, legendre_cubic, legendre_form_sum};
use charsum::oracle::{affine_point_count, char_sum_direct, CharacterTable};
use charsum::{Method, SumValue};
use proptest::prelude::*;

fn prime_below(limit: u64) -> impl Strategy<Value = OddPrime> {
    let primes = odd_primes_up_to(limit);
    proptest::sample::select(primes)
}

fn poly(p: OddPrime, coeffs: &[u64]) -> FpPolynomial {
    FpPolynomial::new(p, coeffs.iter().map(|c| c % p.get()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quadratic_matches_direct_sum(p in prime_below(3000), a in 1i64..1_000_000, b: i32, c: i32) {
        prop_assume!(p.reduce(a) != 0);
        let f = FpPolynomial::from_i64(p, &[c as i64, b as i64, a]);
        prop_assert_eq!(eval_quadratic(a, b as i64, c as i64, p).value, char_sum_direct(&f).value);
    }

    #[test]
    fn dispatcher_agrees_with_direct_sum(p in prime_below(400), coeffs in proptest::collection::vec(0u64..1000, 1..8)) {
        let f = poly(p, &coeffs);
        let v = evaluate(&f, &ConventionTable::shipped());
        prop_assert!(v.agrees_with(char_sum_direct(&f).value, p), "{} mod {}: {}", f, p, v);
    }

    #[test]
    fn even_split_identity(p in prime_below(300), coeffs in proptest::collection::vec(0u64..1000, 1..6)) {
        let f = poly(p, &coeffs);
        let split = split_transform(&f, |g| Ok(char_sum_direct(g))).unwrap();
        prop_assert_eq!(split.value, char_sum_direct(&f.compose_square()).value);
    }

    #[test]
    fn quartic_sum_ignores_root_order(
        p in prime_below(1000),
        roots in proptest::array::uniform4(0u64..1000),
        perm in Just([0usize, 1, 2, 3]).prop_shuffle(),
    ) {
        let s = roots.map(|r| r % p.get());
        let Ok(base) = QuarticReduction::new(s, p) else { return Ok(()) };
        let other = QuarticReduction::new(perm.map(|i| s[i]), p).unwrap();
        prop_assert_eq!(base.sum(p).unwrap().value, other.sum(p).unwrap().value);
        let f = FpPolynomial::from_roots(p, &s.map(|a| p.neg(a)));
        prop_assert_eq!(quartic_reduce(&f).unwrap().value, CharacterTable::new(p).sum_linear_product(&s));
    }

    #[test]
    fn legendre_sum_is_minus_centered_hasse(p in prime_below(1500), beta in 2u64..1500) {
        prop_assume!(p.get() >= 17 && beta % p.get() > 1);
        let b = beta % p.get();
        let v = legendre_form_sum(b, p).unwrap();
        prop_assert_eq!(v.method, Method::LegendreHasse);
        prop_assert_eq!(v.value, -p.centered(hasse_eval(b, p)));
        prop_assert_eq!(v.value, char_sum_direct(&legendre_cubic(b, p)).value);
    }

    #[test]
    fn cm_cubics_match_direct_sum(p in prime_below(5000), i in 0usize..9, a in 1i64..50) {
        let n = CM_DISCRIMINANTS[i];
        let Ok(f) = cubic_poly(n, a, p) else { return Ok(()) };
        let v = eval_cubic_cm(n, a, p, &ConventionTable::shipped()).unwrap();
        prop_assert_eq!(v.value, char_sum_direct(&f).value);
    }

    #[test]
    fn every_family_auto_matches_oracle(p in prime_below(600), idx in 0usize..21, a in 1i64..20, beta in 2i64..50, k in 1i64..4) {
        let family = FamilyId::all()[idx];
        let q = FamilyQuery { family, a, beta, k, c: a, d: beta };
        let t = ConventionTable::shipped();
        let (Ok(v), Ok(o)) = (family_sum(&q, p, Path::Auto, &t), family_sum(&q, p, Path::Oracle, &t)) else {
            return Ok(());
        };
        prop_assert!(v.agrees_with(o.value, p), "{} at {}: {} vs {}", family, p, v, o.value);
    }

    #[test]
    fn squarefree_sums_obey_weil(p in prime_below(2000), coeffs in proptest::collection::vec(0u64..10_000, 2..7)) {
        let f = poly(p, &coeffs);
        let Some(d) = f.degree() else { return Ok(()) };
        prop_assume!(d >= 1 && f.gcd(&f.derivative()).degree() == Some(0));
        let s = char_sum_direct(&f).value.unsigned_abs() as f64;
        prop_assert!(s <= (d as f64 - 1.0) * (p.get() as f64).sqrt() + 1e-9, "{} mod {}: {}", f, p, s);
        prop_assert!(char_sum_direct(&f).within_envelope(d, p));
    }

    #[test]
    fn point_counts_match_enumeration(p in prime_below(120), i in 0usize..9, a in 1i64..10) {
        let q = FamilyQuery::new(FamilyId::Derived(CM_DISCRIMINANTS[i])).with_a(a);
        let Ok(pc) = point_count(&q, p, Path::Auto, &ConventionTable::shipped()) else { return Ok(()) };
        prop_assert_eq!(pc.affine, affine_point_count(&q.poly(p).unwrap()).affine);
        prop_assert_eq!(pc.with_infinity, pc.affine + 1);
    }

    #[test]
    fn sum_values_round_trip_through_json(v: i64, residue: bool, part: i64) {
        let mut s = SumValue::exact(v, Method::QuarticReduction).with_part("beta", part, Method::LegendreHasse).with_note("x");
        s.residue_only = residue;
        let back: SumValue = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }
}

#[test]
fn conventions_round_trip_through_json() {
    let t = ConventionTable::shipped();
    assert_eq!(ConventionTable::from_json(&t.to_json()).unwrap(), t);
}
