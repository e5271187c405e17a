//! Wall-time comparison of a closed form with direct summation.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::algebra::OddPrime;
use crate::closedform::{family_sum, FamilyQuery, Strategy};
use crate::cm::{is_inert, ConventionTable};
use crate::error::{Error, Result};
use crate::families::FamilyId;
use crate::oracle::char_sum_direct;
use crate::value::Method;

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub bits: u32,
    pub p: u64,
    pub t_closed: f64,
    pub t_oracle: f64,
    /// `t_oracle` scaled from a smaller prime rather than measured.
    pub oracle_extrapolated: bool,
    pub speedup: f64,
    pub value: i64,
    pub method: Method,
}

impl BenchRow {
    pub const CSV_HEADER: &'static str = "bits,p,t_closed,t_oracle_or_estimate,oracle_extrapolated,speedup,value,method";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{:.3e},{:.3e},{},{:.1},{},{}",
            self.bits, self.p, self.t_closed, self.t_oracle, self.oracle_extrapolated, self.speedup, self.value, self.method
        )
    }
}

/// Smallest prime `>= 2^bits` at which the family has a closed value, and
/// for CM families a split one.
pub fn bench_prime(q: &FamilyQuery, bits: u32, conventions: &ConventionTable) -> Result<OddPrime> {
    let mut n = (1u64 << bits) | 1;
    loop {
        if let Ok(p) = OddPrime::new(n) {
            let split = match q.family {
                FamilyId::Cubic(d) | FamilyId::Derived(d) => matches!(is_inert(d, p), Ok(s) if !s.is_inert()),
                _ => true,
            };
            let closed = family_sum(q, p, Strategy::Closed, conventions).map(|v| !v.method.is_oracle());
            if split && p.get() >= 17 && matches!(closed, Ok(true)) {
                return Ok(p);
            }
        }
        n = n.checked_add(2).ok_or_else(|| Error::InvalidArgument("bit size too large".into()))?;
    }
}

/// Mean time of `f` over enough repetitions to fill `floor`.
fn time_it<T>(floor: Duration, mut f: impl FnMut() -> T) -> (f64, T) {
    let start = Instant::now();
    let mut out = f();
    let mut reps = 1u32;
    while start.elapsed() < floor || reps < 3 {
        out = f();
        reps += 1;
    }
    (start.elapsed().as_secs_f64() / reps as f64, out)
}

/// Time the closed form and the direct sum at primes just above
/// `2^b` for `b` stepping by 2 up to `pbits`. Direct sums predicted to
/// exceed `budget` are extrapolated linearly from a measurement near `2^16`.
pub fn bench_family(q: &FamilyQuery, pbits: u32, budget: Duration, conventions: &ConventionTable) -> Result<Vec<BenchRow>> {
    if !(5..=30).contains(&pbits) {
        return Err(Error::InvalidArgument("pbits must lie in 5..=30".into()));
    }
    let cal_bits = pbits.min(16);
    let cal_p = bench_prime(q, cal_bits, conventions)?;
    let cal_f = q.poly(cal_p)?;
    let (cal_t, _) = time_it(Duration::from_millis(5), || char_sum_direct(&cal_f));
    let per_element = cal_t / cal_p.get() as f64;

    let first = pbits.saturating_sub(10).max(5);
    let mut bits: Vec<u32> = (first..pbits).step_by(2).collect();
    bits.push(pbits);
    let mut rows = Vec::new();
    for b in bits {
        let p = bench_prime(q, b, conventions)?;
        let (t_closed, v) = time_it(Duration::from_millis(10), || family_sum(q, p, Strategy::Closed, conventions));
        let v = v?;
        let predicted = per_element * p.get() as f64;
        let (t_oracle, extrapolated) = if predicted <= budget.as_secs_f64() {
            let f = q.poly(p)?;
            let (t, o) = time_it(Duration::ZERO, || char_sum_direct(&f));
            if !v.agrees_with(o.value, p) {
                return Err(Error::Internal(format!("closed {} != oracle {} at p = {p}", v.value, o.value)));
            }
            (t, false)
        } else {
            (predicted, true)
        };
        log::debug!("bench {} p = {p}: closed {t_closed:.3e}s, oracle {t_oracle:.3e}s", q.family);
        rows.push(BenchRow {
            bits: b,
            p: p.get(),
            t_closed,
            t_oracle,
            oracle_extrapolated: extrapolated,
            speedup: t_oracle / t_closed,
            value: v.value,
            method: v.method,
        });
    }
    Ok(rows)
}
