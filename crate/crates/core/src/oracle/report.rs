use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::direct::CharacterTable;
use crate::algebra::{odd_primes_up_to, OddPrime};
use crate::error::Result;
use crate::value::{Method, SumValue};

pub type Params = BTreeMap<String, i64>;

/// Parameter tuple of one verification case.
pub trait CaseParams {
    fn to_params(&self) -> Params;
}

impl CaseParams for i64 {
    fn to_params(&self) -> Params {
        Params::from([("a".to_string(), *self)])
    }
}

impl<T: CaseParams> CaseParams for &T {
    fn to_params(&self) -> Params {
        (*self).to_params()
    }
}

impl CaseParams for Params {
    fn to_params(&self) -> Params {
        self.clone()
    }
}

/// One `(p, params)` comparison of a closed form against the oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub p: u64,
    pub params: Params,
    pub closed: Option<i64>,
    pub oracle: i64,
    #[serde(rename = "match")]
    pub matched: bool,
    pub u_chosen: Option<i64>,
    pub method: Option<Method>,
    pub residue_only: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErratumKind {
    /// Closed form disagreed with the oracle and nothing accounts for it.
    Unexplained,
    /// A simpler variant of a formula fails; the implemented one is documented.
    FormulaVariant,
    /// A recorded fact that is not a failure of the implementation.
    Observation,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Erratum {
    pub kind: ErratumKind,
    pub p: Option<u64>,
    pub params: Params,
    pub detail: String,
}

/// Result of a verification campaign over a range of primes.
///
/// Cases are kept sorted by `(p, params)` so serialized output does not
/// depend on scheduling.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub family: String,
    pub p_max: u64,
    pub cases: Vec<CaseRecord>,
    pub conventions: BTreeMap<String, Value>,
    pub errata: Vec<Erratum>,
    #[serde(default)]
    pub observations: BTreeMap<String, Value>,
}

impl VerificationReport {
    pub fn new(family: impl Into<String>, p_max: u64) -> Self {
        VerificationReport { family: family.into(), p_max, ..Default::default() }
    }

    pub fn unexplained(&self) -> usize {
        self.errata.iter().filter(|e| e.kind == ErratumKind::Unexplained).count()
    }

    pub fn mismatches(&self) -> usize {
        self.cases.iter().filter(|c| !c.matched).count()
    }

    pub fn count_method(&self, m: Method) -> usize {
        self.cases.iter().filter(|c| c.method == Some(m)).count()
    }

    pub fn passed(&self) -> bool {
        self.unexplained() == 0
    }

    pub fn observe(&mut self, key: &str, value: impl Serialize) {
        self.observations.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn push_erratum(&mut self, kind: ErratumKind, p: Option<u64>, params: Params, detail: impl Into<String>) {
        self.errata.push(Erratum { kind, p, params, detail: detail.into() });
    }

    /// Sort cases and errata, and turn every mismatching case into an
    /// unexplained erratum unless one is already recorded for it.
    pub fn finalize(&mut self) {
        self.cases.sort_by(|a, b| (a.p, &a.params).cmp(&(b.p, &b.params)));
        let mut seen: std::collections::BTreeSet<(Option<u64>, Params)> =
            self.errata.iter().map(|e| (e.p, e.params.clone())).collect();
        let mut fresh = Vec::new();
        for c in self.cases.iter().filter(|c| !c.matched) {
            if seen.insert((Some(c.p), c.params.clone())) {
                let detail = match &c.error {
                    Some(e) => format!("closed form failed: {e}"),
                    None => format!("closed {:?} != oracle {}", c.closed, c.oracle),
                };
                fresh.push(Erratum {
                    kind: ErratumKind::Unexplained,
                    p: Some(c.p),
                    params: c.params.clone(),
                    detail,
                });
            }
        }
        self.errata.extend(fresh);
        self.errata.sort();
    }

    /// Absorb another report's cases, errata and observations.
    pub fn merge(&mut self, other: VerificationReport) {
        self.cases.extend(other.cases);
        self.errata.extend(other.errata);
        self.conventions.extend(other.conventions);
        self.observations.extend(other.observations);
        self.p_max = self.p_max.max(other.p_max);
    }

    /// Deterministic JSON: keys sorted, records sorted.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report is serializable");
        serde_json::to_string_pretty(&v).expect("value is serializable")
    }

    /// One row per case.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,p,params,closed,oracle,match,u_chosen,method,residue_only\n");
        for c in &self.cases {
            let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                self.family,
                c.p,
                params.join(";"),
                c.closed.map(|v| v.to_string()).unwrap_or_default(),
                c.oracle,
                c.matched,
                c.u_chosen.map(|v| v.to_string()).unwrap_or_default(),
                c.method.map(|m| m.name()).unwrap_or(""),
                c.residue_only
            );
        }
        out
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{}: p <= {}, {} cases, {} mismatches, {} unexplained, {} oracle fallbacks",
            self.family,
            self.p_max,
            self.cases.len(),
            self.mismatches(),
            self.unexplained(),
            self.count_method(Method::OracleFallback)
        )
    }
}

/// Compare a closed-form evaluator with the oracle for every odd prime
/// `p <= p_max` and every admissible parameter.
///
/// The oracle receives a [`CharacterTable`] for the current prime. Work is
/// spread over `jobs` threads; the merged report is sorted, so the output is
/// identical for any `jobs`.
pub fn verify_range<P, A, C, O>(
    family: &str,
    p_max: u64,
    params: &[P],
    admissible: A,
    closed: C,
    oracle: O,
    jobs: usize,
) -> VerificationReport
where
    P: CaseParams + Sync,
    A: Fn(OddPrime, &P) -> bool + Sync,
    C: Fn(OddPrime, &P) -> Result<SumValue> + Sync,
    O: Fn(&CharacterTable, &P) -> i64 + Sync,
{
    verify_cases(family, 3, p_max, |p| params.iter().filter(|prm| admissible(p, prm)).collect(), |p, prm| closed(p, prm), |t, prm| oracle(t, prm), jobs)
}

/// Like [`verify_range`], with the parameter list generated per prime and
/// primes below `p_min` skipped.
pub fn verify_cases<P, G, C, O>(
    family: &str,
    p_min: u64,
    p_max: u64,
    generate: G,
    closed: C,
    oracle: O,
    jobs: usize,
) -> VerificationReport
where
    P: CaseParams + Send,
    G: Fn(OddPrime) -> Vec<P> + Sync,
    C: Fn(OddPrime, &P) -> Result<SumValue> + Sync,
    O: Fn(&CharacterTable, &P) -> i64 + Sync,
{
    let primes: Vec<OddPrime> = odd_primes_up_to(p_max).into_iter().filter(|p| p.get() >= p_min).collect();
    let run = || {
        primes
            .par_iter()
            .flat_map_iter(|&p| {
                let table = CharacterTable::new(p);
                generate(p)
                    .into_iter()
                    .map(|prm| {
                        let o = oracle(&table, &prm);
                        record(p, prm.to_params(), closed(p, &prm), o)
                    })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    };
    let cases = with_jobs(jobs, run);
    let mut report = VerificationReport::new(family, p_max);
    report.cases = cases;
    report.finalize();
    report
}

/// Build a case record from a closed-form result and the oracle value.
pub fn record(p: OddPrime, params: Params, closed: Result<SumValue>, oracle: i64) -> CaseRecord {
    match closed {
        Ok(v) => CaseRecord {
            p: p.get(),
            params,
            closed: Some(v.value),
            oracle,
            matched: v.agrees_with(oracle, p),
            u_chosen: v.parts.iter().find(|x| x.label == "u").map(|x| x.value),
            method: Some(v.method),
            residue_only: v.residue_only,
            error: None,
        },
        Err(e) => CaseRecord {
            p: p.get(),
            params,
            closed: None,
            oracle,
            matched: false,
            u_chosen: None,
            method: None,
            residue_only: false,
            error: Some(e.to_string()),
        },
    }
}

/// Run `f` on a pool of `jobs` worker threads.
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
