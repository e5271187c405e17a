//! How large `|S| / sqrt(p)` gets along a family, by direct summation.

use serde::Serialize;

use crate::algebra::odd_primes_up_to;
use crate::error::{Error, Result};
use crate::families::FamilyId;
use crate::oracle::{with_jobs, CharacterTable};

use super::FamilyQuery;

/// One evaluated member.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeilCase {
    pub p: u64,
    pub a: i64,
    pub sum: i64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeilAudit {
    pub family: String,
    pub p_max: u64,
    pub a_values: Vec<i64>,
    pub cases: usize,
    pub max_ratio: f64,
    pub argmax: Option<WeilCase>,
    /// `2g`: 2 for cubics, 3 for quartics, 4 for sextics.
    pub genus_factor: f64,
    /// Added to `genus_factor sqrt(p)` for even degree: two points at
    /// infinity shift `S` by `(lead|p)` from minus the trace.
    pub infinity_slack: f64,
    /// Cases beyond `genus_factor sqrt(p) + infinity_slack`.
    pub genus_violations: Vec<WeilCase>,
    /// Cases beyond `genus_factor sqrt(p)` alone.
    pub strict_violations: Vec<WeilCase>,
    /// Whether `|S| <= 2 sqrt(p)` held everywhere.
    pub two_sqrt_p_holds: bool,
    pub two_sqrt_p_violations: usize,
    pub two_sqrt_p_examples: Vec<WeilCase>,
}

impl WeilAudit {
    pub fn genus_bound_holds(&self) -> bool {
        self.genus_violations.is_empty()
    }
}

fn genus_factor(degree: usize) -> f64 {
    match degree {
        0..=3 => 2.0,
        4 => 3.0,
        _ => 4.0,
    }
}

/// Audit `|S(f)|` for every good member with `p <= p_max` and the given `a`.
/// Supported for the cubic and derived families.
pub fn weil_audit(family: FamilyId, p_min: u64, p_max: u64, a_values: &[i64], jobs: usize) -> Result<WeilAudit> {
    if !matches!(family, FamilyId::Cubic(_) | FamilyId::Derived(_)) {
        return Err(Error::InvalidArgument(format!("no audit for family {family}")));
    }
    let primes: Vec<_> = odd_primes_up_to(p_max).into_iter().filter(|p| p.get() >= p_min).collect();
    let mut cases: Vec<(usize, WeilCase)> = with_jobs(jobs, || {
        use rayon::prelude::*;
        primes
            .par_iter()
            .flat_map_iter(|&p| {
                let table = CharacterTable::new(p);
                a_values
                    .iter()
                    .filter_map(|&a| {
                        let f = FamilyQuery::new(family).with_a(a).poly(p).ok()?;
                        let sum = table.sum(&f);
                        let ratio = sum.unsigned_abs() as f64 / (p.get() as f64).sqrt();
                        Some((f.degree().unwrap_or(0), WeilCase { p: p.get(), a, sum, ratio }))
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    });
    cases.sort_by_key(|(_, c)| (c.p, c.a));
    let degree = cases.iter().map(|(d, _)| *d).max().unwrap_or(0);
    let factor = genus_factor(degree);
    let slack = if degree % 2 == 0 { 1.0 } else { 0.0 };
    let mut audit = WeilAudit {
        family: family.to_string(),
        p_max,
        a_values: a_values.to_vec(),
        cases: cases.len(),
        max_ratio: 0.0,
        argmax: None,
        genus_factor: factor,
        infinity_slack: slack,
        genus_violations: Vec::new(),
        strict_violations: Vec::new(),
        two_sqrt_p_holds: true,
        two_sqrt_p_violations: 0,
        two_sqrt_p_examples: Vec::new(),
    };
    for (_, c) in cases {
        if audit.argmax.is_none() || c.ratio > audit.max_ratio {
            audit.max_ratio = c.ratio;
            audit.argmax = Some(c);
        }
        let root_p = (c.p as f64).sqrt();
        if c.sum.unsigned_abs() as f64 > factor * root_p + slack {
            audit.genus_violations.push(c);
        }
        if c.ratio > factor {
            audit.strict_violations.push(c);
        }
        if c.ratio > 2.0 {
            audit.two_sqrt_p_holds = false;
            audit.two_sqrt_p_violations += 1;
            if audit.two_sqrt_p_examples.len() < 10 {
                audit.two_sqrt_p_examples.push(c);
            }
        }
    }
    Ok(audit)
}
