use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::OddPrime;

/// Which evaluation path produced a number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Direct summation over F_p.
    Oracle,
    /// Direct summation used because no closed form applied.
    OracleFallback,
    Constant,
    Linear,
    Quadratic,
    /// Split cubic moved to Legendre form.
    LegendreCubic,
    CubicCm,
    /// Legendre-form sum from the centered Hasse invariant.
    LegendreHasse,
    QuarticReduction,
    /// Square factors stripped, remainder evaluated in closed form.
    SquareFactor,
    SplitTransform,
    DerivedGn,
    NewtonK1,
    FormReduction,
    PsiBinomial,
    PsiBijection,
    PhiBinomial,
    PhiVanishing,
    #[serde(rename = "power_sum_2k")]
    PowerSum2k,
}

impl Method {
    pub const ALL: [Method; 19] = [
        Method::Oracle,
        Method::OracleFallback,
        Method::Constant,
        Method::Linear,
        Method::Quadratic,
        Method::LegendreCubic,
        Method::CubicCm,
        Method::LegendreHasse,
        Method::QuarticReduction,
        Method::SquareFactor,
        Method::SplitTransform,
        Method::DerivedGn,
        Method::NewtonK1,
        Method::FormReduction,
        Method::PsiBinomial,
        Method::PsiBijection,
        Method::PhiBinomial,
        Method::PhiVanishing,
        Method::PowerSum2k,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::OracleFallback => "oracle_fallback",
            Method::Constant => "constant",
            Method::Linear => "linear",
            Method::Quadratic => "quadratic",
            Method::LegendreCubic => "legendre_cubic",
            Method::CubicCm => "cubic_cm",
            Method::LegendreHasse => "legendre_hasse",
            Method::QuarticReduction => "quartic_reduction",
            Method::SquareFactor => "square_factor",
            Method::SplitTransform => "split_transform",
            Method::DerivedGn => "derived_gn",
            Method::NewtonK1 => "newton_k1",
            Method::FormReduction => "form_reduction",
            Method::PsiBinomial => "psi_binomial",
            Method::PsiBijection => "psi_bijection",
            Method::PhiBinomial => "phi_binomial",
            Method::PhiVanishing => "phi_vanishing",
            Method::PowerSum2k => "power_sum_2k",
        }
    }

    pub fn is_oracle(self) -> bool {
        matches!(self, Method::Oracle | Method::OracleFallback)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One labelled term of a decomposition such as `A + (a|p) u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub label: String,
    pub value: i64,
    pub method: Method,
}

/// Exact value of a character sum together with how it was obtained.
///
/// When `residue_only` is set only `value mod p` is certified; `value` then
/// holds the centered representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumValue {
    pub value: i64,
    pub method: Method,
    pub residue_only: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<Part>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SumValue {
    pub fn exact(value: i64, method: Method) -> Self {
        SumValue { value, method, residue_only: false, parts: Vec::new(), notes: Vec::new() }
    }

    pub fn residue(value: i64, method: Method) -> Self {
        SumValue { value, method, residue_only: true, parts: Vec::new(), notes: Vec::new() }
    }

    pub fn with_part(mut self, label: impl Into<String>, value: i64, method: Method) -> Self {
        self.parts.push(Part { label: label.into(), value, method });
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Relabel as an oracle fallback, keeping the reason.
    pub fn into_fallback(mut self, reason: impl Into<String>) -> Self {
        self.method = Method::OracleFallback;
        self.notes.push(reason.into());
        self
    }

    /// Exact equality, or congruence mod `p` for residue-only values.
    pub fn agrees_with(&self, oracle: i64, p: OddPrime) -> bool {
        if self.residue_only {
            (self.value - oracle).rem_euclid(p.get() as i64) == 0
        } else {
            self.value == oracle
        }
    }

    /// Coarse envelope `|S| <= d sqrt(p) + d` for a polynomial of degree `d`.
    pub fn within_envelope(&self, degree: usize, p: OddPrime) -> bool {
        let d = degree as f64;
        (self.value.unsigned_abs() as f64) <= d * (p.get() as f64).sqrt() + d
    }
}

impl fmt::Display for SumValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.value, self.method)?;
        if self.residue_only {
            write!(f, " (mod p only)")?;
        }
        Ok(())
    }
}
