//! Direct evaluation by summation over F_p, and the machinery for comparing
//! closed forms against it over ranges of primes.

mod direct;
mod report;

pub use direct::{
    affine_point_count, char_sum_direct, jacobsthal_direct, CharacterTable, JacobsthalKind,
    PointCount,
};
pub use report::{
    record, verify_cases, verify_range, with_jobs, CaseParams, CaseRecord, Erratum, ErratumKind, Params,
    VerificationReport,
};
