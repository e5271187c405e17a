//! C ABI for `charsum`.
//!
//! Every fallible call returns a [`CharsumStatus`]; on failure the message is
//! available from [`charsum_last_error`] on the same thread. Conventions
//! tables are opaque handles; a null handle means the shipped table.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::OnceLock;

use charsum::algebra::{FpPolynomial, OddPrime};
use charsum::closedform::{evaluate, evaluate_closed, family_sum, point_count, FamilyQuery, Strategy};
use charsum::cm::ConventionTable;
use charsum::families::FamilyId;
use charsum::oracle::char_sum_direct;
use charsum::{Error, Method, SumValue};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharsumStatus {
    Ok = 0,
    NullPointer = 1,
    NotOddPrime = 2,
    ModulusTooLarge = 3,
    BadReduction = 4,
    Degenerate = 5,
    NotSplit = 6,
    NotApplicable = 7,
    InvalidArgument = 8,
    UnknownFamily = 9,
    Conventions = 10,
    Internal = 11,
    Panic = 12,
}

impl From<&Error> for CharsumStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NotOddPrime(_) => CharsumStatus::NotOddPrime,
            Error::ModulusTooLarge { .. } => CharsumStatus::ModulusTooLarge,
            Error::ZeroPolynomial(_) | Error::InvalidArgument(_) => CharsumStatus::InvalidArgument,
            Error::BadReduction(_) => CharsumStatus::BadReduction,
            Error::Degenerate(_) => CharsumStatus::Degenerate,
            Error::NotSplit => CharsumStatus::NotSplit,
            Error::NotApplicable(_) => CharsumStatus::NotApplicable,
            Error::UnknownFamily(_) => CharsumStatus::UnknownFamily,
            Error::Conventions(_) => CharsumStatus::Conventions,
            Error::Internal(_) => CharsumStatus::Internal,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharsumStrategy {
    /// Closed form where one applies, direct summation otherwise.
    Auto = 0,
    Closed = 1,
    Oracle = 2,
}

impl From<CharsumStrategy> for Strategy {
    fn from(s: CharsumStrategy) -> Self {
        match s {
            CharsumStrategy::Auto => Strategy::Auto,
            CharsumStrategy::Closed => Strategy::Closed,
            CharsumStrategy::Oracle => Strategy::Oracle,
        }
    }
}

/// A character sum value. `method` indexes the names returned by
/// [`charsum_method_name`]. With `residue_only` set only `value mod p` is
/// certified.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CharsumSum {
    pub value: i64,
    pub method: u32,
    pub residue_only: bool,
}

impl From<&SumValue> for CharsumSum {
    fn from(v: &SumValue) -> Self {
        let method = Method::ALL.iter().position(|&m| m == v.method).expect("method listed") as u32;
        CharsumSum { value: v.value, method, residue_only: v.residue_only }
    }
}

/// Family parameters. Fields a family does not use are ignored.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CharsumParams {
    pub a: i64,
    pub beta: i64,
    pub k: i64,
    pub c: i64,
    pub d: i64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CharsumPoints {
    /// Affine solutions of y^2 = f(x).
    pub affine: i64,
    /// Affine count plus one point at infinity.
    pub with_infinity: i64,
    pub sum: CharsumSum,
}

/// Opaque conventions table.
pub struct CharsumConventions(ConventionTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), (CharsumStatus, String)>) -> CharsumStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CharsumStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside charsum".into());
            CharsumStatus::Panic
        }
    }
}

fn fail(e: Error) -> (CharsumStatus, String) {
    (CharsumStatus::from(&e), e.to_string())
}

fn null(what: &str) -> (CharsumStatus, String) {
    (CharsumStatus::NullPointer, format!("{what} is null"))
}

fn shipped() -> &'static ConventionTable {
    static SHIPPED: OnceLock<ConventionTable> = OnceLock::new();
    SHIPPED.get_or_init(ConventionTable::shipped)
}

unsafe fn table<'a>(conv: *const CharsumConventions) -> &'a ConventionTable {
    match unsafe { conv.as_ref() } {
        Some(c) => &c.0,
        None => shipped(),
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, (CharsumStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| (CharsumStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn query(family: *const c_char, params: *const CharsumParams) -> Result<FamilyQuery, (CharsumStatus, String)> {
    let id: FamilyId = unsafe { text(family, "family") }?.parse().map_err(fail)?;
    let mut q = FamilyQuery::new(id);
    if let Some(p) = unsafe { params.as_ref() } {
        q = FamilyQuery { family: id, a: p.a, beta: p.beta, k: p.k, c: p.c, d: p.d };
    }
    Ok(q)
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn charsum_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Name of a method index from [`CharsumSum`], or null when out of range.
#[no_mangle]
pub extern "C" fn charsum_method_name(method: u32) -> *const c_char {
    static NAMES: OnceLock<Vec<CString>> = OnceLock::new();
    let names = NAMES.get_or_init(|| Method::ALL.iter().map(|m| CString::new(m.name()).unwrap()).collect());
    names.get(method as usize).map_or(ptr::null(), |c| c.as_ptr())
}

/// Defaults used when a parameter is not given: a = 1, beta = 2, k = 1,
/// c = 1, d = 2.
#[no_mangle]
pub extern "C" fn charsum_params_default() -> CharsumParams {
    let q = FamilyQuery::new(FamilyId::Legendre);
    CharsumParams { a: q.a, beta: q.beta, k: q.k, c: q.c, d: q.d }
}

/// A copy of the built-in conventions table. Free with
/// [`charsum_conventions_free`].
#[no_mangle]
pub extern "C" fn charsum_conventions_shipped() -> *mut CharsumConventions {
    Box::into_raw(Box::new(CharsumConventions(shipped().clone())))
}

/// Parse a conventions table from JSON.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn charsum_conventions_from_json(
    json: *const c_char,
    out: *mut *mut CharsumConventions,
) -> CharsumStatus {
    guard(|| {
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let t = ConventionTable::from_json(unsafe { text(json, "json") }?).map_err(fail)?;
        *out = Box::into_raw(Box::new(CharsumConventions(t)));
        Ok(())
    })
}

/// # Safety
/// `conv` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn charsum_conventions_free(conv: *mut CharsumConventions) {
    if !conv.is_null() {
        drop(unsafe { Box::from_raw(conv) });
    }
}

/// Sum of (f(x)|p) over F_p for f with `len` coefficients, constant term first.
///
/// # Safety
/// `coeffs` must point to `len` values (it may be null when `len` is 0),
/// `out` must be valid, and `conv` null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn charsum_eval_poly(
    conv: *const CharsumConventions,
    p: u64,
    coeffs: *const i64,
    len: usize,
    strategy: CharsumStrategy,
    out: *mut CharsumSum,
) -> CharsumStatus {
    guard(|| {
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        let coeffs = match len {
            0 => &[][..],
            _ if coeffs.is_null() => return Err(null("coeffs")),
            _ => unsafe { std::slice::from_raw_parts(coeffs, len) },
        };
        let p = OddPrime::new(p).map_err(fail)?;
        let f = FpPolynomial::from_i64(p, coeffs);
        let t = unsafe { table(conv) };
        let v = match strategy {
            CharsumStrategy::Auto => evaluate(&f, t),
            CharsumStrategy::Closed => evaluate_closed(&f, t).map_err(fail)?,
            CharsumStrategy::Oracle => char_sum_direct(&f),
        };
        *out = CharsumSum::from(&v);
        Ok(())
    })
}

/// Character sum of a named family (`f1`, `g19`, `legendre`, `newton`,
/// `edwards`, ...). `params` may be null for the defaults.
///
/// # Safety
/// `family` must be a nul-terminated string, `out` valid, `params` null or
/// valid, and `conv` null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn charsum_eval_family(
    conv: *const CharsumConventions,
    family: *const c_char,
    params: *const CharsumParams,
    p: u64,
    strategy: CharsumStrategy,
    out: *mut CharsumSum,
) -> CharsumStatus {
    guard(|| {
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        let q = unsafe { query(family, params) }?;
        let p = OddPrime::new(p).map_err(fail)?;
        let v = family_sum(&q, p, strategy.into(), unsafe { table(conv) }).map_err(fail)?;
        *out = CharsumSum::from(&v);
        Ok(())
    })
}

/// Points on y^2 = f(x) for a named family.
///
/// # Safety
/// Same requirements as [`charsum_eval_family`].
#[no_mangle]
pub unsafe extern "C" fn charsum_point_count(
    conv: *const CharsumConventions,
    family: *const c_char,
    params: *const CharsumParams,
    p: u64,
    strategy: CharsumStrategy,
    out: *mut CharsumPoints,
) -> CharsumStatus {
    guard(|| {
        let out = unsafe { out.as_mut() }.ok_or_else(|| null("out"))?;
        let q = unsafe { query(family, params) }?;
        let p = OddPrime::new(p).map_err(fail)?;
        let pc = point_count(&q, p, strategy.into(), unsafe { table(conv) }).map_err(fail)?;
        *out = CharsumPoints { affine: pc.affine, with_infinity: pc.with_infinity, sum: CharsumSum::from(&pc.sum) };
        Ok(())
    })
}
