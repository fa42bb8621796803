//! C ABI over `hyperrun`.
//!
//! Every entry point returns an [`HrStatus`]; on failure a message is kept in
//! thread-local storage and can be read with [`hr_last_error`]. Strings handed
//! out by the library must be released with [`hr_string_free`].
//!
//! A session owns the memo cache. It is safe to share one session between
//! threads.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hyperrun::engine::{self, Engine};
use hyperrun::reliability::parse_rational;
use hyperrun::{
    reliability_poly, CountTable, Counter, Error, Family, Oracle, ReliabilityPolynomial,
    StructureSpec, TableDocument,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HrStatus {
    Ok = 0,
    InvalidArgument = 1,
    BudgetExceeded = 2,
    NullPointer = 3,
    Panic = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HrFamily {
    LoosePath = 0,
    LooseCycle = 1,
    TightPath = 2,
    TightCycle = 3,
    MTightPath = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HrEngine {
    Formula = 0,
    Oracle = 1,
}

/// Structure parameters. `m` is only read for `HR_FAMILY_M_TIGHT_PATH`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HrStructure {
    pub family: HrFamily,
    pub r: u32,
    pub n: u32,
    pub m: u32,
}

/// Opaque session handle.
pub struct HrSession {
    counter: Counter,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(HrStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::BudgetExceeded { .. } => HrStatus::BudgetExceeded,
            _ => HrStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HrStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HrStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HrStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(HrStatus::NullPointer, format!("{what} is null"))
}

impl HrStructure {
    fn spec(&self) -> Result<StructureSpec, Fail> {
        let family = match self.family {
            HrFamily::LoosePath => Family::LoosePath,
            HrFamily::LooseCycle => Family::LooseCycle,
            HrFamily::TightPath => Family::TightPath,
            HrFamily::TightCycle => Family::TightCycle,
            HrFamily::MTightPath => Family::MTightPath,
        };
        let m = (family == Family::MTightPath).then_some(self.m as usize);
        Ok(StructureSpec::new(
            family,
            self.r as usize,
            self.n as usize,
            m,
        )?)
    }
}

impl From<HrEngine> for Engine {
    fn from(e: HrEngine) -> Self {
        match e {
            HrEngine::Formula => Engine::Formula,
            HrEngine::Oracle => Engine::Oracle,
        }
    }
}

unsafe fn session_ref<'a>(s: *const HrSession) -> Result<&'a HrSession, Fail> {
    s.as_ref().ok_or_else(|| null("session"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| Fail(HrStatus::Panic, "interior NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn polynomial(
    s: &HrSession,
    st: &HrStructure,
    k: u32,
    eng: HrEngine,
) -> Result<ReliabilityPolynomial, Fail> {
    let spec = st.spec()?;
    let tab = engine::table(&s.counter, spec, k as usize, eng.into())?;
    Ok(reliability_poly(
        &CountTable::new(tab.counts),
        spec.vertex_count(),
    ))
}

/// Creates a session. `budget` is the oracle vertex budget; 0 means the
/// default (or `HYPERRUN_ORACLE_BUDGET` when set). Never returns null.
#[no_mangle]
pub extern "C" fn hr_session_new(budget: u32) -> *mut HrSession {
    let oracle = if budget == 0 {
        Oracle::from_env()
    } else {
        Oracle::with_budget(budget as usize)
    };
    Box::into_raw(Box::new(HrSession {
        counter: Counter::with_oracle(oracle),
    }))
}

/// # Safety
/// `session` must come from [`hr_session_new`] and not be used afterwards.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hr_session_free(session: *mut HrSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Number of vertices of the structure, written to `out`.
///
/// # Safety
/// `structure` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hr_vertex_count(
    structure: *const HrStructure,
    out: *mut usize,
) -> HrStatus {
    guard(|| {
        let st = structure.as_ref().ok_or_else(|| null("structure"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = st.spec()?.vertex_count();
        Ok(())
    })
}

/// Count of colorings with exactly `j` blue vertices and no blue run of `k`
/// edges, as a decimal string in `*out`.
///
/// # Safety
/// Pointers must be valid; free `*out` with [`hr_string_free`].
#[no_mangle]
pub unsafe extern "C" fn hr_count(
    session: *const HrSession,
    structure: *const HrStructure,
    k: u32,
    j: i64,
    engine: HrEngine,
    out: *mut *mut c_char,
) -> HrStatus {
    guard(|| {
        let s = session_ref(session)?;
        let st = structure.as_ref().ok_or_else(|| null("structure"))?;
        let v = engine::count(&s.counter, st.spec()?, k as usize, j, engine.into())?;
        put_string(out, v.value.to_string())
    })
}

/// Whole table over `j` as a JSON document in `*out`.
///
/// # Safety
/// Pointers must be valid; free `*out` with [`hr_string_free`].
#[no_mangle]
pub unsafe extern "C" fn hr_table_json(
    session: *const HrSession,
    structure: *const HrStructure,
    k: u32,
    engine: HrEngine,
    out: *mut *mut c_char,
) -> HrStatus {
    guard(|| {
        let s = session_ref(session)?;
        let st = structure.as_ref().ok_or_else(|| null("structure"))?;
        let spec = st.spec()?;
        let tab = engine::table(&s.counter, spec, k as usize, engine.into())?;
        let doc = TableDocument::new(spec, k as usize, engine.into(), &tab.counts, tab.notes);
        put_string(out, doc.to_json())
    })
}

/// Survival probability when each vertex fails independently with
/// probability `p`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hr_reliability(
    session: *const HrSession,
    structure: *const HrStructure,
    k: u32,
    p: f64,
    out: *mut f64,
) -> HrStatus {
    guard(|| {
        let s = session_ref(session)?;
        let st = structure.as_ref().ok_or_else(|| null("structure"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = polynomial(s, st, k, HrEngine::Formula)?.eval_f64(p)?;
        Ok(())
    })
}

/// Exact survival probability. `p` is `a/b`, an integer or a decimal; the
/// result is written as `a/b` (or an integer) to `*out`.
///
/// # Safety
/// `p` must be a NUL-terminated string; free `*out` with [`hr_string_free`].
#[no_mangle]
pub unsafe extern "C" fn hr_reliability_exact(
    session: *const HrSession,
    structure: *const HrStructure,
    k: u32,
    p: *const c_char,
    out: *mut *mut c_char,
) -> HrStatus {
    guard(|| {
        let s = session_ref(session)?;
        let st = structure.as_ref().ok_or_else(|| null("structure"))?;
        if p.is_null() {
            return Err(null("p"));
        }
        let text = CStr::from_ptr(p)
            .to_str()
            .map_err(|_| Fail(HrStatus::InvalidArgument, "p is not UTF-8".into()))?;
        let q = parse_rational(text).ok_or_else(|| {
            Fail(
                HrStatus::InvalidArgument,
                format!("cannot parse probability `{text}`"),
            )
        })?;
        let value = polynomial(s, st, k, HrEngine::Formula)?.eval_exact(&q)?;
        let rendered = if value.is_integer() {
            value.numer().to_string()
        } else {
            format!("{}/{}", value.numer(), value.denom())
        };
        put_string(out, rendered)
    })
}

/// # Safety
/// `s` must come from this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn hr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
