//! C ABI over `bloch_lab`.
//!
//! Every object crosses the boundary as an opaque, heap-allocated handle
//! owned by the caller and released with the matching `*_free`. Calls
//! return a [`BlStatus`]; on failure [`bl_last_error`] holds a message for the
//! calling thread. Strings returned through out-parameters are released with
//! [`bl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bloch_lab::bloch::{bloch_norm_star, bloch_seminorm, AnalyticFunction, GridParams, NormEstimate};
use bloch_lab::disc::{AutomorphismFlow, DiscPoint, MobiusAutomorphism};
use bloch_lab::harness::{self, SuiteConfig};
use bloch_lab::operators::{BlochOperator, OperatorDescriptor};
use bloch_lab::range_space::{RangeSpace, VectorValue};
use bloch_lab::Error;
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// A point, exponent, dimension or other argument out of range.
    InvalidArgument = 3,
    /// Malformed JSON or descriptor.
    Descriptor = 4,
    NotIsometry = 5,
    NotReflection = 6,
    NotInB0 = 7,
    UnknownSuite = 8,
    Config = 9,
    Unsupported = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlComplex {
    pub re: f64,
    pub im: f64,
}

impl From<BlComplex> for Complex64 {
    fn from(z: BlComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for BlComplex {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// Search grid for norm estimates.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BlGrid {
    pub n_radii: usize,
    pub n_angles: usize,
    pub refinement_rounds: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct BlNormEstimate {
    pub value: f64,
    pub argmax: BlComplex,
    pub uncertainty: f64,
}

impl From<NormEstimate> for BlNormEstimate {
    fn from(e: NormEstimate) -> Self {
        Self { value: e.value, argmax: e.argmax.value().into(), uncertainty: e.uncertainty }
    }
}

pub struct BlSpace(RangeSpace);
pub struct BlFunction(AnalyticFunction);
pub struct BlMobius(MobiusAutomorphism);
pub struct BlFlow(AutomorphismFlow);
pub struct BlOperator(BlochOperator);

enum Fail {
    Null,
    Utf8,
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

impl From<serde_json::Error> for Fail {
    fn from(e: serde_json::Error) -> Self {
        Fail::Core(Error::Json(e))
    }
}

fn status_of(e: &Error) -> BlStatus {
    match e {
        Error::BoundaryPoint { .. }
        | Error::DegenerateMap(_)
        | Error::NotAutomorphism(_)
        | Error::InvalidFlow(_)
        | Error::InvalidExponent(_)
        | Error::DimensionMismatch { .. }
        | Error::ZeroVector
        | Error::NotNormalized(_)
        | Error::NotUnimodular(_) => BlStatus::InvalidArgument,
        Error::NotIsometry { .. } | Error::NotHermitian { .. } => BlStatus::NotIsometry,
        Error::NotReflection { .. } => BlStatus::NotReflection,
        Error::NotInB0(_) => BlStatus::NotInB0,
        Error::UnknownSuite(_) => BlStatus::UnknownSuite,
        Error::Config(_) | Error::Io(_) => BlStatus::Config,
        Error::Descriptor(_) | Error::Json(_) => BlStatus::Descriptor,
        Error::Unsupported(_) => BlStatus::Unsupported,
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BlStatus::Ok,
        Ok(Err(Fail::Null)) => {
            set_last_error("null pointer argument".into());
            BlStatus::NullPointer
        }
        Ok(Err(Fail::Utf8)) => {
            set_last_error("string argument is not valid UTF-8".into());
            BlStatus::InvalidUtf8
        }
        Ok(Err(Fail::Core(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal panic: {msg}"));
            BlStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null)
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    out.write(v);
    Ok(())
}

unsafe fn put_handle<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    out.write(Box::into_raw(Box::new(v)));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    let c = CString::new(s).map_err(|_| Fail::Utf8)?;
    out.write(c.into_raw());
    Ok(())
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail::Null);
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail::Utf8)
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null);
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn grid_arg(g: *const BlGrid) -> GridParams {
    match g.as_ref() {
        Some(g) => GridParams { n_radii: g.n_radii, n_angles: g.n_angles, refinement_rounds: g.refinement_rounds },
        None => GridParams::default(),
    }
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn bl_status_message(status: BlStatus) -> *const c_char {
    let s: &'static CStr = match status {
        BlStatus::Ok => c"ok",
        BlStatus::NullPointer => c"null pointer argument",
        BlStatus::InvalidUtf8 => c"invalid UTF-8",
        BlStatus::InvalidArgument => c"invalid argument",
        BlStatus::Descriptor => c"malformed descriptor",
        BlStatus::NotIsometry => c"not an isometry",
        BlStatus::NotReflection => c"not a reflection",
        BlStatus::NotInB0 => c"function does not vanish at 0",
        BlStatus::UnknownSuite => c"unknown suite",
        BlStatus::Config => c"invalid configuration",
        BlStatus::Unsupported => c"unsupported",
        BlStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn bl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn bl_grid_default() -> BlGrid {
    let g = GridParams::default();
    BlGrid { n_radii: g.n_radii, n_angles: g.n_angles, refinement_rounds: g.refinement_rounds }
}

// ---- range space ----

/// `C^d` with the `p`-norm.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bl_space_new(d: usize, p: f64, out: *mut *mut BlSpace) -> BlStatus {
    guard(|| put_handle(out, BlSpace(RangeSpace::new(d, p)?)))
}

/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bl_space_free(s: *mut BlSpace) {
    free(s)
}

/// # Safety
/// `s` must be a live handle; `v` must point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn bl_space_norm(s: *const BlSpace, v: *const BlComplex, len: usize, out: *mut f64) -> BlStatus {
    guard(|| {
        let s = deref(s)?;
        let v = VectorValue::from_iterator(len, slice_arg(v, len)?.iter().map(|&z| Complex64::from(z)));
        put(out, s.0.norm(&v)?)
    })
}

// ---- functions ----

/// Parses a function descriptor.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bl_function_from_json(json: *const c_char, out: *mut *mut BlFunction) -> BlStatus {
    guard(|| {
        let f: AnalyticFunction = serde_json::from_str(str_arg(json)?)?;
        put_handle(out, BlFunction(f))
    })
}

/// # Safety
/// `f` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bl_function_to_json(f: *const BlFunction, out: *mut *mut c_char) -> BlStatus {
    guard(|| put_string(out, serde_json::to_string(&deref(f)?.0)?))
}

/// # Safety
/// `f` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bl_function_free(f: *mut BlFunction) {
    free(f)
}

/// Range dimension, or 0 for NULL.
///
/// # Safety
/// `f` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bl_function_dim(f: *const BlFunction) -> usize {
    f.as_ref().map_or(0, |f| f.0.dim())
}

/// Writes `f(z)` into `out[0..len]`; `len` must equal the dimension.
///
/// # Safety
/// `f` must be a live handle; `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn bl_function_eval(f: *const BlFunction, z: BlComplex, out: *mut BlComplex, len: usize) -> BlStatus {
    guard(|| {
        let f = deref(f)?;
        if len != f.0.dim() {
            return Err(Error::DimensionMismatch { expected: f.0.dim(), found: len }.into());
        }
        if out.is_null() {
            return Err(Fail::Null);
        }
        let v = f.0.eval(DiscPoint::new(z.into())?);
        for (k, x) in v.iter().enumerate() {
            out.add(k).write((*x).into());
        }
        Ok(())
    })
}

unsafe fn estimate(
    s: *const BlSpace,
    f: *const BlFunction,
    grid: *const BlGrid,
    out: *mut BlNormEstimate,
    star: bool,
) -> BlStatus {
    guard(|| {
        let (s, f) = (deref(s)?, deref(f)?);
        if s.0.dim() != f.0.dim() {
            return Err(Error::DimensionMismatch { expected: s.0.dim(), found: f.0.dim() }.into());
        }
        let g = grid_arg(grid);
        let e = if star { bloch_norm_star(&s.0, &f.0, &g) } else { bloch_seminorm(&s.0, &f.0, &g) };
        put(out, e.into())
    })
}

/// Bloch seminorm `sup (1-|z|^2) ||f'(z)||`. A NULL grid uses the defaults.
///
/// # Safety
/// `s`, `f` must be live handles; `grid` NULL or valid; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bl_seminorm(s: *const BlSpace, f: *const BlFunction, grid: *const BlGrid, out: *mut BlNormEstimate) -> BlStatus {
    estimate(s, f, grid, out, false)
}

/// `||f(0)|| + ` the seminorm.
///
/// # Safety
/// As for [`bl_seminorm`].
#[no_mangle]
pub unsafe extern "C" fn bl_norm_star(s: *const BlSpace, f: *const BlFunction, grid: *const BlGrid, out: *mut BlNormEstimate) -> BlStatus {
    estimate(s, f, grid, out, true)
}

// ---- automorphisms ----

/// `z -> λ (z - a) / (1 - conj(a) z)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bl_mobius_new(lambda: BlComplex, a: BlComplex, out: *mut *mut BlMobius) -> BlStatus {
    guard(|| put_handle(out, BlMobius(MobiusAutomorphism::from_canonical(lambda.into(), a.into())?)))
}

/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bl_mobius_free(m: *mut BlMobius) {
    free(m)
}

/// # Safety
/// `m` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bl_mobius_map(m: *const BlMobius, z: BlComplex, out: *mut BlComplex) -> BlStatus {
    guard(|| {
        let w = deref(m)?.0.apply(DiscPoint::new(z.into())?)?;
        put(out, w.value().into())
    })
}

/// # Safety
/// `m` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bl_mobius_derivative(m: *const BlMobius, z: BlComplex, out: *mut BlComplex) -> BlStatus {
    guard(|| put(out, deref(m)?.0.derivative(DiscPoint::new(z.into())?)?.into()))
}

/// `a ∘ b`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bl_mobius_compose(a: *const BlMobius, b: *const BlMobius, out: *mut *mut BlMobius) -> BlStatus {
    guard(|| put_handle(out, BlMobius(deref(a)?.0.compose(&deref(b)?.0))))
}

/// # Safety
/// `m` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bl_mobius_inverse(m: *const BlMobius, out: *mut *mut BlMobius) -> BlStatus {
    guard(|| put_handle(out, BlMobius(deref(m)?.0.inverse())))
}

/// Recovers `(λ, a)`.
///
/// # Safety
/// `m` must be a live handle; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bl_mobius_canonical(m: *const BlMobius, lambda: *mut BlComplex, a: *mut BlComplex) -> BlStatus {
    guard(|| {
        let c = deref(m)?.0.canonical();
        put(lambda, c.lambda.into())?;
        put(a, c.a.into())
    })
}

/// Matrix distance, minimised over the sign ambiguity.
///
/// # Safety
/// `a`, `b` must be live handles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bl_mobius_distance(a: *const BlMobius, b: *const BlMobius, out: *mut f64) -> BlStatus {
    guard(|| put(out, deref(a)?.0.distance(&deref(b)?.0)))
}

// ---- flows ----

/// # Safety
/// `json` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bl_flow_from_json(json: *const c_char, out: *mut *mut BlFlow) -> BlStatus {
    guard(|| {
        let f: AutomorphismFlow = serde_json::from_str(str_arg(json)?)?;
        put_handle(out, BlFlow(f))
    })
}

/// # Safety
/// `f` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bl_flow_free(f: *mut BlFlow) {
    free(f)
}

/// The member `φ_t` of the flow.
///
/// # Safety
/// `f` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bl_flow_at(f: *const BlFlow, t: f64, out: *mut *mut BlMobius) -> BlStatus {
    guard(|| {
        if !t.is_finite() {
            return Err(Error::InvalidFlow(format!("time {t} is not finite")).into());
        }
        put_handle(out, BlMobius(deref(f)?.0.at(t)))
    })
}

// ---- operators ----

/// Builds and certifies an operator from its descriptor over `s`. Group
/// descriptors yield the hermitian generator.
///
/// # Safety
/// `s` must be a live handle; `json` NUL-terminated; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bl_operator_from_json(s: *const BlSpace, json: *const c_char, out: *mut *mut BlOperator) -> BlStatus {
    guard(|| {
        let s = deref(s)?;
        let desc: OperatorDescriptor = serde_json::from_str(str_arg(json)?)?;
        put_handle(out, BlOperator(BlochOperator::from_descriptor(&s.0, desc)?))
    })
}

/// # Safety
/// `op` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bl_operator_free(op: *mut BlOperator) {
    free(op)
}

/// # Safety
/// `op`, `f` must be live handles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bl_operator_apply(op: *const BlOperator, f: *const BlFunction, out: *mut *mut BlFunction) -> BlStatus {
    guard(|| put_handle(out, BlFunction(deref(op)?.0.apply(&deref(f)?.0)?)))
}

// ---- harness ----

/// Runs a suite and returns its JSON-lines report. `config_json` may be NULL
/// for the defaults. A suite whose checks fail still returns `Ok`; the
/// outcome is in `all_passed`.
///
/// # Safety
/// `suite` must be NUL-terminated; `config_json` NULL or NUL-terminated;
/// outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bl_run_suite(
    config_json: *const c_char,
    suite: *const c_char,
    out_jsonl: *mut *mut c_char,
    all_passed: *mut bool,
) -> BlStatus {
    guard(|| {
        let cfg = if config_json.is_null() { SuiteConfig::default() } else { SuiteConfig::from_json(str_arg(config_json)?)? };
        let cfg = cfg.with_env_seed()?;
        let suite = str_arg(suite)?;
        if out_jsonl.is_null() || all_passed.is_null() {
            return Err(Fail::Null);
        }
        let reports = harness::run_suite(&cfg, suite)?;
        put(all_passed, reports.iter().all(|r| r.pass))?;
        put_string(out_jsonl, harness::render_jsonl(&cfg, suite, &reports)?)
    })
}
