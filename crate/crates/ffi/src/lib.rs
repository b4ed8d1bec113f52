//! C interface to `sigquiver`.
//!
//! Objects cross the boundary as opaque handles created by `sq_*_new`-style
//! constructors and released with the matching `sq_*_free`. Every fallible
//! call returns an [`SqStatus`]; on failure [`sq_last_error`] describes the
//! error for the calling thread. Strings returned through `char **` out
//! parameters are owned by the caller and released with [`sq_string_free`].

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sigquiver::congruence;
use sigquiver::curve::PlaneCurve;
use sigquiver::gallery::{self, GalleryItem};
use sigquiver::quiver::{build_quiver, SignatureQuiver};
use sigquiver::reconstruction::reconstruct;
use sigquiver::synthesis::synthesize_curve;
use sigquiver::words::{self, Word};
use sigquiver::{CurvatureFunction, Error};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SqStatus {
    Ok = 0,
    /// Null pointer, bad UTF-8, index out of range or malformed input.
    InvalidArgument = 1,
    /// JSON, CSV or word syntax error.
    Parse = 2,
    NotClosed = 3,
    SimpleSignature = 4,
    Degenerate = 5,
    /// Word is not a closed path of the quiver.
    NotAPath = 6,
    Io = 7,
    /// Count does not fit the output type.
    Overflow = 8,
    Internal = 9,
    Panic = 10,
}

/// Periodic curvature function.
pub struct SqCurvature(CurvatureFunction);

/// Sampled plane curve.
pub struct SqCurve(PlaneCurve);

/// Signature quiver.
pub struct SqQuiver(SignatureQuiver);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SqStatus {
    match e {
        Error::Json(_) | Error::Csv(_) | Error::WordParse { .. } => SqStatus::Parse,
        Error::NotClosed(_) => SqStatus::NotClosed,
        Error::SimpleSignature => SqStatus::SimpleSignature,
        Error::DegenerateSignature(_) | Error::DegenerateFunction(_) | Error::NonRegularCurve { .. } => SqStatus::Degenerate,
        Error::NotAPath(_) | Error::NotCyclic(_) => SqStatus::NotAPath,
        Error::Io(_) => SqStatus::Io,
        Error::CountOverflow => SqStatus::Overflow,
        Error::InternalConsistency(_) => SqStatus::Internal,
        _ => SqStatus::InvalidArgument,
    }
}

struct Fail(SqStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn invalid(msg: &str) -> Fail {
    Fail(SqStatus::InvalidArgument, msg.to_string())
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SqStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            SqStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(invalid(&format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(&format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| invalid(&format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(SqStatus::Internal, "string contains NUL".into()))?;
    put(out, c.into_raw())
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn sq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` is null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---- curvature ----

/// Parses a curvature JSON document.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_curvature_from_json(json: *const c_char, out: *mut *mut SqCurvature) -> SqStatus {
    guard(|| {
        let f = CurvatureFunction::from_json(text(json, "json")?)?;
        put(out, Box::into_raw(Box::new(SqCurvature(f))))
    })
}

/// Named curvature from the built-in gallery (`cinf1`, `mn`, `cogwheel`, ...).
///
/// # Safety
/// `name` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_curvature_gallery(name: *const c_char, out: *mut *mut SqCurvature) -> SqStatus {
    guard(|| match gallery::lookup(text(name, "name")?)? {
        GalleryItem::Curvature(f) => put(out, Box::into_raw(Box::new(SqCurvature(f)))),
        GalleryItem::Curve(_) => Err(invalid("gallery entry is a curve, not a curvature function")),
    })
}

/// # Safety
/// `h` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sq_curvature_free(h: *mut SqCurvature) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` is a live handle; outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn sq_curvature_eval(h: *const SqCurvature, s: f64, kappa: *mut f64, kappa_dot: *mut f64) -> SqStatus {
    guard(|| {
        let (k, kd) = handle(h, "curvature")?.0.eval(s);
        put(kappa, k)?;
        put(kappa_dot, kd)
    })
}

/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_curvature_period(h: *const SqCurvature, out: *mut f64) -> SqStatus {
    guard(|| put(out, handle(h, "curvature")?.0.period()))
}

/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_curvature_to_json(h: *const SqCurvature, out: *mut *mut c_char) -> SqStatus {
    guard(|| put_string(out, handle(h, "curvature")?.0.to_json()))
}

/// `m` with `L = mℓ` for a closed curve.
///
/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_symmetry_index(h: *const SqCurvature, out: *mut u32) -> SqStatus {
    guard(|| put(out, congruence::symmetry_index(&handle(h, "curvature")?.0)?))
}

/// Congruence of the curves defined by two curvature functions. `reversed`
/// compares against the reversed traversal of `b`. `shift` receives the
/// parameter shift when congruent, NaN otherwise; it may be null.
///
/// # Safety
/// `a`, `b` are live handles; `congruent` is writable; `shift` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn sq_congruent(
    a: *const SqCurvature,
    b: *const SqCurvature,
    reversed: c_int,
    congruent: *mut c_int,
    shift: *mut f64,
) -> SqStatus {
    guard(|| {
        let fa = &handle(a, "a")?.0;
        let fb = &handle(b, "b")?.0;
        let r = if reversed != 0 { congruence::find_shift(fa, &fb.reversed()) } else { congruence::find_shift(fa, fb) };
        put(congruent, r.congruent as c_int)?;
        if !shift.is_null() {
            shift.write(r.shift.unwrap_or(f64::NAN));
        }
        Ok(())
    })
}

// ---- curves ----

/// Reconstructs the curve, over `mℓ` when it closes and one period otherwise.
///
/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_curve_reconstruct(h: *const SqCurvature, out: *mut *mut SqCurve) -> SqStatus {
    guard(|| {
        let (c, _) = reconstruct(&handle(h, "curvature")?.0)?;
        put(out, Box::into_raw(Box::new(SqCurve(c))))
    })
}

/// Curve through `n` points `xy = [x0, y0, x1, y1, ...]`, parametrized by
/// chord length. A closed curve may repeat its first point at the end.
///
/// # Safety
/// `xy` points to `2n` doubles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_curve_from_points(xy: *const f64, n: usize, closed: c_int, out: *mut *mut SqCurve) -> SqStatus {
    guard(|| {
        if xy.is_null() {
            return Err(invalid("points are null"));
        }
        let flat = std::slice::from_raw_parts(xy, 2 * n);
        let pts: Vec<[f64; 2]> = flat.chunks_exact(2).map(|p| [p[0], p[1]]).collect();
        let mut t = Vec::with_capacity(n);
        let mut acc = 0.0;
        for (i, p) in pts.iter().enumerate() {
            if i > 0 {
                acc += (p[0] - pts[i - 1][0]).hypot(p[1] - pts[i - 1][1]);
            }
            t.push(acc);
        }
        let c = PlaneCurve::from_polyline(&t, &pts, closed != 0)?;
        put(out, Box::into_raw(Box::new(SqCurve(c))))
    })
}

/// # Safety
/// `h` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sq_curve_free(h: *mut SqCurve) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_curve_sample_count(h: *const SqCurve, out: *mut usize) -> SqStatus {
    guard(|| put(out, handle(h, "curve")?.0.len()))
}

/// Copies up to `cap` samples as `[x0, y0, x1, y1, ...]` into `xy`; `written`
/// receives the number of points copied.
///
/// # Safety
/// `h` is a live handle; `xy` has room for `2 * cap` doubles; `written` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_curve_points(h: *const SqCurve, xy: *mut f64, cap: usize, written: *mut usize) -> SqStatus {
    guard(|| {
        let c = &handle(h, "curve")?.0;
        if xy.is_null() && cap > 0 {
            return Err(invalid("buffer is null"));
        }
        let k = cap.min(c.len());
        for (i, s) in c.samples().iter().take(k).enumerate() {
            *xy.add(2 * i) = s.p[0];
            *xy.add(2 * i + 1) = s.p[1];
        }
        put(written, k)
    })
}

/// Curvature and its arc-length derivative at sample `i`.
///
/// # Safety
/// `h` is a live handle; outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn sq_curve_curvature_at(h: *const SqCurve, i: usize, kappa: *mut f64, kappa_dot: *mut f64) -> SqStatus {
    guard(|| {
        let c = &handle(h, "curve")?.0;
        if i >= c.len() {
            return Err(invalid("sample index out of range"));
        }
        let (k, kd) = c.curvature_at(i);
        put(kappa, k)?;
        put(kappa_dot, kd)
    })
}

/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_curve_length(h: *const SqCurve, out: *mut f64) -> SqStatus {
    guard(|| put(out, handle(h, "curve")?.0.length()))
}

/// Endpoint distance divided by length.
///
/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_curve_closure_gap(h: *const SqCurve, out: *mut f64) -> SqStatus {
    guard(|| put(out, handle(h, "curve")?.0.closure_gap()))
}

/// Congruence of two closed sampled curves.
///
/// # Safety
/// `a`, `b` are live handles; `congruent` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_curves_congruent(a: *const SqCurve, b: *const SqCurve, congruent: *mut c_int) -> SqStatus {
    guard(|| {
        let r = congruence::are_congruent(&handle(a, "a")?.0, &handle(b, "b")?.0)?;
        put(congruent, r.congruent as c_int)
    })
}

// ---- quivers ----

/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_quiver_build(h: *const SqCurvature, out: *mut *mut SqQuiver) -> SqStatus {
    guard(|| {
        let q = build_quiver(&handle(h, "curvature")?.0)?;
        put(out, Box::into_raw(Box::new(SqQuiver(q))))
    })
}

/// # Safety
/// `json` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_quiver_from_json(json: *const c_char, out: *mut *mut SqQuiver) -> SqStatus {
    guard(|| {
        let q = SignatureQuiver::from_json(text(json, "json")?)?;
        put(out, Box::into_raw(Box::new(SqQuiver(q))))
    })
}

/// # Safety
/// `h` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sq_quiver_free(h: *mut SqQuiver) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_quiver_to_json(h: *const SqQuiver, out: *mut *mut c_char) -> SqStatus {
    guard(|| put_string(out, handle(h, "quiver")?.0.to_json()))
}

/// # Safety
/// `h` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_quiver_to_dot(h: *const SqQuiver, out: *mut *mut c_char) -> SqStatus {
    guard(|| put_string(out, handle(h, "quiver")?.0.to_dot()))
}

/// Relabels edges by `(from, to, ω)`.
///
/// # Safety
/// `h` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn sq_quiver_canonical_relabel(h: *mut SqQuiver) -> SqStatus {
    guard(|| {
        let q = h.as_mut().ok_or_else(|| invalid("quiver is null"))?;
        q.0.canonical_relabel();
        Ok(())
    })
}

/// # Safety
/// `h` is a live handle; outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn sq_quiver_counts(h: *const SqQuiver, vertices: *mut usize, edges: *mut usize) -> SqStatus {
    guard(|| {
        let q = &handle(h, "quiver")?.0;
        put(vertices, q.vertices.len())?;
        put(edges, q.edges.len())
    })
}

/// Symmetry exponent `m` and signature index `min μ`.
///
/// # Safety
/// `h` is a live handle; outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn sq_quiver_indices(h: *const SqQuiver, m: *mut u32, sig_index: *mut u32) -> SqStatus {
    guard(|| {
        let q = &handle(h, "quiver")?.0;
        put(m, q.m)?;
        put(sig_index, q.sig_index())
    })
}

/// Edge `i`: its letter, endpoints, multiplicity and weight.
///
/// # Safety
/// `h` is a live handle; outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn sq_quiver_edge(
    h: *const SqQuiver,
    i: usize,
    label: *mut c_char,
    from: *mut usize,
    to: *mut usize,
    mu: *mut u32,
    omega: *mut f64,
) -> SqStatus {
    guard(|| {
        let e = handle(h, "quiver")?.0.edges.get(i).ok_or_else(|| invalid("edge index out of range"))?;
        put(label, e.label as u8 as c_char)?;
        put(from, e.from)?;
        put(to, e.to)?;
        put(mu, e.mu)?;
        put(omega, e.omega)
    })
}

fn multiplicities(q: &SignatureQuiver, spec: &str) -> Result<BTreeMap<char, u32>, Fail> {
    Ok(words::parse_multiplicities(spec, &q.labels())?)
}

/// Closed paths with the given per-edge multiplicities (`"a=1,b=2"` or
/// `"all=1"`), one per rotation class, newline separated. `truncated` is set
/// when `max_results` stopped the search; it may be null.
///
/// # Safety
/// `h` is a live handle; `mult` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_words_enumerate(
    h: *const SqQuiver,
    mult: *const c_char,
    max_results: usize,
    out: *mut *mut c_char,
    truncated: *mut c_int,
) -> SqStatus {
    guard(|| {
        let q = &handle(h, "quiver")?.0;
        let m = multiplicities(q, text(mult, "mult")?)?;
        let e = words::enumerate_words(&q.graph(), &m, max_results)?;
        let mut s = String::new();
        for w in &e.words {
            s.push_str(&w.to_string());
            s.push('\n');
        }
        if !truncated.is_null() {
            truncated.write(e.truncated as c_int);
        }
        put_string(out, s)
    })
}

/// Number of rotation classes, without listing them.
///
/// # Safety
/// `h` is a live handle; `mult` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sq_words_count(h: *const SqQuiver, mult: *const c_char, out: *mut u64) -> SqStatus {
    guard(|| {
        let q = &handle(h, "quiver")?.0;
        let m = multiplicities(q, text(mult, "mult")?)?;
        let n = words::count_words(&q.graph(), &m)?;
        let n = u64::try_from(n).map_err(|_| Fail(SqStatus::Overflow, format!("{n} classes do not fit 64 bits")))?;
        put(out, n)
    })
}

/// Synthesizes the curve of a closed word such as `"(cadb)^6"`. `xi` is used
/// when `has_xi` is non-zero, otherwise the quiver's turning number. `report`
/// may be null; otherwise it receives a JSON summary.
///
/// # Safety
/// `h` is a live handle; `word` is a NUL-terminated string; `out` is writable;
/// `report` is null or writable.
#[no_mangle]
pub unsafe extern "C" fn sq_synthesize(
    h: *const SqQuiver,
    word: *const c_char,
    xi: i64,
    has_xi: c_int,
    out: *mut *mut SqCurve,
    report: *mut *mut c_char,
) -> SqStatus {
    guard(|| {
        let q = &handle(h, "quiver")?.0;
        let w = Word::parse(text(word, "word")?)?;
        let r = synthesize_curve(q, &w, (has_xi != 0).then_some(xi))?;
        if !report.is_null() {
            let json = serde_json::to_string(&r).map_err(Error::from)?;
            put_string(report, json)?;
        }
        put(out, Box::into_raw(Box::new(SqCurve(r.curve))))
    })
}
