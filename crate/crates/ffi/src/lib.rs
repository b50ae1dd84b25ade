//! C ABI over `csf-core`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns
//! a [`CsfStatus`]; on failure, [`csf_last_error_message`] describes the
//! error for the calling thread. Strings returned through out-parameters are
//! NUL-terminated and must be released with [`csf_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use csf_core::distinguish::DistinguishError;
use csf_core::{
    checked_free_tree_count, compute_csf, eval_csf, eval_csf_truncated, show_distinct, truncate_csf,
    verify_certificate, DistinctnessCertificate, EvalError, EvalSpec, Tree,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    SizeMismatch = 5,
    NotPrime = 6,
    Overflow = 7,
    Panic = 8,
}

/// A tree on vertices `0..n`.
pub struct CsfTree(Tree);

/// The outcome of a distinctness search.
pub struct CsfCertificate(DistinctnessCertificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl ToString) {
    let msg = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: CsfStatus, msg: impl ToString) -> CsfStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning panics into [`CsfStatus::Panic`].
fn guard(f: impl FnOnce() -> CsfStatus) -> CsfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(CsfStatus::Panic, "internal panic"),
    }
}

fn eval_status(e: &EvalError) -> CsfStatus {
    match e {
        EvalError::NotPrime(_) => CsfStatus::NotPrime,
        _ => CsfStatus::InvalidArgument,
    }
}

fn distinguish_status(e: &DistinguishError) -> CsfStatus {
    match e {
        DistinguishError::SizeMismatch(..) => CsfStatus::SizeMismatch,
        DistinguishError::MalformedCertificate(_) => CsfStatus::Parse,
        DistinguishError::Eval(e) => eval_status(e),
        DistinguishError::ZeroAccuracy => CsfStatus::InvalidArgument,
    }
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, CsfStatus> {
    if text.is_null() {
        return Err(fail(CsfStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(text).to_str().map_err(|e| fail(CsfStatus::InvalidUtf8, e))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> CsfStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            CsfStatus::Ok
        }
        Err(e) => fail(CsfStatus::InvalidArgument, e),
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(CsfStatus::NullPointer, concat!("null argument: ", stringify!($p)));
        })+
    };
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn csf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn csf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an edge-list tree: first line `n`, then `n - 1` lines `u v`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn csf_tree_parse(text: *const c_char, out: *mut *mut CsfTree) -> CsfStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match Tree::parse(text) {
            Ok(tree) => {
                *out = Box::into_raw(Box::new(CsfTree(tree)));
                CsfStatus::Ok
            }
            Err(e) => fail(CsfStatus::Parse, e),
        }
    })
}

/// # Safety
/// `tree` must come from [`csf_tree_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn csf_tree_free(tree: *mut CsfTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// Number of vertices, or 0 for NULL.
///
/// # Safety
/// `tree` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn csf_tree_vertex_count(tree: *const CsfTree) -> usize {
    tree.as_ref().map_or(0, |t| t.0.vertex_count())
}

/// Writes the tree back out in edge-list form.
///
/// # Safety
/// `tree` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn csf_tree_to_edge_list(tree: *const CsfTree, out: *mut *mut c_char) -> CsfStatus {
    guard(|| {
        non_null!(tree, out);
        write_string(out, (*tree).0.to_edge_list())
    })
}

/// The chromatic symmetric function in the power-sum basis, one
/// `coefficient<TAB>parts` line per term. `truncate` > 0 keeps only terms
/// whose parts are all at most `truncate`.
///
/// # Safety
/// `tree` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn csf_compute(tree: *const CsfTree, truncate: u32, out: *mut *mut c_char) -> CsfStatus {
    guard(|| {
        non_null!(tree, out);
        let mut poly = compute_csf(&(*tree).0);
        if truncate > 0 {
            poly = truncate_csf(&poly, truncate);
        }
        write_string(out, poly.to_text())
    })
}

/// Evaluates the function mod prime `q` at `p_i -> c[i - 1]`. `len` must equal
/// the vertex count. `truncate` > 0 selects the truncated evaluation, which
/// requires `c[j] == 0` for `j >= truncate`.
///
/// # Safety
/// `tree` must be a live handle, `c` must point to `len` values, `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn csf_eval(
    tree: *const CsfTree,
    q: u64,
    c: *const u64,
    len: usize,
    truncate: usize,
    out: *mut u64,
) -> CsfStatus {
    guard(|| {
        non_null!(tree, c, out);
        let tree = &(*tree).0;
        if len != tree.vertex_count() {
            return fail(
                CsfStatus::SizeMismatch,
                format!("tuple has {len} entries, tree has {} vertices", tree.vertex_count()),
            );
        }
        let tuple = std::slice::from_raw_parts(c, len).to_vec();
        let trunc = (truncate > 0).then_some(truncate);
        let result = EvalSpec::new(q, tuple, trunc).and_then(|spec| match trunc {
            Some(_) => eval_csf_truncated(tree, &spec),
            None => eval_csf(tree, &spec),
        });
        match result {
            Ok(r) => {
                *out = r;
                CsfStatus::Ok
            }
            Err(e) => fail(eval_status(&e), e),
        }
    })
}

/// Searches for a witness that the two trees have different functions. On
/// [`CsfStatus::Ok`] a certificate is always produced; check it with
/// [`csf_certificate_is_proved`].
///
/// # Safety
/// `s` and `t` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn csf_show_distinct(
    s: *const CsfTree,
    t: *const CsfTree,
    accuracy: u32,
    seed: u64,
    out: *mut *mut CsfCertificate,
) -> CsfStatus {
    guard(|| {
        non_null!(s, t, out);
        match show_distinct(&(*s).0, &(*t).0, accuracy, seed) {
            Ok(cert) => {
                *out = Box::into_raw(Box::new(CsfCertificate(cert)));
                CsfStatus::Ok
            }
            Err(e) => fail(distinguish_status(&e), e),
        }
    })
}

/// True iff the certificate records a witness. False for NULL.
///
/// # Safety
/// `cert` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn csf_certificate_is_proved(cert: *const CsfCertificate) -> bool {
    cert.as_ref().is_some_and(|c| c.0.is_proved())
}

/// Single-line text form of the certificate.
///
/// # Safety
/// `cert` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn csf_certificate_to_string(cert: *const CsfCertificate, out: *mut *mut c_char) -> CsfStatus {
    guard(|| {
        non_null!(cert, out);
        write_string(out, (*cert).0.to_string())
    })
}

/// Reads a certificate from its text form.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn csf_certificate_parse(text: *const c_char, out: *mut *mut CsfCertificate) -> CsfStatus {
    guard(|| {
        non_null!(out);
        let text = match read_str(text) {
            Ok(t) => t,
            Err(status) => return status,
        };
        match text.trim().parse::<DistinctnessCertificate>() {
            Ok(cert) => {
                *out = Box::into_raw(Box::new(CsfCertificate(cert)));
                CsfStatus::Ok
            }
            Err(e) => fail(distinguish_status(&e), e),
        }
    })
}

/// # Safety
/// `cert` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn csf_certificate_free(cert: *mut CsfCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Re-checks a certificate against the two trees; `*valid` is set to whether
/// it holds.
///
/// # Safety
/// All handles must be live; `valid` must be writable.
#[no_mangle]
pub unsafe extern "C" fn csf_verify_certificate(
    s: *const CsfTree,
    t: *const CsfTree,
    cert: *const CsfCertificate,
    valid: *mut bool,
) -> CsfStatus {
    guard(|| {
        non_null!(s, t, cert, valid);
        match verify_certificate(&(*s).0, &(*t).0, &(*cert).0) {
            Ok(v) => {
                *valid = v;
                CsfStatus::Ok
            }
            Err(e) => fail(distinguish_status(&e), e),
        }
    })
}

/// Number of free trees on `n` vertices.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn csf_free_tree_count(n: usize, out: *mut u64) -> CsfStatus {
    guard(|| {
        non_null!(out);
        if n == 0 {
            return fail(CsfStatus::InvalidArgument, "n must be at least 1");
        }
        match checked_free_tree_count(n).and_then(|c| u64::try_from(c).ok()) {
            Some(c) => {
                *out = c;
                CsfStatus::Ok
            }
            None => fail(CsfStatus::Overflow, format!("tree count for n={n} does not fit in 64 bits")),
        }
    })
}
