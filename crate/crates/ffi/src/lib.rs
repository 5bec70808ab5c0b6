//! C ABI for the word-generation and WAP-decision core.
//!
//! Streams are opaque handles created from the same textual specs the CLI
//! accepts (`morphic:01/10@0`, `named:paperfolding`, ...). Every function
//! returns a status code; a human-readable message for the most recent
//! failure on the calling thread is available via
//! [`wap_last_error_message`]. The generated header lives in
//! `include/wap.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use wap_core::cli::WordSpec;
use wap_core::deciders::{
    decide_bounded_wap, decide_wap, BoundedWapReason, MorphismMatrix, WapCondition,
};
use wap_core::words::Morphism;
use wap_core::{Error, WordStream};

/// Result of every fallible call in this ABI.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WapStatus {
    Ok = 0,
    InternalError = 1,
    /// Malformed spec, letters, or preconditions (bad morphism, bad start).
    InvalidInput = 2,
    /// A search or stream budget ran out.
    BudgetExhausted = 3,
    NullArgument = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn fail(status: WapStatus, message: &str) -> WapStatus {
    let c = CString::new(message.replace('\0', "?")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
    status
}

fn fail_with(err: Error) -> WapStatus {
    let status = match err {
        Error::Input(_) | Error::Precondition(_) | Error::Size(_) => WapStatus::InvalidInput,
        Error::Budget(_) => WapStatus::BudgetExhausted,
        Error::Io(_) => WapStatus::InternalError,
    };
    fail(status, &err.to_string())
}

/// Copies the most recent error message of this thread into `buf`
/// (NUL-terminated, truncated to `cap`). Returns the full message length
/// in bytes, excluding the terminator.
///
/// # Safety
/// `buf` must be null or valid for `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn wap_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && cap > 0 {
            let n = cap.min(bytes.len());
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
                // Always terminate, even when truncating.
                *buf.add(n - 1) = 0;
            }
        }
        bytes.len() - 1
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

// ---------------------------------------------------------------------------
// Streams
// ---------------------------------------------------------------------------

/// An infinite-word letter source (opaque).
pub struct WapStream {
    inner: WordStream,
}

unsafe fn cstr<'a>(ptr: *const c_char) -> Result<&'a str, WapStatus> {
    if ptr.is_null() {
        return Err(fail(WapStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(WapStatus::InvalidInput, "argument is not valid UTF-8"))
}

/// Creates a stream from a textual spec
/// (`morphic:<i0>/<i1>[/<i2>]@<s> | toeplitz:<pat> | named:<name> |
/// periodic:<word> | file:<path>`). On success `*out` owns the stream;
/// release it with [`wap_stream_free`].
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wap_stream_new(
    spec: *const c_char,
    out: *mut *mut WapStream,
) -> WapStatus {
    if out.is_null() {
        return fail(WapStatus::NullArgument, "null output pointer");
    }
    let text = match cstr(spec) {
        Ok(t) => t,
        Err(status) => return status,
    };
    let parsed = match WordSpec::parse(text) {
        Ok(s) => s,
        Err(e) => return fail_with(e),
    };
    match parsed.stream() {
        Ok(stream) => {
            *out = Box::into_raw(Box::new(WapStream { inner: stream }));
            WapStatus::Ok
        }
        Err(e) => fail_with(e),
    }
}

/// Fills `buf` with up to `cap` letters (values `0`..`2`, not ASCII) and
/// stores the count in `*written`. A finite source writes fewer letters
/// once exhausted; that is still `Ok`.
///
/// # Safety
/// `stream`, `buf` (for `cap` bytes) and `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn wap_stream_next(
    stream: *mut WapStream,
    buf: *mut u8,
    cap: usize,
    written: *mut usize,
) -> WapStatus {
    if stream.is_null() || buf.is_null() || written.is_null() {
        return fail(WapStatus::NullArgument, "null stream, buffer or count pointer");
    }
    let stream = &mut (*stream).inner;
    let mut n = 0usize;
    while n < cap {
        match stream.next_letter() {
            Some(c) => {
                *buf.add(n) = c;
                n += 1;
            }
            None => break,
        }
    }
    *written = n;
    WapStatus::Ok
}

/// Number of letters produced so far.
///
/// # Safety
/// `stream` must be a live handle from [`wap_stream_new`].
#[no_mangle]
pub unsafe extern "C" fn wap_stream_position(stream: *const WapStream) -> u64 {
    if stream.is_null() {
        return 0;
    }
    (*stream).inner.position()
}

/// Alphabet size of the stream (2 or 3).
///
/// # Safety
/// `stream` must be a live handle from [`wap_stream_new`].
#[no_mangle]
pub unsafe extern "C" fn wap_stream_alphabet_size(stream: *const WapStream) -> u8 {
    if stream.is_null() {
        return 0;
    }
    (*stream).inner.alphabet_size()
}

/// Releases a stream handle. A null pointer is a no-op.
///
/// # Safety
/// `stream` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn wap_stream_free(stream: *mut WapStream) {
    if !stream.is_null() {
        drop(Box::from_raw(stream));
    }
}

// ---------------------------------------------------------------------------
// Deciders
// ---------------------------------------------------------------------------

/// Which rule decided weak abelian periodicity.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WapDecisionRule {
    ZeroCrossing = 0,
    Endpoint = 1,
    Formula = 2,
}

/// Why the fixed point is (or is not) bounded weak abelian periodic.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WapBoundedReason {
    AbelianEquivalentImages = 0,
    AlternatingForm = 1,
    NotBounded = 2,
}

/// Exact verdicts for one binary uniform morphism and start letter.
/// `a_max`, `t`, `t_pos` and `lhs` are meaningful only when
/// `has_formula_data` is 1 (the formula rule was evaluated).
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct WapDecision {
    pub matrix_a: u64,
    pub matrix_b: u64,
    pub matrix_c: u64,
    pub matrix_d: u64,
    pub image_length: u64,
    /// 1 when the fixed point from the start letter is WAP.
    pub wap: u8,
    pub rule: WapDecisionRule,
    pub delta: i64,
    pub has_formula_data: u8,
    pub a_max: i64,
    pub t: i64,
    pub t_pos: u64,
    pub lhs: i64,
    /// 1 when the fixed point is bounded WAP (equivalently, abelian
    /// periodic).
    pub bounded_wap: u8,
    pub bounded_reason: WapBoundedReason,
}

/// Decides WAP and bounded WAP for the uniform binary morphism
/// `0 -> img0, 1 -> img1` and the fixed point from `start`.
///
/// # Safety
/// `img0` and `img1` must be NUL-terminated strings, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wap_decide(
    img0: *const c_char,
    img1: *const c_char,
    start: u8,
    out: *mut WapDecision,
) -> WapStatus {
    if out.is_null() {
        return fail(WapStatus::NullArgument, "null output pointer");
    }
    let (img0, img1) = match (cstr(img0), cstr(img1)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    let result = (|| {
        let m = Morphism::from_images(&[img0, img1])?;
        let matrix = MorphismMatrix::of(&m)?;
        let (verdict, cert) = decide_wap(&m, start)?;
        let (bounded, reason) = decide_bounded_wap(&m)?;
        Ok::<_, Error>((matrix, verdict, cert, bounded, reason))
    })();
    match result {
        Err(e) => fail_with(e),
        Ok((matrix, verdict, cert, bounded, reason)) => {
            let has_formula = cert.condition == WapCondition::Formula;
            *out = WapDecision {
                matrix_a: matrix.a,
                matrix_b: matrix.b,
                matrix_c: matrix.c,
                matrix_d: matrix.d,
                image_length: matrix.k,
                wap: verdict.is_wap() as u8,
                rule: match cert.condition {
                    WapCondition::ZeroCrossing => WapDecisionRule::ZeroCrossing,
                    WapCondition::Endpoint => WapDecisionRule::Endpoint,
                    WapCondition::Formula => WapDecisionRule::Formula,
                },
                delta: cert.delta,
                has_formula_data: has_formula as u8,
                a_max: cert.a_max.unwrap_or(0),
                t: cert.t.unwrap_or(0),
                t_pos: cert.t_pos.unwrap_or(0),
                lhs: cert.lhs.unwrap_or(0),
                bounded_wap: bounded as u8,
                bounded_reason: match reason {
                    BoundedWapReason::AbelianEquivalentImages => {
                        WapBoundedReason::AbelianEquivalentImages
                    }
                    BoundedWapReason::AlternatingForm => WapBoundedReason::AlternatingForm,
                    BoundedWapReason::No => WapBoundedReason::NotBounded,
                },
            };
            WapStatus::Ok
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::mem::MaybeUninit;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn stream_round_trip() {
        let spec = c("named:paperfolding");
        let mut handle: *mut WapStream = std::ptr::null_mut();
        let status = unsafe { wap_stream_new(spec.as_ptr(), &mut handle) };
        assert_eq!(status, WapStatus::Ok);
        let mut buf = [0u8; 32];
        let mut written = 0usize;
        let status = unsafe { wap_stream_next(handle, buf.as_mut_ptr(), buf.len(), &mut written) };
        assert_eq!(status, WapStatus::Ok);
        assert_eq!(written, 32);
        let text: String = buf.iter().map(|&d| char::from(b'0' + d)).collect();
        assert_eq!(text, "00100110001101100010011100110110");
        assert_eq!(unsafe { wap_stream_position(handle) }, 32);
        assert_eq!(unsafe { wap_stream_alphabet_size(handle) }, 2);
        unsafe { wap_stream_free(handle) };
    }

    #[test]
    fn bad_specs_set_the_error_message() {
        let spec = c("named:nosuch");
        let mut handle: *mut WapStream = std::ptr::null_mut();
        let status = unsafe { wap_stream_new(spec.as_ptr(), &mut handle) };
        assert_eq!(status, WapStatus::InvalidInput);
        let mut buf = [0 as c_char; 256];
        let len = wap_last_error_message(buf.as_mut_ptr(), buf.len());
        assert!(len > 0);
        let msg = unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap();
        assert!(msg.contains("nosuch"), "{msg}");
    }

    #[test]
    fn null_arguments_are_rejected() {
        let status = unsafe { wap_stream_new(std::ptr::null(), std::ptr::null_mut()) };
        assert_eq!(status, WapStatus::NullArgument);
        let mut written = 0usize;
        let status = unsafe {
            wap_stream_next(std::ptr::null_mut(), std::ptr::null_mut(), 0, &mut written)
        };
        assert_eq!(status, WapStatus::NullArgument);
        unsafe { wap_stream_free(std::ptr::null_mut()) };
    }

    #[test]
    fn decide_matches_the_core() {
        let img0 = c("0001");
        let img1 = c("1011");
        let mut out = MaybeUninit::<WapDecision>::uninit();
        let status = unsafe { wap_decide(img0.as_ptr(), img1.as_ptr(), 0, out.as_mut_ptr()) };
        assert_eq!(status, WapStatus::Ok);
        let d = unsafe { out.assume_init() };
        assert_eq!(d.wap, 0);
        assert_eq!(d.rule, WapDecisionRule::Formula);
        assert_eq!(d.delta, -2);
        assert_eq!(d.has_formula_data, 1);
        assert_eq!((d.a_max, d.t, d.lhs), (-2, 2, -4));
        assert_eq!(d.bounded_wap, 0);

        let status = unsafe { wap_decide(img0.as_ptr(), img1.as_ptr(), 1, out.as_mut_ptr()) };
        assert_eq!(status, WapStatus::Ok);
        let d = unsafe { out.assume_init() };
        assert_eq!(d.wap, 1);
        assert_eq!(d.rule, WapDecisionRule::ZeroCrossing);

        // Non-uniform images are invalid input.
        let short = c("101");
        let status = unsafe { wap_decide(img0.as_ptr(), short.as_ptr(), 0, out.as_mut_ptr()) };
        assert_eq!(status, WapStatus::InvalidInput);
    }

    #[test]
    fn finite_file_streams_drain() {
        let dir = std::env::temp_dir().join(format!("wap-ffi-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("word.txt");
        std::fs::write(&path, "0110\n").unwrap();
        let spec = c(&format!("file:{}", path.display()));
        let mut handle: *mut WapStream = std::ptr::null_mut();
        assert_eq!(unsafe { wap_stream_new(spec.as_ptr(), &mut handle) }, WapStatus::Ok);
        let mut buf = [9u8; 16];
        let mut written = 0usize;
        let status = unsafe { wap_stream_next(handle, buf.as_mut_ptr(), buf.len(), &mut written) };
        assert_eq!(status, WapStatus::Ok);
        assert_eq!(written, 4);
        assert_eq!(&buf[..4], &[0, 1, 1, 0]);
        unsafe { wap_stream_free(handle) };
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn version_is_a_static_string() {
        let v = unsafe { CStr::from_ptr(wap_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
