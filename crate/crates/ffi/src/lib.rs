//! C ABI over `riccati_catalan`.
//!
//! Every function returns an [`RccStatus`]; on failure a message is available
//! through [`rcc_last_error`] on the calling thread. Solutions are opaque
//! handles released with their matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use riccati_catalan::catalan::{catalan_sequence, stationary_solution};
use riccati_catalan::finite::{self, FiniteSolution, Method};
use riccati_catalan::infinite::{solve_triangular, InfiniteSolution};
use riccati_catalan::scalar::{f_closed, m_eigenvalues};
use riccati_catalan::{Error, RiccatiParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RccStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Overflow = 3,
    Domain = 4,
    Singularity = 5,
    SingularMatrix = 6,
    Residue = 7,
    BufferTooSmall = 8,
    OutOfRange = 9,
    Internal = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RccMethod {
    Direct = 0,
    Spectral = 1,
    Matrix = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RccParams {
    pub eps: f64,
    pub c: f64,
    pub t_final: f64,
}

/// Opaque finite-system solution.
pub struct RccFiniteSolution(FiniteSolution);

/// Opaque truncated infinite-system solution.
pub struct RccInfiniteSolution(InfiniteSolution);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(e: &Error) -> RccStatus {
    match e {
        Error::InvalidParameter { .. } | Error::DimensionMismatch(_) | Error::Table(_) => RccStatus::InvalidParameter,
        Error::Overflow { .. } => RccStatus::Overflow,
        Error::Domain { .. } => RccStatus::Domain,
        Error::Singularity { .. } => RccStatus::Singularity,
        Error::SingularMatrix { .. } => RccStatus::SingularMatrix,
        Error::ResidueExceeded { .. } => RccStatus::Residue,
        _ => RccStatus::Internal,
    }
}

fn fail(status: RccStatus, msg: impl Into<String>) -> RccStatus {
    set_error(msg);
    status
}

/// Runs `body`, converting errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), RccStatus>) -> RccStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            RccStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => fail(RccStatus::Panic, "internal panic"),
    }
}

trait IntoStatus<T> {
    fn status(self) -> Result<T, RccStatus>;
}

impl<T> IntoStatus<T> for riccati_catalan::Result<T> {
    fn status(self) -> Result<T, RccStatus> {
        self.map_err(|e| fail(status_of(&e), e.to_string()))
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, RccStatus> {
    p.as_ref().ok_or_else(|| fail(RccStatus::NullPointer, format!("{name} is null")))
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, RccStatus> {
    p.as_mut().ok_or_else(|| fail(RccStatus::NullPointer, format!("{name} is null")))
}

unsafe fn buffer<'a, T>(p: *mut T, len: usize, needed: usize, name: &str) -> Result<&'a mut [T], RccStatus> {
    if p.is_null() {
        return Err(fail(RccStatus::NullPointer, format!("{name} is null")));
    }
    if len < needed {
        return Err(fail(
            RccStatus::BufferTooSmall,
            format!("{name} holds {len} elements, {needed} required"),
        ));
    }
    Ok(std::slice::from_raw_parts_mut(p, needed))
}

fn params(p: &RccParams) -> Result<RiccatiParams, RccStatus> {
    RiccatiParams::new(p.eps, p.c, p.t_final).status()
}

/// Message for the most recent failure on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn rcc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Writes C_0..=C_n_max into `out` (length `len` ≥ n_max + 1).
///
/// # Safety
/// `out` must point to `len` writable elements.
#[no_mangle]
pub unsafe extern "C" fn rcc_catalan(n_max: usize, out: *mut u64, len: usize) -> RccStatus {
    guard(|| {
        let seq = catalan_sequence(n_max).status()?;
        buffer(out, len, seq.values.len(), "out")?.copy_from_slice(&seq.values);
        Ok(())
    })
}

/// Writes the stationary solution φ^0..=φ^i_max into `out`.
///
/// # Safety
/// `out` must point to `len` writable elements.
#[no_mangle]
pub unsafe extern "C" fn rcc_stationary(i_max: usize, out: *mut f64, len: usize) -> RccStatus {
    guard(|| {
        let s = stationary_solution(i_max);
        buffer(out, len, s.values.len(), "out")?.copy_from_slice(&s.values);
        Ok(())
    })
}

/// Evaluates the closed-form symbol f_t(x).
///
/// # Safety
/// Pointers must be valid; `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn rcc_f_closed(p: *const RccParams, t: f64, x: f64, re: *mut f64, im: *mut f64) -> RccStatus {
    guard(|| {
        let params = params(deref(p, "params")?)?;
        let (re, im) = (out(re, "re")?, out(im, "im")?);
        let v = f_closed(&params, t, x).status()?;
        *re = v.re;
        *im = v.im;
        Ok(())
    })
}

/// Writes the 2n eigenvalues of the finite system's Hamiltonian matrix.
///
/// # Safety
/// `re` and `im` must each point to `len` writable elements.
#[no_mangle]
pub unsafe extern "C" fn rcc_eigenvalues(
    p: *const RccParams,
    n: usize,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> RccStatus {
    guard(|| {
        let params = params(deref(p, "params")?)?;
        let ev = m_eigenvalues(&params, n).status()?;
        let re = buffer(re, len, ev.len(), "re")?;
        let im = buffer(im, len, ev.len(), "im")?;
        for (k, v) in ev.iter().enumerate() {
            re[k] = v.re;
            im[k] = v.im;
        }
        Ok(())
    })
}

/// Solves the N-player periodic system. On success `*handle` owns the result.
///
/// # Safety
/// `p` must be valid and `handle` writable.
#[no_mangle]
pub unsafe extern "C" fn rcc_finite_solve(
    p: *const RccParams,
    method: RccMethod,
    n_players: usize,
    n_steps: usize,
    handle: *mut *mut RccFiniteSolution,
) -> RccStatus {
    guard(|| {
        let params = params(deref(p, "params")?)?;
        let handle = out(handle, "handle")?;
        *handle = ptr::null_mut();
        let method = match method {
            RccMethod::Direct => Method::Direct,
            RccMethod::Spectral => Method::Spectral,
            RccMethod::Matrix => Method::Matrix,
        };
        let sol = finite::solve(method, &params, n_players, n_steps).status()?;
        *handle = Box::into_raw(Box::new(RccFiniteSolution(sol)));
        Ok(())
    })
}

/// Number of time rows and of indices per row.
///
/// # Safety
/// `h` must be a live handle; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn rcc_finite_shape(h: *const RccFiniteSolution, rows: *mut usize, cols: *mut usize) -> RccStatus {
    guard(|| {
        let s = &deref(h, "handle")?.0;
        *out(rows, "rows")? = s.values.len();
        *out(cols, "cols")? = s.n;
        Ok(())
    })
}

/// Time t_m and value φ^i at row `m`.
///
/// # Safety
/// `h` must be a live handle; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn rcc_finite_value(
    h: *const RccFiniteSolution,
    m: usize,
    i: usize,
    t: *mut f64,
    value: *mut f64,
) -> RccStatus {
    guard(|| {
        let s = &deref(h, "handle")?.0;
        let (t, value) = (out(t, "t")?, out(value, "value")?);
        if m >= s.values.len() || i >= s.n {
            return Err(fail(RccStatus::OutOfRange, format!("({m}, {i}) outside solution")));
        }
        *t = s.grid.time(m);
        *value = s.value(m, i);
        Ok(())
    })
}

/// Releases a finite solution. Null is ignored.
///
/// # Safety
/// `h` must come from [`rcc_finite_solve`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rcc_finite_free(h: *mut RccFiniteSolution) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Solves the infinite system truncated to indices 0..=k_max.
///
/// # Safety
/// `p` must be valid and `handle` writable.
#[no_mangle]
pub unsafe extern "C" fn rcc_infinite_solve(
    p: *const RccParams,
    k_max: usize,
    n_steps: usize,
    handle: *mut *mut RccInfiniteSolution,
) -> RccStatus {
    guard(|| {
        let params = params(deref(p, "params")?)?;
        let handle = out(handle, "handle")?;
        *handle = ptr::null_mut();
        let sol = solve_triangular(&params, k_max, n_steps).status()?;
        *handle = Box::into_raw(Box::new(RccInfiniteSolution(sol)));
        Ok(())
    })
}

/// # Safety
/// `h` must be a live handle; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn rcc_infinite_shape(
    h: *const RccInfiniteSolution,
    rows: *mut usize,
    cols: *mut usize,
) -> RccStatus {
    guard(|| {
        let s = &deref(h, "handle")?.0;
        *out(rows, "rows")? = s.values.len();
        *out(cols, "cols")? = s.k_max + 1;
        Ok(())
    })
}

/// # Safety
/// `h` must be a live handle; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn rcc_infinite_value(
    h: *const RccInfiniteSolution,
    m: usize,
    j: usize,
    t: *mut f64,
    value: *mut f64,
) -> RccStatus {
    guard(|| {
        let s = &deref(h, "handle")?.0;
        let (t, value) = (out(t, "t")?, out(value, "value")?);
        if m >= s.values.len() || j > s.k_max {
            return Err(fail(RccStatus::OutOfRange, format!("({m}, {j}) outside solution")));
        }
        *t = s.grid.time(m);
        *value = s.value(m, j);
        Ok(())
    })
}

/// # Safety
/// `h` must come from [`rcc_infinite_solve`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn rcc_infinite_free(h: *mut RccInfiniteSolution) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}
