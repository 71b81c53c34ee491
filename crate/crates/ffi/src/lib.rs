//! C ABI over the `ionfield` library.
//!
//! Objects are opaque heap handles created by `*_new`-style functions and
//! released with the matching `*_free`. Every fallible call returns an
//! [`IonfieldStatus`]; on failure [`ionfield_last_error`] describes the most
//! recent error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ionfield::gaussian::{fidelity, log_negativity, CovarianceMatrix};
use ionfield::ion_chain::IonChainModel;
use ionfield::scalar_field::{scalar_vacuum_cm, ScalarFieldSpec};
use ionfield::Error;
use nalgebra::DMatrix;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IonfieldStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Numerical = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

/// Equilibrium and normal modes of an ion chain.
pub struct IonfieldChain {
    model: IonChainModel,
}

/// A Gaussian-state covariance matrix.
pub struct IonfieldCovariance {
    cm: CovarianceMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> IonfieldStatus {
    if e.is_usage() {
        IonfieldStatus::InvalidArgument
    } else {
        IonfieldStatus::Numerical
    }
}

fn guard<F: FnOnce() -> Result<(), IonfieldStatus>>(f: F) -> IonfieldStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IonfieldStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside ionfield".into());
            IonfieldStatus::Panic
        }
    }
}

fn lift<T>(r: ionfield::Result<T>) -> Result<T, IonfieldStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), IonfieldStatus> {
    if p.is_null() {
        set_error(format!("{what} is null"));
        Err(IonfieldStatus::NullPointer)
    } else {
        Ok(())
    }
}

fn copy_out(values: &[f64], out: *mut f64, len: usize) -> Result<(), IonfieldStatus> {
    non_null(out, "output buffer")?;
    if len < values.len() {
        set_error(format!("buffer holds {len} values, need {}", values.len()));
        return Err(IonfieldStatus::BufferTooSmall);
    }
    // SAFETY: caller guarantees `out` points to `len` writable doubles.
    unsafe { ptr::copy_nonoverlapping(values.as_ptr(), out, values.len()) };
    Ok(())
}

unsafe fn slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], IonfieldStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(p, "array")?;
    Ok(std::slice::from_raw_parts(p, len))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ionfield_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn ionfield_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ionfield_chain_new(
    n: usize,
    out: *mut *mut IonfieldChain,
) -> IonfieldStatus {
    guard(|| {
        non_null(out, "out")?;
        let model = lift(IonChainModel::build(n))?;
        *out = Box::into_raw(Box::new(IonfieldChain { model }));
        Ok(())
    })
}

/// # Safety
/// `chain` must come from [`ionfield_chain_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ionfield_chain_free(chain: *mut IonfieldChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// Number of ions, or 0 for a null handle.
///
/// # Safety
/// `chain` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ionfield_chain_len(chain: *const IonfieldChain) -> usize {
    chain.as_ref().map_or(0, |c| c.model.len())
}

/// # Safety
/// `chain` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ionfield_chain_positions(
    chain: *const IonfieldChain,
    out: *mut f64,
    len: usize,
) -> IonfieldStatus {
    guard(|| {
        non_null(chain, "chain")?;
        copy_out(&(*chain).model.positions, out, len)
    })
}

/// # Safety
/// `chain` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ionfield_chain_frequencies(
    chain: *const IonfieldChain,
    out: *mut f64,
    len: usize,
) -> IonfieldStatus {
    guard(|| {
        non_null(chain, "chain")?;
        copy_out(&(*chain).model.frequencies, out, len)
    })
}

/// Local-mode ground-state covariance of the chain.
///
/// # Safety
/// `chain` must be a live handle and `out` valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn ionfield_chain_local_cm(
    chain: *const IonfieldChain,
    out: *mut *mut IonfieldCovariance,
) -> IonfieldStatus {
    guard(|| {
        non_null(chain, "chain")?;
        non_null(out, "out")?;
        let cm = (*chain).model.local_mode_cm();
        *out = Box::into_raw(Box::new(IonfieldCovariance { cm }));
        Ok(())
    })
}

/// Covariance of `window` consecutive sites of the lattice scalar vacuum.
///
/// # Safety
/// `out` must be valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn ionfield_scalar_window(
    mass: f64,
    window: usize,
    out: *mut *mut IonfieldCovariance,
) -> IonfieldStatus {
    guard(|| {
        non_null(out, "out")?;
        let spec = lift(ScalarFieldSpec::new(mass, window))?;
        let cm = lift(scalar_vacuum_cm(&spec))?;
        *out = Box::into_raw(Box::new(IonfieldCovariance { cm }));
        Ok(())
    })
}

/// Covariance from a row-major `dim × dim` array in interleaved
/// `(φ₁, π₁, …)` order.
///
/// # Safety
/// `data` must hold `dim·dim` doubles and `out` be valid for one handle.
#[no_mangle]
pub unsafe extern "C" fn ionfield_cm_from_array(
    data: *const f64,
    dim: usize,
    out: *mut *mut IonfieldCovariance,
) -> IonfieldStatus {
    guard(|| {
        non_null(out, "out")?;
        let values = slice(data, dim * dim)?;
        // every rejection here is a property of the caller's array
        let cm = CovarianceMatrix::new(DMatrix::from_row_slice(dim, dim, values)).map_err(|e| {
            set_error(e.to_string());
            IonfieldStatus::InvalidArgument
        })?;
        *out = Box::into_raw(Box::new(IonfieldCovariance { cm }));
        Ok(())
    })
}

/// # Safety
/// `cm` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ionfield_cm_free(cm: *mut IonfieldCovariance) {
    if !cm.is_null() {
        drop(Box::from_raw(cm));
    }
}

/// # Safety
/// `cm` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ionfield_cm_n_modes(cm: *const IonfieldCovariance) -> usize {
    cm.as_ref().map_or(0, |c| c.cm.n_modes())
}

/// Copies the matrix row-major into `out` (`(2n)²` doubles).
///
/// # Safety
/// `cm` must be a live handle and `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ionfield_cm_copy(
    cm: *const IonfieldCovariance,
    out: *mut f64,
    len: usize,
) -> IonfieldStatus {
    guard(|| {
        non_null(cm, "cm")?;
        let m = (*cm).cm.matrix();
        let row_major: Vec<f64> = m.transpose().iter().copied().collect();
        copy_out(&row_major, out, len)
    })
}

/// Logarithmic negativity between mode sets `a` and `b`; other modes are
/// traced out.
///
/// # Safety
/// `cm` must be a live handle, `a`/`b` must hold `na`/`nb` indices and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ionfield_log_negativity(
    cm: *const IonfieldCovariance,
    a: *const usize,
    na: usize,
    b: *const usize,
    nb: usize,
    out: *mut f64,
) -> IonfieldStatus {
    guard(|| {
        non_null(cm, "cm")?;
        non_null(out, "out")?;
        let v = lift(log_negativity(&(*cm).cm, slice(a, na)?, slice(b, nb)?))?;
        *out = v;
        Ok(())
    })
}

/// Uhlmann fidelity of two zero-mean Gaussian states.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ionfield_fidelity(
    a: *const IonfieldCovariance,
    b: *const IonfieldCovariance,
    out: *mut f64,
) -> IonfieldStatus {
    guard(|| {
        non_null(a, "a")?;
        non_null(b, "b")?;
        non_null(out, "out")?;
        *out = lift(fidelity(&(*a).cm, &(*b).cm))?;
        Ok(())
    })
}

/// Probability outside the lowest `dim` Fock levels of a two-mode state.
///
/// # Safety
/// `cm` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ionfield_qudit_deficit(
    cm: *const IonfieldCovariance,
    dim: usize,
    out: *mut f64,
) -> IonfieldStatus {
    guard(|| {
        non_null(cm, "cm")?;
        non_null(out, "out")?;
        *out = lift(ionfield::fock::qudit_subspace_deficit(&(*cm).cm, dim))?;
        Ok(())
    })
}
