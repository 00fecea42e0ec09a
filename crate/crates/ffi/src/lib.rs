// SPDX-License-Identifier: Apache-2.0

//! C interface to `k3_rdp`.
//!
//! Objects cross the boundary as opaque handles released by their `*_free`
//! function. Every call returns a [`K3Status`]; on failure a message is
//! available from [`k3_last_error`] on the same thread until the next call.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use k3_rdp::fqf::FiniteQuadraticForm;
use k3_rdp::k3::{self, K3Error, SupersingularTarget};
use k3_rdp::lattice::GramLattice;
use k3_rdp::roots::{sigma_fqf, DynkinType, EnumBudget};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum K3Status {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfScope = 3,
    BudgetExceeded = 4,
    Internal = 5,
}

/// A parsed Dynkin type.
pub struct K3DynkinType(DynkinType);

/// A finite quadratic form.
pub struct K3Form(FiniteQuadraticForm);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl ToString) {
    let c = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &K3Error) -> K3Status {
    match e {
        K3Error::BudgetExceeded(_) => K3Status::BudgetExceeded,
        K3Error::PNotCoprime(_)
        | K3Error::PDividesD(_)
        | K3Error::RankTooLarge(..)
        | K3Error::SignatureOutOfRange(..)
        | K3Error::EvenP(_) => K3Status::OutOfScope,
        K3Error::PathDisagreement { .. } => K3Status::Internal,
        _ => K3Status::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (K3Status, String)>) -> K3Status {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => K3Status::Ok,
        Ok(Err((s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic");
            K3Status::Internal
        }
    }
}

fn k3err(e: K3Error) -> (K3Status, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (K3Status, String) {
    (K3Status::NullPointer, "null pointer argument".into())
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, (K3Status, String)> {
    p.as_ref().ok_or_else(null)
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), (K3Status, String)> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

fn budget(seconds: u64) -> EnumBudget {
    EnumBudget { time_limit: (seconds > 0).then(|| Duration::from_secs(seconds)), ..EnumBudget::default() }
}

/// Message describing the last failure on this thread; empty after success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn k3_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a Dynkin type such as `"E8+D4+5A1"`.
#[no_mangle]
pub unsafe extern "C" fn k3_dynkin_parse(s: *const c_char, out: *mut *mut K3DynkinType) -> K3Status {
    guard(|| {
        if s.is_null() {
            return Err(null());
        }
        let text = CStr::from_ptr(s).to_str().map_err(|e| (K3Status::InvalidArgument, e.to_string()))?;
        let t: DynkinType =
            text.parse().map_err(|e: k3_rdp::roots::DynkinError| (K3Status::InvalidArgument, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(K3DynkinType(t))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn k3_dynkin_free(t: *mut K3DynkinType) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

#[no_mangle]
pub unsafe extern "C" fn k3_dynkin_rank(t: *const K3DynkinType, out: *mut u32) -> K3Status {
    guard(|| write_out(out, deref(t)?.0.rank()))
}

/// Canonical string of a type; release with [`k3_string_free`].
#[no_mangle]
pub unsafe extern "C" fn k3_dynkin_to_string(t: *const K3DynkinType, out: *mut *mut c_char) -> K3Status {
    guard(|| {
        let s = CString::new(deref(t)?.0.to_string()).map_err(|e| (K3Status::Internal, e.to_string()))?;
        write_out(out, s.into_raw())
    })
}

#[no_mangle]
pub unsafe extern "C" fn k3_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Discriminant form of the negative-definite root lattice of `t`.
#[no_mangle]
pub unsafe extern "C" fn k3_root_form(t: *const K3DynkinType, out: *mut *mut K3Form) -> K3Status {
    guard(|| write_out(out, Box::into_raw(Box::new(K3Form(sigma_fqf(&deref(t)?.0))))))
}

/// Discriminant form of the lattice with the given row-major `n × n` Gram matrix.
#[no_mangle]
pub unsafe extern "C" fn k3_gram_form(gram: *const i64, n: usize, out: *mut *mut K3Form) -> K3Status {
    guard(|| {
        if gram.is_null() && n > 0 {
            return Err(null());
        }
        let flat = if n == 0 { &[][..] } else { std::slice::from_raw_parts(gram, n * n) };
        let rows: Vec<Vec<i64>> = flat.chunks(n.max(1)).map(|r| r.to_vec()).collect();
        let lat = GramLattice::new(rows).map_err(|e| (K3Status::InvalidArgument, e.to_string()))?;
        let f = lat.discriminant_form().map_err(|e| (K3Status::InvalidArgument, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(K3Form(f))))
    })
}

#[no_mangle]
pub unsafe extern "C" fn k3_form_free(f: *mut K3Form) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Order of the underlying finite group.
#[no_mangle]
pub unsafe extern "C" fn k3_form_order(f: *const K3Form, out: *mut u64) -> K3Status {
    guard(|| write_out(out, deref(f)?.0.order()))
}

/// Minimal number of generators of the underlying group.
#[no_mangle]
pub unsafe extern "C" fn k3_form_length(f: *const K3Form, out: *mut usize) -> K3Status {
    guard(|| write_out(out, deref(f)?.0.leng()))
}

/// Whether an even lattice of signature `(s_plus, s_minus)` with this discriminant form exists.
#[no_mangle]
pub unsafe extern "C" fn k3_exists_even_lattice(
    s_plus: usize,
    s_minus: usize,
    f: *const K3Form,
    out: *mut bool,
) -> K3Status {
    guard(|| {
        let v = k3_rdp::local::exists_even_lattice(s_plus, s_minus, &deref(f)?.0)
            .map_err(|e| (K3Status::InvalidArgument, e.to_string()))?;
        write_out(out, v)
    })
}

/// Primitive embedding into the complex K3 lattice.
#[no_mangle]
pub unsafe extern "C" fn k3_emb_complex(f: *const K3Form, t_plus: usize, t_minus: usize, out: *mut bool) -> K3Status {
    guard(|| write_out(out, k3::emb_complex(&deref(f)?.0, t_plus, t_minus).map_err(k3err)?))
}

/// Primitive embedding into the supersingular K3 lattice with parameters `(p, sigma)`.
#[no_mangle]
pub unsafe extern "C" fn k3_emb_supersingular(
    f: *const K3Form,
    t_plus: usize,
    t_minus: usize,
    p: u64,
    sigma: u32,
    out: *mut bool,
) -> K3Status {
    guard(|| {
        let target = SupersingularTarget::new(p, sigma).map_err(k3err)?;
        write_out(out, k3::emb_supersingular(&deref(f)?.0, t_plus, t_minus, target).map_err(k3err)?)
    })
}

#[no_mangle]
pub unsafe extern "C" fn k3_arth(p: u64, sigma: u32, d: i64, out: *mut bool) -> K3Status {
    guard(|| write_out(out, k3::arth(p, sigma, d).map_err(k3err)?))
}

/// `NK(0, R)`; `budget_seconds = 0` means unlimited.
#[no_mangle]
pub unsafe extern "C" fn k3_nk0(t: *const K3DynkinType, budget_seconds: u64, out: *mut bool) -> K3Status {
    guard(|| write_out(out, k3::nk0(&deref(t)?.0, budget(budget_seconds)).map_err(k3err)?.verdict))
}

/// `NK(p, σ, R)`; `budget_seconds = 0` means unlimited.
#[no_mangle]
pub unsafe extern "C" fn k3_nk(
    p: u64,
    sigma: u32,
    t: *const K3DynkinType,
    budget_seconds: u64,
    out: *mut bool,
) -> K3Status {
    guard(|| write_out(out, k3::nk(p, sigma, &deref(t)?.0, budget(budget_seconds)).map_err(k3err)?.verdict))
}

/// Residues of `p` modulo `*modulus` for which `NK(p, σ, R)` can hold at the boundary
/// rank. The array is released with [`k3_u64_array_free`].
#[no_mangle]
pub unsafe extern "C" fn k3_residue_set(
    t: *const K3DynkinType,
    sigma: u32,
    modulus: *mut u64,
    residues: *mut *mut u64,
    len: *mut usize,
) -> K3Status {
    guard(|| {
        let set = k3::residue_set(&deref(t)?.0, sigma).map_err(k3err)?;
        if modulus.is_null() || residues.is_null() || len.is_null() {
            return Err(null());
        }
        let boxed = set.residues.into_boxed_slice();
        modulus.write(set.modulus);
        len.write(boxed.len());
        residues.write(Box::into_raw(boxed) as *mut u64);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn k3_u64_array_free(a: *mut u64, len: usize) {
    if !a.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(a, len)));
    }
}

#[no_mangle]
pub unsafe extern "C" fn k3_ss_reduction_possible(disc_t: u64, p: u64, out: *mut bool) -> K3Status {
    guard(|| write_out(out, k3::ss_reduction_possible(disc_t, p).map_err(k3err)?))
}
