//! C ABI for the Bessel lattice-sum library.
//!
//! Conventions: opaque handles created by `bsl_*_new` and released by the
//! matching `bsl_*_free`; every fallible call returns a `BslStatus` and
//! writes results through out-pointers. Complex numbers cross the boundary
//! as `BslComplex { re, im }`. The last error message for the calling
//! thread is available via `bsl_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::ptr;
use std::slice;

use bessel_lattice::characters::{DirichletCharacter, DirichletCharacterFamily};
use bessel_lattice::exact::{rat_i64, Rat};
use bessel_lattice::heat::{heat_kernel_index, kernel_window};
use bessel_lattice::lattice::Lattice;
use bessel_lattice::lattice_sums::verify_identity;
use bessel_lattice::special::{bessel_i_int, bessel_i_scaled, BesselEvalConfig};
use bessel_lattice::theta::{dedekind_eta, jacobi_theta_identity_check, theta_lattice};
use bessel_lattice::Error;
use num_complex::Complex64;
use num_traits::Zero;

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Copy, Clone, PartialEq, Eq)]
pub enum BslStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SingularMatrix = 3,
    DivisibilityViolation = 4,
    TruncationFailure = 5,
    EnumerationTooLarge = 6,
    InternalError = 7,
}

/// Complex number in the C interface.
#[repr(C)]
#[derive(Copy, Clone)]
pub struct BslComplex {
    pub re: f64,
    pub im: f64,
}

/// Two-sided identity evaluation with its accuracy certificate.
#[repr(C)]
#[derive(Copy, Clone)]
pub struct BslIdentityReport {
    pub lhs: BslComplex,
    pub rhs: BslComplex,
    pub abs_residual: f64,
    pub truncation_radius: i64,
    pub tail_bound: f64,
    /// Nonzero when the result carries no identity guarantee.
    pub warning: u8,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> BslStatus {
    set_error(&err.to_string());
    match err {
        Error::SingularBasis => BslStatus::SingularMatrix,
        Error::DivisibilityViolation { .. } => BslStatus::DivisibilityViolation,
        Error::TruncationFailure { .. } | Error::TermBudgetExceeded { .. }
        | Error::QuadratureNotConverged { .. } => BslStatus::TruncationFailure,
        Error::EnumerationTooLarge { .. } => BslStatus::EnumerationTooLarge,
        Error::BoundaryAmbiguity { .. } => BslStatus::InternalError,
        _ => BslStatus::InvalidArgument,
    }
}

fn cplx(z: Complex64) -> BslComplex {
    BslComplex { re: z.re, im: z.im }
}

/// Message for the most recent error on this thread, or NULL. Owned by the
/// library; valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bsl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.as_ptr(),
        None => ptr::null(),
    })
}

/// Opaque lattice handle.
pub struct BslLattice(Lattice);

/// Opaque per-coordinate Dirichlet character family handle.
pub struct BslCharacterFamily(DirichletCharacterFamily);

/// Builds an n-by-n integer-basis lattice from `rows` in row-major order.
///
/// # Safety
/// `rows` must point to `n * n` readable i64 values and `out` must be a
/// valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn bsl_lattice_new(
    n: usize,
    rows: *const i64,
    out: *mut *mut BslLattice,
) -> BslStatus {
    if rows.is_null() || out.is_null() || n == 0 {
        set_error("null pointer or zero dimension");
        return BslStatus::NullPointer;
    }
    let flat = slice::from_raw_parts(rows, n * n);
    let matrix: Vec<Vec<i64>> = flat.chunks(n).map(|r| r.to_vec()).collect();
    match Lattice::from_i64(&matrix) {
        Ok(lat) => {
            *out = Box::into_raw(Box::new(BslLattice(lat)));
            BslStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `lat` must be NULL or a pointer from `bsl_lattice_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bsl_lattice_free(lat: *mut BslLattice) {
    if !lat.is_null() {
        drop(Box::from_raw(lat));
    }
}

/// Writes the covolume |det B| of the lattice to `out`.
///
/// # Safety
/// `lat` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bsl_lattice_covolume(lat: *const BslLattice, out: *mut f64) -> BslStatus {
    if lat.is_null() || out.is_null() {
        set_error("null pointer");
        return BslStatus::NullPointer;
    }
    *out = bessel_lattice::exact::rat_to_f64(&(*lat).0.covolume());
    BslStatus::Ok
}

/// Builds a family of `n` copies of one character: kind 0 is trivial,
/// kind 1 is the principal character mod `q`, kind 2 is the Kronecker
/// symbol (q/.) for a fundamental discriminant q.
///
/// # Safety
/// `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn bsl_character_family_new(
    n: usize,
    kind: u32,
    q: i64,
    out: *mut *mut BslCharacterFamily,
) -> BslStatus {
    if out.is_null() || n == 0 {
        set_error("null pointer or zero dimension");
        return BslStatus::NullPointer;
    }
    let chi = match kind {
        0 => Ok(DirichletCharacter::trivial()),
        1 if q > 0 => Ok(DirichletCharacter::principal(q as u64)),
        2 => DirichletCharacter::kronecker(q),
        _ => Err(Error::Parse(format!("bad character kind {kind} / modulus {q}"))),
    };
    match chi.and_then(|chi| DirichletCharacterFamily::new(vec![chi; n])) {
        Ok(fam) => {
            *out = Box::into_raw(Box::new(BslCharacterFamily(fam)));
            BslStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `fam` must be NULL or a pointer from `bsl_character_family_new`.
#[no_mangle]
pub unsafe extern "C" fn bsl_character_family_free(fam: *mut BslCharacterFamily) {
    if !fam.is_null() {
        drop(Box::from_raw(fam));
    }
}

/// I-Bessel function of integer order, with default evaluation settings.
///
/// # Safety
/// `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn bsl_bessel_i(
    order: i64,
    t: BslComplex,
    out: *mut BslComplex,
) -> BslStatus {
    if out.is_null() {
        set_error("null pointer");
        return BslStatus::NullPointer;
    }
    let cfg = BesselEvalConfig::default();
    match bessel_i_int(order, Complex64::new(t.re, t.im), &cfg) {
        Ok(v) => {
            *out = cplx(v);
            BslStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Exponentially scaled I-Bessel function e^{-t} I_order(t) for real t >= 0.
#[no_mangle]
pub extern "C" fn bsl_bessel_i_scaled(order: i64, t: f64) -> f64 {
    bessel_i_scaled(order, t)
}

/// Lattice theta series at real t > 0, with a certified truncation tail.
///
/// # Safety
/// `lat` must be a live handle; `out_value` and `out_tail` writable.
#[no_mangle]
pub unsafe extern "C" fn bsl_theta_lattice(
    lat: *const BslLattice,
    t: f64,
    out_value: *mut f64,
    out_tail: *mut f64,
) -> BslStatus {
    if lat.is_null() || out_value.is_null() || out_tail.is_null() {
        set_error("null pointer");
        return BslStatus::NullPointer;
    }
    if t <= 0.0 {
        set_error("theta series needs t > 0");
        return BslStatus::InvalidArgument;
    }
    let v = theta_lattice(&(*lat).0, t);
    *out_value = v.complex().re;
    *out_tail = v.tail_bound;
    BslStatus::Ok
}

/// Verifies the character-twisted Bessel lattice-sum identity.
///
/// `x` has one integer per coordinate; `y_num`/`y_den` give rational
/// offsets; `t` one complex component per coordinate with positive real
/// part. Imprimitive non-principal characters are rejected unless
/// `allow_imprimitive` is nonzero.
///
/// # Safety
/// `lat` and `fam` must be live handles; the array pointers must each hold
/// `n` elements where `n` is the lattice dimension; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bsl_verify_identity(
    lat: *const BslLattice,
    fam: *const BslCharacterFamily,
    x: *const i64,
    y_num: *const i64,
    y_den: *const i64,
    t: *const BslComplex,
    tol: f64,
    allow_imprimitive: u8,
    out: *mut BslIdentityReport,
) -> BslStatus {
    if lat.is_null() || fam.is_null() || x.is_null() || t.is_null() || out.is_null() {
        set_error("null pointer");
        return BslStatus::NullPointer;
    }
    let lat = &(*lat).0;
    let fam = &(*fam).0;
    let n = lat.dimension();
    let x = slice::from_raw_parts(x, n);
    let y: Vec<Rat> = if y_num.is_null() || y_den.is_null() {
        vec![Rat::zero(); n]
    } else {
        let num = slice::from_raw_parts(y_num, n);
        let den = slice::from_raw_parts(y_den, n);
        if den.contains(&0) {
            set_error("zero denominator in y");
            return BslStatus::InvalidArgument;
        }
        num.iter().zip(den).map(|(&p, &q)| rat_i64(p, q)).collect()
    };
    let t: Vec<Complex64> = slice::from_raw_parts(t, n)
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect();
    match verify_identity(lat, fam, x, &y, &t, tol, allow_imprimitive != 0) {
        Ok(rep) => {
            *out = BslIdentityReport {
                lhs: cplx(rep.lhs_value()),
                rhs: cplx(rep.rhs_value()),
                abs_residual: rep.abs_residual,
                truncation_radius: rep.lhs_truncation_radius,
                tail_bound: rep.lhs_tail_bound,
                warning: rep.warning.is_some() as u8,
            };
            BslStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Dedekind eta at tau (upper half-plane), via the character q-series.
///
/// # Safety
/// `out_value` and `out_tail` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bsl_dedekind_eta(
    tau: BslComplex,
    out_value: *mut BslComplex,
    out_tail: *mut f64,
) -> BslStatus {
    if out_value.is_null() || out_tail.is_null() {
        set_error("null pointer");
        return BslStatus::NullPointer;
    }
    if tau.im <= 0.0 {
        set_error("tau must have positive imaginary part");
        return BslStatus::InvalidArgument;
    }
    let (a, _) = dedekind_eta(Complex64::new(tau.re, tau.im));
    *out_value = cplx(a.complex());
    *out_tail = a.tail_bound;
    BslStatus::Ok
}

/// Jacobi theta-2 / theta-4 inversion identity at real t > 0.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bsl_jacobi_theta_check(
    t: f64,
    out: *mut BslIdentityReport,
) -> BslStatus {
    if out.is_null() {
        set_error("null pointer");
        return BslStatus::NullPointer;
    }
    if t <= 0.0 {
        set_error("jacobi identity needs t > 0");
        return BslStatus::InvalidArgument;
    }
    let rep = jacobi_theta_identity_check(t);
    *out = BslIdentityReport {
        lhs: cplx(rep.lhs_value()),
        rhs: cplx(rep.rhs_value()),
        abs_residual: rep.abs_residual,
        truncation_radius: rep.lhs_truncation_radius,
        tail_bound: rep.lhs_tail_bound,
        warning: 0,
    };
    BslStatus::Ok
}

/// Heat kernel on the standard n-dimensional index lattice at integer site
/// `k`, together with the window radius that captures all but `tol` of the
/// kernel mass.
///
/// # Safety
/// `k` must hold `n` elements; `out_value` and `out_radius` writable.
#[no_mangle]
pub unsafe extern "C" fn bsl_heat_kernel(
    n: usize,
    k: *const i64,
    t: f64,
    tol: f64,
    out_value: *mut f64,
    out_radius: *mut i64,
) -> BslStatus {
    if k.is_null() || out_value.is_null() || out_radius.is_null() || n == 0 {
        set_error("null pointer or zero dimension");
        return BslStatus::NullPointer;
    }
    if t < 0.0 || tol.is_nan() || tol <= 0.0 {
        set_error("heat kernel needs t >= 0 and tol > 0");
        return BslStatus::InvalidArgument;
    }
    let k = slice::from_raw_parts(k, n);
    *out_value = heat_kernel_index(n, k, t);
    *out_radius = kernel_window(n, t, tol).0;
    BslStatus::Ok
}

/// NUL-terminated version string for the library.
#[no_mangle]
pub extern "C" fn bsl_version() -> *const c_char {
    static VERSION: &[u8] = b"0.1.0\0";
    VERSION.as_ptr() as *const c_char
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_round_trip() {
        let rows = [2i64, 1, 0, 3];
        let mut lat: *mut BslLattice = ptr::null_mut();
        unsafe {
            assert!(bsl_lattice_new(2, rows.as_ptr(), &mut lat) == BslStatus::Ok);
            let mut vol = 0.0;
            assert!(bsl_lattice_covolume(lat, &mut vol) == BslStatus::Ok);
            assert_eq!(vol, 6.0);
            bsl_lattice_free(lat);
        }
    }

    #[test]
    fn singular_basis_is_rejected() {
        let rows = [1i64, 2, 2, 4];
        let mut lat: *mut BslLattice = ptr::null_mut();
        unsafe {
            assert!(bsl_lattice_new(2, rows.as_ptr(), &mut lat) == BslStatus::SingularMatrix);
            assert!(!bsl_last_error_message().is_null());
        }
    }

    #[test]
    fn identity_through_the_abi() {
        let rows = [12i64];
        let mut lat: *mut BslLattice = ptr::null_mut();
        let mut fam: *mut BslCharacterFamily = ptr::null_mut();
        unsafe {
            assert!(bsl_lattice_new(1, rows.as_ptr(), &mut lat) == BslStatus::Ok);
            assert!(bsl_character_family_new(1, 2, 12, &mut fam) == BslStatus::Ok);
            let x = [0i64];
            let t = [BslComplex { re: 2.0, im: 0.0 }];
            let mut rep = std::mem::zeroed::<BslIdentityReport>();
            let st = bsl_verify_identity(
                lat,
                fam,
                x.as_ptr(),
                ptr::null(),
                ptr::null(),
                t.as_ptr(),
                1e-9,
                0,
                &mut rep,
            );
            assert!(st == BslStatus::Ok);
            assert!(rep.abs_residual < 1e-9 + rep.tail_bound);
            assert_eq!(rep.warning, 0);
            bsl_character_family_free(fam);
            bsl_lattice_free(lat);
        }
    }

    #[test]
    fn imprimitive_rejected_without_flag() {
        let rows = [4i64];
        let mut lat: *mut BslLattice = ptr::null_mut();
        let mut fam: *mut BslCharacterFamily = ptr::null_mut();
        unsafe {
            assert!(bsl_lattice_new(1, rows.as_ptr(), &mut lat) == BslStatus::Ok);
            assert!(bsl_character_family_new(1, 1, 4, &mut fam) == BslStatus::Ok);
            let x = [0i64];
            let t = [BslComplex { re: 1.0, im: 0.0 }];
            let mut rep = std::mem::zeroed::<BslIdentityReport>();
            let st = bsl_verify_identity(
                lat, fam, x.as_ptr(), ptr::null(), ptr::null(), t.as_ptr(), 1e-9, 0, &mut rep,
            );
            assert!(st == BslStatus::InvalidArgument);
            let st = bsl_verify_identity(
                lat, fam, x.as_ptr(), ptr::null(), ptr::null(), t.as_ptr(), 1e-9, 1, &mut rep,
            );
            assert!(st == BslStatus::Ok);
            assert_eq!(rep.warning, 1);
            bsl_character_family_free(fam);
            bsl_lattice_free(lat);
        }
    }

    #[test]
    fn scalar_functions() {
        let mut v = BslComplex { re: 0.0, im: 0.0 };
        let st = unsafe { bsl_bessel_i(0, BslComplex { re: 1.0, im: 0.0 }, &mut v) };
        assert!(st == BslStatus::Ok);
        assert!((v.re - 1.2660658777520082).abs() < 1e-12);
        assert!((bsl_bessel_i_scaled(0, 0.0) - 1.0).abs() < 1e-15);

        let mut rep = unsafe { std::mem::zeroed::<BslIdentityReport>() };
        assert!(unsafe { bsl_jacobi_theta_check(0.25, &mut rep) } == BslStatus::Ok);
        assert!(rep.abs_residual < 1e-13);
        assert!(unsafe { bsl_jacobi_theta_check(-1.0, &mut rep) } == BslStatus::InvalidArgument);

        let mut eta = BslComplex { re: 0.0, im: 0.0 };
        let mut tail = 0.0;
        let st = unsafe { bsl_dedekind_eta(BslComplex { re: 0.0, im: 1.0 }, &mut eta, &mut tail) };
        assert!(st == BslStatus::Ok);
        // eta(i) = Gamma(1/4) / (2 pi^{3/4})
        assert!((eta.re - 0.7682254223260566).abs() < 1e-12);

        let k = [0i64];
        let mut value = 0.0;
        let mut radius = 0i64;
        let st = unsafe { bsl_heat_kernel(1, k.as_ptr(), 2.0, 1e-12, &mut value, &mut radius) };
        assert!(st == BslStatus::Ok);
        assert!((value - bsl_bessel_i_scaled(0, 2.0)).abs() < 1e-15);
        assert!(radius > 0);
    }
}
