//! C ABI over the core crate. Objects cross the boundary as opaque handles
//! owned by the caller and released with the matching `_free`. Every fallible
//! call returns an [`ArbStatus`]; on failure the message is kept per thread
//! and read back with [`arb_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use arboreal::numpoly::arith::is_prime_u64;
use arboreal::arithgeo::{self, RationalPoint, WeierstrassCurve};
use arboreal::treegrp::{self, TreeAut};
use arboreal::zdyn::{self, MaximalityStatus, QuadraticMap, Witness};
use arboreal::{towerff, Error, ErrorKind};
use num_traits::ToPrimitive;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Precondition = 3,
    Budget = 4,
    Integrity = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// x ↦ ax² + bx + c over ℤ.
pub struct ArbQuadMap(QuadraticMap);

/// Automorphism of the binary rooted tree, truncated at a finite depth.
pub struct ArbTreeAut(TreeAut);

/// Weierstrass curve over ℚ with integer coefficients.
pub struct ArbCurve(WeierstrassCurve);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(e: Error) -> ArbStatus {
    let status = match e.kind() {
        ErrorKind::Precondition => ArbStatus::Precondition,
        ErrorKind::Budget => ArbStatus::Budget,
        ErrorKind::Integrity => ArbStatus::Integrity,
    };
    set_error(e.to_string());
    status
}

fn guard(body: impl FnOnce() -> ArbStatus) -> ArbStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            ArbStatus::Panic
        }
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $( if $p.is_null() {
            set_error(concat!(stringify!($p), " is null"));
            return ArbStatus::NullPointer;
        } )+
    };
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return fail(e),
        }
    };
}

unsafe fn boxed_out<T>(out: *mut *mut T, value: T) -> ArbStatus {
    *out = Box::into_raw(Box::new(value));
    ArbStatus::Ok
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, ArbStatus> {
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        ArbStatus::InvalidArgument
    })
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn arb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Crate version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn arb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn arb_quadmap_new(a: i64, b: i64, c: i64, out: *mut *mut ArbQuadMap) -> ArbStatus {
    guard(|| {
        non_null!(out);
        boxed_out(out, ArbQuadMap(tri!(QuadraticMap::from_i64(a, b, c))))
    })
}

/// Parses "a,b,c" with arbitrary-size integers.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn arb_quadmap_parse(spec: *const c_char, out: *mut *mut ArbQuadMap) -> ArbStatus {
    guard(|| {
        non_null!(spec, out);
        let s = match read_str(spec) {
            Ok(s) => s,
            Err(st) => return st,
        };
        boxed_out(out, ArbQuadMap(tri!(s.parse())))
    })
}

/// # Safety
/// `map` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn arb_quadmap_free(map: *mut ArbQuadMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Maximality of levels 2..=depth. Writes 1 (certified) or 0 (no
/// certificate) to `status[n - 2]` and the witness prime, or 0 when there is
/// none, to `witness[n - 2]`. Both buffers hold `len ≥ depth − 1` entries;
/// `witness` may be null.
///
/// # Safety
/// `map` must be a live handle; the buffers must hold `len` elements.
#[no_mangle]
pub unsafe extern "C" fn arb_quadmap_maximality(
    map: *const ArbQuadMap,
    depth: usize,
    status: *mut u8,
    witness: *mut u64,
    len: usize,
) -> ArbStatus {
    guard(|| {
        non_null!(map, status);
        if depth < 2 || len < depth - 1 {
            set_error("buffer must hold depth - 1 entries and depth must be at least 2");
            return ArbStatus::BufferTooSmall;
        }
        let reports = tri!(zdyn::maximality_profile(&(*map).0, depth));
        for (i, r) in reports.iter().enumerate() {
            *status.add(i) = u8::from(r.status == MaximalityStatus::CertifiedMaximal);
            if !witness.is_null() {
                *witness.add(i) = match r.witness {
                    Witness::Prime(p) => p,
                    _ => 0,
                };
            }
        }
        ArbStatus::Ok
    })
}

/// Exact ℓ-adic density as a reduced fraction.
///
/// # Safety
/// `num` and `den` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn arb_closed_form_density(ell: u64, num: *mut u64, den: *mut u64) -> ArbStatus {
    guard(|| {
        non_null!(num, den);
        if !is_prime_u64(ell) {
            return fail(Error::precondition(format!("{ell} is not prime")));
        }
        let v = arithgeo::closed_form_density(ell);
        match (v.numer().to_u64(), v.denom().to_u64()) {
            (Some(n), Some(d)) => {
                *num = n;
                *den = d;
                ArbStatus::Ok
            }
            _ => fail(Error::budget("density does not fit in 64 bits")),
        }
    })
}

/// Monte Carlo estimate of the ℓ-adic integral with its standard error.
///
/// # Safety
/// `estimate` must be valid for a write; `stderr` may be null.
#[no_mangle]
pub unsafe extern "C" fn arb_kummer_integral_mc(
    ell: u64,
    depth: u32,
    samples: u64,
    seed: u64,
    estimate: *mut f64,
    stderr: *mut f64,
) -> ArbStatus {
    guard(|| {
        non_null!(estimate);
        let est = tri!(arithgeo::kummer_integral_mc(ell, depth, samples, seed));
        *estimate = est.estimate;
        if !stderr.is_null() {
            *stderr = est.stderr;
        }
        ArbStatus::Ok
    })
}

/// # Safety
/// `coeffs` must point to five integers a1, a2, a3, a4, a6 and `out` be
/// valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn arb_curve_new(coeffs: *const i64, out: *mut *mut ArbCurve) -> ArbStatus {
    guard(|| {
        non_null!(coeffs, out);
        let a: [i64; 5] = std::slice::from_raw_parts(coeffs, 5).try_into().unwrap();
        boxed_out(out, ArbCurve(tri!(WeierstrassCurve::new(a))))
    })
}

/// # Safety
/// `curve` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn arb_curve_free(curve: *mut ArbCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Counts primes p ≤ bound at which the point "x,y" has odd order mod p,
/// over the primes where the question is defined.
///
/// # Safety
/// `curve` must be a live handle, `point` a NUL-terminated string, and
/// `hits`, `total` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn arb_curve_odd_order_density(
    curve: *const ArbCurve,
    point: *const c_char,
    bound: u64,
    hits: *mut u64,
    total: *mut u64,
) -> ArbStatus {
    guard(|| {
        non_null!(curve, point, hits, total);
        let s = match read_str(point) {
            Ok(s) => s,
            Err(st) => return st,
        };
        let alpha = tri!(RationalPoint::parse(s));
        let est = tri!(arithgeo::odd_order_density(&(*curve).0, &alpha, bound));
        *hits = est.hits;
        *total = est.total;
        ArbStatus::Ok
    })
}

/// Haar-random automorphism of depth ≤ 32.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn arb_treeaut_haar(depth: usize, seed: u64, out: *mut *mut ArbTreeAut) -> ArbStatus {
    guard(|| {
        non_null!(out);
        if depth > 32 {
            return fail(Error::budget("tree depth above 32"));
        }
        boxed_out(out, ArbTreeAut(treegrp::haar_sample(depth, seed)))
    })
}

/// The adding machine truncated at `depth ≤ 32`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn arb_treeaut_adding_machine(depth: usize, out: *mut *mut ArbTreeAut) -> ArbStatus {
    guard(|| {
        non_null!(out);
        if depth > 32 {
            return fail(Error::budget("tree depth above 32"));
        }
        boxed_out(out, ArbTreeAut(treegrp::adding_machine(depth)))
    })
}

/// σ∘τ as a new handle.
///
/// # Safety
/// `sigma`, `tau` must be live handles and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn arb_treeaut_compose(
    sigma: *const ArbTreeAut,
    tau: *const ArbTreeAut,
    out: *mut *mut ArbTreeAut,
) -> ArbStatus {
    guard(|| {
        non_null!(sigma, tau, out);
        boxed_out(out, ArbTreeAut(tri!((*sigma).0.compose(&(*tau).0))))
    })
}

/// Number of fixed leaves at the bottom level.
///
/// # Safety
/// `aut` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn arb_treeaut_fixed_leaves(aut: *const ArbTreeAut, out: *mut usize) -> ArbStatus {
    guard(|| {
        non_null!(aut, out);
        *out = (*aut).0.fixed_leaves();
        ArbStatus::Ok
    })
}

/// # Safety
/// `aut` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn arb_treeaut_free(aut: *mut ArbTreeAut) {
    if !aut.is_null() {
        drop(Box::from_raw(aut));
    }
}

/// deg Φₙ for the tower of x² + t.
#[no_mangle]
pub extern "C" fn arb_tower_phi_degree(n: usize) -> i64 {
    if n == 0 || n > 62 {
        return -1;
    }
    towerff::phi_degree(n)
}

/// Coefficients of Φₙ over F_p, constant term first. On entry `*len` is the
/// capacity of `coeffs`; on return it is deg Φₙ + 1, also when the buffer is
/// too small.
///
/// # Safety
/// `coeffs` must hold `*len` elements and `len` be valid for reads and writes.
#[no_mangle]
pub unsafe extern "C" fn arb_tower_phi(p: u64, n: usize, coeffs: *mut u64, len: *mut usize) -> ArbStatus {
    guard(|| {
        non_null!(len);
        let phi = tri!(towerff::phi_n(p, n));
        let c = phi.coeffs();
        let cap = *len;
        *len = c.len();
        if cap < c.len() || coeffs.is_null() {
            set_error(format!("need room for {} coefficients", c.len()));
            return ArbStatus::BufferTooSmall;
        }
        ptr::copy_nonoverlapping(c.as_ptr(), coeffs, c.len());
        ArbStatus::Ok
    })
}
