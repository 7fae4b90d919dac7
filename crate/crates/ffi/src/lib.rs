//! C ABI over `simplex-cover`.
//!
//! Lattices and tiles are opaque heap handles created by `sc_*_build` /
//! `sc_lattice_from_rows` and released with the matching `*_free`. Every
//! fallible call returns an [`ScStatus`]; on failure a description is kept
//! per thread and can be read with [`sc_last_error_message`]. Panics never
//! cross the boundary: they are caught and reported as `SC_STATUS_PANIC`.
//!
//! Output arrays are caller-allocated. When a buffer is too short the call
//! returns `SC_STATUS_BUFFER_TOO_SMALL` and writes nothing.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use simplex_cover::covering::covers_discrete;
use simplex_cover::search::{self, SearchOptions};
use simplex_cover::tile::build_tile;
use simplex_cover::{CayleyTile, Error, IntegerLattice, Rational};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SingularBasis = 3,
    DimensionMismatch = 4,
    NotACovering = 5,
    CapTooSmall = 6,
    MultipleMinimalNotches = 7,
    TooLarge = 8,
    BufferTooSmall = 9,
    Panic = 10,
    Internal = 11,
}

/// Opaque lattice handle.
pub struct ScLattice(IntegerLattice);

/// Opaque Cayley tile handle.
pub struct ScTile(CayleyTile);

/// Outcome of [`sc_covers`]. The density fields are zero when not covered.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScCoverResult {
    pub covered: bool,
    pub tile_diameter: u64,
    pub density_num: u64,
    pub density_den: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(ScStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::SingularBasis | Error::SingularAfterRounding => ScStatus::SingularBasis,
            Error::DimensionMismatch { .. } => ScStatus::DimensionMismatch,
            Error::NotACovering { .. } => ScStatus::NotACovering,
            Error::CapTooSmall { .. } => ScStatus::CapTooSmall,
            Error::MultipleMinimalNotches { .. } => ScStatus::MultipleMinimalNotches,
            Error::TooLarge(_) => ScStatus::TooLarge,
            Error::InvalidArgument(_) | Error::Parse(_) | Error::BadSampleCount | Error::DivisionByZero => {
                ScStatus::InvalidArgument
            }
            _ => ScStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn fail<T>(status: ScStatus, msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure(status, msg.into()))
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, records any failure message and converts panics to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ScStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ScStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            ScStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: caller guarantees `p` is null or a live handle from this library.
    unsafe { p.as_ref() }.ok_or_else(|| Failure(ScStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_slice<'a, T>(p: *mut T, len: usize, need: usize) -> Result<&'a mut [T], Failure> {
    if need > len {
        return fail(ScStatus::BufferTooSmall, format!("buffer holds {len}, need {need}"));
    }
    if p.is_null() {
        return fail(ScStatus::NullPointer, "output buffer is null");
    }
    // SAFETY: caller guarantees `p` points to at least `len` writable elements.
    Ok(unsafe { std::slice::from_raw_parts_mut(p, need) })
}

unsafe fn write_out<T>(p: *mut T, value: T) -> Result<(), Failure> {
    if p.is_null() {
        return fail(ScStatus::NullPointer, "output pointer is null");
    }
    // SAFETY: non-null and caller-owned.
    unsafe { p.write(value) };
    Ok(())
}

fn to_u64<T: ToPrimitive + std::fmt::Display>(x: &T, what: &str) -> Result<u64, Failure> {
    x.to_u64()
        .ok_or_else(|| Failure(ScStatus::TooLarge, format!("{what} = {x} does not fit in 64 bits")))
}

fn rational_parts(q: &Rational, what: &str) -> Result<(u64, u64), Failure> {
    Ok((to_u64(q.numer(), what)?, to_u64(q.denom(), what)?))
}

/// Message for the most recent failure on this thread, or null after a
/// success. Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn sc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a lattice from `rows` generators of dimension `n`, stored
/// row-major in `data` (`rows * n` entries). The basis is normalised.
///
/// # Safety
/// `data` must point to `rows * n` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_lattice_from_rows(
    data: *const i64,
    rows: usize,
    n: usize,
    out: *mut *mut ScLattice,
) -> ScStatus {
    guard(|| {
        if data.is_null() || out.is_null() {
            return fail(ScStatus::NullPointer, "null argument");
        }
        if n == 0 {
            return fail(ScStatus::InvalidArgument, "dimension must be positive");
        }
        let len = rows
            .checked_mul(n)
            .ok_or_else(|| Failure(ScStatus::InvalidArgument, "size overflow".into()))?;
        // SAFETY: caller guarantees `len` readable values.
        let flat = unsafe { std::slice::from_raw_parts(data, len) };
        let rows: Vec<Vec<i64>> = flat.chunks(n).map(<[i64]>::to_vec).collect();
        let lattice = IntegerLattice::from_i64_rows(&rows)?;
        // SAFETY: checked non-null above.
        unsafe { out.write(Box::into_raw(Box::new(ScLattice(lattice)))) };
        Ok(())
    })
}

/// Releases a lattice handle. Null is ignored.
///
/// # Safety
/// `lattice` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sc_lattice_free(lattice: *mut ScLattice) {
    if !lattice.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(lattice) });
    }
}

/// Dimension of the lattice, or 0 for a null handle.
///
/// # Safety
/// `lattice` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_lattice_dim(lattice: *const ScLattice) -> usize {
    // SAFETY: forwarded caller guarantee.
    unsafe { lattice.as_ref() }.map_or(0, |l| l.0.dim())
}

/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_lattice_det(lattice: *const ScLattice, out: *mut u64) -> ScStatus {
    guard(|| {
        let l = unsafe { deref(lattice, "lattice") }?;
        let det = to_u64(l.0.det(), "determinant")?;
        unsafe { write_out(out, det) }
    })
}

/// Writes the normalised basis row-major into `out` (`n * n` entries).
///
/// # Safety
/// `lattice` must be a live handle; `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn sc_lattice_basis(lattice: *const ScLattice, out: *mut i64, len: usize) -> ScStatus {
    guard(|| {
        let l = unsafe { deref(lattice, "lattice") }?;
        let rows = l
            .0
            .basis_i64()
            .ok_or_else(|| Failure(ScStatus::TooLarge, "basis entries exceed 64 bits".into()))?;
        let n = l.0.dim();
        let buf = unsafe { out_slice(out, len, n * n) }?;
        for (dst, src) in buf.iter_mut().zip(rows.iter().flatten()) {
            *dst = *src;
        }
        Ok(())
    })
}

/// Canonical residue of `x` (length `len` = dimension) in the fundamental box.
///
/// # Safety
/// `lattice` must be a live handle; `x` and `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn sc_lattice_reduce(
    lattice: *const ScLattice,
    x: *const i64,
    len: usize,
    out: *mut i64,
) -> ScStatus {
    guard(|| {
        let l = unsafe { deref(lattice, "lattice") }?;
        if x.is_null() {
            return fail(ScStatus::NullPointer, "input vector is null");
        }
        // SAFETY: caller guarantees `len` readable values.
        let x = unsafe { std::slice::from_raw_parts(x, len) };
        let r = l.0.reduce_mod_i64(x)?;
        let buf = unsafe { out_slice(out, len, r.len()) }?;
        for (dst, src) in buf.iter_mut().zip(&r) {
            *dst = src.to_i64().expect("residue is below a 64-bit diagonal entry");
        }
        Ok(())
    })
}

/// Builds the Cayley tile of a lattice.
///
/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_tile_build(lattice: *const ScLattice, out: *mut *mut ScTile) -> ScStatus {
    guard(|| {
        let l = unsafe { deref(lattice, "lattice") }?;
        let tile = build_tile(&l.0)?;
        unsafe { write_out(out, Box::into_raw(Box::new(ScTile(tile)))) }
    })
}

/// Releases a tile handle. Null is ignored.
///
/// # Safety
/// `tile` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sc_tile_free(tile: *mut ScTile) {
    if !tile.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(tile) });
    }
}

/// Number of tile points (the lattice index), or 0 for a null handle.
///
/// # Safety
/// `tile` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_tile_len(tile: *const ScTile) -> usize {
    unsafe { tile.as_ref() }.map_or(0, |t| t.0.len())
}

/// Dimension of the tile, or 0 for a null handle.
///
/// # Safety
/// `tile` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_tile_dim(tile: *const ScTile) -> usize {
    unsafe { tile.as_ref() }.map_or(0, |t| t.0.dim())
}

/// Largest coordinate sum over the tile, or 0 for a null handle.
///
/// # Safety
/// `tile` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_tile_diameter(tile: *const ScTile) -> u64 {
    unsafe { tile.as_ref() }.map_or(0, |t| t.0.m_diameter())
}

/// Writes the tile points in graded order, row-major (`len * dim` entries).
///
/// # Safety
/// `tile` must be a live handle; `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn sc_tile_points(tile: *const ScTile, out: *mut u32, len: usize) -> ScStatus {
    guard(|| {
        let t = unsafe { deref(tile, "tile") }?;
        let buf = unsafe { out_slice(out, len, t.0.len() * t.0.dim()) }?;
        let coords = t.0.points().iter().flat_map(|p| p.coords().iter().copied());
        for (dst, src) in buf.iter_mut().zip(coords) {
            *dst = src;
        }
        Ok(())
    })
}

/// Writes the notch into `out` (`dim` entries) and sets `has_notch`.
/// A tile that is a box has no notch; `out` is then left untouched.
///
/// # Safety
/// `tile` must be a live handle; `out` must hold `len` values and
/// `has_notch` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_tile_notch(
    tile: *const ScTile,
    out: *mut u32,
    len: usize,
    has_notch: *mut bool,
) -> ScStatus {
    guard(|| {
        let t = unsafe { deref(tile, "tile") }?;
        if has_notch.is_null() {
            return fail(ScStatus::NullPointer, "has_notch is null");
        }
        match t.0.find_notch()? {
            Some(p) => {
                let buf = unsafe { out_slice(out, len, p.dim()) }?;
                buf.copy_from_slice(p.coords());
                unsafe { has_notch.write(true) };
            }
            None => unsafe { has_notch.write(false) },
        }
        Ok(())
    })
}

/// Decides whether the discrete simplex of radius `d` plus the lattice
/// covers `Z^n`, with the density when it does.
///
/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_covers(lattice: *const ScLattice, d: u64, out: *mut ScCoverResult) -> ScStatus {
    guard(|| {
        let l = unsafe { deref(lattice, "lattice") }?;
        let v = covers_discrete(l.0.dim(), d, &l.0)?;
        let (density_num, density_den) = match &v.density {
            Some(q) => rational_parts(q, "density")?,
            None => (0, 0),
        };
        let result = ScCoverResult {
            covered: v.covered,
            tile_diameter: v.tile_diameter,
            density_num,
            density_den,
        };
        unsafe { write_out(out, result) }
    })
}

/// Exhaustive search for `f(n, d)`. `index_cap = 0` uses the proven bound.
/// On success `f_out` and `exhaustive_out` are set, and `witness_out`, if
/// non-null, receives a new lattice handle owned by the caller. A cap that
/// is too small returns `SC_STATUS_CAP_TOO_SMALL` with the outputs still
/// filled from the best lattice found.
///
/// # Safety
/// Output pointers must be writable; `witness_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn sc_search_f(
    n: usize,
    d: u64,
    index_cap: u64,
    f_out: *mut u64,
    exhaustive_out: *mut bool,
    witness_out: *mut *mut ScLattice,
) -> ScStatus {
    guard(|| {
        if f_out.is_null() || exhaustive_out.is_null() {
            return fail(ScStatus::NullPointer, "output pointer is null");
        }
        let opts = SearchOptions {
            index_cap: (index_cap > 0).then_some(index_cap),
            threads: None,
        };
        let (report, err) = match search::brute_force_f_with(n, d, &opts) {
            Ok(r) => (r, None),
            Err(Error::CapTooSmall { cap, report }) => {
                let msg = format!("a sublattice of index {cap} already works; f may be larger");
                (*report, Some(Failure(ScStatus::CapTooSmall, msg)))
            }
            Err(e) => return Err(e.into()),
        };
        let f = to_u64(&report.f_value, "f")?;
        unsafe {
            f_out.write(f);
            exhaustive_out.write(report.exhaustive);
            if !witness_out.is_null() {
                witness_out.write(Box::into_raw(Box::new(ScLattice(report.witness))));
            }
        }
        err.map_or(Ok(()), Err)
    })
}

/// `floor((d+2)^2 / 3)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_f2_closed_form(d: u64, out: *mut u64) -> ScStatus {
    guard(|| {
        let f = to_u64(&search::f2_closed_form(d), "f")?;
        unsafe { write_out(out, f) }
    })
}

/// Lower bound on the lattice covering density of the `n`-simplex, as a
/// fraction `num / den`.
///
/// # Safety
/// `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_theta_lower_bound(n: usize, num: *mut u64, den: *mut u64) -> ScStatus {
    guard(|| {
        let (p, q) = rational_parts(&search::theta_lower_bound(n)?, "bound")?;
        unsafe {
            write_out(num, p)?;
            write_out(den, q)
        }
    })
}

/// General upper bound on `f(n, d)`, as a fraction `num / den`.
///
/// # Safety
/// `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sc_fn_upper_bound(n: usize, d: u64, num: *mut u64, den: *mut u64) -> ScStatus {
    guard(|| {
        let (p, q) = rational_parts(&search::fn_upper_bound(n, d)?, "bound")?;
        unsafe {
            write_out(num, p)?;
            write_out(den, q)
        }
    })
}
