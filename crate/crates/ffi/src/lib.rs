//! C ABI over `pairframe`.
//!
//! Families and pair systems are opaque heap handles created by the
//! `pf_*_new` / `pf_*_from_*` functions and released with the matching
//! `pf_*_free`. Every fallible call returns a [`PfStatus`]; on failure the
//! message is available from [`pf_last_error`] on the same thread.
//!
//! Complex arrays are passed as [`PfComplex`] and matrices are row-major.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pairframe::io::FrameFile;
use pairframe::{
    frame, generators, neumann, pair, CMatrix, CVector, Complex64, Error, GenKind, GenSpec,
    OperatorFamily, PairSystem, WeightSequence,
};

/// Status codes. Values 2, 3 and 4 match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfStatus {
    Ok = 0,
    InvalidArgument = 1,
    Format = 2,
    DimensionMismatch = 3,
    NotInvertible = 4,
    NullPointer = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfComplex {
    pub re: f64,
    pub im: f64,
}

impl From<PfComplex> for Complex64 {
    fn from(z: PfComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for PfComplex {
    fn from(z: Complex64) -> Self {
        PfComplex { re: z.re, im: z.im }
    }
}

/// Opaque operator family.
pub struct PfFamily(OperatorFamily);

/// Opaque pair system `(m, gamma, lambda)`.
pub struct PfPair(PairSystem);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PfFrameReport {
    pub is_bessel: bool,
    pub is_frame: bool,
    pub is_tight: bool,
    pub lower: f64,
    pub upper: f64,
    /// `1/B` for frames, NaN otherwise.
    pub alpha_star: f64,
    /// `|I - S/B|` for frames, NaN otherwise.
    pub residual: f64,
    pub cert_contraction: bool,
    pub cert_invertible: bool,
    pub cert_surjective: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PfPairReport {
    pub is_pair_frame: bool,
    pub sigma_min: f64,
    pub op_norm: f64,
    /// Infinity when the multiplier is singular.
    pub condition_number: f64,
    pub framelike_lower: f64,
    pub framelike_upper: f64,
    pub adjoint_residual: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfNearIdentity {
    pub alpha: PfComplex,
    pub residual: f64,
    pub is_near_identity: bool,
    pub is_positive_variant: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> PfStatus {
    match err {
        Error::DimensionMismatch { .. } => PfStatus::DimensionMismatch,
        Error::NotAFrame { .. } | Error::Singular { .. } => PfStatus::NotInvertible,
        Error::Format(_) | Error::Io(_) => PfStatus::Format,
        _ => PfStatus::InvalidArgument,
    }
}

/// Runs `body`, translating errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), (PfStatus, String)>) -> PfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PfStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PfStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (PfStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (PfStatus, String) {
    (PfStatus::NullPointer, format!("{what} is null"))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], (PfStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(
    p: *mut T,
    len: usize,
    what: &str,
) -> Result<&'a mut [T], (PfStatus, String)> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, (PfStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), (PfStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn write_matrix(m: &CMatrix, buf: &mut [PfComplex]) -> Result<(), (PfStatus, String)> {
    let needed = m.nrows() * m.ncols();
    if buf.len() != needed {
        return Err((
            PfStatus::DimensionMismatch,
            format!("output buffer holds {} entries, need {needed}", buf.len()),
        ));
    }
    for (slot, z) in buf.iter_mut().zip(m.transpose().iter()) {
        *slot = (*z).into();
    }
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Ordinary frame from `count` vectors of length `dim`, stored row-major in
/// `vectors` (`count * dim` entries).
///
/// # Safety
/// `vectors` must point to `count * dim` readable entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pf_family_from_vectors(
    dim: usize,
    count: usize,
    vectors: *const PfComplex,
    out: *mut *mut PfFamily,
) -> PfStatus {
    guard(|| {
        let data = slice(vectors, dim * count, "vectors")?;
        let vs: Vec<CVector> = (0..count)
            .map(|i| {
                CVector::from_iterator(dim, data[i * dim..(i + 1) * dim].iter().map(|&z| z.into()))
            })
            .collect();
        let family = OperatorFamily::from_vectors(dim, &vs).map_err(lib_err)?;
        put(out, Box::into_raw(Box::new(PfFamily(family))))
    })
}

/// Family of `count` operators; member `i` is `rows[i] x dim`, all members
/// concatenated row-major in `data`.
///
/// # Safety
/// `rows` must hold `count` entries and `data` `sum(rows) * dim` entries.
#[no_mangle]
pub unsafe extern "C" fn pf_family_from_operators(
    dim: usize,
    count: usize,
    rows: *const usize,
    data: *const PfComplex,
    out: *mut *mut PfFamily,
) -> PfStatus {
    guard(|| {
        let rows = slice(rows, count, "rows")?;
        let total: usize = rows.iter().sum();
        let data = slice(data, total * dim, "data")?;
        let mut offset = 0;
        let members = rows
            .iter()
            .map(|&r| {
                let block = &data[offset * dim..(offset + r) * dim];
                offset += r;
                CMatrix::from_row_iterator(r, dim, block.iter().map(|&z| z.into()))
            })
            .collect();
        let family = OperatorFamily::new(dim, members).map_err(lib_err)?;
        put(out, Box::into_raw(Box::new(PfFamily(family))))
    })
}

/// Family from the text of a frame file (the `gamma` and `weights` fields are
/// ignored).
///
/// # Safety
/// `json` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn pf_family_from_json(
    json: *const c_char,
    out: *mut *mut PfFamily,
) -> PfStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| (PfStatus::Format, "json is not UTF-8".to_string()))?;
        let data = FrameFile::parse(text)
            .and_then(|f| f.to_data())
            .map_err(lib_err)?;
        put(out, Box::into_raw(Box::new(PfFamily(data.lambda))))
    })
}

/// Generated fixture family; `kind` is a generator name such as `"mercedes"`.
///
/// # Safety
/// `kind` must be a NUL-terminated string; `params` must hold `n_params` entries.
#[no_mangle]
pub unsafe extern "C" fn pf_family_generate(
    kind: *const c_char,
    dim: usize,
    count: usize,
    seed: u64,
    params: *const f64,
    n_params: usize,
    out: *mut *mut PfFamily,
) -> PfStatus {
    guard(|| {
        if kind.is_null() {
            return Err(null("kind"));
        }
        let kind: GenKind = CStr::from_ptr(kind)
            .to_str()
            .map_err(|_| (PfStatus::InvalidArgument, "kind is not UTF-8".to_string()))?
            .parse()
            .map_err(lib_err)?;
        let params = slice(params, n_params, "params")?.to_vec();
        let family =
            generators::generate(&GenSpec::new(kind, dim, count, seed).with_params(params))
                .map_err(lib_err)?;
        put(out, Box::into_raw(Box::new(PfFamily(family))))
    })
}

/// # Safety
/// `family` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pf_family_free(family: *mut PfFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Ambient dimension, or 0 for a null handle.
///
/// # Safety
/// `family` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pf_family_dim(family: *const PfFamily) -> usize {
    family.as_ref().map_or(0, |f| f.0.ambient_dim())
}

/// Member count, or 0 for a null handle.
///
/// # Safety
/// `family` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pf_family_len(family: *const PfFamily) -> usize {
    family.as_ref().map_or(0, |f| f.0.len())
}

/// Writes the `dim x dim` frame operator row-major into `buf` (`len` must be `dim * dim`).
///
/// # Safety
/// `family` must be live; `buf` must hold `len` writable entries.
#[no_mangle]
pub unsafe extern "C" fn pf_frame_operator(
    family: *const PfFamily,
    buf: *mut PfComplex,
    len: usize,
) -> PfStatus {
    guard(|| {
        let family = handle(family, "family")?;
        write_matrix(
            &frame::frame_operator(&family.0),
            slice_mut(buf, len, "buf")?,
        )
    })
}

/// # Safety
/// `family` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_frame_classify(
    family: *const PfFamily,
    tol: f64,
    out: *mut PfFrameReport,
) -> PfStatus {
    guard(|| {
        let family = handle(family, "family")?;
        let r = frame::classify(&family.0, tol);
        put(
            out,
            PfFrameReport {
                is_bessel: r.is_bessel,
                is_frame: r.is_frame,
                is_tight: r.is_tight(tol),
                lower: r.bounds.lower,
                upper: r.bounds.upper,
                alpha_star: r.alpha_star.unwrap_or(f64::NAN),
                residual: r.residual.unwrap_or(f64::NAN),
                cert_contraction: r.cert_contraction,
                cert_invertible: r.cert_invertible,
                cert_surjective: r.cert_surjective,
            },
        )
    })
}

/// Canonical dual family; fails with `NOT_INVERTIBLE` for non-frames.
///
/// # Safety
/// `family` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_canonical_dual(
    family: *const PfFamily,
    tol: f64,
    out: *mut *mut PfFamily,
) -> PfStatus {
    guard(|| {
        let family = handle(family, "family")?;
        let dual = frame::canonical_dual(&family.0, tol).map_err(lib_err)?;
        put(out, Box::into_raw(Box::new(PfFamily(dual))))
    })
}

/// Pair system from two families and optional weights (`weights` may be null
/// for all ones; otherwise it holds one entry per member). The families are
/// copied; the caller keeps ownership of its handles.
///
/// # Safety
/// `gamma` and `lambda` must be live; `weights` null or `len(lambda)` entries.
#[no_mangle]
pub unsafe extern "C" fn pf_pair_new(
    gamma: *const PfFamily,
    lambda: *const PfFamily,
    weights: *const PfComplex,
    out: *mut *mut PfPair,
) -> PfStatus {
    guard(|| {
        let gamma = handle(gamma, "gamma")?;
        let lambda = handle(lambda, "lambda")?;
        let weights = if weights.is_null() {
            WeightSequence::ones(lambda.0.len())
        } else {
            let w = slice(weights, lambda.0.len(), "weights")?;
            WeightSequence::new(w.iter().map(|&z| z.into()).collect()).map_err(lib_err)?
        };
        let system =
            PairSystem::new(weights, gamma.0.clone(), lambda.0.clone()).map_err(lib_err)?;
        put(out, Box::into_raw(Box::new(PfPair(system))))
    })
}

/// # Safety
/// `pair` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pf_pair_free(pair: *mut PfPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Writes the multiplier `S` row-major into `buf` (`len` must be `dim * dim`).
///
/// # Safety
/// `pair` must be live; `buf` must hold `len` writable entries.
#[no_mangle]
pub unsafe extern "C" fn pf_pair_operator(
    pair: *const PfPair,
    buf: *mut PfComplex,
    len: usize,
) -> PfStatus {
    guard(|| {
        let pair = handle(pair, "pair")?;
        write_matrix(&pair::pair_operator(&pair.0), slice_mut(buf, len, "buf")?)
    })
}

/// # Safety
/// `pair` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_pair_classify(
    pair: *const PfPair,
    tol: f64,
    theta_steps: usize,
    out: *mut PfPairReport,
) -> PfStatus {
    guard(|| {
        let pair = handle(pair, "pair")?;
        let r = pair::classify_pair(&pair.0, tol, theta_steps).map_err(lib_err)?;
        put(
            out,
            PfPairReport {
                is_pair_frame: r.is_pair_frame,
                sigma_min: r.sigma_min,
                op_norm: r.op_norm,
                condition_number: r.condition_number.unwrap_or(f64::INFINITY),
                framelike_lower: r.framelike_lower,
                framelike_upper: r.framelike_upper,
                adjoint_residual: r.adjoint_residual,
            },
        )
    })
}

/// Best scalar `alpha` for `|I - alpha S|` with default search settings.
///
/// # Safety
/// `pair` must be live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_find_alpha(pair: *const PfPair, out: *mut PfNearIdentity) -> PfStatus {
    guard(|| {
        let pair = handle(pair, "pair")?;
        let s = pair::pair_operator(&pair.0);
        let r = neumann::find_alpha(
            &s,
            neumann::DEFAULT_ALPHA_GRID,
            neumann::DEFAULT_ALPHA_REFINE,
        )
        .map_err(lib_err)?;
        put(
            out,
            PfNearIdentity {
                alpha: r.alpha.into(),
                residual: r.residual,
                is_near_identity: r.is_near_identity,
                is_positive_variant: r.is_positive_variant,
            },
        )
    })
}

/// Fills `errors[N] = |I - J_N|` and `bounds[N] = |I - alpha S|^{N+1}` for
/// `N = 0..len`.
///
/// # Safety
/// `pair` must be live; `errors` and `bounds` must hold `len` writable entries.
#[no_mangle]
pub unsafe extern "C" fn pf_neumann_trace(
    pair: *const PfPair,
    alpha: PfComplex,
    errors: *mut f64,
    bounds: *mut f64,
    len: usize,
) -> PfStatus {
    guard(|| {
        let pair = handle(pair, "pair")?;
        let errors = slice_mut(errors, len, "errors")?;
        let bounds = slice_mut(bounds, len, "bounds")?;
        if len == 0 {
            return Ok(());
        }
        let s = pair::pair_operator(&pair.0);
        let trace = neumann::neumann_trace(&s, alpha.into(), len - 1).map_err(lib_err)?;
        for (k, e) in trace.entries.iter().enumerate() {
            errors[k] = e.error;
            bounds[k] = e.bound;
        }
        Ok(())
    })
}

/// Neumann reconstruction of `signal` at truncation order `order`; writes
/// the approximation into `approx` and the relative error into `rel_error`.
///
/// # Safety
/// `pair` must be live; `signal` and `approx` must hold `dim` entries.
#[no_mangle]
pub unsafe extern "C" fn pf_reconstruct(
    pair: *const PfPair,
    alpha: PfComplex,
    order: usize,
    signal: *const PfComplex,
    approx: *mut PfComplex,
    rel_error: *mut f64,
) -> PfStatus {
    guard(|| {
        let pair = handle(pair, "pair")?;
        let dim = pair.0.ambient_dim();
        let f =
            CVector::from_iterator(dim, slice(signal, dim, "signal")?.iter().map(|&z| z.into()));
        let r = neumann::reconstruct(&pair.0, alpha.into(), order, &f).map_err(lib_err)?;
        for (slot, z) in slice_mut(approx, dim, "approx")?
            .iter_mut()
            .zip(r.approx.iter())
        {
            *slot = (*z).into();
        }
        put(rel_error, r.rel_error)
    })
}
