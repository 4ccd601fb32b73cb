//! C interface to `specmix`.
//!
//! Models and samples are opaque heap handles created by `sm_*_new`-style
//! constructors and released with the matching `_free`. Every fallible call
//! returns an [`SmStatus`]; on failure a description is available from
//! [`sm_last_error_message`] on the same thread until the next call.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use specmix::classify::{classify, ClassifyParams};
use specmix::linalg::Matrix;
use specmix::partition::{misclassification, partition, PartitionParams};
use specmix::popmodel::{divergence, sample, two_block_model, PopulationModel, SampleMatrix};
use specmix::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmStatus {
    Ok = 0,
    InvalidInput = 1,
    InvalidParameters = 2,
    InvalidState = 3,
    ConvergenceFailure = 4,
    Degenerate = 5,
    SizeLimit = 6,
    Io = 7,
    Parse = 8,
    NullPointer = 9,
    Panic = 10,
}

/// Opaque population model.
pub struct SmModel {
    inner: PopulationModel,
}

/// Opaque data matrix with optional ground-truth labels.
pub struct SmSample {
    inner: SampleMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> SmStatus {
    match e {
        Error::InvalidInput(_) => SmStatus::InvalidInput,
        Error::InvalidParameters(_) => SmStatus::InvalidParameters,
        Error::InvalidState(_) => SmStatus::InvalidState,
        Error::ConvergenceFailure { .. } => SmStatus::ConvergenceFailure,
        Error::DegenerateInput(_) | Error::DegenerateSpectrum(_) => SmStatus::Degenerate,
        Error::SizeLimit(_) => SmStatus::SizeLimit,
        Error::Io { .. } => SmStatus::Io,
        Error::Parse(_) => SmStatus::Parse,
    }
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SmStatus::Ok
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(&format!("null pointer: {what}"));
            SmStatus::NullPointer
        }
        Err(_) => {
            set_error("internal panic");
            SmStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(
    p: *mut T,
    len: usize,
    what: &'static str,
) -> Result<&'a mut [T], Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn copy_labels(labels: &[usize], out: &mut [usize]) -> Result<(), Failure> {
    if out.len() != labels.len() {
        return Err(Error::InvalidInput(format!(
            "label buffer holds {} entries, need {}",
            out.len(),
            labels.len()
        ))
        .into());
    }
    out.copy_from_slice(labels);
    Ok(())
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into this library.
#[no_mangle]
pub extern "C" fn sm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a model from a row-major `populations × features` probability
/// array and `populations` sizes.
///
/// # Safety
/// `probs` must point to `populations·features` doubles, `sizes` to
/// `populations` values and `out` to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_model_new(
    probs: *const f64,
    populations: usize,
    features: usize,
    sizes: *const usize,
    out: *mut *mut SmModel,
) -> SmStatus {
    guard(|| {
        let len = populations
            .checked_mul(features)
            .ok_or_else(|| Error::InvalidParameters("model dimensions overflow".into()))?;
        let p = slice(probs, len, "probs")?;
        let s = slice(sizes, populations, "sizes")?;
        let rows = if features == 0 {
            vec![Vec::new(); populations]
        } else {
            p.chunks(features).map(<[f64]>::to_vec).collect()
        };
        put(
            out,
            SmModel {
                inner: PopulationModel::new(rows, s.to_vec())?,
            },
        )
    })
}

/// Balanced two-block model with `n_per_population` individuals per side.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn sm_model_two_block(
    alpha: f64,
    epsilon: f64,
    features: usize,
    n_per_population: usize,
    out: *mut *mut SmModel,
) -> SmStatus {
    guard(|| {
        let inner = two_block_model(alpha, epsilon, features, n_per_population)?;
        put(out, SmModel { inner })
    })
}

/// Releases a model; null is ignored.
///
/// # Safety
/// `model` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sm_model_free(model: *mut SmModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Divergence of the closest pair of populations.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sm_model_divergence(model: *const SmModel, out: *mut f64) -> SmStatus {
    guard(|| {
        let m = get(model, "model")?;
        *slice_mut(out, 1, "out")?.first_mut().unwrap() = divergence(&m.inner);
        Ok(())
    })
}

/// Total number of individuals of a model.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sm_model_individuals(model: *const SmModel, out: *mut usize) -> SmStatus {
    guard(|| {
        let m = get(model, "model")?;
        slice_mut(out, 1, "out")?[0] = m.inner.individuals();
        Ok(())
    })
}

/// Draws a raw 0/1 sample with ground-truth labels.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sm_sample_generate(
    model: *const SmModel,
    seed: u64,
    out: *mut *mut SmSample,
) -> SmStatus {
    guard(|| {
        let m = get(model, "model")?;
        put(
            out,
            SmSample {
                inner: sample(&m.inner, seed),
            },
        )
    })
}

/// Wraps a row-major `rows × cols` array of 0/1 values without labels.
///
/// # Safety
/// `data` must point to `rows·cols` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn sm_sample_from_bits(
    data: *const f64,
    rows: usize,
    cols: usize,
    out: *mut *mut SmSample,
) -> SmStatus {
    guard(|| {
        let len = rows
            .checked_mul(cols)
            .ok_or_else(|| Error::InvalidInput("sample dimensions overflow".into()))?;
        let d = slice(data, len, "data")?;
        let inner = SampleMatrix::from_bits(Matrix::from_vec(rows, cols, d.to_vec())?, None)?;
        put(out, SmSample { inner })
    })
}

/// Releases a sample; null is ignored.
///
/// # Safety
/// `sample` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sm_sample_free(sample: *mut SmSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// Number of individuals and features.
///
/// # Safety
/// `sample` must be a live handle; `rows` and `cols` writable.
#[no_mangle]
pub unsafe extern "C" fn sm_sample_shape(
    sample: *const SmSample,
    rows: *mut usize,
    cols: *mut usize,
) -> SmStatus {
    guard(|| {
        let s = get(sample, "sample")?;
        slice_mut(rows, 1, "rows")?[0] = s.inner.individuals();
        slice_mut(cols, 1, "cols")?[0] = s.inner.features();
        Ok(())
    })
}

/// Copies the ground-truth labels into `out`, which must hold exactly one
/// entry per individual.
///
/// # Safety
/// `sample` must be a live handle and `out` point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn sm_sample_labels(
    sample: *const SmSample,
    out: *mut usize,
    len: usize,
) -> SmStatus {
    guard(|| {
        let s = get(sample, "sample")?;
        let labels = s
            .inner
            .labels()
            .ok_or_else(|| Error::InvalidState("sample carries no labels".into()))?;
        copy_labels(labels, slice_mut(out, len, "out")?)
    })
}

/// Two-way classification with `rounds` disjoint blocks of `block_size`
/// features. Writes one 0/1 label per individual.
///
/// # Safety
/// `sample` must be a live handle and `out` point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn sm_classify(
    sample: *const SmSample,
    gamma: f64,
    omega_min: f64,
    block_size: usize,
    rounds: usize,
    seed: u64,
    out: *mut usize,
    len: usize,
) -> SmStatus {
    guard(|| {
        let s = get(sample, "sample")?;
        let params = ClassifyParams::new(gamma, omega_min, block_size, rounds, seed)?;
        let result = classify(&s.inner, &params)?;
        copy_labels(&result.labels, slice_mut(out, len, "out")?)
    })
}

/// Clusters into `k` sets with the default scale sweep.
///
/// # Safety
/// `sample` must be a live handle and `out` point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn sm_partition(
    sample: *const SmSample,
    k: usize,
    out: *mut usize,
    len: usize,
) -> SmStatus {
    guard(|| {
        let s = get(sample, "sample")?;
        let params = PartitionParams::new(k, s.inner.features())?;
        let result = partition(&s.inner, &params)?;
        copy_labels(&result.labels, slice_mut(out, len, "out")?)
    })
}

/// Misplaced-individual count (each counted twice) and its rate over `n`,
/// minimized over relabelings.
///
/// # Safety
/// `labels` and `truth` must point to `n` values; `raw` and `rate` writable.
#[no_mangle]
pub unsafe extern "C" fn sm_misclassification(
    labels: *const usize,
    truth: *const usize,
    n: usize,
    k: usize,
    raw: *mut usize,
    rate: *mut f64,
) -> SmStatus {
    guard(|| {
        let m = misclassification(slice(labels, n, "labels")?, slice(truth, n, "truth")?, k)?;
        slice_mut(raw, 1, "raw")?[0] = m.raw;
        slice_mut(rate, 1, "rate")?[0] = m.rate;
        Ok(())
    })
}
