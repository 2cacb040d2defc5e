//! C ABI for `genspectra`.
//!
//! Results live behind opaque handles that the caller releases with the
//! matching `*_free` function. Every entry point returns a [`GsStatus`]; on
//! failure [`gs_last_error_message`] describes the error for the calling
//! thread. Matrices cross the boundary as row-major `double` arrays, and
//! data sets as `n_samples × n_features` row-major arrays.

use std::cell::RefCell;
use std::ffi::CString;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use genspectra::gen_eigen::{solve_quick_dirty, solve_rigorous_with, GenEigenSolution, Pencil};
use genspectra::ml::{
    fda_fit, fda_transform, kspca_fit_with, kspca_transform, pca_fit, pca_transform,
    EmbeddingModel, KernelSpec, LabeledDataset, ModelKind,
};
use genspectra::rayleigh::rayleigh_quotient;
use genspectra::{eig_sym, EigenDecomposition, Error, Matrix, SortOrder, SymMatrix, Vector};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotSymmetric = 4,
    /// Numerical failure: no convergence, indefinite or still-singular `B`,
    /// complex spectrum.
    Numerical = 5,
    /// Singular input where an invertible one is required.
    Singular = 6,
    /// Missing labels, a single class, or a model of the wrong kind.
    BadData = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GsMethod {
    Rigorous = 0,
    QuickDirty = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GsKernelKind {
    Linear = 0,
    Rbf = 1,
    Polynomial = 2,
    Delta = 3,
}

/// Feature kernel. `gamma <= 0` selects `1 / n_features` for RBF.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct GsKernel {
    pub kind: GsKernelKind,
    pub gamma: f64,
    pub degree: u32,
    pub coef0: f64,
}

pub struct GsEigen(EigenDecomposition);
pub struct GsGenEigen(GenEigenSolution);
pub struct GsModel(EmbeddingModel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> GsStatus {
    match e {
        Error::DimensionMismatch(_) | Error::InvalidDimension(_) => GsStatus::DimensionMismatch,
        Error::NotSymmetric { .. } => GsStatus::NotSymmetric,
        Error::SingularMatrix { .. } | Error::DegenerateDenominator { .. } => GsStatus::Singular,
        Error::MissingLabels | Error::SingleClass | Error::WrongModel { .. } => GsStatus::BadData,
        e if e.is_numerical() => GsStatus::Numerical,
        _ => GsStatus::InvalidArgument,
    }
}

struct Failure(GsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(GsStatus::NullPointer, format!("{name} is null"))
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> GsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            GsStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            GsStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or point to `len` readable doubles.
unsafe fn slice<'a>(p: *const f64, len: usize, name: &str) -> Result<&'a [f64], Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// # Safety
/// `p` must be null or point to `len` writable doubles.
unsafe fn write_out(p: *mut f64, values: &[f64], name: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), p, values.len());
    Ok(())
}

unsafe fn sym(p: *const f64, n: usize, name: &str) -> Result<SymMatrix, Failure> {
    if n == 0 {
        return Err(Failure(GsStatus::InvalidArgument, "dimension must be positive".into()));
    }
    let data = slice(p, n * n, name)?.to_vec();
    Ok(SymMatrix::new(Matrix::new(n, n, data)?)?)
}

/// `n_samples × n_features` row-major → `d×n` column-sample matrix.
unsafe fn samples(p: *const f64, n: usize, d: usize) -> Result<Matrix, Failure> {
    if n == 0 || d == 0 {
        return Err(Failure(GsStatus::InvalidArgument, "data must be non-empty".into()));
    }
    let data = slice(p, n * d, "data")?.to_vec();
    Ok(Matrix::new(n, d, data)?.transpose())
}

unsafe fn labeled(
    data: *const f64,
    labels: *const usize,
    n: usize,
    d: usize,
) -> Result<LabeledDataset, Failure> {
    let x = samples(data, n, d)?;
    if labels.is_null() {
        return Err(null("labels"));
    }
    let l = std::slice::from_raw_parts(labels, n).to_vec();
    Ok(LabeledDataset::new(x, Some(l))?)
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn handle<'a, T>(h: *const T) -> Result<&'a T, Failure> {
    h.as_ref().ok_or_else(|| null("handle"))
}

fn epsilon_arg(epsilon: f64) -> Option<f64> {
    (epsilon >= 0.0).then_some(epsilon)
}

/// Message for the most recent failure on this thread, or null. Valid until
/// the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn gs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

// ---- symmetric eigen-decomposition ----

/// Eigen-decomposition of the symmetric `n×n` matrix `a`.
///
/// # Safety
/// `a` must point to `n*n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_eig_sym(
    a: *const f64,
    n: usize,
    ascending: bool,
    out: *mut *mut GsEigen,
) -> GsStatus {
    guard(|| {
        let m = sym(a, n, "a")?;
        let order = if ascending {
            SortOrder::Ascending
        } else {
            SortOrder::Descending
        };
        store(out, GsEigen(eig_sym(&m, order)?))
    })
}

/// # Safety
/// `h` must be a live handle from [`gs_eig_sym`].
#[no_mangle]
pub unsafe extern "C" fn gs_eigen_dim(h: *const GsEigen) -> usize {
    h.as_ref().map_or(0, |h| h.0.dim())
}

/// Copies the `n` eigenvalues into `out`.
///
/// # Safety
/// `h` must be a live handle; `out` must hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn gs_eigen_values(h: *const GsEigen, out: *mut f64) -> GsStatus {
    guard(|| write_out(out, &handle(h)?.0.lambda, "out"))
}

/// Copies the eigenvectors into `out` as a row-major `n×n` matrix whose
/// columns are the eigenvectors.
///
/// # Safety
/// `h` must be a live handle; `out` must hold `n*n` doubles.
#[no_mangle]
pub unsafe extern "C" fn gs_eigen_vectors(h: *const GsEigen, out: *mut f64) -> GsStatus {
    guard(|| write_out(out, handle(h)?.0.phi.as_slice(), "out"))
}

/// # Safety
/// `h` must be null or a handle from [`gs_eig_sym`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gs_eigen_free(h: *mut GsEigen) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

// ---- generalized eigenproblem ----

/// Solves `A φ = λ B φ`. A negative `epsilon` selects the default
/// regularization for singular `B`.
///
/// # Safety
/// `a` and `b` must point to `n*n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_geig(
    a: *const f64,
    b: *const f64,
    n: usize,
    method: GsMethod,
    epsilon: f64,
    out: *mut *mut GsGenEigen,
) -> GsStatus {
    guard(|| {
        let pencil = Pencil::new(sym(a, n, "a")?, sym(b, n, "b")?)?;
        let eps = epsilon_arg(epsilon);
        let sol = match method {
            GsMethod::Rigorous => solve_rigorous_with(&pencil, eps)?.0,
            GsMethod::QuickDirty => solve_quick_dirty(&pencil, eps)?,
        };
        store(out, GsGenEigen(sol))
    })
}

/// # Safety
/// `h` must be a live handle from [`gs_geig`].
#[no_mangle]
pub unsafe extern "C" fn gs_geig_dim(h: *const GsGenEigen) -> usize {
    h.as_ref().map_or(0, |h| h.0.dim())
}

/// Eigenvalues, descending.
///
/// # Safety
/// `h` must be a live handle; `out` must hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn gs_geig_values(h: *const GsGenEigen, out: *mut f64) -> GsStatus {
    guard(|| write_out(out, &handle(h)?.0.lambda, "out"))
}

/// Eigenvectors as the columns of a row-major `n×n` matrix.
///
/// # Safety
/// `h` must be a live handle; `out` must hold `n*n` doubles.
#[no_mangle]
pub unsafe extern "C" fn gs_geig_vectors(h: *const GsGenEigen, out: *mut f64) -> GsStatus {
    guard(|| write_out(out, handle(h)?.0.phi.as_slice(), "out"))
}

/// Relative residual `‖AΦ − BΦΛ‖_F / max(1, ‖A‖_F)`; NaN for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gs_geig_residual(h: *const GsGenEigen) -> f64 {
    h.as_ref().map_or(f64::NAN, |h| h.0.residual)
}

/// Regularization actually applied (0 when `B` was invertible).
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gs_geig_epsilon_used(h: *const GsGenEigen) -> f64 {
    h.as_ref().map_or(f64::NAN, |h| h.0.epsilon_used)
}

/// # Safety
/// `h` must be null or a handle from [`gs_geig`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gs_geig_free(h: *mut GsGenEigen) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

// ---- Rayleigh quotient ----

/// `uᵀAu / uᵀBu`; `b` may be null for the identity.
///
/// # Safety
/// `a` (and `b` when non-null) must point to `n*n` doubles, `u` to `n`.
#[no_mangle]
pub unsafe extern "C" fn gs_rayleigh_quotient(
    a: *const f64,
    b: *const f64,
    u: *const f64,
    n: usize,
    out: *mut f64,
) -> GsStatus {
    guard(|| {
        let a = sym(a, n, "a")?;
        let b = if b.is_null() { None } else { Some(sym(b, n, "b")?) };
        let u = Vector::from_slice(slice(u, n, "u")?)?;
        let rho = rayleigh_quotient(&u, &a, b.as_ref())?;
        write_out(out, &[rho], "out")
    })
}

// ---- embeddings ----

/// PCA with `p` components on `n_samples × n_features` data.
///
/// # Safety
/// `data` must point to `n_samples*n_features` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_pca_fit(
    data: *const f64,
    n_samples: usize,
    n_features: usize,
    p: usize,
    out: *mut *mut GsModel,
) -> GsStatus {
    guard(|| {
        let x = samples(data, n_samples, n_features)?;
        store(out, GsModel(pca_fit(&x, p)?))
    })
}

/// Fisher discriminant analysis; `labels` holds one class id per sample.
/// A negative `epsilon` selects the default regularization.
///
/// # Safety
/// `data` must point to `n_samples*n_features` doubles, `labels` to
/// `n_samples` ids; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gs_fda_fit(
    data: *const f64,
    labels: *const usize,
    n_samples: usize,
    n_features: usize,
    p: usize,
    epsilon: f64,
    out: *mut *mut GsModel,
) -> GsStatus {
    guard(|| {
        let ds = labeled(data, labels, n_samples, n_features)?;
        store(out, GsModel(fda_fit(&ds, p, epsilon_arg(epsilon))?))
    })
}

/// Kernel supervised PCA with the delta kernel on labels.
///
/// # Safety
/// As [`gs_fda_fit`].
#[no_mangle]
pub unsafe extern "C" fn gs_kspca_fit(
    data: *const f64,
    labels: *const usize,
    n_samples: usize,
    n_features: usize,
    p: usize,
    kernel: GsKernel,
    epsilon: f64,
    out: *mut *mut GsModel,
) -> GsStatus {
    guard(|| {
        let ds = labeled(data, labels, n_samples, n_features)?;
        let kx = match kernel.kind {
            GsKernelKind::Linear => KernelSpec::Linear,
            GsKernelKind::Rbf => KernelSpec::Rbf {
                gamma: (kernel.gamma > 0.0).then_some(kernel.gamma),
            },
            GsKernelKind::Polynomial => KernelSpec::Polynomial {
                degree: kernel.degree,
                coef0: kernel.coef0,
            },
            GsKernelKind::Delta => KernelSpec::Delta,
        };
        let m = kspca_fit_with(&ds, p, &kx, &KernelSpec::Delta, epsilon_arg(epsilon))?;
        store(out, GsModel(m))
    })
}

/// Number of components `p`.
///
/// # Safety
/// `h` must be null or a live model handle.
#[no_mangle]
pub unsafe extern "C" fn gs_model_components(h: *const GsModel) -> usize {
    h.as_ref().map_or(0, |h| h.0.dim())
}

/// Rows of the projection: `n_features` for PCA/FDA, `n_samples` for KSPCA.
///
/// # Safety
/// `h` must be null or a live model handle.
#[no_mangle]
pub unsafe extern "C" fn gs_model_projection_rows(h: *const GsModel) -> usize {
    h.as_ref().map_or(0, |h| h.0.projection.rows())
}

/// # Safety
/// `h` must be a live model handle; `out` must hold `p` doubles.
#[no_mangle]
pub unsafe extern "C" fn gs_model_eigenvalues(h: *const GsModel, out: *mut f64) -> GsStatus {
    guard(|| write_out(out, &handle(h)?.0.eigenvalues, "out"))
}

/// Projection as a row-major `rows×p` matrix.
///
/// # Safety
/// `h` must be a live model handle; `out` must hold `rows*p` doubles.
#[no_mangle]
pub unsafe extern "C" fn gs_model_projection(h: *const GsModel, out: *mut f64) -> GsStatus {
    guard(|| write_out(out, handle(h)?.0.projection.as_slice(), "out"))
}

/// Embeds `n_samples × n_features` data; writes a row-major
/// `n_samples × p` array.
///
/// # Safety
/// `h` must be a live model handle; `data` must point to
/// `n_samples*n_features` doubles; `out` must hold `n_samples*p` doubles.
#[no_mangle]
pub unsafe extern "C" fn gs_model_transform(
    h: *const GsModel,
    data: *const f64,
    n_samples: usize,
    n_features: usize,
    out: *mut f64,
) -> GsStatus {
    guard(|| {
        let m = &handle(h)?.0;
        let x = samples(data, n_samples, n_features)?;
        let z = match m.kind {
            ModelKind::Pca => pca_transform(m, &x)?,
            ModelKind::Fda => fda_transform(m, &x)?,
            ModelKind::Kspca => kspca_transform(m, &x)?,
        };
        write_out(out, z.transpose().as_slice(), "out")
    })
}

/// # Safety
/// `h` must be null or a model handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gs_model_free(h: *mut GsModel) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}
