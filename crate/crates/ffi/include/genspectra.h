#ifndef GENSPECTRA_H
#define GENSPECTRA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GsStatus {
  GS_STATUS_OK = 0,
  GS_STATUS_NULL_POINTER = 1,
  GS_STATUS_INVALID_ARGUMENT = 2,
  GS_STATUS_DIMENSION_MISMATCH = 3,
  GS_STATUS_NOT_SYMMETRIC = 4,
  /**
   * Numerical failure: no convergence, indefinite or still-singular `B`,
   * complex spectrum.
   */
  GS_STATUS_NUMERICAL = 5,
  /**
   * Singular input where an invertible one is required.
   */
  GS_STATUS_SINGULAR = 6,
  /**
   * Missing labels, a single class, or a model of the wrong kind.
   */
  GS_STATUS_BAD_DATA = 7,
  GS_STATUS_PANIC = 8,
} GsStatus;

typedef enum GsMethod {
  GS_METHOD_RIGOROUS = 0,
  GS_METHOD_QUICK_DIRTY = 1,
} GsMethod;

typedef enum GsKernelKind {
  GS_KERNEL_KIND_LINEAR = 0,
  GS_KERNEL_KIND_RBF = 1,
  GS_KERNEL_KIND_POLYNOMIAL = 2,
  GS_KERNEL_KIND_DELTA = 3,
} GsKernelKind;

typedef struct GsEigen GsEigen;

typedef struct GsGenEigen GsGenEigen;

typedef struct GsModel GsModel;

/**
 * Feature kernel. `gamma <= 0` selects `1 / n_features` for RBF.
 */
typedef struct GsKernel {
  enum GsKernelKind kind;
  double gamma;
  uint32_t degree;
  double coef0;
} GsKernel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. Valid until
 * the next call into this library from the same thread.
 */
const char *gs_last_error_message(void);

/**
 * Eigen-decomposition of the symmetric `n×n` matrix `a`.
 *
 * # Safety
 * `a` must point to `n*n` doubles; `out` must be writable.
 */
enum GsStatus gs_eig_sym(const double *a, size_t n, bool ascending, struct GsEigen **out);

/**
 * # Safety
 * `h` must be a live handle from [`gs_eig_sym`].
 */
size_t gs_eigen_dim(const struct GsEigen *h);

/**
 * Copies the `n` eigenvalues into `out`.
 *
 * # Safety
 * `h` must be a live handle; `out` must hold `n` doubles.
 */
enum GsStatus gs_eigen_values(const struct GsEigen *h, double *out);

/**
 * Copies the eigenvectors into `out` as a row-major `n×n` matrix whose
 * columns are the eigenvectors.
 *
 * # Safety
 * `h` must be a live handle; `out` must hold `n*n` doubles.
 */
enum GsStatus gs_eigen_vectors(const struct GsEigen *h, double *out);

/**
 * # Safety
 * `h` must be null or a handle from [`gs_eig_sym`] not yet freed.
 */
void gs_eigen_free(struct GsEigen *h);

/**
 * Solves `A φ = λ B φ`. A negative `epsilon` selects the default
 * regularization for singular `B`.
 *
 * # Safety
 * `a` and `b` must point to `n*n` doubles; `out` must be writable.
 */
enum GsStatus gs_geig(const double *a,
                      const double *b,
                      size_t n,
                      enum GsMethod method,
                      double epsilon,
                      struct GsGenEigen **out);

/**
 * # Safety
 * `h` must be a live handle from [`gs_geig`].
 */
size_t gs_geig_dim(const struct GsGenEigen *h);

/**
 * Eigenvalues, descending.
 *
 * # Safety
 * `h` must be a live handle; `out` must hold `n` doubles.
 */
enum GsStatus gs_geig_values(const struct GsGenEigen *h, double *out);

/**
 * Eigenvectors as the columns of a row-major `n×n` matrix.
 *
 * # Safety
 * `h` must be a live handle; `out` must hold `n*n` doubles.
 */
enum GsStatus gs_geig_vectors(const struct GsGenEigen *h, double *out);

/**
 * Relative residual `‖AΦ − BΦΛ‖_F / max(1, ‖A‖_F)`; NaN for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
double gs_geig_residual(const struct GsGenEigen *h);

/**
 * Regularization actually applied (0 when `B` was invertible).
 *
 * # Safety
 * `h` must be null or a live handle.
 */
double gs_geig_epsilon_used(const struct GsGenEigen *h);

/**
 * # Safety
 * `h` must be null or a handle from [`gs_geig`] not yet freed.
 */
void gs_geig_free(struct GsGenEigen *h);

/**
 * `uᵀAu / uᵀBu`; `b` may be null for the identity.
 *
 * # Safety
 * `a` (and `b` when non-null) must point to `n*n` doubles, `u` to `n`.
 */
enum GsStatus gs_rayleigh_quotient(const double *a,
                                   const double *b,
                                   const double *u,
                                   size_t n,
                                   double *out);

/**
 * PCA with `p` components on `n_samples × n_features` data.
 *
 * # Safety
 * `data` must point to `n_samples*n_features` doubles; `out` must be writable.
 */
enum GsStatus gs_pca_fit(const double *data,
                         size_t n_samples,
                         size_t n_features,
                         size_t p,
                         struct GsModel **out);

/**
 * Fisher discriminant analysis; `labels` holds one class id per sample.
 * A negative `epsilon` selects the default regularization.
 *
 * # Safety
 * `data` must point to `n_samples*n_features` doubles, `labels` to
 * `n_samples` ids; `out` must be writable.
 */
enum GsStatus gs_fda_fit(const double *data,
                         const size_t *labels,
                         size_t n_samples,
                         size_t n_features,
                         size_t p,
                         double epsilon,
                         struct GsModel **out);

/**
 * Kernel supervised PCA with the delta kernel on labels.
 *
 * # Safety
 * As [`gs_fda_fit`].
 */
enum GsStatus gs_kspca_fit(const double *data,
                           const size_t *labels,
                           size_t n_samples,
                           size_t n_features,
                           size_t p,
                           struct GsKernel kernel,
                           double epsilon,
                           struct GsModel **out);

/**
 * Number of components `p`.
 *
 * # Safety
 * `h` must be null or a live model handle.
 */
size_t gs_model_components(const struct GsModel *h);

/**
 * Rows of the projection: `n_features` for PCA/FDA, `n_samples` for KSPCA.
 *
 * # Safety
 * `h` must be null or a live model handle.
 */
size_t gs_model_projection_rows(const struct GsModel *h);

/**
 * # Safety
 * `h` must be a live model handle; `out` must hold `p` doubles.
 */
enum GsStatus gs_model_eigenvalues(const struct GsModel *h, double *out);

/**
 * Projection as a row-major `rows×p` matrix.
 *
 * # Safety
 * `h` must be a live model handle; `out` must hold `rows*p` doubles.
 */
enum GsStatus gs_model_projection(const struct GsModel *h, double *out);

/**
 * Embeds `n_samples × n_features` data; writes a row-major
 * `n_samples × p` array.
 *
 * # Safety
 * `h` must be a live model handle; `data` must point to
 * `n_samples*n_features` doubles; `out` must hold `n_samples*p` doubles.
 */
enum GsStatus gs_model_transform(const struct GsModel *h,
                                 const double *data,
                                 size_t n_samples,
                                 size_t n_features,
                                 double *out);

/**
 * # Safety
 * `h` must be null or a model handle not yet freed.
 */
void gs_model_free(struct GsModel *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GENSPECTRA_H */
