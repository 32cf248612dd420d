#ifndef BESSEL_LATTICE_H
#define BESSEL_LATTICE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum BslStatus {
  BslStatus_Ok = 0,
  BslStatus_NullPointer = 1,
  BslStatus_InvalidArgument = 2,
  BslStatus_SingularMatrix = 3,
  BslStatus_DivisibilityViolation = 4,
  BslStatus_TruncationFailure = 5,
  BslStatus_EnumerationTooLarge = 6,
  BslStatus_InternalError = 7,
} BslStatus;

/**
 * Opaque per-coordinate Dirichlet character family handle.
 */
typedef struct BslCharacterFamily BslCharacterFamily;

/**
 * Opaque lattice handle.
 */
typedef struct BslLattice BslLattice;

/**
 * Complex number in the C interface.
 */
typedef struct BslComplex {
  double re;
  double im;
} BslComplex;

/**
 * Two-sided identity evaluation with its accuracy certificate.
 */
typedef struct BslIdentityReport {
  struct BslComplex lhs;
  struct BslComplex rhs;
  double abs_residual;
  int64_t truncation_radius;
  double tail_bound;
  /**
   * Nonzero when the result carries no identity guarantee.
   */
  uint8_t warning;
} BslIdentityReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent error on this thread, or NULL. Owned by the
 * library; valid until the next failing call on the same thread.
 */
const char *bsl_last_error_message(void);

/**
 * Builds an n-by-n integer-basis lattice from `rows` in row-major order.
 *
 * # Safety
 * `rows` must point to `n * n` readable i64 values and `out` must be a
 * valid writable pointer.
 */
enum BslStatus bsl_lattice_new(uintptr_t n, const int64_t *rows, struct BslLattice **out);

/**
 * # Safety
 * `lat` must be NULL or a pointer from `bsl_lattice_new`, not yet freed.
 */
void bsl_lattice_free(struct BslLattice *lat);

/**
 * Writes the covolume |det B| of the lattice to `out`.
 *
 * # Safety
 * `lat` must be a live handle and `out` writable.
 */
enum BslStatus bsl_lattice_covolume(const struct BslLattice *lat, double *out);

/**
 * Builds a family of `n` copies of one character: kind 0 is trivial,
 * kind 1 is the principal character mod `q`, kind 2 is the Kronecker
 * symbol (q/.) for a fundamental discriminant q.
 *
 * # Safety
 * `out` must be a valid writable pointer.
 */
enum BslStatus bsl_character_family_new(uintptr_t n,
                                        uint32_t kind,
                                        int64_t q,
                                        struct BslCharacterFamily **out);

/**
 * # Safety
 * `fam` must be NULL or a pointer from `bsl_character_family_new`.
 */
void bsl_character_family_free(struct BslCharacterFamily *fam);

/**
 * I-Bessel function of integer order, with default evaluation settings.
 *
 * # Safety
 * `out` must be a valid writable pointer.
 */
enum BslStatus bsl_bessel_i(int64_t order, struct BslComplex t, struct BslComplex *out);

/**
 * Exponentially scaled I-Bessel function e^{-t} I_order(t) for real t >= 0.
 */
double bsl_bessel_i_scaled(int64_t order, double t);

/**
 * Lattice theta series at real t > 0, with a certified truncation tail.
 *
 * # Safety
 * `lat` must be a live handle; `out_value` and `out_tail` writable.
 */
enum BslStatus bsl_theta_lattice(const struct BslLattice *lat,
                                 double t,
                                 double *out_value,
                                 double *out_tail);

/**
 * Verifies the character-twisted Bessel lattice-sum identity.
 *
 * `x` has one integer per coordinate; `y_num`/`y_den` give rational
 * offsets; `t` one complex component per coordinate with positive real
 * part. Imprimitive non-principal characters are rejected unless
 * `allow_imprimitive` is nonzero.
 *
 * # Safety
 * `lat` and `fam` must be live handles; the array pointers must each hold
 * `n` elements where `n` is the lattice dimension; `out` must be writable.
 */
enum BslStatus bsl_verify_identity(const struct BslLattice *lat,
                                   const struct BslCharacterFamily *fam,
                                   const int64_t *x,
                                   const int64_t *y_num,
                                   const int64_t *y_den,
                                   const struct BslComplex *t,
                                   double tol,
                                   uint8_t allow_imprimitive,
                                   struct BslIdentityReport *out);

/**
 * Dedekind eta at tau (upper half-plane), via the character q-series.
 *
 * # Safety
 * `out_value` and `out_tail` must be writable.
 */
enum BslStatus bsl_dedekind_eta(struct BslComplex tau,
                                struct BslComplex *out_value,
                                double *out_tail);

/**
 * Jacobi theta-2 / theta-4 inversion identity at real t > 0.
 *
 * # Safety
 * `out` must be writable.
 */
enum BslStatus bsl_jacobi_theta_check(double t, struct BslIdentityReport *out);

/**
 * Heat kernel on the standard n-dimensional index lattice at integer site
 * `k`, together with the window radius that captures all but `tol` of the
 * kernel mass.
 *
 * # Safety
 * `k` must hold `n` elements; `out_value` and `out_radius` writable.
 */
enum BslStatus bsl_heat_kernel(uintptr_t n,
                               const int64_t *k,
                               double t,
                               double tol,
                               double *out_value,
                               int64_t *out_radius);

/**
 * NUL-terminated version string for the library.
 */
const char *bsl_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BESSEL_LATTICE_H */
