#ifndef RICCATI_CATALAN_H
#define RICCATI_CATALAN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RccMethod {
  RCC_METHOD_DIRECT = 0,
  RCC_METHOD_SPECTRAL = 1,
  RCC_METHOD_MATRIX = 2,
} RccMethod;

typedef enum RccStatus {
  RCC_STATUS_OK = 0,
  RCC_STATUS_NULL_POINTER = 1,
  RCC_STATUS_INVALID_PARAMETER = 2,
  RCC_STATUS_OVERFLOW = 3,
  RCC_STATUS_DOMAIN = 4,
  RCC_STATUS_SINGULARITY = 5,
  RCC_STATUS_SINGULAR_MATRIX = 6,
  RCC_STATUS_RESIDUE = 7,
  RCC_STATUS_BUFFER_TOO_SMALL = 8,
  RCC_STATUS_OUT_OF_RANGE = 9,
  RCC_STATUS_INTERNAL = 10,
  RCC_STATUS_PANIC = 11,
} RccStatus;

// Opaque finite-system solution.
typedef struct RccFiniteSolution RccFiniteSolution;

// Opaque truncated infinite-system solution.
typedef struct RccInfiniteSolution RccInfiniteSolution;

typedef struct RccParams {
  double eps;
  double c;
  double t_final;
} RccParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *rcc_last_error(void);

// Writes C_0..=C_n_max into `out` (length `len` ≥ n_max + 1).
//
// # Safety
// `out` must point to `len` writable elements.
enum RccStatus rcc_catalan(uintptr_t n_max, uint64_t *out, uintptr_t len);

// Writes the stationary solution φ^0..=φ^i_max into `out`.
//
// # Safety
// `out` must point to `len` writable elements.
enum RccStatus rcc_stationary(uintptr_t i_max, double *out, uintptr_t len);

// Evaluates the closed-form symbol f_t(x).
//
// # Safety
// Pointers must be valid; `re` and `im` writable.
enum RccStatus rcc_f_closed(const struct RccParams *p, double t, double x, double *re, double *im);

// Writes the 2n eigenvalues of the finite system's Hamiltonian matrix.
//
// # Safety
// `re` and `im` must each point to `len` writable elements.
enum RccStatus rcc_eigenvalues(const struct RccParams *p,
                               uintptr_t n,
                               double *re,
                               double *im,
                               uintptr_t len);

// Solves the N-player periodic system. On success `*handle` owns the result.
//
// # Safety
// `p` must be valid and `handle` writable.
enum RccStatus rcc_finite_solve(const struct RccParams *p,
                                enum RccMethod method,
                                uintptr_t n_players,
                                uintptr_t n_steps,
                                struct RccFiniteSolution **handle);

// Number of time rows and of indices per row.
//
// # Safety
// `h` must be a live handle; outputs writable.
enum RccStatus rcc_finite_shape(const struct RccFiniteSolution *h,
                                uintptr_t *rows,
                                uintptr_t *cols);

// Time t_m and value φ^i at row `m`.
//
// # Safety
// `h` must be a live handle; outputs writable.
enum RccStatus rcc_finite_value(const struct RccFiniteSolution *h,
                                uintptr_t m,
                                uintptr_t i,
                                double *t,
                                double *value);

// Releases a finite solution. Null is ignored.
//
// # Safety
// `h` must come from [`rcc_finite_solve`] and not be used afterwards.
void rcc_finite_free(struct RccFiniteSolution *h);

// Solves the infinite system truncated to indices 0..=k_max.
//
// # Safety
// `p` must be valid and `handle` writable.
enum RccStatus rcc_infinite_solve(const struct RccParams *p,
                                  uintptr_t k_max,
                                  uintptr_t n_steps,
                                  struct RccInfiniteSolution **handle);

// # Safety
// `h` must be a live handle; outputs writable.
enum RccStatus rcc_infinite_shape(const struct RccInfiniteSolution *h,
                                  uintptr_t *rows,
                                  uintptr_t *cols);

// # Safety
// `h` must be a live handle; outputs writable.
enum RccStatus rcc_infinite_value(const struct RccInfiniteSolution *h,
                                  uintptr_t m,
                                  uintptr_t j,
                                  double *t,
                                  double *value);

// # Safety
// `h` must come from [`rcc_infinite_solve`] and not be used afterwards.
void rcc_infinite_free(struct RccInfiniteSolution *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RICCATI_CATALAN_H */
