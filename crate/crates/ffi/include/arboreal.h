#ifndef ARBOREAL_H
#define ARBOREAL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ArbStatus {
  ARB_STATUS_OK = 0,
  ARB_STATUS_NULL_POINTER = 1,
  ARB_STATUS_INVALID_ARGUMENT = 2,
  ARB_STATUS_PRECONDITION = 3,
  ARB_STATUS_BUDGET = 4,
  ARB_STATUS_INTEGRITY = 5,
  ARB_STATUS_BUFFER_TOO_SMALL = 6,
  ARB_STATUS_PANIC = 7,
} ArbStatus;

/**
 * Weierstrass curve over ℚ with integer coefficients.
 */
typedef struct ArbCurve ArbCurve;

/**
 * x ↦ ax² + bx + c over ℤ.
 */
typedef struct ArbQuadMap ArbQuadMap;

/**
 * Automorphism of the binary rooted tree, truncated at a finite depth.
 */
typedef struct ArbTreeAut ArbTreeAut;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into the library from the same thread.
 */
const char *arb_last_error(void);

/**
 * Crate version as a static NUL-terminated string.
 */
const char *arb_version(void);

/**
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum ArbStatus arb_quadmap_new(int64_t a, int64_t b, int64_t c, struct ArbQuadMap **out);

/**
 * Parses "a,b,c" with arbitrary-size integers.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` valid for a pointer write.
 */
enum ArbStatus arb_quadmap_parse(const char *spec, struct ArbQuadMap **out);

/**
 * # Safety
 * `map` must be null or a handle from this library not yet freed.
 */
void arb_quadmap_free(struct ArbQuadMap *map);

/**
 * Maximality of levels 2..=depth. Writes 1 (certified) or 0 (no
 * certificate) to `status[n - 2]` and the witness prime, or 0 when there is
 * none, to `witness[n - 2]`. Both buffers hold `len ≥ depth − 1` entries;
 * `witness` may be null.
 *
 * # Safety
 * `map` must be a live handle; the buffers must hold `len` elements.
 */
enum ArbStatus arb_quadmap_maximality(const struct ArbQuadMap *map,
                                      uintptr_t depth,
                                      uint8_t *status,
                                      uint64_t *witness,
                                      uintptr_t len);

/**
 * Exact ℓ-adic density as a reduced fraction.
 *
 * # Safety
 * `num` and `den` must be valid for writes.
 */
enum ArbStatus arb_closed_form_density(uint64_t ell, uint64_t *num, uint64_t *den);

/**
 * Monte Carlo estimate of the ℓ-adic integral with its standard error.
 *
 * # Safety
 * `estimate` must be valid for a write; `stderr` may be null.
 */
enum ArbStatus arb_kummer_integral_mc(uint64_t ell,
                                      uint32_t depth,
                                      uint64_t samples,
                                      uint64_t seed,
                                      double *estimate,
                                      double *stderr);

/**
 * # Safety
 * `coeffs` must point to five integers a1, a2, a3, a4, a6 and `out` be
 * valid for a pointer write.
 */
enum ArbStatus arb_curve_new(const int64_t *coeffs, struct ArbCurve **out);

/**
 * # Safety
 * `curve` must be null or a handle from this library not yet freed.
 */
void arb_curve_free(struct ArbCurve *curve);

/**
 * Counts primes p ≤ bound at which the point "x,y" has odd order mod p,
 * over the primes where the question is defined.
 *
 * # Safety
 * `curve` must be a live handle, `point` a NUL-terminated string, and
 * `hits`, `total` valid for writes.
 */
enum ArbStatus arb_curve_odd_order_density(const struct ArbCurve *curve,
                                           const char *point,
                                           uint64_t bound,
                                           uint64_t *hits,
                                           uint64_t *total);

/**
 * Haar-random automorphism of depth ≤ 32.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum ArbStatus arb_treeaut_haar(uintptr_t depth, uint64_t seed, struct ArbTreeAut **out);

/**
 * The adding machine truncated at `depth ≤ 32`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum ArbStatus arb_treeaut_adding_machine(uintptr_t depth, struct ArbTreeAut **out);

/**
 * σ∘τ as a new handle.
 *
 * # Safety
 * `sigma`, `tau` must be live handles and `out` valid for a pointer write.
 */
enum ArbStatus arb_treeaut_compose(const struct ArbTreeAut *sigma,
                                   const struct ArbTreeAut *tau,
                                   struct ArbTreeAut **out);

/**
 * Number of fixed leaves at the bottom level.
 *
 * # Safety
 * `aut` must be a live handle and `out` valid for a write.
 */
enum ArbStatus arb_treeaut_fixed_leaves(const struct ArbTreeAut *aut, uintptr_t *out);

/**
 * # Safety
 * `aut` must be null or a handle from this library not yet freed.
 */
void arb_treeaut_free(struct ArbTreeAut *aut);

/**
 * deg Φₙ for the tower of x² + t.
 */
int64_t arb_tower_phi_degree(uintptr_t n);

/**
 * Coefficients of Φₙ over F_p, constant term first. On entry `*len` is the
 * capacity of `coeffs`; on return it is deg Φₙ + 1, also when the buffer is
 * too small.
 *
 * # Safety
 * `coeffs` must hold `*len` elements and `len` be valid for reads and writes.
 */
enum ArbStatus arb_tower_phi(uint64_t p, uintptr_t n, uint64_t *coeffs, uintptr_t *len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARBOREAL_H */
