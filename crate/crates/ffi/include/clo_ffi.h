#ifndef CLO_FFI_H
#define CLO_FFI_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum CloStatus {
  CLO_STATUS_OK = 0,
  CLO_STATUS_NULL_POINTER = 1,
  CLO_STATUS_INVALID_UTF8 = 2,
  CLO_STATUS_INPUT = 3,
  CLO_STATUS_RANGE = 4,
  CLO_STATUS_SCALE_CAP = 5,
  CLO_STATUS_SCHEMA = 6,
  CLO_STATUS_CIRCUIT = 7,
  CLO_STATUS_MISSING_ORACLE = 8,
  CLO_STATUS_PRECONDITION = 9,
  CLO_STATUS_INTERNAL = 10,
  CLO_STATUS_IO = 11,
  CLO_STATUS_PANIC = 12,
} CloStatus;

// Opaque circuit bundle: a circuit and its rectangle family.
typedef struct CloBundle CloBundle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread; empty if none. The pointer
// stays valid until the next failing call on the same thread.
const char *clo_last_error(void);

// Library version as a static nul-terminated string.
const char *clo_version(void);

// Parses a bundle from JSON text with an embedded family.
//
// # Safety
// `json` must be a nul-terminated string; `out` must be writable.
enum CloStatus clo_bundle_from_json(const char *json, struct CloBundle **out);

// Builds a named construction (`single-oracle`, `triangle`, `trivial-dnf`,
// `lex`). `ell` is used only by `lex`; pass 0 otherwise.
//
// # Safety
// `name` must be a nul-terminated string; `out` must be writable.
enum CloStatus clo_bundle_construct(const char *name,
                                    uintptr_t n,
                                    uintptr_t k,
                                    uintptr_t ell,
                                    struct CloBundle **out);

// Releases a bundle. Null is ignored.
//
// # Safety
// `bundle` must come from this library and not be used afterwards.
void clo_bundle_free(struct CloBundle *bundle);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void clo_string_free(char *s);

// Writes `n` and `k` of the bundle.
//
// # Safety
// `bundle` must be a live handle; `n` and `k` must be writable.
enum CloStatus clo_bundle_params(const struct CloBundle *bundle, uintptr_t *n, uintptr_t *k);

// Circuit size: reachable gates plus distinct leaves.
//
// # Safety
// `bundle` must be a live handle; `out` must be writable.
enum CloStatus clo_bundle_size(const struct CloBundle *bundle, uintptr_t *out);

// Canonical JSON of the bundle; free with [`clo_string_free`].
//
// # Safety
// `bundle` must be a live handle; `out` must be writable.
enum CloStatus clo_bundle_to_json(const struct CloBundle *bundle, char **out);

// Checks the bundle on every clique and multipartite graph. `passed`
// receives 1 or 0. If `report_json` is non-null it receives the full
// report, to be freed with [`clo_string_free`].
//
// # Safety
// `bundle` must be a live handle; `passed` must be writable; `report_json`
// must be null or writable.
enum CloStatus clo_bundle_verify(const struct CloBundle *bundle,
                                 int32_t *passed,
                                 char **report_json);

// Exact locality of the bundle's rectangles as `"num/den"`; free with
// [`clo_string_free`].
//
// # Safety
// `bundle` must be a live handle; `out` must be writable.
enum CloStatus clo_bundle_locality_exact(const struct CloBundle *bundle, char **out);

// Monte-Carlo locality estimate and its 99% half-width. Deterministic for
// fixed `(samples, seed, workers)`.
//
// # Safety
// `bundle` must be a live handle; `estimate` and `half_width` must be writable.
enum CloStatus clo_bundle_locality_mc(const struct CloBundle *bundle,
                                      uint64_t samples,
                                      uint64_t seed,
                                      uintptr_t workers,
                                      double *estimate,
                                      double *half_width);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLO_FFI_H */
