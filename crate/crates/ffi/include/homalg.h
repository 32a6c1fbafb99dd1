#ifndef HOMALG_H
#define HOMALG_H

/* Generated with cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Which homological dimension to compute.
typedef enum HomalgDimKind {
  HOMALG_DIM_KIND_PROJECTIVE = 0,
  HOMALG_DIM_KIND_INJECTIVE = 1,
  HOMALG_DIM_KIND_FLAT = 2,
} HomalgDimKind;

typedef enum HomalgDimTag {
  HOMALG_DIM_TAG_FINITE = 0,
  // The dimension is at least `value`.
  HOMALG_DIM_TAG_EXCEEDS_CUTOFF = 1,
  // The object is acyclic.
  HOMALG_DIM_TAG_MINUS_INFINITY = 2,
} HomalgDimTag;

// Result code of every fallible call.
typedef enum HomalgStatus {
  HOMALG_STATUS_OK = 0,
  HOMALG_STATUS_NULL_ARGUMENT = 1,
  HOMALG_STATUS_INVALID_UTF8 = 2,
  HOMALG_STATUS_PARSE_ERROR = 3,
  // A certification window was exhausted; retry with a larger cutoff.
  HOMALG_STATUS_INCONCLUSIVE = 4,
  // The input violates an algebra, module or complex axiom.
  HOMALG_STATUS_INVALID_STRUCTURE = 5,
  // Any other library error.
  HOMALG_STATUS_ERROR = 6,
  HOMALG_STATUS_PANIC = 7,
} HomalgStatus;

typedef enum HomalgSuite {
  HOMALG_SUITE_DUALIZING = 0,
  HOMALG_SUITE_GORENSTEIN = 1,
  HOMALG_SUITE_LIFTING = 2,
  HOMALG_SUITE_BASS = 3,
} HomalgSuite;

typedef enum HomalgVerdict {
  HOMALG_VERDICT_VERIFIED = 0,
  HOMALG_VERDICT_INCONCLUSIVE = 1,
  HOMALG_VERDICT_VIOLATION = 2,
} HomalgVerdict;

// A finite-dimensional algebra with its structure data.
typedef struct HomalgAlgebra HomalgAlgebra;

// A non-positive DG-ring.
typedef struct HomalgDGRing HomalgDGRing;

// A certified dimension: `value` is the dimension or the cutoff it exceeds.
typedef struct HomalgDim {
  enum HomalgDimTag tag;
  int64_t value;
} HomalgDim;

// Library version as a static string.
const char *homalg_version(void);

// Message of the last failed call on this thread, empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *homalg_last_error(void);

// # Safety
// `s` is null or a string returned by this library that has not been freed.
void homalg_string_free(char *s);

// Reads an algebra or quiver document; quivers without a field are over ℚ.
//
// # Safety
// `json` is a NUL-terminated string and `out` is writable.
enum HomalgStatus homalg_algebra_from_json(const char *json, struct HomalgAlgebra **out);

// One of the bundled fixtures, such as `"a2-q"` or `"square-f5"`.
//
// # Safety
// `name` is a NUL-terminated string and `out` is writable.
enum HomalgStatus homalg_algebra_fixture(const char *name, struct HomalgAlgebra **out);

// # Safety
// `a` is null or a handle from this library that has not been freed.
void homalg_algebra_free(struct HomalgAlgebra *a);

// # Safety
// `a` is a live handle and `out` is writable.
enum HomalgStatus homalg_algebra_dim(const struct HomalgAlgebra *a, size_t *out);

// The algebra document; free the string with `homalg_string_free`.
//
// # Safety
// `a` is a live handle and `out` is writable.
enum HomalgStatus homalg_algebra_to_json(const struct HomalgAlgebra *a, char **out);

// Dimension of a named target (`regular`, `dual`, `simple:i`, `projective:i`,
// `injective:i`, optionally suffixed `@n`) or of a complex document.
//
// # Safety
// `a` is a live handle, `target` a NUL-terminated string and `out` writable.
enum HomalgStatus homalg_algebra_dim_of(const struct HomalgAlgebra *a,
                                        const char *target,
                                        enum HomalgDimKind kind,
                                        size_t cutoff,
                                        struct HomalgDim *out);

// Whether `DA` placed in degree `degree` is certified dualizing.
//
// # Safety
// `a` is a live handle and `out` is writable.
enum HomalgStatus homalg_da_is_dualizing(const struct HomalgAlgebra *a,
                                         int32_t degree,
                                         size_t cutoff,
                                         bool *out);

// Runs one theorem suite. When `report` is not null it receives the JSON
// report, to be freed with `homalg_string_free`.
//
// # Safety
// `a` is a live handle, `out` is writable and `report` is null or writable.
enum HomalgStatus homalg_verify(const struct HomalgAlgebra *a,
                                enum HomalgSuite suite,
                                size_t max_dim,
                                size_t cutoff,
                                enum HomalgVerdict *out,
                                char **report);

// `A ⋉ DA[-degree]`, with `DA` in the negative degree `degree`.
//
// # Safety
// `a` is a live handle and `out` is writable.
enum HomalgStatus homalg_trivial_extension(const struct HomalgAlgebra *a,
                                           int32_t degree,
                                           struct HomalgDGRing **out);

// Reads a DG-ring document.
//
// # Safety
// `json` is a NUL-terminated string and `out` is writable.
enum HomalgStatus homalg_dgring_from_json(const char *json, struct HomalgDGRing **out);

// # Safety
// `b` is null or a handle from this library that has not been freed.
void homalg_dgring_free(struct HomalgDGRing *b);

// Total dimension over the ground field.
//
// # Safety
// `b` is a live handle and `out` is writable.
enum HomalgStatus homalg_dgring_dim(const struct HomalgDGRing *b, size_t *out);

// `H⁰` of the DG-ring as a new algebra handle.
//
// # Safety
// `b` is a live handle and `out` is writable.
enum HomalgStatus homalg_dgring_h0(const struct HomalgDGRing *b, struct HomalgAlgebra **out);

// The DG-ring document; free the string with `homalg_string_free`.
//
// # Safety
// `b` is a live handle and `out` is writable.
enum HomalgStatus homalg_dgring_to_json(const struct HomalgDGRing *b, char **out);

// Dimension of a DG-module target (`regular`, `simple:i`, ... or a document).
//
// # Safety
// `b` is a live handle, `target` a NUL-terminated string and `out` writable.
enum HomalgStatus homalg_dgring_dim_of(const struct HomalgDGRing *b,
                                       const char *target,
                                       enum HomalgDimKind kind,
                                       size_t cutoff,
                                       struct HomalgDim *out);

#endif  /* HOMALG_H */
