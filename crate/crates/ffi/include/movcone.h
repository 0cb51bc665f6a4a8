#ifndef MOVCONE_H
#define MOVCONE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result of every fallible call. Codes 2 to 5 match the exit codes of the
// `movcone` binary.
typedef enum MovconeStatus {
  MOVCONE_STATUS_OK = 0,
  MOVCONE_STATUS_NULL_ARGUMENT = 1,
  // Unknown or unparsable case id, or a string that is not UTF-8.
  MOVCONE_STATUS_INVALID_INPUT = 2,
  MOVCONE_STATUS_NOT_CALABI_YAU = 3,
  // An exact computation had no admissible answer.
  MOVCONE_STATUS_ALGEBRA = 4,
  // A model, wall or cone failed verification.
  MOVCONE_STATUS_VERIFICATION = 5,
  // A value does not fit the C type it is returned in.
  MOVCONE_STATUS_OVERFLOW = 6,
  MOVCONE_STATUS_OUT_OF_RANGE = 7,
  MOVCONE_STATUS_PANIC = 8,
} MovconeStatus;

typedef enum MovconeSide {
  MOVCONE_SIDE_F = 0,
  MOVCONE_SIDE_E = 1,
} MovconeSide;

typedef enum MovconeWallKind {
  MOVCONE_WALL_KIND_DETERMINANTAL = 0,
  MOVCONE_WALL_KIND_TYPE_I = 1,
  MOVCONE_WALL_KIND_TYPE_II = 2,
  MOVCONE_WALL_KIND_TYPE_III = 3,
  MOVCONE_WALL_KIND_K3_FIBRATION = 4,
  MOVCONE_WALL_KIND_ELLIPTIC_FIBRATION = 5,
  MOVCONE_WALL_KIND_DOUBLE_COVER_SMALL = 6,
} MovconeWallKind;

// A Calabi-Yau pair from the built-in catalog.
typedef struct MovconeCase MovconeCase;

// A computed movable cone.
typedef struct MovconeCone MovconeCone;

// Cubic form (L^3, L^2.H, L.H^2, H^3), c2 pairings (c2.L, c2.H) and nodes.
typedef struct MovconeProfile {
  int64_t cubic[4];
  int64_t c2[2];
  uint64_t odp;
} MovconeProfile;

typedef struct MovconeHodge {
  int64_t h11;
  int64_t h21;
  int64_t euler;
} MovconeHodge;

// A wall lL + hH of the movable cone.
typedef struct MovconeWall {
  int64_t l;
  int64_t h;
  enum MovconeWallKind kind;
} MovconeWall;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *movcone_last_error(void);

// Library version as a static string.
const char *movcone_version(void);

// Parses a case id such as "P4/F=2,1,1,1/E=0,0,0,0" against the built-in catalog.
//
// # Safety
// `id` must be a nul-terminated string and `out` a valid pointer.
enum MovconeStatus movcone_case_new(const char *id, struct MovconeCase **out_case);

// # Safety
// `case` must come from `movcone_case_new` and not be freed twice. Null is ignored.
void movcone_case_free(struct MovconeCase *case_);

// Number of catalog cases.
uintptr_t movcone_catalog_len(void);

// Opens the catalog case at `index`, in listing order.
//
// # Safety
// `out` must be a valid pointer.
enum MovconeStatus movcone_catalog_case(uintptr_t index, struct MovconeCase **out_case);

// Canonical id of the case as a newly allocated string; release it with
// `movcone_string_free`.
//
// # Safety
// `case` and `out` must be valid pointers.
enum MovconeStatus movcone_case_id(const struct MovconeCase *case_, char **out_id);

// # Safety
// `case` and `out` must be valid pointers.
enum MovconeStatus movcone_case_profile(const struct MovconeCase *case_,
                                        enum MovconeSide side,
                                        struct MovconeProfile *out_profile);

// # Safety
// `case` and `out` must be valid pointers.
enum MovconeStatus movcone_case_hodge(const struct MovconeCase *case_,
                                      struct MovconeHodge *out_hodge);

// Builds the movable cone of a case.
//
// # Safety
// `case` and `out` must be valid pointers.
enum MovconeStatus movcone_cone_new(const struct MovconeCase *case_, struct MovconeCone **out_cone);

// # Safety
// `cone` must come from `movcone_cone_new` and not be freed twice. Null is ignored.
void movcone_cone_free(struct MovconeCone *cone);

// # Safety
// `cone` and `out` must be valid pointers.
enum MovconeStatus movcone_cone_is_finite(const struct MovconeCone *cone, bool *out_finite);

// Chambers of the cone, or of one fundamental domain when it is infinite.
//
// # Safety
// `cone` and `out` must be valid pointers.
enum MovconeStatus movcone_cone_chamber_count(const struct MovconeCone *cone, uintptr_t *out_count);

// Wall `index`, left to right; there is one more wall than chambers.
//
// # Safety
// `cone` and `out` must be valid pointers.
enum MovconeStatus movcone_cone_wall(const struct MovconeCone *cone,
                                     uintptr_t index,
                                     struct MovconeWall *out_wall);

// Row-major integer matrix of a named map, for example "generator" or
// "determinantal_flop". Columns are images of L and H.
//
// # Safety
// `cone` and `name` must be valid, and `out` must point at four int64_t.
enum MovconeStatus movcone_cone_map(const struct MovconeCone *cone,
                                    const char *name,
                                    int64_t *out_matrix);

// Verifies the cone with `depth` translates per side and returns the full
// report as JSON; release it with `movcone_string_free`.
//
// # Safety
// `cone` and `out` must be valid pointers.
enum MovconeStatus movcone_cone_json(const struct MovconeCone *cone,
                                     uint32_t depth,
                                     char **out_json);

// # Safety
// `s` must come from this library and not be freed twice. Null is ignored.
void movcone_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOVCONE_H */
