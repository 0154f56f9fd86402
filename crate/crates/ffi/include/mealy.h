#ifndef MEALY_H
#define MEALY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  MEALY_CLASS_ANY = 0,
  MEALY_CLASS_INVERTIBLE = 1,
  MEALY_CLASS_REVERSIBLE = 2,
  MEALY_CLASS_INV_REV = 3,
} MealyClass;

typedef enum {
  MEALY_STATUS_OK = 0,
  MEALY_STATUS_NULL_POINTER = 1,
  MEALY_STATUS_INVALID_UTF8 = 2,
  MEALY_STATUS_PARSE = 3,
  MEALY_STATUS_INVALID_MACHINE = 4,
  MEALY_STATUS_PRECONDITION = 5,
  MEALY_STATUS_BUDGET_EXCEEDED = 6,
  MEALY_STATUS_UNKNOWN_KEY = 7,
  MEALY_STATUS_INVALID_ARGUMENT = 8,
  MEALY_STATUS_PANIC = 9,
} MealyStatus;

typedef enum {
  MEALY_TORSION_CERTIFIED = 0,
  MEALY_TORSION_NOT_INVERTIBLE = 1,
  MEALY_TORSION_NOT_REVERSIBLE = 2,
  MEALY_TORSION_BIREVERSIBLE_COMPONENT = 3,
} MealyTorsion;

typedef enum {
  MEALY_VERDICT_FINITE = 0,
  MEALY_VERDICT_INFINITE_CERTIFIED = 1,
  MEALY_VERDICT_UNKNOWN = 2,
} MealyVerdict;

/**
 * A machine together with its name.
 */
typedef struct MealyHandle MealyHandle;

typedef struct {
  bool invertible;
  bool reversible;
  bool coreversible;
  bool bireversible;
} MealyFlags;

/**
 * Order of one element. `index`, `period` and `is_identity_power` are
 * meaningful only when `verdict` is `MEALY_VERDICT_FINITE`.
 */
typedef struct {
  MealyVerdict verdict;
  size_t index;
  size_t period;
  bool is_identity_power;
} MealyOrder;

/**
 * Finiteness of the generated semigroup. `cardinality` is meaningful only
 * when `verdict` is `MEALY_VERDICT_FINITE`.
 */
typedef struct {
  MealyVerdict verdict;
  size_t cardinality;
} MealyFiniteness;

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *mealy_last_error(void);

/**
 * Parses a machine in the `.mealy` text format.
 */
MealyStatus mealy_parse(const char *source, MealyHandle **out);

/**
 * Loads a catalog machine: `lamplighter`, `lamplighter-inverse` or `J`.
 */
MealyStatus mealy_catalog(const char *key, MealyHandle **out);

/**
 * Seeded random machine with `states` states and `letters` letters.
 */
MealyStatus mealy_random(size_t states,
                         size_t letters,
                         MealyClass class_,
                         uint64_t seed,
                         MealyHandle **out);

/**
 * Releases a handle. Null is ignored.
 */
void mealy_free(MealyHandle *h);

/**
 * Releases a string returned by this library. Null is ignored.
 */
void mealy_string_free(char *s);

/**
 * Number of states, or 0 for a null handle.
 */
size_t mealy_num_states(const MealyHandle *h);

/**
 * Number of letters, or 0 for a null handle.
 */
size_t mealy_num_letters(const MealyHandle *h);

/**
 * The machine in the `.mealy` text format.
 */
MealyStatus mealy_serialize(const MealyHandle *h, char **out);

MealyStatus mealy_classify(const MealyHandle *h, MealyFlags *out);

MealyStatus mealy_dual(const MealyHandle *h, MealyHandle **out);

MealyStatus mealy_inverse(const MealyHandle *h, MealyHandle **out);

MealyStatus mealy_product(const MealyHandle *a, const MealyHandle *b, MealyHandle **out);

MealyStatus mealy_disjoint_union(const MealyHandle *a, const MealyHandle *b, MealyHandle **out);

/**
 * Runs the state word `states` on the letter word `letters` (both
 * whitespace-separated identifiers). Writes the output letter word and the
 * final state word.
 */
MealyStatus mealy_run(const MealyHandle *h,
                      const char *states,
                      const char *letters,
                      char **out_letters,
                      char **out_states);

/**
 * Torsion-freeness certificate of the generated semigroup.
 */
MealyStatus mealy_certify_torsion_free(const MealyHandle *h, MealyTorsion *out);

/**
 * Order of the element induced by the state word `word`.
 */
MealyStatus mealy_order_probe(const MealyHandle *h,
                              const char *word,
                              size_t max_power,
                              size_t budget,
                              MealyOrder *out);

/**
 * Finiteness of the generated semigroup.
 */
MealyStatus mealy_finiteness_probe(const MealyHandle *h,
                                   size_t max_level,
                                   size_t budget,
                                   MealyFiniteness *out);

/**
 * Orbit tree to `depth` as Graphviz DOT. `truncated` may be null; when
 * given it is set to whether the budget stopped the expansion early.
 */
MealyStatus mealy_orbit_tree_dot(const MealyHandle *h,
                                 size_t depth,
                                 size_t budget,
                                 char **out,
                                 bool *truncated);

#endif  /* MEALY_H */
