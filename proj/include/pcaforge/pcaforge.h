/*
 * pcaforge C API.
 *
 * Every fallible call returns a pf_status; on failure pf_last_error() holds a
 * human-readable message for the calling thread. Handles are opaque and are
 * released with their matching *_free function. Strings returned through
 * `char**` out-parameters are owned by the caller and released with
 * pf_string_free().
 */
#ifndef PCAFORGE_H
#define PCAFORGE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PCAFORGE_BUILDING)
#    define PF_API __declspec(dllexport)
#  else
#    define PF_API __declspec(dllimport)
#  endif
#else
#  define PF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pf_status {
  PF_OK = 0,
  PF_ERR_STRENGTH_TOO_SMALL = 1,
  PF_ERR_ALPHABET_TOO_SMALL = 2,
  PF_ERR_M_OUT_OF_RANGE = 3,
  PF_ERR_EPSILON_OUT_OF_RANGE = 4,
  PF_ERR_OVERFLOW = 5,
  PF_ERR_SYMBOL_OUT_OF_RANGE = 6,
  PF_ERR_RANK_OUT_OF_RANGE = 7,
  PF_ERR_COLUMN_OUT_OF_RANGE = 8,
  PF_ERR_UNSORTED_COLUMN_SET = 9,
  PF_ERR_R_OUT_OF_RANGE = 10,
  PF_ERR_K_TOO_SMALL_FOR_LLL = 11,
  PF_ERR_DOMAIN = 12,
  PF_ERR_EPSILON_ZERO = 13,
  PF_ERR_NOT_PRIME_POWER = 14,
  PF_ERR_ORDER_TOO_LARGE = 15,
  PF_ERR_S_OUT_OF_RANGE = 16,
  PF_ERR_M_CONDITION_VIOLATED = 17,
  PF_ERR_R_NON_POSITIVE = 18,
  PF_ERR_EMPTY_RANGE = 19,
  PF_ERR_CAPACITY_EXCEEDED = 20,
  PF_ERR_ITERATION_CAP = 21,
  PF_ERR_M_NOT_FULL = 22,
  PF_ERR_IO = 23,
  PF_ERR_PARSE = 24,
  PF_ERR_DIMENSION_MISMATCH = 25,
  PF_ERR_INVALID_ARGUMENT = 26,
  PF_ERR_INTERNAL = 99
} pf_status;

typedef struct pf_array pf_array;
typedef struct pf_report pf_report;

typedef struct pf_params {
  int t;
  int k;
  int v;
  uint64_t m;
  double epsilon;
  uint64_t seed;
} pf_params;

typedef struct pf_bound {
  double real_bound;
  uint64_t n_rows;
  char source[32];
} pf_bound;

typedef enum pf_formula {
  PF_FORMULA_UNION = 0,
  PF_FORMULA_LLL = 1,
  PF_FORMULA_APCA = 2,
  PF_FORMULA_APCA_ALGORITHM = 3,
  PF_FORMULA_APCA_CYCLIC = 4,
  PF_FORMULA_APCA_FROBENIUS = 5,
  PF_FORMULA_PCA_CYCLIC = 6,
  PF_FORMULA_PCA_CYCLIC_WITH_T = 7,
  PF_FORMULA_CONCAT = 8
} pf_formula;

typedef enum pf_axis { PF_AXIS_M = 0, PF_AXIS_K = 1 } pf_axis;

typedef enum pf_algorithm {
  PF_ALG_MOSER_TARDOS = 0,
  PF_ALG_APCA = 1,
  PF_ALG_CYCLIC = 2,
  PF_ALG_FROBENIUS = 3,
  PF_ALG_CONCAT = 4,
  PF_ALG_DERANDOMIZED = 5
} pf_algorithm;

typedef struct pf_verify_result {
  uint64_t tset_count;
  uint32_t min_count;
  uint64_t defect_count;    /* t-sets with fewer than m tuples */
  uint64_t allowed_defects; /* floor(eps * C(k,t)) */
  int pca_ok;
  int apca_ok;
  double completeness;      /* (q,t)-completeness for the requested q */
  int has_witness;
  uint64_t witness_index;   /* lexicographic index of the first defective t-set */
  uint32_t witness_count;
  uint64_t witness_missing; /* v^t - witness_count */
} pf_verify_result;

PF_API const char* pf_status_name(pf_status status);
PF_API const char* pf_last_error(void);
PF_API void pf_string_free(char* text);

PF_API pf_status pf_validate(const pf_params* params);
PF_API pf_status pf_tuple_rank(const uint16_t* tuple, int t, int v, uint64_t* out);
PF_API pf_status pf_tuple_unrank(uint64_t rank, int t, int v, uint16_t* out);

/* Arrays. Cells are row-major, 0-based symbols. */
PF_API pf_status pf_array_create(size_t rows, size_t cols, int v, const uint16_t* cells,
                                 pf_array** out);
PF_API void pf_array_free(pf_array* array);
PF_API size_t pf_array_rows(const pf_array* array);
PF_API size_t pf_array_cols(const pf_array* array);
PF_API int pf_array_v(const pf_array* array);
PF_API pf_status pf_array_get_cells(const pf_array* array, uint16_t* out, size_t capacity);
PF_API pf_status pf_array_read(const char* path, pf_array** out);
PF_API pf_status pf_array_write(const pf_array* array, const char* path, int base);
PF_API pf_status pf_array_format(const pf_array* array, int base, char** out_text);

/* Bounds. */
PF_API pf_status pf_formula_parse(const char* name, pf_formula* out);
PF_API const char* pf_formula_label(pf_formula formula);
PF_API pf_status pf_bound_eval(pf_formula formula, const pf_params* params, pf_bound* out);
PF_API pf_status pf_bound_asymptotic(const pf_params* params, double* out);
PF_API pf_status pf_bound_reference(int t, int k, int v, double* upper, double* lower);
PF_API pf_status pf_log_binomial(uint64_t n, uint64_t r, double* out);
PF_API pf_status pf_sweep_csv(const pf_formula* formulas, size_t formula_count, pf_axis axis,
                              uint64_t first, uint64_t last, uint64_t step,
                              const pf_params* fixed, char** out_csv);

/* Coverage. Pass eps < 0 to skip the almost-covering check and q < 0 to
 * skip completeness (reported as -1). */
PF_API pf_status pf_verify(const pf_array* array, int t, uint64_t m, double eps, double q,
                           pf_verify_result* out);
PF_API pf_status pf_coverage_counts(const pf_array* array, int t, uint32_t* out,
                                    size_t capacity, size_t* written);
PF_API pf_status pf_tset_columns(int k, int t, uint64_t index, size_t* out);
PF_API pf_status pf_defects_csv(const pf_array* array, int t, uint64_t m, char** out_csv);

/* Construction. Caps of 0 select the defaults. */
PF_API pf_status pf_algorithm_parse(const char* name, pf_algorithm* out);
PF_API pf_status pf_build(pf_algorithm algorithm, const pf_params* params,
                          uint64_t resample_cap, uint64_t restart_cap, pf_report** out);
PF_API void pf_report_free(pf_report* report);
/* Borrowed; valid until the report is freed. */
PF_API const pf_array* pf_report_array(const pf_report* report);
PF_API uint64_t pf_report_iterations(const pf_report* report);
PF_API pf_status pf_report_json(const pf_report* report, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* PCAFORGE_H */
