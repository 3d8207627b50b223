/* C interface to libwdl: Wiles defects of congruence modules, local
 * deformation lattices and Tate-curve tame invariants.
 *
 * Every function returns a wdl_status. On failure, wdl_last_error() returns
 * a message for the calling thread, valid until the next call on that
 * thread. Objects are opaque handles released with their _free function;
 * strings returned through char** are released with wdl_string_free. */
#ifndef WDL_WDL_H
#define WDL_WDL_H

#include <stddef.h>
#include <stdint.h>

#if defined(WDL_BUILDING_LIBRARY)
#define WDL_API __attribute__((visibility("default")))
#else
#define WDL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wdl_status {
  WDL_OK = 0,
  WDL_ERR_INVALID_ARGUMENT = 1,
  WDL_ERR_NOT_PRIME = 2,
  WDL_ERR_INADMISSIBLE = 3,
  WDL_ERR_PRECONDITION = 4,
  WDL_ERR_INFINITE_LENGTH = 5,
  WDL_ERR_PARSE = 6,
  WDL_ERR_IO = 7,
  WDL_ERR_DATA = 8,
  WDL_ERR_INTERNAL = 9
} wdl_status;

WDL_API const char* wdl_version(void);
WDL_API const char* wdl_last_error(void);
WDL_API const char* wdl_status_name(wdl_status status);
WDL_API void wdl_string_free(char* s);

/* ---- arithmetic ---- */

/* v_p(n) for a decimal integer n; *is_infinite is set for n = 0. */
WDL_API wdl_status wdl_vp(uint64_t p, const char* n, uint64_t* value, int* is_infinite);

/* ---- algebras and modules ---- */

typedef struct wdl_algebra wdl_algebra;
typedef struct wdl_module wdl_module;

typedef struct wdl_defect_report {
  uint64_t phi_length;
  uint64_t psi_length;
  uint64_t lambda_rank;
  int64_t defect_num; /* defect = defect_num / defect_den, in lowest terms */
  int64_t defect_den;
  int generic_rank_exceeds_lambda_rank;
} wdl_defect_report;

WDL_API wdl_status wdl_algebra_from_json(const char* json, wdl_algebra** out);
WDL_API void wdl_algebra_free(wdl_algebra* a);
WDL_API wdl_status wdl_algebra_num_augmentations(const wdl_algebra* a, size_t* out);
/* Augmentation indices are 0-based. */
WDL_API wdl_status wdl_algebra_cotangent_length(const wdl_algebra* a, size_t i, uint64_t* out);
WDL_API wdl_status wdl_algebra_congruence_length(const wdl_algebra* a, size_t i, uint64_t* out);
/* Subalgebra generated by the annihilator generators, one per augmentation. */
WDL_API wdl_status wdl_algebra_remark_subalgebra(const wdl_algebra* a, wdl_algebra** out);

WDL_API wdl_status wdl_module_from_json(const wdl_algebra* a, const char* json, wdl_module** out);
WDL_API wdl_status wdl_module_regular(const wdl_algebra* a, wdl_module** out);
WDL_API void wdl_module_free(wdl_module* m);
WDL_API wdl_status wdl_module_congruence_length(const wdl_module* m, size_t i, uint64_t* length,
                                                uint64_t* lambda_rank);
WDL_API wdl_status wdl_wiles_defect(const wdl_algebra* a, const wdl_module* m, size_t i,
                                    wdl_defect_report* out);

/* ---- local deformation lattices ---- */

typedef enum wdl_lattice_pair {
  WDL_FRAMED_UNIPOTENT = 0,
  WDL_UNIPOTENT_STEINBERG = 1,
  WDL_FRAMED_STEINBERG = 2
} wdl_lattice_pair;

typedef struct wdl_localdef_lengths {
  uint64_t m;
  uint64_t n;
  uint64_t closed_form[3]; /* indexed by wdl_lattice_pair */
  uint64_t lattice[3];
  int steinberg_case_one;
} wdl_localdef_lengths;

/* s and t are decimal integers. with_lattice = 0 skips the lattice route. */
WDL_API wdl_status wdl_localdef_lengths_compute(uint64_t q, uint64_t p, const char* s, const char* t,
                                                int with_lattice, wdl_localdef_lengths* out);

/* ---- curves ---- */

typedef struct wdl_curve wdl_curve;
typedef struct wdl_curve_db wdl_curve_db;

typedef enum wdl_curve_format { WDL_FORMAT_CREMONA = 0, WDL_FORMAT_SIMPLE = 1 } wdl_curve_format;

typedef struct wdl_tame_invariants {
  uint64_t q;
  uint64_t p;
  uint64_t vq_tate;
  uint32_t t_q, m_q, u_q, k_q, n_q;
  uint32_t n_q_via_log;
  uint64_t unit_part;
  int split;
} wdl_tame_invariants;

/* "[a1,a2,a3,a4,a6]" */
WDL_API wdl_status wdl_curve_from_ainvs(const char* ainvs, const char* label, wdl_curve** out);
WDL_API void wdl_curve_free(wdl_curve* c);
/* JSON object: label, a-invariants, minimal model, c4, c6, discriminant, j,
 * semistable conductor and reduction at each bad prime. */
WDL_API wdl_status wdl_curve_describe(const wdl_curve* c, char** json);
WDL_API wdl_status wdl_curve_tame_invariants(const wdl_curve* c, uint64_t q, uint64_t p,
                                             wdl_tame_invariants* out);
/* *ell = 0 when undetermined up to bound. */
WDL_API wdl_status wdl_curve_irreducibility_certificate(const wdl_curve* c, uint64_t p, uint64_t bound,
                                                        uint64_t* ell);
/* Lowered conductor as a decimal string; dropped primes as a comma list. */
WDL_API wdl_status wdl_curve_lowered_conductor(const wdl_curve* c, uint64_t p, char** n_lowered,
                                               char** dropped);
/* Sum of 2 n_q over the comma-separated prime list qs, plus applicability. */
WDL_API wdl_status wdl_curve_defect_for_q(const wdl_curve* c, const char* qs, uint64_t p, int64_t* defect,
                                          int* applicable);

WDL_API wdl_status wdl_curve_db_open(const char* path, wdl_curve_format format, int skip_bad,
                                     wdl_curve_db** out);
WDL_API void wdl_curve_db_free(wdl_curve_db* db);
WDL_API size_t wdl_curve_db_size(const wdl_curve_db* db);
WDL_API size_t wdl_curve_db_issue_count(const wdl_curve_db* db);
/* *message is owned by db. */
WDL_API wdl_status wdl_curve_db_issue(const wdl_curve_db* db, size_t i, size_t* line, const char** message);
/* New curve handle for the record with the exact label. */
WDL_API wdl_status wdl_curve_db_find(const wdl_curve_db* db, const char* label, wdl_curve** out);

/* ---- scan ---- */

typedef struct wdl_scan_result wdl_scan_result;

typedef struct wdl_scan_options {
  uint64_t min_conductor;
  uint64_t max_conductor; /* 0: unbounded */
  const uint64_t* primes;
  size_t num_primes;
  uint32_t min_lowered_prime_divisors;
  int nonzero_only;
  uint64_t certificate_bound;
  uint32_t jobs;
} wdl_scan_options;

typedef enum wdl_report_format {
  WDL_REPORT_CSV = 0,
  WDL_REPORT_JSON = 1,
  WDL_REPORT_SUMMARY = 2
} wdl_report_format;

/* Fills the defaults: primes 3,5,7,11, two lowered prime divisors. */
WDL_API void wdl_scan_options_default(wdl_scan_options* opts);
WDL_API wdl_status wdl_scan_run(const wdl_curve_db* db, const wdl_scan_options* opts, wdl_scan_result** out);
WDL_API void wdl_scan_result_free(wdl_scan_result* r);
WDL_API size_t wdl_scan_result_row_count(const wdl_scan_result* r);
WDL_API size_t wdl_scan_result_curves_in_range(const wdl_scan_result* r);
WDL_API size_t wdl_scan_result_skipped_count(const wdl_scan_result* r);
/* Strings owned by the result. */
WDL_API wdl_status wdl_scan_result_skipped(const wdl_scan_result* r, size_t i, const char** label,
                                           const char** reason);
WDL_API size_t wdl_scan_result_undetermined_count(const wdl_scan_result* r);
WDL_API wdl_status wdl_scan_result_undetermined(const wdl_scan_result* r, size_t i, const char** label,
                                                uint64_t* p);
WDL_API wdl_status wdl_scan_result_render(const wdl_scan_result* r, wdl_report_format format, char** out);

#ifdef __cplusplus
}
#endif

#endif /* WDL_WDL_H */
