#ifndef DWF_H
#define DWF_H

/* C interface to the doubly warped Finsler engine.
 *
 * Every call returns a dwf_status; on failure dwf_last_error() describes the
 * problem (thread-local, valid until the next call on the same thread).
 * Strings returned through char** are owned by the caller and released with
 * dwf_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DWF_API __declspec(dllexport)
#else
#define DWF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dwf_status {
  DWF_OK = 0,
  DWF_ERR_CAPABILITY = 1,
  DWF_ERR_DOMAIN = 2,
  DWF_ERR_SINGULAR = 3,
  DWF_ERR_SCHEMA = 4,
  DWF_ERR_SEMANTIC = 5,
  DWF_ERR_PRECONDITION = 6,
  DWF_ERR_ARGUMENT = 7,
  DWF_ERR_INTERNAL = 8
} dwf_status;

typedef enum dwf_format { DWF_FORMAT_JSON = 0, DWF_FORMAT_TEXT = 1 } dwf_format;

typedef struct dwf_spec dwf_spec;
typedef struct dwf_report dwf_report;

DWF_API const char* dwf_last_error(void);
DWF_API const char* dwf_status_name(dwf_status status);
DWF_API void dwf_string_free(char* s);

DWF_API size_t dwf_fixture_count(void);
/* NULL when i is out of range. */
DWF_API const char* dwf_fixture_name(size_t i);

DWF_API size_t dwf_suite_count(void);
DWF_API const char* dwf_suite_name(size_t i);

/* Run specifications. */
DWF_API dwf_status dwf_spec_parse(const char* json_text, dwf_spec** out);
DWF_API dwf_status dwf_spec_from_fixture(const char* name, uint64_t seed, int count, dwf_spec** out);
DWF_API dwf_status dwf_spec_set_seed(dwf_spec* spec, uint64_t seed);
DWF_API dwf_status dwf_spec_set_count(dwf_spec* spec, int count);
/* name is a suite or "suite/check". */
DWF_API dwf_status dwf_spec_set_tolerance(dwf_spec* spec, const char* name, double value);
/* Replaces the suite list; n == 0 selects no suites. */
DWF_API dwf_status dwf_spec_set_suites(dwf_spec* spec, const char* const* names, size_t n);
DWF_API dwf_status dwf_spec_to_json(const dwf_spec* spec, char** out);
DWF_API int dwf_spec_n1(const dwf_spec* spec);
DWF_API int dwf_spec_n2(const dwf_spec* spec);
DWF_API void dwf_spec_free(dwf_spec* spec);

/* Tensor evaluation at a point given in flat coordinates [x, u, y, v].
 * Components are written row-major over combined indices of size n1 + n2.
 * On DWF_OK *out_len holds the component count; if out_cap is too small the
 * call fails with DWF_ERR_ARGUMENT and *out_len still reports the need. */
DWF_API size_t dwf_quantity_count(void);
DWF_API const char* dwf_quantity_name(size_t i);
DWF_API dwf_status dwf_eval(const dwf_spec* spec, const char* quantity, const double* flat, size_t flat_len,
                            double* out, size_t out_cap, size_t* out_len, int* rank);

/* Flat coordinates of the spec's i-th sample point (length 2 (n1 + n2)). */
DWF_API dwf_status dwf_sample_point(const dwf_spec* spec, int i, double* flat, size_t flat_cap);

/* Verification runs and reports. */
DWF_API dwf_status dwf_run(const dwf_spec* spec, dwf_report** out);
DWF_API dwf_status dwf_report_parse(const char* json_text, dwf_report** out);
DWF_API dwf_status dwf_report_render(const dwf_report* report, dwf_format format, char** out);
/* The stable section of the json form, without the timestamp. */
DWF_API dwf_status dwf_report_diffable(const dwf_report* report, char** out);
/* 0 when every verdict is as expected, 1 otherwise. */
DWF_API int dwf_report_exit_code(const dwf_report* report);
DWF_API void dwf_report_free(dwf_report* report);

#ifdef __cplusplus
}
#endif

#endif
