#ifndef GBZK_H
#define GBZK_H

#include <stddef.h>

#if defined(_WIN32)
#define GBZK_API __declspec(dllexport)
#else
#define GBZK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gbzk_status {
  GBZK_OK = 0,
  GBZK_ERR_CONFIG = 2,
  GBZK_ERR_BLOWUP = 3,
  GBZK_ERR_INVALID_ARGUMENT = 4,
  GBZK_ERR_FORMAT = 5,
  GBZK_ERR_IO = 6,
  GBZK_ERR_INTERNAL = 7
} gbzk_status;

typedef struct gbzk_report gbzk_report;
typedef struct gbzk_snapshot gbzk_snapshot;

GBZK_API const char* gbzk_version(void);

/* Message of the last failed call on this thread; empty after a success. */
GBZK_API const char* gbzk_last_error(void);

/* Worker count taken from GBZK_WORKERS. */
GBZK_API int gbzk_worker_count(void);

/* Each runner writes its files and hands back a report. GBZK_ERR_BLOWUP still
   produces a report (and files) describing the run up to the blow-up. */
GBZK_API gbzk_status gbzk_simulate(const char* config_path, gbzk_report** out);
GBZK_API gbzk_status gbzk_uc_compare(const char* config_a, const char* config_b, gbzk_report** out);
/* out_dir may be NULL: nothing is written. */
GBZK_API gbzk_status gbzk_stein_profile(const char* batch_path, const char* out_dir, gbzk_report** out);
GBZK_API gbzk_status gbzk_expansion_check(const char* spec_path, gbzk_report** out);
GBZK_API gbzk_status gbzk_norms(const char* snapshot_path, const char* weights_path, const char* out_dir,
                                gbzk_report** out);

GBZK_API void gbzk_report_free(gbzk_report* r);
GBZK_API const char* gbzk_report_summary(const gbzk_report* r);
GBZK_API size_t gbzk_report_artifact_count(const gbzk_report* r);
/* Artifact file name (without directory) and contents; NULL when i is out of range. */
GBZK_API const char* gbzk_report_artifact_name(const gbzk_report* r, size_t i);
GBZK_API const char* gbzk_report_artifact_text(const gbzk_report* r, size_t i, size_t* length);
/* Named numeric results ("blowup", "rows", "passed", ...); returns 0 when absent. */
GBZK_API int gbzk_report_has(const gbzk_report* r, const char* key);
GBZK_API double gbzk_report_value(const gbzk_report* r, const char* key);

GBZK_API gbzk_status gbzk_snapshot_read(const char* path, gbzk_snapshot** out);
GBZK_API void gbzk_snapshot_free(gbzk_snapshot* s);
GBZK_API gbzk_status gbzk_snapshot_info(const gbzk_snapshot* s, size_t* nx, size_t* ny, double* lx, double* ly,
                                        double* a, double* t);
/* nx * ny samples, y outer. */
GBZK_API const double* gbzk_snapshot_data(const gbzk_snapshot* s);

#ifdef __cplusplus
}
#endif

#endif
