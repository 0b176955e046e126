/* orchsim - deterministic simulator of a GPU-backed batch + serving stack.
 *
 * C interface to the simulator core. All objects are opaque handles owned by
 * the library; every function that can fail returns an orchsim_status, and
 * orchsim_last_error() describes the most recent failure on the calling
 * thread. Returned strings stay valid while the handle they came from lives.
 */
#ifndef ORCHSIM_H
#define ORCHSIM_H

#include <stddef.h>

#if defined(_WIN32)
#define ORCHSIM_API __declspec(dllexport)
#else
#define ORCHSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum orchsim_status {
    ORCHSIM_OK = 0,
    /* one or more scenario assertions failed (the runs themselves succeeded) */
    ORCHSIM_ERROR_ASSERTION = 1,
    /* invalid or inconsistent configuration */
    ORCHSIM_ERROR_CONFIG = 2,
    ORCHSIM_ERROR_IO = 3,
    ORCHSIM_ERROR_INVALID_ARGUMENT = 4,
    ORCHSIM_ERROR_INTERNAL = 5,
} orchsim_status;

typedef struct orchsim_scenario orchsim_scenario;
typedef struct orchsim_result orchsim_result;

ORCHSIM_API const char* orchsim_version(void);

/* Message for the last failing call on this thread; never NULL. */
ORCHSIM_API const char* orchsim_last_error(void);

/* --- preset registry ----------------------------------------------------- */

ORCHSIM_API size_t orchsim_preset_count(void);
ORCHSIM_API const char* orchsim_preset_name(size_t index);
ORCHSIM_API const char* orchsim_preset_description(size_t index);

/* --- scenarios ----------------------------------------------------------- */

ORCHSIM_API orchsim_status orchsim_scenario_from_preset(const char* name,
                                                        orchsim_scenario** out);
ORCHSIM_API orchsim_status orchsim_scenario_from_file(const char* path,
                                                      orchsim_scenario** out);
ORCHSIM_API const char* orchsim_scenario_name(const orchsim_scenario* scenario);
/* Canonical resolved form; reparses to an identical scenario. */
ORCHSIM_API const char* orchsim_scenario_json(const orchsim_scenario* scenario);
ORCHSIM_API orchsim_status orchsim_scenario_set_seeds(orchsim_scenario* scenario,
                                                      const long long* seeds, size_t count);
ORCHSIM_API orchsim_status orchsim_scenario_load_calibration(orchsim_scenario* scenario,
                                                             const char* path);
ORCHSIM_API orchsim_status orchsim_scenario_set_dispatch_log(orchsim_scenario* scenario,
                                                             int enabled);
ORCHSIM_API void orchsim_scenario_free(orchsim_scenario* scenario);

/* --- execution ----------------------------------------------------------- */

/* Runs every configured (arm, seed) combination. Returns ORCHSIM_OK even if
 * assertions fail; inspect the result for their outcome. */
ORCHSIM_API orchsim_status orchsim_run(const orchsim_scenario* scenario, orchsim_result** out);

ORCHSIM_API orchsim_status orchsim_result_write_reports(const orchsim_result* result,
                                                        const char* out_dir);
ORCHSIM_API size_t orchsim_result_assertion_count(const orchsim_result* result);
ORCHSIM_API const char* orchsim_result_assertion_text(const orchsim_result* result, size_t index);
ORCHSIM_API int orchsim_result_assertion_passed(const orchsim_result* result, size_t index);
ORCHSIM_API int orchsim_result_all_assertions_passed(const orchsim_result* result);
ORCHSIM_API void orchsim_result_free(orchsim_result* result);

#ifdef __cplusplus
}
#endif

#endif /* ORCHSIM_H */
