#ifndef CUBESUM_H
#define CUBESUM_H

/* C API for the cubesum verification library.
 *
 * The library evaluates arithmetic identities attached to the cube-sum
 * curves x^3 + y^3 = n (local character tables, Hilbert symbols, modular
 * matrix identities, local period integrals, Heegner-point numerics, and a
 * 3-part BSD check) and returns structured JSON reports.
 *
 * Usage: build a JSON request {"command": "...", "args": {...}}, pass it to
 * cubesum_run, read the report with cubesum_result_json, free the handle.
 * All handles are opaque; all functions are thread-compatible (distinct
 * handles may be used from distinct threads).
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CUBESUM_API __declspec(dllexport)
#else
#define CUBESUM_API __attribute__((visibility("default")))
#endif

/* Opaque result handle. */
typedef struct cubesum_result cubesum_result;

/* Status codes, also used as process exit codes by the CLI. */
enum {
  CUBESUM_OK = 0,          /* all checks passed */
  CUBESUM_CHECK_FAILED = 1, /* a mathematical gate failed; report explains */
  CUBESUM_USAGE_ERROR = 2   /* bad command, flags, or input domain */
};

/* Run a command. request_json is a UTF-8 JSON object
 * {"command": <name>, "args": {...}}. On return *out (if out != NULL) holds
 * a result handle that must be freed with cubesum_result_free; the handle is
 * produced even on failure and carries the error report. The return value is
 * one of the status codes above. */
CUBESUM_API int cubesum_run(const char* request_json, cubesum_result** out);

/* JSON text of the report; owned by the handle, valid until free. */
CUBESUM_API const char* cubesum_result_json(const cubesum_result* r);

/* Status code the run produced. */
CUBESUM_API int cubesum_result_status(const cubesum_result* r);

CUBESUM_API void cubesum_result_free(cubesum_result* r);

CUBESUM_API const char* cubesum_version(void);

#ifdef __cplusplus
}
#endif

#endif /* CUBESUM_H */
