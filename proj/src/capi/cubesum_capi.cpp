#include "cubesum.h"

#include "core/report.hpp"

#include <new>
#include <string>

struct cubesum_result {
  int status;
  std::string json;
};

extern "C" {

int cubesum_run(const char* request_json, cubesum_result** out) {
  cubesum_result* r = new (std::nothrow) cubesum_result;
  if (!r) {
    if (out) *out = nullptr;
    return CUBESUM_USAGE_ERROR;
  }
  try {
    cubesum::RunResult rr = cubesum::run_command(request_json ? request_json : "");
    r->status = rr.status;
    r->json = std::move(rr.json);
  } catch (const std::exception& e) {
    r->status = CUBESUM_USAGE_ERROR;
    r->json = std::string("{\"error\":\"unhandled: ") + e.what() + "\"}";
  } catch (...) {
    r->status = CUBESUM_USAGE_ERROR;
    r->json = "{\"error\":\"unhandled exception\"}";
  }
  int status = r->status;
  if (out) *out = r;
  else delete r;
  return status;
}

const char* cubesum_result_json(const cubesum_result* r) {
  return r ? r->json.c_str() : "";
}

int cubesum_result_status(const cubesum_result* r) {
  return r ? r->status : CUBESUM_USAGE_ERROR;
}

void cubesum_result_free(cubesum_result* r) { delete r; }

const char* cubesum_version(void) { return cubesum::version_string; }

} // extern "C"
