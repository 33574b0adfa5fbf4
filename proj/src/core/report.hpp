#ifndef CUBESUM_REPORT_HPP
#define CUBESUM_REPORT_HPP

#include <string>

namespace cubesum {

// Entry point used by the C API and (indirectly) the CLI: execute a JSON
// request {"command": ..., "args": {...}} and produce a VerificationReport.
// status: 0 = all checks pass, 1 = a mathematical gate failed, 2 = usage or
// domain error.
struct RunResult {
  int status;
  std::string json;
};

RunResult run_command(const std::string& request_json);

extern const char* const version_string;

} // namespace cubesum

#endif
