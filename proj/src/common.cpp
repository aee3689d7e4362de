#include "peanut/common.hpp"

namespace peanut::diag {

namespace {
thread_local std::vector<std::string> warning_log;
}

void warn(std::string message) { warning_log.push_back(std::move(message)); }

std::vector<std::string> drain_warnings() {
  std::vector<std::string> out;
  out.swap(warning_log);
  return out;
}

bool has_warnings() { return !warning_log.empty(); }

}  // namespace peanut::diag
