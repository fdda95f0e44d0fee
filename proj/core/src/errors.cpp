#include "hclab/errors.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace hclab {

namespace {
std::atomic<bool> g_warnings{true};
std::mutex g_warn_mutex;
}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parameter: return "parameter error";
    case ErrorKind::input: return "input error";
    case ErrorKind::numeric: return "numeric error";
    case ErrorKind::configuration: return "configuration error";
    case ErrorKind::dimension: return "dimension error";
    case ErrorKind::range: return "range error";
    case ErrorKind::degenerate: return "degenerate input";
    case ErrorKind::precondition: return "precondition error";
    case ErrorKind::calibration: return "calibration failure";
    case ErrorKind::fit: return "fit error";
  }
  return "error";
}

void warn(std::string_view message) {
  if (!g_warnings.load(std::memory_order_relaxed)) return;
  std::lock_guard lock(g_warn_mutex);
  std::clog << "hclab: warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings.store(enabled); }

bool warnings_enabled() { return g_warnings.load(); }

}  // namespace hclab
