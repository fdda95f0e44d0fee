#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hclab {

enum class ErrorKind {
  parameter,      // admissible-range violation
  input,          // non-finite or malformed input
  numeric,        // overflow, non-finite intermediate
  configuration,  // operation needs a grid/config property that is absent
  dimension,      // grid mismatch between operands
  range,          // index or size out of range
  degenerate,     // zero denominator, zero field
  precondition,   // documented precondition violated
  calibration,    // profile is not a solution shape
  fit,            // regression window unusable
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Soft diagnostics (tail dominance, reduced-accuracy kernels). Written to
// std::clog unless silenced; thread-safe.
void warn(std::string_view message);
void set_warnings_enabled(bool enabled);
bool warnings_enabled();

}  // namespace hclab
