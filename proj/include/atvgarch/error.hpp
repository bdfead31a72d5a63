#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace atvgarch {

enum class ErrorCode {
  invalid_argument,
  invalid_config,
  unsupported_order,
  invalid_moments,
  nonpositive_intercept,
  explosive_config,
  nonfinite_likelihood,
  degenerate_series,
  singular_matrix,
  excessive_discards,
  nonpositive_price,
  parse_error,
  io_error,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace atvgarch
