#pragma once

#include <stdexcept>
#include <string>

namespace podinv {

enum class errc {
  invalid_argument,
  coefficient_violation,
  out_of_domain,
  incompatible_operands,
  solver_failure,
  numeric_failure,
  degenerate_spectrum,
  rank_deficiency,
  step_size_too_large,
  degenerate_iterate,
  io_error,
  asset_not_found,
  parse_error,
};

const char* to_string(errc code) noexcept;

/// Library error carrying a machine-checkable error code.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

namespace detail {
[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }
}  // namespace detail

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) detail::fail(code, what);
}

}  // namespace podinv
