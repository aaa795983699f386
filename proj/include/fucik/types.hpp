#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fucik {

/// Error taxonomy shared by the C++ core and the C boundary.
enum class errc {
  ok = 0,
  invalid_argument,
  degenerate_domain,
  domain_mismatch,
  degenerate_sign,
  fiber_infeasible,
  convergence_failure,
  out_of_range,
  infeasible_certificate,
  not_applicable,
  io_error,
  unsupported,
  internal,
};

const char* errc_name(errc code) noexcept;

class Error : public std::runtime_error {
public:
  Error(errc code, std::string what) : std::runtime_error(std::move(what)), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

} // namespace fucik
