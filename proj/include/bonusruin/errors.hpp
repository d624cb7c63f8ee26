#pragma once

#include <stdexcept>
#include <string>

namespace bonusruin {

/// Failure categories raised by the library. The CLI maps each onto an exit code.
enum class ErrorKind {
  invalid_parameter,
  degenerate_parameter,
  mgf_domain,
  no_adjustment_coefficient,
  domain_exhausted,
  bound_undefined,
  wrong_regime,
  constant_undefined,
  inconsistent_kappa,
  invalid_tilt,
  diverged_path,
  oracle_diverged,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace bonusruin
