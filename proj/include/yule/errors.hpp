#pragma once

#include <stdexcept>
#include <string>

namespace yule {

/// Invalid parameter or precondition violation. Maps to CLI exit code 2.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical evaluation could not reach its certified tolerance.
/// Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  enum class Kind { non_convergence, precision_loss, overflow, pole };

  NumericalError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// A nonlinear birth process outgrew its finite rate table.
class RateTableExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

[[noreturn]] inline void fail_domain(const std::string& what) { throw DomainError(what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) fail_domain(what);
}

}  // namespace detail
}  // namespace yule
