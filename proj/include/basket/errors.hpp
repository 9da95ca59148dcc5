#ifndef BASKET_ERRORS_HPP
#define BASKET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace basket {

// Machine-readable reason attached to every thrown error.
enum class ErrorCode {
  invalid_count,
  invalid_null_rate,
  invalid_weight,
  empty_table,
  duplicate_label,
  empty_subclass,
  parse_error,
  degenerate_denominator,
  singleton_basket,
  degenerate_fit,
  lattice_overflow,
  combinatorial_limit,
};

const char* to_string(ErrorCode code);

class BasketError : public std::runtime_error {
 public:
  BasketError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }
  // Process exit code used by the CLI for this error category.
  virtual int exit_code() const = 0;

 private:
  ErrorCode code_;
};

// Bad input data or files: malformed CSV/JSON, counts out of range, ...
class ValidationError : public BasketError {
 public:
  using BasketError::BasketError;
  int exit_code() const override { return 2; }
};

// Input was well-formed but the requested quantity does not exist:
// zero MH denominator, undefined likelihood, exact lattice blow-up, ...
class EstimationError : public BasketError {
 public:
  using BasketError::BasketError;
  int exit_code() const override { return 3; }
};

// Model enumeration would exceed the configured size cap.
class CombinatorialError : public BasketError {
 public:
  using BasketError::BasketError;
  int exit_code() const override { return 4; }
};

}  // namespace basket

#endif
