#include "basket/errors.hpp"

namespace basket {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_count: return "invalid_count";
    case ErrorCode::invalid_null_rate: return "invalid_null_rate";
    case ErrorCode::invalid_weight: return "invalid_weight";
    case ErrorCode::empty_table: return "empty_table";
    case ErrorCode::duplicate_label: return "duplicate_label";
    case ErrorCode::empty_subclass: return "empty_subclass";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::degenerate_denominator: return "degenerate_denominator";
    case ErrorCode::singleton_basket: return "singleton_basket";
    case ErrorCode::degenerate_fit: return "degenerate_fit";
    case ErrorCode::lattice_overflow: return "lattice_overflow";
    case ErrorCode::combinatorial_limit: return "combinatorial_limit";
  }
  return "unknown";
}

}  // namespace basket
