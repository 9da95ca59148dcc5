#ifndef BASKET_DATASET_HPP
#define BASKET_DATASET_HPP

#include <iosfwd>
#include <string>

#include "basket/types.hpp"

namespace basket {

// CSV dataset format, header required:
//   label,y,n,pi0[,weight]
// '#'-prefixed lines and blank lines are ignored. Parse errors carry the
// offending line number. The returned table is validated.
BasketTable read_table_csv(std::istream& in, const std::string& origin = "<csv>");
BasketTable read_table_csv_file(const std::string& path);

// JSON equivalent: {"baskets": [{"label":..., "y":..., "n":..., "pi0":...,
// "weight": optional}, ...]}
BasketTable read_table_json(const std::string& text, const std::string& origin = "<json>");
BasketTable read_table_json_file(const std::string& path);

// Reads by file extension: .json -> JSON, anything else -> CSV.
BasketTable read_table_file(const std::string& path);

std::string write_table_csv(const BasketTable& table);
std::string write_table_json(const BasketTable& table);

}  // namespace basket

#endif
