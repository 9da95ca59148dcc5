#ifndef BASKET_TYPES_HPP
#define BASKET_TYPES_HPP

#include <optional>
#include <string>
#include <vector>

namespace basket {

// One basket: responders y out of n patients against null response rate pi0.
// An explicit weight, when present, overrides the scale's weight policy.
struct BasketRecord {
  std::string label;
  int y = 0;
  int n = 0;
  double pi0 = 0.0;
  std::optional<double> weight;
};

struct BasketTable {
  std::vector<BasketRecord> baskets;

  int size() const { return static_cast<int>(baskets.size()); }
  int total_patients() const;
  // Sub-table keeping only the baskets at the given zero-based indices,
  // in the given order.
  BasketTable slice(const std::vector<int>& indices) const;
};

// Checks every table invariant and returns the table unchanged.
// Throws ValidationError otherwise.
const BasketTable& validate_table(const BasketTable& table);

enum class Scale { rd, rr, odds };

enum class WeightPolicy { one, inverse_pi0 };

// Effect scale plus the weight policy used to resolve per-basket weights.
// RD ignores weights entirely.
struct EffectScale {
  Scale kind = Scale::rd;
  WeightPolicy policy = WeightPolicy::one;

  static EffectScale rd() { return {Scale::rd, WeightPolicy::one}; }
  static EffectScale rr() { return {Scale::rr, WeightPolicy::one}; }
  static EffectScale iwrr() { return {Scale::rr, WeightPolicy::inverse_pi0}; }
  static EffectScale odds() { return {Scale::odds, WeightPolicy::one}; }

  // Short name used in reports and flags: rd, rr, iwrr, or.
  std::string name() const;
  static EffectScale parse(const std::string& name);
};

// Per-basket weights after applying the policy / explicit overrides.
std::vector<double> resolve_weights(const BasketTable& table, EffectScale scale);

struct EffectEstimate {
  EffectScale scale;
  double point = 0.0;
  double variance = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double alpha = 0.05;
  int n_effective = 0;
};

// Assignment of K baskets to subclasses 1..L. Canonical form numbers
// subclasses by first occurrence, so equal subclass sets compare equal.
struct Partition {
  std::vector<int> assignment;
  int n_subclasses = 0;

  int size() const { return static_cast<int>(assignment.size()); }
  std::vector<int> members(int subclass_id) const;  // zero-based basket indices
  bool operator==(const Partition& other) const {
    return assignment == other.assignment;
  }
};

// Relabels subclasses by first occurrence; throws ValidationError
// (empty_subclass) if a declared id in 1..L has no members.
Partition canonicalize_partition(const Partition& p);

Partition single_class_partition(int k);

// "1 2 6/ 3 4 5" <-> Partition; basket numbers are one-based positions.
std::string partition_to_string(const Partition& p);
Partition parse_partition(const std::string& text, int k);

}  // namespace basket

#endif
