#include "basket/types.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "basket/errors.hpp"

namespace basket {

int BasketTable::total_patients() const {
  int total = 0;
  for (const auto& b : baskets) total += b.n;
  return total;
}

BasketTable BasketTable::slice(const std::vector<int>& indices) const {
  BasketTable out;
  out.baskets.reserve(indices.size());
  for (int i : indices) out.baskets.push_back(baskets.at(i));
  return out;
}

const BasketTable& validate_table(const BasketTable& table) {
  if (table.baskets.empty())
    throw ValidationError(ErrorCode::empty_table, "table has no baskets");
  std::set<std::string> seen;
  for (const auto& b : table.baskets) {
    if (b.n < 1 || b.y < 0 || b.y > b.n)
      throw ValidationError(ErrorCode::invalid_count,
                            "basket '" + b.label + "': need 0 <= y <= n with n >= 1, got y=" +
                                std::to_string(b.y) + ", n=" + std::to_string(b.n));
    if (!(b.pi0 > 0.0) || !(b.pi0 < 1.0))
      throw ValidationError(ErrorCode::invalid_null_rate,
                            "basket '" + b.label + "': null rate must lie strictly in (0,1)");
    if (b.weight && !(*b.weight > 0.0))
      throw ValidationError(ErrorCode::invalid_weight,
                            "basket '" + b.label + "': weight must be positive");
    if (!seen.insert(b.label).second)
      throw ValidationError(ErrorCode::duplicate_label,
                            "duplicate basket label '" + b.label + "'");
  }
  return table;
}

std::string EffectScale::name() const {
  switch (kind) {
    case Scale::rd: return "rd";
    case Scale::rr: return policy == WeightPolicy::inverse_pi0 ? "iwrr" : "rr";
    case Scale::odds: return "or";
  }
  return "?";
}

EffectScale EffectScale::parse(const std::string& name) {
  if (name == "rd") return rd();
  if (name == "rr") return rr();
  if (name == "iwrr") return iwrr();
  if (name == "or") return odds();
  throw ValidationError(ErrorCode::parse_error, "unknown scale '" + name + "'");
}

std::vector<double> resolve_weights(const BasketTable& table, EffectScale scale) {
  std::vector<double> w(table.baskets.size(), 1.0);
  for (size_t i = 0; i < table.baskets.size(); ++i) {
    const auto& b = table.baskets[i];
    if (b.weight)
      w[i] = *b.weight;
    else if (scale.kind != Scale::rd && scale.policy == WeightPolicy::inverse_pi0)
      w[i] = 1.0 / b.pi0;
  }
  return w;
}

std::vector<int> Partition::members(int subclass_id) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (assignment[i] == subclass_id) out.push_back(i);
  return out;
}

Partition canonicalize_partition(const Partition& p) {
  if (p.assignment.empty())
    throw ValidationError(ErrorCode::empty_table, "partition covers no baskets");
  const int declared = p.n_subclasses > 0
                           ? p.n_subclasses
                           : *std::max_element(p.assignment.begin(), p.assignment.end());
  std::vector<int> relabel(declared + 1, 0);
  Partition out;
  out.assignment.resize(p.assignment.size());
  int next = 0;
  for (size_t i = 0; i < p.assignment.size(); ++i) {
    const int id = p.assignment[i];
    if (id < 1 || id > declared)
      throw ValidationError(ErrorCode::empty_subclass,
                            "subclass id " + std::to_string(id) + " outside 1.." +
                                std::to_string(declared));
    if (relabel[id] == 0) relabel[id] = ++next;
    out.assignment[i] = relabel[id];
  }
  if (next != declared)
    throw ValidationError(ErrorCode::empty_subclass,
                          "a declared subclass has no member baskets");
  out.n_subclasses = next;
  return out;
}

Partition single_class_partition(int k) {
  Partition p;
  p.assignment.assign(k, 1);
  p.n_subclasses = 1;
  return p;
}

std::string partition_to_string(const Partition& p) {
  std::ostringstream os;
  for (int l = 1; l <= p.n_subclasses; ++l) {
    if (l > 1) os << "/ ";
    bool first = true;
    for (int i : p.members(l)) {
      if (!first) os << ' ';
      os << (i + 1);
      first = false;
    }
  }
  return os.str();
}

Partition parse_partition(const std::string& text, int k) {
  Partition p;
  p.assignment.assign(k, 0);
  int subclass = 0;
  std::string chunk;
  std::istringstream blocks(text);
  while (std::getline(blocks, chunk, '/')) {
    ++subclass;
    std::istringstream is(chunk);
    int basket;
    bool any = false;
    while (is >> basket) {
      if (basket < 1 || basket > k)
        throw ValidationError(ErrorCode::parse_error,
                              "partition '" + text + "': basket " + std::to_string(basket) +
                                  " outside 1.." + std::to_string(k));
      if (p.assignment[basket - 1] != 0)
        throw ValidationError(ErrorCode::parse_error,
                              "partition '" + text + "': basket " + std::to_string(basket) +
                                  " listed twice");
      p.assignment[basket - 1] = subclass;
      any = true;
    }
    if (!any)
      throw ValidationError(ErrorCode::parse_error,
                            "partition '" + text + "': empty subclass");
  }
  for (int i = 0; i < k; ++i)
    if (p.assignment[i] == 0)
      throw ValidationError(ErrorCode::parse_error,
                            "partition '" + text + "': basket " + std::to_string(i + 1) +
                                " not assigned");
  p.n_subclasses = subclass;
  return canonicalize_partition(p);
}

}  // namespace basket
