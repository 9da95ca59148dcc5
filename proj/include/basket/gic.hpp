#ifndef BASKET_GIC_HPP
#define BASKET_GIC_HPP

#include <vector>

#include "basket/estimators.hpp"
#include "basket/types.hpp"

namespace basket {

enum class Strategy { two_subclass, all_subclasses, non_sparse };

const char* strategy_name(Strategy s);
Strategy parse_strategy(const std::string& text);

struct EnumerationOptions {
    Strategy strategy = Strategy::two_subclass;
    int min_subclass_patients = 10;  // strict lower bound for non_sparse
    int max_baskets = 12;            // guard on the Bell-number explosion
};

struct SubclassFit {
    std::vector<int> members;  // zero-based indices into the parent table
    EffectEstimate estimate;
    double loglik = 0.0;
    double bias = 0.0;
    double gic = 0.0;
};

struct GicResult {
    Partition partition;  // canonical form
    double gic = 0.0;
    double loglik = 0.0;
    double bias = 0.0;
    std::vector<SubclassFit> subclasses;  // ascending point estimate
    bool near_optimal = false;            // set by rank_models
};

struct GicRanking {
    std::vector<GicResult> models;  // ascending gic, ties by partition order
    Strategy strategy = Strategy::two_subclass;
    double near_optimal_window = 1.0;
};

// Common-effect fit of a table treated as a single subclass.
SubclassFit subclass_gic(const BasketTable& slice, EffectScale scale,
                         double alpha = 0.05);

// Score one partition: per-subclass fits plus the additive total.
GicResult model_gic(const BasketTable& table, const Partition& partition,
                    EffectScale scale, double alpha = 0.05);

// Candidate partitions in deterministic canonical order.
std::vector<Partition> enumerate_models(int K, const EnumerationOptions& opts,
                                        const BasketTable& table);

GicRanking rank_models(const BasketTable& table, EffectScale scale,
                       const EnumerationOptions& opts, double alpha = 0.05,
                       double near_optimal_window = 1.0);

}  // namespace basket

#endif
