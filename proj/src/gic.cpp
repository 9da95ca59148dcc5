#include "basket/gic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "basket/errors.hpp"
#include "basket/link.hpp"

namespace basket {

namespace {

constexpr double kRateFloor = 1e-12;

void append_all_partitions(std::vector<int>& assignment, int pos, int max_used,
                           std::vector<Partition>& out) {
    const int K = static_cast<int>(assignment.size());
    if (pos == K) {
        out.push_back(Partition{assignment, max_used});
        return;
    }
    for (int id = 1; id <= max_used + 1; ++id) {
        assignment[pos] = id;
        append_all_partitions(assignment, pos + 1, std::max(max_used, id), out);
    }
}

bool non_sparse_ok(const Partition& p, const BasketTable& table, int min_patients) {
    for (int id = 1; id <= p.n_subclasses; ++id) {
        int total = 0;
        for (int k : p.members(id)) total += table.baskets[k].n;
        if (total <= min_patients) return false;
    }
    return true;
}

}  // namespace

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::two_subclass: return "two";
        case Strategy::all_subclasses: return "all";
        case Strategy::non_sparse: return "nonsparse";
    }
    return "two";
}

Strategy parse_strategy(const std::string& text) {
    if (text == "two") return Strategy::two_subclass;
    if (text == "all") return Strategy::all_subclasses;
    if (text == "nonsparse") return Strategy::non_sparse;
    throw ValidationError(ErrorCode::parse_error,
                          "unknown strategy '" + text + "' (expected two, all, nonsparse)");
}

SubclassFit subclass_gic(const BasketTable& slice, EffectScale scale, double alpha) {
    SubclassFit fit;
    fit.estimate = mh_effect(slice, scale, alpha);
    const double point = fit.estimate.point;
    const MhComponents mc = mh_components(slice, scale);
    const double s_total = std::accumulate(mc.s.begin(), mc.s.end(), 0.0);

    double loglik = 0.0;
    double penalty = 0.0;
    for (int k = 0; k < slice.size(); ++k) {
        const BasketRecord& b = slice.baskets[k];
        const LinkFunction link{scale.kind, b.pi0};
        const double raw = link.h(point);
        const double h = std::clamp(raw, kRateFloor, 1.0 - kRateFloor);
        if (h != raw && b.y != 0 && b.y != b.n) {
            throw EstimationError(ErrorCode::degenerate_fit,
                                  "fitted rate for basket '" + b.label +
                                      "' degenerate while 0 < y < n");
        }
        // Conventions for boundary cells: 0*log(0) = 0 and 0*(1/h at 0) = 0.
        if (b.y > 0) loglik += b.y * std::log(h);
        if (b.y < b.n) loglik += (b.n - b.y) * std::log1p(-h);
        double score = 0.0;
        if (b.y > 0) score += b.y / h;
        if (b.y < b.n) score -= (b.n - b.y) / (1.0 - h);
        penalty += (mc.r[k] - point * mc.s[k]) * score;
    }
    fit.loglik = loglik;
    fit.bias = penalty / s_total;
    fit.gic = -loglik + fit.bias;
    fit.members.resize(static_cast<std::size_t>(slice.size()));
    std::iota(fit.members.begin(), fit.members.end(), 0);
    return fit;
}

GicResult model_gic(const BasketTable& table, const Partition& partition,
                    EffectScale scale, double alpha) {
    validate_table(table);
    if (partition.size() != table.size()) {
        throw ValidationError(ErrorCode::parse_error,
                              "partition covers " + std::to_string(partition.size()) +
                                  " baskets but the table has " +
                                  std::to_string(table.size()));
    }
    GicResult res;
    res.partition = canonicalize_partition(partition);
    for (int id = 1; id <= res.partition.n_subclasses; ++id) {
        std::vector<int> members = res.partition.members(id);
        SubclassFit fit = subclass_gic(table.slice(members), scale, alpha);
        fit.members = std::move(members);
        res.gic += fit.gic;
        res.loglik += fit.loglik;
        res.bias += fit.bias;
        res.subclasses.push_back(std::move(fit));
    }
    // Report order within a model: least effective subclass first.
    std::stable_sort(res.subclasses.begin(), res.subclasses.end(),
                     [](const SubclassFit& a, const SubclassFit& b) {
                         if (a.estimate.point != b.estimate.point) {
                             return a.estimate.point < b.estimate.point;
                         }
                         return a.members.front() < b.members.front();
                     });
    return res;
}

std::vector<Partition> enumerate_models(int K, const EnumerationOptions& opts,
                                        const BasketTable& table) {
    if (K < 1) {
        throw ValidationError(ErrorCode::empty_table,
                              "cannot enumerate models for an empty table");
    }
    if (K > opts.max_baskets) {
        throw CombinatorialError(
            ErrorCode::combinatorial_limit,
            "model enumeration supports at most " + std::to_string(opts.max_baskets) +
                " baskets (got " + std::to_string(K) + ")");
    }
    std::vector<Partition> out;
    if (opts.strategy == Strategy::two_subclass) {
        out.push_back(single_class_partition(K));
        // All assignments with basket 1 in subclass 1 and a non-empty rest.
        for (unsigned long mask = 1; mask < (1ul << (K - 1)); ++mask) {
            std::vector<int> assignment(static_cast<std::size_t>(K), 1);
            int classes = 1;
            for (int k = 1; k < K; ++k) {
                if (mask & (1ul << (k - 1))) {
                    assignment[static_cast<std::size_t>(k)] = 2;
                    classes = 2;
                }
            }
            out.push_back(Partition{std::move(assignment), classes});
        }
        std::sort(out.begin(), out.end(), [](const Partition& a, const Partition& b) {
            return a.assignment < b.assignment;
        });
        return out;
    }
    std::vector<int> assignment(static_cast<std::size_t>(K), 0);
    append_all_partitions(assignment, 0, 0, out);
    if (opts.strategy == Strategy::non_sparse) {
        validate_table(table);
        std::vector<Partition> kept;
        for (Partition& p : out) {
            if (non_sparse_ok(p, table, opts.min_subclass_patients)) {
                kept.push_back(std::move(p));
            }
        }
        out = std::move(kept);
    }
    return out;
}

GicRanking rank_models(const BasketTable& table, EffectScale scale,
                       const EnumerationOptions& opts, double alpha,
                       double near_optimal_window) {
    validate_table(table);
    std::vector<Partition> candidates = enumerate_models(table.size(), opts, table);
    GicRanking ranking;
    ranking.strategy = opts.strategy;
    ranking.near_optimal_window = near_optimal_window;
    ranking.models.reserve(candidates.size());
    for (const Partition& p : candidates) {
        ranking.models.push_back(model_gic(table, p, scale, alpha));
    }
    // Candidates arrive in canonical order; a stable sort keeps that order
    // as the tie-break.
    std::stable_sort(ranking.models.begin(), ranking.models.end(),
                     [](const GicResult& a, const GicResult& b) { return a.gic < b.gic; });
    if (!ranking.models.empty()) {
        const double best = ranking.models.front().gic;
        for (GicResult& m : ranking.models) {
            m.near_optimal = m.gic - best <= near_optimal_window;
        }
    }
    return ranking;
}

}  // namespace basket
