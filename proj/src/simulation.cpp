#include "basket/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "basket/errors.hpp"
#include "basket/estimators.hpp"
#include "basket/exact_test.hpp"
#include "basket/numerics.hpp"

namespace basket {

namespace {

using nlohmann::json;

constexpr int kChunk = 256;

std::vector<double> require_numbers(const json& j, const char* field, std::size_t len) {
    if (!j.contains(field) || !j[field].is_array()) {
        throw ValidationError(ErrorCode::parse_error,
                              std::string("scenario field '") + field +
                                  "' missing or not an array");
    }
    std::vector<double> out;
    for (const auto& v : j[field]) {
        if (!v.is_number()) {
            throw ValidationError(ErrorCode::parse_error,
                                  std::string("scenario field '") + field +
                                      "' must contain numbers only");
        }
        out.push_back(v.get<double>());
    }
    if (len != 0 && out.size() != len) {
        throw ValidationError(ErrorCode::parse_error,
                              std::string("scenario field '") + field + "' has " +
                                  std::to_string(out.size()) + " entries, expected " +
                                  std::to_string(len));
    }
    return out;
}

int resolve_workers(int workers, int jobs) {
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
        if (workers <= 0) workers = 1;
    }
    return std::max(1, std::min(workers, jobs));
}

// Runs chunk bodies across workers; chunk c covers replicates
// [c*kChunk, min(reps, (c+1)*kChunk)).
template <typename Body>
void run_chunked(int reps, int workers, Body&& body) {
    const int chunks = (reps + kChunk - 1) / kChunk;
    workers = resolve_workers(workers, chunks);
    if (workers <= 1) {
        for (int c = 0; c < chunks; ++c) {
            body(c, c * kChunk, std::min(reps, (c + 1) * kChunk));
        }
        return;
    }
    std::atomic<int> next{0};
    auto drain = [&] {
        for (;;) {
            int c = next.fetch_add(1);
            if (c >= chunks) return;
            body(c, c * kChunk, std::min(reps, (c + 1) * kChunk));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
    for (std::thread& th : pool) th.join();
}

}  // namespace

ScenarioSpec parse_scenario(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(ErrorCode::parse_error,
                              origin + ": invalid scenario JSON: " + e.what());
    }
    ScenarioSpec spec;
    if (!j.contains("label") || !j["label"].is_string()) {
        throw ValidationError(ErrorCode::parse_error,
                              origin + ": scenario field 'label' missing");
    }
    spec.label = j["label"].get<std::string>();
    std::string study = j.value("study", std::string("estimation"));
    if (study == "estimation") {
        spec.study = StudyKind::estimation;
    } else if (study == "identification") {
        spec.study = StudyKind::identification;
    } else {
        throw ValidationError(ErrorCode::parse_error,
                              origin + ": scenario field 'study' must be "
                                       "'estimation' or 'identification'");
    }

    std::vector<double> sizes = require_numbers(j, "n", 0);
    if (sizes.empty()) {
        throw ValidationError(ErrorCode::parse_error,
                              origin + ": scenario field 'n' must be non-empty");
    }
    for (double v : sizes) {
        if (v < 1 || v != std::floor(v)) {
            throw ValidationError(ErrorCode::parse_error,
                                  origin + ": scenario field 'n' must hold "
                                           "positive integers");
        }
        spec.sizes.push_back(static_cast<int>(v));
    }
    const std::size_t K = spec.sizes.size();
    spec.pi0 = require_numbers(j, "pi0", K);
    for (double p : spec.pi0) {
        if (!(p > 0.0) || !(p < 1.0)) {
            throw ValidationError(ErrorCode::invalid_null_rate,
                                  origin + ": scenario field 'pi0' must lie in (0,1)");
        }
    }

    const int given = j.contains("rates") + j.contains("rd") + j.contains("rr");
    if (given != 1) {
        throw ValidationError(ErrorCode::parse_error,
                              origin + ": scenario needs exactly one of "
                                       "'rates', 'rd', 'rr'");
    }
    if (j.contains("rates")) {
        spec.true_rates = require_numbers(j, "rates", K);
    } else if (j.contains("rd")) {
        std::vector<double> rd = require_numbers(j, "rd", K);
        for (std::size_t k = 0; k < K; ++k) spec.true_rates.push_back(spec.pi0[k] + rd[k]);
    } else {
        std::vector<double> rr = require_numbers(j, "rr", K);
        for (std::size_t k = 0; k < K; ++k) spec.true_rates.push_back(spec.pi0[k] * rr[k]);
    }
    for (double p : spec.true_rates) {
        if (!(p > 0.0) || !(p < 1.0)) {
            throw ValidationError(ErrorCode::invalid_null_rate,
                                  origin + ": implied true rates must lie in (0,1)");
        }
    }

    spec.replicates = j.value("replicates", 2000);
    if (spec.replicates < 1) {
        throw ValidationError(ErrorCode::parse_error,
                              origin + ": scenario field 'replicates' must be positive");
    }
    spec.seed = j.value("seed", kDefaultSeed);
    if (j.contains("strategy")) {
        spec.strategy = parse_strategy(j["strategy"].get<std::string>());
    }
    spec.min_subclass_patients = j.value("min_patients", 10);
    spec.ci_alpha = j.value("alpha", 0.05);
    spec.test_level = j.value("test_level", 0.025);
    if (!(spec.ci_alpha > 0.0 && spec.ci_alpha < 1.0) ||
        !(spec.test_level > 0.0 && spec.test_level < 1.0)) {
        throw ValidationError(ErrorCode::parse_error,
                              origin + ": 'alpha' and 'test_level' must lie in (0,1)");
    }
    spec.note = j.value("note", std::string());
    return spec;
}

ScenarioSpec load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError(ErrorCode::parse_error,
                              "cannot open scenario file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

BasketTable scenario_table(const ScenarioSpec& spec) {
    BasketTable table;
    for (int k = 0; k < spec.size(); ++k) {
        table.baskets.push_back(BasketRecord{std::to_string(k + 1), 0, spec.sizes[k],
                                             spec.pi0[k], std::nullopt});
    }
    return validate_table(table);
}

BasketTable generate_dataset(const ScenarioSpec& spec, int replicate_index) {
    Rng rng = Rng::substream(spec.seed, static_cast<std::uint64_t>(replicate_index));
    BasketTable table = scenario_table(spec);
    for (int k = 0; k < spec.size(); ++k) {
        table.baskets[static_cast<std::size_t>(k)].y =
            rng.binomial(spec.sizes[k], spec.true_rates[k]);
    }
    return table;
}

namespace {

struct EstimationPartial {
    double sum_point[3] = {0, 0, 0};
    int cover[3] = {0, 0, 0};
    int reject_asym[3] = {0, 0, 0};
    int reject_exact[3] = {0, 0, 0};
    int degenerate[3] = {0, 0, 0};
};

}  // namespace

EstimationMetrics run_estimation_study(const ScenarioSpec& spec, int workers) {
    const auto started = std::chrono::steady_clock::now();
    const BasketTable base = scenario_table(spec);

    EstimationMetrics out;
    out.spec = spec;
    out.null_scenario = true;
    for (int k = 0; k < spec.size(); ++k) {
        if (std::abs(spec.true_rates[static_cast<std::size_t>(k)] -
                     spec.pi0[static_cast<std::size_t>(k)]) > 1e-12) {
            out.null_scenario = false;
        }
    }

    const EffectScale scales[3] = {EffectScale::rd(), EffectScale::rr(),
                                   EffectScale::iwrr()};
    const char* names[3] = {"MH-RD", "MH-RR", "MH-iwRR"};
    const double limit_rd = misspecification_limit(base, spec.true_rates, scales[0]);
    const double limit_iwrr = misspecification_limit(base, spec.true_rates, scales[2]);
    // The reference value per row: the sample-size weighted limit on the
    // row's scale (the ratio rows share the weighted average risk ratio).
    const double true_value[3] = {limit_rd, limit_iwrr, limit_iwrr};
    const double null_value[3] = {0.0, 1.0, 1.0};
    const double z = num::normal_quantile(1.0 - spec.test_level);

    // The exact test references one fixed null law per weighting; resolved
    // once, then each replicate only needs its statistic looked up.
    const std::vector<double> unit(static_cast<std::size_t>(spec.size()), 1.0);
    const std::vector<double> iw = resolve_weights(base, EffectScale::iwrr());
    NullDistribution dist_unit;
    NullDistribution dist_iw;
    if (out.null_scenario) {
        dist_unit = null_distribution(base, unit, {});
        dist_iw = null_distribution(base, iw, {});
    }

    const int reps = spec.replicates;
    const int chunks = (reps + kChunk - 1) / kChunk;
    std::vector<EstimationPartial> partials(static_cast<std::size_t>(chunks));

    run_chunked(reps, workers, [&](int chunk, int lo, int hi) {
        EstimationPartial& part = partials[static_cast<std::size_t>(chunk)];
        for (int r = lo; r < hi; ++r) {
            BasketTable table = generate_dataset(spec, r);
            for (int e = 0; e < 3; ++e) {
                double point, var;
                try {
                    point = mh_estimate(table, scales[e]);
                    var = mh_variance(table, scales[e], point);
                } catch (const EstimationError&) {
                    ++part.degenerate[e];
                    continue;
                }
                part.sum_point[e] += point;
                auto [lo_ci, hi_ci] = wald_ci(point, var, spec.ci_alpha);
                if (lo_ci <= true_value[e] && true_value[e] <= hi_ci) ++part.cover[e];
                if (point - null_value[e] > z * std::sqrt(var)) ++part.reject_asym[e];
            }
            if (out.null_scenario) {
                double t_unit = test_statistic(table, unit);
                double t_iw = test_statistic(table, iw);
                bool rej_unit = p_value(dist_unit, t_unit) <= spec.test_level;
                bool rej_iw = p_value(dist_iw, t_iw) <= spec.test_level;
                if (rej_unit) {
                    ++part.reject_exact[0];
                    ++part.reject_exact[1];
                }
                if (rej_iw) ++part.reject_exact[2];
            }
        }
    });

    for (int e = 0; e < 3; ++e) {
        EstimatorSummary row;
        row.name = names[e];
        row.true_value = true_value[e];
        double sum = 0.0;
        long long cover = 0, rej_a = 0, rej_e = 0, degen = 0;
        for (const EstimationPartial& part : partials) {
            sum += part.sum_point[e];
            cover += part.cover[e];
            rej_a += part.reject_asym[e];
            rej_e += part.reject_exact[e];
            degen += part.degenerate[e];
        }
        const double used = static_cast<double>(reps) - static_cast<double>(degen);
        row.mean = used > 0 ? sum / used : 0.0;
        row.coverage_pct = used > 0 ? 100.0 * static_cast<double>(cover) / used : 0.0;
        if (out.null_scenario) {
            row.size_asym_pct = used > 0 ? 100.0 * static_cast<double>(rej_a) / used : 0.0;
            row.size_exact_pct = 100.0 * static_cast<double>(rej_e) / reps;
        }
        row.degenerate = static_cast<int>(degen);
        out.estimators.push_back(std::move(row));
    }
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

namespace {

struct IdentificationPartial {
    std::vector<double> sum_fit;
    std::vector<double> sum_sqerr;
    std::vector<int> reject;
    int degenerate = 0;
};

}  // namespace

IdentificationMetrics run_identification_study(const ScenarioSpec& spec, int workers) {
    const auto started = std::chrono::steady_clock::now();
    const BasketTable base = scenario_table(spec);
    const int K = spec.size();

    EnumerationOptions eopts;
    eopts.strategy = spec.strategy;
    eopts.min_subclass_patients = spec.min_subclass_patients;
    const std::vector<Partition> candidates =
        enumerate_models(K, eopts, base);
    if (candidates.empty()) {
        throw CombinatorialError(ErrorCode::combinatorial_limit,
                                 "strategy leaves no candidate models");
    }
    const EffectScale scale = EffectScale::rd();

    const int reps = spec.replicates;
    const int chunks = (reps + kChunk - 1) / kChunk;
    std::vector<IdentificationPartial> partials(static_cast<std::size_t>(chunks));
    for (IdentificationPartial& p : partials) {
        p.sum_fit.assign(static_cast<std::size_t>(K), 0.0);
        p.sum_sqerr.assign(static_cast<std::size_t>(K), 0.0);
        p.reject.assign(static_cast<std::size_t>(K), 0);
    }

    run_chunked(reps, workers, [&](int chunk, int lo, int hi) {
        IdentificationPartial& part = partials[static_cast<std::size_t>(chunk)];
        for (int r = lo; r < hi; ++r) {
            BasketTable table = generate_dataset(spec, r);
            bool have_best = false;
            GicResult best;
            try {
                for (const Partition& p : candidates) {
                    GicResult fit = model_gic(table, p, scale, spec.ci_alpha);
                    if (!have_best || fit.gic < best.gic) {
                        best = std::move(fit);
                        have_best = true;
                    }
                }
            } catch (const EstimationError&) {
                ++part.degenerate;
                continue;
            }
            for (const SubclassFit& sub : best.subclasses) {
                const bool rejected = sub.estimate.ci_low > 0.0;
                for (int k : sub.members) {
                    const auto ku = static_cast<std::size_t>(k);
                    const double fitted = spec.pi0[ku] + sub.estimate.point;
                    const double err = fitted - spec.true_rates[ku];
                    part.sum_fit[ku] += fitted;
                    part.sum_sqerr[ku] += err * err;
                    if (rejected) ++part.reject[ku];
                }
            }
        }
    });

    IdentificationMetrics out;
    out.spec = spec;
    std::vector<double> sum_fit(static_cast<std::size_t>(K), 0.0);
    std::vector<double> sum_sqerr(static_cast<std::size_t>(K), 0.0);
    std::vector<long long> reject(static_cast<std::size_t>(K), 0);
    long long degen = 0;
    for (const IdentificationPartial& part : partials) {
        for (int k = 0; k < K; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            sum_fit[ku] += part.sum_fit[ku];
            sum_sqerr[ku] += part.sum_sqerr[ku];
            reject[ku] += part.reject[ku];
        }
        degen += part.degenerate;
    }
    out.degenerate = static_cast<int>(degen);
    const double used = static_cast<double>(reps) - static_cast<double>(degen);
    for (int k = 0; k < K; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        BasketIdentification row;
        if (used > 0) {
            row.mean_estimate = sum_fit[ku] / used;
            row.bias100 = 100.0 * (row.mean_estimate - spec.true_rates[ku]);
            row.mse100 = 100.0 * sum_sqerr[ku] / used;
            row.reject_pct = 100.0 * static_cast<double>(reject[ku]) / used;
        }
        out.baskets.push_back(row);
    }
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

}  // namespace basket
