#ifndef BASKET_SIMULATION_HPP
#define BASKET_SIMULATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "basket/gic.hpp"
#include "basket/rng.hpp"
#include "basket/types.hpp"

namespace basket {

enum class StudyKind { estimation, identification };

// One simulation scenario: generative rates per basket plus run settings.
struct ScenarioSpec {
    std::string label;
    StudyKind study = StudyKind::estimation;
    std::vector<int> sizes;
    std::vector<double> pi0;
    std::vector<double> true_rates;    // resolved from rates / rd / rr input
    int replicates = 2000;
    std::uint64_t seed = kDefaultSeed;
    Strategy strategy = Strategy::two_subclass;  // identification studies
    int min_subclass_patients = 10;
    double ci_alpha = 0.05;            // two-sided CI level
    double test_level = 0.025;         // one-sided test level
    std::string note;

    int size() const { return static_cast<int>(sizes.size()); }
};

// Reads a scenario from a JSON file: label, study, n, pi0, and exactly one
// of rates / rd / rr; optional replicates, seed, strategy, min_patients,
// alpha, test_level, note.
ScenarioSpec load_scenario(const std::string& path);
ScenarioSpec parse_scenario(const std::string& text, const std::string& origin);

// Table skeleton with the scenario's sizes and null rates (y = 0).
BasketTable scenario_table(const ScenarioSpec& spec);

// Replicate dataset: y_k ~ Binomial(n_k, pi_k) on the (seed, replicate)
// substream. Deterministic in both arguments.
BasketTable generate_dataset(const ScenarioSpec& spec, int replicate_index);

struct EstimatorSummary {
    std::string name;          // MH-RD, MH-RR, MH-iwRR
    double true_value = 0.0;   // large-sample limit used for bias / coverage
    double mean = 0.0;
    double coverage_pct = 0.0;
    // One-sided empirical rejection rates at test_level; meaningful as type I
    // error only for null scenarios and reported only there.
    double size_asym_pct = -1.0;   // negative = not reported
    double size_exact_pct = -1.0;
    int degenerate = 0;            // replicates where this row failed
};

struct EstimationMetrics {
    ScenarioSpec spec;
    bool null_scenario = false;
    std::vector<EstimatorSummary> estimators;
    double wall_seconds = 0.0;
};

struct BasketIdentification {
    double mean_estimate = 0.0;  // mean fitted response rate
    double bias100 = 0.0;        // 100 * (mean fitted - true rate)
    double mse100 = 0.0;         // 100 * mean squared error of fitted rate
    double reject_pct = 0.0;     // subclass CI lower bound > 0
};

struct IdentificationMetrics {
    ScenarioSpec spec;
    std::vector<BasketIdentification> baskets;
    int degenerate = 0;
    double wall_seconds = 0.0;
};

// Replicates run in fixed 256-replicate chunks merged in chunk order, so
// results are bit-identical for any worker count (workers <= 0: hardware).
EstimationMetrics run_estimation_study(const ScenarioSpec& spec, int workers = 0);
IdentificationMetrics run_identification_study(const ScenarioSpec& spec, int workers = 0);

}  // namespace basket

#endif
