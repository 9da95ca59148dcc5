#ifndef BASKET_REPORT_HPP
#define BASKET_REPORT_HPP

#include <string>
#include <vector>

#include "basket/exact_test.hpp"
#include "basket/gic.hpp"
#include "basket/gof.hpp"
#include "basket/simulation.hpp"
#include "basket/types.hpp"

namespace basket {

// Display rounding: rates and effects to 3 decimals, p-values to 4.
// The JSON renderers keep full precision.
std::string fmt_rate(double x);
std::string fmt_pvalue(double x);
std::string fmt_pct(double x);

struct BasketRow {
    std::string label;
    int y = 0;
    int n = 0;
    double rate = 0.0;
    double cp_low = 0.0;
    double cp_high = 0.0;
    double rd = 0.0;
    double rr = 0.0;
};

struct AnalysisReport {
    std::vector<BasketRow> rows;
    std::vector<EffectEstimate> summaries;  // MH-RD, MH-iwRR, optional extra
    ExactTestResult test_unit;              // weights all one
    ExactTestResult test_iw;                // weights 1/pi0
    GofResult gof;
    bool gof_available = false;
    std::string gof_note;
    EffectScale requested;
    double alpha = 0.05;
};

AnalysisReport build_analysis(const BasketTable& table, EffectScale requested,
                              double alpha, const ExactOptions& test_opts,
                              bool add_one = false);

std::string render_text(const AnalysisReport& report);
std::string render_json(const AnalysisReport& report);
std::string render_csv(const AnalysisReport& report);

// top = 0 keeps every model; otherwise the first `top` ranked models.
std::string render_text(const GicRanking& ranking, int top);
std::string render_json(const GicRanking& ranking, int top);
std::string render_csv(const GicRanking& ranking, int top);

std::string render_text(const EstimationMetrics& metrics);
std::string render_json(const EstimationMetrics& metrics);
std::string render_csv(const EstimationMetrics& metrics);

std::string render_text(const IdentificationMetrics& metrics);
std::string render_json(const IdentificationMetrics& metrics);
std::string render_csv(const IdentificationMetrics& metrics);

}  // namespace basket

#endif
