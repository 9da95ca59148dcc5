#include "basket/report.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "basket/estimators.hpp"

namespace basket {

namespace {

using nlohmann::json;

std::string fixed(double x, int digits) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << x;
    std::string s = out.str();
    if (s == "-0." + std::string(static_cast<std::size_t>(digits), '0')) {
        s.erase(0, 1);  // avoid "-0.000"
    }
    return s;
}

std::string ci_text(double lo, double hi) {
    return "(" + fixed(lo, 3) + ", " + fixed(hi, 3) + ")";
}

json estimate_json(const EffectEstimate& e) {
    return json{{"scale", e.scale.name()},   {"point", e.point},
                {"variance", e.variance},    {"ci_low", e.ci_low},
                {"ci_high", e.ci_high},      {"alpha", e.alpha},
                {"n_effective", e.n_effective}};
}

json test_json(const ExactTestResult& t) {
    json j{{"statistic", t.statistic},
           {"p_value", t.p},
           {"method", t.method == TestMethod::exact ? "exact" : "mc"}};
    if (t.method == TestMethod::monte_carlo) {
        j["reps"] = t.reps;
        j["seed"] = t.seed;
    }
    return j;
}

std::string model_label(const Partition& p) { return partition_to_string(p); }

std::string subclass_label(const std::vector<int>& members) {
    std::string out;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i > 0) out += ' ';
        out += std::to_string(members[i] + 1);
    }
    return out;
}

int shown_models(const GicRanking& ranking, int top) {
    const int total = static_cast<int>(ranking.models.size());
    return top > 0 ? std::min(top, total) : total;
}

}  // namespace

std::string fmt_rate(double x) { return fixed(x, 3); }
std::string fmt_pvalue(double x) { return fixed(x, 4); }
std::string fmt_pct(double x) { return fixed(x, 1); }

AnalysisReport build_analysis(const BasketTable& table, EffectScale requested,
                              double alpha, const ExactOptions& test_opts,
                              bool add_one) {
    validate_table(table);
    AnalysisReport report;
    report.requested = requested;
    report.alpha = alpha;

    const std::vector<double> rd = basket_effects(table, EffectScale::rd());
    const std::vector<double> rr = basket_effects(table, EffectScale::rr());
    for (int k = 0; k < table.size(); ++k) {
        const BasketRecord& b = table.baskets[static_cast<std::size_t>(k)];
        BasketRow row;
        row.label = b.label;
        row.y = b.y;
        row.n = b.n;
        row.rate = static_cast<double>(b.y) / b.n;
        auto [lo, hi] = clopper_pearson(b.y, b.n, alpha);
        row.cp_low = lo;
        row.cp_high = hi;
        row.rd = rd[static_cast<std::size_t>(k)];
        row.rr = rr[static_cast<std::size_t>(k)];
        report.rows.push_back(std::move(row));
    }

    report.summaries.push_back(mh_effect(table, EffectScale::rd(), alpha));
    report.summaries.push_back(mh_effect(table, EffectScale::iwrr(), alpha));
    if (requested.name() != "rd" && requested.name() != "iwrr") {
        report.summaries.push_back(mh_effect(table, requested, alpha));
    }

    const std::vector<double> unit(table.baskets.size(), 1.0);
    report.test_unit = run_exact_test(table, unit, test_opts, add_one);
    report.test_iw = run_exact_test(
        table, resolve_weights(table, EffectScale::iwrr()), test_opts, add_one);

    if (table.size() >= 2) {
        report.gof = gof_test(table, requested);
        report.gof_available = true;
    } else {
        report.gof_note = "needs at least two baskets";
    }
    return report;
}

std::string render_text(const AnalysisReport& report) {
    std::ostringstream out;
    std::size_t label_w = 6;
    for (const BasketRow& r : report.rows) label_w = std::max(label_w, r.label.size());

    out << std::left << std::setw(static_cast<int>(label_w) + 2) << "basket"
        << std::right << std::setw(5) << "y" << std::setw(5) << "n" << std::setw(8)
        << "rate" << std::setw(18) << "exact CI" << std::setw(9) << "RD"
        << std::setw(9) << "RR" << '\n';
    for (const BasketRow& r : report.rows) {
        out << std::left << std::setw(static_cast<int>(label_w) + 2) << r.label
            << std::right << std::setw(5) << r.y << std::setw(5) << r.n
            << std::setw(8) << fmt_rate(r.rate) << std::setw(18)
            << ci_text(r.cp_low, r.cp_high) << std::setw(9) << fmt_rate(r.rd)
            << std::setw(9) << fmt_rate(r.rr) << '\n';
    }
    out << '\n';
    for (const EffectEstimate& e : report.summaries) {
        out << "MH-" << (e.scale.name() == "rd"     ? "RD"
                         : e.scale.name() == "rr"   ? "RR"
                         : e.scale.name() == "iwrr" ? "iwRR"
                                                    : "OR")
            << ": " << fmt_rate(e.point) << ' ' << ci_text(e.ci_low, e.ci_high)
            << '\n';
    }
    out << '\n';
    auto describe = [&](const char* name, const ExactTestResult& t) {
        out << "exact test " << name << ": T = " << fmt_rate(t.statistic)
            << ", p = " << fmt_pvalue(t.p);
        if (t.method == TestMethod::monte_carlo) {
            out << " (monte carlo, reps " << t.reps << ", seed " << t.seed << ")";
        }
        out << '\n';
    };
    describe("(w = 1)  ", report.test_unit);
    describe("(w = 1/pi0)", report.test_iw);
    if (report.gof_available) {
        out << "goodness of fit (" << report.requested.name()
            << "): Z2 = " << fmt_rate(report.gof.statistic)
            << ", df = " << report.gof.df
            << ", p = " << fmt_pvalue(report.gof.p_value) << '\n';
    } else {
        out << "goodness of fit: skipped (" << report.gof_note << ")\n";
    }
    return out.str();
}

std::string render_json(const AnalysisReport& report) {
    json rows = json::array();
    for (const BasketRow& r : report.rows) {
        rows.push_back(json{{"label", r.label},
                            {"y", r.y},
                            {"n", r.n},
                            {"rate", r.rate},
                            {"cp_low", r.cp_low},
                            {"cp_high", r.cp_high},
                            {"rd", r.rd},
                            {"rr", r.rr}});
    }
    json summaries = json::array();
    for (const EffectEstimate& e : report.summaries) summaries.push_back(estimate_json(e));
    json j{{"baskets", rows},
           {"mh", summaries},
           {"exact_test_unit", test_json(report.test_unit)},
           {"exact_test_iw", test_json(report.test_iw)},
           {"alpha", report.alpha},
           {"scale", report.requested.name()}};
    if (report.gof_available) {
        j["gof"] = json{{"statistic", report.gof.statistic},
                        {"df", report.gof.df},
                        {"p_value", report.gof.p_value},
                        {"fitted_rates", report.gof.fitted_rates}};
    }
    return j.dump(2) + "\n";
}

std::string render_csv(const AnalysisReport& report) {
    std::ostringstream out;
    out << "section,label,y,n,rate,ci_low,ci_high,rd,rr,p_value\n";
    out << std::setprecision(17);
    for (const BasketRow& r : report.rows) {
        out << "basket," << r.label << ',' << r.y << ',' << r.n << ',' << r.rate
            << ',' << r.cp_low << ',' << r.cp_high << ',' << r.rd << ',' << r.rr
            << ",\n";
    }
    for (const EffectEstimate& e : report.summaries) {
        out << "mh-" << e.scale.name() << ",,,," << e.point << ',' << e.ci_low << ','
            << e.ci_high << ",,,\n";
    }
    out << "exact_test_unit,,,," << report.test_unit.statistic << ",,,,,"
        << report.test_unit.p << '\n';
    out << "exact_test_iw,,,," << report.test_iw.statistic << ",,,,,"
        << report.test_iw.p << '\n';
    if (report.gof_available) {
        out << "gof,,,," << report.gof.statistic << ",,,,," << report.gof.p_value
            << '\n';
    }
    return out.str();
}

std::string render_text(const GicRanking& ranking, int top) {
    const int shown = shown_models(ranking, top);
    std::size_t sub_w = 8;
    for (int i = 0; i < shown; ++i) {
        for (const SubclassFit& sub :
             ranking.models[static_cast<std::size_t>(i)].subclasses) {
            sub_w = std::max(sub_w, subclass_label(sub.members).size());
        }
    }
    std::ostringstream out;
    out << "rank  GIC       model / subclass estimates (strategy "
        << strategy_name(ranking.strategy) << ", * = within "
        << fixed(ranking.near_optimal_window, 1) << " of best)\n";
    for (int i = 0; i < shown; ++i) {
        const GicResult& m = ranking.models[static_cast<std::size_t>(i)];
        out << std::left << std::setw(6) << (std::to_string(i + 1) +
                                             (m.near_optimal ? "*" : ""))
            << std::setw(10) << fixed(m.gic, 3) << model_label(m.partition) << '\n';
        for (const SubclassFit& sub : m.subclasses) {
            out << std::string(16, ' ') << std::left
                << std::setw(static_cast<int>(sub_w) + 2)
                << subclass_label(sub.members) << std::right << std::setw(7)
                << fmt_rate(sub.estimate.point) << ' '
                << ci_text(sub.estimate.ci_low, sub.estimate.ci_high) << '\n';
        }
    }
    if (shown < static_cast<int>(ranking.models.size())) {
        out << "... " << ranking.models.size() - static_cast<std::size_t>(shown)
            << " more models\n";
    }
    return out.str();
}

std::string render_json(const GicRanking& ranking, int top) {
    const int shown = shown_models(ranking, top);
    json models = json::array();
    for (int i = 0; i < shown; ++i) {
        const GicResult& m = ranking.models[static_cast<std::size_t>(i)];
        json subs = json::array();
        for (const SubclassFit& sub : m.subclasses) {
            json js{{"members", json::array()},
                    {"estimate", estimate_json(sub.estimate)},
                    {"loglik", sub.loglik},
                    {"bias", sub.bias},
                    {"gic", sub.gic}};
            for (int k : sub.members) js["members"].push_back(k + 1);
            subs.push_back(std::move(js));
        }
        models.push_back(json{{"rank", i + 1},
                              {"gic", m.gic},
                              {"loglik", m.loglik},
                              {"bias", m.bias},
                              {"model", model_label(m.partition)},
                              {"near_optimal", m.near_optimal},
                              {"subclasses", subs}});
    }
    json j{{"strategy", strategy_name(ranking.strategy)},
           {"near_optimal_window", ranking.near_optimal_window},
           {"total_models", ranking.models.size()},
           {"models", models}};
    return j.dump(2) + "\n";
}

std::string render_csv(const GicRanking& ranking, int top) {
    const int shown = shown_models(ranking, top);
    std::ostringstream out;
    out << "rank,gic,model,subclass,estimate,ci_low,ci_high,near_optimal\n";
    out << std::setprecision(17);
    for (int i = 0; i < shown; ++i) {
        const GicResult& m = ranking.models[static_cast<std::size_t>(i)];
        for (const SubclassFit& sub : m.subclasses) {
            out << i + 1 << ',' << m.gic << ",\"" << model_label(m.partition)
                << "\",\"" << subclass_label(sub.members) << "\","
                << sub.estimate.point << ',' << sub.estimate.ci_low << ','
                << sub.estimate.ci_high << ',' << (m.near_optimal ? 1 : 0) << '\n';
        }
    }
    return out.str();
}

namespace {

json manifest_json(const ScenarioSpec& spec, double wall_seconds) {
    return json{{"label", spec.label},
                {"study", spec.study == StudyKind::estimation ? "estimation"
                                                              : "identification"},
                {"replicates", spec.replicates},
                {"seed", spec.seed},
                {"strategy", strategy_name(spec.strategy)},
                {"wall_seconds", wall_seconds}};
}

}  // namespace

std::string render_text(const EstimationMetrics& metrics) {
    std::ostringstream out;
    out << "scenario " << metrics.spec.label << " (" << metrics.spec.replicates
        << " replicates, seed " << metrics.spec.seed << ")\n";
    out << std::left << std::setw(10) << "estimator" << std::right << std::setw(9)
        << "true" << std::setw(9) << "average" << std::setw(8) << "CP%";
    if (metrics.null_scenario) {
        out << std::setw(12) << "size-asym%" << std::setw(12) << "size-exact%";
    }
    out << '\n';
    for (const EstimatorSummary& e : metrics.estimators) {
        out << std::left << std::setw(10) << e.name << std::right << std::setw(9)
            << fmt_rate(e.true_value) << std::setw(9) << fmt_rate(e.mean)
            << std::setw(8) << fmt_pct(e.coverage_pct);
        if (metrics.null_scenario) {
            out << std::setw(12) << fmt_pct(e.size_asym_pct) << std::setw(12)
                << fmt_pct(e.size_exact_pct);
        }
        if (e.degenerate > 0) out << "  [" << e.degenerate << " degenerate]";
        out << '\n';
    }
    out << "wall time " << fixed(metrics.wall_seconds, 2) << " s\n";
    return out.str();
}

std::string render_json(const EstimationMetrics& metrics) {
    json rows = json::array();
    for (const EstimatorSummary& e : metrics.estimators) {
        json row{{"estimator", e.name},
                 {"true", e.true_value},
                 {"mean", e.mean},
                 {"coverage_pct", e.coverage_pct},
                 {"degenerate", e.degenerate}};
        if (metrics.null_scenario) {
            row["size_asym_pct"] = e.size_asym_pct;
            row["size_exact_pct"] = e.size_exact_pct;
        }
        rows.push_back(std::move(row));
    }
    json j{{"manifest", manifest_json(metrics.spec, metrics.wall_seconds)},
           {"null_scenario", metrics.null_scenario},
           {"estimators", rows}};
    return j.dump(2) + "\n";
}

std::string render_csv(const EstimationMetrics& metrics) {
    std::ostringstream out;
    out << "dataset,K,estimator,true,average,cp_pct,size_asym_pct,size_exact_pct,"
           "degenerate\n";
    out << std::setprecision(17);
    for (const EstimatorSummary& e : metrics.estimators) {
        out << metrics.spec.label << ',' << metrics.spec.size() << ',' << e.name
            << ',' << e.true_value << ',' << e.mean << ',' << e.coverage_pct << ',';
        if (metrics.null_scenario) {
            out << e.size_asym_pct << ',' << e.size_exact_pct;
        } else {
            out << ',';
        }
        out << ',' << e.degenerate << '\n';
    }
    return out.str();
}

std::string render_text(const IdentificationMetrics& metrics) {
    const int K = metrics.spec.size();
    std::ostringstream out;
    out << "scenario " << metrics.spec.label << " (strategy "
        << strategy_name(metrics.spec.strategy) << ", " << metrics.spec.replicates
        << " replicates, seed " << metrics.spec.seed << ")\n";
    out << std::left << std::setw(12) << "item";
    for (int k = 1; k <= K; ++k) out << std::right << std::setw(10) << k;
    out << '\n';
    auto row = [&](const char* item, auto fetch, auto fmt) {
        out << std::left << std::setw(12) << item;
        for (const BasketIdentification& b : metrics.baskets) {
            out << std::right << std::setw(10) << fmt(fetch(b));
        }
        out << '\n';
    };
    row("Estimate", [](const BasketIdentification& b) { return b.mean_estimate; },
        fmt_rate);
    row("100xBias", [](const BasketIdentification& b) { return b.bias100; }, fmt_rate);
    row("100xMSE", [](const BasketIdentification& b) { return b.mse100; }, fmt_rate);
    row("%Reject", [](const BasketIdentification& b) { return b.reject_pct; }, fmt_pct);
    if (metrics.degenerate > 0) {
        out << "degenerate replicates: " << metrics.degenerate << '\n';
    }
    out << "wall time " << fixed(metrics.wall_seconds, 2) << " s\n";
    return out.str();
}

std::string render_json(const IdentificationMetrics& metrics) {
    json baskets = json::array();
    for (const BasketIdentification& b : metrics.baskets) {
        baskets.push_back(json{{"estimate", b.mean_estimate},
                               {"bias100", b.bias100},
                               {"mse100", b.mse100},
                               {"reject_pct", b.reject_pct}});
    }
    json j{{"manifest", manifest_json(metrics.spec, metrics.wall_seconds)},
           {"degenerate", metrics.degenerate},
           {"baskets", baskets}};
    return j.dump(2) + "\n";
}

std::string render_csv(const IdentificationMetrics& metrics) {
    std::ostringstream out;
    out << "scenario,item";
    for (int k = 1; k <= metrics.spec.size(); ++k) out << ",basket" << k;
    out << '\n';
    out << std::setprecision(17);
    auto row = [&](const char* item, auto fetch) {
        out << metrics.spec.label << ',' << item;
        for (const BasketIdentification& b : metrics.baskets) out << ',' << fetch(b);
        out << '\n';
    };
    row("estimate", [](const BasketIdentification& b) { return b.mean_estimate; });
    row("bias100", [](const BasketIdentification& b) { return b.bias100; });
    row("mse100", [](const BasketIdentification& b) { return b.mse100; });
    row("reject_pct", [](const BasketIdentification& b) { return b.reject_pct; });
    return out.str();
}

}  // namespace basket
