// mhbasket: analysis of single-arm basket trials against per-basket null
// response rates. Subcommands: analyze, models, simulate, gof, test.
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "basket/dataset.hpp"
#include "basket/errors.hpp"
#include "basket/estimators.hpp"
#include "basket/exact_test.hpp"
#include "basket/gic.hpp"
#include "basket/gof.hpp"
#include "basket/report.hpp"
#include "basket/rng.hpp"
#include "basket/simulation.hpp"

namespace {

using namespace basket;

// Relative --out paths land in $MHBASKET_OUT_DIR when it is set.
std::string resolve_out(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    const char* dir = std::getenv("MHBASKET_OUT_DIR");
    if (dir == nullptr || *dir == '\0') return path;
    std::string full(dir);
    if (full.back() != '/') full += '/';
    return full + path;
}

void emit(const std::string& rendered, const std::string& out_path) {
    std::cout << rendered;
    if (out_path.empty()) return;
    const std::string full = resolve_out(out_path);
    std::ofstream out(full);
    if (!out) {
        throw ValidationError(ErrorCode::parse_error,
                              "cannot write output file '" + full + "'");
    }
    out << rendered;
}

struct CommonOutput {
    std::string format = "text";
    std::string out_path;
};

void add_output_flags(CLI::App* cmd, CommonOutput& out) {
    cmd->add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    cmd->add_option("--out", out.out_path,
                    "Also write the report to this file "
                    "(relative paths use $MHBASKET_OUT_DIR)");
}

ExactOptions make_test_opts(const std::string& method, int reps,
                            std::uint64_t seed, int workers) {
    ExactOptions opts;
    opts.method = method == "mc" ? TestMethod::monte_carlo : TestMethod::exact;
    opts.reps = reps;
    opts.seed = seed;
    opts.workers = workers;
    return opts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Basket-trial analysis: Mantel-Haenszel estimation, exact "
                 "tests, goodness of fit, subclass identification, simulation"};
    app.require_subcommand(1);

    // analyze ---------------------------------------------------------------
    auto* analyze = app.add_subcommand("analyze", "Full per-basket and pooled report");
    std::string an_path, an_scale = "rd", an_method = "exact";
    double an_alpha = 0.05;
    int an_reps = 10000, an_workers = 0;
    std::uint64_t an_seed = kDefaultSeed;
    bool an_add_one = false;
    CommonOutput an_out;
    analyze->add_option("dataset", an_path, "Dataset CSV/JSON file")->required();
    analyze->add_option("--scale", an_scale, "Effect scale")
        ->check(CLI::IsMember({"rd", "rr", "iwrr", "or"}))
        ->capture_default_str();
    analyze->add_option("--alpha", an_alpha, "Two-sided CI level")
        ->capture_default_str();
    analyze->add_option("--method", an_method, "Null distribution method")
        ->check(CLI::IsMember({"exact", "mc"}))
        ->capture_default_str();
    analyze->add_option("--reps", an_reps, "Monte Carlo replicates")
        ->capture_default_str();
    analyze->add_option("--seed", an_seed, "Monte Carlo seed")->capture_default_str();
    analyze->add_option("--workers", an_workers,
                        "Monte Carlo worker threads (0 = hardware)");
    analyze->add_flag("--mc-add-one", an_add_one,
                      "Use (count+1)/(reps+1) for Monte Carlo p-values");
    add_output_flags(analyze, an_out);

    // models ----------------------------------------------------------------
    auto* models = app.add_subcommand("models", "GIC ranking of subclass models");
    std::string mo_path, mo_scale = "rd", mo_strategy = "two", mo_partition;
    double mo_alpha = 0.05, mo_window = 1.0;
    int mo_min_patients = 10, mo_top = 0;
    CommonOutput mo_out;
    models->add_option("dataset", mo_path, "Dataset CSV/JSON file")->required();
    models->add_option("--scale", mo_scale, "Effect scale")
        ->check(CLI::IsMember({"rd", "rr", "iwrr", "or"}))
        ->capture_default_str();
    models->add_option("--strategy", mo_strategy, "Enumeration strategy")
        ->check(CLI::IsMember({"two", "all", "nonsparse"}))
        ->capture_default_str();
    models->add_option("--min-patients", mo_min_patients,
                       "Strict minimum patients per subclass (nonsparse)")
        ->capture_default_str();
    models->add_option("--top", mo_top, "Show only the best N models (0 = all)")
        ->capture_default_str();
    models->add_option("--window", mo_window, "Near-optimal GIC window")
        ->capture_default_str();
    models->add_option("--alpha", mo_alpha, "Two-sided CI level")
        ->capture_default_str();
    models->add_option("--partition", mo_partition,
                       "Score just this partition, e.g. \"1 2 6/ 3 4 5\"");
    add_output_flags(models, mo_out);

    // simulate ----------------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "Run a scenario file");
    std::string si_path, si_strategy;
    int si_reps = 0, si_workers = 0;
    std::uint64_t si_seed = 0;
    bool si_have_seed = false;
    CommonOutput si_out;
    simulate->add_option("scenario", si_path, "Scenario JSON file")->required();
    simulate->add_option("--reps", si_reps, "Override replicate count");
    auto* seed_opt = simulate->add_option("--seed", si_seed, "Override seed");
    simulate->add_option("--strategy", si_strategy, "Override strategy")
        ->check(CLI::IsMember({"two", "all", "nonsparse"}));
    simulate->add_option("--workers", si_workers, "Worker threads (0 = hardware)");
    add_output_flags(simulate, si_out);
    simulate->callback([&] { si_have_seed = seed_opt->count() > 0; });

    // gof ---------------------------------------------------------------------
    auto* gof = app.add_subcommand("gof", "Goodness-of-fit test of a common effect");
    std::string go_path, go_scale = "rd";
    bool go_pearson = false;
    CommonOutput go_out;
    gof->add_option("dataset", go_path, "Dataset CSV/JSON file")->required();
    gof->add_option("--scale", go_scale, "Effect scale")
        ->check(CLI::IsMember({"rd", "rr", "iwrr", "or"}))
        ->capture_default_str();
    gof->add_flag("--pearson", go_pearson,
                  "Divide each term by (1 - fitted rate) as well");
    add_output_flags(gof, go_out);

    // test --------------------------------------------------------------------
    auto* test = app.add_subcommand("test", "Exact test of the global null");
    std::string te_path, te_weights = "one", te_method = "exact";
    double te_alpha = 0.025;
    int te_reps = 10000, te_workers = 0;
    std::uint64_t te_seed = kDefaultSeed;
    bool te_add_one = false;
    CommonOutput te_out;
    test->add_option("dataset", te_path, "Dataset CSV/JSON file")->required();
    test->add_option("--weights", te_weights, "Statistic weights")
        ->check(CLI::IsMember({"one", "iw"}))
        ->capture_default_str();
    test->add_option("--alpha", te_alpha, "One-sided test level")
        ->capture_default_str();
    test->add_option("--method", te_method, "Null distribution method")
        ->check(CLI::IsMember({"exact", "mc"}))
        ->capture_default_str();
    test->add_option("--reps", te_reps, "Monte Carlo replicates")
        ->capture_default_str();
    test->add_option("--seed", te_seed, "Monte Carlo seed")->capture_default_str();
    test->add_option("--workers", te_workers,
                     "Monte Carlo worker threads (0 = hardware)");
    test->add_flag("--add-one", te_add_one,
                   "Use (count+1)/(reps+1) for Monte Carlo p-values");
    add_output_flags(test, te_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*analyze) {
            BasketTable table = read_table_file(an_path);
            AnalysisReport report =
                build_analysis(table, EffectScale::parse(an_scale), an_alpha,
                               make_test_opts(an_method, an_reps, an_seed, an_workers),
                               an_add_one);
            emit(an_out.format == "json"  ? render_json(report)
                 : an_out.format == "csv" ? render_csv(report)
                                          : render_text(report),
                 an_out.out_path);
        } else if (*models) {
            BasketTable table = read_table_file(mo_path);
            GicRanking ranking;
            if (!mo_partition.empty()) {
                GicResult fit =
                    model_gic(table, parse_partition(mo_partition, table.size()),
                              EffectScale::parse(mo_scale), mo_alpha);
                fit.near_optimal = true;
                ranking.models.push_back(std::move(fit));
                ranking.strategy = parse_strategy(mo_strategy);
                ranking.near_optimal_window = mo_window;
            } else {
                EnumerationOptions opts;
                opts.strategy = parse_strategy(mo_strategy);
                opts.min_subclass_patients = mo_min_patients;
                ranking = rank_models(table, EffectScale::parse(mo_scale), opts,
                                      mo_alpha, mo_window);
            }
            emit(mo_out.format == "json"  ? render_json(ranking, mo_top)
                 : mo_out.format == "csv" ? render_csv(ranking, mo_top)
                                          : render_text(ranking, mo_top),
                 mo_out.out_path);
        } else if (*simulate) {
            ScenarioSpec spec = load_scenario(si_path);
            if (si_reps > 0) spec.replicates = si_reps;
            if (si_have_seed) spec.seed = si_seed;
            if (!si_strategy.empty()) spec.strategy = parse_strategy(si_strategy);
            std::string rendered;
            if (spec.study == StudyKind::estimation) {
                EstimationMetrics metrics = run_estimation_study(spec, si_workers);
                rendered = si_out.format == "json"  ? render_json(metrics)
                           : si_out.format == "csv" ? render_csv(metrics)
                                                    : render_text(metrics);
            } else {
                IdentificationMetrics metrics =
                    run_identification_study(spec, si_workers);
                rendered = si_out.format == "json"  ? render_json(metrics)
                           : si_out.format == "csv" ? render_csv(metrics)
                                                    : render_text(metrics);
            }
            emit(rendered, si_out.out_path);
        } else if (*gof) {
            BasketTable table = read_table_file(go_path);
            GofResult res = gof_test(table, EffectScale::parse(go_scale), go_pearson);
            if (go_out.format == "json") {
                nlohmann::json j{{"statistic", res.statistic},
                                 {"df", res.df},
                                 {"p_value", res.p_value},
                                 {"fitted_rates", res.fitted_rates},
                                 {"scale", go_scale},
                                 {"pearson_variant", go_pearson}};
                emit(j.dump(2) + "\n", go_out.out_path);
            } else if (go_out.format == "csv") {
                std::ostringstream out;
                out << "statistic,df,p_value\n";
                out << std::setprecision(17) << res.statistic << ',' << res.df << ','
                    << res.p_value << '\n';
                emit(out.str(), go_out.out_path);
            } else {
                std::ostringstream out;
                out << "Z2 = " << fmt_rate(res.statistic) << ", df = " << res.df
                    << ", p = " << fmt_pvalue(res.p_value) << '\n';
                emit(out.str(), go_out.out_path);
            }
        } else if (*test) {
            BasketTable table = read_table_file(te_path);
            const std::vector<double> weights =
                te_weights == "iw"
                    ? resolve_weights(table, EffectScale::iwrr())
                    : std::vector<double>(table.baskets.size(), 1.0);
            ExactTestResult res = run_exact_test(
                table, weights,
                make_test_opts(te_method, te_reps, te_seed, te_workers), te_add_one);
            const bool reject = res.p <= te_alpha;
            if (te_out.format == "json") {
                nlohmann::json j{{"statistic", res.statistic},
                                 {"p_value", res.p},
                                 {"weights", te_weights},
                                 {"alpha", te_alpha},
                                 {"reject", reject},
                                 {"method", te_method}};
                if (res.method == TestMethod::monte_carlo) {
                    j["reps"] = res.reps;
                    j["seed"] = res.seed;
                }
                emit(j.dump(2) + "\n", te_out.out_path);
            } else if (te_out.format == "csv") {
                std::ostringstream out;
                out << "statistic,p_value,alpha,reject\n";
                out << std::setprecision(17) << res.statistic << ',' << res.p << ','
                    << te_alpha << ',' << (reject ? 1 : 0) << '\n';
                emit(out.str(), te_out.out_path);
            } else {
                std::ostringstream out;
                out << "T = " << fmt_rate(res.statistic)
                    << ", p = " << fmt_pvalue(res.p) << ", "
                    << (reject ? "reject" : "do not reject") << " at one-sided "
                    << fmt_rate(te_alpha);
                if (res.method == TestMethod::monte_carlo) {
                    out << " (monte carlo, reps " << res.reps << ", seed " << res.seed
                        << ")";
                }
                out << '\n';
                emit(out.str(), te_out.out_path);
            }
        }
    } catch (const BasketError& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
