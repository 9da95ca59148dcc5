#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "basket/dataset.hpp"
#include "basket/errors.hpp"
#include "basket/gic.hpp"

using namespace basket;

namespace {

// Published three-decimal values and independently recomputed full-precision
// references are frozen below.
bool close(double a, double b, double tol = 1e-9) {
  return std::fabs(a - b) <= tol * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

// Matches a value against a reference that was rounded to three decimals.
bool approx3(double x, double rounded) { return std::fabs(x - rounded) < 5.05e-4; }

BasketTable vem() { return read_table_file(std::string(MHBASKET_DATA_DIR) + "/vemurafenib.csv"); }
BasketTable ima() { return read_table_file(std::string(MHBASKET_DATA_DIR) + "/imatinib.csv"); }

double saturated_loglik(const BasketTable& t) {
  double ll = 0.0;
  for (const auto& b : t.baskets) {
    const double ph = static_cast<double>(b.y) / b.n;
    if (b.y > 0) ll += b.y * std::log(ph);
    if (b.y < b.n) ll += (b.n - b.y) * std::log1p(-ph);
  }
  return ll;
}

}  // namespace

TEST_CASE("strategy names round trip") {
  CHECK(parse_strategy("two") == Strategy::two_subclass);
  CHECK(parse_strategy("all") == Strategy::all_subclasses);
  CHECK(parse_strategy("nonsparse") == Strategy::non_sparse);
  for (auto s : {Strategy::two_subclass, Strategy::all_subclasses, Strategy::non_sparse}) {
    CHECK(parse_strategy(strategy_name(s)) == s);
  }
  CHECK_THROWS_AS(parse_strategy("bogus"), ValidationError);
}

TEST_CASE("enumeration counts and canonical order") {
  const auto t = vem();
  EnumerationOptions two;
  const auto m2 = enumerate_models(4, two, t);
  CHECK(m2.size() == 8);  // homogeneous + 2^3 - 1 bipartitions
  CHECK(m2.front() == single_class_partition(4));
  for (const auto& p : m2) CHECK(canonicalize_partition(p) == p);
  for (size_t i = 1; i < m2.size(); ++i) {
    CHECK(m2[i - 1].assignment < m2[i].assignment);  // strict lex order
  }

  EnumerationOptions all;
  all.strategy = Strategy::all_subclasses;
  CHECK(enumerate_models(4, all, t).size() == 15);   // Bell(4)
  CHECK(enumerate_models(6, all, t).size() == 203);  // Bell(6)

  // Subclass patient totals must strictly exceed the floor.
  BasketTable small;
  small.baskets = {{"A", 1, 20, 0.1, {}},
                   {"B", 1, 20, 0.1, {}},
                   {"C", 1, 10, 0.1, {}},
                   {"D", 1, 10, 0.1, {}}};
  EnumerationOptions ns;
  ns.strategy = Strategy::non_sparse;
  ns.min_subclass_patients = 10;
  const auto m3 = enumerate_models(4, ns, small);
  CHECK(m3.size() == 7);
  for (const auto& p : m3) {
    for (int l = 1; l <= p.n_subclasses; ++l) {
      int total = 0;
      for (int i : p.members(l)) total += small.baskets[i].n;
      CHECK(total > 10);
    }
  }
}

TEST_CASE("enumeration cap guards the Bell-number explosion") {
  const auto t = vem();
  EnumerationOptions opts;
  try {
    enumerate_models(13, opts, t);
    FAIL("expected combinatorial_limit");
  } catch (const CombinatorialError& e) {
    CHECK(e.code() == ErrorCode::combinatorial_limit);
  }
  opts.max_baskets = 13;
  CHECK(enumerate_models(13, opts, t).size() == 4096);
}

TEST_CASE("frozen two-subclass ranking: six-basket dataset, RD scale") {
  const auto ranking = rank_models(vem(), EffectScale::rd(), EnumerationOptions{});
  REQUIRE(ranking.models.size() == 32);
  const auto& m = ranking.models;

  CHECK(close(m[0].gic, 35.49405458141473));
  const struct {
    int idx;
    double gic;
    const char* model;
  } rows[] = {
      {0, 35.494, "1 2 6/ 3 4 5"},  {1, 36.501, "1 2 3 6/ 4 5"},
      {2, 37.584, "1 3 4 5/ 2 6"},  {3, 39.623, "1 4 5/ 2 3 6"},
      {4, 40.745, "1 2 5 6/ 3 4"},  {16, 47.228, "1 2 3 4 5 6"},
      {27, 49.823, "1 3 5 6/ 2 4"}, {28, 49.906, "1 2 4/ 3 5 6"},
      {29, 50.048, "1 3 4 6/ 2 5"}, {30, 50.390, "1 4 6/ 2 3 5"},
      {31, 50.488, "1 2 3 5/ 4 6"},
  };
  for (const auto& row : rows) {
    CHECK(approx3(m[row.idx].gic, row.gic));
    CHECK(partition_to_string(m[row.idx].partition) == row.model);
  }
  CHECK(close(m[16].gic, 47.22840057065738));

  // Best model: subclasses listed from least to most effective.
  REQUIRE(m[0].subclasses.size() == 2);
  CHECK(m[0].subclasses[0].members == std::vector<int>{2, 3, 4});
  CHECK(approx3(m[0].subclasses[0].estimate.point, -0.105));
  CHECK(approx3(m[0].subclasses[0].estimate.ci_low, -0.168));
  CHECK(approx3(m[0].subclasses[0].estimate.ci_high, -0.042));
  CHECK(m[0].subclasses[1].members == std::vector<int>{0, 1, 5});
  CHECK(approx3(m[0].subclasses[1].estimate.point, 0.250));
  CHECK(approx3(m[0].subclasses[1].estimate.ci_low, 0.093));
  CHECK(approx3(m[0].subclasses[1].estimate.ci_high, 0.407));
  // Worst model keeps the same display convention.
  CHECK(m[31].subclasses[0].members == std::vector<int>{3, 5});
  CHECK(approx3(m[31].subclasses[0].estimate.point, 0.050));
  CHECK(m[31].subclasses[1].members == std::vector<int>{0, 1, 2, 4});
  CHECK(approx3(m[31].subclasses[1].estimate.point, 0.081));

  // Only the best model sits within one GIC unit of the minimum.
  int flagged = 0;
  for (const auto& model : m) flagged += model.near_optimal ? 1 : 0;
  CHECK(flagged == 1);
  CHECK(m[0].near_optimal);

  // Additivity across subclasses.
  for (const auto& model : m) {
    double g = 0.0, ll = 0.0, bias = 0.0;
    for (const auto& s : model.subclasses) {
      g += s.gic;
      ll += s.loglik;
      bias += s.bias;
    }
    CHECK(std::fabs(model.gic - g) <= 1e-10);
    CHECK(std::fabs(model.loglik - ll) <= 1e-10);
    CHECK(std::fabs(model.bias - bias) <= 1e-10);
  }
}

TEST_CASE("frozen three-subclass model: six-basket dataset") {
  const auto t = vem();
  const auto res = model_gic(t, parse_partition("1 3/ 2 6/ 4 5", 6), EffectScale::rd());
  CHECK(close(res.gic, 35.02878382304374));
  CHECK(approx3(res.gic, 35.029));
  REQUIRE(res.subclasses.size() == 3);
}

TEST_CASE("frozen two-subclass ranking: ten-basket dataset, iwRR scale") {
  const auto ranking = rank_models(ima(), EffectScale::iwrr(), EnumerationOptions{});
  REQUIRE(ranking.models.size() == 512);
  const auto& m = ranking.models;

  CHECK(close(m[0].gic, 79.6626069027837));
  const struct {
    double gic;
    const char* model;
  } rows[] = {
      {79.663, "1 2 3 6 9 10/ 4 5 7 8"},  {79.705, "1 2 3 6 8 9 10/ 4 5 7"},
      {79.871, "1 3 4 5 6 7 8 10/ 2 9"},  {80.007, "1 2 3 6 10/ 4 5 7 8 9"},
      {80.083, "1 2 3 6 8 10/ 4 5 7 9"},  {80.328, "1 3 4 5 6 7 8 9 10/ 2"},
      {80.374, "1 2 3 6 9/ 4 5 7 8 10"},  {80.516, "1 2 3 6 8 9/ 4 5 7 10"},
      {80.657, "1 2 3 6/ 4 5 7 8 9 10"},  {80.864, "1 2 3 6 8/ 4 5 7 9 10"},
  };
  for (int i = 0; i < 10; ++i) {
    CHECK(approx3(m[i].gic, rows[i].gic));
    CHECK(partition_to_string(m[i].partition) == rows[i].model);
  }

  REQUIRE(m[0].subclasses.size() == 2);
  CHECK(m[0].subclasses[0].members == std::vector<int>{0, 1, 2, 5, 8, 9});
  CHECK(approx3(m[0].subclasses[0].estimate.point, 0.989));
  CHECK(approx3(m[0].subclasses[0].estimate.ci_low, 0.367));
  CHECK(approx3(m[0].subclasses[0].estimate.ci_high, 1.611));
  CHECK(m[0].subclasses[1].members == std::vector<int>{3, 4, 6, 7});
  CHECK(approx3(m[0].subclasses[1].estimate.point, 2.159));
  CHECK(approx3(m[0].subclasses[1].estimate.ci_low, 1.280));
  CHECK(approx3(m[0].subclasses[1].estimate.ci_high, 3.038));

  // Rank 3 isolates two all-zero baskets: estimate and interval collapse to 0.
  CHECK(m[2].subclasses[0].members == std::vector<int>{1, 8});
  CHECK(std::fabs(m[2].subclasses[0].estimate.point) <= 1e-12);
  CHECK(std::fabs(m[2].subclasses[0].estimate.ci_low) <= 1e-12);
  CHECK(std::fabs(m[2].subclasses[0].estimate.ci_high) <= 1e-12);
  CHECK(std::fabs(m[2].subclasses[0].bias) <= 1e-12);
  CHECK(m[2].subclasses[0].gic <= 1e-9);

  // Exactly the top nine models sit within one GIC unit of the best.
  for (int i = 0; i < 9; ++i) CHECK(m[i].near_optimal);
  CHECK_FALSE(m[9].near_optimal);
  int flagged = 0;
  for (const auto& model : m) flagged += model.near_optimal ? 1 : 0;
  CHECK(flagged == 9);

  for (const auto& model : m) {
    double g = 0.0;
    for (const auto& s : model.subclasses) g += s.gic;
    CHECK(std::fabs(model.gic - g) <= 1e-10);
  }
}

TEST_CASE("near-optimal window is configurable") {
  const auto ranking =
      rank_models(vem(), EffectScale::rd(), EnumerationOptions{}, 0.05, 5.0);
  CHECK(ranking.near_optimal_window == 5.0);
  int flagged = 0;
  for (const auto& model : ranking.models) flagged += model.near_optimal ? 1 : 0;
  CHECK(flagged == 4);  // 36.501, 37.584, 39.623 join the best model
}

TEST_CASE("single-class model equals the direct subclass fit") {
  const auto t = vem();
  const auto whole = subclass_gic(t, EffectScale::rd());
  const auto model = model_gic(t, single_class_partition(6), EffectScale::rd());
  REQUIRE(model.subclasses.size() == 1);
  CHECK(close(model.gic, whole.gic, 1e-12));
  CHECK(close(model.loglik, whole.loglik, 1e-12));
  CHECK(close(model.bias, whole.bias, 1e-12));
  CHECK(model.subclasses[0].members == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("fully separate model: saturated likelihood, zero bias") {
  const auto t = vem();
  const auto sep = model_gic(t, parse_partition("1/ 2/ 3/ 4/ 5/ 6", 6), EffectScale::rd());
  CHECK(std::fabs(sep.bias) <= 1e-12);
  CHECK(close(sep.loglik, saturated_loglik(t), 1e-9));
  // No partition can beat the saturated log-likelihood.
  EnumerationOptions all;
  all.strategy = Strategy::all_subclasses;
  for (const auto& p : enumerate_models(6, all, t)) {
    const auto res = model_gic(t, p, EffectScale::rd());
    CHECK(res.loglik <= sep.loglik + 1e-9);
  }
}

TEST_CASE("merging subclasses with equal estimates never hurts the GIC") {
  // Both halves have the same pooled estimate but nonzero residuals, so the
  // merged fit has the same likelihood and a strictly smaller penalty.
  BasketTable t;
  t.baskets = {{"A", 1, 10, 0.1, {}},
               {"B", 5, 10, 0.1, {}},
               {"C", 2, 10, 0.1, {}},
               {"D", 4, 10, 0.1, {}}};
  for (auto scale : {EffectScale::rd(), EffectScale::rr()}) {
    const auto split = model_gic(t, parse_partition("1 2/ 3 4", 4), scale);
    const auto merged = model_gic(t, single_class_partition(4), scale);
    CHECK(close(split.subclasses[0].estimate.point, split.subclasses[1].estimate.point,
                1e-12));
    CHECK(close(merged.loglik, split.loglik, 1e-12));
    CHECK(merged.gic < split.gic - 1e-6);
  }
}

TEST_CASE("ranking does not depend on the order of the input rows") {
  auto fwd = vem();
  auto rev = fwd;
  std::reverse(rev.baskets.begin(), rev.baskets.end());
  const auto rf = rank_models(fwd, EffectScale::rd(), EnumerationOptions{});
  const auto rr = rank_models(rev, EffectScale::rd(), EnumerationOptions{});
  REQUIRE(rf.models.size() == rr.models.size());
  for (size_t i = 0; i < rf.models.size(); ++i) {
    CHECK(close(rf.models[i].gic, rr.models[i].gic, 1e-10));
  }
  // The best model selects the same baskets by label.
  auto labels = [](const BasketTable& t, const std::vector<int>& members) {
    std::vector<std::string> out;
    for (int i : members) out.push_back(t.baskets[i].label);
    std::sort(out.begin(), out.end());
    return out;
  };
  CHECK(labels(fwd, rf.models[0].subclasses[1].members) ==
        labels(rev, rr.models[0].subclasses[1].members));
}

TEST_CASE("ties keep the canonical enumeration order") {
  BasketTable t;
  t.baskets = {{"A", 3, 10, 0.2, {}},
               {"B", 3, 10, 0.2, {}},
               {"C", 7, 12, 0.25, {}}};
  const auto ranking = rank_models(t, EffectScale::rd(), EnumerationOptions{});
  // Baskets A and B are identical, so "1 3/ 2" and "1/ 2 3" score identically;
  // the earlier canonical assignment must stay first.
  int first = -1, second = -1;
  for (size_t i = 0; i < ranking.models.size(); ++i) {
    const auto s = partition_to_string(ranking.models[i].partition);
    if (s == "1 3/ 2") first = static_cast<int>(i);
    if (s == "1/ 2 3") second = static_cast<int>(i);
  }
  REQUIRE(first >= 0);
  REQUIRE(second >= 0);
  CHECK(ranking.models[first].gic == ranking.models[second].gic);
  CHECK(first < second);
}

TEST_CASE("common fits pinned to the boundary are degenerate") {
  BasketTable t;
  t.baskets = {{"A", 10, 10, 0.5, {}}, {"B", 3, 6, 0.9, {}}};
  try {
    subclass_gic(t, EffectScale::rr());
    FAIL("expected degenerate_fit");
  } catch (const EstimationError& e) {
    CHECK(e.code() == ErrorCode::degenerate_fit);
  }
}
