// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sspi/mechanism.h"
#include "support/random_instances.h"

using namespace sspi;
namespace t = sspi::testing;

namespace {

MechanismOutcome Rank1Run(std::vector<double> pricing,
                          std::vector<double> reserves,
                          std::vector<double> values) {
  FeasibilityStructure fs = TruncatedPartition::Rank1(values.size());
  Rng rng = StreamFor(1, 0);
  std::vector<int> order(values.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  return RunOpm(PolicyKind::kRank1, fs, pricing, reserves, values, order, rng);
}

FeasibilityStructure Star(int k) {
  std::vector<Edge> edges;
  for (int i = 1; i <= k; ++i) edges.push_back({0, i});
  return Graphic(k + 1, edges);
}

}  // namespace

TEST_CASE("two-step rule on a rank-1 example") {
  auto out = Rank1Run({3, 1}, {8, 2}, {10, 7});
  CHECK(out.step1_winners == std::vector<int>{0});
  CHECK(out.winners == std::vector<int>{0});
  CHECK(out.payments[0] == 8);
  CHECK(out.payments[1] == 0);
  CHECK(out.welfare == 10);
  CHECK(out.revenue == 8);

  auto dropped = Rank1Run({3, 1}, {12, 2}, {10, 7});
  CHECK(dropped.step1_winners == std::vector<int>{0});
  CHECK(dropped.winners.empty());
  CHECK(dropped.revenue == 0);

  auto none = Rank1Run({30, 40}, {0, 0}, {10, 7});
  CHECK(none.winners.empty());
  CHECK(none.welfare == 0);
  CHECK(none.revenue == 0);
}

TEST_CASE("payment is the larger of price and reserve") {
  auto out = Rank1Run({3, 1}, {2, 2}, {10, 7});
  CHECK(out.payments[0] == 3);
}

TEST_CASE("length mismatches are rejected") {
  FeasibilityStructure fs = TruncatedPartition::Rank1(2);
  Rng rng = StreamFor(1, 0);
  std::vector<double> two{1, 2}, one{1};
  std::vector<int> order{0, 1};
  CHECK_THROWS_AS(RunOpm(PolicyKind::kRank1, fs, two, one, two, order, rng),
                  std::invalid_argument);
}

TEST_CASE("tabulated welfare bounds") {
  CHECK(*TableWelfareBound(PolicyKind::kRank1) == 4);
  CHECK(*TableWelfareBound(PolicyKind::kMatching) == 64);
  CHECK(*TableWelfareBound(PolicyKind::kTransversal) == 16);
  CHECK(*TableWelfareBound(PolicyKind::kLaminar) == 16);
  CHECK(*TableWelfareBound(PolicyKind::kReductionGraphic) == 8);
  PolicyOptions custom;
  custom.scheme = std::make_shared<FixedScheme>(
      std::vector<int>{}, std::vector<std::vector<int>>{{0}}, 3.0);
  CHECK(*TableWelfareBound(PolicyKind::kReductionCustom, custom) == 12);
  CHECK_FALSE(TableWelfareBound(PolicyKind::kReductionCustom).has_value());
}

TEST_CASE("rank-1 with exponential agents stays within its bounds") {
  FeasibilityStructure fs = TruncatedPartition::Rank1(3);
  std::vector<Distribution> d(3, Distribution::ExponentialLaw(1));
  auto est = EstimateMechanismRatios(PolicyKind::kRank1, fs, d, "", 100000, 3);
  CHECK(est.regime == "mhr");
  CHECK(est.revenue_benchmark == "best-posted-price");
  CHECK(*est.welfare_bound == 4);
  CHECK(*est.revenue_bound == doctest::Approx(4 * std::exp(1.0)));
  CHECK(est.welfare.ratio + 3 * est.welfare.half_width / 1.96 <= 4);
  CHECK(est.revenue.ratio <= *est.revenue_bound);
  CHECK(est.ir_violations == 0);
  CHECK(est.reserve_violations == 0);
}

TEST_CASE("graphic star and transversal stay within their bounds") {
  std::vector<Distribution> star_d(50, Distribution::ExponentialLaw(1));
  auto star = EstimateMechanismRatios(PolicyKind::kReductionGraphic, Star(50),
                                      star_d, "", 20000, 4);
  CHECK(star.welfare.ratio <= 8);
  CHECK(star.revenue_benchmark == "welfare-optimum");
  CHECK(star.ir_violations == 0);

  FeasibilityStructure tr = Transversal(2, {0, 1}, {{0, 1}, {0}, {1}, {0, 1}});
  std::vector<Distribution> tr_d(4, Distribution::ExponentialLaw(1));
  auto trans = EstimateMechanismRatios(PolicyKind::kTransversal, tr, tr_d, "",
                                       20000, 5);
  CHECK(trans.welfare.ratio <= 16);
  CHECK(trans.reserve_violations == 0);
}

TEST_CASE("regime labels") {
  FeasibilityStructure fs = TruncatedPartition::Rank1(2);
  std::vector<Distribution> discrete(
      2, Distribution::DiscreteLaw({1, 3}, {0.5, 0.5}));
  auto none = EstimateMechanismRatios(PolicyKind::kRank1, fs, discrete, "",
                                      2000, 1);
  CHECK(none.regime == "none");
  CHECK_FALSE(none.welfare_bound.has_value());
  CHECK_FALSE(none.revenue_bound.has_value());
  auto regular = EstimateMechanismRatios(PolicyKind::kRank1, fs, discrete,
                                         "identical-regular", 2000, 1);
  CHECK(regular.regime == "identical-regular");
  CHECK(*regular.revenue_bound == *regular.welfare_bound);
}

TEST_CASE("estimates are reproducible and reject the order search") {
  FeasibilityStructure fs = TruncatedPartition::Rank1(3);
  std::vector<Distribution> d(3, Distribution::UniformLaw(0, 1));
  auto a = EstimateMechanismRatios(PolicyKind::kRank1, fs, d, "", 5000, 8);
  auto b = EstimateMechanismRatios(PolicyKind::kRank1, fs, d, "", 5000, 8);
  CHECK(a.welfare.ratio == b.welfare.ratio);
  CHECK(a.revenue.ratio == b.revenue.ratio);
  CHECK_THROWS_AS(EstimateMechanismRatios(PolicyKind::kRank1, fs, d, "", 10, 1,
                                          ArrivalMode::kExhaustiveMin),
                  std::invalid_argument);
}

TEST_CASE("winners are feasible and individually rational") {
  Rng rng = StreamFor(401, 0);
  for (int trial = 0; trial < 300; ++trial) {
    int n = t::Uniform(rng, 1, 6);
    FeasibilityStructure fs = t::RandomTruncatedPartition(n, rng);
    std::vector<double> pricing, reserves, values;
    for (int i = 0; i < n; ++i) {
      pricing.push_back(t::Uniform(rng, 1, 20));
      reserves.push_back(t::Uniform(rng, 1, 20));
      values.push_back(t::Uniform(rng, 1, 20));
    }
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    auto out = RunOpm(PolicyKind::kLaminar, fs, pricing, reserves, values,
                      order, rng);
    CHECK(t::BruteIndependent(fs, out.winners));
    double revenue = 0;
    for (int i : out.winners) {
      CHECK(out.payments[i] <= values[i]);
      CHECK(out.payments[i] >= reserves[i]);
      revenue += out.payments[i];
    }
    CHECK(revenue == doctest::Approx(out.revenue));
  }
}
