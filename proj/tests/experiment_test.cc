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

#include <cstdlib>
#include <sstream>

#include "sspi/experiment.h"
#include "support/random_instances.h"

using namespace sspi;
namespace t = sspi::testing;

namespace {

const std::string kData = SSPI_TEST_DATA_DIR;

std::string Emit(const RatioReport& r, ReportFormat f) {
  std::ostringstream os;
  EmitReport(r, f, os, true);
  return os.str();
}

RatioRequest Exact(PolicyKind kind, ArrivalMode adversary) {
  RatioRequest req;
  req.policy = kind;
  req.adversary = adversary;
  req.exact = true;
  return req;
}

}  // namespace

TEST_CASE("exact rank-1 single element") {
  FeasibilityStructure fs = TruncatedPartition::Rank1(1);
  std::vector<ElementRealization> rz{FixedRealization(0, 5, 2)};
  auto r = ExactRatio(fs, rz, Exact(PolicyKind::kRank1, ArrivalMode::kFixed));
  CHECK(r.e_alg == 2.5);
  CHECK(r.e_opt == 3.5);
  CHECK(r.ratio == doctest::Approx(1.4));
  CHECK(r.ratio <= 2);
  CHECK(r.alg_exact->ToString() == "5/2");
  CHECK(r.mode == "exact");
  CHECK_FALSE(r.ratio_ci.has_value());
  auto json = Emit(r, ReportFormat::kJson);
  CHECK(json.find("\"E_ALG\": \"5/2\"") != std::string::npos);
  CHECK(json.find("\"trials\": \"exact\"") != std::string::npos);
}

TEST_CASE("exact bounds on the fixture instances") {
  auto tri = LoadInstance(kData + "/triangle.yaml");
  auto r = EstimateRatio(tri, Exact(PolicyKind::kMatching,
                                    ArrivalMode::kExhaustiveMin));
  CHECK(r.ratio <= 32);
  CHECK(r.z_violations == 0);

  auto lam = LoadInstance(kData + "/laminar.yaml");
  auto l = EstimateRatio(lam, Exact(PolicyKind::kLaminar,
                                    ArrivalMode::kIncreasing));
  CHECK(l.ratio <= 8);
}

TEST_CASE("exact mode agrees with an independent enumeration") {
  Rng rng = StreamFor(501, 0);
  for (int trial = 0; trial < 40; ++trial) {
    int n = t::Uniform(rng, 1, 5);
    auto rz = t::RandomRealizations(n, rng);
    FeasibilityStructure fs = t::RandomTruncatedPartition(n, rng);
    auto r = ExactRatio(fs, rz, Exact(PolicyKind::kLaminar,
                                      ArrivalMode::kExhaustiveMin));
    double alg = 0, opt = 0;
    for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
      std::vector<TaggedValue> rewards, samples;
      t::SplitByMask(rz, mask, rewards, samples);
      Rng prng = StreamFor(0, 0);
      auto p = PreparePolicy(PolicyKind::kLaminar, fs, samples, prng);
      alg += t::BruteMinOverOrders(*p, rewards);
      opt += t::BruteOptimum(fs, t::Values(rewards));
    }
    double denom = static_cast<double>(uint64_t{1} << n);
    CHECK(r.e_alg == doctest::Approx(alg / denom));
    CHECK(r.e_opt == doctest::Approx(opt / denom));
    CHECK(r.alg_exact->denominator <= (uint64_t{1} << n));
  }
}

TEST_CASE("Monte Carlo agrees with exact expectations") {
  // Disjoint supports rule out ties across elements, so the fixed tie
  // tokens of exact mode do not bias the comparison.
  Instance inst = ParseInstance(R"(structure:
  type: rank1
  elements: 2
distributions:
  - discrete: {values: [1, 3], weights: [0.5, 0.5]}
  - discrete: {values: [2, 4], weights: [0.5, 0.5]}
)");
  const double a[] = {1, 3}, b[] = {2, 4};
  FeasibilityStructure fs = inst.structure;
  double alg = 0, opt = 0;
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2) {
          std::vector<ElementRealization> rz{
              MakeRealization(0, {a[a1], 0.75, 0}, {a[a2], 0.25, 0}),
              MakeRealization(1, {b[b1], 0.75, 1}, {b[b2], 0.25, 1})};
          auto r = ExactRatio(fs, rz, Exact(PolicyKind::kRank1,
                                            ArrivalMode::kIncreasing));
          alg += r.e_alg / 16;
          opt += r.e_opt / 16;
        }
  RatioRequest req;
  req.policy = PolicyKind::kRank1;
  req.trials = 200000;
  req.seed = 12;
  auto mc = EstimateRatio(inst, req);
  CHECK(std::abs(mc.e_alg - alg) <= 3 * *mc.alg_ci / 1.96);
  CHECK(std::abs(mc.e_opt - opt) <= 3 * *mc.opt_ci / 1.96);
}

TEST_CASE("reports are byte-identical across reruns and worker counts") {
  auto inst = LoadInstance(kData + "/matching.yaml");
  RatioRequest req;
  req.policy = PolicyKind::kMatching;
  req.adversary = ArrivalMode::kRandom;
  req.trials = 3000;
  req.seed = 77;
  setenv("SSPI_WORKERS", "1", 1);
  auto one = Emit(EstimateRatio(inst, req), ReportFormat::kJson);
  setenv("SSPI_WORKERS", "4", 1);
  auto four = Emit(EstimateRatio(inst, req), ReportFormat::kJson);
  unsetenv("SSPI_WORKERS");
  CHECK(one == four);
  CHECK(one == Emit(EstimateRatio(inst, req), ReportFormat::kJson));
  req.seed = 78;
  CHECK(one != Emit(EstimateRatio(inst, req), ReportFormat::kJson));
}

TEST_CASE("csv layout") {
  CHECK(CsvHeader() ==
        "policy,adversary,mode,e_alg,e_opt,e_opt_prime,ratio,ci,seed,wall_ms");
  FeasibilityStructure fs = TruncatedPartition::Rank1(1);
  std::vector<ElementRealization> rz{FixedRealization(0, 5, 2)};
  auto csv = Emit(ExactRatio(fs, rz, Exact(PolicyKind::kRank1,
                                           ArrivalMode::kFixed)),
                  ReportFormat::kCsv);
  CHECK(csv == CsvHeader() + "\nrank1,fixed,exact,5/2,7/2,7/2,1.4,,1,0\n");
  CHECK(FormatNumber(1.0 / 3) == "0.333333333333");
  CHECK_THROWS_AS(ParseReportFormat("xml"), std::invalid_argument);
}

TEST_CASE("caps and argument checks") {
  auto inst = TightExampleInstance(20);
  CHECK_THROWS_AS(EstimateRatio(inst, Exact(PolicyKind::kReductionGraphic,
                                            ArrivalMode::kIncreasing)),
                  CapExceeded);
  auto tri = LoadInstance(kData + "/triangle.yaml");
  CHECK_THROWS(EstimateRatio(tri, Exact(PolicyKind::kMatching,
                                        ArrivalMode::kRandom)));
  RatioRequest zero;
  zero.policy = PolicyKind::kMatching;
  zero.trials = 0;
  CHECK_THROWS_AS(EstimateRatio(tri, zero), std::invalid_argument);
  CHECK_THROWS_AS(TightExample(1, 10, 1), std::invalid_argument);
}

TEST_CASE("tight example brackets and grows with k") {
  auto k2 = TightExample(2, 100000, 1);
  CHECK(k2.ratio > 1);
  CHECK(k2.ratio < 4);
  auto k10 = TightExample(10, 20000, 2);
  auto k200 = TightExample(200, 20000, 3);
  CHECK(k10.ratio + *k10.ratio_ci < k200.ratio - *k200.ratio_ci);
}
