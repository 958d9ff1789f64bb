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

#include <algorithm>
#include <numeric>

#include "sspi/policies.h"
#include "support/random_instances.h"

using namespace sspi;
namespace t = sspi::testing;

namespace {

std::vector<TaggedValue> V(std::vector<double> v, double token = 0.5) {
  std::vector<TaggedValue> out;
  for (size_t e = 0; e < v.size(); ++e) {
    out.push_back({v[e], token, static_cast<int>(e)});
  }
  return out;
}

std::unique_ptr<OnlinePolicy> Prepare(PolicyKind kind,
                                      const FeasibilityStructure& fs,
                                      const std::vector<TaggedValue>& samples,
                                      const PolicyOptions& options = {}) {
  Rng rng = StreamFor(1, 0);
  return PreparePolicy(kind, fs, samples, rng, options);
}

double Total(const OnlinePolicy& p, const std::vector<TaggedValue>& rewards,
             std::vector<int> order) {
  return RunPolicy(p, rewards, order).chosen.total;
}

}  // namespace

TEST_CASE("rank-1 accepts the first reward above the best sample") {
  FeasibilityStructure fs = TruncatedPartition::Rank1(2);
  auto p = Prepare(PolicyKind::kRank1, fs, V({3, 1}));
  auto trace = RunPolicy(*p, V({10, 7}), std::vector<int>{1, 0});
  CHECK(trace.chosen.chosen == std::vector<int>{1});
  CHECK(trace.chosen.total == 7);
  CHECK(Total(*p, V({2, 2}), {0, 1}) == 0);
}

TEST_CASE("rank-1 two-configuration expectation") {
  // Y=5, Z=2: heads gives reward 5 against sample 2, tails gives 2 vs 5.
  FeasibilityStructure fs = TruncatedPartition::Rank1(1);
  auto heads = Prepare(PolicyKind::kRank1, fs, V({2}));
  auto tails = Prepare(PolicyKind::kRank1, fs, V({5}));
  double alg = 0.5 * Total(*heads, V({5}), {0}) + 0.5 * Total(*tails, V({2}), {0});
  CHECK(alg == 2.5);
  CHECK(0.5 * 5 + 0.5 * 2 <= 2 * alg);
}

TEST_CASE("matching policy on the triangle") {
  FeasibilityStructure fs = GeneralMatching(3, {{0, 1}, {1, 2}, {0, 2}});
  auto p = Prepare(PolicyKind::kMatching, fs, V({5, 4, 1}));
  auto trace = RunPolicy(*p, V({6, 2, 3}), std::vector<int>{1, 2, 0});
  CHECK(trace.chosen.chosen == std::vector<int>{0});
  CHECK(trace.chosen.total == 6);
  CHECK_FALSE(trace.decisions[0].accepted);
  CHECK_FALSE(trace.decisions[1].accepted);

  FeasibilityStructure edge = GeneralMatching(2, {{0, 1}});
  auto q = Prepare(PolicyKind::kMatching, edge, V({3}));
  CHECK(Total(*q, V({2}), {0}) == 0);
  CHECK(Total(*q, V({4}), {0}) == 4);
}

TEST_CASE("transversal policy examples") {
  FeasibilityStructure fs = Transversal(1, {0}, {{0}, {0}});
  auto p = Prepare(PolicyKind::kTransversal, fs, V({5, 2}));
  auto trace = RunPolicy(*p, V({7, 6}), std::vector<int>{1, 0});
  CHECK(trace.chosen.chosen == std::vector<int>{1});
  CHECK(trace.chosen.total == 6);
  CHECK(trace.decisions[1].reason == std::string("node taken"));

  FeasibilityStructure one = Transversal(1, {0}, {{0}});
  CHECK(Total(*Prepare(PolicyKind::kTransversal, one, V({3})), V({2}), {0}) == 0);
  FeasibilityStructure lonely = Transversal(1, {0}, {{}});
  CHECK(Total(*Prepare(PolicyKind::kTransversal, lonely, V({0.5})), V({9}),
              {0}) == 0);
}

TEST_CASE("laminar policy compares against the sample optimum") {
  FeasibilityStructure fs = TruncatedPartition({0, 0, 1}, {1, 1}, 1);
  auto p = Prepare(PolicyKind::kLaminar, fs, V({4, 2, 3}));
  auto state = p->InitialState();
  RewardProbe five(V({0, 5, 0})[1]);
  CHECK(p->Offer(state, 1, five).accepted);
  RewardProbe one(V({1})[0]);
  CHECK_FALSE(p->Offer(state, 0, one).accepted);
}

TEST_CASE("reduction on a two-leaf star with a fixed vertex order") {
  // s=0, s1=1, s2=2; order (s1, s2, s) puts each edge in its leaf's group.
  FeasibilityStructure fs = Graphic(3, {{0, 1}, {0, 2}});
  PolicyOptions opts;
  opts.scheme = std::make_shared<GraphicScheme>(std::vector<int>{2, 0, 1});
  auto p = Prepare(PolicyKind::kReductionGraphic, fs, V({3, 1}), opts);
  auto trace = RunPolicy(*p, V({5, 2}), std::vector<int>{0, 1});
  CHECK(trace.chosen.chosen == std::vector<int>{0, 1});
  CHECK(t::ForestOk(std::get<Graphic>(fs), trace.chosen.chosen));
}

TEST_CASE("reduction ignores elements outside the ground set") {
  FeasibilityStructure fs = TruncatedPartition::Rank1(2);
  PolicyOptions opts;
  opts.scheme = std::make_shared<FixedScheme>(std::vector<int>{0},
                                              std::vector<std::vector<int>>{{1}},
                                              1.0);
  auto p = Prepare(PolicyKind::kReductionCustom, fs, V({3, 1}), opts);
  auto state = p->InitialState();
  RewardProbe probe(V({100})[0]);
  auto d = p->Offer(state, 0, probe);
  CHECK_FALSE(d.accepted);
  CHECK_FALSE(probe.read());
  auto trace = RunPolicy(*p, V({100, 2}), std::vector<int>{0, 1});
  CHECK_FALSE(trace.decisions[0].reward.has_value());
  CHECK(trace.chosen.chosen == std::vector<int>{1});
}

TEST_CASE("empty threshold means zero") {
  auto r = V({2})[0];
  CHECK(Clears(r, std::nullopt));
  CHECK_FALSE(Clears(V({0})[0], std::nullopt));
  CHECK(Clears(r, V({1})[0]));
  CHECK_FALSE(Clears(r, V({3})[0]));
}

TEST_CASE("increasing order") {
  CHECK(IncreasingOrder(V({3, 1, 2})) == std::vector<int>{1, 2, 0});
  CHECK(IncreasingOrder(V({4})) == std::vector<int>{0});
}

TEST_CASE("increasing order is worst on the laminar example") {
  FeasibilityStructure fs = TruncatedPartition({0, 0, 1}, {1, 1}, 1);
  for (const auto& rewards : {V({5, 1, 6}), V({1, 5, 2}), V({6, 7, 8})}) {
    auto p = Prepare(PolicyKind::kLaminar, fs, V({4, 2, 3}));
    double inc = Total(*p, rewards, IncreasingOrder(rewards));
    CHECK(inc == t::BruteMinOverOrders(*p, rewards));
    CHECK(inc == MinOverOrders(*p, rewards).value);
  }
}

TEST_CASE("argument checks") {
  FeasibilityStructure fs = TruncatedPartition::Rank1(2);
  auto p = Prepare(PolicyKind::kRank1, fs, V({3, 1}));
  CHECK_THROWS_AS(RunPolicy(*p, V({1, 2}), std::vector<int>{0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Prepare(PolicyKind::kRank1, fs, V({3})),
                  std::invalid_argument);
  CHECK_THROWS_AS(Prepare(PolicyKind::kMatching, fs, V({3, 1})),
                  std::invalid_argument);
  FeasibilityStructure m = GeneralMatching(2, {{0, 1}});
  CHECK_THROWS_AS(Prepare(PolicyKind::kReductionGraphic, m, V({1})),
                  std::invalid_argument);
  CHECK_THROWS_AS(Prepare(PolicyKind::kReductionCustom, fs, V({3, 1})),
                  std::invalid_argument);
  CHECK_THROWS_AS(ParsePolicyKind("nope"), std::invalid_argument);
  CHECK(ParsePolicyKind("laminar") == PolicyKind::kLaminar);
  CHECK(ParseArrivalMode("exhaustive-min") == ArrivalMode::kExhaustiveMin);
}

TEST_CASE("partition validation") {
  FeasibilityStructure fs = TruncatedPartition::Rank1(3);
  std::vector<int> none;
  // Two groups in a rank-1 matroid: picking one from each is dependent.
  CHECK_THROWS_AS(ValidatePartition(fs, SimplePartition({0, 1, -1}, 2), none),
                  std::invalid_argument);
  CHECK_NOTHROW(ValidatePartition(fs, SimplePartition({0, 0, -1}, 1), none));
  std::vector<int> q{0};
  CHECK_THROWS_AS(ValidatePartition(fs, SimplePartition({0, 0, -1}, 1), q),
                  std::invalid_argument);
}

TEST_CASE("exhaustive order cap") {
  FeasibilityStructure fs = TruncatedPartition({0, 0, 0, 0, 0, 0, 0, 0, 0},
                                               {2}, 2);
  auto samples = V({1, 2, 3, 4, 5, 6, 7, 8, 9});
  auto p = Prepare(PolicyKind::kLaminar, fs, samples);
  CHECK_THROWS_AS(AdversarialOrder(*p, samples, ArrivalMode::kExhaustiveMin),
                  CapExceeded);
}

TEST_CASE("order search matches brute force and never accepts a Z-value") {
  Rng rng = StreamFor(201, 0);
  for (int trial = 0; trial < 150; ++trial) {
    int n = t::Uniform(rng, 1, 6);
    auto rz = t::RandomRealizations(n, rng);
    std::vector<std::pair<PolicyKind, FeasibilityStructure>> cases{
        {PolicyKind::kRank1, TruncatedPartition::Rank1(n)},
        {PolicyKind::kMatching, t::RandomMatching(5, n, rng)},
        {PolicyKind::kTransversal, t::RandomTransversal(3, n, rng)},
        {PolicyKind::kLaminar, t::RandomTruncatedPartition(n, rng)},
        {PolicyKind::kReductionGraphic, t::RandomGraphic(4, n, rng)}};
    uint64_t mask = rng() & ((uint64_t{1} << n) - 1);
    std::vector<TaggedValue> rewards, samples;
    t::SplitByMask(rz, mask, rewards, samples);
    for (const auto& [kind, fs] : cases) {
      Rng prng = StreamFor(202, trial);
      auto p = PreparePolicy(kind, fs, samples, prng);
      double brute = t::BruteMinOverOrders(*p, rewards);
      auto search = MinOverOrders(*p, rewards);
      CHECK(search.value == brute);
      CHECK(search.z_violations == 0);
      CHECK(Total(*p, rewards, search.order) == brute);
      if (auto closed = p->ClosedFormMin(rewards)) CHECK(*closed == brute);

      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      auto trace = RunPolicy(*p, rewards, order);
      CHECK(t::BruteIndependent(fs, trace.chosen.chosen));
      for (int e : trace.chosen.chosen) CHECK(rewards[e] > samples[e]);
    }
  }
}

TEST_CASE("offers do not mutate and commits revert") {
  Rng rng = StreamFor(203, 0);
  for (int trial = 0; trial < 50; ++trial) {
    int n = t::Uniform(rng, 2, 6);
    FeasibilityStructure fs = t::RandomTruncatedPartition(n, rng);
    auto samples = t::RandomWeights(n, rng);
    auto rewards = t::RandomWeights(n, rng);
    auto p = Prepare(PolicyKind::kLaminar, fs, samples);
    auto state = p->InitialState();
    for (int e = 0; e < n; ++e) {
      RewardProbe probe(rewards[e]);
      auto before = state.accepted;
      auto d = p->Offer(state, e, probe);
      CHECK(state.accepted == before);
      if (!d.accepted) continue;
      auto snapshot = state;
      p->Commit(state, e, d);
      CHECK(state.accepted.back() == e);
      p->Revert(state, e, d);
      CHECK(state.load == snapshot.load);
      CHECK(state.accepted == snapshot.accepted);
      CHECK(state.slot_of == snapshot.slot_of);
      p->Commit(state, e, d);
    }
  }
}
