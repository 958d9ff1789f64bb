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

#include <map>
#include <set>

#include "sspi/core.h"
#include "support/random_instances.h"

using namespace sspi;

TEST_CASE("tagged values order by value, then token, then element") {
  auto a = MakeTaggedValue(5.0, 0.3, 1);
  CHECK(Compare(a, MakeTaggedValue(5.0, 0.7, 2)) == std::strong_ordering::less);
  CHECK(Compare(a, MakeTaggedValue(4.0, 0.9, 2)) ==
        std::strong_ordering::greater);
  CHECK(Compare(a, MakeTaggedValue(5.0, 0.3, 2)) == std::strong_ordering::less);
  CHECK(Compare(a, a) == std::strong_ordering::equal);
}

TEST_CASE("tagged value validation") {
  CHECK_THROWS_AS(MakeTaggedValue(-1.0, 0.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(MakeTaggedValue(1.0, 1.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(MakeTaggedValue(1.0, 0.5, -1), std::invalid_argument);
  CHECK_THROWS_AS(MakeTaggedValue(std::nan(""), 0.5, 0), std::invalid_argument);
}

TEST_CASE("point mass draws tie on value and split on token") {
  Rng rng = StreamFor(3, 0);
  for (int i = 0; i < 50; ++i) {
    auto r = DrawRealization(0, Distribution::Point(7), rng);
    CHECK(r.y.value == 7);
    CHECK(r.z.value == 7);
    CHECK(r.y.tiebreak > r.z.tiebreak);
  }
}

TEST_CASE("continuous draws are relabeled so y > z") {
  Rng rng = StreamFor(11, 0);
  for (int i = 0; i < 1000; ++i) {
    auto r = DrawRealization(2, Distribution::UniformLaw(0, 1), rng);
    CHECK(r.z < r.y);
    CHECK(r.y.element == 2);
  }
}

TEST_CASE("discrete two-point law gives (2,1) half the time") {
  Rng rng = StreamFor(5, 0);
  auto d = Distribution::DiscreteLaw({1, 2}, {0.5, 0.5});
  int hits = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    auto r = DrawRealization(0, d, rng);
    hits += r.y.value == 2 && r.z.value == 1;
  }
  CHECK(hits / double(draws) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("distribution validation") {
  CHECK_THROWS(Distribution::DiscreteLaw({1, 2}, {0.5}));
  CHECK_THROWS(Distribution::DiscreteLaw({1, 2}, {0.7, 0.7}));
  CHECK_THROWS(Distribution::UniformLaw(2, 1));
  CHECK_THROWS(Distribution::ExponentialLaw(0));
  CHECK_THROWS(Distribution::Point(-1));
  CHECK(Distribution::ExponentialLaw(1).mhr());
  CHECK_FALSE(Distribution::DiscreteLaw({1, 2}, {0.5, 0.5}).mhr());
}

TEST_CASE("realizations reject identical draws and foreign ids") {
  auto a = MakeTaggedValue(3, 0.5, 0);
  CHECK_THROWS_AS(MakeRealization(0, a, a), std::invalid_argument);
  CHECK_THROWS_AS(MakeRealization(0, a, MakeTaggedValue(2, 0.5, 1)),
                  std::invalid_argument);
  auto r = MakeRealization(0, MakeTaggedValue(2, 0.1, 0), a);
  CHECK(r.y.value == 3);
  CHECK(r.z.value == 2);
}

TEST_CASE("deferred decision: heads makes Y the reward") {
  std::vector<ElementRealization> rz{FixedRealization(0, 5, 2)};
  auto path = SamplePath::Build(rz);
  auto heads = Split(path, Configuration::FromMask(path, 0));
  CHECK(heads.rewards[0].value == 5);
  CHECK(heads.samples[0].value == 2);
  auto tails = Split(path, Configuration::FromMask(path, 1));
  CHECK(tails.rewards[0].value == 2);
  CHECK(tails.samples[0].value == 5);
}

TEST_CASE("coin assignment is uniform over configurations") {
  std::vector<ElementRealization> rz{FixedRealization(0, 5, 2),
                                     FixedRealization(1, 4, 1)};
  Rng rng = StreamFor(17, 0);
  std::map<std::pair<double, double>, int> seen;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    auto a = AssignCoins(rz, rng);
    ++seen[{a.values.rewards[0].value, a.values.rewards[1].value}];
  }
  CHECK(seen.size() == 4);
  for (const auto& [key, count] : seen) {
    CHECK(count / double(trials) == doctest::Approx(0.25).epsilon(0.04));
  }
}

TEST_CASE("sample path sorts all 2n values decreasingly") {
  std::vector<ElementRealization> rz{FixedRealization(0, 10, 3),
                                     FixedRealization(1, 7, 1)};
  auto path = SamplePath::Build(rz);
  REQUIRE(path.size() == 4);
  std::vector<double> w;
  std::vector<int> el;
  std::vector<bool> y;
  for (int j = 0; j < 4; ++j) {
    w.push_back(path.value(j));
    el.push_back(path.element(j));
    y.push_back(path.is_y(j));
  }
  CHECK(w == std::vector<double>{10, 7, 3, 1});
  CHECK(el == std::vector<int>{0, 1, 0, 1});
  CHECK(y == std::vector<bool>{true, true, false, false});

  std::vector<ElementRealization> one{FixedRealization(0, 10, 3)};
  auto p1 = SamplePath::Build(one);
  CHECK(p1.partner(0) == 1);
  CHECK(p1.partner(1) == 0);

  std::vector<ElementRealization> swapped{FixedRealization(0, 2, 1),
                                          FixedRealization(1, 4, 3)};
  auto p2 = SamplePath::Build(swapped);
  CHECK(p2.element(0) == 1);
  CHECK(p2.element(1) == 1);
  CHECK(p2.element(2) == 0);
  CHECK(p2.element(3) == 0);
}

TEST_CASE("sample path rejects bad element sets") {
  std::vector<ElementRealization> none;
  CHECK_THROWS_AS(SamplePath::Build(none), std::invalid_argument);
  std::vector<ElementRealization> gap{FixedRealization(0, 2, 1),
                                      FixedRealization(2, 4, 3)};
  CHECK_THROWS_AS(SamplePath::Build(gap), std::invalid_argument);
}

TEST_CASE("enumeration yields 2^n distinct complementary configurations") {
  for (int n = 1; n <= 3; ++n) {
    Rng rng = StreamFor(n, 0);
    auto rz = testing::RandomRealizations(n, rng);
    auto path = SamplePath::Build(rz);
    auto range = EnumerateConfigurations(path);
    CHECK(range.size() == (uint64_t{1} << n));
    std::set<std::vector<Coin>> distinct;
    for (const Configuration& c : range) {
      for (int j = 0; j < path.size(); ++j) {
        CHECK(c[j] != c[path.partner(j)]);
      }
      distinct.insert(c.coins());
    }
    CHECK(distinct.size() == range.size());
  }
  std::vector<ElementRealization> one{FixedRealization(0, 5, 2)};
  auto path = SamplePath::Build(one);
  std::vector<std::vector<Coin>> got;
  for (const Configuration& c : EnumerateConfigurations(path)) {
    got.push_back(c.coins());
  }
  CHECK(got == std::vector<std::vector<Coin>>{{Coin::kHeads, Coin::kTails},
                                             {Coin::kTails, Coin::kHeads}});
}

TEST_CASE("configurations beyond 64 elements") {
  const int n = 100;
  std::vector<ElementRealization> rz;
  for (int e = 0; e < n; ++e) rz.push_back(FixedRealization(e, 2 + e, 1));
  auto path = SamplePath::Build(rz);
  std::vector<Coin> coins(n, Coin::kHeads);
  coins[70] = Coin::kTails;
  auto c = Configuration::FromElementCoins(path, coins);
  auto v = Split(path, c);
  CHECK(v.rewards[70].value == 1);
  CHECK(v.samples[70].value == 72);
  CHECK(v.rewards[5].value == 7);
  CHECK_THROWS(Configuration::FromMask(path, 1));
  CHECK_THROWS_AS(EnumerateConfigurations(path), CapExceeded);
}

TEST_CASE("configuration rejects agreeing coins") {
  std::vector<ElementRealization> one{FixedRealization(0, 5, 2)};
  auto path = SamplePath::Build(one);
  CHECK_THROWS_AS(Configuration(path, {Coin::kHeads, Coin::kHeads}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Configuration(path, {Coin::kHeads}), std::invalid_argument);
}

TEST_CASE("streams depend only on seed and index") {
  Rng a = StreamFor(9, 4), b = StreamFor(9, 4), c = StreamFor(9, 5);
  auto x = a();
  CHECK(x == b());
  CHECK(x != c());
}

TEST_CASE("rationals reduce and compare") {
  CHECK(Rational(2, 8) == Rational(1, 4));
  CHECK(Rational(1, 4).ToString() == "1/4");
  CHECK(Rational(1, 4) + Rational(1, 4) == Rational(1, 2));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK_THROWS(Rational(1, 0));
  CHECK(ExactCount{3, 2}.ToString() == "3/2^2");
  CHECK(ExactCount{3, 2}.ToDouble() == 0.75);
}
